//! Secure aggregation with verified inputs.
//!
//! Clients commit to fixed-point model updates under a Pedersen vector
//! commitment whose single blind is Shamir-shared among peers, prove in zero
//! knowledge that a set of random Gaussian projections of the update has a
//! bounded sum of squares, and the server opens only the sum of the updates
//! that pass.

pub mod commit;
pub mod error;
pub mod group;
pub mod protocol;
pub mod sampling;
pub mod transcript;
pub mod vsss;
pub mod wire;
pub mod zkp;


pub use error::{Error, Result};
