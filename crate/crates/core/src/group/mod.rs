//! Prime-order group arithmetic over Ristretto255.

mod dlog;
mod fixed;
mod generators;
mod msm;
pub mod ops;
mod point;
mod scalar;

pub use dlog::{dlog_bounded, DlogTable};
pub use fixed::{decode_fixed, encode_fixed, FixedPoint};
pub use generators::{derive_generators, GeneratorSet, RangeGenerators};
pub use msm::{multiexp, multiexp_small};
pub use point::Point;
pub use scalar::{inner_product, Scalar};
