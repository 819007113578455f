//! Client and server roles of a round: commitment, share authenticity and
//! flagging, the proof round, and opening of the aggregate.

mod client;
mod defense;
mod flags;
mod keys;
mod messages;
mod server;
mod session;

/// Clients are numbered `1..=n`; `0` denotes the server.
pub type ClientId = u32;

pub use client::{ClientStage, ClientState};
pub use defense::{convert_defense, DefenseCheck, DefensePredicate};
pub use flags::{resolve_flags, FlagResolution, MaliciousReason};
pub use keys::{open_share, seal_share, KeyPair};
pub use messages::{Envelope, Message, RelayedShare, SERVER};
pub use server::{compute_h, ServerState};
pub use session::{predicted_client_bytes, Adversary, Honest, Network, RoundOutcome, Session, StageOps, StageTimings};
