//! Zero-knowledge proofs: Σ-protocols with batched verification, aggregated
//! range proofs, and the composed integrity proof.

mod crt;
mod integrity;
mod range;
mod square;
mod wellformed;

pub use crt::ver_crt;
pub use integrity::{
    forge_integrity_proof, gen_integrity_proof, ver_integrity_proof, IntegrityProof, ProofFailure,
};
pub use range::{forge_prf_bd, gen_prf_bd, ver_prf_bd, RangeProof};
pub use square::{gen_prf_sq, ver_prf_sq, SquareProof};
pub use wellformed::{gen_prf_wf, ver_prf_wf, WellFormedProof};
