//! Server-side resolution of the flag matrix.

use std::collections::{BTreeMap, BTreeSet};

use super::ClientId;

/// Why the server placed a client in the malicious set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaliciousReason {
    NoCommitment,
    MalformedBundle,
    /// Flagged more than `m` peers.
    OverFlagging(usize),
    /// Flagged by more than `m` peers.
    FlaggedByMany(usize),
    NoFlags,
    ClearShareMissing,
    ClearShareInvalid(ClientId),
    NoProof,
    Aborted(String),
    ProofRejected(crate::zkp::ProofFailure),
}

impl std::fmt::Display for MaliciousReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MaliciousReason::NoCommitment => f.write_str("no-commitment"),
            MaliciousReason::MalformedBundle => f.write_str("malformed-bundle"),
            MaliciousReason::OverFlagging(c) => write!(f, "flagged-{c}-peers"),
            MaliciousReason::FlaggedByMany(c) => write!(f, "flagged-by-{c}-peers"),
            MaliciousReason::NoFlags => f.write_str("no-flag-list"),
            MaliciousReason::ClearShareMissing => f.write_str("clear-share-missing"),
            MaliciousReason::ClearShareInvalid(j) => write!(f, "clear-share-invalid-for-{j}"),
            MaliciousReason::NoProof => f.write_str("no-proof"),
            MaliciousReason::Aborted(r) => write!(f, "aborted:{r}"),
            MaliciousReason::ProofRejected(p) => write!(f, "proof-{p}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlagResolution {
    pub malicious: BTreeMap<ClientId, MaliciousReason>,
    /// Target client → flaggers whose shares it must reveal in clear.
    pub requests: BTreeMap<ClientId, Vec<ClientId>>,
}

/// Applies both flag rules.
///
/// Rule 1 marks any client that flags more than `m` peers or is flagged by
/// more than `m` peers. Rule 2 asks every remaining flagged client for the
/// clear shares of exactly its flaggers. Flags raised by a client excluded
/// under Rule 1 still count toward Rule 1 but trigger no requests, since that
/// client receives no further material.
pub fn resolve_flags(flags: &BTreeMap<ClientId, BTreeSet<ClientId>>, m: usize) -> FlagResolution {
    let mut flagged_by: BTreeMap<ClientId, BTreeSet<ClientId>> = BTreeMap::new();
    for (&from, targets) in flags {
        for &t in targets {
            if t != from {
                flagged_by.entry(t).or_default().insert(from);
            }
        }
    }
    let mut out = FlagResolution::default();
    for (&from, targets) in flags {
        let count = targets.iter().filter(|&&t| t != from).count();
        if count > m {
            out.malicious.insert(from, MaliciousReason::OverFlagging(count));
        }
    }
    for (&target, by) in &flagged_by {
        if by.len() > m {
            out.malicious.entry(target).or_insert(MaliciousReason::FlaggedByMany(by.len()));
        }
    }
    for (&target, by) in &flagged_by {
        if out.malicious.contains_key(&target) {
            continue;
        }
        let live: Vec<ClientId> = by.iter().copied().filter(|f| !out.malicious.contains_key(f)).collect();
        if !live.is_empty() {
            out.requests.insert(target, live);
        }
    }
    out
}
