//! The server state machine.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{CryptoRng, RngCore};

use super::flags::{resolve_flags, MaliciousReason};
use super::messages::RelayedShare;
use super::ClientId;
use crate::commit::{aggregate_commitments, CommitmentBundle};
use crate::error::{Error, Result};
use crate::group::{multiexp, multiexp_small, DlogTable, GeneratorSet, Point};
use crate::sampling::{derive_seed, sample_matrix, CheckParameters, SampleMatrix};
use crate::vsss::{combine_check_strings, ss_recover, ss_verify, Share};
use crate::zkp::{ver_integrity_proof, IntegrityProof};

/// `h_t = ∏_l w_l^{a_tl}` for `t = 0..k`.
pub fn compute_h(w: &[Point], a: &SampleMatrix) -> Result<Vec<Point>> {
    let mut h = Vec::with_capacity(a.k() + 1);
    h.push(multiexp(w, &a.a0)?);
    for row in &a.rows {
        h.push(multiexp_small(w, row)?);
    }
    Ok(h)
}

pub struct ServerState {
    params: Arc<CheckParameters>,
    gens: Arc<GeneratorSet>,
    registry: Arc<Vec<Point>>,
    bundles: BTreeMap<ClientId, CommitmentBundle>,
    flags: BTreeMap<ClientId, BTreeSet<ClientId>>,
    malicious: BTreeMap<ClientId, MaliciousReason>,
    pending: BTreeMap<ClientId, Vec<ClientId>>,
    clear_requests: BTreeMap<ClientId, Vec<ClientId>>,
    matrix: Option<(SampleMatrix, Vec<Point>)>,
    proofs: BTreeMap<ClientId, IntegrityProof>,
    honest: Vec<ClientId>,
}

impl ServerState {
    pub fn new(params: Arc<CheckParameters>, gens: Arc<GeneratorSet>, registry: Arc<Vec<Point>>) -> Self {
        ServerState {
            params,
            gens,
            registry,
            bundles: BTreeMap::new(),
            flags: BTreeMap::new(),
            malicious: BTreeMap::new(),
            pending: BTreeMap::new(),
            clear_requests: BTreeMap::new(),
            matrix: None,
            proofs: BTreeMap::new(),
            honest: Vec::new(),
        }
    }

    pub fn begin_round(&mut self) {
        *self = ServerState::new(self.params.clone(), self.gens.clone(), self.registry.clone());
    }

    fn n(&self) -> usize {
        self.registry.len()
    }

    fn ids(&self) -> impl Iterator<Item = ClientId> {
        1..=self.n() as ClientId
    }

    pub fn malicious(&self) -> &BTreeMap<ClientId, MaliciousReason> {
        &self.malicious
    }

    pub fn is_malicious(&self, id: ClientId) -> bool {
        self.malicious.contains_key(&id)
    }

    /// Clear-share requests sent this round: target → flaggers.
    pub fn clear_requests(&self) -> &BTreeMap<ClientId, Vec<ClientId>> {
        &self.clear_requests
    }

    pub fn honest(&self) -> &[ClientId] {
        &self.honest
    }

    pub fn bundle(&self, id: ClientId) -> Option<&CommitmentBundle> {
        self.bundles.get(&id)
    }

    fn mark(&mut self, id: ClientId, reason: MaliciousReason) {
        self.malicious.entry(id).or_insert(reason);
    }

    fn live(&self) -> Vec<ClientId> {
        self.ids().filter(|i| !self.is_malicious(*i)).collect()
    }

    fn well_formed(&self, from: ClientId, b: &CommitmentBundle) -> bool {
        let n = self.n();
        let recipients: BTreeSet<ClientId> = b.shares.iter().map(|s| s.to).collect();
        b.y.len() == self.params.d
            && b.check_string.points.len() == self.params.threshold()
            && b.z == b.check_string.secret_commitment()
            && b.shares.len() == n - 1
            && recipients.len() == n - 1
            && recipients.iter().all(|&to| to != from && to >= 1 && to as usize <= n)
    }

    pub fn receive_commit(&mut self, from: ClientId, bundle: CommitmentBundle) {
        if from == 0 || from as usize > self.n() || self.bundles.contains_key(&from) {
            return;
        }
        if self.well_formed(from, &bundle) {
            self.bundles.insert(from, bundle);
        } else {
            self.mark(from, MaliciousReason::MalformedBundle);
        }
    }

    /// Marks non-committers and returns, for every live client, the
    /// material dealt to it by the other live clients.
    pub fn close_commit_round(&mut self) -> BTreeMap<ClientId, Vec<RelayedShare>> {
        for id in self.ids().collect::<Vec<_>>() {
            if !self.bundles.contains_key(&id) {
                self.mark(id, MaliciousReason::NoCommitment);
            }
        }
        let live = self.live();
        live.iter()
            .map(|&to| {
                let relays = live
                    .iter()
                    .filter(|&&from| from != to)
                    .map(|&from| {
                        let b = &self.bundles[&from];
                        RelayedShare {
                            from,
                            check_string: b.check_string.clone(),
                            ciphertext: b.shares.iter().find(|s| s.to == to).map(|s| s.ciphertext.clone()),
                        }
                    })
                    .collect();
                (to, relays)
            })
            .collect()
    }

    pub fn receive_flags(&mut self, from: ClientId, flags: Vec<ClientId>) {
        if self.is_malicious(from) || from == 0 || from as usize > self.n() {
            return;
        }
        self.flags.insert(from, flags.into_iter().filter(|&j| j != from).collect());
    }

    /// Applies both flag rules; returns the clear-share requests to send.
    pub fn close_flag_round(&mut self) -> BTreeMap<ClientId, Vec<ClientId>> {
        for id in self.live() {
            if !self.flags.contains_key(&id) {
                self.mark(id, MaliciousReason::NoFlags);
            }
        }
        let live: BTreeSet<ClientId> = self.live().into_iter().collect();
        let matrix: BTreeMap<ClientId, BTreeSet<ClientId>> =
            self.flags.iter().filter(|(f, _)| live.contains(f)).map(|(f, t)| (*f, t.clone())).collect();
        let res = resolve_flags(&matrix, self.params.m);
        for (id, reason) in res.malicious {
            self.mark(id, reason);
        }
        self.pending = res.requests.into_iter().filter(|(t, _)| !self.is_malicious(*t)).collect();
        self.clear_requests = self.pending.clone();
        self.pending.clone()
    }

    /// Checks the clear shares revealed by `target`; returns
    /// `(flagger, share)` pairs to forward when all of them verify.
    pub fn receive_clear_shares(&mut self, target: ClientId, shares: &[Share]) -> Vec<(ClientId, Share)> {
        let Some(flaggers) = self.pending.remove(&target) else { return Vec::new() };
        let (n, t, g) = (self.n(), self.params.threshold(), self.gens.g);
        let psi = &self.bundles[&target].check_string;
        for &f in &flaggers {
            let ok = shares.iter().any(|s| s.index == f && ss_verify(psi, s, n, t, &g));
            if !ok {
                self.mark(target, MaliciousReason::ClearShareInvalid(f));
                return Vec::new();
            }
        }
        flaggers
            .iter()
            .map(|&f| (f, *shares.iter().find(|s| s.index == f).expect("verified above")))
            .collect()
    }

    pub fn close_clear_round(&mut self) {
        for target in std::mem::take(&mut self.pending).into_keys() {
            self.mark(target, MaliciousReason::ClearShareMissing);
        }
    }

    /// Samples a fresh seed, derives `A` and computes `h`.
    pub fn proof_request<R: RngCore + CryptoRng + ?Sized>(&mut self, rng: &mut R) -> Result<([u8; 32], Vec<Point>)> {
        let mut s = [0u8; 32];
        rng.fill_bytes(&mut s);
        let p = &self.params;
        let a = sample_matrix(&derive_seed(&s, &self.registry), p.k, p.d, p.m_scale);
        let h = compute_h(&self.gens.w, &a)?;
        self.matrix = Some((a, h.clone()));
        Ok((s, h))
    }

    pub fn malicious_ids(&self) -> Vec<ClientId> {
        self.malicious.keys().copied().collect()
    }

    pub fn receive_proof(&mut self, from: ClientId, proof: IntegrityProof) {
        if !self.is_malicious(from) && self.bundles.contains_key(&from) {
            self.proofs.insert(from, proof);
        }
    }

    pub fn receive_abort(&mut self, from: ClientId, reason: String) {
        self.mark(from, MaliciousReason::Aborted(reason));
    }

    /// Verifies the proofs of all live clients; returns ℋ.
    pub fn verify_round<R: RngCore + CryptoRng + ?Sized>(&mut self, rng: &mut R) -> Result<Vec<ClientId>> {
        let (a, h) = self.matrix.take().ok_or_else(|| Error::Stage("verify before proof request".into()))?;
        let mut honest = Vec::new();
        for id in self.live() {
            let Some(proof) = self.proofs.get(&id) else {
                self.mark(id, MaliciousReason::NoProof);
                continue;
            };
            let b = &self.bundles[&id];
            match ver_integrity_proof(&self.params, &self.gens, &a, &h, &b.z, &b.y, proof, rng) {
                Ok(()) => honest.push(id),
                Err(f) => self.mark(id, MaliciousReason::ProofRejected(f)),
            }
        }
        self.matrix = Some((a, h));
        self.honest = honest.clone();
        Ok(honest)
    }

    /// Checks `r'_i` against `∏_{j∈ℋ} Ψ_j` at index `i`.
    pub fn verify_aggregate_share(&self, from: ClientId, share: &Share) -> Result<()> {
        let psis: Vec<_> = self.honest.iter().map(|j| &self.bundles[j].check_string).collect();
        let combined = combine_check_strings(&psis)?;
        if share.index != from || !ss_verify(&combined, share, self.n(), self.params.threshold(), &self.gens.g) {
            return Err(Error::ShareVerifyFailed(from));
        }
        Ok(())
    }

    /// Opens `Σ_{i∈ℋ} u_i` from the aggregated blind shares. Shares that
    /// fail verification are skipped and reported alongside the sum.
    pub fn aggregate(&self, shares: &BTreeMap<ClientId, Share>) -> Result<(Vec<i64>, Vec<ClientId>)> {
        let hset = &self.honest;
        if hset.is_empty() {
            return Err(Error::InsufficientShares { needed: 1, valid: 0 });
        }
        let (n, t, g) = (self.n(), self.params.threshold(), self.gens.g);
        let psis: Vec<_> = hset.iter().map(|j| &self.bundles[j].check_string).collect();
        let combined = combine_check_strings(&psis)?;
        let (valid, rejected): (Vec<_>, Vec<_>) = shares
            .iter()
            .partition(|(&i, s)| s.index == i && ss_verify(&combined, s, n, t, &g));
        if valid.len() < t {
            return Err(Error::InsufficientShares { needed: t, valid: valid.len() });
        }
        let rejected = rejected.into_iter().map(|(i, _)| *i).collect();
        let chosen: Vec<Share> = valid.iter().take(t).map(|(_, s)| **s).collect();
        let r = ss_recover(&chosen, t)?;
        let ys: Vec<&[Point]> = hset.iter().map(|j| self.bundles[j].y.as_slice()).collect();
        let sum = aggregate_commitments(&ys, self.params.d)?;
        let targets: Vec<Point> = sum.iter().zip(&self.gens.w).map(|(y, w)| *y - *w * r).collect();
        let bound = hset.len() as u64 * ((1u64 << self.params.coord_bits) - 1);
        DlogTable::new(g, bound)
            .solve_many(&targets)
            .into_iter()
            .enumerate()
            .map(|(l, v)| v.map_err(|_| Error::DlogOutOfRange { coordinate: l }))
            .collect::<Result<Vec<i64>>>()
            .map(|sum| (sum, rejected))
    }
}
