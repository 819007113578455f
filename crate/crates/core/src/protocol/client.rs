//! The client state machine.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{CryptoRng, RngCore};

use super::keys::{open_share, seal_share, KeyPair};
use super::messages::RelayedShare;
use super::ClientId;
use crate::commit::{commit_update, CommitmentBundle, EncryptedShare};
use crate::error::{Error, Result};
use crate::group::{GeneratorSet, Point, Scalar};
use crate::sampling::{derive_seed, sample_matrix, CheckParameters};
use crate::vsss::{ss_share, ss_verify, CheckString, Share};
use crate::zkp::{forge_integrity_proof, gen_integrity_proof, ver_crt, IntegrityProof};

/// Progress of a client within one round. Transitions only move forward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClientStage {
    Idle,
    Committed,
    SharesChecked,
    Proved,
    Done,
    Aborted,
}

/// Per-round secrets and received material.
struct RoundState {
    u: Vec<i64>,
    r: Scalar,
    z: Point,
    /// Shares of this client's own blind, indexed by recipient − 1.
    outgoing: Vec<Share>,
    /// Peer → its check string and the share it dealt to this client.
    received: BTreeMap<ClientId, (CheckString, Option<Share>)>,
    flags: BTreeSet<ClientId>,
    clear_served: usize,
}

pub struct ClientState {
    pub id: ClientId,
    params: Arc<CheckParameters>,
    gens: Arc<GeneratorSet>,
    keypair: KeyPair,
    registry: Arc<Vec<Point>>,
    pairwise: Vec<[u8; 32]>,
    /// Whether this client forges proofs for out-of-bound updates.
    cheat: bool,
    round: u32,
    stage: ClientStage,
    state: Option<RoundState>,
}

impl ClientState {
    /// `registry[i]` is the public key of client `i + 1`.
    pub fn new(
        id: ClientId,
        params: Arc<CheckParameters>,
        gens: Arc<GeneratorSet>,
        keypair: KeyPair,
        registry: Arc<Vec<Point>>,
    ) -> Self {
        let pairwise = registry
            .iter()
            .enumerate()
            .map(|(j, pk)| keypair.pairwise_key(id, j as ClientId + 1, pk))
            .collect();
        ClientState {
            id,
            params,
            gens,
            keypair,
            registry,
            pairwise,
            cheat: false,
            round: 0,
            stage: ClientStage::Idle,
            state: None,
        }
    }

    pub fn set_cheating(&mut self, cheat: bool) {
        self.cheat = cheat;
    }

    pub fn public_key(&self) -> Point {
        self.keypair.pk
    }

    pub fn stage(&self) -> ClientStage {
        self.stage
    }

    pub fn flags(&self) -> Vec<ClientId> {
        self.state.as_ref().map(|s| s.flags.iter().copied().collect()).unwrap_or_default()
    }

    /// Number of own shares revealed in clear this round.
    pub fn clear_shares_served(&self) -> usize {
        self.state.as_ref().map_or(0, |s| s.clear_served)
    }

    pub fn begin_round(&mut self, round: u32) {
        self.round = round;
        self.stage = ClientStage::Idle;
        self.state = None;
    }

    fn expect(&self, stage: ClientStage, op: &str) -> Result<()> {
        if self.stage != stage {
            return Err(Error::Stage(format!("client {} cannot {op} at {:?}", self.id, self.stage)));
        }
        Ok(())
    }

    fn abort(&mut self, reason: &str) -> Error {
        self.stage = ClientStage::Aborted;
        Error::AbortServerMalicious(reason.into())
    }

    fn n(&self) -> usize {
        self.registry.len()
    }

    fn round_state(&self) -> &RoundState {
        self.state.as_ref().expect("round state exists past Idle")
    }

    /// Commits to `u` under a fresh blind and deals the blind to all peers.
    pub fn commit<R: RngCore + CryptoRng + ?Sized>(&mut self, u: &[i64], rng: &mut R) -> Result<CommitmentBundle> {
        self.expect(ClientStage::Idle, "commit")?;
        let bits = self.params.coord_bits;
        if let Some(&bad) = u.iter().find(|x| x.unsigned_abs() > self.params.coord_max() as u64) {
            return Err(Error::FixedPointOverflow { value: bad.to_string(), bits });
        }
        let r = Scalar::random(rng);
        let (y, z) = commit_update(u, &r, &self.gens)?;
        let (n, t) = (self.n(), self.params.threshold());
        let (outgoing, check_string) = ss_share(r, n, t, &self.gens.g, rng)?;
        let mut shares = Vec::with_capacity(n - 1);
        for s in &outgoing {
            let to = s.index;
            if to != self.id {
                let key = &self.pairwise[to as usize - 1];
                shares.push(EncryptedShare { to, ciphertext: seal_share(key, self.round, self.id, to, &s.value)? });
            }
        }
        let mut received = BTreeMap::new();
        received.insert(self.id, (check_string.clone(), Some(outgoing[self.id as usize - 1])));
        self.state = Some(RoundState {
            u: u.to_vec(),
            r,
            z,
            outgoing,
            received,
            flags: BTreeSet::new(),
            clear_served: 0,
        });
        self.stage = ClientStage::Committed;
        Ok(CommitmentBundle { y, z, shares, check_string })
    }

    /// Decrypts and checks each peer's share; returns the peers to flag.
    pub fn verify_shares(&mut self, incoming: &[RelayedShare]) -> Result<Vec<ClientId>> {
        self.expect(ClientStage::Committed, "verify shares")?;
        let (n, t, g, id, round) = (self.n(), self.params.threshold(), self.gens.g, self.id, self.round);
        let pairwise = &self.pairwise;
        let st = self.state.as_mut().expect("committed");
        for rel in incoming {
            let from = rel.from;
            if from == id || from == 0 || from as usize > n || st.received.contains_key(&from) {
                continue;
            }
            let share = rel
                .ciphertext
                .as_ref()
                .and_then(|ct| open_share(&pairwise[from as usize - 1], round, from, id, ct))
                .map(|value| Share { index: id, value })
                .filter(|s| ss_verify(&rel.check_string, s, n, t, &g));
            if share.is_none() {
                st.flags.insert(from);
            }
            st.received.insert(from, (rel.check_string.clone(), share));
        }
        self.stage = ClientStage::SharesChecked;
        Ok(st.flags.iter().copied().collect())
    }

    /// Reveals the shares dealt to `flaggers`, or aborts if the server asks
    /// for more than `m` of them.
    pub fn respond_clear_shares(&mut self, flaggers: &[ClientId]) -> Result<Vec<Share>> {
        self.expect(ClientStage::SharesChecked, "reveal shares")?;
        if flaggers.len() > self.params.m {
            return Err(self.abort("too many clear-share requests"));
        }
        let n = self.n();
        if flaggers.iter().any(|&f| f == 0 || f as usize > n || f == self.id) {
            return Err(self.abort("clear-share request for an invalid index"));
        }
        let st = self.state.as_mut().expect("shares checked");
        st.clear_served += flaggers.len();
        Ok(flaggers.iter().map(|&f| st.outgoing[f as usize - 1]).collect())
    }

    /// Accepts a share the server obtained in clear from `from`. Returns
    /// whether it verified against that peer's check string.
    pub fn receive_forwarded_share(&mut self, from: ClientId, share: Share) -> Result<bool> {
        if self.stage < ClientStage::SharesChecked || self.stage == ClientStage::Aborted {
            return Err(Error::Stage(format!("client {} got a forwarded share at {:?}", self.id, self.stage)));
        }
        let (n, t, g, id) = (self.n(), self.params.threshold(), self.gens.g, self.id);
        let st = self.state.as_mut().expect("shares checked");
        let Some((psi, slot)) = st.received.get_mut(&from) else { return Ok(false) };
        if share.index != id || !ss_verify(psi, &share, n, t, &g) {
            return Ok(false);
        }
        *slot = Some(share);
        Ok(true)
    }

    /// Checks the server's `h` against the shared-seed matrix and proves the
    /// committed update passes the norm check.
    pub fn prove<R: RngCore + CryptoRng + ?Sized>(&mut self, s: &[u8], h: &[Point], rng: &mut R) -> Result<IntegrityProof> {
        self.expect(ClientStage::SharesChecked, "prove")?;
        let p = &self.params;
        let a = sample_matrix(&derive_seed(s, &self.registry), p.k, p.d, p.m_scale);
        if !ver_crt(&self.gens.w, h, &a, rng) {
            return Err(self.abort("h is inconsistent with the sampled matrix"));
        }
        let st = self.round_state();
        let honest = gen_integrity_proof(p, &self.gens, &a, h, &st.z, &st.r, &st.u, rng);
        let proof = match honest {
            Err(Error::BoundExceeded) | Err(Error::RangeValueOutOfRange { .. }) if self.cheat => {
                forge_integrity_proof(p, &self.gens, &a, h, &st.z, &st.r, &st.u, rng)?
            }
            other => other?,
        };
        self.stage = ClientStage::Proved;
        Ok(proof)
    }

    /// `r'_i = Σ_{j ∈ ℋ} r_ji`. Clients outside ℋ may answer too, as they
    /// still hold shares of the members' blinds.
    pub fn aggregate_share(&mut self, honest: &[ClientId]) -> Result<Share> {
        if !matches!(self.stage, ClientStage::SharesChecked | ClientStage::Proved) {
            return Err(Error::Stage(format!("client {} cannot aggregate at {:?}", self.id, self.stage)));
        }
        let st = self.round_state();
        let mut value = Scalar::ZERO;
        for j in honest {
            match st.received.get(j) {
                Some((_, Some(share))) => value += share.value,
                _ => return Err(Error::Stage(format!("client {} holds no valid share from {j}", self.id))),
            }
        }
        self.stage = ClientStage::Done;
        Ok(Share { index: self.id, value })
    }
}
