//! In-process driver for complete rounds, with hooks for injecting faults.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{CryptoRng, RngCore};

use super::client::ClientState;
use super::flags::MaliciousReason;
use super::keys::KeyPair;
use super::messages::{Envelope, Message, SERVER};
use super::server::ServerState;
use super::ClientId;
use crate::commit::CommitmentBundle;
use crate::error::{Error, Result};
use crate::group::ops::{self, OpCounts};
use crate::group::{GeneratorSet, Point};
use crate::sampling::CheckParameters;
use crate::vsss::Share;
use crate::zkp::IntegrityProof;

/// Deviations from honest behavior, applied to outgoing messages. Every
/// method defaults to leaving the message untouched.
pub trait Adversary {
    /// Clients that forge proofs when their update fails the check.
    fn cheating_clients(&self) -> BTreeSet<ClientId> {
        BTreeSet::new()
    }
    /// `None` drops the message.
    fn bundle(&mut self, _from: ClientId, _bundle: &mut Option<CommitmentBundle>) {}
    fn flags(&mut self, _from: ClientId, _flags: &mut Vec<ClientId>) {}
    fn clear_shares(&mut self, _from: ClientId, _shares: &mut Option<Vec<Share>>) {}
    /// Server side: requests sent to clients.
    fn clear_requests(&mut self, _requests: &mut BTreeMap<ClientId, Vec<ClientId>>) {}
    /// Server side: the `h` vector broadcast for the proof round.
    fn h(&mut self, _h: &mut Vec<Point>) {}
    fn proof(&mut self, _from: ClientId, _proof: &mut Option<IntegrityProof>) {}
    fn aggregate_share(&mut self, _from: ClientId, _share: &mut Option<Share>) {}
}

pub struct Honest;
impl Adversary for Honest {}

/// Records every message as an envelope and counts bytes per client.
#[derive(Default)]
pub struct Network {
    log: Vec<u8>,
    bytes: BTreeMap<ClientId, usize>,
}

impl Network {
    /// Serializes `msg`, logs it and returns what the recipient decodes.
    pub fn deliver(&mut self, from: ClientId, to: ClientId, msg: &Message) -> Result<Message> {
        let env = Envelope::new(from, to, msg);
        let len = env.encoded_len();
        for party in [from, to] {
            if party != SERVER {
                *self.bytes.entry(party).or_default() += len;
            }
        }
        env.encode_into(&mut self.log);
        env.message()
    }

    pub fn transcript(&self) -> &[u8] {
        &self.log
    }

    /// Bytes sent plus received per client, headers included.
    pub fn bytes(&self) -> &BTreeMap<ClientId, usize> {
        &self.bytes
    }
}

/// Wall-clock totals per stage, summed over parties.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub commit: Duration,
    pub proof_gen: Duration,
    pub proof_ver: Duration,
    pub prep: Duration,
    pub aggregation: Duration,
}

/// Group-operation counts per stage, summed over parties.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageOps {
    pub commit: OpCounts,
    pub proof_gen: OpCounts,
    pub proof_ver: OpCounts,
    pub prep: OpCounts,
    pub aggregation: OpCounts,
}

#[derive(Debug)]
pub struct RoundOutcome {
    pub round: u32,
    pub malicious: BTreeMap<ClientId, MaliciousReason>,
    pub honest: Vec<ClientId>,
    /// Flags each client raised.
    pub flags: BTreeMap<ClientId, Vec<ClientId>>,
    /// Target → flaggers whose shares the server requested in clear.
    pub clear_requests: BTreeMap<ClientId, Vec<ClientId>>,
    /// Clients that quit because the server misbehaved.
    pub client_aborts: BTreeMap<ClientId, String>,
    pub aggregate: Result<Vec<i64>>,
    /// Aggregated shares that failed verification and were skipped.
    pub rejected_shares: Vec<ClientId>,
    pub timings: StageTimings,
    pub ops: StageOps,
    pub bytes: BTreeMap<ClientId, usize>,
    pub transcript: Vec<u8>,
    /// Number of clients that produced a proof.
    pub provers: usize,
}

/// Bytes one client sends and receives in an honest round with `n` clients
/// and no flags, envelope headers included.
pub fn predicted_client_bytes(params: &CheckParameters, n: usize) -> usize {
    use crate::commit::EncryptedShare;
    use crate::vsss::CheckString;
    let t = params.threshold();
    let check_string = CheckString { points: vec![Point::identity(); t] };
    let ct = vec![0u8; 48];
    let bundle = CommitmentBundle {
        y: vec![Point::identity(); params.d],
        z: Point::identity(),
        shares: (0..n - 1).map(|_| EncryptedShare { to: 1, ciphertext: ct.clone() }).collect(),
        check_string: check_string.clone(),
    };
    let relays = (0..n - 1)
        .map(|_| super::RelayedShare { from: 1, check_string: check_string.clone(), ciphertext: Some(ct.clone()) })
        .collect();
    let share = Share { index: 1, value: crate::group::Scalar::ZERO };
    let ids: Vec<ClientId> = (1..=n as ClientId).collect();
    let payloads = [
        Message::Commit(Box::new(bundle)).payload().len(),
        Message::Shares(relays).payload().len(),
        Message::Flags(Vec::new()).payload().len(),
        Message::ProofRequest { s: [0; 32], h: vec![Point::identity(); params.k + 1], malicious: Vec::new() }
            .payload()
            .len(),
        IntegrityProof::encoded_len(params.k, params.b_ip, params.b_max),
        Message::AggregateRequest(ids).payload().len(),
        Message::AggregateShare(share).payload().len(),
    ];
    payloads.iter().map(|p| p + Envelope::HEADER_LEN).sum()
}

impl RoundOutcome {
    /// Per client, how many of its blind shares the server and `colluders`
    /// together can see: shares revealed in clear plus those dealt to colluders.
    pub fn exposure(&self, n: usize, colluders: &BTreeSet<ClientId>) -> BTreeMap<ClientId, usize> {
        (1..=n as ClientId)
            .map(|i| {
                let mut seen: BTreeSet<ClientId> = colluders.iter().copied().filter(|&c| c != i).collect();
                if let Some(req) = self.clear_requests.get(&i) {
                    seen.extend(req.iter().copied());
                }
                (i, seen.len())
            })
            .collect()
    }
}

pub struct Session {
    params: Arc<CheckParameters>,
    gens: Arc<GeneratorSet>,
    clients: Vec<ClientState>,
    server: ServerState,
    round: u32,
}

fn timed<T>(acc: &mut Duration, ops_acc: &mut OpCounts, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let (out, c) = ops::measure(f);
    *acc += start.elapsed();
    *ops_acc = *ops_acc + c;
    out
}

impl Session {
    /// Generates keys for `params.n` clients and publishes them in the registry.
    pub fn new<R: RngCore + CryptoRng + ?Sized>(
        params: CheckParameters,
        gens: Arc<GeneratorSet>,
        rng: &mut R,
    ) -> Result<Self> {
        params.validate()?;
        if gens.d() != params.d || gens.range.capacity() < params.range_capacity() {
            return Err(Error::InvalidParameters("generator set too small for parameters".into()));
        }
        if params.n < 2 || params.m >= params.n {
            return Err(Error::InvalidThreshold { t: params.threshold(), n: params.n });
        }
        let params = Arc::new(params);
        let keys: Vec<KeyPair> = (0..params.n).map(|_| KeyPair::generate(&gens.g, rng)).collect();
        let registry = Arc::new(keys.iter().map(|k| k.pk).collect::<Vec<_>>());
        let clients = keys
            .into_iter()
            .enumerate()
            .map(|(i, kp)| ClientState::new(i as ClientId + 1, params.clone(), gens.clone(), kp, registry.clone()))
            .collect();
        let server = ServerState::new(params.clone(), gens.clone(), registry);
        Ok(Session { params, gens, clients, server, round: 0 })
    }

    pub fn params(&self) -> &CheckParameters {
        &self.params
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn client(&self, id: ClientId) -> &ClientState {
        &self.clients[id as usize - 1]
    }

    pub fn server(&self) -> &ServerState {
        &self.server
    }

    /// Runs all four stages with `updates[i]` belonging to client `i + 1`.
    pub fn run_round<R: RngCore + CryptoRng + ?Sized>(
        &mut self,
        updates: &[Vec<i64>],
        adv: &mut dyn Adversary,
        rng: &mut R,
    ) -> Result<RoundOutcome> {
        if updates.len() != self.clients.len() {
            return Err(Error::LengthMismatch { expected: self.clients.len(), found: updates.len() });
        }
        self.round += 1;
        let round = self.round;
        let cheaters = adv.cheating_clients();
        let mut net = Network::default();
        let mut times = StageTimings::default();
        let mut ops_acc = StageOps::default();
        let mut aborts = BTreeMap::new();
        self.server.begin_round();
        for c in &mut self.clients {
            c.begin_round(round);
            c.set_cheating(cheaters.contains(&c.id));
        }

        // Commitment.
        for (c, u) in self.clients.iter_mut().zip(updates) {
            let mut bundle = timed(&mut times.commit, &mut ops_acc.commit, || c.commit(u, rng)).ok();
            adv.bundle(c.id, &mut bundle);
            if let Some(b) = bundle {
                if let Message::Commit(b) = net.deliver(c.id, SERVER, &Message::Commit(Box::new(b)))? {
                    self.server.receive_commit(c.id, *b);
                }
            }
        }

        // Share authenticity and flagging.
        let relays = self.server.close_commit_round();
        let mut flags = BTreeMap::new();
        for (to, list) in relays {
            let Message::Shares(list) = net.deliver(SERVER, to, &Message::Shares(list))? else { unreachable!() };
            let c = &mut self.clients[to as usize - 1];
            let mut f = c.verify_shares(&list)?;
            adv.flags(to, &mut f);
            flags.insert(to, f.clone());
            if let Message::Flags(f) = net.deliver(to, SERVER, &Message::Flags(f))? {
                self.server.receive_flags(to, f);
            }
        }
        let mut requests = self.server.close_flag_round();
        adv.clear_requests(&mut requests);
        for (target, flaggers) in requests {
            let Message::ClearShareRequest(flaggers) =
                net.deliver(SERVER, target, &Message::ClearShareRequest(flaggers))?
            else {
                unreachable!()
            };
            let c = &mut self.clients[target as usize - 1];
            let mut reply = match c.respond_clear_shares(&flaggers) {
                Ok(s) => Some(s),
                Err(e) => {
                    aborts.insert(target, e.to_string());
                    net.deliver(target, SERVER, &Message::Abort(e.to_string()))?;
                    self.server.receive_abort(target, e.to_string());
                    None
                }
            };
            adv.clear_shares(target, &mut reply);
            if let Some(shares) = reply {
                if let Message::ClearShares(shares) = net.deliver(target, SERVER, &Message::ClearShares(shares))? {
                    for (flagger, share) in self.server.receive_clear_shares(target, &shares) {
                        let msg = Message::ForwardedShare { from: target, share };
                        if let Message::ForwardedShare { from, share } = net.deliver(SERVER, flagger, &msg)? {
                            self.clients[flagger as usize - 1].receive_forwarded_share(from, share)?;
                        }
                    }
                }
            }
        }
        self.server.close_clear_round();

        // Proof round.
        let (s, mut h) = timed(&mut times.prep, &mut ops_acc.prep, || self.server.proof_request(rng))?;
        adv.h(&mut h);
        let malicious = self.server.malicious_ids();
        let mut provers = 0;
        for c in &mut self.clients {
            if self.server.is_malicious(c.id) || c.stage() == super::ClientStage::Aborted {
                continue;
            }
            let req = Message::ProofRequest { s, h: h.clone(), malicious: malicious.clone() };
            let Message::ProofRequest { s, h, .. } = net.deliver(SERVER, c.id, &req)? else { unreachable!() };
            let res = timed(&mut times.proof_gen, &mut ops_acc.proof_gen, || c.prove(&s, &h, rng));
            let mut proof = match res {
                Ok(p) => {
                    provers += 1;
                    Some(p)
                }
                Err(e) => {
                    if matches!(e, Error::AbortServerMalicious(_)) {
                        aborts.insert(c.id, e.to_string());
                    }
                    net.deliver(c.id, SERVER, &Message::Abort(e.to_string()))?;
                    self.server.receive_abort(c.id, e.to_string());
                    None
                }
            };
            adv.proof(c.id, &mut proof);
            if let Some(p) = proof {
                if let Message::Proof(p) = net.deliver(c.id, SERVER, &Message::Proof(Box::new(p)))? {
                    self.server.receive_proof(c.id, *p);
                }
            }
        }
        let honest = timed(&mut times.proof_ver, &mut ops_acc.proof_ver, || self.server.verify_round(rng))?;

        // Aggregation.
        let mut agg_shares = BTreeMap::new();
        let responders: Vec<ClientId> = self
            .clients
            .iter()
            .filter(|c| matches!(c.stage(), super::ClientStage::SharesChecked | super::ClientStage::Proved))
            .map(|c| c.id)
            .collect();
        for &id in if honest.is_empty() { &[][..] } else { &responders[..] } {
            let req = net.deliver(SERVER, id, &Message::AggregateRequest(honest.clone()))?;
            let Message::AggregateRequest(hset) = req else { unreachable!() };
            let mut share = self.clients[id as usize - 1].aggregate_share(&hset).ok();
            adv.aggregate_share(id, &mut share);
            if let Some(sh) = share {
                if let Message::AggregateShare(sh) = net.deliver(id, SERVER, &Message::AggregateShare(sh))? {
                    agg_shares.insert(id, sh);
                }
            }
        }
        let opened = timed(&mut times.aggregation, &mut ops_acc.aggregation, || self.server.aggregate(&agg_shares));
        let (aggregate, rejected_shares) = match opened {
            Ok((sum, rejected)) => (Ok(sum), rejected),
            Err(e) => (Err(e), Vec::new()),
        };

        Ok(RoundOutcome {
            round,
            malicious: self.server.malicious().clone(),
            honest,
            flags,
            clear_requests: self.server.clear_requests().clone(),
            client_aborts: aborts,
            aggregate,
            rejected_shares,
            timings: times,
            ops: ops_acc,
            bytes: net.bytes().clone(),
            transcript: net.log,
            provers,
        })
    }
}
