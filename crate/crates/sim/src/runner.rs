use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use vagg_core::group::GeneratorSet;
use vagg_core::protocol::{Adversary, ClientId, RoundOutcome, Session};

use crate::config::SimulationConfig;
use crate::error::Result;
use crate::updates::{generate_updates, quantize_update, random_direction};

/// Attackers forge proofs for the updates they submit.
struct Attackers(BTreeSet<ClientId>);

impl Adversary for Attackers {
    fn cheating_clients(&self) -> BTreeSet<ClientId> {
        self.0.clone()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Timings {
    /// Per client mean, seconds.
    pub commit: f64,
    /// Per proving client mean, seconds.
    pub proof_gen: f64,
    /// Per verified proof mean, seconds.
    pub proof_ver: f64,
    /// Server computation of `h`, seconds.
    pub prep: f64,
    /// Server opening of the aggregate, seconds.
    pub aggregation: f64,
}

/// Group work in full-exponentiation equivalents, averaged like [`Timings`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Exponentiations {
    pub commit: f64,
    pub proof_gen: f64,
    pub proof_ver: f64,
    pub prep: f64,
    pub aggregation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundReport {
    pub round: u32,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub attack: String,
    pub attackers: Vec<ClientId>,
    /// Server's malicious set with reasons.
    pub flagged: BTreeMap<ClientId, String>,
    /// `"pass"` or the reason a client was excluded.
    pub verdicts: BTreeMap<ClientId, String>,
    pub honest_set: Vec<ClientId>,
    pub aggregate: Option<Vec<i64>>,
    pub aggregate_error: Option<String>,
    /// The opened sum equals the sum of submitted updates over the honest set.
    pub aggregate_correct: bool,
    /// The opened sum equals the sum over non-attackers only.
    pub matches_honest_only_sum: bool,
    pub honest_excluded: usize,
    pub attackers_passed: usize,
    /// Largest number of an honest client's blind shares visible to the
    /// server plus the attackers.
    pub max_exposure: usize,
    pub timings: Timings,
    pub exponentiations: Exponentiations,
    pub bytes_per_client: BTreeMap<ClientId, usize>,
    pub bytes_total: usize,
    #[serde(skip)]
    pub transcript: Vec<u8>,
}

fn column_sum(us: &[Vec<i64>], ids: &[ClientId], d: usize) -> Vec<i64> {
    (0..d).map(|l| ids.iter().map(|&i| us[i as usize - 1][l]).sum()).collect()
}

/// Submitted fixed-point updates for one round: honest clients draw norms
/// uniform on `(0, B]`, attackers start from a norm-`B` update.
pub fn round_updates(cfg: &SimulationConfig, round_seed: u64, rng: &mut ChaCha20Rng) -> Vec<Vec<i64>> {
    let mut real = generate_updates(round_seed, cfg.n, cfg.d, cfg.bound);
    for &id in &cfg.attack.malicious {
        let base: Vec<f64> = random_direction(cfg.d, rng).into_iter().map(|x| x * cfg.bound).collect();
        real[id as usize - 1] = cfg.attack.kind.apply(&base, cfg.bound, rng);
    }
    real.iter().map(|u| quantize_update(u, cfg.frac_bits)).collect()
}

fn report(cfg: &SimulationConfig, updates: &[Vec<i64>], out: RoundOutcome) -> RoundReport {
    let attackers: BTreeSet<ClientId> = cfg.attack.malicious.iter().copied().collect();
    let all: Vec<ClientId> = (1..=cfg.n as ClientId).collect();
    let non_attackers: Vec<ClientId> = all.iter().copied().filter(|i| !attackers.contains(i)).collect();
    let flagged: BTreeMap<ClientId, String> = out.malicious.iter().map(|(i, r)| (*i, r.to_string())).collect();
    let verdicts = all
        .iter()
        .map(|i| {
            let v = if out.honest.contains(i) {
                "pass".to_string()
            } else {
                flagged.get(i).cloned().unwrap_or_else(|| "excluded".into())
            };
            (*i, v)
        })
        .collect();
    let (aggregate, aggregate_error) = match &out.aggregate {
        Ok(sum) => (Some(sum.clone()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let expected = column_sum(updates, &out.honest, cfg.d);
    let honest_only = column_sum(updates, &non_attackers, cfg.d);
    let exposure = out.exposure(cfg.n, &attackers);
    let provers = out.provers.max(1) as f64;
    let verified = (out.honest.len() + out.malicious.values().filter(|r| matches!(r, vagg_core::protocol::MaliciousReason::ProofRejected(_))).count()).max(1) as f64;
    let t = &out.timings;
    let o = &out.ops;
    let n = cfg.n as f64;
    RoundReport {
        round: out.round,
        n: cfg.n,
        d: cfg.d,
        k: cfg.k,
        attack: cfg.attack.kind.label(),
        attackers: attackers.iter().copied().collect(),
        flagged,
        verdicts,
        honest_set: out.honest.clone(),
        aggregate_correct: aggregate.as_ref() == Some(&expected),
        matches_honest_only_sum: aggregate.as_ref() == Some(&honest_only),
        aggregate,
        aggregate_error,
        honest_excluded: non_attackers.iter().filter(|i| !out.honest.contains(i)).count(),
        attackers_passed: attackers.iter().filter(|i| out.honest.contains(i)).count(),
        max_exposure: non_attackers.iter().map(|i| exposure[i]).max().unwrap_or(0),
        timings: Timings {
            commit: t.commit.as_secs_f64() / n,
            proof_gen: t.proof_gen.as_secs_f64() / provers,
            proof_ver: t.proof_ver.as_secs_f64() / verified,
            prep: t.prep.as_secs_f64(),
            aggregation: t.aggregation.as_secs_f64(),
        },
        exponentiations: Exponentiations {
            commit: o.commit.exponentiations() / n,
            proof_gen: o.proof_gen.exponentiations() / provers,
            proof_ver: o.proof_ver.exponentiations() / verified,
            prep: o.prep.exponentiations(),
            aggregation: o.aggregation.exponentiations(),
        },
        bytes_total: out.transcript.len(),
        bytes_per_client: out.bytes.clone(),
        transcript: out.transcript,
    }
}

/// Deterministic given the config: keys, updates, attacks and every protocol
/// coin derive from `cfg.seed`.
pub struct Simulation {
    cfg: SimulationConfig,
    session: Session,
    rng: ChaCha20Rng,
}

impl Simulation {
    pub fn new(cfg: SimulationConfig) -> Result<Self> {
        let gens = Arc::new(GeneratorSet::new(cfg.d, cfg.params()?.range_capacity()));
        Self::with_generators(cfg, gens)
    }

    /// Reuses a generator set built for the same `d` and at least the needed capacity.
    pub fn with_generators(cfg: SimulationConfig, gens: Arc<GeneratorSet>) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
        let session = Session::new(cfg.params()?, gens, &mut rng)?;
        Ok(Simulation { cfg, session, rng })
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.cfg
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn run_round(&mut self) -> Result<RoundReport> {
        let round_seed = rand::Rng::gen(&mut self.rng);
        let updates = round_updates(&self.cfg, round_seed, &mut self.rng);
        let mut adv = Attackers(self.cfg.attack.malicious.iter().copied().collect());
        let out = self.session.run_round(&updates, &mut adv, &mut self.rng)?;
        Ok(report(&self.cfg, &updates, out))
    }
}

pub fn run_simulation(cfg: &SimulationConfig) -> Result<Vec<RoundReport>> {
    let mut sim = Simulation::new(cfg.clone())?;
    (0..cfg.repetitions).map(|_| sim.run_round()).collect()
}
