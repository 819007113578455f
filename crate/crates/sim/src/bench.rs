use serde::Serialize;
use vagg_core::protocol::predicted_client_bytes;
use vagg_core::sampling::{max_expected_damage, CheckParameters};

use crate::config::SimulationConfig;
use crate::error::Result;
use crate::runner::Simulation;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    /// False when only message sizes were computed.
    pub measured: bool,
    pub t_commit: f64,
    pub t_proof_gen: f64,
    pub t_proof_ver: f64,
    pub t_prep: f64,
    pub t_aggregation: f64,
    pub exp_commit: f64,
    pub exp_proof_gen: f64,
    pub exp_proof_ver: f64,
    pub exp_prep: f64,
    pub bytes_per_client: usize,
    /// Bytes per client divided by `32·d`, the size of the commitment alone.
    pub comm_ratio: f64,
}

/// One honest round per `(d, k)` pair with the other settings from `base`.
/// With `predict_only`, skips the round and reports exact message sizes.
pub fn bench(base: &SimulationConfig, ds: &[usize], ks: &[usize], predict_only: bool) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &k in ks {
        for &d in ds {
            let cfg = SimulationConfig { d, k, repetitions: 1, ..base.clone() };
            cfg.validate()?;
            let params = cfg.params()?;
            let predicted = predicted_client_bytes(&params, cfg.n);
            let mut row = BenchRow {
                d,
                k,
                n: cfg.n,
                measured: !predict_only,
                t_commit: 0.0,
                t_proof_gen: 0.0,
                t_proof_ver: 0.0,
                t_prep: 0.0,
                t_aggregation: 0.0,
                exp_commit: 0.0,
                exp_proof_gen: 0.0,
                exp_proof_ver: 0.0,
                exp_prep: 0.0,
                bytes_per_client: predicted,
                comm_ratio: predicted as f64 / (32.0 * d as f64),
            };
            if !predict_only {
                let r = Simulation::new(cfg)?.run_round()?;
                let bytes = r.bytes_per_client.values().copied().max().unwrap_or(0);
                row.t_commit = r.timings.commit;
                row.t_proof_gen = r.timings.proof_gen;
                row.t_proof_ver = r.timings.proof_ver;
                row.t_prep = r.timings.prep;
                row.t_aggregation = r.timings.aggregation;
                row.exp_commit = r.exponentiations.commit;
                row.exp_proof_gen = r.exponentiations.proof_gen;
                row.exp_proof_ver = r.exponentiations.proof_ver;
                row.exp_prep = r.exponentiations.prep;
                row.bytes_per_client = bytes;
                row.comm_ratio = bytes as f64 / (32.0 * d as f64);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Derived quantities printed by the `params` command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsSummary {
    pub k: usize,
    pub d: usize,
    pub epsilon_log2: f64,
    pub m_log2: f64,
    pub gamma: f64,
    pub b0: u128,
    pub b_ip: u32,
    pub b_max: u32,
    pub pass_rates: Vec<(f64, f64)>,
    pub damage_at: f64,
    pub max_damage: f64,
}

pub const F_TABLE_POINTS: [f64; 9] = [1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 2.0, 2.5, 3.0];

pub fn params_summary(cfg: &SimulationConfig) -> Result<ParamsSummary> {
    let p: CheckParameters = cfg.params()?;
    let (c_star, dmg) = max_expected_damage(p.k, p.epsilon_log2, p.d, p.m_scale);
    Ok(ParamsSummary {
        k: p.k,
        d: p.d,
        epsilon_log2: p.epsilon_log2,
        m_log2: cfg.m_log2,
        gamma: p.gamma,
        b0: p.b0,
        b_ip: p.b_ip,
        b_max: p.b_max,
        pass_rates: F_TABLE_POINTS.iter().map(|&c| (c, p.pass_rate(c))).collect(),
        damage_at: c_star,
        max_damage: dmg,
    })
}

impl std::fmt::Display for ParamsSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "k = {}, d = {}, epsilon = 2^{}, M = 2^{}", self.k, self.d, self.epsilon_log2, self.m_log2)?;
        writeln!(f, "gamma      = {:.6}", self.gamma)?;
        writeln!(f, "B0         = {}", self.b0)?;
        writeln!(f, "b_ip       = {}", self.b_ip)?;
        writeln!(f, "b_max      = {}", self.b_max)?;
        writeln!(f, "max damage = {:.4} at c = {:.4}", self.max_damage, self.damage_at)?;
        writeln!(f, "c      F(c)")?;
        for (c, p) in &self.pass_rates {
            writeln!(f, "{c:<6} {p:.6e}")?;
        }
        Ok(())
    }
}
