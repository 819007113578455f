use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use vagg_core::sampling::CheckParameters;

use crate::attack::AttackSpec;
use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Everything a simulation run depends on. Defaults are desk scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub n: usize,
    /// Maximum number of malicious clients tolerated; threshold is `m + 1`.
    pub m: usize,
    pub d: usize,
    pub k: usize,
    pub epsilon_log2: f64,
    /// `log2` of the Gaussian standard deviation `M`.
    pub m_log2: f64,
    /// Norm bound `B` on real-valued updates.
    pub bound: f64,
    pub frac_bits: u32,
    pub coord_bits: u32,
    pub seed: u64,
    pub repetitions: usize,
    pub attack: AttackSpec,
    pub out_dir: Option<PathBuf>,
    pub formats: Vec<ReportFormat>,
    pub write_transcripts: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            n: 10,
            m: 1,
            d: 256,
            k: 256,
            epsilon_log2: -40.0,
            m_log2: 24.0,
            bound: 1.0,
            frac_bits: 12,
            coord_bits: 16,
            seed: 0,
            repetitions: 1,
            attack: AttackSpec::default(),
            out_dir: None,
            formats: vec![ReportFormat::Csv, ReportFormat::Json],
            write_transcripts: false,
        }
    }
}

impl SimulationConfig {
    /// Full-scale sizes (n = 100, d = 10^4, k = 10^3); far slower than the defaults.
    pub fn full_scale() -> Self {
        SimulationConfig { n: 100, m: 10, d: 10_000, k: 1000, epsilon_log2: -128.0, ..Self::default() }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SimulationConfig = toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SimError::Config(msg));
        if self.n < 2 {
            return bad(format!("need at least two clients, got {}", self.n));
        }
        if 2 * self.m >= self.n {
            return bad(format!("m = {} must be below n/2 = {}", self.m, self.n as f64 / 2.0));
        }
        if self.attack.malicious.len() > self.m {
            return bad(format!("{} attackers exceed m = {}", self.attack.malicious.len(), self.m));
        }
        if self.attack.malicious.iter().any(|&i| i == 0 || i as usize > self.n) {
            return bad("attacker ids must lie in 1..=n".into());
        }
        if self.repetitions == 0 {
            return bad("repetitions must be positive".into());
        }
        self.attack.kind.validate()?;
        self.params().map(|_| ())
    }

    pub fn m_scale(&self) -> f64 {
        self.m_log2.exp2()
    }

    pub fn params(&self) -> Result<CheckParameters> {
        Ok(CheckParameters::new(
            self.n,
            self.m,
            self.d,
            self.k,
            self.epsilon_log2,
            self.m_scale(),
            self.bound,
            self.frac_bits,
            self.coord_bits,
        )?)
    }
}
