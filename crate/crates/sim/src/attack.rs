use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use vagg_core::protocol::ClientId;

use crate::error::{Result, SimError};
use crate::updates::random_direction;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AttackKind {
    #[default]
    None,
    /// Submits `−c·u`.
    SignFlip { c: f64 },
    /// Submits `c·u`.
    Scaling { c: f64 },
    /// Adds i.i.d. Gaussian noise with this standard deviation to `u`.
    AdditiveNoise { sigma: f64 },
    /// A random direction with norm `c·B`.
    OversizedNorm { c: f64 },
}

impl AttackKind {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            AttackKind::None => true,
            AttackKind::SignFlip { c } | AttackKind::Scaling { c } | AttackKind::OversizedNorm { c } => {
                c.is_finite() && c >= 0.0
            }
            AttackKind::AdditiveNoise { sigma } => sigma.is_finite() && sigma >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(SimError::Config(format!("invalid attack parameters {self:?}")))
        }
    }

    /// Turns an attacker's base update of norm `B` into what it submits.
    pub fn apply<R: Rng + ?Sized>(&self, base: &[f64], bound: f64, rng: &mut R) -> Vec<f64> {
        match *self {
            AttackKind::None => base.to_vec(),
            AttackKind::SignFlip { c } => base.iter().map(|x| -c * x).collect(),
            AttackKind::Scaling { c } => base.iter().map(|x| c * x).collect(),
            AttackKind::AdditiveNoise { sigma } => {
                let noise = Normal::new(0.0, sigma).expect("validated sigma");
                base.iter().map(|x| x + noise.sample(rng)).collect()
            }
            AttackKind::OversizedNorm { c } => {
                random_direction(base.len(), rng).into_iter().map(|x| x * c * bound).collect()
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            AttackKind::None => "none".into(),
            AttackKind::SignFlip { c } => format!("sign_flip({c})"),
            AttackKind::Scaling { c } => format!("scaling({c})"),
            AttackKind::AdditiveNoise { sigma } => format!("additive_noise({sigma})"),
            AttackKind::OversizedNorm { c } => format!("oversized_norm({c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct AttackSpec {
    #[serde(flatten)]
    pub kind: AttackKind,
    pub malicious: Vec<ClientId>,
}
