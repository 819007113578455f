//! Reduction of robustness predicates to a norm bound on a shifted update.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DefensePredicate {
    /// `‖u‖ ≤ B`.
    L2 { bound: f64 },
    /// `‖u − v‖ ≤ B`.
    Sphere { center: Vec<f64>, bound: f64 },
    /// Norm part of a cosine-similarity filter against reference `v`. Only
    /// `‖u‖ ≤ B` is enforced; the angle condition `⟨u, v⟩ ≥ α‖u‖‖v‖` has no
    /// proof here.
    Cosine { reference: Vec<f64>, bound: f64, alpha: f64 },
    /// Zeno++ descent test `gamma·⟨v, u⟩ − rho·‖u‖² ≥ −gamma·epsilon`.
    Zeno { v: Vec<f64>, rho: f64, gamma: f64, epsilon: f64 },
}

/// An L2 ball membership check on `u − shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefenseCheck {
    /// `None` means the zero vector.
    pub shift: Option<Vec<f64>>,
    pub bound: f64,
    /// Set when part of the predicate is not enforced.
    pub unchecked_angle: bool,
}

impl DefenseCheck {
    pub fn shift_vector(&self, d: usize) -> Vec<f64> {
        self.shift.clone().unwrap_or_else(|| vec![0.0; d])
    }

    /// Quantized shift; clients commit to `quantize(u) − quantized_shift`.
    pub fn quantized_shift(&self, d: usize, frac_bits: u32) -> Vec<i64> {
        let s = (frac_bits as f64).exp2();
        self.shift_vector(d).iter().map(|x| (x * s).round() as i64).collect()
    }

    pub fn apply(&self, u: &[i64], frac_bits: u32) -> Vec<i64> {
        let v = self.quantized_shift(u.len(), frac_bits);
        u.iter().zip(v).map(|(a, b)| a - b).collect()
    }

    /// Undoes the shift on an aggregate over `count` clients.
    pub fn restore(&self, sum: &[i64], count: usize, frac_bits: u32) -> Vec<i64> {
        let v = self.quantized_shift(sum.len(), frac_bits);
        sum.iter().zip(v).map(|(a, b)| a + b * count as i64).collect()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidHyperparameters(format!("{name} must be positive and finite, got {x}")))
    }
}

pub fn convert_defense(pred: &DefensePredicate) -> Result<DefenseCheck> {
    match pred {
        DefensePredicate::L2 { bound } => {
            positive("bound", *bound)?;
            Ok(DefenseCheck { shift: None, bound: *bound, unchecked_angle: false })
        }
        DefensePredicate::Sphere { center, bound } => {
            positive("bound", *bound)?;
            Ok(DefenseCheck { shift: Some(center.clone()), bound: *bound, unchecked_angle: false })
        }
        DefensePredicate::Cosine { reference, bound, alpha } => {
            positive("bound", *bound)?;
            if !(-1.0..=1.0).contains(alpha) || norm(reference) == 0.0 {
                return Err(Error::InvalidHyperparameters(
                    "cosine needs alpha in [-1, 1] and a nonzero reference".into(),
                ));
            }
            Ok(DefenseCheck { shift: None, bound: *bound, unchecked_angle: true })
        }
        DefensePredicate::Zeno { v, rho, gamma, epsilon } => {
            positive("rho", *rho)?;
            positive("gamma", *gamma)?;
            let c = gamma / (2.0 * rho);
            let radicand = gamma / rho * epsilon + c * c * norm(v).powi(2);
            if !(radicand > 0.0) {
                return Err(Error::InvalidHyperparameters(format!(
                    "Zeno bound is not positive (radicand {radicand})"
                )));
            }
            Ok(DefenseCheck {
                shift: Some(v.iter().map(|x| c * x).collect()),
                bound: radicand.sqrt(),
                unchecked_angle: false,
            })
        }
    }
}
