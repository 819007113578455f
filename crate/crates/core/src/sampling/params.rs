use super::chi2::{chi2_cdf, chi_square_quantile_log2};
use crate::error::{Error, Result};

/// Public parameters of the probabilistic norm check.
///
/// Updates are fixed-point integers with `frac_bits` fractional bits, so the
/// real bound `bound` becomes `bound · 2^frac_bits` on the integer vectors.
/// `m_scale` is the standard deviation of the pre-rounding Gaussian samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckParameters {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub k: usize,
    pub epsilon_log2: f64,
    pub m_scale: f64,
    pub bound: f64,
    pub frac_bits: u32,
    pub coord_bits: u32,
    pub gamma: f64,
    pub b0: u128,
    pub b_ip: u32,
    pub b_max: u32,
}

impl CheckParameters {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        m: usize,
        d: usize,
        k: usize,
        epsilon_log2: f64,
        m_scale: f64,
        bound: f64,
        frac_bits: u32,
        coord_bits: u32,
    ) -> Result<Self> {
        if k == 0 || d == 0 || !(m_scale > 0.0) || !(bound > 0.0) || !(epsilon_log2 < 0.0) {
            return Err(Error::InvalidParameters(
                "k, d, M and B must be positive and epsilon below 1".into(),
            ));
        }
        let gamma = chi_square_quantile_log2(k, epsilon_log2);
        let b_int = bound * (frac_bits as f64).exp2();
        let b0 = compute_b0(b_int, m_scale, k, d, gamma);
        let b_ip = default_b_ip(b0);
        let b_max = 128 - b0.leading_zeros();
        let params = CheckParameters {
            n,
            m,
            d,
            k,
            epsilon_log2,
            m_scale,
            bound,
            frac_bits,
            coord_bits,
            gamma,
            b0,
            b_ip,
            b_max,
        };
        params.validate()?;
        Ok(params)
    }

    /// Overrides the derived bit widths; both are re-validated.
    pub fn with_bit_widths(mut self, b_ip: u32, b_max: u32) -> Result<Self> {
        self.b_ip = b_ip;
        self.b_max = b_max;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        if 2 * self.m >= self.n {
            return bad(format!("m = {} must be below n/2 = {}/2", self.m, self.n));
        }
        if self.b_ip == 0 || self.b_ip >= self.b_max {
            return bad(format!("need 0 < b_ip = {} < b_max = {}", self.b_ip, self.b_max));
        }
        if self.b_max < 128 && self.b0 >> self.b_max != 0 {
            return bad(format!("B0 does not fit in b_max = {} bits", self.b_max));
        }
        // k·2^{2 b_ip − 2} + 2^{b_max} < p, checked conservatively in bit lengths.
        let k_bits = usize::BITS - (self.k - 1).leading_zeros();
        if k_bits + 2 * self.b_ip - 2 > 250 || self.b_max > 250 {
            return bad("bit widths too large for the field".into());
        }
        if self.coord_bits < 2 || self.coord_bits > 32 || self.frac_bits >= self.coord_bits + 32 {
            return bad(format!("coordinate width {} unsupported", self.coord_bits));
        }
        Ok(())
    }

    /// The L2 bound on integer-encoded updates.
    pub fn bound_int(&self) -> f64 {
        self.bound * (self.frac_bits as f64).exp2()
    }

    /// Threshold of the blind sharing.
    pub fn threshold(&self) -> usize {
        self.m + 1
    }

    /// Range-proof bits needed by the batched σ and by μ.
    pub fn range_capacity(&self) -> usize {
        (self.k * self.b_ip as usize).max(self.b_max as usize)
    }

    /// Largest magnitude of an encoded coordinate.
    pub fn coord_max(&self) -> i64 {
        (1i64 << (self.coord_bits - 1)) - 1
    }

    pub fn pass_rate(&self, c: f64) -> f64 {
        pass_rate_f_with_gamma(c, self.k, self.gamma, self.d, self.m_scale)
    }
}

/// Smallest `b` with `⌊√B0⌋ < 2^{b−1}`: every honest projection fits.
fn default_b_ip(b0: u128) -> u32 {
    let r = isqrt(b0);
    128 - r.leading_zeros() + 1
}

pub fn isqrt(v: u128) -> u128 {
    let mut r = (v as f64).sqrt() as u128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= v) {
        r += 1;
    }
    r
}

/// `⌈B² M² (√γ + √(kd)/(2M))²⌉` where `b` is the bound in encoded units.
pub fn compute_b0(b: f64, m: f64, k: usize, d: usize, gamma: f64) -> u128 {
    let root = b * m * (gamma.sqrt() + ((k * d) as f64).sqrt() / (2.0 * m));
    (root * root).ceil() as u128
}

/// Upper bound on the probability that an update of norm `c·B` passes.
pub fn pass_rate_f(c: f64, k: usize, epsilon_log2: f64, d: usize, m: f64) -> f64 {
    pass_rate_f_with_gamma(c, k, chi_square_quantile_log2(k, epsilon_log2), d, m)
}

pub fn pass_rate_f_with_gamma(c: f64, k: usize, gamma: f64, d: usize, m: f64) -> f64 {
    let t = gamma.sqrt() + 3.0 * ((k * d) as f64).sqrt() / (2.0 * m);
    chi2_cdf(k as f64, t * t / (c * c))
}

/// Maximises `c·F(c)` over `c > 1`; returns `(c*, damage)` for `B = 1`.
pub fn max_expected_damage(k: usize, epsilon_log2: f64, d: usize, m: f64) -> (f64, f64) {
    let gamma = chi_square_quantile_log2(k, epsilon_log2);
    let damage = |c: f64| c * pass_rate_f_with_gamma(c, k, gamma, d, m);
    // Relative-step scan until the tail is negligible, then golden section.
    let step = 1.0 + 1e-3;
    let (mut best_c, mut best) = (1.0, damage(1.0));
    let mut c = 1.0;
    while c < 1e6 {
        c *= step;
        let v = damage(c);
        if v > best {
            best = v;
            best_c = c;
        }
        if v < best * 1e-6 {
            break;
        }
    }
    let (mut lo, mut hi) = ((best_c / step).max(1.0), best_c * step);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if damage(x1) < damage(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let c_star = 0.5 * (lo + hi);
    (c_star, damage(c_star))
}

/// `Σ_t ⟨a_t, u⟩²`, saturating at `u128::MAX`.
pub fn sum_sq_projections(u: &[i64], rows: &[Vec<i64>]) -> u128 {
    rows.iter().fold(0u128, |acc, row| {
        let v: i128 = row.iter().zip(u).map(|(&a, &x)| a as i128 * x as i128).sum();
        let sq = v.unsigned_abs().checked_mul(v.unsigned_abs()).unwrap_or(u128::MAX);
        acc.saturating_add(sq)
    })
}

/// Exact verdict of the rounded-sample check `Σ ⟨a_t, u⟩² ≤ B0`.
pub fn plaintext_check(u: &[i64], rows: &[Vec<i64>], b0: u128) -> bool {
    sum_sq_projections(u, rows) <= b0
}

/// The real-valued check `Σ ⟨b_t, u⟩² ≤ B² γ` on unrounded samples.
pub fn plaintext_check_real(u: &[f64], rows: &[Vec<f64>], bound: f64, gamma: f64) -> bool {
    let s: f64 = rows
        .iter()
        .map(|row| {
            let v: f64 = row.iter().zip(u).map(|(a, x)| a * x).sum();
            v * v
        })
        .sum();
    s <= bound * bound * gamma
}
