//! Chi-square tail mathematics in the log domain, so that quantiles at
//! probabilities like 2^-128 are resolved without underflow.

use statrs::function::gamma::ln_gamma;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;

/// `ln P(a, x)` by the power series; converges fast for `x < a + 1`.
fn ln_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum.ln() + a * x.ln() - x - ln_gamma(a)
}

/// `ln Q(a, x)` by the modified Lentz continued fraction; for `x >= a + 1`.
fn ln_q_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h.ln() + a * x.ln() - x - ln_gamma(a)
}

/// `ln` of the regularized lower incomplete gamma function.
pub fn ln_gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x < a + 1.0 {
        ln_p_series(a, x)
    } else {
        (-ln_q_cf(a, x).exp()).ln_1p()
    }
}

/// `ln` of the regularized upper incomplete gamma function.
pub fn ln_gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        (-ln_p_series(a, x).exp()).ln_1p()
    } else {
        ln_q_cf(a, x)
    }
}

pub fn chi2_cdf(k: f64, x: f64) -> f64 {
    ln_gamma_p(k / 2.0, x / 2.0).exp()
}

/// `ln Pr[χ²_k ≥ x]`.
pub fn chi2_ln_sf(k: f64, x: f64) -> f64 {
    ln_gamma_q(k / 2.0, x / 2.0)
}

/// `γ` with `Pr[χ²_k ≥ γ] = exp(ln_epsilon)`.
pub fn chi_square_quantile_ln(k: usize, ln_epsilon: f64) -> f64 {
    assert!(k >= 1 && ln_epsilon < 0.0, "need k >= 1 and 0 < epsilon < 1");
    let k = k as f64;
    let f = |x: f64| chi2_ln_sf(k, x) - ln_epsilon;
    let mut lo = 0.0;
    let mut hi = k.max(1.0);
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    // f is decreasing; bisect to machine precision.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Upper-tail quantile `γ_{k,ε}`: `Pr[χ²_k < γ] = 1 − ε`.
pub fn chi_square_quantile(k: usize, epsilon: f64) -> f64 {
    assert!(epsilon > 0.0 && epsilon < 1.0);
    chi_square_quantile_ln(k, epsilon.ln())
}

/// Quantile with `ε = 2^epsilon_log2`.
pub fn chi_square_quantile_log2(k: usize, epsilon_log2: f64) -> f64 {
    chi_square_quantile_ln(k, epsilon_log2 * std::f64::consts::LN_2)
}
