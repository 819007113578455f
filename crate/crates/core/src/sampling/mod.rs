//! Shared-seed projection matrices and the chi-square mathematics behind the
//! probabilistic L2 check.

mod chi2;
mod matrix;
mod params;

pub use chi2::{
    chi2_cdf, chi2_ln_sf, chi_square_quantile, chi_square_quantile_ln, chi_square_quantile_log2,
    ln_gamma_p, ln_gamma_q,
};
pub use matrix::{
    derive_seed, gaussian_row, round_row, sample_a0, sample_matrix, SampleMatrix, Seed,
};
pub use params::{
    compute_b0, isqrt, max_expected_damage, pass_rate_f, pass_rate_f_with_gamma,
    plaintext_check, plaintext_check_real, sum_sq_projections, CheckParameters,
};
