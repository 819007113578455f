use rand::{CryptoRng, RngCore};

use crate::group::{multiexp, Point, Scalar};
use crate::sampling::SampleMatrix;

/// Checks `h_t = ∏_l w_l^{a_tl}` for every row `t` of `A` with one random
/// linear combination: `∏ h_t^{b_t} = ∏ w_l^{c_l}` where `c = b·A`.
pub fn ver_crt<R: RngCore + CryptoRng + ?Sized>(
    w: &[Point],
    h: &[Point],
    a: &SampleMatrix,
    rng: &mut R,
) -> bool {
    if w.len() != a.d() || h.len() != a.k() + 1 {
        return false;
    }
    let b: Vec<Scalar> = (0..h.len()).map(|_| Scalar::random(rng)).collect();
    let c = a.combine_rows(&b);
    match (multiexp(h, &b), multiexp(w, &c)) {
        (Ok(lhs), Ok(rhs)) => lhs == rhs,
        _ => false,
    }
}
