use rand::{RngCore, SeedableRng};
use rand_chacha::{ChaCha20Rng, ChaCha8Rng};
use sha2::{Digest, Sha256};

use crate::group::{Point, Scalar};

pub type Seed = [u8; 32];

/// `H(s, pk_1, ..., pk_n)` with public keys in client order.
pub fn derive_seed(s: &[u8], pks: &[Point]) -> Seed {
    let mut h = Sha256::new();
    h.update(b"vagg/seed/v1");
    h.update((s.len() as u64).to_le_bytes());
    h.update(s);
    h.update((pks.len() as u64).to_le_bytes());
    for pk in pks {
        h.update(pk.to_bytes());
    }
    h.finalize().into()
}

fn sub_seed(seed: &Seed, label: &[u8], index: u64) -> Seed {
    let mut h = Sha256::new();
    h.update(label);
    h.update(seed);
    h.update(index.to_le_bytes());
    h.finalize().into()
}

/// The uniform row `a_0` and the `k` rounded Gaussian rows `a_1..a_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleMatrix {
    pub a0: Vec<Scalar>,
    pub rows: Vec<Vec<i64>>,
}

impl SampleMatrix {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.a0.len()
    }

    /// `⟨a_t, u⟩` for `t = 1..k` as exact integers.
    pub fn projections(&self, u: &[i64]) -> Vec<i128> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(u).map(|(&a, &x)| a as i128 * x as i128).sum())
            .collect()
    }

    /// `⟨a_0, u⟩` in the field.
    pub fn projection0(&self, u: &[i64]) -> Scalar {
        self.a0.iter().zip(u).map(|(a, &x)| *a * Scalar::from_i64(x)).sum()
    }

    /// `b·A` for a vector `b` of length `k+1`, as `d` field elements.
    pub fn combine_rows(&self, b: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(b.len(), self.k() + 1);
        let mut c: Vec<Scalar> = self.a0.iter().map(|a| *a * b[0]).collect();
        for (row, bt) in self.rows.iter().zip(&b[1..]) {
            for (cl, &a) in c.iter_mut().zip(row) {
                *cl += *bt * Scalar::from_i64(a);
            }
        }
        c
    }
}

/// Standard normal pairs by Box–Muller; libm keeps the result bit-identical
/// across platforms.
fn gaussian_fill(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    const TWO_PI: f64 = std::f64::consts::TAU;
    let unit = |rng: &mut ChaCha8Rng| (rng.next_u64() >> 11) as f64 * (-53f64).exp2();
    for pair in out.chunks_mut(2) {
        let u1 = 1.0 - unit(rng);
        let u2 = unit(rng);
        let r = libm::sqrt(-2.0 * libm::log(u1));
        pair[0] = r * libm::cos(TWO_PI * u2);
        if let Some(second) = pair.get_mut(1) {
            *second = r * libm::sin(TWO_PI * u2);
        }
    }
}

/// Pre-rounding samples `b_t ~ N(0, M² I_d)` for row `t` (1-based).
pub fn gaussian_row(seed: &Seed, t: usize, d: usize, m: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::from_seed(sub_seed(seed, b"vagg/row", t as u64));
    let mut out = vec![0.0; d];
    gaussian_fill(&mut rng, &mut out);
    out.iter_mut().for_each(|x| *x *= m);
    out
}

/// Rounds half away from zero.
pub fn round_row(b: &[f64]) -> Vec<i64> {
    b.iter().map(|x| x.round() as i64).collect()
}

pub fn sample_a0(seed: &Seed, d: usize) -> Vec<Scalar> {
    let mut rng = ChaCha20Rng::from_seed(sub_seed(seed, b"vagg/a0", 0));
    (0..d).map(|_| Scalar::random(&mut rng)).collect()
}

/// `a_0` from a cryptographic stream; rows from per-row ChaCha8 streams so
/// any row can be regenerated independently.
pub fn sample_matrix(seed: &Seed, k: usize, d: usize, m: f64) -> SampleMatrix {
    SampleMatrix {
        a0: sample_a0(seed, d),
        rows: (1..=k).map(|t| round_row(&gaussian_row(seed, t, d, m))).collect(),
    }
}
