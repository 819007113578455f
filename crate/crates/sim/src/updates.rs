use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

/// Uniformly distributed unit vector.
pub fn random_direction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `n` honest updates with uniform directions and norms uniform on `(0, B]`.
pub fn generate_updates(seed: u64, n: usize, d: usize, bound: f64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let norm = bound * (1.0 - rng.gen::<f64>());
            random_direction(d, &mut rng).into_iter().map(|x| x * norm).collect()
        })
        .collect()
}

/// Fixed-point encoding by truncation toward zero, so the integer vector
/// never has a larger norm than `x · 2^frac_bits`.
pub fn quantize_update(x: &[f64], frac_bits: u32) -> Vec<i64> {
    let s = (frac_bits as f64).exp2();
    x.iter().map(|v| (v * s).trunc() as i64).collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
