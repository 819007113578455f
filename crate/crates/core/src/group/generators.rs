use curve25519_dalek::ristretto::RistrettoPoint;
use sha2::{Digest, Sha512};

use super::Point;

const DOMAIN: &[u8] = b"vagg/generators/v1";

/// Derives `count` independent generators by hashing `tag` and each index to
/// the group. No discrete log relation between outputs is known to anyone.
pub fn derive_generators(tag: &[u8], count: usize) -> Vec<Point> {
    (0..count as u64)
        .map(|i| {
            let mut h = Sha512::new();
            h.update(DOMAIN);
            h.update((tag.len() as u64).to_le_bytes());
            h.update(tag);
            h.update(i.to_le_bytes());
            Point(RistrettoPoint::from_hash(h))
        })
        .collect()
}

/// Generators for aggregated range proofs over up to `capacity` bits.
#[derive(Clone, Debug)]
pub struct RangeGenerators {
    pub g_vec: Vec<Point>,
    pub h_vec: Vec<Point>,
    /// Base binding the inner product in the folding argument.
    pub u: Point,
}

impl RangeGenerators {
    pub fn new(capacity: usize) -> Self {
        let capacity = capacity.next_power_of_two();
        RangeGenerators {
            g_vec: derive_generators(b"vagg/range-G", capacity),
            h_vec: derive_generators(b"vagg/range-H", capacity),
            u: derive_generators(b"vagg/range-U", 1)[0],
        }
    }

    pub fn capacity(&self) -> usize {
        self.g_vec.len()
    }
}

/// Public parameters all parties agree on: `g`, `q`, the per-coordinate
/// bases `w` and the range-proof bases.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub g: Point,
    pub q: Point,
    pub w: Vec<Point>,
    pub range: RangeGenerators,
}

impl GeneratorSet {
    /// `range_capacity` must cover the larger of `k·b_ip` and `b_max` bits.
    pub fn new(d: usize, range_capacity: usize) -> Self {
        GeneratorSet {
            g: derive_generators(b"vagg/g", 1)[0],
            q: derive_generators(b"vagg/q", 1)[0],
            w: derive_generators(b"vagg/w", d),
            range: RangeGenerators::new(range_capacity),
        }
    }

    pub fn d(&self) -> usize {
        self.w.len()
    }
}
