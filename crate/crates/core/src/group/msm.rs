//! Multi-exponentiation `∏ bases_i ^ scalars_i` with the bucket method.
//!
//! Window width is chosen per call by minimising the estimated addition count,
//! and the number of windows follows the widest scalar, so short exponents
//! (the rounded Gaussian rows) cost proportionally less than full-width ones.

use super::{Point, Scalar};
use crate::error::{Error, Result};

/// Below this many terms the backend's single exponentiation is cheaper.
const NAIVE_THRESHOLD: usize = 4;

pub fn multiexp(bases: &[Point], scalars: &[Scalar]) -> Result<Point> {
    if bases.len() != scalars.len() {
        return Err(Error::LengthMismatch {
            expected: bases.len(),
            found: scalars.len(),
        });
    }
    if bases.len() < NAIVE_THRESHOLD {
        return Ok(bases.iter().zip(scalars).map(|(b, s)| *b * *s).sum());
    }
    let digits: Vec<[u8; 32]> = scalars.iter().map(Scalar::to_bytes).collect();
    let max_bits = scalars.iter().map(Scalar::bit_len).max().unwrap_or(0);
    Ok(pippenger(bases, &digits, max_bits))
}

/// Multi-exponentiation with small signed exponents; negative exponents are
/// handled by negating the base, so only `|e|` bits are processed.
pub fn multiexp_small(bases: &[Point], exps: &[i64]) -> Result<Point> {
    if bases.len() != exps.len() {
        return Err(Error::LengthMismatch {
            expected: bases.len(),
            found: exps.len(),
        });
    }
    let signed: Vec<Point> = bases
        .iter()
        .zip(exps)
        .map(|(b, &e)| if e < 0 { -*b } else { *b })
        .collect();
    let mut max_bits = 0;
    let digits: Vec<[u8; 32]> = exps
        .iter()
        .map(|&e| {
            let mag = e.unsigned_abs();
            max_bits = max_bits.max(64 - mag.leading_zeros());
            let mut bytes = [0u8; 32];
            bytes[..8].copy_from_slice(&mag.to_le_bytes());
            bytes
        })
        .collect();
    Ok(pippenger(&signed, &digits, max_bits))
}

fn window_bits(n: usize, max_bits: u32) -> u32 {
    (1..=16u32)
        .min_by_key(|&c| {
            let windows = max_bits.div_ceil(c) as u64;
            windows * (n as u64 + (2u64 << c)) + max_bits as u64
        })
        .unwrap_or(1)
}

#[inline]
fn digit(bytes: &[u8; 32], pos: u32, width: u32) -> usize {
    let byte = (pos / 8) as usize;
    let shift = pos % 8;
    let mut buf = [0u8; 8];
    let end = (byte + 8).min(32);
    buf[..end - byte].copy_from_slice(&bytes[byte..end]);
    ((u64::from_le_bytes(buf) >> shift) & ((1u64 << width) - 1)) as usize
}

fn accumulate(acc: &mut Option<Point>, p: Point) {
    *acc = Some(match acc.take() {
        Some(a) => a + p,
        None => p,
    });
}

fn pippenger(bases: &[Point], digits: &[[u8; 32]], max_bits: u32) -> Point {
    if max_bits == 0 || bases.is_empty() {
        return Point::identity();
    }
    let c = window_bits(bases.len(), max_bits);
    let windows = max_bits.div_ceil(c);
    let mut buckets: Vec<Option<Point>> = vec![None; (1usize << c) - 1];
    let mut result: Option<Point> = None;

    for w in (0..windows).rev() {
        if let Some(r) = result.as_mut() {
            for _ in 0..c {
                *r = r.double();
            }
        }
        buckets.iter_mut().for_each(|b| *b = None);
        for (base, d) in bases.iter().zip(digits) {
            let idx = digit(d, w * c, c);
            if idx != 0 {
                accumulate(&mut buckets[idx - 1], *base);
            }
        }
        // Σ_j j·bucket_j via running sums.
        let mut running: Option<Point> = None;
        let mut window_sum: Option<Point> = None;
        for b in buckets.iter().rev() {
            if let Some(p) = b {
                accumulate(&mut running, *p);
            }
            if let Some(r) = running {
                accumulate(&mut window_sum, r);
            }
        }
        if let Some(s) = window_sum {
            accumulate(&mut result, s);
        }
    }
    result.unwrap_or_else(Point::identity)
}
