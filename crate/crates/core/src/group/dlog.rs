//! Bounded discrete logarithm by baby-step giant-step.

use std::collections::HashMap;

use super::{Point, Scalar};
use crate::error::{Error, Result};

/// Precomputed baby steps for solving `target = base^v` with `|v| <= bound`.
///
/// Baby steps cover `j ∈ [-half, half]` and giant steps of `2·half + 1` walk
/// outward from zero in both directions, so small logarithms are found after
/// few steps. Keys are compressed encodings of `2·j·base`; doubling lets
/// lookups share one inversion across a batch of targets via
/// [`Point::double_and_compress_batch`].
pub struct DlogTable {
    bound: u64,
    step: u64,
    giant: Point,
    table: HashMap<[u8; 32], i64>,
}

impl DlogTable {
    pub fn new(base: Point, bound: u64) -> Self {
        let half = ((2.0 * bound as f64 + 1.0).sqrt() / 2.0).ceil() as u64;
        let step = 2 * half + 1;
        let mut babies = Vec::with_capacity(step as usize);
        let mut cur = Point::identity();
        babies.push(cur);
        for _ in 0..half {
            cur += base;
            babies.push(cur);
            babies.push(-cur);
        }
        let table = Point::double_and_compress_batch(&babies)
            .into_iter()
            .enumerate()
            .map(|(i, key)| {
                let j = (i as i64 + 1) / 2;
                (key, if i % 2 == 0 { -j } else { j })
            })
            .collect();
        DlogTable {
            bound,
            step,
            giant: base * Scalar::from_u64(step),
            table,
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn solve(&self, target: &Point) -> Result<i64> {
        self.solve_many(std::slice::from_ref(target))
            .pop()
            .expect("one result per target")
    }

    /// Solves all targets, advancing them in lockstep one giant step at a
    /// time in each direction.
    pub fn solve_many(&self, targets: &[Point]) -> Vec<Result<i64>> {
        let not_found = Err(Error::DlogNotFound { bound: self.bound });
        let mut up: Vec<Point> = targets.to_vec();
        let mut down: Vec<Point> = targets.to_vec();
        let mut results: Vec<Option<Result<i64>>> = vec![None; targets.len()];
        let mut pending: Vec<usize> = (0..targets.len()).collect();
        let last = self.bound / self.step + 1;

        for i in 0..=last {
            if pending.is_empty() {
                break;
            }
            let mut batch: Vec<Point> = pending.iter().map(|&idx| up[idx]).collect();
            if i > 0 {
                batch.extend(pending.iter().map(|&idx| down[idx]));
            }
            let keys = Point::double_and_compress_batch(&batch);
            let mut still = Vec::with_capacity(pending.len());
            for (pos, &idx) in pending.iter().enumerate() {
                let hit_up = self.table.get(&keys[pos]).map(|&j| i as i64 * self.step as i64 + j);
                let hit_down = (i > 0)
                    .then(|| self.table.get(&keys[pending.len() + pos]))
                    .flatten()
                    .map(|&j| -(i as i64) * self.step as i64 + j);
                match hit_up.or(hit_down) {
                    Some(v) => {
                        results[idx] = Some(if v.unsigned_abs() <= self.bound {
                            Ok(v)
                        } else {
                            not_found.clone()
                        });
                    }
                    None => {
                        up[idx] -= self.giant;
                        down[idx] += self.giant;
                        still.push(idx);
                    }
                }
            }
            pending = still;
        }
        results
            .into_iter()
            .map(|r| r.unwrap_or_else(|| not_found.clone()))
            .collect()
    }
}

/// Finds `v` with `target = base^v` and `|v| <= bound`.
pub fn dlog_bounded(target: &Point, base: &Point, bound: u64) -> Result<i64> {
    DlogTable::new(*base, bound).solve(target)
}
