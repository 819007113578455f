//! Per-thread instrumentation of group work.
//!
//! Every point addition routed through [`Point`](super::Point) increments the
//! addition counter; full-width exponentiations delegated to the curve backend
//! are counted separately and charged [`BACKEND_MUL_OPS`] additions each when
//! converted to a single figure.

use std::cell::Cell;

/// Approximate additions plus doublings of a 4-bit windowed variable-base
/// scalar multiplication over a 253-bit scalar.
pub const BACKEND_MUL_OPS: u64 = 324;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub additions: u64,
    pub scalar_muls: u64,
}

impl OpCounts {
    /// Total work expressed in group additions.
    pub fn group_ops(&self) -> u64 {
        self.additions + self.scalar_muls * BACKEND_MUL_OPS
    }

    /// Work expressed as full-width exponentiation equivalents.
    pub fn exponentiations(&self) -> f64 {
        self.group_ops() as f64 / BACKEND_MUL_OPS as f64
    }
}

impl std::ops::Sub for OpCounts {
    type Output = OpCounts;
    fn sub(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            additions: self.additions - rhs.additions,
            scalar_muls: self.scalar_muls - rhs.scalar_muls,
        }
    }
}

impl std::ops::Add for OpCounts {
    type Output = OpCounts;
    fn add(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            additions: self.additions + rhs.additions,
            scalar_muls: self.scalar_muls + rhs.scalar_muls,
        }
    }
}

thread_local! {
    static ADDS: Cell<u64> = const { Cell::new(0) };
    static MULS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub(crate) fn record_add() {
    ADDS.with(|c| c.set(c.get() + 1));
}

#[inline]
pub(crate) fn record_mul() {
    MULS.with(|c| c.set(c.get() + 1));
}

/// Current counters of the calling thread.
pub fn snapshot() -> OpCounts {
    OpCounts {
        additions: ADDS.with(Cell::get),
        scalar_muls: MULS.with(Cell::get),
    }
}

/// Runs `f` and returns its result with the group work it performed on this thread.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, OpCounts) {
    let before = snapshot();
    let out = f();
    (out, snapshot() - before)
}
