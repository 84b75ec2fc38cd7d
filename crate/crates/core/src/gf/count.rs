//! Per-thread operation counters for complexity measurements.
//!
//! Only full GF(q^m) products and inversions are counted; additions and
//! products by GF(q) scalars are not. With the `op-count` feature disabled
//! every function here is a no-op and counts read as zero.

#[cfg(feature = "op-count")]
use std::cell::Cell;

#[cfg(feature = "op-count")]
thread_local! {
    static MULS: Cell<u64> = const { Cell::new(0) };
    static INVS: Cell<u64> = const { Cell::new(0) };
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    pub muls: u64,
    pub invs: u64,
}

#[inline]
pub(crate) fn tick_mul() {
    #[cfg(feature = "op-count")]
    MULS.with(|c| c.set(c.get() + 1));
}

#[inline]
pub(crate) fn tick_inv() {
    #[cfg(feature = "op-count")]
    INVS.with(|c| c.set(c.get() + 1));
}

pub fn snapshot() -> OpCount {
    #[cfg(feature = "op-count")]
    {
        OpCount { muls: MULS.with(Cell::get), invs: INVS.with(Cell::get) }
    }
    #[cfg(not(feature = "op-count"))]
    OpCount::default()
}

/// Runs `f` and returns its result with the operations it performed on this
/// thread.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, OpCount) {
    let before = snapshot();
    let out = f();
    let after = snapshot();
    (out, OpCount { muls: after.muls - before.muls, invs: after.invs - before.invs })
}
