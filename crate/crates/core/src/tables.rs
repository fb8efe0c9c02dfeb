//! Per-state value tables indexed by `(i, k)` with `i` the appearance count
//! of the current maximal candidate (`1..=m`) and `k` the number of distinct
//! candidates inspected so far (`1..=n`).

use num_rational::BigRational;

use crate::scalar::Scalar;

/// A dense `m x n` table stored `k`-major so the per-`k` sweeps touch
/// contiguous memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<S> {
    m: usize,
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Table<S> {
    pub(crate) fn filled(m: usize, n: usize, value: S) -> Self {
        Self {
            m,
            n,
            data: vec![value; m * n],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, k: usize) -> usize {
        debug_assert!(1 <= i && i <= self.m, "i = {i} out of 1..={}", self.m);
        debug_assert!(1 <= k && k <= self.n, "k = {k} out of 1..={}", self.n);
        (k - 1) * self.m + (i - 1)
    }

    /// Read-only access to the entry for appearance count `i` at distinct
    /// count `k` (both 1-based).
    #[inline]
    pub fn get(&self, i: usize, k: usize) -> &S {
        &self.data[self.idx(i, k)]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, k: usize, value: S) {
        let idx = self.idx(i, k);
        self.data[idx] = value;
    }

    pub fn get_f64(&self, i: usize, k: usize) -> f64 {
        self.get(i, k).to_f64()
    }
}

/// The three tables of one instance: optimal-play values `psi`,
/// accept-first-nice values `phi`, and the forward state distribution
/// `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableSet<S> {
    pub psi: Table<S>,
    pub phi: Table<S>,
    pub theta: Table<S>,
}

/// Mode-dispatched table set, immutable once built.
#[derive(Debug, Clone)]
pub enum ValueTables {
    Binary64(TableSet<f64>),
    ExactRational(TableSet<BigRational>),
}

impl ValueTables {
    pub fn m(&self) -> usize {
        match self {
            ValueTables::Binary64(t) => t.psi.m(),
            ValueTables::ExactRational(t) => t.psi.m(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ValueTables::Binary64(t) => t.psi.n(),
            ValueTables::ExactRational(t) => t.psi.n(),
        }
    }

    pub fn psi(&self, i: usize, k: usize) -> f64 {
        match self {
            ValueTables::Binary64(t) => t.psi.get_f64(i, k),
            ValueTables::ExactRational(t) => t.psi.get_f64(i, k),
        }
    }

    pub fn phi(&self, i: usize, k: usize) -> f64 {
        match self {
            ValueTables::Binary64(t) => t.phi.get_f64(i, k),
            ValueTables::ExactRational(t) => t.phi.get_f64(i, k),
        }
    }

    pub fn theta(&self, i: usize, k: usize) -> f64 {
        match self {
            ValueTables::Binary64(t) => t.theta.get_f64(i, k),
            ValueTables::ExactRational(t) => t.theta.get_f64(i, k),
        }
    }

    pub fn exact(&self) -> Option<&TableSet<BigRational>> {
        match self {
            ValueTables::Binary64(_) => None,
            ValueTables::ExactRational(t) => Some(t),
        }
    }
}
