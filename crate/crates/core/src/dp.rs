//! Backward-induction value tables, the forward state distribution, the
//! optimal threshold, and the success probability, all in `O(m * n)`.
//!
//! State space: after inspecting some prefix of the arrival stream, the only
//! information that matters is `k`, the number of distinct candidates seen,
//! and `i`, how many of the `m` copies of the current maximal candidate have
//! been seen. Three tables are built over that state space:
//!
//! * `psi[i][k]`  is the probability of ending with the best candidate under
//!   optimal play from state `(k, i)`;
//! * `phi[i][k]`  is the same under the strategy that accepts the next nice
//!   candidate (a nice candidate is the final copy of the current maximal);
//! * `theta[i][k]` is the probability that the state is `(k, i)` when the `k`-th
//!   distinct candidate arrives.
//!
//! The success probability of the threshold-`k` strategy is
//! `P(k) = sum_i phi[i][k] * theta[i][k]`, the optimal threshold is the
//! smallest `k` with `k/n >= psi[m][k]`, and `psi[1][1]` recovers the optimal
//! success probability as an independent cross-check.

use num_rational::BigRational;

use crate::problem::{ArithmeticMode, Error, ProblemSpec};
use crate::scalar::Scalar;
use crate::tables::{Table, TableSet, ValueTables};

fn validate(m: usize, n: usize) -> Result<(), Error> {
    if m < 1 {
        return Err(Error::InvalidCopyCount(m));
    }
    if n < 1 {
        return Err(Error::InvalidCandidateCount(n));
    }
    Ok(())
}

/// Backward sweep shared by `psi` and `phi`; the two differ only in the value
/// assigned to the decision node where the last copy of the maximal candidate
/// arrives (`accept_always` takes `k/n` unconditionally, the optimal rule
/// takes `max{k/n, row m at k}`).
fn backward_table<S: Scalar>(m: usize, n: usize, accept_always: bool) -> Table<S> {
    let mut t = Table::filled(m, n, S::one());
    t.set(m, n, S::zero());

    let (mm, nn) = (m as i128, n as i128);
    for k in (1..n).rev() {
        let kk = k as i128;
        // copies still unseen among candidates not yet inspected
        let q = mm * (nn - kk);

        // i = m: the next distinct candidate is maximal with probability
        // 1/(k+1), resetting the appearance count to one. Written as the
        // base value plus a non-negative correction so the row stays
        // non-increasing in k even under floating-point rounding.
        let same = t.get(m, k + 1).clone();
        let reset = t.get(1, k + 1).clone();
        let top = same.clone() + (reset - same) * S::ratio(1, kk + 1);
        t.set(m, k, top);

        if m >= 2 {
            // i = m - 1: the next inspected object is the last copy of the
            // maximal candidate with probability 1/(q+1); that arrival is the
            // decision node.
            let d = q + 1;
            let node = if accept_always {
                S::ratio(kk, nn)
            } else {
                S::max_of(S::ratio(kk, nn), t.get(m, k).clone())
            };
            let v = S::ratio(1, d) * node
                + S::ratio(kk * q, (kk + 1) * d) * t.get(m - 1, k + 1).clone()
                + S::ratio(q, (kk + 1) * d) * t.get(1, k + 1).clone();
            t.set(m - 1, k, v);
        }

        // 1 <= i <= m - 2: another copy of the maximal arrives with
        // probability (m-i)/(q+m-i) and bumps the appearance count in place.
        for i in (1..m.saturating_sub(1)).rev() {
            let ii = i as i128;
            let d = q + mm - ii;
            let v = S::ratio(kk * q, (kk + 1) * d) * t.get(i, k + 1).clone()
                + S::ratio(mm - ii, d) * t.get(i + 1, k).clone()
                + S::ratio(q, (kk + 1) * d) * t.get(1, k + 1).clone();
            t.set(i, k, v);
        }
    }
    t
}

/// Optimal-play values for `m >= 2`. For `m = 1` use [`classic_m1`].
pub fn psi_table<S: Scalar>(m: usize, n: usize) -> Result<Table<S>, Error> {
    validate(m, n)?;
    if m < 2 {
        return Err(Error::CopyCountTooSmall(m));
    }
    Ok(backward_table(m, n, false))
}

/// Accept-first-nice values for `m >= 2`.
pub fn phi_table<S: Scalar>(m: usize, n: usize) -> Result<Table<S>, Error> {
    validate(m, n)?;
    if m < 2 {
        return Err(Error::CopyCountTooSmall(m));
    }
    Ok(backward_table(m, n, true))
}

/// The single-copy problem. With `m = 1` a record is its own decision node,
/// so the backward recurrences degenerate to the classical ones:
/// `psi(k) = k/(k+1) psi(k+1) + 1/(k+1) max{(k+1)/n, psi(k+1)}` and
/// `phi(k) = 1/n + k/(k+1) phi(k+1)`, both zero at `k = n`.
pub fn classic_m1<S: Scalar>(n: usize) -> Result<(Table<S>, Table<S>), Error> {
    validate(1, n)?;
    let mut psi = Table::filled(1, n, S::zero());
    let mut phi = Table::filled(1, n, S::zero());
    let nn = n as i128;
    for k in (1..n).rev() {
        let kk = k as i128;
        let next = psi.get(1, k + 1).clone();
        let node = S::max_of(S::ratio(kk + 1, nn), next.clone());
        // same non-negative-correction shape as the multi-copy top row
        psi.set(1, k, next.clone() + (node - next) * S::ratio(1, kk + 1));
        phi.set(
            1,
            k,
            S::ratio(1, nn) + S::ratio(kk, kk + 1) * phi.get(1, k + 1).clone(),
        );
    }
    Ok((psi, phi))
}

/// Forward distribution of the appearance count of the current maximal at
/// the arrival of the `k`-th distinct candidate. Valid for every `m >= 1`.
pub fn theta_table<S: Scalar>(m: usize, n: usize) -> Result<Table<S>, Error> {
    validate(m, n)?;
    let mut t = Table::filled(m, n, S::zero());
    t.set(1, 1, S::one());

    let (mm, nn) = (m as i128, n as i128);
    for k in 2..=n {
        let kk = k as i128;
        // copies not yet dealt before the (k-1)-th distinct arrival
        let q = mm * (nn - kk + 1);
        let d1 = q + mm - 1;

        // i = 1: either the k-th distinct candidate is a new maximal (1/k),
        // or the previous maximal stays at one appearance. The carry factor
        // (m-1)/(k d1) + q/d1 - 1/k reduces to q(k-1)/(k d1).
        let v1 = S::ratio(1, kk) + S::ratio(q * (kk - 1), kk * d1) * t.get(1, k - 1).clone();
        t.set(1, k, v1);

        if m >= 2 {
            let d2 = q + mm - 2;
            let v2 = S::ratio((kk - 1) * q, kk * d2) * t.get(2, k - 1).clone()
                + S::ratio((kk - 1) * (mm - 1) * q, kk * d2 * d1) * t.get(1, k - 1).clone();
            t.set(2, k, v2);
        }

        for i in 3..=m {
            let ii = i as i128;
            let di = q + mm - ii;
            let v = S::ratio((kk - 1) * q, kk * di) * t.get(i, k - 1).clone()
                + S::ratio(mm - ii + 1, di) * t.get(i - 1, k).clone();
            t.set(i, k, v);
        }
    }
    Ok(t)
}

/// All three tables for an instance, with the `m = 1` recurrences routed in
/// automatically.
pub fn table_set<S: Scalar>(m: usize, n: usize) -> Result<TableSet<S>, Error> {
    let (psi, phi) = if m == 1 {
        classic_m1(n)?
    } else {
        (psi_table(m, n)?, phi_table(m, n)?)
    };
    let theta = theta_table(m, n)?;
    Ok(TableSet { psi, phi, theta })
}

/// Smallest `k` with `k/n >= psi[m][k]`. The set of such `k` is nonempty
/// (`psi[m][n] = 0`) and must be upward closed; a gap means the strategy is
/// not a threshold strategy and is reported as a self-check failure.
pub fn optimal_threshold<S: Scalar>(psi: &Table<S>) -> Result<usize, Error> {
    let (m, n) = (psi.m(), psi.n());
    let nn = n as i128;
    let mut k_star = None;
    for k in 1..=n {
        let stop = S::ratio(k as i128, nn) >= *psi.get(m, k);
        match (k_star, stop) {
            (None, true) => k_star = Some(k),
            (Some(first), false) => {
                return Err(Error::SelfCheck(format!(
                    "stopping set has a gap: k = {first} stops but k = {k} does not"
                )));
            }
            _ => {}
        }
    }
    k_star.ok_or_else(|| Error::SelfCheck("empty stopping set".into()))
}

/// Success probability of the threshold-`k` strategy.
///
/// For `m >= 2` this is `sum_i phi[i][k] * theta[i][k]` (a first appearance
/// is never nice, so conditioning at the arrival of the `k`-th distinct
/// candidate loses nothing). For `m = 1` the record arriving as the `k`-th
/// distinct candidate is itself acceptable, so the value is `phi(k-1)`, with
/// `phi(0) = 1/n` (the strategy that accepts the very first candidate).
pub fn success_probability<S: Scalar>(
    phi: &Table<S>,
    theta: &Table<S>,
    k: usize,
) -> Result<S, Error> {
    let (m, n) = (phi.m(), phi.n());
    if k < 1 || k > n {
        return Err(Error::ThresholdOutOfRange { k, n });
    }
    if m == 1 {
        return Ok(if k == 1 {
            S::ratio(1, n as i128)
        } else {
            phi.get(1, k - 1).clone()
        });
    }
    let mut acc = S::zero();
    for i in 1..=m {
        acc = acc + phi.get(i, k).clone() * theta.get(i, k).clone();
    }
    Ok(acc)
}

/// Threshold, success probability, and the `psi[1][1]` cross-check for one
/// instance, in one arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<S> {
    pub m: usize,
    pub n: usize,
    pub k_star: usize,
    pub p_success: S,
    /// Optimal value recovered from the backward sweep alone; must agree
    /// with `p_success`.
    pub p_check: S,
}

pub fn solve_generic<S: Scalar>(m: usize, n: usize) -> Result<Solution<S>, Error> {
    validate(m, n)?;
    let (k_star, p_success, p_check);
    if m == 1 {
        let (psi, phi) = classic_m1::<S>(n)?;
        k_star = optimal_threshold(&psi)?;
        let theta = theta_table::<S>(1, n)?;
        p_success = success_probability(&phi, &theta, k_star)?;
        p_check = S::max_of(S::ratio(1, n as i128), psi.get(1, 1).clone());
    } else {
        let psi = psi_table::<S>(m, n)?;
        k_star = optimal_threshold(&psi)?;
        p_check = psi.get(1, 1).clone();
        drop(psi);
        let phi = phi_table::<S>(m, n)?;
        let theta = theta_table::<S>(m, n)?;
        p_success = success_probability(&phi, &theta, k_star)?;
    }
    Ok(Solution {
        m,
        n,
        k_star,
        p_success,
        p_check,
    })
}

/// Mode-dispatched solution.
#[derive(Debug, Clone)]
pub enum ThresholdSolution {
    Binary64(Solution<f64>),
    ExactRational(Solution<BigRational>),
}

impl ThresholdSolution {
    pub fn k_star(&self) -> usize {
        match self {
            ThresholdSolution::Binary64(s) => s.k_star,
            ThresholdSolution::ExactRational(s) => s.k_star,
        }
    }

    pub fn p_success(&self) -> f64 {
        match self {
            ThresholdSolution::Binary64(s) => s.p_success,
            ThresholdSolution::ExactRational(s) => s.p_success.to_f64(),
        }
    }

    pub fn p_check(&self) -> f64 {
        match self {
            ThresholdSolution::Binary64(s) => s.p_check,
            ThresholdSolution::ExactRational(s) => s.p_check.to_f64(),
        }
    }

    pub fn exact(&self) -> Option<&Solution<BigRational>> {
        match self {
            ThresholdSolution::Binary64(_) => None,
            ThresholdSolution::ExactRational(s) => Some(s),
        }
    }
}

/// Agreement required between `p_success` and the `psi[1][1]` cross-check in
/// binary64 mode. Exact-rational mode requires equality.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-9;

/// Solves an instance in its requested arithmetic and verifies the
/// `p_success` / `p_check` agreement.
pub fn solve(spec: &ProblemSpec) -> Result<ThresholdSolution, Error> {
    match spec.mode {
        ArithmeticMode::Binary64 => {
            let s = solve_generic::<f64>(spec.m, spec.n)?;
            if (s.p_success - s.p_check).abs() > CROSS_CHECK_TOLERANCE {
                return Err(Error::SelfCheck(format!(
                    "threshold-strategy value {} and optimal-play value {} disagree",
                    s.p_success, s.p_check
                )));
            }
            Ok(ThresholdSolution::Binary64(s))
        }
        ArithmeticMode::ExactRational => {
            let s = solve_generic::<BigRational>(spec.m, spec.n)?;
            if s.p_success != s.p_check {
                return Err(Error::SelfCheck(format!(
                    "threshold-strategy value {} and optimal-play value {} differ exactly",
                    s.p_success, s.p_check
                )));
            }
            Ok(ThresholdSolution::ExactRational(s))
        }
    }
}

/// Builds the three tables for an instance in its requested arithmetic.
pub fn tables(spec: &ProblemSpec) -> Result<ValueTables, Error> {
    match spec.mode {
        ArithmeticMode::Binary64 => Ok(ValueTables::Binary64(table_set(spec.m, spec.n)?)),
        ArithmeticMode::ExactRational => Ok(ValueTables::ExactRational(table_set(spec.m, spec.n)?)),
    }
}

impl ValueTables {
    /// Success probability of the threshold-`k` strategy, as a float view.
    pub fn success_at(&self, k: usize) -> Result<f64, Error> {
        match self {
            ValueTables::Binary64(t) => success_probability(&t.phi, &t.theta, k),
            ValueTables::ExactRational(t) => Ok(success_probability(&t.phi, &t.theta, k)?.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(n: i128, d: i128) -> BigRational {
        <BigRational as Scalar>::ratio(n, d)
    }

    #[test]
    fn boundary_rows() {
        let psi = psi_table::<f64>(3, 5).unwrap();
        assert_eq!(*psi.get(3, 5), 0.0);
        assert_eq!(*psi.get(2, 5), 1.0);
        assert_eq!(*psi.get(1, 5), 1.0);
        let phi = phi_table::<f64>(3, 5).unwrap();
        assert_eq!(*phi.get(3, 5), 0.0);
        assert_eq!(*phi.get(1, 5), 1.0);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(psi_table::<f64>(1, 10).is_err());
        assert!(psi_table::<f64>(2, 0).is_err());
        assert!(theta_table::<f64>(0, 10).is_err());
        assert!(solve_generic::<f64>(3, 0).is_err());
    }

    #[test]
    fn two_copies_of_one_hundred() {
        let s = solve_generic::<f64>(2, 100).unwrap();
        assert_eq!(s.k_star, 48);
        assert!((s.p_success - 0.76970661).abs() < 5e-8);
    }

    #[test]
    fn published_thresholds() {
        assert_eq!(solve_generic::<f64>(3, 1000).unwrap().k_star, 493);
        assert_eq!(solve_generic::<f64>(10, 10000).unwrap().k_star, 5000);
    }

    #[test]
    fn published_probabilities() {
        let s = solve_generic::<f64>(1, 1000).unwrap();
        assert_eq!(s.k_star, 369);
        assert!((s.p_success - 0.36819561).abs() < 5e-8);

        let s = solve_generic::<f64>(5, 10000).unwrap();
        assert_eq!(s.k_star, 4995);
        assert!((s.p_success - 0.99561693).abs() < 5e-8);
    }

    #[test]
    fn classic_single_copy_case() {
        let s = solve_generic::<f64>(1, 100).unwrap();
        assert_eq!(s.k_star, 38);
        assert!((s.p_success - 0.37104277).abs() < 5e-8);

        // Two candidates: only the order (worse, better) wins.
        let s = solve_generic::<BigRational>(1, 2).unwrap();
        assert_eq!(s.p_success, rat(1, 2));
    }

    #[test]
    fn success_probability_at_fixed_thresholds() {
        let t = table_set::<f64>(2, 100).unwrap();
        let p = success_probability(&t.phi, &t.theta, 48).unwrap();
        assert!((p - 0.76970661).abs() < 5e-8);

        let t = table_set::<f64>(3, 100).unwrap();
        let p = success_probability(&t.phi, &t.theta, 50).unwrap();
        assert!((p - 0.93518916).abs() < 5e-8);
    }

    #[test]
    fn threshold_out_of_range() {
        let t = table_set::<f64>(2, 10).unwrap();
        assert!(matches!(
            success_probability(&t.phi, &t.theta, 0),
            Err(Error::ThresholdOutOfRange { .. })
        ));
        assert!(success_probability(&t.phi, &t.theta, 11).is_err());
    }

    #[test]
    fn theta_small_cases_exact() {
        // m = 2, n = 2 at k = 2: 5/6 and 1/6.
        let t = theta_table::<BigRational>(2, 2).unwrap();
        assert_eq!(*t.get(1, 2), rat(5, 6));
        assert_eq!(*t.get(2, 2), rat(1, 6));

        // m = 3, n = 2 at k = 2: 4/5, 3/20, 1/20.
        let t = theta_table::<BigRational>(3, 2).unwrap();
        assert_eq!(*t.get(1, 2), rat(4, 5));
        assert_eq!(*t.get(2, 2), rat(3, 20));
        assert_eq!(*t.get(3, 2), rat(1, 20));
    }

    #[test]
    fn theta_single_copy_is_always_one() {
        let t = theta_table::<f64>(1, 17).unwrap();
        for k in 1..=17 {
            assert_eq!(*t.get(1, k), 1.0);
        }
    }

    #[test]
    fn single_candidate_always_succeeds() {
        for m in 1..=5 {
            let spec = ProblemSpec::binary64(m, 1).unwrap();
            let s = solve(&spec).unwrap();
            assert_eq!(s.k_star(), 1);
            assert_eq!(s.p_success(), 1.0);
        }
    }

    #[test]
    fn exact_mode_cross_check_is_equality() {
        for (m, n) in [(2, 2), (2, 7), (3, 5), (4, 4), (1, 9)] {
            let spec = ProblemSpec::exact(m, n).unwrap();
            let s = solve(&spec).unwrap();
            let e = s.exact().unwrap();
            assert_eq!(e.p_success, e.p_check, "(m, n) = ({m}, {n})");
        }
    }
}
