//! Exact power-series solution of the limit ODE system around `x = 1`.
//!
//! Internally the series live in the variable `t = 1 - x`, where the
//! boundary data sits at `t = 0`. The point is singular for every scaled
//! equation except the last one, so the coefficients of one order are found
//! together: matching the `t^s` terms of all `m` equations yields an
//! `m x m` rational linear system for the order-`s` coefficients, solved
//! exactly order by order. A singular step or an unbounded coefficient is
//! reported as an error rather than silently degrading the certificate.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::fixed::Fixed;
use super::OdeSystem;
use crate::problem::Error;
use crate::scalar::big_rational_to_f64;

/// Truncated Taylor expansion of one solution component around `x = 1`,
/// stored as exact rational coefficients of `t = 1 - x`.
#[derive(Debug, Clone)]
pub struct TaylorSeries {
    component: usize,
    coeffs: Vec<BigRational>,
    coeffs_f64: Vec<f64>,
    /// First coefficient with `|a_j| > 1` for `j >= 1`, if any; its presence
    /// voids the geometric tail certificate.
    bound_violation: Option<(usize, f64)>,
}

impl TaylorSeries {
    fn new(component: usize, coeffs: Vec<BigRational>) -> Self {
        let coeffs_f64 = coeffs.iter().map(big_rational_to_f64).collect();
        let one = BigRational::one();
        let bound_violation = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, a)| a.abs() > one)
            .map(|(j, a)| (j, big_rational_to_f64(&a.abs())));
        Self {
            component,
            coeffs,
            coeffs_f64,
            bound_violation,
        }
    }

    /// 1-based index of the component `y_i` this series expands.
    pub fn component(&self) -> usize {
        self.component
    }

    /// Truncation order `N` (the highest retained power of `t`).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^j`.
    pub fn coeff(&self, j: usize) -> &BigRational {
        &self.coeffs[j]
    }

    /// Value at `x = 1`, reproduced exactly by evaluation at `t = 0`.
    pub fn boundary(&self) -> &BigRational {
        &self.coeffs[0]
    }

    /// Errors unless every coefficient past the constant term has
    /// `|a_j| <= 1`, the hypothesis behind the geometric tail bound.
    pub fn certify(&self) -> Result<(), Error> {
        match self.bound_violation {
            None => Ok(()),
            Some((order, magnitude)) => Err(Error::CoefficientBoundViolated {
                index: self.component,
                order,
                magnitude,
            }),
        }
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let t = BigRational::one() - x;
        let mut acc = BigRational::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * &t + a;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let t = 1.0 - x;
        self.coeffs_f64.iter().rev().fold(0.0, |acc, a| acc * t + a)
    }

    /// Snapshot of the coefficients at a fixed working scale, for repeated
    /// high-precision evaluation.
    pub fn at_scale(&self, scale: u32) -> FixedSeries {
        FixedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| Fixed::from_rational(a, scale))
                .collect(),
            scale,
        }
    }

    /// Certified evaluation: the truncated sum plus the geometric tail
    /// radius. `x` must lie in `[1/4, 1]` and the coefficient bound must
    /// hold, otherwise the tail is not certified and an error is returned.
    pub fn evaluate(&self, x: f64) -> Result<CertifiedValue, Error> {
        if !(0.25..=1.0).contains(&x) {
            return Err(Error::EvaluationOutOfDomain { x });
        }
        self.certify()?;
        Ok(CertifiedValue {
            value: self.eval_f64(x),
            radius: tail_bound(self.order(), x),
        })
    }
}

/// A truncated-series value together with the radius certifying it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedValue {
    pub value: f64,
    pub radius: f64,
}

/// Tail radius of an order-`N` series with unit-bounded coefficients:
/// `sum_{j > N} (1-x)^j = (1-x)^{N+1} / x`.
pub fn tail_bound(order: usize, x: f64) -> f64 {
    if x >= 1.0 {
        return 0.0;
    }
    (1.0 - x).powi(order as i32 + 1) / x
}

/// Fixed-scale view of a series for Horner evaluation.
#[derive(Debug, Clone)]
pub struct FixedSeries {
    coeffs: Vec<Fixed>,
    scale: u32,
}

impl FixedSeries {
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn eval(&self, x: &Fixed) -> Fixed {
        assert_eq!(x.scale(), self.scale);
        let t = Fixed::one(self.scale).sub(x);
        let mut acc = Fixed::zero(self.scale);
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&t).add(a);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Order-by-order solve
// ---------------------------------------------------------------------------

/// `p(1 - t)` for an integer polynomial `p`, as rational `t`-coefficients.
fn poly_in_t(p: &[i64]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p.len()];
    for (d, &c) in p.iter().enumerate() {
        if c == 0 {
            continue;
        }
        // (1 - t)^d expands with alternating binomials.
        let mut binom: i64 = 1;
        for (j, slot) in out.iter_mut().enumerate().take(d + 1) {
            let signed = if j % 2 == 0 { binom } else { -binom };
            *slot += BigRational::from_integer((c * signed).into());
            binom = binom * (d - j) as i64 / (j + 1) as i64;
        }
    }
    out
}

struct TEquation {
    lhs: Vec<BigRational>,
    rhs: Vec<(usize, Vec<BigRational>)>,
    inhom: Vec<BigRational>,
    /// Singular at `t = 0` (the factor multiplying `y'` vanishes at `x = 1`).
    singular: bool,
}

/// Exact Gaussian elimination; `None` when the matrix is singular.
fn solve_linear(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col][col..].to_vec();
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &pivot_row[0];
            for (slot, pv) in a[row][col..].iter_mut().zip(&pivot_row) {
                *slot -= &factor * pv;
            }
            let sub = &factor * &b[col];
            b[row] -= sub;
        }
    }
    Some((0..n).map(|r| &b[r] / &a[r][r]).collect())
}

/// Solves the system as truncated series around `x = 1`, matching
/// coefficients with exact rational arithmetic up to the requested order.
pub fn taylor_solve(system: &OdeSystem, order: usize) -> Result<Vec<TaylorSeries>, Error> {
    if order < 2 {
        return Err(Error::OrderTooSmall(order));
    }
    let m = system.m;
    let equations: Vec<TEquation> = system
        .equations
        .iter()
        .map(|eq| {
            let lhs = poly_in_t(&eq.dy_coeff);
            let singular = lhs[0].is_zero();
            TEquation {
                lhs,
                rhs: eq.rhs.iter().map(|(j, p)| (*j, poly_in_t(p))).collect(),
                inhom: poly_in_t(&eq.inhomogeneous),
                singular,
            }
        })
        .collect();

    // Order 0 is the boundary data; the singular equations' t^0 relations
    // must already hold on it.
    let mut coeffs: Vec<Vec<BigRational>> = vec![Vec::with_capacity(order + 1); m];
    for (i, row) in coeffs.iter_mut().enumerate() {
        row.push(BigRational::from_integer(system.boundary[i].into()));
    }
    for eq in equations.iter().filter(|e| e.singular) {
        let mut residual = eq.inhom.first().cloned().unwrap_or_else(BigRational::zero);
        for (j, poly) in &eq.rhs {
            residual += &poly[0] * &coeffs[*j - 1][0];
        }
        if !residual.is_zero() {
            return Err(Error::SelfCheck(
                "boundary data inconsistent with the singular equations".into(),
            ));
        }
    }

    for s in 1..=order {
        let mut a = vec![vec![BigRational::zero(); m]; m];
        let mut b = vec![BigRational::zero(); m];
        for (e, eq) in equations.iter().enumerate() {
            // The t^rel relation of a singular equation couples the order-s
            // coefficients; a regular equation determines its own order-s
            // coefficient from the relation one power lower.
            let rel = if eq.singular { s } else { s - 1 };
            for (p, lc) in eq.lhs.iter().enumerate() {
                if lc.is_zero() || p > rel {
                    continue;
                }
                let q1 = rel - p + 1; // index of the derivative coefficient
                let weight = lc * BigRational::from_integer((q1 as i64).into());
                if q1 == s {
                    a[e][e] -= &weight;
                } else {
                    b[e] += weight * &coeffs[e][q1];
                }
            }
            for (j, poly) in &eq.rhs {
                for (p, rc) in poly.iter().enumerate() {
                    if rc.is_zero() || p > rel {
                        continue;
                    }
                    let q = rel - p;
                    if q == s {
                        a[e][*j - 1] -= rc;
                    } else {
                        b[e] += rc * &coeffs[*j - 1][q];
                    }
                }
            }
            if rel < eq.inhom.len() {
                b[e] += &eq.inhom[rel];
            }
        }
        let solved = solve_linear(a, b).ok_or(Error::SeriesStepSingular { order: s })?;
        for (i, v) in solved.into_iter().enumerate() {
            coeffs[i].push(v);
        }
    }

    Ok(coeffs
        .into_iter()
        .enumerate()
        .map(|(i, c)| TaylorSeries::new(i + 1, c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::build_system;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn poly_substitution() {
        // -x^2 = -(1-t)^2 = -1 + 2t - t^2
        assert_eq!(
            poly_in_t(&[0, 0, -1]),
            vec![rat(-1, 1), rat(2, 1), rat(-1, 1)]
        );
        // m - m x = m t
        assert_eq!(poly_in_t(&[3, -3]), vec![rat(0, 1), rat(3, 1)]);
    }

    #[test]
    fn two_copy_series_in_closed_form() {
        // With two copies the system solves in closed form:
        // y_1 = (2 + x)/3 and y_2 = (2/3)(1 - x) - (x/3) ln x, whose
        // t-expansions are 1 - t/3 and t - sum_{j>=2} t^j / (3 j (j-1)).
        let sys = build_system(2).unwrap();
        let series = taylor_solve(&sys, 40).unwrap();
        let y1 = &series[0];
        assert_eq!(*y1.coeff(0), rat(1, 1));
        assert_eq!(*y1.coeff(1), rat(-1, 3));
        for j in 2..=40 {
            assert_eq!(*y1.coeff(j), rat(0, 1), "y1 coefficient {j}");
        }
        let y2 = &series[1];
        assert_eq!(*y2.coeff(0), rat(0, 1));
        assert_eq!(*y2.coeff(1), rat(1, 1));
        for j in 2..=40 {
            let expected = rat(-1, 3 * (j as i64) * (j as i64 - 1));
            assert_eq!(*y2.coeff(j), expected, "y2 coefficient {j}");
        }
    }

    #[test]
    fn last_component_starts_as_t() {
        for m in 2..=6 {
            let sys = build_system(m).unwrap();
            let series = taylor_solve(&sys, 8).unwrap();
            let ym = &series[m - 1];
            assert_eq!(*ym.coeff(0), rat(0, 1), "m = {m}");
            assert_eq!(*ym.coeff(1), rat(1, 1), "m = {m}");
        }
    }

    #[test]
    fn boundary_is_reproduced_exactly() {
        for m in 2..=5 {
            let sys = build_system(m).unwrap();
            for series in taylor_solve(&sys, 12).unwrap() {
                let one = BigRational::one();
                let at_one = series.eval_rational(&one);
                assert_eq!(&at_one, series.boundary());
            }
        }
    }

    #[test]
    fn unit_coefficient_bound_for_three_copies() {
        let sys = build_system(3).unwrap();
        let series = taylor_solve(&sys, 200).unwrap();
        for s in &series {
            s.certify().expect("all coefficients within the unit bound");
        }
    }

    #[test]
    fn tail_bound_values() {
        assert_eq!(tail_bound(10, 1.0), 0.0);
        // order 1000 on [1/4, 1]: worst case at the left endpoint
        assert!(tail_bound(1000, 0.25) < 4e-124);
        let loose = tail_bound(200, 0.49);
        assert!(loose < 1e-58, "got {loose}");
    }

    #[test]
    fn evaluate_rejects_out_of_domain() {
        let sys = build_system(2).unwrap();
        let series = taylor_solve(&sys, 20).unwrap();
        assert!(matches!(
            series[1].evaluate(0.1),
            Err(Error::EvaluationOutOfDomain { .. })
        ));
        let v = series[1].evaluate(1.0).unwrap();
        assert_eq!(v.value, 0.0);
        assert_eq!(v.radius, 0.0);
    }

    #[test]
    fn rejects_tiny_order() {
        let sys = build_system(2).unwrap();
        assert!(matches!(
            taylor_solve(&sys, 1),
            Err(Error::OrderTooSmall(1))
        ));
    }
}
