//! Large-`n` limits: the linear ODE system satisfied by the limiting
//! accept-first-nice profiles `y_1..y_m`, its exact power-series solution at
//! `x = 1`, the limiting threshold fraction as the fixed point of
//! `x = y_m(x)`, the closed-form limit `z^i` of the state distribution, and
//! the limiting success probability `pi_m = sum_i y_i z^i` at the fixed
//! point.

mod fixed;
mod series;

pub use fixed::{inv_e, Fixed};
pub use series::{tail_bound, taylor_solve, CertifiedValue, FixedSeries, TaylorSeries};

use crate::problem::Error;

// ---------------------------------------------------------------------------
// The ODE system
// ---------------------------------------------------------------------------

/// One linear equation `dy_coeff(x) * y_i'(x) = sum_j rhs_j(x) * y_j(x) +
/// inhomogeneous(x)`, with every coefficient an integer polynomial in `x`
/// (stored low degree first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeEquation {
    pub dy_coeff: Vec<i64>,
    /// `(component index, polynomial)` pairs; indices are 1-based and may
    /// repeat (contributions add).
    pub rhs: Vec<(usize, Vec<i64>)>,
    pub inhomogeneous: Vec<i64>,
}

/// The `m`-equation system on `(0, 1)` with boundary `y_i(1) = 1` for
/// `i < m` and `y_m(1) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeSystem {
    pub m: usize,
    /// Equation for `y_{e+1}` at index `e`.
    pub equations: Vec<OdeEquation>,
    /// Values at `x = 1`.
    pub boundary: Vec<i64>,
}

fn first_equation(m: i64) -> OdeEquation {
    // m(1-x) y_1' = (m-1) y_1 - (m-1) y_2
    OdeEquation {
        dy_coeff: vec![m, -m],
        rhs: vec![(1, vec![m - 1]), (2, vec![-(m - 1)])],
        inhomogeneous: vec![],
    }
}

/// The generic interior equation,
/// `m x (1-x) y_i' = m(x-1) y_1 + (m - i x) y_i - x (m-i) y_{i+1}`,
/// public so its reduction to the `i = 1` equation can be checked.
pub fn middle_equation(m: usize, i: usize) -> OdeEquation {
    let (m, i) = (m as i64, i as i64);
    OdeEquation {
        dy_coeff: vec![0, m, -m],
        rhs: vec![
            (1, vec![-m, m]),
            (i as usize, vec![m, -i]),
            (i as usize + 1, vec![0, -(m - i)]),
        ],
        inhomogeneous: vec![],
    }
}

fn second_to_last_equation(m: i64) -> OdeEquation {
    // m x (1-x) y_{m-1}' = -m(1-x) y_1 + (m - (m-1)x) y_{m-1} - x^2
    OdeEquation {
        dy_coeff: vec![0, m, -m],
        rhs: vec![(1, vec![-m, m]), (m as usize - 1, vec![m, -(m - 1)])],
        inhomogeneous: vec![0, 0, -1],
    }
}

fn last_equation(m: usize) -> OdeEquation {
    // x y_m' = y_m - y_1
    OdeEquation {
        dy_coeff: vec![0, 1],
        rhs: vec![(m, vec![1]), (1, vec![-1])],
        inhomogeneous: vec![],
    }
}

/// Builds the limit system for `m >= 2` copies. For `m = 2` only the last
/// two equation shapes remain; the interior family is present from `m = 4`.
pub fn build_system(m: usize) -> Result<OdeSystem, Error> {
    if m < 2 {
        return Err(Error::CopyCountTooSmall(m));
    }
    let mm = m as i64;
    let mut equations = Vec::with_capacity(m);
    if m >= 3 {
        equations.push(first_equation(mm));
    }
    for i in 2..=m.saturating_sub(2) {
        equations.push(middle_equation(m, i));
    }
    equations.push(second_to_last_equation(mm));
    equations.push(last_equation(m));
    let mut boundary = vec![1i64; m];
    boundary[m - 1] = 0;
    Ok(OdeSystem {
        m,
        equations,
        boundary,
    })
}

// ---------------------------------------------------------------------------
// Threshold fraction: fixed point of x = y_m(x)
// ---------------------------------------------------------------------------

/// High-precision limiting threshold fraction.
#[derive(Debug, Clone)]
pub struct ThetaLimit {
    pub m: usize,
    pub order: usize,
    pub value: Fixed,
    /// Certified error radius: bisection width plus the series tail.
    pub radius: f64,
}

fn scale_for(tol: f64) -> u32 {
    ((-tol.log10()).ceil().max(0.0) as u32 + 10).max(30)
}

/// Bisection of `g(x) = series(x) - x` on a sign-changing bracket. The
/// bracket `[1/4, 1]` is tried first; failing a sign change there, `[0.01,
/// 1]` is scanned in steps of `0.01`.
fn fixed_point(series: &TaylorSeries, m: usize, tol: f64, scale: u32) -> Result<Fixed, Error> {
    let fs = series.at_scale(scale);
    let g = |x: &Fixed| fs.eval(x).sub(x);
    let zero = Fixed::zero(scale);

    let quarter = Fixed::from_int(1, scale).div_int(4);
    let one = Fixed::one(scale);
    let (mut pos, mut neg);
    if g(&quarter) > zero && g(&one) < zero {
        pos = quarter;
        neg = one;
    } else {
        let points: Vec<Fixed> = (1..=100)
            .map(|c| Fixed::from_int(c, scale).div_int(100))
            .collect();
        let signs: Vec<Fixed> = points.iter().map(&g).collect();
        let Some(w) = (0..99).find(|&w| {
            (signs[w] > zero && signs[w + 1] < zero) || (signs[w] < zero && signs[w + 1] > zero)
        }) else {
            return Err(Error::NoBracket { m });
        };
        if signs[w] > zero {
            pos = points[w].clone();
            neg = points[w + 1].clone();
        } else {
            pos = points[w + 1].clone();
            neg = points[w].clone();
        }
    }

    let width = (pos.to_f64() - neg.to_f64()).abs();
    let steps = (width / tol).log2().ceil().max(1.0) as u32;
    for _ in 0..steps {
        let mid = pos.add(&neg).div_int(2);
        let v = g(&mid);
        if v > zero {
            pos = mid;
        } else if v < zero {
            neg = mid;
        } else {
            return Ok(mid);
        }
    }
    Ok(pos.add(&neg).div_int(2))
}

/// Limiting threshold fraction `lim k*/n` for `m` copies: `1/e` for a single
/// copy, otherwise the root of `x = y_m(x)` located by bisection on the
/// certified truncated series.
pub fn theta_limit(m: usize, order: usize, tol: f64) -> Result<ThetaLimit, Error> {
    if m < 1 {
        return Err(Error::InvalidCopyCount(m));
    }
    let scale = scale_for(tol);
    if m == 1 {
        return Ok(ThetaLimit {
            m,
            order,
            value: inv_e(scale),
            radius: 10f64.powi(-(scale as i32) + 2),
        });
    }
    let system = build_system(m)?;
    let all = taylor_solve(&system, order)?;
    let y_m = &all[m - 1];
    y_m.certify()?;
    let value = fixed_point(y_m, m, tol, scale)?;
    let tail = tail_bound(order, value.to_f64());
    if tail > tol {
        return Err(Error::ToleranceUnreachable { tol, order, tail });
    }
    Ok(ThetaLimit {
        m,
        order,
        value,
        radius: tol + tail,
    })
}

// ---------------------------------------------------------------------------
// Closed-form state-distribution limits
// ---------------------------------------------------------------------------

fn binomial(m: usize, i: usize) -> u128 {
    let mut acc: u128 = 1;
    for j in 0..i.min(m - i) {
        acc = acc * (m - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// Limit of the probability that the current maximal has been seen exactly
/// `i` times when a fraction `x` of the candidates has been inspected:
/// `C(m, i) u^i v^(m-i) / x` with `v = (1-x)^(1/m)` and `u = 1 - v`. The
/// binomial theorem makes these sum to one over `i`, and the `x = 0` limits
/// (`1` for `i = 1`, `0` otherwise) are taken analytically.
pub fn z_closed(m: usize, i: usize, x: f64) -> Result<f64, Error> {
    if i < 1 || i > m {
        return Err(Error::ComponentOutOfRange { i, m });
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::EvaluationOutOfDomain { x });
    }
    if x == 0.0 {
        return Ok(if i == 1 { 1.0 } else { 0.0 });
    }
    if m == 1 {
        // single copy: the maximal has always been seen exactly once
        return Ok(1.0);
    }
    let v = (1.0 - x).powf(1.0 / m as f64);
    let u = 1.0 - v;
    Ok(binomial(m, i) as f64 * u.powi(i as i32) * v.powi((m - i) as i32) / x)
}

fn z_closed_fixed(m: usize, i: usize, x: &Fixed) -> Fixed {
    let scale = x.scale();
    let v = Fixed::one(scale).sub(x).nth_root(m as u32);
    let u = Fixed::one(scale).sub(&v);
    Fixed::from_int(binomial(m, i) as i64, scale)
        .mul(&u.powi(i as u32))
        .mul(&v.powi((m - i) as u32))
        .div(x)
}

// ---------------------------------------------------------------------------
// Limiting success probability
// ---------------------------------------------------------------------------

/// High-precision limiting success probability.
#[derive(Debug, Clone)]
pub struct LimitProbability {
    pub m: usize,
    pub order: usize,
    pub value: Fixed,
    pub radius: f64,
}

/// Threshold fraction and success-probability limits of one instance family,
/// certified to `digits` decimal places.
#[derive(Debug, Clone)]
pub struct AsymptoticSolution {
    pub m: usize,
    pub order: usize,
    pub digits: u32,
    pub theta: Fixed,
    pub theta_radius: f64,
    pub p_limit: Fixed,
    pub p_radius: f64,
}

/// Computes both limits for `m` copies at the given series order. Errors if
/// the coefficient bound backing the tail certificate fails or if `digits`
/// decimal places cannot be certified at this order.
pub fn asymptotic_solution(
    m: usize,
    order: usize,
    digits: u32,
) -> Result<AsymptoticSolution, Error> {
    if m < 1 {
        return Err(Error::InvalidCopyCount(m));
    }
    let tol = 10f64.powi(-(digits as i32) - 2);
    let scale = scale_for(tol) + digits / 2;
    if m == 1 {
        // Classical single-copy limits: both equal 1/e.
        let e = inv_e(scale);
        let radius = 10f64.powi(-(scale as i32) + 2);
        return Ok(AsymptoticSolution {
            m,
            order,
            digits,
            theta: e.clone(),
            theta_radius: radius,
            p_limit: e,
            p_radius: radius,
        });
    }

    let system = build_system(m)?;
    let all = taylor_solve(&system, order)?;
    for s in &all {
        s.certify()?;
    }

    let theta = fixed_point(&all[m - 1], m, tol, scale)?;
    let theta_f64 = theta.to_f64();
    let tail = tail_bound(order, theta_f64);
    if tail > tol {
        return Err(Error::ToleranceUnreachable { tol, order, tail });
    }
    let theta_radius = tol + tail;

    let mut p = Fixed::zero(scale);
    for (idx, series) in all.iter().enumerate() {
        let y = series.at_scale(scale).eval(&theta);
        let z = z_closed_fixed(m, idx + 1, &theta);
        p = p.add(&y.mul(&z));
    }
    // The fixed point maximizes pi_m, so the theta error enters only at
    // second order; it is still charged in full here.
    let p_radius = m as f64 * tail + theta_radius + 10f64.powi(-(scale as i32) + 3);
    if p_radius > 10f64.powi(-(digits as i32)) {
        return Err(Error::ToleranceUnreachable {
            tol: 10f64.powi(-(digits as i32)),
            order,
            tail: p_radius,
        });
    }
    Ok(AsymptoticSolution {
        m,
        order,
        digits,
        theta,
        theta_radius,
        p_limit: p,
        p_radius,
    })
}

/// Limiting success probability `pi_m` at the threshold fixed point.
pub fn limit_probability(m: usize, order: usize, digits: u32) -> Result<LimitProbability, Error> {
    let sol = asymptotic_solution(m, order, digits)?;
    Ok(LimitProbability {
        m,
        order,
        value: sol.p_limit,
        radius: sol.p_radius,
    })
}
