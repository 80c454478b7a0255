//! Reference integrators.
//!
//! [`integrate`] is an adaptive 7/15-point Gauss-Kronrod scheme in binary64
//! with QUADPACK-style error scaling. [`integrate_gauss_legendre`] is a
//! precision-generic adaptive Gauss-Legendre scheme whose nodes are computed
//! in the working precision, so it can be run in double-double.
//! [`integrate_piecewise`] integrates piecewise polynomials exactly.

// Kronrod and Gauss tables are kept at their published precision.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::expr::Expr;
use crate::piecewise::PiecewisePoly;
use crate::scalar::Real;

/// Maximum number of integrand evaluations per call.
pub const EVALUATION_CAP: usize = 1_000_000;

/// Smallest relative tolerance accepted by the public entry points.
pub const MIN_REL_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// roundoff floor of the error estimate
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = WGK[7] * fc;
    let mut res_g = WG[3] * fc;
    let mut res_abs = res_k.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
        *slot = (f1, f2);
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let h = half.abs();
    let value = res_k * half;
    res_abs *= h;
    res_asc *= h;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    if !value.is_finite() {
        return Err(Error::Domain {
            op: "integrand",
            at: center,
        });
    }
    Ok(Panel {
        a,
        b,
        value,
        error,
        floor,
    })
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Adaptive Gauss-Kronrod over `[points[0], points[last]]`, starting from the
/// panels delimited by `points`. No lower limit on `rel_tol`.
pub(crate) fn adaptive_gk<F>(f: &F, points: &[f64], rel_tol: f64) -> Result<OracleResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gk15(f, w[0], w[1])?);
            evaluations += 15;
        }
    }
    loop {
        let all = heap.iter().chain(done.iter());
        let (mut value, mut error, mut floor) = (0.0, 0.0, 0.0);
        for p in all {
            value += p.value;
            error += p.error;
            floor += p.floor;
        }
        let converged = error <= (rel_tol * value.abs()).max(2.0 * floor);
        if heap.is_empty() && !converged {
            return Err(Error::ToleranceNotReached {
                value,
                est_abs_error: error,
                evaluations,
            });
        }
        if converged {
            let mut panels: Vec<Panel> = heap.into_iter().chain(done).collect();
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
            return Ok(OracleResult {
                value: pairwise_sum(&values),
                est_abs_error: error,
                evaluations,
            });
        }
        if evaluations + 30 > EVALUATION_CAP {
            return Err(Error::ToleranceNotReached {
                value,
                est_abs_error: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            done.push(worst);
            continue;
        }
        heap.push(gk15(f, worst.a, mid)?);
        heap.push(gk15(f, mid, worst.b)?);
        evaluations += 30;
    }
}

fn check_tolerance(rel_tol: f64) -> Result<()> {
    if !(rel_tol >= MIN_REL_TOL) {
        return Err(Error::InvalidTolerance(rel_tol));
    }
    Ok(())
}

fn oriented<F>(f: &F, a: f64, b: f64, rel_tol: f64, breaks: &[f64]) -> Result<OracleResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInterval { a, b });
    }
    if a == b {
        return Ok(OracleResult {
            value: 0.0,
            est_abs_error: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut points = vec![lo];
    points.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
    points.push(hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut r = adaptive_gk(f, &points, rel_tol)?;
    r.value *= sign;
    Ok(r)
}

/// Integrates an expression over `[a, b]` to relative tolerance `rel_tol`.
pub fn integrate(e: &Expr, a: f64, b: f64, rel_tol: f64) -> Result<OracleResult> {
    check_tolerance(rel_tol)?;
    oriented(&|x| e.eval(x), a, b, rel_tol, &[])
}

/// Integrates an arbitrary fallible closure.
pub fn integrate_fn<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<OracleResult>
where
    F: Fn(f64) -> Result<f64>,
{
    check_tolerance(rel_tol)?;
    oriented(&f, a, b, rel_tol, &[])
}

/// Like [`integrate_fn`] with known interior breakpoints (kinks, jumps).
pub fn integrate_fn_with_breaks<F>(f: F, a: f64, b: f64, breaks: &[f64], rel_tol: f64) -> Result<OracleResult>
where
    F: Fn(f64) -> Result<f64>,
{
    check_tolerance(rel_tol)?;
    oriented(&f, a, b, rel_tol, breaks)
}

/// Exact integral of a piecewise polynomial over its whole support.
pub fn integrate_piecewise(pp: &PiecewisePoly) -> Rational {
    pp.integral()
}

/// Gauss-Legendre nodes and weights on [-1, 1] computed in precision `T`.
pub fn gauss_legendre_rule<T: Real>(order: usize) -> Vec<(T, T)> {
    let n = order;
    let mut rule = Vec::with_capacity(n);
    let legendre = |x: T| -> (T, T) {
        // (P_n(x), P_{n-1}(x))
        let mut p0 = T::one();
        let mut p1 = x;
        if n == 0 {
            return (p0, T::zero());
        }
        for k in 1..n {
            let kf = T::from_usize(k);
            let p2 = (T::from_usize(2 * k + 1) * x * p1 - kf * p0) / T::from_usize(k + 1);
            p0 = p1;
            p1 = p2;
        }
        (p1, p0)
    };
    let nf = T::from_usize(n);
    for i in 1..=n {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = T::from_f64(guess);
        for _ in 0..100 {
            let (pn, pm) = legendre(x);
            let dp = nf * (x * pn - pm) / (x * x - T::one());
            let dx = pn / dp;
            x -= dx;
            if dx.abs().to_f64() <= 4.0 * T::EPSILON {
                break;
            }
        }
        let (pn, pm) = legendre(x);
        let dp = nf * (x * pn - pm) / (x * x - T::one());
        let w = T::from_f64(2.0) / ((T::one() - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule
}

/// Adaptive Gauss-Legendre (20-point panels, bisection against the two
/// halves) in precision `T`. Intended for smooth integrands where the
/// result is needed beyond binary64 accuracy.
pub fn integrate_gauss_legendre<T, F>(f: F, a: T, b: T, rel_tol: f64) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let rule = gauss_legendre_rule::<T>(20);
    let two = T::from_f64(2.0);
    let panel = |lo: T, hi: T| -> Result<(T, T)> {
        let c = (lo + hi) / two;
        let h = (hi - lo) / two;
        let mut s = T::zero();
        let mut s_abs = T::zero();
        for &(x, w) in &rule {
            let v = f(c + h * x)?;
            s += w * v;
            s_abs += w * v.abs();
        }
        Ok((s * h, s_abs * h.abs()))
    };
    let (whole, whole_abs) = panel(a, b)?;
    let scale = whole_abs.to_f64().max(f64::MIN_POSITIVE);
    let tol = rel_tol.max(8.0 * T::EPSILON) * scale;
    let width = (b - a).to_f64().abs();
    let mut total = T::zero();
    let mut stack = vec![(a, b, whole, 0usize)];
    let mut evaluations = 20;
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = (lo + hi) / two;
        let (left, _) = panel(lo, mid)?;
        let (right, _) = panel(mid, hi)?;
        evaluations += 40;
        let halves = left + right;
        let local = tol * ((hi - lo).to_f64().abs() / width);
        if (halves - est).abs().to_f64() <= local || depth >= 48 {
            total += halves;
        } else {
            if evaluations > EVALUATION_CAP {
                return Err(Error::ToleranceNotReached {
                    value: (total + halves).to_f64(),
                    est_abs_error: (halves - est).abs().to_f64(),
                    evaluations,
                });
            }
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ddouble::DoubleDouble;
    use crate::expr::parse;

    #[test]
    fn exp_on_unit_interval() {
        let r = integrate(&parse("exp(x)").unwrap(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert!(r.est_abs_error >= 0.0);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let r = integrate(&parse("x^5").unwrap(), -1.0, 1.0, 1e-12).unwrap();
        assert!(r.value.abs() < 1e-15);
    }

    #[test]
    fn arctan_integral() {
        let r = integrate(&parse("1/(1+x^2)").unwrap(), 0.0, 1.0, 1e-13).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let e = parse("x^2").unwrap();
        let r = integrate(&e, 1.0, 0.0, 1e-12).unwrap();
        assert!((r.value + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn additive_over_splits() {
        let e = parse("sin(x)*exp(x)").unwrap();
        let whole = integrate(&e, -2.0, 3.0, 1e-13).unwrap().value;
        let left = integrate(&e, -2.0, 0.4, 1e-13).unwrap().value;
        let right = integrate(&e, 0.4, 3.0, 1e-13).unwrap().value;
        assert!((whole - (left + right)).abs() <= 1e-12 * whole.abs());
    }

    #[test]
    fn kinks_converge() {
        let e = parse("abs(x-0.3)").unwrap();
        let r = integrate(&e, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-13);
    }

    #[test]
    fn rejects_tiny_tolerance() {
        let e = parse("x").unwrap();
        assert_eq!(
            integrate(&e, 0.0, 1.0, 1e-15).unwrap_err(),
            Error::InvalidTolerance(1e-15)
        );
    }

    #[test]
    fn domain_errors_propagate() {
        let e = parse("log(x)").unwrap();
        assert!(matches!(integrate(&e, -1.0, 1.0, 1e-10), Err(Error::Domain { .. })));
    }

    #[test]
    fn nonintegrable_spike_hits_the_cap() {
        // 1/|x| is not integrable; the scheme must report failure, not a value
        let e = parse("1/abs(x - 0.1234567)").unwrap();
        assert!(integrate(&e, 0.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        let rule = gauss_legendre_rule::<DoubleDouble>(20);
        let s = rule.iter().fold(DoubleDouble::new(0.0), |acc, &(_, w)| acc + w);
        assert!((s - DoubleDouble::new(2.0)).abs().to_f64() < 1e-30);
    }

    #[test]
    fn extended_precision_integral_of_exp() {
        let one = DoubleDouble::new(1.0);
        let v = integrate_gauss_legendre(|x: DoubleDouble| Ok(x.exp()), DoubleDouble::new(0.0), one, 1e-30).unwrap();
        assert!((v - (DoubleDouble::E - one)).abs().to_f64() < 1e-30);
    }
}
