//! Error constants and norm estimates.
//!
//! For a kernel `phi` of degree `n` on `[a, b]`, Hölder's inequality gives
//! `|E_n(f)| <= K ||f^(n)||_p (b-a)^(n+1/q)` with
//! `K = 2^(-n-1/q) ||phi~||_q / n!`, where `phi~` is the kernel mapped to
//! [-1, 1]. Each Lebesgue family minimizes `||phi~||_q` for one `q`, which
//! makes its constant sharp for the conjugate `p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::family::{conjugate, reciprocal, NormKind, RuleFamily};
use crate::jet::derivative_at;
use crate::oracle;
use crate::polynomials::{check_interval, monic_on_interval};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorConstant {
    pub n: usize,
    /// `p`, with `f64::INFINITY` for the sup-norm; `None` for the
    /// Alexiewicz norm.
    pub p: Option<f64>,
    pub value: f64,
    /// Closed form (`true`) or computed from a numerical q-norm.
    pub exact: bool,
    pub family_used: RuleFamily,
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `n! / (2n)!` without forming either factorial.
fn factorial_ratio(n: usize) -> f64 {
    (n + 1..=2 * n).map(|k| 1.0 / k as f64).product()
}

fn closed_form(family: RuleFamily, n: usize) -> f64 {
    let nn = n as i32;
    match family {
        RuleFamily::L1 => 2f64.powi(1 - 2 * nn) / factorial_f64(n),
        RuleFamily::L2 => factorial_ratio(n) / ((2 * n + 1) as f64).sqrt(),
        RuleFamily::Linf => 2f64.powi(-2 * nn) / factorial_f64(n),
        RuleFamily::Alexiewicz => 1.0 / (factorial_f64(n - 1) * 2f64.powi(2 * nn - 2)),
    }
}

/// The constant of `family`'s kernel for the norm `norm` of `f^(n)`.
///
/// For a Lebesgue family at its own exponent this is the closed form;
/// otherwise it is `2^(-n-1/q) ||phi~||_q / n!` with a computed q-norm. The
/// Alexiewicz norm pairs only with the Alexiewicz family, where the constant
/// is `1/((n-1)! 2^(2n-2))`.
pub fn family_constant(family: RuleFamily, n: usize, norm: NormKind) -> Result<ErrorConstant> {
    if n < 1 {
        return Err(Error::InvalidDegree(n));
    }
    match norm.validate()? {
        NormKind::Alexiewicz => {
            if family != RuleFamily::Alexiewicz {
                return Err(Error::IncompatibleNorm {
                    family: family.to_string(),
                    norm: norm.to_string(),
                });
            }
            Ok(ErrorConstant {
                n,
                p: None,
                value: closed_form(family, n),
                exact: true,
                family_used: family,
            })
        }
        NormKind::Lp(p) => {
            if family.natural_norm() == NormKind::Lp(p) {
                return Ok(ErrorConstant {
                    n,
                    p: Some(p),
                    value: closed_form(family, n),
                    exact: true,
                    family_used: family,
                });
            }
            let q = conjugate(p)?;
            let sm = monic_on_interval(family, n, -1.0, 1.0)?;
            let norm_q = sm.reference_qnorm(q)?;
            let value = 2f64.powf(-(n as f64) - reciprocal(q)) * norm_q / factorial_f64(n);
            Ok(ErrorConstant {
                n,
                p: Some(p),
                value,
                exact: false,
                family_used: family,
            })
        }
    }
}

/// Best known `K(n, p)`.
///
/// Exact at `p` in {1, 2, inf}. Elsewhere the optimal kernel is not known in
/// closed form, so this is the smallest constant among the three Lebesgue
/// families, flagged inexact.
pub fn k_constant(n: usize, p: f64) -> Result<ErrorConstant> {
    let norm = NormKind::Lp(p).validate()?;
    if let Some(fam) = RuleFamily::LEBESGUE.into_iter().find(|f| f.natural_norm() == norm) {
        return family_constant(fam, n, norm);
    }
    let mut best: Option<ErrorConstant> = None;
    for fam in RuleFamily::LEBESGUE {
        let c = family_constant(fam, n, norm)?;
        if best.is_none_or(|b| c.value < b.value) {
            best = Some(c);
        }
    }
    Ok(best.expect("three candidates"))
}

/// Coefficient of the norm of `f^(n)` in a family's sharp single-interval
/// bound on `[a, b]`.
pub fn sharp_coefficient(family: RuleFamily, n: usize, a: f64, b: f64) -> Result<f64> {
    check_interval(a, b)?;
    if n < 1 {
        return Err(Error::InvalidDegree(n));
    }
    let w = b - a;
    let k = closed_form(family, n);
    Ok(match family {
        RuleFamily::L1 | RuleFamily::Alexiewicz => k * w.powi(n as i32),
        RuleFamily::L2 => k * w.powf(n as f64 + 0.5),
        RuleFamily::Linf => k * w.powi(n as i32 + 1),
    })
}

/// `sharp_coefficient(family, n, a, b) * norm_value`.
pub fn apriori_bound(family: RuleFamily, n: usize, a: f64, b: f64, norm_value: f64) -> Result<f64> {
    Ok(sharp_coefficient(family, n, a, b)? * norm_value)
}

/// Uniform samples used to bracket extrema and sign changes.
pub const NORM_SAMPLES: usize = 4096;

/// `sup |g|` on `[a, b]`: dense sampling, then golden-section refinement
/// around the best sample.
fn sup_abs<G: Fn(f64) -> Result<f64>>(g: G, a: f64, b: f64) -> Result<f64> {
    let step = (b - a) / NORM_SAMPLES as f64;
    let xs: Vec<f64> = (0..=NORM_SAMPLES)
        .map(|i| if i == NORM_SAMPLES { b } else { a + step * i as f64 })
        .collect();
    let mut best = (0, 0.0f64);
    for (i, &x) in xs.iter().enumerate() {
        let v = g(x)?.abs();
        if v > best.1 {
            best = (i, v);
        }
    }
    let (i, mut top) = best;
    let (mut lo, mut hi) = (xs[i.saturating_sub(1)], xs[(i + 1).min(NORM_SAMPLES)]);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut v1, mut v2) = (g(x1)?.abs(), g(x2)?.abs());
    for _ in 0..80 {
        if hi - lo <= 1e-15 * (a.abs() + b.abs()).max(1.0) {
            break;
        }
        if v1 > v2 {
            hi = x2;
            x2 = x1;
            v2 = v1;
            x1 = hi - ratio * (hi - lo);
            v1 = g(x1)?.abs();
        } else {
            lo = x1;
            x1 = x2;
            v1 = v2;
            x2 = lo + ratio * (hi - lo);
            v2 = g(x2)?.abs();
        }
        top = top.max(v1).max(v2);
    }
    Ok(top)
}

/// Sign changes of `g` on `[a, b]`, bracketed on the sample grid and
/// bisected to rounding level.
fn sign_changes<G: Fn(f64) -> Result<f64>>(g: &G, a: f64, b: f64) -> Result<Vec<f64>> {
    let step = (b - a) / NORM_SAMPLES as f64;
    let mut out = Vec::new();
    let mut prev = (a, g(a)?);
    for i in 1..=NORM_SAMPLES {
        let x = if i == NORM_SAMPLES { b } else { a + step * i as f64 };
        let v = g(x)?;
        if prev.1 != 0.0 && v != 0.0 && (prev.1 < 0.0) != (v < 0.0) {
            let (mut lo, mut hi, neg_lo) = (prev.0, x, prev.1 < 0.0);
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let vm = g(mid)?;
                if (vm < 0.0) == neg_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = (x, v);
    }
    Ok(out)
}

/// Estimate of `||f^(n)||_p` on `[a, b]`.
///
/// Finite `p`: the sign changes of `f^(n)` are located first, then
/// `|f^(n)|^p` is integrated between them by adaptive Gauss-Kronrod to
/// relative accuracy 1e-10. `p = inf`: dense sampling plus local
/// refinement of the maximum.
pub fn lp_norm_estimate(e: &Expr, n: usize, p: f64, a: f64, b: f64) -> Result<f64> {
    check_interval(a, b)?;
    NormKind::Lp(p).validate()?;
    let g = |x: f64| derivative_at(e, x, n);
    if p.is_infinite() {
        return sup_abs(g, a, b);
    }
    let breaks = sign_changes(&g, a, b)?;
    let r = oracle::integrate_fn_with_breaks(|x| Ok(g(x)?.abs().powf(p)), a, b, &breaks, 1e-10)?;
    Ok(r.value.powf(1.0 / p))
}

/// Estimate of the Alexiewicz norm of `f^(n)` on `[a, b]`, that is
/// `sup_x |f^(n-1)(x) - f^(n-1)(a)|`.
pub fn alexiewicz_norm(e: &Expr, n: usize, a: f64, b: f64) -> Result<f64> {
    check_interval(a, b)?;
    if n < 1 {
        return Err(Error::InvalidDegree(n));
    }
    let base = derivative_at(e, a, n - 1)?;
    sup_abs(|x| Ok(derivative_at(e, x, n - 1)? - base), a, b)
}

/// Norm of `f^(n)` of the requested kind.
pub fn norm_estimate(e: &Expr, n: usize, norm: NormKind, a: f64, b: f64) -> Result<f64> {
    match norm.validate()? {
        NormKind::Lp(p) => lp_norm_estimate(e, n, p, a, b),
        NormKind::Alexiewicz => alexiewicz_norm(e, n, a, b),
    }
}
