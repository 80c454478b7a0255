//! Single-interval corrected trapezoidal rules.
//!
//! A rule of order `n` integrates `f` over `[a, b]` from the endpoint values
//! `f^(0..n-1)(a)` and `f^(0..n-1)(b)`. The weights come from integrating by
//! parts against a monic kernel `phi` of degree `n`, which leaves the
//! remainder
//!
//! ```text
//! E_n(f) = (-1)^n / n! * integral_a^b f^(n)(x) phi(x) dx.
//! ```
//!
//! [`generic_rule`] works for any monic kernel. [`weights`] gives the closed
//! forms for the four named families, written as
//! `sum_k w[k] [f^(k)(a) + (-1)^k f^(k)(b)]` plus an Alexiewicz-only
//! correction at `a`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bounds::sharp_coefficient;
use crate::error::{Error, Result};
use crate::exact::{self, factorial, pow2, ratio, Rational, ScaledValue};
use crate::expr::Expr;
use crate::family::RuleFamily;
use crate::jet::{derivative_at, jet_eval, Jet};
use crate::oracle;
use crate::polynomials::{check_interval, endpoint_derivative, Endpoint, ScaledMonic};
use crate::scalar::Real;

/// Derivative data at both ends of an interval.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointJet<T = f64> {
    pub at_a: Jet<T>,
    pub at_b: Jet<T>,
}

impl<T: Real> EndpointJet<T> {
    /// Jets of `e` of the given order at `a` and `b`.
    pub fn from_expr(e: &Expr, a: T, b: T, order: usize) -> Result<Self> {
        Ok(Self {
            at_a: jet_eval(e, a, order)?,
            at_b: jet_eval(e, b, order)?,
        })
    }

    /// Builds jets from plain derivative values `f^(k)`.
    pub fn from_derivatives(a: T, at_a: &[T], b: T, at_b: &[T]) -> Self {
        let to_jet = |point: T, d: &[T]| {
            let mut fact = T::one();
            let taylor = d
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    if k > 1 {
                        fact *= T::from_usize(k);
                    }
                    v / fact
                })
                .collect();
            Jet { point, taylor }
        };
        Self {
            at_a: to_jet(a, at_a),
            at_b: to_jet(b, at_b),
        }
    }

    pub fn order(&self) -> usize {
        self.at_a.order().min(self.at_b.order())
    }

    fn require(&self, n: usize) -> Result<()> {
        let have = self.order();
        if have + 1 < n {
            return Err(Error::InsufficientJetOrder { needed: n - 1, have });
        }
        Ok(())
    }
}

/// Closed-form weights of a named family as exact multiples of powers of
/// the interval width: `w[k]` multiplies `(b-a)^(k+1)`, the Alexiewicz
/// correction multiplies `(b-a)^n`.
pub fn family_weight_coefficients(family: RuleFamily, n: usize) -> Result<(Vec<Rational>, Option<Rational>)> {
    if n < 1 {
        return Err(Error::InvalidDegree(n));
    }
    let f = factorial;
    let l1 = |k: usize| {
        ratio(
            f(2 * n - k - 2) * f(n - k - 1),
            f(n - 1) * pow2(2 * k + 1) * f(2 * n - 2 * k - 2) * f(k + 1),
        )
    };
    let out = match family {
        RuleFamily::L1 => ((0..n).map(l1).collect(), None),
        RuleFamily::L2 => (
            (0..n)
                .map(|k| ratio(f(n) * f(2 * n - k - 1), f(2 * n) * f(n - k - 1) * f(k + 1)))
                .collect(),
            None,
        ),
        RuleFamily::Linf => (
            (0..n)
                .map(|k| {
                    ratio(
                        f(2 * n - k) * f(n - k - 1),
                        f(n) * pow2(2 * k + 2) * f(2 * n - 2 * k - 1) * f(k + 1),
                    )
                })
                .collect(),
            None,
        ),
        RuleFamily::Alexiewicz => {
            let extra = if n % 2 == 1 {
                ratio(BigInt::one(), f(n) * pow2(2 * n - 2))
            } else {
                Rational::zero()
            };
            ((0..n - 1).map(l1).collect(), Some(extra))
        }
    };
    Ok(out)
}

/// Weights of a named family on a concrete interval.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleWeights {
    pub family: RuleFamily,
    pub n: usize,
    pub a: f64,
    pub b: f64,
    /// `w[k]` multiplies `f^(k)(a) + (-1)^k f^(k)(b)`.
    pub w: Vec<f64>,
    /// Multiplies `f^(n-1)(a)`; present for the Alexiewicz family only and
    /// zero when `n` is even.
    pub extra: Option<f64>,
    /// Coefficient of the norm of `f^(n)` in the family's sharp bound.
    pub sharp_coeff: f64,
    exact_w: Vec<ScaledValue>,
    exact_extra: Option<ScaledValue>,
}

pub fn weights(family: RuleFamily, n: usize, a: f64, b: f64) -> Result<RuleWeights> {
    check_interval(a, b)?;
    let (w, extra) = family_weight_coefficients(family, n)?;
    let exact_w: Vec<ScaledValue> = w
        .into_iter()
        .enumerate()
        .map(|(k, c)| ScaledValue::new(c, k + 1))
        .collect();
    let exact_extra = extra.map(|c| ScaledValue::new(c, n));
    let width = exact::from_f64(b) - exact::from_f64(a);
    let to_f64 = |v: &ScaledValue| exact::to_f64(&v.exact(&width));
    Ok(RuleWeights {
        family,
        n,
        a,
        b,
        w: exact_w.iter().map(to_f64).collect(),
        extra: exact_extra.as_ref().map(to_f64),
        sharp_coeff: sharp_coefficient(family, n, a, b)?,
        exact_w,
        exact_extra,
    })
}

impl RuleWeights {
    pub fn exact_weights(&self) -> &[ScaledValue] {
        &self.exact_w
    }

    pub fn exact_extra(&self) -> Option<&ScaledValue> {
        self.exact_extra.as_ref()
    }

    /// Applies the rule in precision `T`. Weights are rounded from their
    /// exact values directly into `T`.
    pub fn apply<T: Real>(&self, jets: &EndpointJet<T>) -> Result<T> {
        jets.require(self.n)?;
        let width = T::from_f64(self.b) - T::from_f64(self.a);
        let mut sum = T::zero();
        for (k, w) in self.exact_w.iter().enumerate() {
            let fb = jets.at_b.derivative(k);
            let pair = jets.at_a.derivative(k) + if k % 2 == 0 { fb } else { -fb };
            sum += w.value(width) * pair;
        }
        if let Some(extra) = &self.exact_extra {
            sum += extra.value(width) * jets.at_a.derivative(self.n - 1);
        }
        Ok(sum)
    }

    /// Applies the rule to exact derivative values `f^(k)(a)`, `f^(k)(b)`.
    pub fn apply_exact(&self, at_a: &[Rational], at_b: &[Rational]) -> Result<Rational> {
        let have = at_a.len().min(at_b.len());
        if have < self.n {
            return Err(Error::InsufficientJetOrder {
                needed: self.n - 1,
                have: have.saturating_sub(1),
            });
        }
        let width = exact::from_f64(self.b) - exact::from_f64(self.a);
        let mut sum = Rational::zero();
        for (k, w) in self.exact_w.iter().enumerate() {
            let pair = if k % 2 == 0 {
                &at_a[k] + &at_b[k]
            } else {
                &at_a[k] - &at_b[k]
            };
            sum += w.exact(&width) * pair;
        }
        if let Some(extra) = &self.exact_extra {
            sum += extra.exact(&width) * &at_a[self.n - 1];
        }
        Ok(sum)
    }
}

pub fn apply<T: Real>(rw: &RuleWeights, jets: &EndpointJet<T>) -> Result<T> {
    rw.apply(jets)
}

/// Boundary coefficients of the integration-by-parts rule for an arbitrary
/// monic kernel: `at_a[k]` multiplies `f^(k)(a)`, `at_b[k]` multiplies
/// `f^(k)(b)`, both as multiples of `(b-a)^(k+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericCoefficients {
    pub at_a: Vec<ScaledValue>,
    pub at_b: Vec<ScaledValue>,
}

pub fn generic_coefficients(phi: &ScaledMonic) -> Result<GenericCoefficients> {
    let n = phi.degree();
    let inv_fact = ratio(BigInt::one(), factorial(n));
    let mut at_a = Vec::with_capacity(n);
    let mut at_b = Vec::with_capacity(n);
    for k in 0..n {
        let da = endpoint_derivative(phi, n - k - 1, Endpoint::A)?;
        let db = endpoint_derivative(phi, n - k - 1, Endpoint::B)?;
        // (-1)^n (-1)^(n-k-1) = (-1)^(k+1)
        let sa = exact::sign_pow(k + 1) * &inv_fact;
        let sb = exact::sign_pow(k) * &inv_fact;
        at_a.push(ScaledValue::new(sa * da.coeff, da.power));
        at_b.push(ScaledValue::new(sb * db.coeff, db.power));
    }
    Ok(GenericCoefficients { at_a, at_b })
}

/// The integration-by-parts rule for any monic kernel, in precision `T`.
pub fn generic_rule<T: Real>(phi: &ScaledMonic, jets: &EndpointJet<T>) -> Result<T> {
    let n = phi.degree();
    jets.require(n)?;
    let c = generic_coefficients(phi)?;
    let (a, b) = phi.interval();
    let width = T::from_f64(b) - T::from_f64(a);
    let mut sum = T::zero();
    for k in 0..n {
        sum += c.at_a[k].value(width) * jets.at_a.derivative(k);
        sum += c.at_b[k].value(width) * jets.at_b.derivative(k);
    }
    Ok(sum)
}

/// The integration-by-parts rule on exact derivative values.
pub fn generic_rule_exact(phi: &ScaledMonic, at_a: &[Rational], at_b: &[Rational]) -> Result<Rational> {
    let n = phi.degree();
    let have = at_a.len().min(at_b.len());
    if have < n {
        return Err(Error::InsufficientJetOrder {
            needed: n - 1,
            have: have.saturating_sub(1),
        });
    }
    let c = generic_coefficients(phi)?;
    let width = phi.width_exact();
    let mut sum = Rational::zero();
    for k in 0..n {
        sum += c.at_a[k].exact(&width) * &at_a[k] + c.at_b[k].exact(&width) * &at_b[k];
    }
    Ok(sum)
}

/// `E_n(f)` by adaptive quadrature of `f^(n) phi` in binary64 (relative
/// tolerance 1e-10). For validation only.
pub fn estimate_error_term(phi: &ScaledMonic, e: &Expr) -> Result<f64> {
    let n = phi.degree();
    let (a, b) = phi.interval();
    let r = oracle::integrate_fn_with_breaks(|x| Ok(derivative_at(e, x, n)? * phi.eval(x)), a, b, &phi.roots(), 1e-10)?;
    Ok(sign_over_factorial(n) * r.value)
}

/// `E_n(f)` in precision `T` with adaptive Gauss-Legendre quadrature.
pub fn estimate_error_term_in<T: Real>(phi: &ScaledMonic, e: &Expr, rel_tol: f64) -> Result<T> {
    let n = phi.degree();
    let (a, b) = phi.interval();
    let (ta, tb) = (T::from_f64(a), T::from_f64(b));
    let two = T::from_f64(2.0);
    let half = (tb - ta) / two;
    let mid = (ta + tb) / two;
    let coeffs: Vec<T> = phi.reference().coeffs().iter().map(T::from_rational).collect();
    let scale = half.powi(n as i32);
    let integral = oracle::integrate_gauss_legendre(
        |x: T| {
            let t = (x - mid) / half;
            let mut p = T::zero();
            for &c in coeffs.iter().rev() {
                p = p * t + c;
            }
            Ok(derivative_at(e, x, n)? * scale * p)
        },
        ta,
        tb,
        rel_tol,
    )?;
    let mut fact = T::one();
    for j in 2..=n {
        fact *= T::from_usize(j);
    }
    let signed = if n % 2 == 0 { integral } else { -integral };
    Ok(signed / fact)
}

fn sign_over_factorial(n: usize) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    if n % 2 == 0 {
        1.0 / fact
    } else {
        -1.0 / fact
    }
}

pub const CSV_HEADER: &str = "family,n,k,numerator,denominator,power_of_(b-a)";

/// Exact weight table as CSV. With an interval, a `value` column holds the
/// weight evaluated on it. Alexiewicz tables end with an `extra` row for
/// the `f^(n-1)(a)` term, which is zero for even `n`.
pub fn weights_csv(family: RuleFamily, n: usize, interval: Option<(f64, f64)>) -> Result<String> {
    if let Some((a, b)) = interval {
        check_interval(a, b)?;
    }
    let (w, extra) = family_weight_coefficients(family, n)?;
    let width = interval.map(|(a, b)| exact::from_f64(b) - exact::from_f64(a));
    let mut out = String::from(CSV_HEADER);
    if width.is_some() {
        out.push_str(",value");
    }
    out.push('\n');
    let mut row = |k: &str, c: &Rational, power: usize| {
        let _ = write!(
            out,
            "{},{n},{k},{},{},{power}",
            family.short_name(),
            c.numer(),
            c.denom()
        );
        if let Some(width) = &width {
            let v = ScaledValue::new(c.clone(), power).exact(width);
            let _ = write!(out, ",{:.16e}", exact::to_f64(&v));
        }
        out.push('\n');
    };
    for (k, c) in w.iter().enumerate() {
        row(&k.to_string(), c, k + 1);
    }
    if let Some(c) = extra {
        row("extra", &c, n);
    }
    Ok(out)
}
