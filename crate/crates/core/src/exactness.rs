//! Degree of exactness and extremal functions.
//!
//! Every rule built from a monic kernel of degree `n` integrates polynomials
//! of degree `n - 1` exactly, and only the Legendre kernel reaches `2n - 1`.
//! The extremal constructions below produce functions whose error attains
//! (or approaches) the sharp bound of each family.

use num_traits::{Signed, Zero};

use crate::bounds::{family_constant, sharp_coefficient};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::family::{conjugate, reciprocal, NormKind, RuleFamily};
use crate::oracle;
use crate::piecewise::PiecewisePoly;
use crate::polynomials::{monic_on_interval, reference_monic, Polynomial, ScaledMonic};
use crate::rules::{generic_rule, generic_rule_exact, weights, EndpointJet, RuleWeights};

fn monomial_derivatives(degree: usize, x: &Rational, order: usize) -> Vec<Rational> {
    let mono = Polynomial::monomial(degree);
    (0..=order).map(|k| mono.nth_derivative(k).eval(x)).collect()
}

/// `E_n(x^degree)` for the generic rule of `phi`, in exact arithmetic.
pub fn monomial_error(phi: &ScaledMonic, degree: usize) -> Rational {
    let n = phi.degree();
    let (a, b) = phi.interval();
    let (qa, qb) = (exact::from_f64(a), exact::from_f64(b));
    let integral = Polynomial::monomial(degree).integrate(&qa, &qb);
    let da = monomial_derivatives(degree, &qa, n - 1);
    let db = monomial_derivatives(degree, &qb, n - 1);
    integral - generic_rule_exact(phi, &da, &db).expect("jets of order n - 1")
}

/// `E_n(x^degree)` in binary64 together with the scale `1 + |integral|`.
pub fn monomial_error_f64(phi: &ScaledMonic, degree: usize) -> Result<(f64, f64)> {
    let n = phi.degree();
    let (a, b) = phi.interval();
    let derivs = |x: f64| -> Vec<f64> {
        (0..n)
            .map(|k| {
                if k > degree {
                    return 0.0;
                }
                let falling: f64 = ((degree - k + 1)..=degree).map(|j| j as f64).product();
                falling * x.powi((degree - k) as i32)
            })
            .collect()
    };
    let jets = EndpointJet::from_derivatives(a, &derivs(a), b, &derivs(b));
    let integral = (b.powi(degree as i32 + 1) - a.powi(degree as i32 + 1)) / (degree + 1) as f64;
    let rule = generic_rule(phi, &jets)?;
    Ok((integral - rule, 1.0 + integral.abs()))
}

/// Largest `D` such that the generic rule of `phi` integrates `x^0, ...,
/// x^D` exactly. Computed in exact rational arithmetic, so the answer does
/// not depend on a tolerance.
pub fn exactness_degree(phi: &ScaledMonic) -> usize {
    // E_n(x^(2n)) is a positive multiple of ||phi||_2^2 once lower moments
    // vanish, so the loop stops by 2n.
    (0..=2 * phi.degree())
        .find(|&d| !monomial_error(phi, d).is_zero())
        .expect("degree 2n is never integrated exactly")
        - 1
}

/// `integral_{-1}^{1} t^j p(t) dt` for `j = 0..count`.
pub fn reference_moments(p: &Polynomial, count: usize) -> Vec<Rational> {
    let (lo, hi) = (exact::int(-1), exact::int(1));
    (0..count)
        .map(|j| (&Polynomial::monomial(j) * p).integrate(&lo, &hi))
        .collect()
}

/// Moments `j = 0..=n` of a family's monic reference kernel.
pub fn moment_table(family: RuleFamily, n: usize) -> Result<Vec<Rational>> {
    if n < 1 {
        return Err(Error::InvalidDegree(n));
    }
    Ok(reference_moments(&reference_monic(family, n), n + 1))
}

/// Parameters of an extremal construction. `d` is the free amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalSpec {
    pub family: RuleFamily,
    pub n: usize,
    pub norm: NormKind,
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl ExtremalSpec {
    fn check(&self, family: RuleFamily, norm_ok: bool) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidDegree(self.n));
        }
        if self.family != family || !norm_ok {
            return Err(Error::IncompatibleNorm {
                family: self.family.to_string(),
                norm: self.norm.to_string(),
            });
        }
        if !(self.d != 0.0 && self.d.is_finite()) {
            return Err(Error::InvalidAmplitude(self.d));
        }
        Ok(())
    }
}

/// Breakpoints `[a, roots..., b]` of a kernel and its sign on each piece.
fn sign_pattern(phi: &ScaledMonic) -> (Vec<Rational>, Vec<Rational>) {
    let (a, b) = phi.interval();
    let mut breaks = vec![exact::from_f64(a)];
    breaks.extend(phi.roots().into_iter().map(exact::from_f64));
    breaks.push(exact::from_f64(b));
    breaks.dedup();
    let two = exact::int(2);
    let signs = breaks
        .windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / &two;
            if phi.poly().eval(&mid).is_negative() {
                exact::int(-1)
            } else {
                exact::int(1)
            }
        })
        .collect();
    (breaks, signs)
}

fn integrate_times(mut f: PiecewisePoly, times: usize) -> PiecewisePoly {
    for _ in 0..times {
        f = f.antiderivative();
    }
    f
}

/// `f` with `f^(n) = d sgn(phi)` for the `Linf` kernel and
/// `f^(k)(a) = 0` for `k < n`, as an exact piecewise polynomial.
pub fn build_extremal_linf(spec: &ExtremalSpec) -> Result<PiecewisePoly> {
    spec.check(RuleFamily::Linf, spec.norm == NormKind::Lp(f64::INFINITY))?;
    let phi = monic_on_interval(spec.family, spec.n, spec.a, spec.b)?;
    let (breaks, signs) = sign_pattern(&phi);
    let d = exact::from_f64(spec.d);
    let values: Vec<Rational> = signs.iter().map(|s| s * &d).collect();
    Ok(integrate_times(
        PiecewisePoly::piecewise_constant(breaks, &values),
        spec.n,
    ))
}

/// `integral f - rule(f)` in exact arithmetic for a piecewise polynomial
/// supported exactly on the rule's interval.
pub fn rule_error_exact(rw: &RuleWeights, f: &PiecewisePoly) -> Result<Rational> {
    let order = rw.n - 1;
    let rule = rw.apply_exact(&f.derivatives_at_left(order), &f.derivatives_at_right(order))?;
    Ok(f.integral() - rule)
}

/// `|E_n(f)| / (sharp_coeff * ||f^(n)||_inf)` for the `Linf` extremal.
pub fn linf_sharpness_ratio(spec: &ExtremalSpec) -> Result<f64> {
    let f = build_extremal_linf(spec)?;
    let rw = weights(spec.family, spec.n, spec.a, spec.b)?;
    let err = exact::to_f64(&rule_error_exact(&rw, &f)?);
    let norm = f.nth_derivative(spec.n).sup_abs();
    Ok(err.abs() / (rw.sharp_coeff * norm))
}

/// The Hölder-equality function for `1 < p < inf`:
/// `f^(n) = d sgn(phi) |phi|^(1/(p-1))`, `f^(k)(a) = 0` for `k < n`.
#[derive(Clone, Debug)]
pub struct ExtremalLp {
    spec: ExtremalSpec,
    p: f64,
    phi: ScaledMonic,
    rule: RuleWeights,
}

pub fn build_extremal_lp(spec: &ExtremalSpec) -> Result<ExtremalLp> {
    let p = match spec.norm {
        NormKind::Lp(p) if p > 1.0 && p.is_finite() => p,
        _ => f64::NAN,
    };
    spec.check(spec.family, p.is_finite() && spec.family.is_lebesgue())?;
    Ok(ExtremalLp {
        spec: *spec,
        p,
        phi: monic_on_interval(spec.family, spec.n, spec.a, spec.b)?,
        rule: weights(spec.family, spec.n, spec.a, spec.b)?,
    })
}

const LP_TOL: f64 = 1e-13;

impl ExtremalLp {
    /// `f^(n)(x)`.
    pub fn nth_derivative(&self, x: f64) -> f64 {
        let v = self.phi.eval(x);
        self.spec.d * v.signum() * v.abs().powf(1.0 / (self.p - 1.0))
    }

    /// `integral_a^b (b - t)^j / j! f^(n)(t) dt`.
    fn moment(&self, upper: f64, j: usize) -> Result<f64> {
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        let breaks: Vec<f64> = self.phi.roots().into_iter().filter(|&r| r < upper).collect();
        let r = oracle::integrate_fn_with_breaks(
            |t| Ok((upper - t).powi(j as i32) / fact * self.nth_derivative(t)),
            self.spec.a,
            upper,
            &breaks,
            LP_TOL,
        )?;
        Ok(r.value)
    }

    /// `f(x)` by quadrature of the Taylor remainder.
    pub fn value(&self, x: f64) -> Result<f64> {
        if x <= self.spec.a {
            return Ok(0.0);
        }
        self.moment(x, self.spec.n - 1)
    }

    /// `integral_a^b f`.
    pub fn integral(&self) -> Result<f64> {
        self.moment(self.spec.b, self.spec.n)
    }

    /// `integral f - rule(f)`.
    pub fn rule_error(&self) -> Result<f64> {
        let n = self.spec.n;
        let at_b: Vec<f64> = (0..n)
            .map(|k| self.moment(self.spec.b, n - 1 - k))
            .collect::<Result<_>>()?;
        let jets = EndpointJet::from_derivatives(self.spec.a, &vec![0.0; n], self.spec.b, &at_b);
        Ok(self.integral()? - self.rule.apply(&jets)?)
    }

    /// `||f^(n)||_p`.
    pub fn norm(&self) -> Result<f64> {
        let p = self.p;
        let r = oracle::integrate_fn_with_breaks(
            |t| Ok(self.nth_derivative(t).abs().powf(p)),
            self.spec.a,
            self.spec.b,
            &self.phi.roots(),
            LP_TOL,
        )?;
        Ok(r.value.powf(1.0 / p))
    }

    /// Hölder bound `K ||f^(n)||_p (b-a)^(n+1/q)` with the kernel's own `K`.
    pub fn bound(&self) -> Result<f64> {
        let k = family_constant(self.spec.family, self.spec.n, self.spec.norm)?.value;
        let q = conjugate(self.p)?;
        Ok(k * self.norm()? * (self.spec.b - self.spec.a).powf(self.spec.n as f64 + reciprocal(q)))
    }

    /// For `p = 2`, `f^(n) = d phi` is a polynomial and `f` is returned
    /// exactly.
    pub fn exact_polynomial(&self) -> Option<PiecewisePoly> {
        if self.p != 2.0 {
            return None;
        }
        let (a, b) = (exact::from_f64(self.spec.a), exact::from_f64(self.spec.b));
        let g = self.phi.poly().scale(&exact::from_f64(self.spec.d));
        Some(integrate_times(PiecewisePoly::single(a, b, g), self.spec.n))
    }

    pub fn rule(&self) -> &RuleWeights {
        &self.rule
    }
}

/// Literal Alexiewicz construction: `f = d (x - a)` for `n = 1`, otherwise
/// `f^(n-1) = d sgn(U_(n-1))` mapped to `[a, b]` with `f^(k)(a) = 0` for
/// `k < n - 1`.
///
/// The error of this function is half the bound; see
/// [`build_extremal_alexiewicz_ramped`] for a family that approaches it.
pub fn build_extremal_alexiewicz(spec: &ExtremalSpec) -> Result<PiecewisePoly> {
    spec.check(RuleFamily::Alexiewicz, spec.norm == NormKind::Alexiewicz)?;
    let (a, b) = (exact::from_f64(spec.a), exact::from_f64(spec.b));
    let d = exact::from_f64(spec.d);
    if spec.n == 1 {
        let f = Polynomial::new(vec![-(&d * &a), d]);
        return Ok(PiecewisePoly::single(a, b, f));
    }
    let u = monic_on_interval(RuleFamily::Linf, spec.n - 1, spec.a, spec.b)?;
    let (breaks, signs) = sign_pattern(&u);
    let values: Vec<Rational> = signs.iter().map(|s| s * &d).collect();
    Ok(integrate_times(
        PiecewisePoly::piecewise_constant(breaks, &values),
        spec.n - 1,
    ))
}

/// Ramped Alexiewicz construction: `f^(n-1)` starts at 0 at `a`, reaches
/// `d sgn(U_(n-1))` after a linear ramp of width `ramp`, and switches sign
/// with a linear ramp of the same width after each root. The sharpness
/// ratio is `1 - O(ramp)`.
pub fn build_extremal_alexiewicz_ramped(spec: &ExtremalSpec, ramp: f64) -> Result<PiecewisePoly> {
    spec.check(RuleFamily::Alexiewicz, spec.norm == NormKind::Alexiewicz)?;
    let (a, b) = (exact::from_f64(spec.a), exact::from_f64(spec.b));
    let d = exact::from_f64(spec.d);
    let eps = exact::from_f64(ramp);
    let (roots, signs) = if spec.n == 1 {
        (vec![a.clone(), b.clone()], vec![exact::int(1)])
    } else {
        sign_pattern(&monic_on_interval(RuleFamily::Linf, spec.n - 1, spec.a, spec.b)?)
    };
    let inner = &roots[1..roots.len() - 1];
    let min_gap = roots
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .expect("at least one piece");
    if !(ramp > 0.0) || exact::int(2) * &eps >= min_gap {
        return Err(Error::InvalidTolerance(ramp));
    }
    let mut points = vec![(a.clone(), Rational::zero()), (&a + &eps, &signs[0] * &d)];
    for (j, r) in inner.iter().enumerate() {
        points.push((r.clone(), &signs[j] * &d));
        points.push((r + &eps, &signs[j + 1] * &d));
    }
    points.push((b, &signs[signs.len() - 1] * &d));
    Ok(integrate_times(PiecewisePoly::piecewise_linear(&points), spec.n - 1))
}

/// Alexiewicz norm of `f^(n)` for a piecewise polynomial: the sup of
/// `|f^(n-1)(x) - f^(n-1)(a)|`.
pub fn alexiewicz_norm_piecewise(f: &PiecewisePoly, n: usize) -> f64 {
    let g = f.nth_derivative(n - 1);
    let base = Polynomial::constant(g.derivatives_at_left(0).remove(0));
    let shifted = PiecewisePoly::new(g.breaks().to_vec(), g.pieces().iter().map(|p| p - &base).collect());
    shifted.sup_abs()
}

/// `|E_n(f)| / (sharp_coeff * ||f^(n)||)` for an Alexiewicz construction.
pub fn alexiewicz_sharpness_ratio(spec: &ExtremalSpec, f: &PiecewisePoly) -> Result<f64> {
    let rw = weights(RuleFamily::Alexiewicz, spec.n, spec.a, spec.b)?;
    let err = exact::to_f64(&rule_error_exact(&rw, f)?);
    let norm = alexiewicz_norm_piecewise(f, spec.n);
    Ok(err.abs() / (sharp_coefficient(RuleFamily::Alexiewicz, spec.n, spec.a, spec.b)? * norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, int, ratio};
    use crate::polynomials::legendre_p;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        ratio(BigInt::from(n), BigInt::from(d))
    }

    fn random_monic(rng: &mut ChaCha8Rng, n: usize) -> Polynomial {
        let mut c: Vec<Rational> = (0..n)
            .map(|_| q(rng.gen_range(-40..=40), rng.gen_range(1..=16)))
            .collect();
        c.push(int(1));
        Polynomial::new(c)
    }

    #[test]
    fn exactness_examples() {
        let l2 = monic_on_interval(RuleFamily::L2, 3, 0.0, 1.0).unwrap();
        assert_eq!(exactness_degree(&l2), 5);
        let l1 = monic_on_interval(RuleFamily::L1, 3, 0.0, 1.0).unwrap();
        let d = exactness_degree(&l1);
        assert!((2..5).contains(&d), "{d}");
        // Legendre plus a small perturbation loses the extra degrees
        let perturbed = &reference_monic(RuleFamily::L2, 2) + &Polynomial::constant(q(1, 50));
        let phi = ScaledMonic::from_reference(perturbed, 0.0, 1.0).unwrap();
        assert!(exactness_degree(&phi) < 3);
    }

    #[test]
    fn exactness_by_family() {
        for n in 1..=8 {
            for fam in RuleFamily::ALL {
                let phi = monic_on_interval(fam, n, -2.0, 3.0).unwrap();
                let d = exactness_degree(&phi);
                assert!(d >= n - 1);
                if fam == RuleFamily::L2 {
                    assert_eq!(d, 2 * n - 1);
                } else if n > 1 || fam == RuleFamily::Alexiewicz {
                    assert!(d < 2 * n - 1, "{fam} n={n}");
                }
            }
        }
    }

    #[test]
    fn random_kernels_exact_below_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=8 {
            for _ in 0..20 {
                let phi = ScaledMonic::from_reference(random_monic(&mut rng, n), -0.5, 1.25).unwrap();
                assert!(exactness_degree(&phi) >= n - 1);
                for deg in 0..n {
                    let (e, scale) = monomial_error_f64(&phi, deg).unwrap();
                    assert!(e.abs() <= 1e-11 * scale, "n={n} deg={deg}: {e}");
                }
            }
        }
    }

    #[test]
    fn legendre_moments() {
        for n in 1..=10 {
            let m = moment_table(RuleFamily::L2, n).unwrap();
            assert!(m[..n].iter().all(Zero::is_zero));
            let raw = reference_moments(&legendre_p(n), n + 1);
            let f = factorial(n);
            let want = ratio(&f * &f * crate::exact::pow2(n + 1), factorial(2 * n + 1));
            assert_eq!(raw[n], want);
        }
    }

    #[test]
    fn linf_extremal_examples() {
        let spec = ExtremalSpec {
            family: RuleFamily::Linf,
            n: 1,
            norm: NormKind::Lp(f64::INFINITY),
            a: 0.0,
            b: 1.0,
            d: 1.0,
        };
        let f = build_extremal_linf(&spec).unwrap();
        // f = |x - 1/2| - 1/2
        assert_eq!(f.eval(&q(1, 2)), q(-1, 2));
        assert_eq!(f.eval(&int(1)), int(0));
        let rw = weights(RuleFamily::Linf, 1, 0.0, 1.0).unwrap();
        assert_eq!(rule_error_exact(&rw, &f).unwrap().abs(), q(1, 4));
        for n in 1..=6 {
            for &(a, b, d) in &[(0.0, 1.0, 1.0), (-1.0, 1.0, -2.5), (-2.0, 3.0, 0.75)] {
                let spec = ExtremalSpec { n, a, b, d, ..spec };
                let f = build_extremal_linf(&spec).unwrap();
                assert!(f.is_smooth(n - 1));
                let r = linf_sharpness_ratio(&spec).unwrap();
                assert!((r - 1.0).abs() < 1e-10, "n={n} [{a},{b}] ratio {r}");
            }
        }
    }

    #[test]
    fn linf_extremal_n2_matches_kernel_norm() {
        let spec = ExtremalSpec {
            family: RuleFamily::Linf,
            n: 2,
            norm: NormKind::Lp(f64::INFINITY),
            a: -1.0,
            b: 1.0,
            d: 1.0,
        };
        let f = build_extremal_linf(&spec).unwrap();
        let rw = weights(RuleFamily::Linf, 2, -1.0, 1.0).unwrap();
        let err = exact::to_f64(&rule_error_exact(&rw, &f).unwrap()).abs();
        let phi = monic_on_interval(RuleFamily::Linf, 2, -1.0, 1.0).unwrap();
        // ||x^2 - 1/4||_1 on [-1, 1] = 1/2 and |f''| = 1
        assert!((phi.qnorm(1.0).unwrap() - 0.5).abs() < 1e-13);
        assert!((err - 0.25).abs() < 1e-15, "{err}");
    }

    #[test]
    fn l2_proportional_equality() {
        for n in 1..=6 {
            for &(a, b, d) in &[(0.0, 1.0, 1.0), (-1.0, 1.0, 3.0), (-2.0, 3.0, -0.5)] {
                let spec = ExtremalSpec {
                    family: RuleFamily::L2,
                    n,
                    norm: NormKind::Lp(2.0),
                    a,
                    b,
                    d,
                };
                let ex = build_extremal_lp(&spec).unwrap();
                let f = ex.exact_polynomial().unwrap();
                let err = exact::to_f64(&rule_error_exact(ex.rule(), &f).unwrap()).abs();
                let phi = monic_on_interval(RuleFamily::L2, n, a, b).unwrap();
                let sq = (phi.poly() * phi.poly()).integrate(&exact::from_f64(a), &exact::from_f64(b));
                let norm = d.abs() * exact::to_f64(&sq).sqrt();
                let ratio = err / (ex.rule().sharp_coeff * norm);
                assert!((ratio - 1.0).abs() < 1e-10, "n={n} ratio {ratio}");
            }
        }
    }

    #[test]
    fn lp_extremal_general_p() {
        // n = 1, p = 2 on [-1, 1]: f' = x, E = 2/3, ratio 1
        let spec = ExtremalSpec {
            family: RuleFamily::L2,
            n: 1,
            norm: NormKind::Lp(2.0),
            a: -1.0,
            b: 1.0,
            d: 1.0,
        };
        let ex = build_extremal_lp(&spec).unwrap();
        assert!((ex.rule_error().unwrap().abs() - 2.0 / 3.0).abs() < 1e-12);
        assert!((ex.norm().unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        for &p in &[1.5, 3.0, 6.0] {
            for fam in RuleFamily::LEBESGUE {
                for n in 1..=4 {
                    let spec = ExtremalSpec {
                        family: fam,
                        n,
                        norm: NormKind::Lp(p),
                        a: 0.0,
                        b: 2.0,
                        d: 1.5,
                    };
                    let ex = build_extremal_lp(&spec).unwrap();
                    let r = ex.rule_error().unwrap().abs() / ex.bound().unwrap();
                    assert!((r - 1.0).abs() < 1e-7, "{fam} n={n} p={p}: {r}");
                }
            }
        }
        assert!(ex.value(-1.0).unwrap() == 0.0);
        assert!((ex.value(1.0).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn alexiewicz_literal_construction_reaches_half() {
        for n in [1, 2, 4] {
            let spec = ExtremalSpec {
                family: RuleFamily::Alexiewicz,
                n,
                norm: NormKind::Alexiewicz,
                a: 0.5,
                b: 2.5,
                d: 1.0,
            };
            let f = build_extremal_alexiewicz(&spec).unwrap();
            let r = alexiewicz_sharpness_ratio(&spec, &f).unwrap();
            assert!((r - 0.5).abs() < 1e-12, "n={n}: {r}");
        }
        // n = 1: f = x - a, |E_1| = (b-a)^2/2
        let spec = ExtremalSpec {
            family: RuleFamily::Alexiewicz,
            n: 1,
            norm: NormKind::Alexiewicz,
            a: 0.0,
            b: 2.0,
            d: 1.0,
        };
        let f = build_extremal_alexiewicz(&spec).unwrap();
        let rw = weights(RuleFamily::Alexiewicz, 1, 0.0, 2.0).unwrap();
        assert_eq!(rule_error_exact(&rw, &f).unwrap(), int(2));
    }

    #[test]
    fn alexiewicz_ramped_construction_is_sharp() {
        for n in 1..=6 {
            for &(a, b, d) in &[(0.0, 1.0, 1.0), (-1.0, 1.0, -2.0)] {
                let spec = ExtremalSpec {
                    family: RuleFamily::Alexiewicz,
                    n,
                    norm: NormKind::Alexiewicz,
                    a,
                    b,
                    d,
                };
                let f = build_extremal_alexiewicz_ramped(&spec, 1e-12).unwrap();
                assert!(f.is_smooth(n - 1));
                let r = alexiewicz_sharpness_ratio(&spec, &f).unwrap();
                assert!(r <= 1.0 + 1e-12 && r > 1.0 - 1e-10, "n={n}: {r}");
                // doubling d doubles both the error and the norm
                let g = build_extremal_alexiewicz_ramped(&ExtremalSpec { d: 2.0 * d, ..spec }, 1e-12).unwrap();
                let r2 = alexiewicz_sharpness_ratio(&spec, &g).unwrap();
                assert!((r - r2).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn literal_alexiewicz_composite_bound_fails_for_odd_n() {
        // n = 1, m = 2 on [0, 1]: left Riemann sum. f rises to 1, dips to -1
        // at the midpoint node and returns to 1, so ||f'|| = 1 while the
        // error approaches 3/2.
        let eps = q(1, 1_000_000);
        let half = q(1, 2);
        let f = PiecewisePoly::piecewise_linear(&[
            (int(0), int(0)),
            (eps.clone(), int(1)),
            (&half - &eps, int(1)),
            (half.clone(), int(-1)),
            (&half + &eps, int(1)),
            (int(1), int(1)),
        ]);
        let left = f.derivatives_at(&int(0), 0);
        let mid = f.derivatives_at(&half, 0);
        let rule = (&left[0] + &mid[0]) * &half;
        let err = exact::to_f64(&(f.integral() - rule));
        let norm = alexiewicz_norm_piecewise(&f, 1);
        assert_eq!(norm, 1.0);
        // literal formula: ||f'|| (b - a) / m^0
        assert!(err > 1.0 * norm * 1.49);
        let plan = crate::composite::CompositePlan::new(RuleFamily::Alexiewicz, 1, 2, 0.0, 1.0).unwrap();
        let bound = crate::composite::composite_bound(&plan, norm, NormKind::Alexiewicz).unwrap();
        assert!(err <= bound && err > 0.99 * bound, "{err} vs {bound}");
    }

    #[test]
    fn extremal_spec_validation() {
        let spec = ExtremalSpec {
            family: RuleFamily::L2,
            n: 2,
            norm: NormKind::Lp(f64::INFINITY),
            a: 0.0,
            b: 1.0,
            d: 1.0,
        };
        assert!(matches!(
            build_extremal_linf(&spec),
            Err(Error::IncompatibleNorm { .. })
        ));
        assert!(build_extremal_lp(&spec).is_err());
        assert!(build_extremal_alexiewicz(&spec).is_err());
        let bad_ramp = ExtremalSpec {
            family: RuleFamily::Alexiewicz,
            norm: NormKind::Alexiewicz,
            ..spec
        };
        assert!(build_extremal_alexiewicz_ramped(&bad_ramp, 0.6).is_err());
    }
}
