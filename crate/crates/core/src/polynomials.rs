//! Exact-coefficient polynomials and the orthogonal families behind the
//! corrected trapezoidal kernels.
//!
//! Coefficients are [`BigRational`]s so that factorial ratios stay exact.
//! Binary64 is used only when evaluating numerically (roots, q-norms), and
//! there the named families go through their three-term recurrences instead
//! of the monomial basis, which is badly conditioned for large degree.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, factorial, pow2, ratio, Rational, ScaledValue};
use crate::family::RuleFamily;
use crate::oracle;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    /// `coeffs[i]` multiplies `x^i`; no trailing zeros except for the zero
    /// polynomial, which is `[0]`.
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| exact::int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigRational {
        self.coeffs.last().expect("at least one coefficient")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(exact::to_f64).collect()
    }

    /// Horner evaluation in binary64.
    pub fn eval_f64(&self, x: f64) -> f64 {
        horner(&self.to_f64_coeffs(), x)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * exact::int(i as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut c = vec![Rational::zero()];
        c.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| a / exact::int(i as i64 + 1)),
        );
        Self::new(c)
    }

    /// Exact `integral_lo^hi p(x) dx`.
    pub fn integrate(&self, lo: &BigRational, hi: &BigRational) -> BigRational {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }

    /// `p(alpha x + beta)`.
    pub fn compose_affine(&self, alpha: &BigRational, beta: &BigRational) -> Self {
        let inner = Self::new(vec![beta.clone(), alpha.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        self.compose_affine(&-Rational::one(), &Rational::zero())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn three_term(
    n: usize,
    p0: Polynomial,
    p1: Polynomial,
    step: impl Fn(usize, &Polynomial, &Polynomial) -> Polynomial,
) -> Polynomial {
    if n == 0 {
        return p0;
    }
    let (mut prev, mut cur) = (p0, p1);
    for k in 1..n {
        let next = step(k, &cur, &prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Chebyshev polynomial of the first kind, `T_n`.
pub fn chebyshev_t(n: usize) -> Polynomial {
    let two_x = Polynomial::from_ints(&[0, 2]);
    three_term(n, Polynomial::one(), Polynomial::x(), |_, cur, prev| {
        &(&two_x * cur) - prev
    })
}

/// Chebyshev polynomial of the second kind, `U_n`.
pub fn chebyshev_u(n: usize) -> Polynomial {
    let two_x = Polynomial::from_ints(&[0, 2]);
    three_term(n, Polynomial::one(), two_x.clone(), |_, cur, prev| {
        &(&two_x * cur) - prev
    })
}

/// Legendre polynomial `P_n` (Bonnet recurrence).
pub fn legendre_p(n: usize) -> Polynomial {
    three_term(n, Polynomial::one(), Polynomial::x(), |k, cur, prev| {
        let a = Polynomial::new(vec![Rational::zero(), exact::int(2 * k as i64 + 1)]);
        let num = &(&a * cur) - &prev.scale(&exact::int(k as i64));
        num.scale(&ratio(BigInt::one(), BigInt::from(k + 1)))
    })
}

/// Monic representative on [-1, 1] of a family's minimizing polynomial.
pub fn reference_monic(family: RuleFamily, n: usize) -> Polynomial {
    match family {
        RuleFamily::L1 => chebyshev_t(n).scale(&ratio(BigInt::one(), pow2(n - 1))),
        RuleFamily::L2 => {
            let f = factorial(n);
            legendre_p(n).scale(&ratio(pow2(n) * &f * &f, factorial(2 * n)))
        }
        RuleFamily::Linf => chebyshev_u(n).scale(&ratio(BigInt::one(), pow2(n))),
        RuleFamily::Alexiewicz => (&chebyshev_t(n) - &Polynomial::one()).scale(&ratio(BigInt::one(), pow2(n - 1))),
    }
}

/// Stable binary64 evaluation of a family's monic representative at `t`.
pub fn reference_eval(family: RuleFamily, n: usize, t: f64) -> f64 {
    let recur = |p0: f64, p1: f64, step: &dyn Fn(usize, f64, f64) -> f64| {
        if n == 0 {
            return p0;
        }
        let (mut prev, mut cur) = (p0, p1);
        for k in 1..n {
            let next = step(k, cur, prev);
            prev = cur;
            cur = next;
        }
        cur
    };
    let cheb = |k: usize, cur: f64, prev: f64| {
        let _ = k;
        2.0 * t * cur - prev
    };
    match family {
        RuleFamily::L1 => recur(1.0, t, &cheb) * 2f64.powi(1 - n as i32),
        RuleFamily::Linf => recur(1.0, 2.0 * t, &cheb) * 2f64.powi(-(n as i32)),
        RuleFamily::L2 => {
            let p = recur(1.0, t, &|k, cur, prev| {
                ((2 * k + 1) as f64 * t * cur - k as f64 * prev) / (k + 1) as f64
            });
            // 2^n (n!)^2 / (2n)! = prod_{k=1}^n 2k / (n + k)
            let norm: f64 = (1..=n).map(|k| (2 * k) as f64 / (n + k) as f64).product();
            p * norm
        }
        RuleFamily::Alexiewicz => {
            if t.abs() <= 1.0 {
                // T_n(cos th) - 1 = -2 sin^2(n th / 2)
                let s = (n as f64 * t.acos() / 2.0).sin();
                -2.0 * s * s * 2f64.powi(1 - n as i32)
            } else {
                (recur(1.0, t, &cheb) - 1.0) * 2f64.powi(1 - n as i32)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    A,
    B,
}

/// A monic kernel of degree `n` on `[a, b]`:
/// `poly(x) = ((b-a)/2)^n * reference((2x - a - b)/(b - a))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMonic {
    family: Option<RuleFamily>,
    n: usize,
    a: f64,
    b: f64,
    reference: Polynomial,
    poly: Polynomial,
    reference_f64: Vec<f64>,
}

pub(crate) fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::InvalidInterval { a, b })
    }
}

impl ScaledMonic {
    fn build(family: Option<RuleFamily>, reference: Polynomial, a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        let n = reference.degree();
        let (qa, qb) = (exact::from_f64(a), exact::from_f64(b));
        let width = &qb - &qa;
        let alpha = exact::int(2) / &width;
        let beta = -(&qa + &qb) / &width;
        let half_pow = exact::pow(&(&width / exact::int(2)), n);
        let poly = reference.compose_affine(&alpha, &beta).scale(&half_pow);
        let reference_f64 = reference.to_f64_coeffs();
        Ok(Self {
            family,
            n,
            a,
            b,
            reference,
            poly,
            reference_f64,
        })
    }

    /// A kernel from an arbitrary monic reference polynomial on [-1, 1].
    pub fn from_reference(reference: Polynomial, a: f64, b: f64) -> Result<Self> {
        if reference.degree() < 1 {
            return Err(Error::InvalidDegree(reference.degree()));
        }
        assert!(reference.is_monic(), "reference kernel must be monic");
        Self::build(None, reference, a, b)
    }

    pub fn family(&self) -> Option<RuleFamily> {
        self.family
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// The kernel on `[a, b]`, exact.
    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// The monic representative on [-1, 1].
    pub fn reference(&self) -> &Polynomial {
        &self.reference
    }

    pub fn width_exact(&self) -> Rational {
        exact::from_f64(self.b) - exact::from_f64(self.a)
    }

    pub fn eval_reference(&self, t: f64) -> f64 {
        match self.family {
            Some(fam) => reference_eval(fam, self.n, t),
            None => horner(&self.reference_f64, t),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let half = 0.5 * (self.b - self.a);
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        half.powi(self.n as i32) * self.eval_reference(t)
    }

    /// Sign-change roots of the reference polynomial in [-1, 1].
    pub fn reference_roots(&self) -> Vec<f64> {
        let deriv = self.reference.derivative().to_f64_coeffs();
        sign_change_roots(
            &|t| self.eval_reference(t),
            &|t| horner(&deriv, t),
            -1.0,
            1.0,
            2 * self.n + 1,
        )
    }

    /// Sign-change roots on `[a, b]`.
    pub fn roots(&self) -> Vec<f64> {
        let (a, b) = (self.a, self.b);
        self.reference_roots()
            .into_iter()
            .map(|t| 0.5 * (a + b) + 0.5 * (b - a) * t)
            .collect()
    }

    /// `||reference||_q` on [-1, 1].
    pub fn reference_qnorm(&self, q: f64) -> Result<f64> {
        if !(q >= 1.0) {
            return Err(Error::InvalidExponent(q));
        }
        let eval = |t: f64| self.eval_reference(t);
        if q.is_infinite() {
            let crit = self.reference.derivative();
            let dd = crit.derivative().to_f64_coeffs();
            let crit_f = crit.to_f64_coeffs();
            let mut candidates =
                sign_change_roots(&|t| horner(&crit_f, t), &|t| horner(&dd, t), -1.0, 1.0, 4 * self.n + 1);
            candidates.extend([-1.0, 1.0]);
            return Ok(candidates.into_iter().map(|t| eval(t).abs()).fold(0.0, f64::max));
        }
        qnorm_pieces(&eval, &self.reference_roots(), q)
    }

    /// `||poly||_q` on `[a, b]`, through the scaling law.
    pub fn qnorm(&self, q: f64) -> Result<f64> {
        let half = 0.5 * (self.b - self.a);
        let inv_q = if q.is_infinite() { 0.0 } else { 1.0 / q };
        Ok(half.powf(self.n as f64 + inv_q) * self.reference_qnorm(q)?)
    }
}

/// The family's minimizing monic polynomial scaled to `[a, b]`.
pub fn monic_on_interval(family: RuleFamily, n: usize, a: f64, b: f64) -> Result<ScaledMonic> {
    if n < 1 {
        return Err(Error::InvalidDegree(n));
    }
    ScaledMonic::build(Some(family), reference_monic(family, n), a, b)
}

/// Closed form of `phi^(m)(b)` divided by `(b-a)^(n-m)` for the T, P and U
/// families.
fn closed_form_at_b(family: RuleFamily, n: usize, m: usize) -> Rational {
    let f = factorial;
    match family {
        RuleFamily::L1 | RuleFamily::Alexiewicz => {
            // n (n+m-1)! m! / (2^(2n-2m-1) (n-m)! (2m)!)
            let num = BigInt::from(n) * f(n + m - 1) * f(m);
            let den_rest = f(n - m) * f(2 * m);
            // 2^(2n-2m-1) may be 2^-1 when m = n
            if 2 * n > 2 * m {
                ratio(num, pow2(2 * n - 2 * m - 1) * den_rest)
            } else {
                ratio(num * 2, den_rest)
            }
        }
        RuleFamily::L2 => {
            // (n!)^2 (n+m)! / ((2n)! (n-m)! m!)
            ratio(f(n) * f(n) * f(n + m), f(2 * n) * f(n - m) * f(m))
        }
        RuleFamily::Linf => {
            // m! (n+m+1)! / (2^(2n-2m) (2m+1)! (n-m)!)
            ratio(f(m) * f(n + m + 1), pow2(2 * n - 2 * m) * f(2 * m + 1) * f(n - m))
        }
    }
}

/// `phi^(m)` at an endpoint, as an exact multiple of `(b-a)^(n-m)`.
///
/// Named families use closed forms; a raw kernel is differentiated
/// coefficient-wise at the reference endpoint.
pub fn endpoint_derivative(sm: &ScaledMonic, m: usize, endpoint: Endpoint) -> Result<ScaledValue> {
    let n = sm.n;
    if m > n {
        return Err(Error::DerivativeOrder { m, n });
    }
    let power = n - m;
    let coeff = match sm.family {
        Some(RuleFamily::Alexiewicz) if m == 0 => match endpoint {
            Endpoint::B => Rational::zero(),
            // 2^(1-2n) ((-1)^n - 1)
            Endpoint::A if n % 2 == 1 => -ratio(BigInt::one(), pow2(2 * n - 2)),
            Endpoint::A => Rational::zero(),
        },
        Some(fam) => {
            let at_b = closed_form_at_b(fam, n, m);
            match endpoint {
                Endpoint::B => at_b,
                Endpoint::A => exact::sign_pow(n + m) * at_b,
            }
        }
        None => {
            let t = match endpoint {
                Endpoint::A => -Rational::one(),
                Endpoint::B => Rational::one(),
            };
            sm.reference.nth_derivative(m).eval(&t) / Rational::from_integer(pow2(power))
        }
    };
    Ok(ScaledValue::new(coeff, power))
}

/// Roots of a polynomial whose roots are all real and simple.
pub fn roots(poly: &Polynomial) -> Result<Vec<f64>> {
    let n = poly.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    let c = poly.to_f64_coeffs();
    let lead = c[n];
    // Cauchy bound
    let radius = 1.0 + c[..n].iter().map(|v| (v / lead).abs()).fold(0.0, f64::max);
    let d = poly.derivative().to_f64_coeffs();
    let mut samples = 2 * n + 1;
    loop {
        let found = sign_change_roots(&|x| horner(&c, x), &|x| horner(&d, x), -radius, radius, samples);
        if found.len() == n {
            return Ok(found);
        }
        if samples > 512 * (n + 1) {
            return Err(Error::RootsNotConverged {
                found: found.len(),
                expected: n,
            });
        }
        samples *= 2;
    }
}

/// Bracket sign changes on Chebyshev-node samples over `[lo, hi]`, bisect to
/// machine precision and polish with guarded Newton steps.
pub(crate) fn sign_change_roots(
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut xs: Vec<f64> = (1..=samples)
        .map(|j| {
            let th = std::f64::consts::PI * (2 * j - 1) as f64 / (2 * samples) as f64;
            mid + half * th.cos()
        })
        .collect();
    xs.push(lo);
    xs.push(hi);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..xs.len() {
        if vals[i] == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if i + 1 < xs.len() && vals[i + 1] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0) {
            roots.push(bisect(f, df, xs[i], xs[i + 1], vals[i]));
        }
    }
    roots
}

fn bisect(f: &dyn Fn(f64) -> f64, df: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let neg_at_a = fa < 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    // guarded Newton polish inside the final bracket
    let mut x = 0.5 * (a + b);
    for _ in 0..3 {
        let (fx, d) = (f(x), df(x));
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(next >= a && next <= b) || (x - next).abs() <= 1e-15 * x.abs().max(1.0) {
            if next >= a && next <= b && f(next).abs() < fx.abs() {
                x = next;
            }
            break;
        }
        if f(next).abs() >= fx.abs() {
            break;
        }
        x = next;
    }
    x
}

fn qnorm_pieces(eval: &dyn Fn(f64) -> f64, roots: &[f64], q: f64) -> Result<f64> {
    let mut points = vec![-1.0];
    points.extend(roots.iter().copied().filter(|&r| r > -1.0 && r < 1.0));
    points.push(1.0);
    let mut total = 0.0;
    for w in points.windows(2) {
        let piece = oracle::adaptive_gk(&|t: f64| Ok(eval(t).abs().powf(q)), w, 1e-14)?;
        total += piece.value;
    }
    Ok(total.powf(1.0 / q))
}

/// `||poly||_q` on [-1, 1] for an arbitrary nonzero polynomial.
pub fn qnorm_on_reference(poly: &Polynomial, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidExponent(q));
    }
    let c = poly.to_f64_coeffs();
    let d = poly.derivative().to_f64_coeffs();
    let eval = |t: f64| horner(&c, t);
    let samples = 4 * poly.degree() + 1;
    if q.is_infinite() {
        let dd = poly.derivative().derivative().to_f64_coeffs();
        let mut candidates = sign_change_roots(&|t| horner(&d, t), &|t| horner(&dd, t), -1.0, 1.0, samples);
        candidates.extend([-1.0, 1.0]);
        return Ok(candidates.into_iter().map(|t| eval(t).abs()).fold(0.0, f64::max));
    }
    let rs = sign_change_roots(&eval, &|t| horner(&d, t), -1.0, 1.0, samples);
    qnorm_pieces(&eval, &rs, q)
}

/// Closed-form `||reference||_q` for the three Lebesgue families at their
/// own exponent, when one is known.
pub fn closed_form_reference_norm(family: RuleFamily, n: usize) -> Option<(f64, f64)> {
    let nn = n as i32;
    match family {
        RuleFamily::L1 => Some((f64::INFINITY, 2f64.powi(1 - nn))),
        RuleFamily::Linf => Some((1.0, 2f64.powi(1 - nn))),
        RuleFamily::L2 => {
            // 2^n (n!)^2/(2n)! * sqrt(2/(2n+1))
            let scale: f64 = (1..=n).map(|k| (2 * k) as f64 / (n + k) as f64).product();
            Some((2.0, scale * (2.0 / (2 * n + 1) as f64).sqrt()))
        }
        RuleFamily::Alexiewicz => None,
    }
}
