//! Composite rules on uniform partitions.
//!
//! Summing the single-interval rule over `x_i = a + (b-a) i / m` puts, for
//! each derivative order `k`, a coefficient `A_k` on every left node and
//! `B_k` on every right node. Interior nodes therefore carry `A_k + B_k`,
//! which vanishes for odd `k` when the kernel is even or odd. The
//! telescoped sum evaluates one jet per node.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::bounds::family_constant;
use crate::error::{Error, Result};
use crate::exact::{self, factorial, ratio, Rational};
use crate::expr::Expr;
use crate::family::{conjugate, reciprocal, NormKind, RuleFamily};
use crate::jet::jet_eval;
use crate::polynomials::{check_interval, endpoint_derivative, monic_on_interval, Endpoint};
use crate::rules::family_weight_coefficients;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct CompositePlan {
    pub family: RuleFamily,
    pub n: usize,
    pub m: usize,
    pub a: f64,
    pub b: f64,
    nodes: Vec<f64>,
    coeffs: Vec<(Rational, Rational)>,
}

impl CompositePlan {
    pub fn new(family: RuleFamily, n: usize, m: usize, a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        if n < 1 {
            return Err(Error::InvalidDegree(n));
        }
        if m < 1 {
            return Err(Error::InvalidPartition(m));
        }
        let nodes = (0..=m)
            .map(|i| if i == m { b } else { a + (b - a) * i as f64 / m as f64 })
            .collect();
        Ok(Self {
            family,
            n,
            m,
            a,
            b,
            nodes,
            coeffs: node_coefficients(family, n)?,
        })
    }

    /// `x_0 = a < x_1 < ... < x_m = b`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    fn node<T: Real>(&self, i: usize) -> T {
        let (a, b) = (T::from_f64(self.a), T::from_f64(self.b));
        if i == self.m {
            b
        } else {
            a + (b - a) * T::from_usize(i) / T::from_usize(self.m)
        }
    }
}

/// Per-order coefficients `(A_k, B_k)` of the left-node and right-node
/// sums. Both multiply `h^(k+1)` with `h = (b-a)/(2m)`.
pub fn node_coefficients(family: RuleFamily, n: usize) -> Result<Vec<(Rational, Rational)>> {
    let reference = monic_on_interval(family, n, -1.0, 1.0)?;
    let inv_fact = ratio(BigInt::one(), factorial(n));
    let two = exact::int(2);
    (0..n)
        .map(|k| {
            let left = endpoint_derivative(&reference, n - k - 1, Endpoint::A)?.exact(&two);
            let right = endpoint_derivative(&reference, n - k - 1, Endpoint::B)?.exact(&two);
            let alpha = exact::sign_pow(k + 1) * left * &inv_fact;
            let beta = exact::sign_pow(k) * right * &inv_fact;
            Ok((alpha, beta))
        })
        .collect()
}

/// Fixed-order pairwise summation.
pub(crate) fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => xs[0],
        len => {
            let (l, r) = xs.split_at(len / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

fn node_derivatives<T: Real>(plan: &CompositePlan, e: &Expr) -> Result<Vec<Vec<T>>> {
    let order = plan.n - 1;
    (0..=plan.m)
        .into_par_iter()
        .map(|i| Ok(jet_eval(e, plan.node::<T>(i), order)?.derivatives()))
        .collect()
}

/// The telescoped composite rule in precision `T`.
pub fn composite_apply<T: Real>(plan: &CompositePlan, e: &Expr) -> Result<T> {
    let d = node_derivatives::<T>(plan, e)?;
    let m = plan.m;
    let h = (T::from_f64(plan.b) - T::from_f64(plan.a)) / T::from_usize(2 * m);
    let mut total = T::zero();
    let mut hk = h;
    for (k, (alpha, beta)) in plan.coeffs.iter().enumerate() {
        let (alpha, beta) = (T::from_rational(alpha), T::from_rational(beta));
        let interior_weight = alpha + beta;
        let mut term = alpha * d[0][k] + beta * d[m][k];
        if m > 1 && !interior_weight.is_zero() {
            let interior: Vec<T> = (1..m).map(|i| d[i][k]).collect();
            term += interior_weight * pairwise_sum(&interior);
        }
        total += hk * term;
        hk *= h;
    }
    Ok(total)
}

/// Sum of the single-interval rule over the subintervals. Validation path.
pub fn composite_apply_naive<T: Real>(plan: &CompositePlan, e: &Expr) -> Result<T> {
    let d = node_derivatives::<T>(plan, e)?;
    let (w, extra) = family_weight_coefficients(plan.family, plan.n)?;
    let w: Vec<T> = w.iter().map(T::from_rational).collect();
    let extra = extra.as_ref().map(T::from_rational);
    let n = plan.n;
    let parts: Vec<T> = (1..=plan.m)
        .map(|i| {
            let (da, db) = (&d[i - 1], &d[i]);
            let width = plan.node::<T>(i) - plan.node::<T>(i - 1);
            let mut sum = T::zero();
            let mut wk = width;
            for (k, c) in w.iter().enumerate() {
                let pair = da[k] + if k % 2 == 0 { db[k] } else { -db[k] };
                sum += *c * wk * pair;
                wk *= width;
            }
            if let Some(x) = extra {
                sum += x * width.powi(n as i32) * da[n - 1];
            }
            sum
        })
        .collect();
    Ok(pairwise_sum(&parts))
}

/// A-priori bound for the composite rule given a norm of `f^(n)` on
/// `[a, b]`.
///
/// Lebesgue norms: `K ||f^(n)||_p (b-a)^(n+1/q) m^(-n)` with `K` the
/// plan family's constant for that `p`.
///
/// Alexiewicz norm (Alexiewicz family only): the total variation of the
/// piecewise kernel times `||f^(n)|| / n!`. With `H = (b-a)/m` this is
/// `||f^(n)|| H^n (m n + j) / (n! 2^(2n-2))`, where `j = m - 1` for odd `n`
/// counts the kernel's jumps at interior nodes and `j = 0` for even `n`.
/// For even `n` or `m = 1` it reduces to
/// `||f^(n)|| (b-a)^n / (m^(n-1) (n-1)! 2^(2n-2))`.
pub fn composite_bound(plan: &CompositePlan, norm_value: f64, norm: NormKind) -> Result<f64> {
    let n = plan.n;
    let width = plan.b - plan.a;
    let m = plan.m as f64;
    match norm.validate()? {
        NormKind::Lp(p) => {
            let k = family_constant(plan.family, n, norm)?.value;
            let q = conjugate(p)?;
            Ok(k * norm_value * width.powf(n as f64 + reciprocal(q)) * m.powi(-(n as i32)))
        }
        NormKind::Alexiewicz => {
            let k = family_constant(plan.family, n, norm)?.value;
            let jumps = if n % 2 == 1 { m - 1.0 } else { 0.0 };
            let h = width / m;
            Ok(k * norm_value * h.powi(n as i32) * (m * n as f64 + jumps) / n as f64)
        }
    }
}
