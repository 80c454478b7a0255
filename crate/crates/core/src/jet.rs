//! Truncated Taylor series ("jets") of an expression at a point.
//!
//! `taylor[k] = f^(k)(point) / k!`. Every node costs O(K^2) for order K.

use crate::error::{Error, Result};
use crate::expr::{Expr, Func};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T = f64> {
    pub point: T,
    pub taylor: Vec<T>,
}

impl<T: Real> Jet<T> {
    pub fn order(&self) -> usize {
        self.taylor.len() - 1
    }

    /// `f^(k)(point)`.
    pub fn derivative(&self, k: usize) -> T {
        let mut fact = T::one();
        for j in 2..=k {
            fact *= T::from_usize(j);
        }
        fact * self.taylor[k]
    }

    pub fn derivatives(&self) -> Vec<T> {
        (0..self.taylor.len()).map(|k| self.derivative(k)).collect()
    }

    pub fn truncate(&self, order: usize) -> Jet<T> {
        Jet {
            point: self.point,
            taylor: self.taylor[..=order.min(self.order())].to_vec(),
        }
    }
}

type Series<T> = Vec<T>;

fn mul<T: Real>(a: &[T], b: &[T]) -> Series<T> {
    (0..a.len())
        .map(|k| {
            let mut s = T::zero();
            for j in 0..=k {
                s += a[j] * b[k - j];
            }
            s
        })
        .collect()
}

fn div<T: Real>(a: &[T], b: &[T], at: f64) -> Result<Series<T>> {
    if b[0].is_zero() {
        return Err(Error::Domain { op: "division", at });
    }
    let mut c: Series<T> = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let mut s = a[k];
        for j in 1..=k {
            s -= b[j] * c[k - j];
        }
        c.push(s / b[0]);
    }
    Ok(c)
}

fn exp<T: Real>(a: &[T]) -> Series<T> {
    let mut e: Series<T> = Vec::with_capacity(a.len());
    e.push(a[0].exp());
    for k in 1..a.len() {
        let mut s = T::zero();
        for j in 1..=k {
            s += T::from_usize(j) * a[j] * e[k - j];
        }
        e.push(s / T::from_usize(k));
    }
    e
}

fn log<T: Real>(a: &[T], at: f64) -> Result<Series<T>> {
    if !(a[0] > T::zero()) {
        return Err(Error::Domain { op: "log", at });
    }
    let mut l: Series<T> = Vec::with_capacity(a.len());
    l.push(a[0].ln());
    for k in 1..a.len() {
        let mut s = T::zero();
        for j in 1..k {
            s += T::from_usize(j) * l[j] * a[k - j];
        }
        l.push((a[k] - s / T::from_usize(k)) / a[0]);
    }
    Ok(l)
}

fn sin_cos<T: Real>(a: &[T]) -> (Series<T>, Series<T>) {
    let mut s: Series<T> = Vec::with_capacity(a.len());
    let mut c: Series<T> = Vec::with_capacity(a.len());
    s.push(a[0].sin());
    c.push(a[0].cos());
    for k in 1..a.len() {
        let mut ds = T::zero();
        let mut dc = T::zero();
        for j in 1..=k {
            let ja = T::from_usize(j) * a[j];
            ds += ja * c[k - j];
            dc += ja * s[k - j];
        }
        let kf = T::from_usize(k);
        s.push(ds / kf);
        c.push(-(dc / kf));
    }
    (s, c)
}

fn sqrt<T: Real>(a: &[T], at: f64) -> Result<Series<T>> {
    if a[0] < T::zero() {
        return Err(Error::Domain { op: "sqrt", at });
    }
    if a.len() > 1 && a[0].is_zero() {
        return Err(Error::NonDifferentiable { op: "sqrt", at });
    }
    let mut r: Series<T> = Vec::with_capacity(a.len());
    r.push(a[0].sqrt());
    let two = T::from_f64(2.0);
    for k in 1..a.len() {
        let mut s = a[k];
        for j in 1..k {
            s -= r[j] * r[k - j];
        }
        r.push(s / (two * r[0]));
    }
    Ok(r)
}

fn powi<T: Real>(a: &[T], k: i32, at: f64) -> Result<Series<T>> {
    let mut one = vec![T::zero(); a.len()];
    one[0] = T::one();
    let mut base: Series<T> = a.to_vec();
    let mut acc = one.clone();
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    if k < 0 {
        div(&one, &acc, at)
    } else {
        Ok(acc)
    }
}

fn eval_series<T: Real>(e: &Expr, point: T, len: usize) -> Result<Series<T>> {
    let at = point.to_f64();
    let constant = |v: T| {
        let mut s = vec![T::zero(); len];
        s[0] = v;
        s
    };
    Ok(match e {
        Expr::Num(v) => constant(T::from_f64(*v)),
        Expr::Var => {
            let mut s = constant(point);
            if len > 1 {
                s[1] = T::one();
            }
            s
        }
        Expr::Neg(inner) => eval_series(inner, point, len)?.into_iter().map(|v| -v).collect(),
        Expr::Add(l, r) => {
            let (l, r) = (eval_series(l, point, len)?, eval_series(r, point, len)?);
            l.into_iter().zip(r).map(|(x, y)| x + y).collect()
        }
        Expr::Sub(l, r) => {
            let (l, r) = (eval_series(l, point, len)?, eval_series(r, point, len)?);
            l.into_iter().zip(r).map(|(x, y)| x - y).collect()
        }
        Expr::Mul(l, r) => mul(&eval_series(l, point, len)?, &eval_series(r, point, len)?),
        Expr::Div(l, r) => div(&eval_series(l, point, len)?, &eval_series(r, point, len)?, at)?,
        Expr::Pow(base, exponent) => {
            let b = eval_series(base, point, len)?;
            match Expr::integer_exponent(exponent) {
                Some(k) => powi(&b, k, at)?,
                None => {
                    if !(b[0] > T::zero()) {
                        return Err(Error::Domain { op: "pow", at });
                    }
                    let y = eval_series(exponent, point, len)?;
                    exp(&mul(&y, &log(&b, at)?))
                }
            }
        }
        Expr::Call(func, arg) => {
            let a = eval_series(arg, point, len)?;
            match func {
                Func::Exp => exp(&a),
                Func::Log => log(&a, at)?,
                Func::Sin => sin_cos(&a).0,
                Func::Cos => sin_cos(&a).1,
                Func::Sqrt => sqrt(&a, at)?,
                Func::Abs => {
                    if len > 1 && a[0].is_zero() {
                        return Err(Error::NonDifferentiable { op: "abs", at });
                    }
                    if a[0] < T::zero() {
                        a.into_iter().map(|v| -v).collect()
                    } else {
                        a
                    }
                }
            }
        }
    })
}

/// Taylor coefficients of `e` at `point` through order `order`.
pub fn jet_eval<T: Real>(e: &Expr, point: T, order: usize) -> Result<Jet<T>> {
    let taylor = eval_series(e, point, order + 1)?;
    if let Some(bad) = taylor.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain {
            op: if bad == 0 { "evaluation" } else { "derivative" },
            at: point.to_f64(),
        });
    }
    Ok(Jet { point, taylor })
}

/// `f^(k)(point)` for a single `k`.
pub fn derivative_at<T: Real>(e: &Expr, point: T, k: usize) -> Result<T> {
    Ok(jet_eval(e, point, k)?.derivative(k))
}
