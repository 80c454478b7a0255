//! Piecewise polynomials with exact rational breakpoints.

use num_traits::{Signed, Zero};

use crate::exact::{self, Rational};
use crate::polynomials::{horner, sign_change_roots, Polynomial};

/// `pieces[i]` is the polynomial (in the global variable `x`) on
/// `[breaks[i], breaks[i + 1]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePoly {
    breaks: Vec<Rational>,
    pieces: Vec<Polynomial>,
}

impl PiecewisePoly {
    /// # Panics
    /// If `breaks` is not strictly increasing or does not have exactly one
    /// more entry than `pieces`.
    pub fn new(breaks: Vec<Rational>, pieces: Vec<Polynomial>) -> Self {
        assert!(!pieces.is_empty(), "at least one piece");
        assert_eq!(breaks.len(), pieces.len() + 1, "one more breakpoint than pieces");
        assert!(breaks.windows(2).all(|w| w[0] < w[1]), "breakpoints must increase");
        Self { breaks, pieces }
    }

    pub fn single(a: Rational, b: Rational, poly: Polynomial) -> Self {
        Self::new(vec![a, b], vec![poly])
    }

    /// Piecewise-constant function taking `values[i]` on the i-th piece.
    pub fn piecewise_constant(breaks: Vec<Rational>, values: &[Rational]) -> Self {
        let pieces = values.iter().map(|v| Polynomial::constant(v.clone())).collect();
        Self::new(breaks, pieces)
    }

    /// Continuous piecewise-linear interpolant through `points`.
    pub fn piecewise_linear(points: &[(Rational, Rational)]) -> Self {
        let pieces = points
            .windows(2)
            .map(|w| {
                let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
                let slope = (y1 - y0) / (x1 - x0);
                Polynomial::new(vec![y0 - &slope * x0, slope])
            })
            .collect();
        Self::new(points.iter().map(|p| p.0.clone()).collect(), pieces)
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn support(&self) -> (&Rational, &Rational) {
        (&self.breaks[0], self.breaks.last().expect("nonempty"))
    }

    fn piece_index(&self, x: &Rational) -> usize {
        // right-continuous inside, left piece at the right end
        let idx = self.breaks.partition_point(|b| b <= x);
        idx.saturating_sub(1).min(self.pieces.len() - 1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.pieces[self.piece_index(x)].eval(x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        exact::to_f64(&self.eval(&exact::from_f64(x)))
    }

    pub fn derivative(&self) -> Self {
        Self {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(Polynomial::derivative).collect(),
        }
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// The continuous primitive vanishing at the left end of the support.
    pub fn antiderivative(&self) -> Self {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut carry = Rational::zero();
        for (i, p) in self.pieces.iter().enumerate() {
            let anti = p.antiderivative();
            let shift = &carry - anti.eval(&self.breaks[i]);
            let piece = &anti + &Polynomial::constant(shift);
            carry = piece.eval(&self.breaks[i + 1]);
            pieces.push(piece);
        }
        Self {
            breaks: self.breaks.clone(),
            pieces,
        }
    }

    /// Exact integral over the whole support.
    pub fn integral(&self) -> Rational {
        self.pieces
            .iter()
            .zip(self.breaks.windows(2))
            .map(|(p, w)| p.integrate(&w[0], &w[1]))
            .sum()
    }

    /// `f^(0..=order)` at the left end of the support.
    pub fn derivatives_at_left(&self, order: usize) -> Vec<Rational> {
        derivs(&self.pieces[0], &self.breaks[0], order)
    }

    /// `f^(0..=order)` at the right end of the support.
    pub fn derivatives_at_right(&self, order: usize) -> Vec<Rational> {
        let last = self.pieces.len() - 1;
        derivs(&self.pieces[last], &self.breaks[last + 1], order)
    }

    /// `f^(0..=order)` at an arbitrary point, taken from the piece to the
    /// right of `x` (from the last piece at the right end).
    pub fn derivatives_at(&self, x: &Rational, order: usize) -> Vec<Rational> {
        derivs(&self.pieces[self.piece_index(x)], x, order)
    }

    /// Jumps `right - left` of `f^(0..=order)` at each interior breakpoint.
    pub fn derivative_jumps(&self, order: usize) -> Vec<Vec<Rational>> {
        (1..self.pieces.len())
            .map(|i| {
                let left = derivs(&self.pieces[i - 1], &self.breaks[i], order);
                let right = derivs(&self.pieces[i], &self.breaks[i], order);
                right.iter().zip(&left).map(|(r, l)| r - l).collect()
            })
            .collect()
    }

    /// True if `f` is `C^order` across every interior breakpoint.
    pub fn is_smooth(&self, order: usize) -> bool {
        self.derivative_jumps(order).iter().all(|j| j.iter().all(Zero::is_zero))
    }

    /// `sup |f|` over the support.
    ///
    /// Exact at breakpoints; interior extrema of nonlinear pieces are located
    /// in binary64.
    pub fn sup_abs(&self) -> f64 {
        let mut best = Rational::zero();
        for (p, w) in self.pieces.iter().zip(self.breaks.windows(2)) {
            for x in w {
                let v = p.eval(x).abs();
                if v > best {
                    best = v;
                }
            }
        }
        let mut best = exact::to_f64(&best);
        for (p, w) in self.pieces.iter().zip(self.breaks.windows(2)) {
            if p.degree() < 2 {
                continue;
            }
            let c = p.to_f64_coeffs();
            let d1 = p.derivative().to_f64_coeffs();
            let d2 = p.derivative().derivative().to_f64_coeffs();
            let (lo, hi) = (exact::to_f64(&w[0]), exact::to_f64(&w[1]));
            let crit = sign_change_roots(&|x| horner(&d1, x), &|x| horner(&d2, x), lo, hi, 4 * p.degree() + 1);
            for x in crit {
                best = best.max(horner(&c, x).abs());
            }
        }
        best
    }
}

fn derivs(p: &Polynomial, x: &Rational, order: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(order + 1);
    let mut q = p.clone();
    for _ in 0..=order {
        out.push(q.eval(x));
        q = q.derivative();
    }
    out
}
