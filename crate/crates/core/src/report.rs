//! End-to-end drivers behind the command line: a single integration with
//! its a-priori bound, convergence studies and exactness reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::norm_estimate;
use crate::composite::{composite_apply, composite_apply_naive, composite_bound, CompositePlan};
use crate::ddouble::DoubleDouble;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::exactness::{exactness_degree, moment_table};
use crate::expr::Expr;
use crate::family::{NormKind, RuleFamily};
use crate::jet::jet_eval;
use crate::oracle;
use crate::polynomials::monic_on_interval;
use crate::scalar::Real;

/// Result of one composite integration.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureReport {
    pub estimate: f64,
    pub family: RuleFamily,
    pub n: usize,
    pub m: usize,
    pub apriori_bound: f64,
    pub norm_used: NormKind,
    /// Estimated norm of `f^(n)` on `[a, b]`; an estimate, not an enclosure.
    pub norm_estimate: f64,
    pub oracle_value: Option<f64>,
    /// `oracle_value - estimate`.
    pub true_error: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    estimate: String,
    family: RuleFamily,
    n: usize,
    m: usize,
    apriori_bound: String,
    norm_used: String,
    norm_estimate: String,
    oracle_value: Option<String>,
    true_error: Option<String>,
}

/// 17 significant digits, enough to round-trip any binary64 value.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    s.trim().parse::<f64>().map_err(|e| format!("bad number `{s}`: {e}"))
}

impl QuadratureReport {
    pub fn to_json(&self) -> String {
        let wire = Wire {
            estimate: format_real(self.estimate),
            family: self.family,
            n: self.n,
            m: self.m,
            apriori_bound: format_real(self.apriori_bound),
            norm_used: self.norm_used.to_string(),
            norm_estimate: format_real(self.norm_estimate),
            oracle_value: self.oracle_value.map(format_real),
            true_error: self.true_error.map(format_real),
        };
        serde_json::to_string_pretty(&wire).expect("plain struct serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, String> {
        let w: Wire = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let opt = |v: &Option<String>| v.as_deref().map(parse_real).transpose();
        Ok(Self {
            estimate: parse_real(&w.estimate)?,
            family: w.family,
            n: w.n,
            m: w.m,
            apriori_bound: parse_real(&w.apriori_bound)?,
            norm_used: w.norm_used.parse().map_err(|e: Error| e.to_string())?,
            norm_estimate: parse_real(&w.norm_estimate)?,
            oracle_value: opt(&w.oracle_value)?,
            true_error: opt(&w.true_error)?,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k:<15} {v}");
        };
        line("estimate", format_real(self.estimate));
        line("family", self.family.to_string());
        line("n", self.n.to_string());
        line("m", self.m.to_string());
        line("apriori_bound", format_real(self.apriori_bound));
        line("norm_used", self.norm_used.to_string());
        line("norm_estimate", format_real(self.norm_estimate));
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_owned(), format_real);
        line("oracle_value", opt(self.oracle_value));
        line("true_error", opt(self.true_error));
        out
    }
}

#[derive(Clone, Debug)]
pub struct IntegrateRequest {
    pub expr: Expr,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub family: RuleFamily,
    pub m: usize,
    pub oracle: bool,
    /// Sum the single-interval rule per subinterval instead of the
    /// telescoped form.
    pub naive: bool,
}

/// Relative tolerance of the reference integral in reports.
pub const ORACLE_TOL: f64 = 1e-13;

pub fn run_integrate(req: &IntegrateRequest) -> Result<QuadratureReport> {
    let plan = CompositePlan::new(req.family, req.n, req.m, req.a, req.b)?;
    let estimate = if req.naive {
        composite_apply_naive::<f64>(&plan, &req.expr)?
    } else {
        composite_apply::<f64>(&plan, &req.expr)?
    };
    let norm_used = req.family.natural_norm();
    let norm = norm_estimate(&req.expr, req.n, norm_used, req.a, req.b)?;
    let apriori_bound = composite_bound(&plan, norm, norm_used)?;
    let oracle_value = if req.oracle {
        Some(oracle::integrate(&req.expr, req.a, req.b, ORACLE_TOL)?.value)
    } else {
        None
    };
    Ok(QuadratureReport {
        estimate,
        family: req.family,
        n: req.n,
        m: req.m,
        apriori_bound,
        norm_used,
        norm_estimate: norm,
        oracle_value,
        true_error: oracle_value.map(|v| v - estimate),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub m: usize,
    /// `|reference - composite|`, zero when below the double-double floor.
    pub error: f64,
    /// `log2(e_(m/2) / e_m)`; `None` for the first row or when an error is
    /// zero.
    pub order: Option<f64>,
}

/// Composite errors for `m = 1, 2, 4, ..., <= mmax`.
///
/// Both the composite sums and the reference integral are evaluated in
/// double-double precision, so errors far below binary64 resolution are
/// still measured.
pub fn convergence_study(
    e: &Expr,
    a: f64,
    b: f64,
    n: usize,
    family: RuleFamily,
    mmax: usize,
) -> Result<Vec<ConvergenceRow>> {
    if mmax < 1 {
        return Err(Error::InvalidPartition(mmax));
    }
    CompositePlan::new(family, n, 1, a, b)?;
    let reference = oracle::integrate_gauss_legendre(
        |x: DoubleDouble| Ok(jet_eval(e, x, 0)?.taylor[0]),
        DoubleDouble::from_f64(a),
        DoubleDouble::from_f64(b),
        1e-30,
    )?;
    let floor = 64.0 * DoubleDouble::EPSILON * reference.to_f64().abs().max(1.0);
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut m = 1;
    while m <= mmax {
        let plan = CompositePlan::new(family, n, m, a, b)?;
        let approx: DoubleDouble = composite_apply(&plan, e)?;
        let mut error = (reference - approx).abs().to_f64();
        if error <= floor {
            error = 0.0;
        }
        let order = rows
            .last()
            .filter(|prev| prev.error > 0.0 && error > 0.0)
            .map(|prev| (prev.error / error).log2());
        rows.push(ConvergenceRow { m, error, order });
        m *= 2;
    }
    Ok(rows)
}

/// Least-squares slope of `-log(error)` against `log(m)` over the rows
/// whose `m` lies in `ms`. `None` if fewer than two usable rows.
pub fn observed_order(rows: &[ConvergenceRow], ms: &[usize]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| ms.contains(&r.m) && r.error > 0.0)
        .map(|r| ((r.m as f64).ln(), -r.error.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("m,error,order\n");
    for r in rows {
        let error = if r.error == 0.0 {
            "0 (exact)".to_owned()
        } else {
            format!("{:.6e}", r.error)
        };
        let order = r.order.map_or_else(|| "-".to_owned(), |o| format!("{o:.4}"));
        let _ = writeln!(out, "{},{error},{order}", r.m);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessReport {
    pub family: RuleFamily,
    pub n: usize,
    pub degree: usize,
    /// `integral_{-1}^{1} t^j phi~(t) dt` for `j = 0..=n`.
    pub moments: Vec<Rational>,
}

pub fn exactness_report(family: RuleFamily, n: usize) -> Result<ExactnessReport> {
    let phi = monic_on_interval(family, n, -1.0, 1.0)?;
    Ok(ExactnessReport {
        family,
        n,
        degree: exactness_degree(&phi),
        moments: moment_table(family, n)?,
    })
}

impl ExactnessReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "family {} n {}\ndegree of exactness: {}\n\nj,moment,vanishes\n",
            self.family, self.n, self.degree
        );
        for (j, mom) in self.moments.iter().enumerate() {
            let _ = writeln!(out, "{j},{mom},{}", num_traits::Zero::is_zero(mom));
        }
        out
    }
}
