//! Corrected trapezoidal quadrature.
//!
//! Rules of order `n` combine endpoint derivatives `f^(0..n-1)` at `a` and
//! `b` with weights taken from a monic polynomial kernel. Four kernel
//! families are provided, each with a sharp a-priori error bound:
//!
//! | family | kernel on [-1, 1] | norm of `f^(n)` |
//! |--------|-------------------|-----------------|
//! | `L1`   | `2^(1-n) T_n`     | `L^1`           |
//! | `L2`   | monic Legendre    | `L^2`           |
//! | `Linf` | `2^(-n) U_n`      | `L^inf`         |
//! | `Alexiewicz` | `2^(1-n) (T_n - 1)` | Alexiewicz |
//!
//! ```
//! use ctrap_core::{composite_apply, parse, CompositePlan, RuleFamily};
//!
//! let f = parse("exp(x)").unwrap();
//! let plan = CompositePlan::new(RuleFamily::L2, 3, 4, 0.0, 1.0).unwrap();
//! let v: f64 = composite_apply(&plan, &f).unwrap();
//! assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-8);
//! ```

// NaN-rejecting checks are written as `!(x >= y)`.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

pub mod bounds;
pub mod composite;
pub mod ddouble;
pub mod error;
pub mod exact;
pub mod exactness;
pub mod expr;
pub mod family;
pub mod jet;
pub mod oracle;
pub mod piecewise;
pub mod polynomials;
pub mod report;
pub mod rules;
pub mod scalar;

pub use bounds::{
    alexiewicz_norm, apriori_bound, family_constant, k_constant, lp_norm_estimate, norm_estimate, sharp_coefficient,
    ErrorConstant,
};
pub use composite::{composite_apply, composite_apply_naive, composite_bound, CompositePlan};
pub use ddouble::DoubleDouble;
pub use error::{Error, Result};
pub use exact::{Rational, ScaledValue};
pub use exactness::{
    build_extremal_alexiewicz, build_extremal_alexiewicz_ramped, build_extremal_linf, build_extremal_lp,
    exactness_degree, ExtremalLp, ExtremalSpec,
};
pub use expr::{parse, Expr, Func};
pub use family::{conjugate, NormKind, RuleFamily};
pub use jet::{jet_eval, Jet};
pub use oracle::OracleResult;
pub use piecewise::PiecewisePoly;
pub use polynomials::{
    chebyshev_t, chebyshev_u, endpoint_derivative, legendre_p, monic_on_interval, qnorm_on_reference, roots, Endpoint,
    Polynomial, ScaledMonic,
};
pub use report::{
    convergence_study, exactness_report, run_integrate, ConvergenceRow, ExactnessReport, IntegrateRequest,
    QuadratureReport,
};
pub use rules::{estimate_error_term, generic_rule, weights, weights_csv, EndpointJet, RuleWeights};
pub use scalar::Real;
