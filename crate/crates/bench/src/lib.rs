//! Shared inputs for the quadrature benchmarks.

/// Smooth integrands paired with an interval.
pub const CORPUS: [(&str, f64, f64); 4] = [
    ("exp(x)", 0.0, 1.0),
    ("sin(x)", -2.0, 3.0),
    ("1/(1+x^2)", -2.0, 3.0),
    ("exp(-x^2)*cos(3*x)", -1.0, 2.0),
];
