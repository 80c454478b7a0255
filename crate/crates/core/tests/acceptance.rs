//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ctrap_core::exact::{self, sign_pow};
use ctrap_core::exactness::{
    alexiewicz_sharpness_ratio, linf_sharpness_ratio, moment_table, monomial_error, monomial_error_f64,
};
use ctrap_core::oracle::integrate_gauss_legendre;
use ctrap_core::report::{convergence_study, observed_order};
use ctrap_core::rules::{family_weight_coefficients, generic_coefficients};
use ctrap_core::{
    build_extremal_alexiewicz_ramped, build_extremal_lp, composite_apply, composite_apply_naive, composite_bound,
    endpoint_derivative, jet_eval, k_constant, monic_on_interval, norm_estimate, parse, CompositePlan, DoubleDouble,
    Endpoint, ExtremalSpec, NormKind, Polynomial, Rational, Real, RuleFamily, ScaledMonic,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

const FAMILIES: [RuleFamily; 4] = [RuleFamily::L1, RuleFamily::L2, RuleFamily::Linf, RuleFamily::Alexiewicz];
const INFINITY: f64 = f64::INFINITY;

fn rel_diff(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Weight tables: closed forms against the generic rule, both in exact
/// rationals, and the endpoint-derivative closed forms against direct
/// coefficient differentiation.
fn weight_tables() -> Outcome {
    let mut checked = 0;
    for family in FAMILIES {
        for n in 1..=10 {
            let (w, extra) = family_weight_coefficients(family, n).map_err(|e| e.to_string())?;
            let phi = monic_on_interval(family, n, 0.0, 1.0).map_err(|e| e.to_string())?;
            let generic = generic_coefficients(&phi).map_err(|e| e.to_string())?;
            for k in 0..n {
                let base = w.get(k).cloned().unwrap_or_else(Rational::zero);
                let mut want_a = base.clone();
                if k == n - 1 {
                    if let Some(x) = &extra {
                        want_a += x;
                    }
                }
                let want_b = sign_pow(k) * &base;
                let (ga, gb) = (&generic.at_a[k], &generic.at_b[k]);
                if ga.coeff != want_a || gb.coeff != want_b || ga.power != k + 1 || gb.power != k + 1 {
                    return Err(format!(
                        "{family} n={n} k={k}: closed form ({want_a}, {want_b}) vs generic ({}, {})",
                        ga.coeff, gb.coeff
                    ));
                }
                checked += 1;
            }
            let (qa, qb) = (exact::int(0), exact::int(1));
            for m in 0..=n {
                let d = phi.poly().nth_derivative(m);
                for (endpoint, x) in [(Endpoint::A, &qa), (Endpoint::B, &qb)] {
                    let closed = endpoint_derivative(&phi, m, endpoint).map_err(|e| e.to_string())?;
                    if closed.coeff != d.eval(x) {
                        return Err(format!("{family} n={n} m={m}: endpoint derivative mismatch"));
                    }
                }
            }
        }
    }
    Ok(format!("{checked} weights equal in exact arithmetic"))
}

/// Closed-form constants against `2^(-n-1/q) ||phi~||_q / n!` from computed
/// kernel norms.
fn constants() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=10 {
        let nf = factorial(n);
        let cases = [
            (1.0, RuleFamily::L1, 2f64.powi(1 - 2 * n as i32) / nf),
            (2.0, RuleFamily::L2, nf / ((2 * n + 1) as f64).sqrt() / factorial(2 * n)),
            (INFINITY, RuleFamily::Linf, 2f64.powi(-2 * n as i32) / nf),
        ];
        for (p, family, closed) in cases {
            let k = k_constant(n, p).map_err(|e| e.to_string())?;
            let q = ctrap_core::conjugate(p).map_err(|e| e.to_string())?;
            let qnorm = monic_on_interval(family, n, -1.0, 1.0)
                .and_then(|s| s.reference_qnorm(q))
                .map_err(|e| e.to_string())?;
            let inv_q = if q.is_infinite() { 0.0 } else { 1.0 / q };
            let numeric = 2f64.powf(-(n as f64) - inv_q) * qnorm / nf;
            let d = rel_diff(k.value, closed).max(rel_diff(numeric, closed));
            worst = worst.max(d);
            if d > 1e-10 {
                return Err(format!("K({n},{p}) = {} closed {closed} numeric {numeric}", k.value));
            }
        }
    }
    for p in [1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, INFINITY] {
        let q = ctrap_core::conjugate(p).map_err(|e| e.to_string())?;
        let want = if q.is_infinite() {
            0.5
        } else {
            0.5 * (1.0 / (q + 1.0)).powf(1.0 / q)
        };
        let got = k_constant(1, p).map_err(|e| e.to_string())?.value;
        worst = worst.max(rel_diff(got, want));
        if rel_diff(got, want) > 1e-10 {
            return Err(format!("K(1,{p}) = {got}, expected {want}"));
        }
    }
    Ok(format!("worst relative deviation {worst:.1e}"))
}

fn random_monic(rng: &mut ChaCha8Rng, n: usize) -> Polynomial {
    let mut coeffs: Vec<Rational> = (0..n)
        .map(|_| exact::ratio(rng.gen_range(-64..=64).into(), 16.into()))
        .collect();
    coeffs.push(exact::int(1));
    Polynomial::new(coeffs)
}

fn exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let intervals = [(0.0, 1.0), (-2.0, 3.0), (-1.0, 1.0)];
    let mut checks = 0;
    for n in 1..=8 {
        for trial in 0..20 {
            let (a, b) = intervals[trial % intervals.len()];
            let phi = ScaledMonic::from_reference(random_monic(&mut rng, n), a, b).map_err(|e| e.to_string())?;
            for deg in 0..n {
                let (err, scale) = monomial_error_f64(&phi, deg).map_err(|e| e.to_string())?;
                if err.abs() > 1e-11 * scale {
                    return Err(format!("random kernel n={n} trial={trial} deg={deg}: error {err:e}"));
                }
                checks += 1;
            }
        }
        for &(a, b) in &intervals {
            let phi = monic_on_interval(RuleFamily::L2, n, a, b).map_err(|e| e.to_string())?;
            for deg in 0..2 * n {
                let (err, scale) = monomial_error_f64(&phi, deg).map_err(|e| e.to_string())?;
                if err.abs() > 1e-11 * scale || !monomial_error(&phi, deg).is_zero() {
                    return Err(format!("L2 n={n} [{a},{b}] deg={deg}: error {err:e}"));
                }
                checks += 1;
            }
            if monomial_error(&phi, 2 * n).is_zero() {
                return Err(format!("L2 n={n} integrates degree {} exactly", 2 * n));
            }
        }
    }
    for n in 1..=10 {
        let moments = moment_table(RuleFamily::L2, n).map_err(|e| e.to_string())?;
        if !moments[..n].iter().all(Zero::is_zero) || moments[n].is_zero() {
            return Err(format!("Legendre moments n={n}: {moments:?}"));
        }
        checks += 1;
    }
    Ok(format!("{checks} checks"))
}

/// Reference integral and composite errors in double-double, so the
/// comparison with the bound is free of binary64 rounding.
fn bound_satisfaction() -> Outcome {
    let corpus = ["exp(x)", "sin(x)", "1/(1+x^2)"];
    let mut runs = 0;
    let mut tightest = 0.0f64;
    for &(a, b) in &[(0.0, 1.0), (-2.0, 3.0)] {
        for n in 1..=6 {
            let power = format!("x^{}", n + 3);
            for src in corpus.iter().copied().chain([power.as_str()]) {
                let e = parse(src).map_err(|e| e.to_string())?;
                let reference = integrate_gauss_legendre(
                    |x: DoubleDouble| Ok(jet_eval(&e, x, 0)?.taylor[0]),
                    DoubleDouble::from_f64(a),
                    DoubleDouble::from_f64(b),
                    1e-30,
                )
                .map_err(|e| e.to_string())?;
                for family in FAMILIES {
                    let norm_kind = family.natural_norm();
                    let norm = norm_estimate(&e, n, norm_kind, a, b).map_err(|e| e.to_string())?;
                    for m in [1, 2, 4, 8, 16] {
                        let plan = CompositePlan::new(family, n, m, a, b).map_err(|e| e.to_string())?;
                        let approx: DoubleDouble = composite_apply(&plan, &e).map_err(|e| e.to_string())?;
                        let err = (reference - approx).abs().to_f64();
                        let bound = composite_bound(&plan, norm, norm_kind).map_err(|e| e.to_string())?;
                        if err > bound {
                            return Err(format!(
                                "{src} on [{a},{b}] {family} n={n} m={m}: error {err:e} > bound {bound:e}"
                            ));
                        }
                        if bound > 0.0 {
                            tightest = tightest.max(err / bound);
                        }
                        runs += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{runs} runs, zero violations, largest error/bound {tightest:.3}"
    ))
}

fn sharpness() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=6 {
        for &(a, b, d) in &[(0.0, 1.0, 1.0), (-1.0, 1.0, -2.5), (-2.0, 3.0, 0.75)] {
            let spec = ExtremalSpec {
                family: RuleFamily::Linf,
                n,
                norm: NormKind::Lp(INFINITY),
                a,
                b,
                d,
            };
            let r = linf_sharpness_ratio(&spec).map_err(|e| e.to_string())?;
            worst = worst.max((r - 1.0).abs());
            if (r - 1.0).abs() > 1e-10 {
                return Err(format!("Linf n={n} [{a},{b}]: ratio {r}"));
            }
            let spec = ExtremalSpec {
                family: RuleFamily::L2,
                norm: NormKind::Lp(2.0),
                ..spec
            };
            let lp = build_extremal_lp(&spec).map_err(|e| e.to_string())?;
            let err = lp.rule_error().map_err(|e| e.to_string())?.abs();
            let bound = lp.bound().map_err(|e| e.to_string())?;
            worst = worst.max(rel_diff(err, bound));
            if rel_diff(err, bound) > 1e-10 {
                return Err(format!("L2 n={n} [{a},{b}]: error {err:e} bound {bound:e}"));
            }
        }
    }
    // Alexiewicz: ramped sign construction, ratio 1 - O(ramp).
    for n in [1, 2] {
        for &(a, b, d) in &[(0.0, 1.0, 1.0), (-1.0, 1.0, 3.0), (-2.0, 3.0, -0.5)] {
            let spec = ExtremalSpec {
                family: RuleFamily::Alexiewicz,
                n,
                norm: NormKind::Alexiewicz,
                a,
                b,
                d,
            };
            let f = build_extremal_alexiewicz_ramped(&spec, 1e-12).map_err(|e| e.to_string())?;
            let r = alexiewicz_sharpness_ratio(&spec, &f).map_err(|e| e.to_string())?;
            worst = worst.max((r - 1.0).abs());
            if (r - 1.0).abs() > 1e-10 {
                return Err(format!("Alexiewicz n={n} [{a},{b}]: ratio {r}"));
            }
        }
    }
    Ok(format!("worst deviation from equality {worst:.1e}"))
}

fn convergence() -> Outcome {
    let e = parse("exp(x)").map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for family in FAMILIES {
        let slack = if family == RuleFamily::Alexiewicz { 1.3 } else { 0.3 };
        for n in 1..=5 {
            let rows = convergence_study(&e, 0.0, 1.0, n, family, 32).map_err(|e| e.to_string())?;
            let order = observed_order(&rows, &[4, 8, 16, 32])
                .ok_or_else(|| format!("{family} n={n}: errors vanished, no order"))?;
            if order < n as f64 - slack {
                return Err(format!(
                    "{family} n={n}: observed order {order:.3} < {}",
                    n as f64 - slack
                ));
            }
            lines.push(format!("{}{n}:{order:.2}", family.short_name()));
        }
    }
    Ok(lines.join(" "))
}

fn monotonicity() -> Outcome {
    let grid = [1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, INFINITY];
    for n in 1..=8 {
        let ks: Vec<f64> = grid
            .iter()
            .map(|&p| k_constant(n, p).map(|k| k.value))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if let Some(i) = (1..ks.len()).find(|&i| ks[i] > ks[i - 1]) {
            return Err(format!(
                "n={n}: K(p={}) = {:e} > K(p={}) = {:e}",
                grid[i],
                ks[i],
                grid[i - 1],
                ks[i - 1]
            ));
        }
    }
    Ok(format!("non-increasing on {} exponents, n = 1..8", grid.len()))
}

fn telescoping() -> Outcome {
    let corpus = ["exp(x)", "sin(x)", "1/(1+x^2)", "x^9"];
    let mut worst = 0.0f64;
    for src in corpus {
        let e = parse(src).map_err(|e| e.to_string())?;
        for &(a, b) in &[(0.0, 1.0), (-2.0, 3.0)] {
            for family in FAMILIES {
                for n in 1..=6 {
                    for m in 1..=16 {
                        let plan = CompositePlan::new(family, n, m, a, b).map_err(|e| e.to_string())?;
                        let t: f64 = composite_apply(&plan, &e).map_err(|e| e.to_string())?;
                        let s: f64 = composite_apply_naive(&plan, &e).map_err(|e| e.to_string())?;
                        let d = rel_diff(t, s);
                        worst = worst.max(d);
                        if d > 1e-12 {
                            return Err(format!("{src} {family} n={n} m={m}: {t} vs {s}"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("worst relative difference {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 weight tables", weight_tables, 1),
        ("2 error constants", constants, 5),
        ("3 exactness", exactness, 10),
        ("4 bound satisfaction", bound_satisfaction, 60),
        ("5 sharpness", sharpness, 10),
        ("6 convergence order", convergence, 30),
        ("7 monotonicity of K(n,p)", monotonicity, 10),
        ("8 telescoping equivalence", telescoping, 10),
    ];
    let mut failures = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("{msg}; over the {budget} s budget")),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} criterion {name} ({:.2} s): {detail}", elapsed.as_secs_f64());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
