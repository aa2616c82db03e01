//! Property suites run by `sto2c validate`, collected into one JSON report.

use std::cmp::Ordering;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::auxiliary::{aux_a, aux_b, aux_b_recurrence, aux_b_series};
use crate::combinatorics::verify_generating_identity;
use crate::error::{domain, Result};
use crate::integrals::{analytic, overlap, nuclear_attraction, Center, IntegralKind, IntegralSpec, StoParams};
use crate::legendre::{legendre_eval, legendre_oracle};
use crate::oracle::{aux_a_quadrature, aux_b_quadrature, quad_integrals, QuadratureConfig};
use crate::product::{cached_expansion, eval_direct, eval_expansion, verify_factorization, verify_power_expansion, verify_s_range};
use crate::quadrature::GaussLegendre;
use crate::stability::{check_coefficients, digit_loss_report, sample_points, DigitLossReport};

/// Largest `lmax` accepted without an explicit override.
pub const LMAX_GUARD: u32 = 12;

pub const INTEGRAL_TOL: f64 = 1e-8;
pub const AUX_TOL: f64 = 1e-12;
pub const AUX_BAND_TOL: f64 = 1e-11;
pub const COEFF_TOL: f64 = 1e-6;
pub const SPOT_TOL: f64 = 1e-9;

pub const SWEEP_ZETAS: [f64; 4] = [0.5, 1.0, 2.5, 5.0];
pub const SWEEP_ZETA_R: [f64; 4] = [0.5, 2.0, 8.0, 20.0];
pub const AUX_P: [f64; 4] = [0.5, 1.0, 5.0, 20.0];
pub const AUX_Q: [f64; 7] = [-15.0, -1.0, -1e-6, 0.0, 1e-6, 1.0, 15.0];
pub const AUX_MAX_ORDER: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    pub lmax: u32,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub digit_loss_lmax: u32,
    pub digit_loss_samples: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            lmax: 8,
            samples: 100,
            tol: 1e-10,
            seed: 42,
            digit_loss_lmax: 15,
            digit_loss_samples: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub inputs: Value,
    pub got: f64,
    pub want: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub max_rel_err: f64,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            cases: 0,
            max_rel_err: 0.0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one comparison. `err` is the already scaled error measure.
    pub fn record(&mut self, inputs: impl FnOnce() -> Value, got: f64, want: f64, err: f64, tol: f64) {
        self.cases += 1;
        // NaN must count as a failure, so compare the negation
        if !matches!(err.partial_cmp(&tol), Some(Ordering::Less | Ordering::Equal)) {
            self.failures.push(Failure {
                inputs: inputs(),
                got,
                want,
                tol,
            });
        }
        if err.is_nan() || err > self.max_rel_err {
            self.max_rel_err = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    /// Records a pass/fail check with no numeric error.
    pub fn check(&mut self, inputs: impl FnOnce() -> Value, ok: bool) {
        let (got, err) = if ok { (1.0, 0.0) } else { (0.0, 1.0) };
        self.record(inputs, got, 1.0, err, 0.0);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub suites: Vec<SuiteReport>,
    pub seed: u64,
    pub wall_time_ms: u64,
    pub digit_loss: DigitLossReport,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

fn rel(got: f64, want: f64, floor: f64) -> f64 {
    (got - want).abs() / want.abs().max(floor)
}

/// `|P̄_lλ(cos θ_a) P̄_l'λ(cos θ_b)|`: expansion against the direct product at
/// seeded random points, for all `l, l' <= lmax`.
pub fn suite_expansion(lmax: u32, samples: usize, tol: f64, seed: u64) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("expansion_vs_direct");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for l in 0..=lmax {
        for lp in 0..=lmax {
            for lambda in 0..=l.min(lp) {
                let table = cached_expansion(l, lambda, lp)?;
                for pt in sample_points(samples, &mut rng) {
                    let got = eval_expansion(&table, &pt);
                    let want = eval_direct(l, lambda, lp, &pt)?;
                    suite.record(
                        || json!({"l": l, "lambda": lambda, "lp": lp, "mu": pt.mu(), "nu": pt.nu()}),
                        got,
                        want,
                        rel(got, want, 1.0),
                        tol,
                    );
                }
            }
        }
    }
    Ok(suite)
}

/// Closed form against the recurrence on a 41-point grid.
pub fn suite_legendre(lmax: u32, tol: f64) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("legendre_closed_vs_recurrence");
    for l in 0..=lmax {
        for m in 0..=l {
            for i in 0..=40 {
                let x = -1.0 + f64::from(i) / 20.0;
                let got = legendre_eval(l, m, x)?;
                let want = legendre_oracle(l, m, x)?;
                suite.record(|| json!({"l": l, "m": m, "x": x}), got, want, rel(got, want, 1.0), tol);
            }
        }
    }
    Ok(suite)
}

/// `∫ P̄_lm P̄_l'm dx = δ_ll'` by Gauss-Legendre quadrature, exact for these degrees.
pub fn suite_orthonormality(lmax: u32, tol: f64) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("legendre_orthonormality");
    let rule = GaussLegendre::new(lmax as usize + 2);
    for m in 0..=lmax {
        for l in m..=lmax {
            for lp in m..=lmax {
                let got = rule.integrate(-1.0, 1.0, |x| {
                    legendre_eval(l, m, x).expect("checked range") * legendre_eval(lp, m, x).expect("checked range")
                });
                let want = if l == lp { 1.0 } else { 0.0 };
                suite.record(|| json!({"l": l, "lp": lp, "m": m}), got, want, (got - want).abs(), tol);
            }
        }
    }
    Ok(suite)
}

/// Exact identities: the `(mu, nu)` factorization, its powers, the `s` range
/// and the generating function of `F_m`.
pub fn suite_identities(lmax: u32, samples: usize, seed: u64) -> SuiteReport {
    let mut suite = SuiteReport::new("exact_identities");
    let power = lmax.min(8);
    suite.check(|| json!({"identity": "factorization", "samples": samples}), verify_factorization(samples, seed));
    suite.check(|| json!({"identity": "power_expansion", "max_power": power}), verify_power_expansion(power));
    suite.check(|| json!({"identity": "s_range", "max_exp": 2 * lmax}), verify_s_range(2 * lmax));
    suite.check(|| json!({"identity": "generating_function", "max_n": 12}), verify_generating_identity(12));
    suite
}

/// `A_n`, `B_n` against adaptive quadrature, plus the series/recurrence band.
pub fn suite_auxiliary() -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("auxiliary_vs_quadrature");
    let aux_err = |got: f64, want: f64| {
        if want.abs() < 1e-10 {
            (got - want).abs()
        } else {
            rel(got, want, 0.0)
        }
    };
    for p in AUX_P {
        let a = aux_a(AUX_MAX_ORDER, p)?;
        for (n, &got) in a.iter().enumerate() {
            let want = aux_a_quadrature(n as u32, p)?;
            suite.record(|| json!({"fn": "A", "n": n, "p": p}), got, want, aux_err(got, want), AUX_TOL);
        }
    }
    for q in AUX_Q {
        let b = aux_b(AUX_MAX_ORDER, q);
        for (n, &got) in b.iter().enumerate() {
            let want = aux_b_quadrature(n as u32, q);
            suite.record(|| json!({"fn": "B", "n": n, "q": q}), got, want, aux_err(got, want), AUX_TOL);
        }
    }
    let n_top = AUX_MAX_ORDER as f64;
    for i in 0..=8 {
        let q = n_top + 8.0 + 0.5 * f64::from(i);
        for q in [q, -q] {
            let rec = aux_b_recurrence(AUX_MAX_ORDER, q);
            let ser = aux_b_series(AUX_MAX_ORDER, q);
            for n in 0..=AUX_MAX_ORDER {
                suite.record(
                    || json!({"fn": "B band", "n": n, "q": q}),
                    rec[n],
                    ser[n],
                    rel(rec[n], ser[n], 0.0),
                    AUX_BAND_TOL,
                );
            }
            let b = aux_b(AUX_MAX_ORDER, q);
            for (n, &got) in b.iter().enumerate() {
                let want = aux_b_quadrature(n as u32, q);
                suite.record(|| json!({"fn": "B", "n": n, "q": q}), got, want, aux_err(got, want), AUX_TOL);
            }
        }
    }
    Ok(suite)
}

/// Every orbital with `n <= 4`, `l <= min(lmax, 3)`, `λ <= l`, at unit exponent.
pub fn sweep_orbitals(lmax: u32) -> Vec<StoParams> {
    let mut out = Vec::new();
    for n in 1..=4u32 {
        for l in 0..n.min(lmax.min(3) + 1) {
            for lambda in 0..=l {
                out.push(StoParams::integer(n, l, lambda, 1.0).expect("valid quantum numbers"));
            }
        }
    }
    out
}

/// The analytic-vs-quadrature sweep: all orbital pairs with equal `λ`, all
/// `ζ_a, ζ_b` in [`SWEEP_ZETAS`], `R = t / ((ζ_a + ζ_b) / 2)` for `t` in
/// [`SWEEP_ZETA_R`], and all three operators.
pub fn sweep_specs(lmax: u32) -> Vec<IntegralSpec> {
    let orbitals = sweep_orbitals(lmax);
    let mut out = Vec::new();
    for za in SWEEP_ZETAS {
        for zb in SWEEP_ZETAS {
            for t in SWEEP_ZETA_R {
                let r = t / (0.5 * (za + zb));
                for a in &orbitals {
                    for b in orbitals.iter().filter(|b| b.lambda == a.lambda) {
                        for kind in IntegralKind::ALL {
                            out.push(
                                IntegralSpec::new(a.with_zeta(za), b.with_zeta(zb), r, kind).expect("valid sweep spec"),
                            );
                        }
                    }
                }
            }
        }
    }
    out
}

fn spec_json(s: &IntegralSpec) -> Value {
    json!({
        "kind": s.kind.label(),
        "na": s.a.n, "la": s.a.l, "za": s.a.zeta,
        "nb": s.b.n, "lb": s.b.l, "zb": s.b.zeta,
        "lambda": s.a.lambda, "r": s.r,
    })
}

/// Analytic integrals against the quadrature oracle, and `|overlap| <= 1`.
pub fn suite_integrals(lmax: u32) -> Result<(SuiteReport, SuiteReport)> {
    let specs = sweep_specs(lmax);
    let oracle = quad_integrals(&specs, &QuadratureConfig::default());
    let mut sweep = SuiteReport::new("integrals_vs_quadrature");
    let mut bound = SuiteReport::new("overlap_bound");
    for (spec, q) in specs.iter().zip(oracle) {
        let got = analytic(spec)?.value;
        let want = match q {
            Ok(r) => r.value,
            Err(_) => f64::NAN,
        };
        sweep.record(|| spec_json(spec), got, want, rel(got, want, 1e-12), INTEGRAL_TOL);
        if spec.kind == IntegralKind::Overlap {
            let excess = (got.abs() - 1.0).max(0.0);
            bound.record(|| spec_json(spec), got, 1.0, excess, 0.0);
        }
    }
    Ok((sweep, bound))
}

/// Hand-derived 1s values.
pub fn suite_spot_values() -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("spot_values");
    let s = StoParams::integer(1, 0, 0, 1.0)?;
    let e2 = (-2.0f64).exp();
    let got = overlap(s, s, 2.0)?.value;
    let want = 13.0 / 3.0 * e2;
    suite.record(|| json!({"integral": "overlap 1s 1s", "zeta": 1.0, "r": 2.0}), got, want, (got - want).abs(), SPOT_TOL);
    let got = nuclear_attraction(s, s, 2.0, Center::A)?.value;
    let want = 3.0 * e2;
    suite.record(|| json!({"integral": "na-a 1s 1s", "zeta": 1.0, "r": 2.0}), got, want, (got - want).abs(), SPOT_TOL);
    Ok(suite)
}

/// Binary64-propagated coefficients against the exact ones.
pub fn suite_coefficients(lmax: u32) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("float_vs_exact_coefficients");
    let top = lmax.min(8);
    for l in 0..=top {
        for lp in 0..=top {
            for lambda in 0..=l.min(lp) {
                let c = check_coefficients(l, lambda, lp)?;
                for _ in 1..c.terms {
                    suite.cases += 1;
                }
                suite.record(
                    || json!({"l": l, "lambda": lambda, "lp": lp, "terms": c.terms}),
                    c.max_rel_err,
                    0.0,
                    c.max_rel_err,
                    COEFF_TOL,
                );
            }
        }
    }
    Ok(suite)
}

/// Runs every suite and the digit-loss report.
pub fn run_validation(opts: &ValidateOptions) -> Result<ValidationReport> {
    if opts.lmax > LMAX_GUARD {
        return domain(format!("lmax = {} exceeds the guard of {LMAX_GUARD}", opts.lmax));
    }
    if opts.tol.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return domain(format!("tol must be positive (tol = {})", opts.tol));
    }
    let start = Instant::now();
    let (sweep, bound) = suite_integrals(opts.lmax)?;
    let suites = vec![
        suite_expansion(opts.lmax, opts.samples, opts.tol, opts.seed)?,
        suite_legendre(opts.lmax, opts.tol)?,
        suite_orthonormality(opts.lmax, opts.tol)?,
        suite_identities(opts.lmax, opts.samples, opts.seed),
        suite_auxiliary()?,
        sweep,
        bound,
        suite_spot_values()?,
        suite_coefficients(opts.lmax)?,
    ];
    let digit_loss = digit_loss_report(opts.digit_loss_lmax, opts.digit_loss_samples, opts.seed)?;
    Ok(ValidationReport {
        suites,
        seed: opts.seed,
        wall_time_ms: start.elapsed().as_millis() as u64,
        digit_loss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_counts_and_flags() {
        let mut s = SuiteReport::new("t");
        s.record(|| json!({}), 1.0, 1.0, 0.0, 1e-10);
        s.record(|| json!({"i": 1}), 2.0, 1.0, 1.0, 1e-10);
        s.record(|| json!({"i": 2}), f64::NAN, 1.0, f64::NAN, 1e-10);
        assert_eq!(s.cases, 3);
        assert_eq!(s.failures.len(), 2);
        assert!(s.max_rel_err.is_infinite());
    }

    #[test]
    fn sweep_size() {
        // 20 orbitals; equal-λ pairs: 10² + 6² + 3² + 1² = 146
        assert_eq!(sweep_orbitals(3).len(), 20);
        assert_eq!(sweep_specs(3).len(), 146 * 16 * 4 * 3);
        assert_eq!(sweep_orbitals(0).len(), 4);
    }

    #[test]
    fn small_suites_pass() {
        assert!(suite_expansion(3, 10, 1e-10, 42).unwrap().passed());
        assert!(suite_legendre(6, 1e-10).unwrap().passed());
        assert!(suite_orthonormality(6, 1e-10).unwrap().passed());
        assert!(suite_identities(3, 10, 42).passed());
        assert!(suite_spot_values().unwrap().passed());
        let c = suite_coefficients(4).unwrap();
        assert!(c.passed());
        assert!(c.cases > 100);
    }

    #[test]
    fn auxiliary_suite_passes() {
        let s = suite_auxiliary().unwrap();
        assert!(s.passed(), "{:?}", &s.failures[..s.failures.len().min(5)]);
    }

    #[test]
    fn guard_rejects_large_lmax() {
        let opts = ValidateOptions {
            lmax: 13,
            ..Default::default()
        };
        assert!(run_validation(&opts).is_err());
    }
}
