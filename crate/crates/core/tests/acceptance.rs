//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use sto_twocenter::combinatorics::verify_generating_identity;
use sto_twocenter::integrals::StoParams;
use sto_twocenter::oracle::{norm_integral, QuadratureConfig};
use sto_twocenter::product::{verify_factorization, verify_power_expansion, verify_s_range};
use sto_twocenter::stability::digit_loss_report;
use sto_twocenter::validate::{
    suite_auxiliary, suite_coefficients, suite_expansion, suite_integrals, suite_legendre, suite_orthonormality,
    suite_spot_values, SuiteReport, ValidationReport,
};

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_suites(suites: &[SuiteReport]) -> Outcome {
    let pass = suites.iter().all(SuiteReport::passed);
    let detail = suites
        .iter()
        .map(|s| format!("{}: {} cases, max err {:.3e}, {} failures", s.name, s.cases, s.max_rel_err, s.failures.len()))
        .collect::<Vec<_>>()
        .join("; ");
    if !pass {
        for s in suites {
            for f in s.failures.iter().take(5) {
                eprintln!("    {} failure: {} got {:e} want {:e} tol {:e}", s.name, f.inputs, f.got, f.want, f.tol);
            }
        }
    }
    Outcome { pass, detail }
}

fn criterion_1() -> Outcome {
    from_suites(&[suite_expansion(8, 100, 1e-10, SEED).expect("expansion suite")])
}

fn criterion_2() -> Outcome {
    from_suites(&[
        suite_legendre(12, 1e-10).expect("legendre suite"),
        suite_orthonormality(10, 1e-10).expect("orthonormality suite"),
    ])
}

fn criterion_3() -> Outcome {
    let checks = [
        ("factorization identity, 200 rational points", verify_factorization(200, SEED)),
        ("power expansion, exponents <= 8", verify_power_expansion(8)),
        ("s range, exponents <= 16", verify_s_range(16)),
        ("F generating identity, N, N' <= 12", verify_generating_identity(12)),
    ];
    Outcome {
        pass: checks.iter().all(|c| c.1),
        detail: checks
            .iter()
            .map(|(name, ok)| format!("{name}: {}", if *ok { "exact" } else { "MISMATCH" }))
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn criterion_4() -> Outcome {
    let (sweep, bound) = suite_integrals(3).expect("integral sweep");
    from_suites(&[sweep, bound])
}

fn criterion_5() -> Outcome {
    from_suites(&[suite_spot_values().expect("spot values")])
}

fn criterion_6() -> Outcome {
    let coeffs = suite_coefficients(8).expect("coefficient suite");
    let digit_loss = digit_loss_report(15, 4, SEED).expect("digit-loss report");
    let report = ValidationReport {
        suites: vec![coeffs.clone()],
        seed: SEED,
        wall_time_ms: 0,
        digit_loss,
    };
    let json: serde_json::Value = serde_json::to_value(&report).expect("serializable report");
    let entries = json["digit_loss"]["entries"].as_array().map_or(0, Vec::len);
    let worst = report
        .digit_loss
        .entries
        .iter()
        .map(|e| e.coeff_digits_lost)
        .fold(0.0, f64::max);
    let mut out = from_suites(&[coeffs]);
    out.pass &= entries == 16;
    out.detail += &format!("; digit-loss report attached for l = 0..=15 ({entries} rows, worst coefficient loss {worst:.2} digits)");
    out
}

fn criterion_7() -> Outcome {
    from_suites(&[suite_auxiliary().expect("auxiliary suite")])
}

fn criterion_8() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in [1.0, 1.5, 2.0, 2.5, 3.0] {
        for zeta in [0.5, 1.0, 4.0] {
            let sto = StoParams::new(n, 0, 0, zeta).expect("valid orbital");
            let err = match norm_integral(&sto, &cfg) {
                Ok(r) => (r.value - 1.0).abs(),
                Err(_) => f64::INFINITY,
            };
            worst = worst.max(err);
            cases += 1;
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("{cases} norm integrals, max |norm - 1| = {worst:.3e} (tol 1e-10)"),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("expansion equals direct product (l, l' <= 8, 100 points, 1e-10)", criterion_1),
        ("closed-form Legendre vs recurrence and orthonormality (1e-10)", criterion_2),
        ("exact derivation identities", criterion_3),
        ("analytic integrals vs quadrature over the full sweep (1e-8)", criterion_4),
        ("1s-1s overlap and attraction spot values (1e-9)", criterion_5),
        ("binary64 coefficients vs exact (1e-6) and digit-loss report", criterion_6),
        ("auxiliary functions vs 1-D quadrature (1e-12)", criterion_7),
        ("oracle norm integrals equal 1 (1e-10)", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed: Duration = start.elapsed();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {name} [{:.2} s] {}", i + 1, elapsed.as_secs_f64(), outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
