//! How many digits the expansion loses in plain binary64.
//!
//! Two separate effects are measured. Coefficients propagated through
//! binomials, square roots and products in binary64 are compared with the
//! exact values; these stay within a few ulps. Evaluating the expansion in
//! binary64 is a different matter: the alternating `s`-sums cancel near the
//! edges of the `(mu, nu)` domain, and the report records the worst relative
//! error seen against the double-double evaluator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::e_floor;
use crate::dd::DoubleDouble;
use crate::error::Result;
use crate::product::{build_expansion, check_lambda, eval_expansion_dd, eval_expansion_f64, EllipsoidalPoint};

fn binomial_f64(n: u32, k: i64) -> f64 {
    if k < 0 || k > i64::from(n) {
        return 0.0;
    }
    let k = (k as u32).min(n - k as u32);
    (1..=k).fold(1.0, |acc, i| acc * f64::from(n - k + i) / f64::from(i))
}

/// `C_lm^k` propagated entirely in binary64.
pub fn legendre_coeff_f64(l: u32, m: u32, k: u32) -> f64 {
    let (l64, m64, k64) = (i64::from(l), i64::from(m), i64::from(k));
    let product = binomial_f64(l + m, l64 - k64)
        * binomial_f64(l - k, k64 + m64)
        * binomial_f64(l - m, 2 * k64)
        * binomial_f64(2 * k, k64);
    let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
    sign * (f64::from(2 * l + 1) / 2.0 * product).sqrt() / 2f64.powi((2 * k + m) as i32)
}

fn gen_binomial_row_f64(n: u32, n_prime: u32) -> Vec<f64> {
    (0..=n + n_prime)
        .map(|m| {
            (0..=m)
                .map(|j| {
                    let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
                    sign * binomial_f64(n, i64::from(m - j)) * binomial_f64(n_prime, i64::from(j))
                })
                .sum()
        })
        .collect()
}

/// Expansion coefficients for `(l, λ, l')` in binary64, in table order.
pub fn float_coefficients(l: u32, lambda: u32, lp: u32) -> Result<Vec<f64>> {
    check_lambda(l, lambda, lp)?;
    let mut out = Vec::new();
    for k in 0..=e_floor(l - lambda) {
        let c_a = legendre_coeff_f64(l, lambda, k);
        for kp in 0..=e_floor(lp - lambda) {
            let pair = c_a * legendre_coeff_f64(lp, lambda, kp);
            let big_k = k + kp + lambda;
            for u in 0..=big_k {
                let sign = if u % 2 == 1 { -1.0 } else { 1.0 };
                let outer = pair * sign * binomial_f64(big_k, i64::from(u));
                let row = gen_binomial_row_f64(l - 2 * k - lambda + 2 * u, lp - 2 * kp - lambda);
                out.extend(row.into_iter().map(|f| outer * f));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientCheck {
    pub l: u32,
    pub lambda: u32,
    pub lp: u32,
    pub terms: usize,
    pub max_rel_err: f64,
}

/// Compares [`float_coefficients`] with the exact table.
pub fn check_coefficients(l: u32, lambda: u32, lp: u32) -> Result<CoefficientCheck> {
    let table = build_expansion(l, lambda, lp)?;
    let floats = float_coefficients(l, lambda, lp)?;
    assert_eq!(floats.len(), table.len(), "float and exact enumerations differ");
    let max_rel_err = floats
        .iter()
        .zip(table.coeffs_dd())
        .map(|(&f, exact)| coefficient_error(f, exact.to_f64(), (DoubleDouble::from_f64(f) - *exact).to_f64()))
        .fold(0.0, f64::max);
    Ok(CoefficientCheck {
        l,
        lambda,
        lp,
        terms: table.len(),
        max_rel_err,
    })
}

fn coefficient_error(float: f64, exact: f64, diff: f64) -> f64 {
    if exact == 0.0 {
        if float == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (diff / exact).abs()
    }
}

/// Digits lost relative to binary64 for a relative error `err`.
pub fn digits_lost(err: f64) -> f64 {
    if err <= f64::EPSILON {
        0.0
    } else {
        (err / f64::EPSILON).log10()
    }
}

/// Worst case over all `(λ, l')` with `l' <= lmax` for one `l`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitLossEntry {
    pub l: u32,
    pub tables: usize,
    pub terms: usize,
    pub max_coeff_rel_err: f64,
    pub coeff_digits_lost: f64,
    /// Worst `|binary64 - double-double| / max(1, |value|)` over the sample points.
    pub max_eval_rel_err: f64,
    pub eval_digits_lost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitLossReport {
    pub lmax: u32,
    pub samples_per_table: usize,
    pub seed: u64,
    pub entries: Vec<DigitLossEntry>,
}

/// Sample points in `mu ∈ [1.01, 10]`, `|nu| <= 0.99`.
pub fn sample_points(samples: usize, rng: &mut ChaCha8Rng) -> Vec<EllipsoidalPoint> {
    (0..samples)
        .map(|_| {
            let mu = rng.gen_range(1.01..=10.0);
            let nu = rng.gen_range(-0.99..=0.99);
            EllipsoidalPoint::new(mu, nu).expect("sample inside the domain")
        })
        .collect()
}

/// Builds the report for every `l, l' <= lmax`. Each table is built, measured
/// and dropped, so memory stays bounded.
pub fn digit_loss_report(lmax: u32, samples: usize, seed: u64) -> Result<DigitLossReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = sample_points(samples, &mut rng);
    let entries = (0..=lmax)
        .into_par_iter()
        .map(|l| {
            let mut entry = DigitLossEntry {
                l,
                tables: 0,
                terms: 0,
                max_coeff_rel_err: 0.0,
                coeff_digits_lost: 0.0,
                max_eval_rel_err: 0.0,
                eval_digits_lost: 0.0,
            };
            for lp in 0..=lmax {
                for lambda in 0..=l.min(lp) {
                    let table = build_expansion(l, lambda, lp)?;
                    let floats = float_coefficients(l, lambda, lp)?;
                    for (&f, exact) in floats.iter().zip(table.coeffs_dd()) {
                        let diff = (DoubleDouble::from_f64(f) - *exact).to_f64();
                        entry.max_coeff_rel_err = entry.max_coeff_rel_err.max(coefficient_error(f, exact.to_f64(), diff));
                    }
                    for pt in &points {
                        let accurate = eval_expansion_dd(&table, pt);
                        let plain = eval_expansion_f64(&table, pt);
                        let err = (plain - accurate.to_f64()).abs() / accurate.to_f64().abs().max(1.0);
                        entry.max_eval_rel_err = entry.max_eval_rel_err.max(err);
                    }
                    entry.tables += 1;
                    entry.terms += table.len();
                }
            }
            entry.coeff_digits_lost = digits_lost(entry.max_coeff_rel_err);
            entry.eval_digits_lost = digits_lost(entry.max_eval_rel_err);
            Ok(entry)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DigitLossReport {
        lmax,
        samples_per_table: samples,
        seed,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::legendre_coeff;

    #[test]
    fn float_legendre_coefficients_track_exact() {
        for l in 0..=15 {
            for m in 0..=l {
                for k in 0..=e_floor(l - m) {
                    let exact = legendre_coeff(l, m, k).unwrap().to_f64();
                    let f = legendre_coeff_f64(l, m, k);
                    assert!((f - exact).abs() <= 1e-14 * exact.abs(), "({l},{m},{k})");
                }
            }
        }
    }

    #[test]
    fn float_rows_are_exact_for_small_arguments() {
        let row = gen_binomial_row_f64(3, 2);
        assert_eq!(row, vec![1.0, 1.0, -2.0, -2.0, 1.0, 1.0]);
    }

    #[test]
    fn coefficients_keep_their_digits() {
        for (l, lambda, lp) in [(0, 0, 0), (3, 1, 5), (8, 0, 8), (8, 8, 8), (7, 2, 2)] {
            let c = check_coefficients(l, lambda, lp).unwrap();
            assert!(c.max_rel_err < 1e-13, "{c:?}");
            assert_eq!(c.terms, crate::product::expected_term_count(l, lambda, lp).unwrap());
        }
        assert!(check_coefficients(2, 3, 4).is_err());
    }

    #[test]
    fn small_report_is_deterministic() {
        let a = digit_loss_report(3, 4, 7).unwrap();
        let b = digit_loss_report(3, 4, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entries.len(), 4);
        assert_eq!(a.entries[0].tables, 4);
        assert!(a.entries.iter().all(|e| e.coeff_digits_lost < 2.0));
    }

    #[test]
    fn digits_lost_scale() {
        assert_eq!(digits_lost(0.0), 0.0);
        assert!((digits_lost(f64::EPSILON * 1e3) - 3.0).abs() < 1e-12);
    }
}
