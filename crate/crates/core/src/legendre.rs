//! Normalized associated Legendre functions.
//!
//! The closed form writes
//!
//! ```text
//! P̄_lm(cos θ) = Σ_k C_lm^k (sin θ)^(2k+m) (cos θ)^(l-2k-m),   0 <= k <= floor((l-m)/2)
//! C_lm^k = (-1)^k / 2^(2k+m) * sqrt[(2l+1)/2 * C(l+m, l-k) C(l-k, k+m) C(l-m, 2k) C(2k, k)]
//! ```
//!
//! with exact coefficients. Normalization is `∫_{-1}^{1} P̄_lm(x)^2 dx = 1` and
//! there is no Condon-Shortley phase, so `P̄_11(x) = +sqrt(3/4) sqrt(1 - x^2)`.
//! Only `m >= 0` is supported.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::coeff::SqrtRationalCoeff;
use crate::combinatorics::{binomial, e_floor};
use crate::error::{domain, Result};
use crate::sum::CompensatedSum;

pub(crate) fn check_lm(l: u32, m: u32) -> Result<()> {
    if m > l {
        return domain(format!("m exceeds l (l = {l}, m = {m})"));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return domain(format!("|x| must not exceed 1 (x = {x})"));
    }
    Ok(())
}

/// Exact closed-form coefficient `C_lm^k`.
pub fn legendre_coeff(l: u32, m: u32, k: u32) -> Result<SqrtRationalCoeff> {
    check_lm(l, m)?;
    let kmax = e_floor(l - m);
    if k > kmax {
        return domain(format!("k = {k} outside 0..={kmax} for (l, m) = ({l}, {m})"));
    }
    let (l64, m64, k64) = (i64::from(l), i64::from(m), i64::from(k));
    let product = binomial(l + m, l64 - k64)
        * binomial(l - k, k64 + m64)
        * binomial(l - m, 2 * k64)
        * binomial(2 * k, k64);
    let radicand = BigRational::new(BigInt::from(2 * l + 1) * product, BigInt::from(2));
    let mut rat = BigRational::new(BigInt::one(), BigInt::one() << (2 * k + m) as usize);
    if k % 2 == 1 {
        rat = -rat;
    }
    Ok(SqrtRationalCoeff::new(rat, radicand))
}

/// The full closed form of one `P̄_lm`, with exact and binary64 coefficients.
#[derive(Debug, Clone)]
pub struct LegendreClosedForm {
    l: u32,
    m: u32,
    terms: Vec<(u32, SqrtRationalCoeff)>,
    values: Vec<f64>,
}

impl LegendreClosedForm {
    pub fn new(l: u32, m: u32) -> Result<Self> {
        check_lm(l, m)?;
        let terms = (0..=e_floor(l - m))
            .map(|k| legendre_coeff(l, m, k).map(|c| (k, c)))
            .collect::<Result<Vec<_>>>()?;
        let values = terms.iter().map(|(_, c)| c.to_f64()).collect();
        Ok(Self { l, m, terms, values })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `(k, C_lm^k)` pairs in increasing `k`.
    pub fn terms(&self) -> &[(u32, SqrtRationalCoeff)] {
        &self.terms
    }

    /// Evaluates at `cos θ`, `sin θ` given separately; `sin θ >= 0` is expected.
    pub fn eval_cos_sin(&self, cos: f64, sin: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for ((k, _), c) in self.terms.iter().zip(&self.values) {
            let sin_pow = 2 * k + self.m;
            let cos_pow = self.l - sin_pow;
            acc.add(c * sin.powi(sin_pow as i32) * cos.powi(cos_pow as i32));
        }
        acc.value()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(self.eval_cos_sin(x, (1.0 - x * x).sqrt()))
    }
}

/// `P̄_lm(x)` from the binomial closed form.
pub fn legendre_eval(l: u32, m: u32, x: f64) -> Result<f64> {
    LegendreClosedForm::new(l, m)?.eval(x)
}

/// `P̄_lm(x)` by the three-term recurrence in `l`, independent of the closed form.
pub fn legendre_oracle(l: u32, m: u32, x: f64) -> Result<f64> {
    check_lm(l, m)?;
    check_x(x)?;
    Ok(legendre_recurrence(l, m, x, (1.0 - x * x).sqrt()))
}

/// Recurrence kernel taking `sin θ` explicitly. No argument checks.
pub(crate) fn legendre_recurrence(l: u32, m: u32, x: f64, sin: f64) -> f64 {
    let mut pmm = std::f64::consts::FRAC_1_SQRT_2;
    for i in 1..=m {
        let i = f64::from(i);
        pmm *= ((2.0 * i + 1.0) / (2.0 * i)).sqrt() * sin;
    }
    if l == m {
        return pmm;
    }
    let mf = f64::from(m);
    let mut prev = pmm;
    let mut cur = x * (2.0 * mf + 3.0).sqrt() * pmm;
    for ll in (m + 2)..=l {
        let lf = f64::from(ll);
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
        let next = a * (x * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(
            legendre_coeff(0, 0, 0).unwrap(),
            SqrtRationalCoeff::new(q(1, 1), q(1, 2))
        );
        assert_eq!(
            legendre_coeff(1, 0, 0).unwrap(),
            SqrtRationalCoeff::new(q(1, 1), q(3, 2))
        );
        assert_eq!(
            legendre_coeff(2, 0, 1).unwrap(),
            SqrtRationalCoeff::new(q(-1, 4), q(10, 1))
        );
        assert_eq!(
            legendre_coeff(1, 1, 0).unwrap(),
            SqrtRationalCoeff::new(q(1, 2), q(3, 1))
        );
    }

    #[test]
    fn coefficient_domain_errors() {
        assert!(legendre_coeff(1, 2, 0).is_err());
        assert!(legendre_coeff(4, 0, 3).is_err());
        assert!(legendre_coeff(5, 1, 2).is_ok());
    }

    #[test]
    fn term_count() {
        for l in 0..15 {
            for m in 0..=l {
                let f = LegendreClosedForm::new(l, m).unwrap();
                assert_eq!(f.terms().len() as u32, e_floor(l - m) + 1);
            }
        }
    }

    #[test]
    fn eval_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for x in [-1.0, -0.3, 0.0, 0.8, 1.0] {
            assert_eq!(legendre_eval(0, 0, x).unwrap(), h);
        }
        assert!((legendre_eval(1, 0, 0.5).unwrap() - 0.6123724356957945).abs() < 1e-16);
        for l in 0..10 {
            for m in 0..=l {
                let v = legendre_eval(l, m, 1.0).unwrap();
                if m > 0 {
                    assert_eq!(v, 0.0);
                } else {
                    assert!((v - ((2.0 * f64::from(l) + 1.0) / 2.0).sqrt()).abs() < 1e-13);
                }
            }
        }
        assert!(legendre_eval(2, 0, 1.5).is_err());
        assert!(legendre_eval(2, 3, 0.0).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert!((legendre_oracle(1, 1, 0.0).unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
        assert_eq!(legendre_oracle(0, 0, 0.3).unwrap(), std::f64::consts::FRAC_1_SQRT_2);
        for i in 0..=20 {
            let x = -1.0 + 0.1 * f64::from(i);
            let want = 2.5f64.sqrt() * (3.0 * x * x - 1.0) / 2.0;
            assert!((legendre_oracle(2, 0, x).unwrap() - want).abs() < 1e-14);
        }
        assert!(legendre_oracle(1, 0, -1.01).is_err());
    }

    #[test]
    fn closed_form_matches_recurrence() {
        for l in 0..=12 {
            for m in 0..=l {
                let f = LegendreClosedForm::new(l, m).unwrap();
                for i in 0..=40 {
                    let x = -1.0 + f64::from(i) / 20.0;
                    let got = f.eval(x).unwrap();
                    let want = legendre_oracle(l, m, x).unwrap();
                    assert!(
                        (got - want).abs() <= 1e-10 * want.abs().max(1.0),
                        "l={l} m={m} x={x}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn orthonormal() {
        let gl = GaussLegendre::new(16);
        for m in 0..=10u32 {
            for l in m..=10 {
                for lp in m..=10 {
                    let (fl, flp) = (LegendreClosedForm::new(l, m).unwrap(), LegendreClosedForm::new(lp, m).unwrap());
                    let v = gl.integrate(-1.0, 1.0, |x| fl.eval(x).unwrap() * flp.eval(x).unwrap());
                    let want = if l == lp { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-10, "l={l} l'={lp} m={m}: {v}");
                }
            }
        }
    }

    #[test]
    fn parity() {
        for l in 0..=12 {
            for m in 0..=l {
                let f = LegendreClosedForm::new(l, m).unwrap();
                for x in [0.05, 0.3, 0.61, 0.97] {
                    let sign = if (l - m) % 2 == 0 { 1.0 } else { -1.0 };
                    let a = f.eval(-x).unwrap();
                    let b = sign * f.eval(x).unwrap();
                    assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "l={l} m={m}");
                }
            }
        }
    }
}
