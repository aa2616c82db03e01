//! Two-center products of normalized associated Legendre functions in
//! prolate ellipsoidal coordinates.
//!
//! With centers `a` and `b` a distance `R` apart,
//!
//! ```text
//! r_a = R/2 (mu + nu),  cos θ_a = (1 + mu nu)/(mu + nu),  sin θ_a = sqrt((mu²-1)(1-nu²))/(mu + nu)
//! r_b = R/2 (mu - nu),  cos θ_b = (1 - mu nu)/(mu - nu),  sin θ_b = sqrt((mu²-1)(1-nu²))/(mu - nu)
//! ```
//!
//! and the product `P̄_lλ(cos θ_a) P̄_l'λ(cos θ_b)` expands as
//!
//! ```text
//! Σ_{k,k',u,s} a_us^kk' (mu nu)^s / ((mu + nu)^(l - 2(k+k'+λ) + 2u) (mu - nu)^l')
//! a_us^kk' = C_lλ^k C_l'λ^k' (-1)^u C(k+k'+λ, u) F_s(l - 2k - λ + 2u, l' - 2k' - λ)
//! ```
//!
//! over `0 <= k <= ⌊(l-λ)/2⌋`, `0 <= k' <= ⌊(l'-λ)/2⌋`, `0 <= u <= k+k'+λ`,
//! `0 <= s <= l + l' - 2(k+k'+λ) + 2u`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::SqrtRationalCoeff;
use crate::combinatorics::{binomial, e_floor, gen_binomial_row};
use crate::dd::DoubleDouble;
use crate::error::{domain, Result};
use crate::legendre::{legendre_coeff, LegendreClosedForm};
use crate::poly::Poly2;
use crate::sum::CompensatedSum;

/// A point `(mu, nu)` strictly inside the ellipsoidal domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidalPoint {
    mu: f64,
    nu: f64,
}

impl EllipsoidalPoint {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(mu > 1.0 && mu.is_finite()) {
            return domain(format!("mu must exceed 1 (mu = {mu})"));
        }
        if !(nu > -1.0 && nu < 1.0) {
            return domain(format!("nu must lie in (-1, 1) (nu = {nu})"));
        }
        Ok(Self { mu, nu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `(cos θ_a, sin θ_a, cos θ_b, sin θ_b)` from the coordinate maps.
    pub fn polar_angles(&self) -> (f64, f64, f64, f64) {
        let (mu, nu) = (self.mu, self.nu);
        let root = ((mu - 1.0) * (mu + 1.0) * (1.0 - nu) * (1.0 + nu)).sqrt();
        let plus = mu + nu;
        let minus = mu - nu;
        (
            (1.0 + mu * nu) / plus,
            root / plus,
            (1.0 - mu * nu) / minus,
            root / minus,
        )
    }
}

/// One term of the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub k: u32,
    pub kp: u32,
    pub u: u32,
    pub s: u32,
    pub coeff: SqrtRationalCoeff,
    pub coeff_f64: f64,
    /// Exponent of `(mu + nu)` in the denominator; negative means a net
    /// positive power.
    pub pow_plus: i32,
    /// Exponent of `(mu - nu)` in the denominator, always `l'`.
    pub pow_minus: u32,
}

/// All terms of the expansion for one `(l, λ, l')`, ordered
/// lexicographically in `(k, k', u, s)`.
#[derive(Debug, Clone)]
pub struct ProductExpansionTable {
    l: u32,
    lambda: u32,
    lp: u32,
    terms: Vec<ProductTerm>,
    coeffs_dd: Vec<DoubleDouble>,
}

impl ProductExpansionTable {
    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn lp(&self) -> u32 {
        self.lp
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    /// Double-double images of the exact coefficients, parallel to `terms()`.
    pub fn coeffs_dd(&self) -> &[DoubleDouble] {
        &self.coeffs_dd
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, pt: &EllipsoidalPoint) -> f64 {
        eval_expansion(self, pt)
    }
}

pub(crate) fn check_lambda(l: u32, lambda: u32, lp: u32) -> Result<()> {
    if lambda > l.min(lp) {
        return domain(format!("lambda = {lambda} exceeds min(l, l') = {}", l.min(lp)));
    }
    Ok(())
}

/// Number of terms the index ranges produce, counted without building them.
pub fn expected_term_count(l: u32, lambda: u32, lp: u32) -> Result<usize> {
    check_lambda(l, lambda, lp)?;
    let mut n = 0usize;
    for k in 0..=e_floor(l - lambda) {
        for kp in 0..=e_floor(lp - lambda) {
            let big_k = k + kp + lambda;
            for u in 0..=big_k {
                n += (l + lp + 2 * u - 2 * big_k + 1) as usize;
            }
        }
    }
    Ok(n)
}

/// Enumerates the expansion with exact coefficients.
pub fn build_expansion(l: u32, lambda: u32, lp: u32) -> Result<ProductExpansionTable> {
    check_lambda(l, lambda, lp)?;
    let ck: Vec<SqrtRationalCoeff> = (0..=e_floor(l - lambda))
        .map(|k| legendre_coeff(l, lambda, k))
        .collect::<Result<_>>()?;
    let ckp: Vec<SqrtRationalCoeff> = (0..=e_floor(lp - lambda))
        .map(|k| legendre_coeff(lp, lambda, k))
        .collect::<Result<_>>()?;

    let mut terms = Vec::new();
    for (k, c_a) in ck.iter().enumerate() {
        let k = k as u32;
        for (kp, c_b) in ckp.iter().enumerate() {
            let kp = kp as u32;
            let pair = c_a * c_b;
            let big_k = k + kp + lambda;
            for u in 0..=big_k {
                let mut binom = binomial(big_k, i64::from(u));
                if u % 2 == 1 {
                    binom = -binom;
                }
                let outer = &pair * &binom;
                let plus_exp = l - 2 * k - lambda + 2 * u;
                let minus_exp = lp - 2 * kp - lambda;
                let f_row = gen_binomial_row(plus_exp, minus_exp);
                debug_assert_eq!(f_row.len() as u32, l + lp - 2 * big_k + 2 * u + 1);
                for (s, f) in f_row.iter().enumerate() {
                    let coeff = &outer * f;
                    let coeff_f64 = coeff.to_f64();
                    terms.push(ProductTerm {
                        k,
                        kp,
                        u,
                        s: s as u32,
                        coeff,
                        coeff_f64,
                        pow_plus: l as i32 - 2 * big_k as i32 + 2 * u as i32,
                        pow_minus: lp,
                    });
                }
            }
        }
    }
    let coeffs_dd = terms.iter().map(|t| t.coeff.to_double_double()).collect();
    Ok(ProductExpansionTable {
        l,
        lambda,
        lp,
        terms,
        coeffs_dd,
    })
}

/// Shared, lazily built expansion tables keyed by `(l, λ, l')`.
pub fn cached_expansion(l: u32, lambda: u32, lp: u32) -> Result<Arc<ProductExpansionTable>> {
    type Cache = RwLock<HashMap<(u32, u32, u32), Arc<ProductExpansionTable>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().expect("expansion cache poisoned").get(&(l, lambda, lp)) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(build_expansion(l, lambda, lp)?);
    let mut guard = cache.write().expect("expansion cache poisoned");
    Ok(Arc::clone(guard.entry((l, lambda, lp)).or_insert(table)))
}

/// Sums the expansion at `pt`.
///
/// The `s`-sums rebuild `(1 ± mu nu)^n` from alternating binomials, which
/// cancels badly where `mu nu ≈ 1` or `mu ≈ |nu|`. Terms are therefore formed
/// and summed in double-double arithmetic from the exact coefficients; the
/// result is rounded to binary64 once.
pub fn eval_expansion(table: &ProductExpansionTable, pt: &EllipsoidalPoint) -> f64 {
    eval_expansion_dd(table, pt).to_f64()
}

pub(crate) fn eval_expansion_dd(table: &ProductExpansionTable, pt: &EllipsoidalPoint) -> DoubleDouble {
    let (mu, nu) = (pt.mu, pt.nu);
    let x = DoubleDouble::from_product(mu, nu);
    let plus = DoubleDouble::from_sum(mu, nu);
    let minus = DoubleDouble::from_sum(mu, -nu);
    let inv_plus = plus.recip();

    let max_s = table.terms.iter().map(|t| t.s).max().unwrap_or(0) as usize;
    let x_pows = power_table(x, max_s);
    let min_p = table.terms.iter().map(|t| t.pow_plus).min().unwrap_or(0);
    let max_p = table.terms.iter().map(|t| t.pow_plus).max().unwrap_or(0);
    // inverse powers of (mu + nu) for pow_plus >= 0, direct powers otherwise
    let inv_pows = power_table(inv_plus, max_p.max(0) as usize);
    let dir_pows = power_table(plus, (-min_p).max(0) as usize);

    let mut acc = DoubleDouble::ZERO;
    for (t, c) in table.terms.iter().zip(&table.coeffs_dd) {
        let p = if t.pow_plus >= 0 {
            inv_pows[t.pow_plus as usize]
        } else {
            dir_pows[(-t.pow_plus) as usize]
        };
        acc += *c * x_pows[t.s as usize] * p;
    }
    acc / minus.powi(table.lp as i32)
}

fn power_table(base: DoubleDouble, max: usize) -> Vec<DoubleDouble> {
    let mut out = Vec::with_capacity(max + 1);
    let mut cur = DoubleDouble::ONE;
    for _ in 0..=max {
        out.push(cur);
        cur *= base;
    }
    out
}

/// Plain binary64 evaluation of the same sum; kept for the stability report.
pub fn eval_expansion_f64(table: &ProductExpansionTable, pt: &EllipsoidalPoint) -> f64 {
    let (mu, nu) = (pt.mu, pt.nu);
    let x = mu * nu;
    let inv_plus = 1.0 / (mu + nu);
    let minus_factor = (mu - nu).powi(-(table.lp as i32));
    let mut acc = CompensatedSum::new();
    for t in table.terms.iter().filter(|t| t.coeff_f64 != 0.0) {
        acc.add(t.coeff_f64 * x.powi(t.s as i32) * inv_plus.powi(t.pow_plus));
    }
    acc.value() * minus_factor
}

/// The product evaluated directly from the two closed-form Legendre functions.
pub fn eval_direct(l: u32, lambda: u32, lp: u32, pt: &EllipsoidalPoint) -> Result<f64> {
    check_lambda(l, lambda, lp)?;
    let (cos_a, sin_a, cos_b, sin_b) = pt.polar_angles();
    let pa = LegendreClosedForm::new(l, lambda)?.eval_cos_sin(cos_a, sin_a);
    let pb = LegendreClosedForm::new(lp, lambda)?.eval_cos_sin(cos_b, sin_b);
    Ok(pa * pb)
}

/// Checks `(mu² - 1)(1 - nu²) = (mu + nu)² - (1 + mu nu)²` as a polynomial
/// identity and at `samples` seeded random rational points.
pub fn verify_factorization(samples: usize, seed: u64) -> bool {
    let (lhs, rhs) = factorization_sides();
    if lhs != rhs {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let mu = random_rational(&mut rng);
        let nu = random_rational(&mut rng);
        factorization_holds_at(&mu, &nu)
    })
}

fn factorization_sides() -> (Poly2, Poly2) {
    let one = Poly2::one();
    let mu = Poly2::mu();
    let nu = Poly2::nu();
    let lhs = &(&(&mu * &mu) - &one) * &(&one - &(&nu * &nu));
    let plus = &mu + &nu;
    let one_plus = &one + &(&mu * &nu);
    let rhs = &(&plus * &plus) - &(&one_plus * &one_plus);
    (lhs, rhs)
}

/// Both sides of the identity evaluated exactly at `(mu, nu)`.
pub fn factorization_holds_at(mu: &BigRational, nu: &BigRational) -> bool {
    let one = BigRational::one();
    let lhs = (mu * mu - &one) * (&one - nu * nu);
    let plus = mu + nu;
    let one_plus = &one + mu * nu;
    let rhs = &plus * &plus - &one_plus * &one_plus;
    lhs == rhs
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num: i64 = rng.gen_range(-1000..=1000);
    let den: i64 = rng.gen_range(1..=997);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Checks, for every exponent `e <= max_power`, that
/// `[(mu + nu)² - (1 + mu nu)²]^e = Σ_u (-1)^u C(e, u) (mu + nu)^(2e - 2u) (1 + mu nu)^(2u)`
/// coefficient by coefficient, and that both equal `[(mu² - 1)(1 - nu²)]^e`.
pub fn verify_power_expansion(max_power: u32) -> bool {
    let (direct_base, difference_base) = factorization_sides();
    let plus = &Poly2::mu() + &Poly2::nu();
    let one_plus = &Poly2::one() + &(&Poly2::mu() * &Poly2::nu());
    (0..=max_power).all(|e| {
        let direct = direct_base.pow(e);
        let mut summed = Poly2::zero();
        for u in 0..=e {
            let mut c = binomial(e, i64::from(u));
            if u % 2 == 1 {
                c = -c;
            }
            let term = &(&plus.pow(2 * e - 2 * u) * &one_plus.pow(2 * u)) * &c;
            summed = &summed + &term;
        }
        summed == direct && difference_base.pow(e) == direct
    })
}

/// Checks that `(1 + x)^A (1 - x)^B` has exactly `A + B + 1` coefficient
/// slots, the top one nonzero, for every `A, B <= max_exp`.
pub fn verify_s_range(max_exp: u32) -> bool {
    (0..=max_exp).all(|a| {
        (0..=max_exp).all(|b| {
            let row = gen_binomial_row(a, b);
            let top = row.last().cloned().unwrap_or_default();
            let want_top = if b % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            row.len() as u32 == a + b + 1 && top == want_top && !row[0].is_zero()
        })
    })
}
