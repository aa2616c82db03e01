//! Sparse bivariate polynomials in `(mu, nu)` with exact integer coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `Σ c_ij mu^i nu^j`, zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, mu_pow: u32, nu_pow: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(c.into(), mu_pow, nu_pow);
        p
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn mu() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn nu() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn add_term(&mut self, c: BigInt, mu_pow: u32, nu_pow: u32) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((mu_pow, nu_pow)).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(mu_pow, nu_pow));
        }
    }

    pub fn coeff(&self, mu_pow: u32, nu_pow: u32) -> BigInt {
        self.coeffs.get(&(mu_pow, nu_pow)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(1);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, mu: &BigRational, nu: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for ((i, j), c) in &self.coeffs {
            acc += BigRational::from_integer(c.clone())
                * num_traits::pow(mu.clone(), *i as usize)
                * num_traits::pow(nu.clone(), *j as usize);
        }
        acc
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for ((i, j), c) in &rhs.coeffs {
            out.add_term(c.clone(), *i, *j);
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        Poly2 {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;

    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for ((i, j), a) in &self.coeffs {
            for ((k, l), b) in &rhs.coeffs {
                out.add_term(a * b, i + k, j + l);
            }
        }
        out
    }
}

impl Mul<&BigInt> for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &BigInt) -> Poly2 {
        let mut out = Poly2::zero();
        for ((i, j), a) in &self.coeffs {
            out.add_term(a * rhs, *i, *j);
        }
        out
    }
}

impl From<BigInt> for Poly2 {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}
