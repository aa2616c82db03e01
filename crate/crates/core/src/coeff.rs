//! Exact numbers of the form `rat * sqrt(radicand)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dd::DoubleDouble;

/// Exact value `rat * sqrt(radicand)` with a signed rational `rat` and a
/// nonnegative radicand.
///
/// The stored form is canonical up to square-free reduction: the radicand is
/// an integer (its denominator is folded into `rat`), a perfect-square radicand
/// is absorbed into `rat`, and zero is stored as `0 * sqrt(1)`. Equality
/// compares the squared magnitudes and the signs, so two values that differ
/// only by an unextracted square factor still compare equal.
#[derive(Debug, Clone)]
pub struct SqrtRationalCoeff {
    rat: BigRational,
    radicand: BigRational,
}

impl SqrtRationalCoeff {
    /// Builds `rat * sqrt(radicand)`. Panics if `radicand` is negative.
    pub fn new(rat: BigRational, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        Self { rat, radicand }.normalized()
    }

    pub fn from_rational(rat: BigRational) -> Self {
        Self::new(rat, BigRational::one())
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn rat(&self) -> &BigRational {
        &self.rat
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.rat.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// `rat^2 * radicand`, the exact square of the value.
    pub fn square(&self) -> BigRational {
        &self.rat * &self.rat * &self.radicand
    }

    /// Nearest binary64 value; the exact parts are rounded once each.
    pub fn to_f64(&self) -> f64 {
        let r = ratio_to_f64(&self.rat);
        if self.radicand.is_one() {
            r
        } else {
            r * ratio_to_f64(&self.radicand).sqrt()
        }
    }

    /// Double-double approximation, accurate to roughly 1e-30 relative.
    pub fn to_double_double(&self) -> DoubleDouble {
        let r = DoubleDouble::from_rational(&self.rat);
        if self.radicand.is_one() {
            r
        } else {
            r * DoubleDouble::from_rational(&self.radicand).sqrt()
        }
    }

    fn normalized(mut self) -> Self {
        if self.rat.is_zero() || self.radicand.is_zero() {
            return Self {
                rat: BigRational::zero(),
                radicand: BigRational::one(),
            };
        }
        // sqrt(a/b) = sqrt(a*b) / b
        let den = self.radicand.denom().clone();
        if !den.is_one() {
            let num = self.radicand.numer() * &den;
            self.radicand = BigRational::from_integer(num);
            self.rat /= BigRational::from_integer(den);
        }
        let root = self.radicand.numer().sqrt();
        if &root * &root == *self.radicand.numer() {
            self.rat *= BigRational::from_integer(root);
            self.radicand = BigRational::one();
        }
        self
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fallback for magnitudes outside the f64 range of either part.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl PartialEq for SqrtRationalCoeff {
    fn eq(&self, other: &Self) -> bool {
        self.signum() == other.signum() && self.square() == other.square()
    }
}

impl Eq for SqrtRationalCoeff {}

impl PartialOrd for SqrtRationalCoeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtRationalCoeff {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.signum().cmp(&other.signum()) {
            Ordering::Equal => {
                let mag = self.square().cmp(&other.square());
                if self.signum() < 0 {
                    mag.reverse()
                } else {
                    mag
                }
            }
            ord => ord,
        }
    }
}

impl Mul for &SqrtRationalCoeff {
    type Output = SqrtRationalCoeff;

    fn mul(self, rhs: &SqrtRationalCoeff) -> SqrtRationalCoeff {
        SqrtRationalCoeff::new(&self.rat * &rhs.rat, &self.radicand * &rhs.radicand)
    }
}

impl Mul for SqrtRationalCoeff {
    type Output = SqrtRationalCoeff;

    fn mul(self, rhs: SqrtRationalCoeff) -> SqrtRationalCoeff {
        &self * &rhs
    }
}

impl Mul<&BigInt> for &SqrtRationalCoeff {
    type Output = SqrtRationalCoeff;

    fn mul(self, rhs: &BigInt) -> SqrtRationalCoeff {
        SqrtRationalCoeff::new(&self.rat * BigRational::from_integer(rhs.clone()), self.radicand.clone())
    }
}

impl Neg for SqrtRationalCoeff {
    type Output = SqrtRationalCoeff;

    fn neg(self) -> SqrtRationalCoeff {
        SqrtRationalCoeff {
            rat: -self.rat,
            radicand: self.radicand,
        }
    }
}

impl fmt::Display for SqrtRationalCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.rat)
        } else {
            write!(f, "{}*sqrt({})", self.rat, self.radicand)
        }
    }
}
