//! Exact binomial coefficients and the generalized binomials `F_m(N, N')`.
//!
//! Everything here is exact integer arithmetic. Binomial rows come from a
//! Pascal-triangle table that is grown on demand and shared process-wide.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Parity floor `E(n/2) = n/2 - (1 - (-1)^n)/4`, i.e. `floor(n/2)`.
pub fn e_floor(n: u32) -> u32 {
    let sign_term: i64 = if n.is_multiple_of(2) { 0 } else { 2 };
    ((2 * i64::from(n) - sign_term) / 4) as u32
}

/// Triangular table of exact binomial coefficients `C(n, k)`, `0 <= k <= n <= max_n`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<BigInt>>,
}

impl Default for BinomialTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BinomialTable {
    pub fn new() -> Self {
        Self {
            rows: vec![vec![BigInt::one()]],
        }
    }

    pub fn with_max_n(max_n: u32) -> Self {
        let mut table = Self::new();
        table.grow_to(max_n);
        table
    }

    pub fn max_n(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    /// Extends the table with Pascal's rule until row `max_n` exists.
    pub fn grow_to(&mut self, max_n: u32) {
        while self.max_n() < max_n {
            let prev = self.rows.last().expect("row 0 always present");
            let mut row = Vec::with_capacity(prev.len() + 1);
            row.push(BigInt::one());
            for pair in prev.windows(2) {
                row.push(&pair[0] + &pair[1]);
            }
            row.push(BigInt::one());
            self.rows.push(row);
        }
    }

    /// `C(n, k)` if the row is present; zero outside `0 <= k <= n`.
    pub fn get(&self, n: u32, k: i64) -> Option<BigInt> {
        let row = self.rows.get(n as usize)?;
        if k < 0 || k > i64::from(n) {
            return Some(BigInt::zero());
        }
        Some(row[k as usize].clone())
    }

    pub fn row(&self, n: u32) -> Option<&[BigInt]> {
        self.rows.get(n as usize).map(Vec::as_slice)
    }
}

fn shared_table() -> &'static RwLock<BinomialTable> {
    static TABLE: OnceLock<RwLock<BinomialTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(BinomialTable::with_max_n(64)))
}

/// Exact binomial `C(n, k)`; zero when `k` lies outside `[0, n]`.
pub fn binomial(n: u32, k: i64) -> BigInt {
    if k < 0 || k > i64::from(n) {
        return BigInt::zero();
    }
    {
        let table = shared_table().read().expect("binomial table lock poisoned");
        if let Some(v) = table.get(n, k) {
            return v;
        }
    }
    let mut table = shared_table().write().expect("binomial table lock poisoned");
    table.grow_to(n);
    table.get(n, k).expect("table grown to requested row")
}

/// Generalized binomial `F_m(N, N')`, the coefficient of `mu^(N+N'-m) nu^m`
/// in `(mu + nu)^N (mu - nu)^N'`:
///
/// `F_m(N, N') = sum_j (-1)^j C(N, m - j) C(N', j)`.
pub fn gen_binomial(m: i64, n: u32, n_prime: u32) -> BigInt {
    if m < 0 || m > i64::from(n) + i64::from(n_prime) {
        return BigInt::zero();
    }
    let lo = (m - i64::from(n)).max(0);
    let hi = m.min(i64::from(n_prime));
    let mut acc = BigInt::zero();
    for j in lo..=hi {
        let term = binomial(n, m - j) * binomial(n_prime, j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// All `F_m(N, N')` for `m = 0..=N+N'`, built by multiplying the
/// coefficient rows of `(1 + x)^N` and `(1 - x)^N'`.
pub fn gen_binomial_row(n: u32, n_prime: u32) -> Vec<BigInt> {
    let len = (n + n_prime + 1) as usize;
    let mut out = vec![BigInt::zero(); len];
    for i in 0..=n {
        let a = binomial(n, i64::from(i));
        for j in 0..=n_prime {
            let b = binomial(n_prime, i64::from(j));
            let term = &a * b;
            let slot = &mut out[(i + j) as usize];
            if j % 2 == 0 {
                *slot += term;
            } else {
                *slot -= term;
            }
        }
    }
    out
}

/// Checks, for all `N, N' <= max_n`, that the direct sums agree with the
/// row convolution and that `Σ_m F_m(N, N') x^m = (1 + x)^N (1 - x)^N'`
/// holds exactly at several rational `x`.
pub fn verify_generating_identity(max_n: u32) -> bool {
    let points = [(2, 1), (-3, 1), (1, 2), (5, 7), (-11, 13)];
    (0..=max_n).all(|n| {
        (0..=max_n).all(|np| {
            let row = gen_binomial_row(n, np);
            let direct_ok = row
                .iter()
                .enumerate()
                .all(|(m, f)| *f == gen_binomial(m as i64, n, np));
            direct_ok
                && points.iter().all(|&(num, den)| {
                    let x = BigRational::new(BigInt::from(num), BigInt::from(den));
                    let one = BigRational::one();
                    let lhs = row
                        .iter()
                        .rev()
                        .fold(BigRational::zero(), |acc, f| acc * &x + BigRational::from_integer(f.clone()));
                    let rhs = num_traits::pow(&one + &x, n as usize) * num_traits::pow(&one - &x, np as usize);
                    lhs == rhs
                })
        })
    })
}
