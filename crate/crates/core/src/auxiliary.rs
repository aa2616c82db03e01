//! Auxiliary integrals
//!
//! ```text
//! A_n(p) = ∫_1^∞  mu^n e^(-p mu) dmu     (p > 0)
//! B_n(q) = ∫_-1^1 nu^n e^(-q nu) dnu
//! ```
//!
//! to which every lined-up two-center integral in ellipsoidal coordinates reduces.

use crate::dd::DoubleDouble;
use crate::error::{domain, Result};

/// Distance above the highest order beyond which the `B` recurrence is used.
pub const B_RECURRENCE_MARGIN: f64 = 10.0;

/// `A_0(p) ..= A_N(p)` by the upward recurrence `A_n = (e^-p + n A_{n-1}) / p`.
///
/// Every term is positive, so the recurrence is stable.
pub fn aux_a(max_order: usize, p: f64) -> Result<Vec<f64>> {
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("A_n(p) diverges for p <= 0 (p = {p})"));
    }
    let e = (-p).exp();
    let mut out = Vec::with_capacity(max_order + 1);
    let mut prev = e / p;
    out.push(prev);
    for n in 1..=max_order {
        prev = (e + n as f64 * prev) / p;
        out.push(prev);
    }
    Ok(out)
}

/// `B_0(q) ..= B_N(q)`: upward recurrence when `|q| >= N + 10`, Maclaurin
/// series otherwise (including `q = 0`).
pub fn aux_b(max_order: usize, q: f64) -> Vec<f64> {
    if q.abs() >= max_order as f64 + B_RECURRENCE_MARGIN {
        aux_b_recurrence(max_order, q)
    } else {
        aux_b_series(max_order, q)
    }
}

/// Upward recurrence `B_n = ((-1)^n e^q - e^-q + n B_{n-1}) / q` from
/// `B_0 = 2 sinh(q) / q`. Loses accuracy once `n` exceeds `|q|`; `q != 0`.
pub fn aux_b_recurrence(max_order: usize, q: f64) -> Vec<f64> {
    let (ep, em) = (q.exp(), (-q).exp());
    let mut out = Vec::with_capacity(max_order + 1);
    let mut prev = 2.0 * q.sinh() / q;
    out.push(prev);
    for n in 1..=max_order {
        let alt = if n % 2 == 0 { ep } else { -ep };
        prev = (alt - em + n as f64 * prev) / q;
        out.push(prev);
    }
    out
}

/// `B_n(q) = Σ_j (-q)^j / j! * (1 + (-1)^(n+j)) / (n + j + 1)`.
///
/// Only `j ≡ n (mod 2)` contributes, so every surviving term has the same
/// sign and the sum is free of cancellation.
pub fn aux_b_series(max_order: usize, q: f64) -> Vec<f64> {
    (0..=max_order).map(|n| b_series_single(n, q)).collect()
}

fn b_series_single(n: usize, q: f64) -> f64 {
    if q == 0.0 {
        return if n.is_multiple_of(2) { 2.0 / (n as f64 + 1.0) } else { 0.0 };
    }
    // power = (-q)^j / j!
    let mut power = 1.0;
    let mut sum = 0.0;
    let mut j = 0usize;
    loop {
        if (n + j).is_multiple_of(2) {
            let term = power * 2.0 / (n + j + 1) as f64;
            sum += term;
            if j as f64 > q.abs() && term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        j += 1;
        power *= -q / j as f64;
        if j > 10_000 {
            break;
        }
    }
    sum
}

/// `a_0 ..= a_N` in double-double with `A_n(p) = e^-p a_n(p)`.
///
/// `a_n = (1 + n a_{n-1}) / p` is rational in `p`, so no exponential enters.
pub fn aux_a_reduced(max_order: usize, p: f64) -> Result<Vec<DoubleDouble>> {
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("A_n(p) diverges for p <= 0 (p = {p})"));
    }
    let p = DoubleDouble::from_f64(p);
    let mut out = Vec::with_capacity(max_order + 1);
    let mut prev = DoubleDouble::ZERO;
    for n in 0..=max_order {
        prev = (DoubleDouble::ONE + DoubleDouble::from_f64(n as f64) * prev) / p;
        out.push(prev);
    }
    Ok(out)
}

/// `B_n(q)` in double-double, with the exponentials factored out where the
/// recurrence applies.
#[derive(Debug, Clone)]
pub enum ReducedB {
    /// `B_n = e^q plus[n] - e^-q minus[n]`.
    Split {
        plus: Vec<DoubleDouble>,
        minus: Vec<DoubleDouble>,
    },
    /// `B_n` itself, from the series.
    Whole(Vec<DoubleDouble>),
}

/// Same branch choice as [`aux_b`].
pub fn aux_b_reduced(max_order: usize, q: f64) -> ReducedB {
    if q.abs() >= max_order as f64 + B_RECURRENCE_MARGIN {
        let qd = DoubleDouble::from_f64(q);
        let mut plus = Vec::with_capacity(max_order + 1);
        let mut minus = Vec::with_capacity(max_order + 1);
        let (mut bp, mut bm) = (DoubleDouble::ZERO, DoubleDouble::ZERO);
        for n in 0..=max_order {
            let nd = DoubleDouble::from_f64(n as f64);
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            bp = (DoubleDouble::from_f64(sign) + nd * bp) / qd;
            bm = (DoubleDouble::ONE + nd * bm) / qd;
            plus.push(bp);
            minus.push(bm);
        }
        ReducedB::Split { plus, minus }
    } else {
        ReducedB::Whole((0..=max_order).map(|n| b_series_dd(n, q)).collect())
    }
}

fn b_series_dd(n: usize, q: f64) -> DoubleDouble {
    if q == 0.0 {
        return if n.is_multiple_of(2) {
            DoubleDouble::from_f64(2.0) / DoubleDouble::from_f64(n as f64 + 1.0)
        } else {
            DoubleDouble::ZERO
        };
    }
    let mq = DoubleDouble::from_f64(-q);
    let mut power = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ZERO;
    let mut j = 0usize;
    loop {
        if (n + j).is_multiple_of(2) {
            let term = power * DoubleDouble::from_f64(2.0) / DoubleDouble::from_f64((n + j + 1) as f64);
            sum += term;
            if j as f64 > q.abs() && term.to_f64().abs() < 1e-33 * sum.to_f64().abs() {
                break;
            }
        }
        j += 1;
        power = power * mq / DoubleDouble::from_f64(j as f64);
        if j > 10_000 {
            break;
        }
    }
    sum
}

/// Cached `A_n(p)` and `B_n(q)` arrays for one `(p, q)` pair.
#[derive(Debug, Clone)]
pub struct AuxiliaryValues {
    pub p: f64,
    pub q: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl AuxiliaryValues {
    pub fn new(max_order: usize, p: f64, q: f64) -> Result<Self> {
        Ok(Self {
            p,
            q,
            a: aux_a(max_order, p)?,
            b: aux_b(max_order, q),
        })
    }

    pub fn max_order(&self) -> usize {
        self.a.len() - 1
    }
}
