//! Lined-up two-center overlap and nuclear-attraction integrals over
//! Slater-type orbitals.
//!
//! An orbital is `χ = N_n(ζ) r^(n-1) e^(-ζ r) P̄_lλ(cos θ) e^(iλφ)/sqrt(2π)`.
//! Both local frames share the molecular axis and the polar angles follow the
//! ellipsoidal maps in [`crate::product`], so the `z` axis of center `a` points
//! toward `b` and that of `b` toward `a`. The `φ` integral then gives
//! `δ_{λ_a λ_b}` and the rest reduces to
//!
//! ```text
//! ∫∫ (mu+nu)^Na (mu-nu)^Nb (mu nu)^s e^(-p mu - q nu) dmu dnu
//!   = Σ_m F_m(Na, Nb) A_{Na+Nb-m+s}(p) B_{m+s}(q)
//! ```
//!
//! with `p = R(ζ_a + ζ_b)/2` and `q = R(ζ_a - ζ_b)/2`.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::auxiliary::{aux_a_reduced, aux_b_reduced, ReducedB};
use crate::combinatorics::gen_binomial_row;
use crate::dd::DoubleDouble;
use crate::error::{domain, Error, Result};
use crate::product::cached_expansion;

/// Quantum numbers and exponent of one STO.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoParams {
    /// Principal quantum number; integer on the analytic path, any real
    /// `n > 1/2` on the quadrature path.
    pub n: f64,
    pub l: u32,
    pub lambda: u32,
    pub zeta: f64,
}

impl StoParams {
    pub fn new(n: f64, l: u32, lambda: u32, zeta: f64) -> Result<Self> {
        if !(n > 0.5 && n.is_finite()) {
            return domain(format!("n must exceed 1/2 (n = {n})"));
        }
        if !(zeta > 0.0 && zeta.is_finite()) {
            return domain(format!("zeta must be positive (zeta = {zeta})"));
        }
        if lambda > l {
            return domain(format!("lambda exceeds l (l = {l}, lambda = {lambda})"));
        }
        if n.fract() == 0.0 && f64::from(l) > n - 1.0 {
            return domain(format!("l must not exceed n - 1 (n = {n}, l = {l})"));
        }
        Ok(Self { n, l, lambda, zeta })
    }

    /// Integer-path constructor.
    pub fn integer(n: u32, l: u32, lambda: u32, zeta: f64) -> Result<Self> {
        Self::new(f64::from(n), l, lambda, zeta)
    }

    /// `n` as an integer when it is one.
    pub fn integer_n(&self) -> Option<u32> {
        (self.n.fract() == 0.0 && self.n >= 1.0 && self.n <= f64::from(u32::MAX)).then_some(self.n as u32)
    }

    pub fn with_zeta(self, zeta: f64) -> Self {
        Self { zeta, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegralKind {
    Overlap,
    /// `<χ_a | 1/r_a | χ_b>`
    NuclearAttractionA,
    /// `<χ_a | 1/r_b | χ_b>`
    NuclearAttractionB,
}

impl IntegralKind {
    pub const ALL: [IntegralKind; 3] = [Self::Overlap, Self::NuclearAttractionA, Self::NuclearAttractionB];

    pub fn label(self) -> &'static str {
        match self {
            Self::Overlap => "overlap",
            Self::NuclearAttractionA => "na-a",
            Self::NuclearAttractionB => "na-b",
        }
    }
}

impl fmt::Display for IntegralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Operator center for nuclear attraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Center {
    A,
    B,
}

/// Orbital pair, internuclear distance and operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralSpec {
    pub a: StoParams,
    pub b: StoParams,
    pub r: f64,
    pub kind: IntegralKind,
}

impl IntegralSpec {
    pub fn new(a: StoParams, b: StoParams, r: f64, kind: IntegralKind) -> Result<Self> {
        if a.lambda != b.lambda {
            return domain(format!(
                "lined-up integrals need equal lambda (got {} and {})",
                a.lambda, b.lambda
            ));
        }
        if !(r > 0.0 && r.is_finite()) {
            return domain(format!("R must be positive (R = {r})"));
        }
        Ok(Self { a, b, r, kind })
    }

    pub fn p(&self) -> f64 {
        0.5 * self.r * (self.a.zeta + self.b.zeta)
    }

    pub fn q(&self) -> f64 {
        0.5 * self.r * (self.a.zeta - self.b.zeta)
    }

    /// The same integral with the roles of the two centers exchanged.
    pub fn swapped(&self) -> Self {
        let kind = match self.kind {
            IntegralKind::Overlap => IntegralKind::Overlap,
            IntegralKind::NuclearAttractionA => IntegralKind::NuclearAttractionB,
            IntegralKind::NuclearAttractionB => IntegralKind::NuclearAttractionA,
        };
        Self {
            a: self.b,
            b: self.a,
            r: self.r,
            kind,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Quadrature,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Analytic => "analytic",
            Self::Quadrature => "quadrature",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub method: Method,
    /// Estimated absolute error; zero on the analytic path.
    pub est_error: f64,
}

/// Radial normalization `(2ζ)^(n+1/2) / sqrt(Γ(2n+1))`.
pub fn sto_norm(n: f64, zeta: f64) -> Result<f64> {
    if !(n > 0.5 && n.is_finite()) || !(zeta > 0.0 && zeta.is_finite()) {
        return domain(format!("sto_norm needs n > 1/2 and zeta > 0 (n = {n}, zeta = {zeta})"));
    }
    let gamma = if n.fract() == 0.0 && n <= 85.0 {
        (1..=(2 * n as u32)).map(f64::from).product::<f64>()
    } else {
        libm::tgamma(2.0 * n + 1.0)
    };
    let direct = (2.0 * zeta).powf(n + 0.5) / gamma.sqrt();
    if direct.is_finite() && direct > 0.0 {
        Ok(direct)
    } else {
        Ok(((n + 0.5) * (2.0 * zeta).ln() - 0.5 * libm::lgamma(2.0 * n + 1.0)).exp())
    }
}

/// The dimensionless double sum behind every integral:
///
/// `Σ_{k,k',u,s} a_us^kk'(l_a λ, l_b λ) Σ_m F_m(Na, Nb) A_{Na+Nb-m+s}(p) B_{m+s}(q)`
///
/// with `Na = n_a - l_a + 2(k+k'+λ) - 2u - δ_a` and `Nb = n_b - l_b - δ_b`.
/// `δ_a = 1` (`δ_b = 1`) inserts `1/(mu+nu)` (`1/(mu-nu)`), i.e. the
/// nuclear-attraction operator on center `a` (`b`).
#[allow(clippy::too_many_arguments)]
pub fn assemble_kernel(
    n_a: u32,
    l_a: u32,
    n_b: u32,
    l_b: u32,
    lambda: u32,
    p: f64,
    q: f64,
    delta_a: u32,
    delta_b: u32,
) -> Result<f64> {
    if n_a < l_a + 1 || n_b < l_b + 1 {
        return domain(format!("need n > l on both centers (n_a = {n_a}, l_a = {l_a}, n_b = {n_b}, l_b = {l_b})"));
    }
    if delta_a > 1 || delta_b > 1 || delta_a + delta_b > 1 {
        return domain("at most one operator center");
    }
    let table = cached_expansion(l_a, lambda, l_b)?;
    let max_order = (n_a + n_b) as usize;
    // The exponentials are applied once at the end; the sums cancel heavily
    // for large p and q and need inputs free of independent rounding.
    let a = aux_a_reduced(max_order, p)?;
    let sum = |b: &[DoubleDouble]| kernel_with(&table, &a, b, n_a, l_a, n_b, l_b, lambda, delta_a, delta_b);
    Ok(match aux_b_reduced(max_order, q) {
        ReducedB::Split { plus, minus } => {
            (q - p).exp() * sum(&plus).to_f64() - (-p - q).exp() * sum(&minus).to_f64()
        }
        ReducedB::Whole(b) => (-p).exp() * sum(&b).to_f64(),
    })
}

#[allow(clippy::too_many_arguments)]
fn kernel_with(
    table: &crate::product::ProductExpansionTable,
    a: &[DoubleDouble],
    b: &[DoubleDouble],
    n_a: u32,
    l_a: u32,
    n_b: u32,
    l_b: u32,
    lambda: u32,
    delta_a: u32,
    delta_b: u32,
) -> DoubleDouble {
    let nb = (n_b - l_b - delta_b) as i64;
    let mut rows: HashMap<(u32, u32), Vec<f64>> = HashMap::new();
    let mut acc = DoubleDouble::ZERO;
    for (term, coeff) in table.terms().iter().zip(table.coeffs_dd()) {
        let big_k = (term.k + term.kp + lambda) as i64;
        let na = n_a as i64 - l_a as i64 + 2 * big_k - 2 * term.u as i64 - delta_a as i64;
        assert!(na >= 0 && nb >= 0, "negative monomial exponent (Na = {na}, Nb = {nb})");
        let (na, nbu) = (na as u32, nb as u32);
        let f_row = rows.entry((na, nbu)).or_insert_with(|| {
            gen_binomial_row(na, nbu)
                .iter()
                .map(|v| v.to_f64().expect("small binomial"))
                .collect()
        });
        let s = term.s as usize;
        let top = (na + nbu) as usize;
        let mut inner = DoubleDouble::ZERO;
        for (m, f) in f_row.iter().enumerate() {
            if *f == 0.0 {
                continue;
            }
            inner += a[top - m + s] * b[m + s] * DoubleDouble::from_f64(*f);
        }
        acc += *coeff * inner;
    }
    acc
}

fn analytic_quantum_numbers(spec: &IntegralSpec) -> Result<(u32, u32)> {
    match (spec.a.integer_n(), spec.b.integer_n()) {
        (Some(na), Some(nb)) => Ok((na, nb)),
        _ => Err(Error::Unsupported(format!(
            "noninteger n (n_a = {}, n_b = {}); use the quadrature oracle",
            spec.a.n, spec.b.n
        ))),
    }
}

/// Analytic value of any lined-up integral.
pub fn analytic(spec: &IntegralSpec) -> Result<IntegralResult> {
    let (n_a, n_b) = analytic_quantum_numbers(spec)?;
    let (delta_a, delta_b, extra) = match spec.kind {
        IntegralKind::Overlap => (0, 0, 1),
        IntegralKind::NuclearAttractionA => (1, 0, 0),
        IntegralKind::NuclearAttractionB => (0, 1, 0),
    };
    let kernel = assemble_kernel(
        n_a,
        spec.a.l,
        n_b,
        spec.b.l,
        spec.a.lambda,
        spec.p(),
        spec.q(),
        delta_a,
        delta_b,
    )?;
    let norm = sto_norm(spec.a.n, spec.a.zeta)? * sto_norm(spec.b.n, spec.b.zeta)?;
    let scale = (0.5 * spec.r).powi((n_a + n_b + extra) as i32);
    Ok(IntegralResult {
        value: norm * scale * kernel,
        method: Method::Analytic,
        est_error: 0.0,
    })
}

/// `<χ_a | χ_b>`.
pub fn overlap(a: StoParams, b: StoParams, r: f64) -> Result<IntegralResult> {
    analytic(&IntegralSpec::new(a, b, r, IntegralKind::Overlap)?)
}

/// `<χ_a | 1/r_c | χ_b>` for `c` the chosen center.
pub fn nuclear_attraction(a: StoParams, b: StoParams, r: f64, center: Center) -> Result<IntegralResult> {
    let kind = match center {
        Center::A => IntegralKind::NuclearAttractionA,
        Center::B => IntegralKind::NuclearAttractionB,
    };
    analytic(&IntegralSpec::new(a, b, r, kind)?)
}
