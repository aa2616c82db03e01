//! Numerical reference values by direct quadrature.
//!
//! Two-center integrals are integrated on a tensor-product Gauss-Legendre grid
//! in `(mu, nu)`: `mu` runs over `[1, mu_max]` in panels graded toward 1, `nu`
//! over `[-1, 1]` in panels graded toward both ends. The integrand is built
//! from the coordinate maps, the recurrence form of `P̄_lλ` and the exact
//! volume element `(R/2)^3 (mu² - nu²)`. Nothing here goes through the
//! product expansion or the auxiliary functions.
//!
//! Each estimate is repeated with twice the nodes per panel; the difference is
//! the reported error estimate, and refinement continues until it drops below
//! the target or the refinement cap is hit.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::integrals::{sto_norm, IntegralKind, IntegralResult, IntegralSpec, Method, StoParams};
use crate::legendre::legendre_recurrence;
use crate::quadrature::{adaptive_integrate, graded_breakpoints, GaussLegendre};
use crate::sum::CompensatedSum;

/// Panel width ratio used when grading toward a boundary.
const GRADING: f64 = 0.3;

/// Extra factor on the tail bound. The bound is relative to the integrand
/// scale, and sign changes can leave the integral several decades below it.
const TAIL_MARGIN: f64 = 1e-6;

/// Differences below this fraction of `∫|f|` are rounding noise.
const ROUNDING_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Upper `mu` limit; `None` picks the smallest value satisfying the tail
    /// bound `e^(-p (mu_max - 1)) mu_max^(n_a + n_b + 1) < target_rel_err / 100`
    /// with a further safety factor of `1e-6`.
    pub mu_max: Option<f64>,
    pub target_rel_err: f64,
    /// Number of node doublings allowed after the first comparison.
    pub max_refinements: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panels: 8,
            nodes_per_panel: 24,
            mu_max: None,
            target_rel_err: 1e-11,
            max_refinements: 3,
        }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<()> {
        if self.panels == 0 || self.nodes_per_panel == 0 {
            return domain("quadrature needs at least one panel and one node");
        }
        if self.target_rel_err.partial_cmp(&0.0) != Some(Ordering::Greater) {
            return domain("target_rel_err must be positive");
        }
        if let Some(m) = self.mu_max {
            if m.partial_cmp(&1.0) != Some(Ordering::Greater) {
                return domain(format!("mu_max must exceed 1 (mu_max = {m})"));
            }
        }
        Ok(())
    }

    /// `mu_max` for decay rate `p` and polynomial degree `power`.
    pub fn auto_mu_max(&self, p: f64, power: f64) -> f64 {
        let bound = (self.target_rel_err * 1e-2 * TAIL_MARGIN).ln();
        let log_tail = |mu: f64| -p * (mu - 1.0) + power * mu.ln();
        let mut hi = 2.0;
        while log_tail(hi) >= bound {
            hi = 1.0 + 2.0 * (hi - 1.0);
        }
        let mut lo = 1.0 + 0.5 * (hi - 1.0);
        if log_tail(lo) < bound {
            return hi;
        }
        // bisect the last crossing
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if log_tail(mid) < bound {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

fn mu_breakpoints(mu_max: f64, panels: usize) -> Vec<f64> {
    graded_breakpoints(1.0, mu_max, panels, GRADING)
}

fn nu_breakpoints(panels: usize) -> Vec<f64> {
    let half = panels.div_ceil(2).max(1);
    let left = graded_breakpoints(-1.0, 0.0, half, GRADING);
    let mut out = left.clone();
    out.extend(left.iter().rev().skip(1).map(|x| -x));
    out
}

fn grid(breaks: &[f64], rule: &GaussLegendre) -> Vec<(f64, f64)> {
    breaks
        .windows(2)
        .flat_map(|w| rule.mapped(w[0], w[1]).collect::<Vec<_>>())
        .collect()
}

fn int_power(x: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() < 1e9 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

/// Radial-angular factor `r^(n-1-δ) P̄_lλ` of one orbital, `δ = 1` when the
/// Coulomb operator sits on its center.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Factor {
    power: f64,
    l: u32,
    lambda: u32,
}

/// One group of specs sharing `(ζ_a, ζ_b, R)`, evaluated on one grid.
struct Group<'a> {
    specs: Vec<&'a IntegralSpec>,
    norms: Vec<f64>,
    factors_a: Vec<Factor>,
    factors_b: Vec<Factor>,
    index_a: Vec<usize>,
    index_b: Vec<usize>,
}

impl<'a> Group<'a> {
    fn new(specs: Vec<&'a IntegralSpec>) -> Result<Self> {
        let mut factors_a = Vec::new();
        let mut factors_b = Vec::new();
        let mut index_a = Vec::new();
        let mut index_b = Vec::new();
        let mut norms = Vec::new();
        for s in &specs {
            let (da, db) = match s.kind {
                IntegralKind::Overlap => (0.0, 0.0),
                IntegralKind::NuclearAttractionA => (1.0, 0.0),
                IntegralKind::NuclearAttractionB => (0.0, 1.0),
            };
            index_a.push(slot(&mut factors_a, Factor { power: s.a.n - 1.0 - da, l: s.a.l, lambda: s.a.lambda }));
            index_b.push(slot(&mut factors_b, Factor { power: s.b.n - 1.0 - db, l: s.b.l, lambda: s.b.lambda }));
            norms.push(sto_norm(s.a.n, s.a.zeta)? * sto_norm(s.b.n, s.b.zeta)?);
        }
        Ok(Self {
            specs,
            norms,
            factors_a,
            factors_b,
            index_a,
            index_b,
        })
    }

    /// `(Σ f w, Σ |f w|)` for the specs in `active`, on the grid with `nodes`
    /// points per panel.
    fn evaluate(&self, cfg: &QuadratureConfig, mu_max: f64, nodes: usize, active: &[usize]) -> Vec<(f64, f64)> {
        let first = self.specs[0];
        let (za, zb, r) = (first.a.zeta, first.b.zeta, first.r);
        let half_r = 0.5 * r;
        let rule = GaussLegendre::new(nodes);
        let mu_nodes = grid(&mu_breakpoints(mu_max, cfg.panels), &rule);
        let nu_nodes = grid(&nu_breakpoints(cfg.panels), &rule);

        let mut used_a = vec![false; self.factors_a.len()];
        let mut used_b = vec![false; self.factors_b.len()];
        for &i in active {
            used_a[self.index_a[i]] = true;
            used_b[self.index_b[i]] = true;
        }
        let weights: Vec<f64> = active.iter().map(|&i| self.norms[i]).collect();
        let pairs: Vec<(usize, usize)> = active.iter().map(|&i| (self.index_a[i], self.index_b[i])).collect();

        let rows: Vec<Vec<(f64, f64)>> = mu_nodes
            .par_iter()
            .map(|&(mu, wmu)| {
                let mut sums = vec![(CompensatedSum::new(), 0.0); active.len()];
                let mut ga = vec![0.0; self.factors_a.len()];
                let mut gb = vec![0.0; self.factors_b.len()];
                for &(nu, wnu) in &nu_nodes {
                    let plus = mu + nu;
                    let minus = mu - nu;
                    let ra = half_r * plus;
                    let rb = half_r * minus;
                    let root = ((mu - 1.0) * (mu + 1.0) * (1.0 - nu) * (1.0 + nu)).sqrt();
                    let (cos_a, sin_a) = ((1.0 + mu * nu) / plus, root / plus);
                    let (cos_b, sin_b) = ((1.0 - mu * nu) / minus, root / minus);
                    for ((g, f), &used) in ga.iter_mut().zip(&self.factors_a).zip(&used_a) {
                        if used {
                            *g = int_power(ra, f.power) * legendre_recurrence(f.l, f.lambda, cos_a, sin_a);
                        }
                    }
                    for ((g, f), &used) in gb.iter_mut().zip(&self.factors_b).zip(&used_b) {
                        if used {
                            *g = int_power(rb, f.power) * legendre_recurrence(f.l, f.lambda, cos_b, sin_b);
                        }
                    }
                    // (R/2)^3 (mu² - nu²) dmu dnu, times 2π from φ against the
                    // 1/(2π) of the two unit-normalized azimuthal factors
                    let volume = half_r * half_r * half_r * plus * minus * wmu * wnu;
                    let radial = (-za * ra - zb * rb).exp() * volume;
                    for ((sum, &(ia, ib)), &w) in sums.iter_mut().zip(&pairs).zip(&weights) {
                        let f = w * ga[ia] * gb[ib] * radial;
                        sum.0.add(f);
                        sum.1 += f.abs();
                    }
                }
                sums.into_iter().map(|(s, a)| (s.value(), a)).collect()
            })
            .collect();

        (0..active.len())
            .map(|j| {
                let mut acc = CompensatedSum::new();
                let mut l1 = 0.0;
                for row in &rows {
                    acc.add(row[j].0);
                    l1 += row[j].1;
                }
                (acc.value(), l1)
            })
            .collect()
    }
}

fn slot(list: &mut Vec<Factor>, key: Factor) -> usize {
    match list.iter().position(|k| *k == key) {
        Some(i) => i,
        None => {
            list.push(key);
            list.len() - 1
        }
    }
}

fn converged(coarse: f64, fine: f64, l1: f64, target: f64) -> bool {
    let diff = (fine - coarse).abs();
    diff <= target * fine.abs() || diff <= ROUNDING_FLOOR * l1
}

fn run_group(specs: Vec<&IntegralSpec>, cfg: &QuadratureConfig) -> Vec<Result<IntegralResult>> {
    let group = match Group::new(specs) {
        Ok(g) => g,
        Err(e) => return vec![Err(e); 1],
    };
    let n = group.specs.len();
    let first = group.specs[0];
    let power = group
        .specs
        .iter()
        .map(|s| (s.a.n + s.b.n + 1.0).ceil())
        .fold(1.0, f64::max);
    let mu_max = cfg.mu_max.unwrap_or_else(|| cfg.auto_mu_max(first.p(), power));

    let mut out: Vec<Option<Result<IntegralResult>>> = vec![None; n];
    let mut active: Vec<usize> = (0..n).collect();
    let mut nodes = cfg.nodes_per_panel;
    let mut coarse = group.evaluate(cfg, mu_max, nodes, &active);
    for _ in 0..=cfg.max_refinements {
        nodes *= 2;
        let fine = group.evaluate(cfg, mu_max, nodes, &active);
        let mut still = Vec::new();
        let mut carried = Vec::new();
        for (j, &i) in active.iter().enumerate() {
            let (c, _) = coarse[j];
            let (f, l1) = fine[j];
            if converged(c, f, l1, cfg.target_rel_err) {
                out[i] = Some(Ok(IntegralResult {
                    value: f,
                    method: Method::Quadrature,
                    est_error: (f - c).abs().max(ROUNDING_FLOOR * l1),
                }));
            } else {
                still.push(i);
                carried.push((c, f));
            }
        }
        if still.is_empty() {
            break;
        }
        coarse = carried.iter().map(|&(_, f)| (f, 0.0)).collect();
        for (i, (c, f)) in still.iter().zip(carried) {
            out[*i] = Some(Err(Error::NonConvergence {
                coarse: c,
                fine: f,
                target: cfg.target_rel_err,
            }));
        }
        active = still;
    }
    out.into_iter().map(|r| r.expect("every spec visited")).collect()
}

/// Quadrature value of one integral. Real `n > 1/2` is accepted.
pub fn quad_integral(spec: &IntegralSpec, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    cfg.validate()?;
    run_group(vec![spec], cfg).pop().expect("one result per spec")
}

/// Quadrature values for many integrals. Specs sharing `(ζ_a, ζ_b, R)` are
/// evaluated on one shared grid; results come back in input order.
pub fn quad_integrals(specs: &[IntegralSpec], cfg: &QuadratureConfig) -> Vec<Result<IntegralResult>> {
    if let Err(e) = cfg.validate() {
        return vec![Err(e); specs.len()];
    }
    let mut groups: Vec<((u64, u64, u64), Vec<usize>)> = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let key = (s.a.zeta.to_bits(), s.b.zeta.to_bits(), s.r.to_bits());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, idx)) => idx.push(i),
            None => groups.push((key, vec![i])),
        }
    }
    let mut out: Vec<Option<Result<IntegralResult>>> = vec![None; specs.len()];
    for (_, idx) in groups {
        let members: Vec<&IntegralSpec> = idx.iter().map(|&i| &specs[i]).collect();
        let results = run_group(members, cfg);
        if results.len() != idx.len() {
            // group setup failed; the single error applies to every member
            let err = results.into_iter().next().expect("error result");
            for &i in &idx {
                out[i] = Some(err.clone());
            }
            continue;
        }
        for (&i, r) in idx.iter().zip(results) {
            out[i] = Some(r);
        }
    }
    out.into_iter().map(|r| r.expect("every spec evaluated")).collect()
}

/// `<χ|χ>` for one orbital by one-dimensional radial quadrature times the
/// angular norm `∫ P̄_lλ(x)^2 dx`.
pub fn norm_integral(sto: &StoParams, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    cfg.validate()?;
    let norm = sto_norm(sto.n, sto.zeta)?;
    let two_zeta = 2.0 * sto.zeta;
    // substitute t = 2ζ r: ∫ N² r^(2n) e^(-2ζ r) dr = N² / (2ζ)^(2n+1) ∫ t^(2n) e^(-t) dt
    let prefactor = norm * norm / two_zeta.powf(2.0 * sto.n + 1.0);
    let power = 2.0 * sto.n;
    let t_max = cfg.auto_mu_max(1.0, power.ceil() + 1.0) - 1.0 + power;
    let breaks = graded_breakpoints(0.0, t_max, cfg.panels, GRADING);
    let radial = |nodes: usize| {
        let rule = GaussLegendre::new(nodes);
        let mut acc = CompensatedSum::new();
        for (t, w) in grid(&breaks, &rule) {
            acc.add(w * int_power(t, power) * (-t).exp());
        }
        prefactor * acc.value()
    };
    let angular = {
        let rule = GaussLegendre::new(sto.l as usize + 2);
        rule.integrate(-1.0, 1.0, |x| {
            let v = legendre_recurrence(sto.l, sto.lambda, x, (1.0 - x * x).sqrt());
            v * v
        })
    };
    let mut nodes = cfg.nodes_per_panel;
    let mut coarse = radial(nodes);
    for _ in 0..=cfg.max_refinements {
        nodes *= 2;
        let fine = radial(nodes);
        if (fine - coarse).abs() <= cfg.target_rel_err * fine.abs() {
            return Ok(IntegralResult {
                value: fine * angular,
                method: Method::Quadrature,
                est_error: (fine - coarse).abs() * angular,
            });
        }
        coarse = fine;
    }
    Err(Error::NonConvergence {
        coarse,
        fine: coarse,
        target: cfg.target_rel_err,
    })
}

/// `A_n(p)` by adaptive quadrature of its defining integral.
pub fn aux_a_quadrature(n: u32, p: f64) -> Result<f64> {
    if p.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return domain(format!("A_n(p) diverges for p <= 0 (p = {p})"));
    }
    let nf = f64::from(n);
    let peak = (nf / p).max(1.0);
    let log_f = |mu: f64| nf * mu.ln() - p * mu;
    let log_peak = log_f(peak);
    let mut end = peak + 1.0;
    while log_f(end) > log_peak - 80.0 {
        end = peak + 2.0 * (end - peak);
    }
    let f = |mu: f64| (log_f(mu)).exp();
    let lower = if peak > 1.0 {
        adaptive_integrate(&f, 1.0, peak, 1e-15, 0.0)
    } else {
        0.0
    };
    Ok(lower + adaptive_integrate(&f, peak, end, 1e-15, 0.0))
}

/// `B_n(q)` by adaptive quadrature of its defining integral folded onto
/// `[0, 1]`: `2 ∫ nu^n cosh(q nu)` for even `n`, `-2 ∫ nu^n sinh(q nu)` for odd
/// `n`. Folding keeps the odd part from cancelling near `q = 0`.
pub fn aux_b_quadrature(n: u32, q: f64) -> f64 {
    let odd = n % 2 == 1;
    let f = |nu: f64| {
        let h = if odd { -(q * nu).sinh() } else { (q * nu).cosh() };
        2.0 * nu.powi(n as i32) * h
    };
    adaptive_integrate(&f, 0.0, 1.0, 1e-15, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1(zeta: f64) -> StoParams {
        StoParams::integer(1, 0, 0, zeta).unwrap()
    }

    #[test]
    fn one_s_overlap() {
        let spec = IntegralSpec::new(s1(1.0), s1(1.0), 2.0, IntegralKind::Overlap).unwrap();
        let r = quad_integral(&spec, &QuadratureConfig::default()).unwrap();
        assert_eq!(r.method, Method::Quadrature);
        let want = 13.0 / 3.0 * (-2.0f64).exp();
        assert!((r.value - want).abs() < 1e-10, "{} vs {want}", r.value);
        assert!(r.est_error < 1e-10);
    }

    #[test]
    fn one_s_attraction() {
        let spec = IntegralSpec::new(s1(1.0), s1(1.0), 2.0, IntegralKind::NuclearAttractionA).unwrap();
        let r = quad_integral(&spec, &QuadratureConfig::default()).unwrap();
        assert!((r.value - 3.0 * (-2.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn norms_are_one() {
        for n in [1.0, 1.5, 2.0, 2.5, 3.0] {
            for zeta in [0.5, 1.0, 4.0] {
                let sto = StoParams::new(n, 0, 0, zeta).unwrap();
                let r = norm_integral(&sto, &QuadratureConfig::default()).unwrap();
                assert!((r.value - 1.0).abs() < 1e-10, "n={n} zeta={zeta}: {}", r.value);
            }
        }
        let d = StoParams::integer(4, 3, 2, 1.7).unwrap();
        let r = norm_integral(&d, &QuadratureConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn noninteger_two_center_converges() {
        let a = StoParams::new(1.5, 0, 0, 1.0).unwrap();
        let spec = IntegralSpec::new(a, s1(1.0), 2.0, IntegralKind::Overlap).unwrap();
        let r = quad_integral(&spec, &QuadratureConfig::default()).unwrap();
        assert!(r.value > 0.0 && r.value < 1.0);
        assert!(r.est_error <= 1e-11 * r.value);
    }

    #[test]
    fn batch_matches_single_and_keeps_order() {
        let a = StoParams::integer(2, 1, 0, 1.2).unwrap();
        let specs: Vec<IntegralSpec> = IntegralKind::ALL
            .iter()
            .flat_map(|&k| {
                [
                    IntegralSpec::new(a, s1(0.8), 1.5, k).unwrap(),
                    IntegralSpec::new(s1(0.8), a, 3.0, k).unwrap(),
                ]
            })
            .collect();
        let cfg = QuadratureConfig::default();
        let batch = quad_integrals(&specs, &cfg);
        for (s, b) in specs.iter().zip(&batch) {
            let single = quad_integral(s, &cfg).unwrap().value;
            let b = b.as_ref().unwrap().value;
            assert!((single - b).abs() <= 1e-12 * b.abs());
        }
    }

    #[test]
    fn doubling_stays_within_estimate() {
        let a = StoParams::integer(4, 3, 1, 2.5).unwrap();
        let b = StoParams::integer(3, 1, 1, 0.5).unwrap();
        let cfg = QuadratureConfig::default();
        let finer = QuadratureConfig {
            nodes_per_panel: 2 * cfg.nodes_per_panel,
            ..cfg
        };
        for kind in IntegralKind::ALL {
            for r in [0.2, 3.0, 8.0] {
                let spec = IntegralSpec::new(a, b, r, kind).unwrap();
                let x = quad_integral(&spec, &cfg).unwrap();
                let y = quad_integral(&spec, &finer).unwrap();
                assert!((x.value - y.value).abs() <= x.est_error, "{kind} R={r}");
            }
        }
    }

    #[test]
    fn refinement_cap_reports_failure() {
        let cfg = QuadratureConfig {
            panels: 1,
            nodes_per_panel: 2,
            max_refinements: 0,
            ..Default::default()
        };
        let spec = IntegralSpec::new(s1(1.0), s1(1.0), 2.0, IntegralKind::Overlap).unwrap();
        assert!(matches!(quad_integral(&spec, &cfg), Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn bad_config_is_rejected() {
        let spec = IntegralSpec::new(s1(1.0), s1(1.0), 2.0, IntegralKind::Overlap).unwrap();
        let cfg = QuadratureConfig {
            mu_max: Some(0.5),
            ..Default::default()
        };
        assert!(quad_integral(&spec, &cfg).is_err());
    }

    #[test]
    fn tail_bound_holds_at_auto_mu_max() {
        let cfg = QuadratureConfig::default();
        for p in [0.25, 1.0, 10.0, 50.0] {
            for power in [1.0, 5.0, 9.0] {
                let m = cfg.auto_mu_max(p, power);
                let tail = (-p * (m - 1.0)).exp() * m.powf(power);
                assert!(tail < cfg.target_rel_err * 1e-2 * 1.0001, "p={p} power={power}");
            }
        }
    }

    #[test]
    fn aux_quadrature_spot_values() {
        assert!((aux_a_quadrature(0, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((aux_b_quadrature(0, 1.0) - 2.0 * 1f64.sinh()).abs() < 1e-14);
        assert!(aux_b_quadrature(3, 0.0).abs() < 1e-16);
        assert!(aux_a_quadrature(2, 0.0).is_err());
    }
}
