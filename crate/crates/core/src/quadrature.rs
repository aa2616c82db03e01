//! Gauss-Legendre rules and a few panelized / adaptive drivers built on them.

use crate::sum::CompensatedSum;

/// `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes from Newton iteration on `P_n`, started at the Tricomi estimate.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
            let mut x = theta.cos() * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_and_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (x, w) in self.mapped(a, b) {
            acc.add(w * f(x));
        }
        acc.value()
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Breakpoints `a = b_0 < b_1 < ... < b_panels = b` whose panel widths shrink
/// geometrically by `ratio` toward `a`.
pub fn graded_breakpoints(a: f64, b: f64, panels: usize, ratio: f64) -> Vec<f64> {
    assert!(panels >= 1);
    let mut out = Vec::with_capacity(panels + 1);
    out.push(a);
    for j in (0..panels - 1).rev() {
        out.push(a + (b - a) * ratio.powi(j as i32 + 1));
    }
    out.push(b);
    out
}

/// Globally adaptive bisection with a 15/30-point Gauss-Legendre pair: the
/// panel with the largest error estimate is split until the summed estimate
/// drops below `max(rel_tol * |total|, abs_tol)` or the panel budget runs out.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let lo = GaussLegendre::new(15);
    let hi = GaussLegendre::new(30);
    let eval = |x0: f64, x1: f64| {
        let fine = hi.integrate(x0, x1, f);
        let coarse = lo.integrate(x0, x1, f);
        Panel {
            a: x0,
            b: x1,
            value: fine,
            err: (fine - coarse).abs(),
        }
    };
    let start = 8;
    let width = (b - a) / start as f64;
    let mut panels: Vec<Panel> = (0..start)
        .map(|i| {
            let x1 = if i + 1 == start { b } else { a + width * (i + 1) as f64 };
            eval(a + width * i as f64, x1)
        })
        .collect();
    for _ in 0..4000 {
        let total = compensated_total(panels.iter().map(|p| p.value));
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if err <= (rel_tol * total.abs()).max(abs_tol) {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(eval(p.a, mid));
        panels.push(eval(mid, p.b));
    }
    compensated_total(panels.iter().map(|p| p.value))
}

fn compensated_total<I: Iterator<Item = f64>>(it: I) -> f64 {
    it.collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_are_sorted() {
        for n in 1..=64 {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
            assert!(gl.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        for n in 1..=20 {
            let gl = GaussLegendre::new(n);
            for deg in 0..(2 * n) as i32 {
                let got = gl.integrate(-1.0, 1.0, |x| x.powi(deg));
                let want = if deg % 2 == 0 { 2.0 / f64::from(deg + 1) } else { 0.0 };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn known_three_point_rule() {
        let gl = GaussLegendre::new(3);
        assert!((gl.nodes()[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((gl.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn graded_breakpoints_shrink_toward_left_end() {
        let b = graded_breakpoints(1.0, 9.0, 4, 0.25);
        assert_eq!(b.len(), 5);
        assert_eq!(b[0], 1.0);
        assert_eq!(b[4], 9.0);
        assert!((b[1] - (1.0 + 8.0 / 64.0)).abs() < 1e-15);
        assert!((b[3] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let f = |x: f64| (-(x - 0.3) * (x - 0.3) * 1e4).exp();
        let v = adaptive_integrate(&f, -1.0, 1.0, 1e-14, 1e-300);
        let want = std::f64::consts::PI.sqrt() / 100.0;
        assert!((v - want).abs() < 1e-14 * want, "{v} vs {want}");
    }
}
