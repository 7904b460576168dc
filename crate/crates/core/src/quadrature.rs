//! Gauss–Legendre, Gauss–Hermite and composite Simpson rules.

use std::f64::consts::PI;

/// Nodes and weights of a one-dimensional quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `n`-point Gauss–Legendre rule on `[−1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    if n == 1 {
        return Rule {
            nodes,
            weights: vec![2.0],
        };
    }
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// `n`-point Gauss–Hermite rule for the standard normal weight:
/// `Σ w_i f(x_i) ≈ E[f(Z)]`, `Z ~ N(0, 1)`.
pub fn gauss_hermite_normal(n: usize) -> Rule {
    assert!(n >= 1, "rule needs at least one node");
    let pim4 = PI.powf(-0.25);
    let mut roots = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * roots[0],
            3 => 1.91 * z - 0.91 * roots[1],
            _ => 2.0 * z - roots[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        roots[i] = z;
        w[i] = 2.0 / (pp * pp);
    }
    let sqrt_pi = PI.sqrt();
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..m {
        let x = std::f64::consts::SQRT_2 * roots[i];
        let wi = w[i] / sqrt_pi;
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = wi;
        weights[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Composite Simpson rule on `[a, b]` with `intervals` (even) subintervals.
pub fn simpson(a: f64, b: f64, intervals: usize) -> Rule {
    assert!(intervals >= 2 && intervals % 2 == 0, "Simpson needs an even interval count");
    let h = (b - a) / intervals as f64;
    let nodes = (0..=intervals).map(|i| a + i as f64 * h).collect();
    let weights = (0..=intervals)
        .map(|i| {
            let c = if i == 0 || i == intervals {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    Rule { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_exact_to_degree_2n_minus_1() {
        for n in 1..=6 {
            let rule = gauss_legendre(n);
            for p in 0..2 * n {
                let exact = if p % 2 == 0 { 2.0 / (p as f64 + 1.0) } else { 0.0 };
                let got = rule.integrate(|x| x.powi(p as i32));
                assert!((got - exact).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn legendre_known_nodes() {
        let r = gauss_legendre(2);
        assert!((r.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let r = gauss_legendre(3);
        assert!((r.nodes[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((r.weights[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn hermite_normal_moments() {
        for n in [8, 20, 64, 100] {
            let rule = gauss_hermite_normal(n);
            assert!((rule.integrate(|_| 1.0) - 1.0).abs() < 1e-13, "n={n}");
            assert!(rule.integrate(|x| x).abs() < 1e-13);
            assert!((rule.integrate(|x| x * x) - 1.0).abs() < 1e-12);
            assert!((rule.integrate(|x| x.powi(4)) - 3.0).abs() < 1e-11);
            assert!((rule.integrate(|x| (0.3 * x).exp()) - (0.045f64).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn simpson_exact_for_cubics() {
        let r = simpson(0.0, 2.0, 4);
        assert!((r.integrate(|x| x * x * x - x) - 2.0).abs() < 1e-14);
    }
}
