//! Weak forms of the LDG scheme. Every form returns the vector of tested
//! residuals `R[j·(k+1) + l] = form_j(·, φ_j^l)`; dividing by the mass
//! diagonal yields nodal values.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::DgSpace;
use crate::config::OptionKind;

/// Choice of alternating fluxes and boundary closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxVariant {
    /// `ũ` from the left with `ũ_0 = 0`; `q̃` from the right, interior at `S̄`.
    A1CallBc,
    /// `ũ` from the right with `ũ_N = 0`; `q̃` from the left, interior at `0`.
    A2PutBc,
}

impl From<OptionKind> for FluxVariant {
    fn from(kind: OptionKind) -> Self {
        match kind {
            OptionKind::Call => FluxVariant::A1CallBc,
            OptionKind::Put => FluxVariant::A2PutBc,
        }
    }
}

/// Diffusion coefficient `a(S)` of the second-order term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Diffusion {
    /// `a(S) = σ²S²/2`.
    BlackScholes { sigma: f64 },
    Constant(f64),
}

impl Diffusion {
    pub fn at(&self, s: f64) -> f64 {
        match *self {
            Diffusion::BlackScholes { sigma } => 0.5 * sigma * sigma * s * s,
            Diffusion::Constant(a) => a,
        }
    }
}

/// Lax–Friedrichs flux for `f(S, u) = c·S·u` at a node with dissipation `alpha`.
pub fn lax_friedrichs(speed: f64, s: f64, alpha: f64, minus: f64, plus: f64) -> f64 {
    0.5 * (speed * s * minus + speed * s * plus - alpha * (plus - minus))
}

/// Spatial operator of `∂_τ u + ∂_S(cSu) = ∂_S(a ∂_S u) + H`.
#[derive(Debug, Clone)]
pub struct LdgOperator {
    pub space: Arc<DgSpace>,
    pub variant: FluxVariant,
    pub diffusion: Diffusion,
    /// Convection coefficient `c = σ² − β`.
    pub speed: f64,
}

impl LdgOperator {
    pub fn new(space: Arc<DgSpace>, variant: FluxVariant, diffusion: Diffusion, speed: f64) -> Self {
        Self {
            space,
            variant,
            diffusion,
            speed,
        }
    }

    fn cells(&self) -> usize {
        self.space.mesh.cells()
    }

    fn p(&self) -> usize {
        self.space.dofs_per_cell()
    }

    fn right_trace(&self, v: &[f64], j: usize) -> f64 {
        let p = self.p();
        let b = &self.space.basis;
        (0..p).map(|l| v[j * p + l] * b.right(l)).sum()
    }

    fn left_trace(&self, v: &[f64], j: usize) -> f64 {
        let p = self.p();
        let b = &self.space.basis;
        (0..p).map(|l| v[j * p + l] * b.left(l)).sum()
    }

    /// Adds `−⟨g, ∂_S φ⟩_j + ĝ_{j+1} φ(S_{j+1}^−) − ĝ_j φ(S_j^+)` to `out`,
    /// where `g_i` are nodal values of the integrand and `hat` the N+1
    /// interface values.
    fn weak_divergence(&self, g: &[f64], hat: &[f64], out: &mut [f64]) {
        let p = self.p();
        let b = &self.space.basis;
        let w = b.weights();
        for j in 0..self.cells() {
            for l in 0..p {
                let vol: f64 = (0..p).map(|i| w[i] * g[j * p + i] * b.deriv(i, l)).sum();
                out[j * p + l] += -vol + hat[j + 1] * b.right(l) - hat[j] * b.left(l);
            }
        }
    }

    /// Interface values `ũ_j`, `j = 0..=N`.
    pub fn u_hat(&self, u: &[f64]) -> Vec<f64> {
        let n = self.cells();
        let mut hat = vec![0.0; n + 1];
        match self.variant {
            FluxVariant::A1CallBc => {
                for j in 1..=n {
                    hat[j] = self.right_trace(u, j - 1);
                }
            }
            FluxVariant::A2PutBc => {
                for j in 0..n {
                    hat[j] = self.left_trace(u, j);
                }
            }
        }
        hat
    }

    /// Interface values `q̃_j`, `j = 0..=N`.
    pub fn q_hat(&self, q: &[f64]) -> Vec<f64> {
        let n = self.cells();
        let mut hat = vec![0.0; n + 1];
        match self.variant {
            FluxVariant::A1CallBc => {
                for j in 0..n {
                    hat[j] = self.left_trace(q, j);
                }
                hat[n] = self.right_trace(q, n - 1);
            }
            FluxVariant::A2PutBc => {
                for j in 1..=n {
                    hat[j] = self.right_trace(q, j - 1);
                }
                hat[0] = self.left_trace(q, 0);
            }
        }
        hat
    }

    /// Tested residual of `⟨q, w⟩_j = K_j(u, w)`.
    pub fn form_k(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; u.len()];
        self.weak_divergence(u, &self.u_hat(u), &mut out);
        out
    }

    /// Nodal values of `q` solving the local mass problems.
    pub fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let mut q = self.form_k(u);
        for (v, m) in q.iter_mut().zip(self.space.mass()) {
            *v /= m;
        }
        q
    }

    /// Diffusion residual `D_j(q, v)` with `G = a(S)·q`.
    pub fn form_d(&self, q: &[f64]) -> Vec<f64> {
        let space = &self.space;
        let p = self.p();
        let g: Vec<f64> = q
            .iter()
            .enumerate()
            .map(|(n, &qv)| self.diffusion.at(space.point(n / p, n % p)) * qv)
            .collect();
        let hat: Vec<f64> = self
            .q_hat(q)
            .into_iter()
            .enumerate()
            .map(|(j, qh)| self.diffusion.at(space.mesh.node(j)) * qh)
            .collect();
        let mut out = vec![0.0; q.len()];
        self.weak_divergence(&g, &hat, &mut out);
        out
    }

    /// Lax–Friedrichs interface fluxes `f̃_j`, `j = 0..=N`.
    pub fn convective_flux(&self, u: &[f64]) -> Vec<f64> {
        let n = self.cells();
        let mesh = &self.space.mesh;
        let c = self.speed;
        let mut hat = vec![0.0; n + 1];
        for (j, h) in hat.iter_mut().enumerate().take(n).skip(1) {
            let alpha = c.abs() * mesh.node(j + 1);
            *h = lax_friedrichs(c, mesh.node(j), alpha, self.right_trace(u, j - 1), self.left_trace(u, j));
        }
        hat[n] = c * mesh.node(n) * self.right_trace(u, n - 1);
        hat
    }

    /// Convection residual entering the right-hand side:
    /// `C_j(u, v) = ⟨f, ∂_S v⟩_j − f̃_{j+1} v(S_{j+1}^−) + f̃_j v(S_j^+)`.
    pub fn form_c(&self, u: &[f64]) -> Vec<f64> {
        let space = &self.space;
        let p = self.p();
        let f: Vec<f64> = u
            .iter()
            .enumerate()
            .map(|(n, &uv)| self.speed * space.point(n / p, n % p) * uv)
            .collect();
        let mut out = vec![0.0; u.len()];
        self.weak_divergence(&f, &self.convective_flux(u), &mut out);
        for v in &mut out {
            *v = -*v;
        }
        out
    }

    /// Collocated source residual `(h/2)·w_i·H(S_i, u_i)`.
    pub fn form_h(&self, u: &[f64], source: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let space = &self.space;
        let p = self.p();
        space
            .mass()
            .into_iter()
            .enumerate()
            .map(|(n, m)| m * source(space.point(n / p, n % p), u[n]))
            .collect()
    }

    /// Composed diffusion `D(M⁻¹K(u))` as a tested residual.
    pub fn apply_diffusion(&self, u: &[f64]) -> Vec<f64> {
        self.form_d(&self.gradient(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldg::DGField;
    use proptest::prelude::*;

    fn op(n: usize, k: usize, variant: FluxVariant, diffusion: Diffusion, speed: f64) -> LdgOperator {
        LdgOperator::new(DgSpace::new(60.0, n, k), variant, diffusion, speed)
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn mass_is_diagonal_scaled_weights() {
        for k in 1..=2 {
            let space = DgSpace::new(60.0, 12, k);
            let h = space.mesh.width();
            let b = &space.basis;
            let rule = crate::quadrature::gauss_legendre(k + 3);
            for i in 0..=k {
                for l in 0..=k {
                    let exact = 0.5 * h * rule.integrate(|x| b.lagrange(i, x) * b.lagrange(l, x));
                    let diag = if i == l { space.mass()[i] } else { 0.0 };
                    assert!((exact - diag).abs() < 1e-13, "k={k} ({i},{l})");
                }
                assert_eq!(space.mass()[i], 0.5 * h * b.weights()[i]);
            }
        }
    }

    #[test]
    fn gradient_of_resolved_linear_is_exact() {
        for k in 1..=2 {
            let call = op(12, k, FluxVariant::A1CallBc, Diffusion::Constant(1.0), 0.0);
            let u = DGField::interpolate(call.space.clone(), |s| 2.0 * s);
            assert!(call.gradient(u.values()).iter().all(|q| (q - 2.0).abs() < 1e-12));
            let put = op(12, k, FluxVariant::A2PutBc, Diffusion::Constant(1.0), 0.0);
            let u = DGField::interpolate(put.space.clone(), |s| 3.0 - 0.05 * s);
            assert!(put.gradient(u.values()).iter().all(|q| (q + 0.05).abs() < 1e-12));
        }
    }

    #[test]
    fn gradient_of_sine_converges_at_order_k() {
        for k in 1..=2 {
            let mut errs = Vec::new();
            for n in [20, 40, 80] {
                let o = op(n, k, FluxVariant::A1CallBc, Diffusion::Constant(1.0), 0.0);
                let w = std::f64::consts::PI / 60.0;
                let u = DGField::interpolate(o.space.clone(), |s| (w * s).sin());
                let q = o.gradient(u.values());
                let pts = o.space.points();
                let mass = o.space.mass();
                let err: f64 = (0..q.len()).map(|i| mass[i] * (q[i] - w * (w * pts[i]).cos()).powi(2)).sum();
                errs.push(err.sqrt());
            }
            let eoc = (errs[1] / errs[2]).log2();
            assert!(eoc > k as f64 - 0.2, "k={k} errors {errs:?}");
        }
    }

    #[test]
    fn zero_inputs_give_zero_residuals() {
        let o = op(10, 2, FluxVariant::A2PutBc, Diffusion::BlackScholes { sigma: 0.3 }, 0.03);
        let z = vec![0.0; o.space.len()];
        assert!(o.form_k(&z).iter().all(|&v| v == 0.0));
        assert!(o.form_d(&z).iter().all(|&v| v == 0.0));
        assert!(o.form_c(&z).iter().all(|&v| v == 0.0));
        assert!(o.form_h(&z, |_, _| 0.0).iter().all(|&v| v == 0.0));
        let flat = op(10, 2, FluxVariant::A2PutBc, Diffusion::BlackScholes { sigma: 0.0 }, 0.0);
        let q: Vec<f64> = (0..flat.space.len()).map(|i| (i as f64).sin()).collect();
        assert!(flat.form_d(&q).iter().all(|&v| v == 0.0));
        assert!(flat.form_c(&q).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unit_source_row_sums_equal_cell_width() {
        let o = op(10, 2, FluxVariant::A1CallBc, Diffusion::Constant(1.0), 0.0);
        let r = o.form_h(&vec![0.0; o.space.len()], |_, _| 1.0);
        for cell in r.chunks(3) {
            assert!((cell.iter().sum::<f64>() - 6.0).abs() < 1e-13);
        }
    }

    #[test]
    fn convection_of_linear_field_approximates_divergence() {
        let c = 0.03;
        let mut errs = Vec::new();
        for n in [20, 40, 80] {
            let o = op(n, 1, FluxVariant::A1CallBc, Diffusion::Constant(0.0), c);
            let u = DGField::interpolate(o.space.clone(), |s| s);
            let r = o.form_c(u.values());
            let pts = o.space.points();
            let mass = o.space.mass();
            // Interior cells only: the outflow boundary flux is one-sided.
            let p = 2;
            let err: f64 = (p..r.len() - p)
                .map(|i| mass[i] * (r[i] / mass[i] + 2.0 * c * pts[i]).powi(2))
                .sum();
            errs.push(err.sqrt());
        }
        assert!(errs[2] < 1e-10 || (errs[1] / errs[2]).log2() > 1.5, "{errs:?}");
    }

    #[test]
    fn manufactured_diffusion_of_square() {
        // u = S², tested weakly against v = sin²(πS/S̄): ∫ ∂_S(σ²S³) v dS = ∫ 3σ²S² v dS.
        let sigma = 0.3;
        let smax = 60.0;
        let v = |s: f64| (std::f64::consts::PI * s / smax).sin().powi(2);
        let exact = crate::quadrature::simpson(0.0, smax, 4000).integrate(|s| 3.0 * sigma * sigma * s * s * v(s));
        let mut errs = Vec::new();
        for n in [20, 40, 80] {
            let o = op(n, 1, FluxVariant::A1CallBc, Diffusion::BlackScholes { sigma }, 0.0);
            let u = DGField::interpolate(o.space.clone(), |s| s * s);
            let r = o.apply_diffusion(u.values());
            let pts = o.space.points();
            let pairing: f64 = r.iter().zip(&pts).map(|(ri, &s)| ri * v(s)).sum();
            errs.push((pairing - exact).abs() / exact);
        }
        assert!((errs[1] / errs[2]).log2() > 0.9, "{errs:?}");
    }

    #[test]
    fn flux_consistency_example() {
        assert!((lax_friedrichs(0.03, 12.0, 0.5, 2.0, 2.0) - 0.03 * 12.0 * 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn flux_consistent_and_monotone(
            c in -0.1f64..0.1, s in 0.0f64..60.0, h in 0.01f64..5.0,
            a in -10.0f64..10.0, b in -10.0f64..10.0, d in 0.0f64..1.0,
        ) {
            let alpha = c.abs() * (s + h);
            prop_assert!((lax_friedrichs(c, s, alpha, a, a) - c * s * a).abs() <= 1e-12 * (1.0 + a.abs()));
            prop_assert!(lax_friedrichs(c, s, alpha, a + d, b) >= lax_friedrichs(c, s, alpha, a, b) - 1e-12);
            prop_assert!(lax_friedrichs(c, s, alpha, a, b + d) <= lax_friedrichs(c, s, alpha, a, b) + 1e-12);
        }

        #[test]
        fn convection_is_locally_conservative(seed in 0u64..1000, k in 1usize..=2, c in -0.1f64..0.1) {
            let o = op(9, k, FluxVariant::A1CallBc, Diffusion::Constant(0.0), c);
            let u: Vec<f64> = (0..o.space.len()).map(|i| ((i as u64 * 7919 + seed) as f64).sin()).collect();
            let r = o.form_c(&u);
            let flux = o.convective_flux(&u);
            let p = k + 1;
            for j in 0..9 {
                let cell: f64 = r[j * p..(j + 1) * p].iter().sum();
                prop_assert!((cell - (flux[j] - flux[j + 1])).abs() < 1e-12);
            }
            let total: f64 = r.iter().sum();
            prop_assert!((total - (flux[0] - flux[9])).abs() < 1e-12);
        }

        #[test]
        fn integration_by_parts(seed in 0u64..1000, k in 1usize..=2, put in proptest::bool::ANY) {
            let variant = if put { FluxVariant::A2PutBc } else { FluxVariant::A1CallBc };
            let o = op(7, k, variant, Diffusion::Constant(1.0), 0.0);
            let n = o.space.len();
            let u: Vec<f64> = (0..n).map(|i| ((i as u64 * 104729 + seed) as f64).sin()).collect();
            let q: Vec<f64> = (0..n).map(|i| ((i as u64 * 1299709 + 3 * seed) as f64).cos()).collect();
            // Σ_j D_j(q, u) + Σ_j K_j(u, q) reduces to the boundary term.
            let lhs = dot(&o.form_d(&q), &u) + dot(&o.form_k(&u), &q);
            let boundary = match variant {
                FluxVariant::A1CallBc => o.right_trace(&u, 6) * o.right_trace(&q, 6),
                FluxVariant::A2PutBc => -o.left_trace(&u, 0) * o.left_trace(&q, 0),
            };
            prop_assert!((lhs - boundary).abs() < 1e-12, "lhs {} boundary {}", lhs, boundary);
        }
    }
}
