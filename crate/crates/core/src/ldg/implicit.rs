use super::banded::{BandMatrix, BandedLu};
use super::forms::LdgOperator;
use crate::error::Result;

/// Band matrix of the composed diffusion `u ↦ D(M⁻¹K(u))`.
///
/// The operator couples each cell to its two neighbours only, so probing
/// with unit vectors placed in every third cell recovers all columns with
/// `3(k + 1)` applications.
pub fn diffusion_matrix(op: &LdgOperator) -> BandMatrix {
    let p = op.space.dofs_per_cell();
    let cells = op.space.mesh.cells();
    let n = op.space.len();
    let half = 2 * p - 1;
    let mut m = BandMatrix::zeros(n, half, half);
    for color in 0..3.min(cells) {
        for l in 0..p {
            let mut probe = vec![0.0; n];
            for j in (color..cells).step_by(3) {
                probe[j * p + l] = 1.0;
            }
            let out = op.apply_diffusion(&probe);
            for j in (color..cells).step_by(3) {
                let col = j * p + l;
                for row_cell in j.saturating_sub(1)..=(j + 1).min(cells - 1) {
                    for i in 0..p {
                        let row = row_cell * p + i;
                        m.set(row, col, out[row]);
                    }
                }
            }
        }
    }
    m
}

/// Factorized `M − c·D∘M⁻¹∘K` for a fixed stage coefficient `c`.
#[derive(Debug, Clone)]
pub struct ImplicitOperator {
    coefficient: f64,
    lu: BandedLu,
}

impl ImplicitOperator {
    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    /// Solves `(M − cL) u = rhs`, `rhs` given as a tested residual.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        self.lu.solve(rhs)
    }
}

pub fn assemble_implicit(op: &LdgOperator, coefficient: f64) -> Result<ImplicitOperator> {
    assert!(coefficient >= 0.0, "stage coefficient must be nonnegative");
    let mass = op.space.mass();
    let l = diffusion_matrix(op);
    let n = mass.len();
    let half = 2 * op.space.dofs_per_cell() - 1;
    let mut a = BandMatrix::zeros(n, half, half);
    for (i, &m) in mass.iter().enumerate() {
        for j in i.saturating_sub(half)..=(i + half).min(n - 1) {
            let diag = if i == j { m } else { 0.0 };
            a.set(i, j, diag - coefficient * l.get(i, j));
        }
    }
    Ok(ImplicitOperator {
        coefficient,
        lu: a.factorize()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldg::{DgSpace, Diffusion, FluxVariant, DGField};
    use nalgebra::DMatrix;

    fn op(n: usize, k: usize, variant: FluxVariant, diffusion: Diffusion) -> LdgOperator {
        LdgOperator::new(DgSpace::new(60.0, n, k), variant, diffusion, 0.03)
    }

    #[test]
    fn probed_matrix_reproduces_operator() {
        for k in 1..=2 {
            for variant in [FluxVariant::A1CallBc, FluxVariant::A2PutBc] {
                let o = op(11, k, variant, Diffusion::BlackScholes { sigma: 0.3 });
                let m = diffusion_matrix(&o);
                let u: Vec<f64> = (0..o.space.len()).map(|i| (0.37 * i as f64).sin()).collect();
                let direct = o.apply_diffusion(&u);
                let banded = m.mul_vec(&u);
                for (a, b) in direct.iter().zip(&banded) {
                    assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
                }
            }
        }
    }

    #[test]
    fn zero_coefficient_is_mass_solve() {
        let o = op(8, 1, FluxVariant::A1CallBc, Diffusion::BlackScholes { sigma: 0.3 });
        let imp = assemble_implicit(&o, 0.0).unwrap();
        let u: Vec<f64> = (0..o.space.len()).map(|i| i as f64 - 3.0).collect();
        let rhs: Vec<f64> = u.iter().zip(o.space.mass()).map(|(a, m)| a * m).collect();
        let back = imp.solve(&rhs);
        for (a, b) in u.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    /// Mass-symmetrized diffusion `M^{-1/2} L M^{-1/2}` has no eigenvalue with
    /// positive real part.
    #[test]
    fn constant_coefficient_diffusion_is_dissipative() {
        for k in 1..=2 {
            for n in [4, 9, 16] {
                let o = LdgOperator::new(DgSpace::new(1.0, n, k), FluxVariant::A1CallBc, Diffusion::Constant(0.7), 0.0);
                let l = diffusion_matrix(&o);
                let mass = o.space.mass();
                let size = o.space.len();
                let dense = DMatrix::from_fn(size, size, |i, j| l.get(i, j) / (mass[i] * mass[j]).sqrt());
                let eig = dense.complex_eigenvalues();
                for e in eig.iter() {
                    assert!(e.re <= 1e-10, "k={k} n={n} eigenvalue {e}");
                }
            }
        }
    }

    #[test]
    fn implicit_solve_inverts_operator() {
        let o = op(20, 2, FluxVariant::A2PutBc, Diffusion::BlackScholes { sigma: 0.3 });
        let c = 0.01;
        let imp = assemble_implicit(&o, c).unwrap();
        let u = DGField::interpolate(o.space.clone(), |s| (-0.1 * s).exp());
        let lu = o.apply_diffusion(u.values());
        let rhs: Vec<f64> = u
            .values()
            .iter()
            .zip(o.space.mass())
            .zip(&lu)
            .map(|((v, m), d)| m * v - c * d)
            .collect();
        let back = imp.solve(&rhs);
        for (a, b) in u.values().iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
