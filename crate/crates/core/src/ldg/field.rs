use std::sync::Arc;

use super::{Basis, Mesh};
use crate::config::OptionSpec;
use crate::error::{Error, Result};

/// Mesh plus per-cell basis: the discrete function space.
#[derive(Debug, Clone, PartialEq)]
pub struct DgSpace {
    pub mesh: Mesh,
    pub basis: Basis,
}

impl DgSpace {
    pub fn new(s_max: f64, cells: usize, degree: usize) -> Arc<Self> {
        Arc::new(Self {
            mesh: Mesh::new(s_max, cells),
            basis: Basis::new(degree),
        })
    }

    pub fn dofs_per_cell(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.mesh.cells() * self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical location of node `i` in cell `j`.
    pub fn point(&self, j: usize, i: usize) -> f64 {
        self.mesh.to_physical(j, self.basis.nodes()[i])
    }

    /// All nodal locations, cell-major.
    pub fn points(&self) -> Vec<f64> {
        let p = self.dofs_per_cell();
        (0..self.len()).map(|n| self.point(n / p, n % p)).collect()
    }

    /// Diagonal of the mass matrix, `(h/2)·w_i` per node.
    pub fn mass(&self) -> Vec<f64> {
        let half = 0.5 * self.mesh.width();
        let w = self.basis.weights();
        (0..self.len()).map(|n| half * w[n % w.len()]).collect()
    }
}

/// Piecewise polynomial stored by nodal values, cell-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DGField {
    space: Arc<DgSpace>,
    values: Vec<f64>,
}

impl DGField {
    pub fn zeros(space: Arc<DgSpace>) -> Self {
        let values = vec![0.0; space.len()];
        Self { space, values }
    }

    pub fn from_values(space: Arc<DgSpace>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), space.len(), "value count must match the space");
        Self { space, values }
    }

    /// Nodal interpolation of `g`.
    pub fn interpolate(space: Arc<DgSpace>, g: impl Fn(f64) -> f64) -> Self {
        let values = space.points().into_iter().map(g).collect();
        Self { space, values }
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn cell(&self, j: usize) -> &[f64] {
        let p = self.space.dofs_per_cell();
        &self.values[j * p..(j + 1) * p]
    }

    pub fn eval_in_cell(&self, j: usize, xi: f64) -> f64 {
        self.space.basis.interpolate(self.cell(j), xi)
    }

    /// Trace at the right end of cell `j`, `v(S_{j+1}^−)`.
    pub fn right_trace(&self, j: usize) -> f64 {
        let b = &self.space.basis;
        self.cell(j).iter().enumerate().map(|(l, &c)| c * b.right(l)).sum()
    }

    /// Trace at the left end of cell `j`, `v(S_j^+)`.
    pub fn left_trace(&self, j: usize) -> f64 {
        let b = &self.space.basis;
        self.cell(j).iter().enumerate().map(|(l, &c)| c * b.left(l)).sum()
    }

    pub fn eval(&self, s: f64) -> f64 {
        let mesh = &self.space.mesh;
        let j = mesh.cell_of(s);
        self.eval_in_cell(j, mesh.to_reference(j, s))
    }

    /// In-cell derivative `∂_S` of the polynomial at `s`.
    pub fn deriv(&self, s: f64) -> f64 {
        let mesh = &self.space.mesh;
        let j = mesh.cell_of(s);
        let xi = mesh.to_reference(j, s);
        self.space.basis.interpolate_deriv(self.cell(j), xi) * 2.0 / mesh.width()
    }
}

/// Nodal interpolation of the payoff, requiring the strike to be a mesh node.
pub fn project_payoff(option: &OptionSpec, space: Arc<DgSpace>) -> Result<DGField> {
    let h = space.mesh.width();
    let ratio = option.strike / h;
    if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::MisalignedStrike {
            strike: option.strike,
            width: h,
        });
    }
    Ok(DGField::interpolate(space, |s| option.payoff(s)))
}
