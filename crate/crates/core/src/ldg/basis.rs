use crate::quadrature::gauss_legendre;

/// Nodal Lagrange basis on the `k + 1` Gauss–Legendre points of `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    degree: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `deriv[i][l] = φ_l'(ξ_i)`.
    deriv: Vec<Vec<f64>>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl Basis {
    pub fn new(degree: usize) -> Self {
        let rule = gauss_legendre(degree + 1);
        let mut basis = Self {
            degree,
            nodes: rule.nodes,
            weights: rule.weights,
            deriv: Vec::new(),
            left: Vec::new(),
            right: Vec::new(),
        };
        let n = degree + 1;
        basis.deriv = (0..n)
            .map(|i| (0..n).map(|l| basis.lagrange_deriv(l, basis.nodes[i])).collect())
            .collect();
        basis.left = (0..n).map(|l| basis.lagrange(l, -1.0)).collect();
        basis.right = (0..n).map(|l| basis.lagrange(l, 1.0)).collect();
        basis
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn deriv(&self, i: usize, l: usize) -> f64 {
        self.deriv[i][l]
    }

    /// `φ_l(−1)`.
    pub fn left(&self, l: usize) -> f64 {
        self.left[l]
    }

    /// `φ_l(1)`.
    pub fn right(&self, l: usize) -> f64 {
        self.right[l]
    }

    pub fn lagrange(&self, l: usize, xi: f64) -> f64 {
        let xl = self.nodes[l];
        self.nodes
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != l)
            .map(|(_, &xm)| (xi - xm) / (xl - xm))
            .product()
    }

    pub fn lagrange_deriv(&self, l: usize, xi: f64) -> f64 {
        let xl = self.nodes[l];
        let mut total = 0.0;
        for (m, &xm) in self.nodes.iter().enumerate() {
            if m == l {
                continue;
            }
            let mut term = 1.0 / (xl - xm);
            for (p, &xp) in self.nodes.iter().enumerate() {
                if p != l && p != m {
                    term *= (xi - xp) / (xl - xp);
                }
            }
            total += term;
        }
        total
    }

    /// Value at `xi` of the polynomial with nodal values `coeffs`.
    pub fn interpolate(&self, coeffs: &[f64], xi: f64) -> f64 {
        coeffs.iter().enumerate().map(|(l, &c)| c * self.lagrange(l, xi)).sum()
    }

    /// Reference-coordinate derivative at `xi` of the nodal polynomial.
    pub fn interpolate_deriv(&self, coeffs: &[f64], xi: f64) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(l, &c)| c * self.lagrange_deriv(l, xi))
            .sum()
    }
}
