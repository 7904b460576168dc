//! Implicit–explicit Runge–Kutta time stepping: diffusion implicit,
//! convection and source explicit, with a CFL-limited uniform step.

use serde::Serialize;

use crate::config::MarketParams;
use crate::error::Result;
use crate::ldg::{assemble_implicit, ImplicitOperator, LdgOperator, Mesh};

/// Additive Runge–Kutta pair with a shared implicit diagonal `γ`.
///
/// Stage 0 is the step's initial value; the implicit tableau has a zero
/// first column and diagonal `γ` on stages `1..=s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImexTableau {
    pub order: usize,
    pub gamma: f64,
    pub implicit: Vec<Vec<f64>>,
    pub explicit: Vec<Vec<f64>>,
    pub implicit_weights: Vec<f64>,
    pub explicit_weights: Vec<f64>,
    /// Stage abscissae as fractions of the step.
    pub nodes: Vec<f64>,
}

impl ImexTableau {
    /// Two-stage, second-order, L-stable DIRK(2,2,2) pair.
    pub fn order2() -> Self {
        let g = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        let kappa = 1.0 - 1.0 / (2.0 * g);
        Self {
            order: 2,
            gamma: g,
            implicit: vec![vec![], vec![0.0, g], vec![0.0, 1.0 - g, g]],
            explicit: vec![vec![], vec![g], vec![kappa, 1.0 - kappa]],
            implicit_weights: vec![0.0, 1.0 - g, g],
            explicit_weights: vec![kappa, 1.0 - kappa, 0.0],
            nodes: vec![0.0, g, 1.0],
        }
    }

    /// Three-stage, third-order pair.
    pub fn order3() -> Self {
        let c = Order3Constants::new();
        let g = c.gamma;
        Self {
            order: 3,
            gamma: g,
            implicit: vec![
                vec![],
                vec![0.0, g],
                vec![0.0, (1.0 - g) / 2.0, g],
                vec![0.0, c.beta1, c.beta2, g],
            ],
            explicit: vec![
                vec![],
                vec![g],
                vec![(1.0 + g) / 2.0 - c.alpha1, c.alpha1],
                vec![0.0, 1.0 - c.alpha2, c.alpha2],
            ],
            implicit_weights: vec![0.0, c.beta1, c.beta2, g],
            explicit_weights: vec![0.0, c.beta1, c.beta2, g],
            nodes: vec![0.0, g, (1.0 + g) / 2.0, 1.0],
        }
    }

    /// Scheme matching polynomial degree `k`: order `k + 1`.
    pub fn for_degree(degree: usize) -> Self {
        if degree >= 2 {
            Self::order3()
        } else {
            Self::order2()
        }
    }

    pub fn stages(&self) -> usize {
        self.nodes.len() - 1
    }

    fn explicit_needed(&self, stage: usize) -> bool {
        self.explicit.iter().skip(stage + 1).any(|row| row.get(stage).is_some_and(|&a| a != 0.0))
            || self.explicit_weights[stage] != 0.0
    }

    /// True when the update equals the last stage.
    fn stiffly_accurate(&self) -> bool {
        let s = self.stages();
        let mut explicit_last = self.explicit[s].clone();
        explicit_last.push(0.0);
        self.implicit[s] == self.implicit_weights && explicit_last == self.explicit_weights
    }
}

/// Constants of the third-order pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order3Constants {
    pub gamma: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl Order3Constants {
    pub fn new() -> Self {
        let g = 1767732205903.0 / 4055673282236.0;
        let beta1 = -1.5 * g * g + 4.0 * g - 0.25;
        let beta2 = 1.5 * g * g - 5.0 * g + 1.25;
        let alpha1 = -0.35;
        let alpha2 = (1.0 / 3.0 - 2.0 * g * g - 2.0 * beta2 * alpha1 * g) / (g * (1.0 - g));
        Self {
            gamma: g,
            beta1,
            beta2,
            alpha1,
            alpha2,
        }
    }
}

impl Default for Order3Constants {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub steps: usize,
    pub dt: f64,
}

impl TimeGrid {
    pub fn uniform(maturity: f64, steps: usize) -> Self {
        assert!(steps >= 1, "need at least one time step");
        Self {
            steps,
            dt: maturity / steps as f64,
        }
    }
}

/// CFL-limited step `δ* = C h / ((2k+1)|σ²−β| S̄)`.
pub fn cfl_step(mesh: &Mesh, degree: usize, market: &MarketParams, cfl: f64) -> Option<f64> {
    let speed = market.convection_coefficient().abs();
    (speed > 0.0).then(|| cfl * mesh.width() / ((2 * degree + 1) as f64 * speed * mesh.s_max()))
}

/// Number of steps: the largest integer strictly below `T/δ*` (at least 1).
///
/// Ratios within `1e-9` (relative) of an integer are snapped to it first.
pub fn select_time_grid(mesh: &Mesh, degree: usize, market: &MarketParams, cfl: f64, maturity: f64) -> TimeGrid {
    let steps = match cfl_step(mesh, degree, market, cfl) {
        Some(dt) => {
            let ratio = maturity / dt;
            let snapped = if (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) {
                ratio.round()
            } else {
                ratio
            };
            (snapped.ceil() as usize).saturating_sub(1).max(1)
        }
        None => (mesh.cells() / 10).max(4),
    };
    TimeGrid::uniform(maturity, steps)
}

/// Explicit part `C(u) + H(τ, u)` as a tested residual.
pub trait ExplicitTerm {
    fn eval(&self, u: &[f64], tau: f64) -> Vec<f64>;
}

impl<F> ExplicitTerm for F
where
    F: Fn(&[f64], f64) -> Vec<f64>,
{
    fn eval(&self, u: &[f64], tau: f64) -> Vec<f64> {
        self(u, tau)
    }
}

/// One IMEX scheme bound to an operator, a step size and its factorization.
#[derive(Debug, Clone)]
pub struct ImexStepper {
    op: LdgOperator,
    tableau: ImexTableau,
    dt: f64,
    implicit: ImplicitOperator,
    mass: Vec<f64>,
}

impl ImexStepper {
    pub fn new(op: LdgOperator, tableau: ImexTableau, dt: f64) -> Result<Self> {
        let implicit = assemble_implicit(&op, dt * tableau.gamma)?;
        let mass = op.space.mass();
        Ok(Self {
            op,
            tableau,
            dt,
            implicit,
            mass,
        })
    }

    pub fn tableau(&self) -> &ImexTableau {
        &self.tableau
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn operator(&self) -> &LdgOperator {
        &self.op
    }

    /// Advances `u` from `tau` to `tau + δ`.
    pub fn step(&self, u: &[f64], tau: f64, explicit: &impl ExplicitTerm) -> Vec<f64> {
        let t = &self.tableau;
        let s = t.stages();
        let dt = self.dt;
        let n = u.len();
        let mu: Vec<f64> = u.iter().zip(&self.mass).map(|(a, m)| a * m).collect();

        let mut stages: Vec<Vec<f64>> = vec![u.to_vec()];
        let mut diffusion: Vec<Vec<f64>> = vec![Vec::new()];
        let mut expl: Vec<Vec<f64>> = Vec::with_capacity(s + 1);
        for i in 0..=s {
            if i > 0 {
                let mut rhs = mu.clone();
                for j in 1..i {
                    let a = t.implicit[i][j];
                    if a != 0.0 {
                        axpy(&mut rhs, dt * a, &diffusion[j]);
                    }
                }
                for j in 0..i {
                    let a = t.explicit[i][j];
                    if a != 0.0 {
                        axpy(&mut rhs, dt * a, &expl[j]);
                    }
                }
                let ui = self.implicit.solve(&rhs);
                diffusion.push(self.op.apply_diffusion(&ui));
                stages.push(ui);
            }
            if t.explicit_needed(i) {
                expl.push(explicit.eval(&stages[i], tau + t.nodes[i] * dt));
            } else {
                expl.push(vec![0.0; n]);
            }
        }

        if t.stiffly_accurate() {
            return stages.pop().expect("at least one stage");
        }
        let mut rhs = mu;
        for j in 0..=s {
            if t.implicit_weights[j] != 0.0 {
                axpy(&mut rhs, dt * t.implicit_weights[j], &diffusion[j]);
            }
            if t.explicit_weights[j] != 0.0 {
                axpy(&mut rhs, dt * t.explicit_weights[j], &expl[j]);
            }
        }
        rhs.iter().zip(&self.mass).map(|(r, m)| r / m).collect()
    }
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}
