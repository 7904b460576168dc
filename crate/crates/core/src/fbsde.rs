//! Stratified least-squares regression Monte Carlo for the forward-backward
//! SDE `dS = βS dt + σS dW`, `−dY = F(t, S, Y) dt − Z dW`, `Y_T = g(S_T)`.
//!
//! At every time step each stratum of the log-spot domain receives fresh
//! starting points, uniform in `ln S`, which take one exact lognormal step.
//! The one-step response `Y_{i+1} − Δt·F(t_{i+1}, S_{i+1}, Y_{i+1})` is
//! regressed on `a + bS` inside the stratum. Normal increments come in
//! antithetic pairs. Independent batches give a batch-means standard error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::bs_value;
use crate::config::{MarketParams, OptionSpec, RunConfig};
use crate::drivers::Driver;
use crate::error::{invalid, Result};
use crate::solver::{model_driver, Terminal};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionGrid {
    pub log_min: f64,
    pub log_max: f64,
    pub strata: usize,
    pub paths_per_stratum: usize,
    pub steps: usize,
    pub batches: usize,
    pub maturity: f64,
}

impl Default for RegressionGrid {
    fn default() -> Self {
        Self {
            log_min: -5.0,
            log_max: 5.0,
            strata: 500,
            paths_per_stratum: 10_000,
            steps: 20,
            batches: 10,
            maturity: 1.0,
        }
    }
}

impl RegressionGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.log_max > self.log_min) {
            return Err(invalid("log_max", "must exceed log_min"));
        }
        if self.strata == 0 || self.steps == 0 {
            return Err(invalid("strata", "strata and steps must be positive"));
        }
        if self.batches < 2 {
            return Err(invalid("batches", "at least two batches are needed for an error estimate"));
        }
        if self.paths_per_stratum < 2 * self.batches {
            return Err(invalid("paths_per_stratum", "need at least two paths per stratum and batch"));
        }
        if !(self.maturity > 0.0) {
            return Err(invalid("maturity", "must be positive"));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.maturity / self.steps as f64
    }

    fn log_width(&self) -> f64 {
        (self.log_max - self.log_min) / self.strata as f64
    }

    pub fn paths_per_batch(&self) -> usize {
        self.paths_per_stratum / self.batches
    }

    /// Stratum containing `s`; spots outside the domain map to the edge strata.
    pub fn stratum_of(&self, s: f64) -> usize {
        if !(s > 0.0) {
            return 0;
        }
        let j = ((s.ln() - self.log_min) / self.log_width()).floor();
        j.clamp(0.0, (self.strata - 1) as f64) as usize
    }

    pub fn stratum_bounds(&self, j: usize) -> (f64, f64) {
        let w = self.log_width();
        let lo = self.log_min + j as f64 * w;
        (lo.exp(), (lo + w).exp())
    }
}

/// Seeded source of one-step lognormal transitions.
///
/// Every `(step, batch, stratum)` triple owns a separate ChaCha stream, so
/// draws do not depend on evaluation order or thread count.
#[derive(Debug, Clone, Copy)]
pub struct PathEnsemble {
    pub grid: RegressionGrid,
    pub drift: f64,
    pub vol: f64,
    pub seed: u64,
}

pub fn simulate_forward(grid: &RegressionGrid, market: &MarketParams, seed: u64) -> Result<PathEnsemble> {
    grid.validate()?;
    Ok(PathEnsemble {
        grid: *grid,
        drift: market.beta(),
        vol: market.sigma,
        seed,
    })
}

impl PathEnsemble {
    fn rng(&self, step: usize, batch: usize, stratum: usize) -> ChaCha8Rng {
        let g = &self.grid;
        let key = ((step * g.batches + batch) * g.strata + stratum) as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(key);
        rng
    }

    fn advance(&self, s: f64, h: f64, z: f64) -> f64 {
        s * ((self.drift - 0.5 * self.vol * self.vol) * h + self.vol * h.sqrt() * z).exp()
    }

    /// Starting points in the stratum and their states one step later, in
    /// antithetic pairs sharing a starting point.
    pub fn transitions(&self, step: usize, batch: usize, stratum: usize) -> (Vec<f64>, Vec<f64>) {
        let g = &self.grid;
        let mut rng = self.rng(step, batch, stratum);
        let w = g.log_width();
        let lo = g.log_min + stratum as f64 * w;
        let dt = g.dt();
        let n = g.paths_per_batch();
        let mut starts = Vec::with_capacity(n);
        let mut ends = Vec::with_capacity(n);
        while starts.len() < n {
            let s0 = (lo + w * rng.random::<f64>()).exp();
            let z: f64 = rng.sample(StandardNormal);
            starts.push(s0);
            ends.push(self.advance(s0, dt, z));
            if starts.len() < n {
                starts.push(s0);
                ends.push(self.advance(s0, dt, -z));
            }
        }
        (starts, ends)
    }

    /// Full trajectories `S_{t_0}, …, S_{t_L}` from one batch of a stratum.
    pub fn paths(&self, batch: usize, stratum: usize) -> Vec<Vec<f64>> {
        let g = &self.grid;
        let (starts, _) = self.transitions(0, batch, stratum);
        let mut rng = self.rng(g.steps, batch, stratum);
        let dt = g.dt();
        starts
            .into_iter()
            .map(|s0| {
                let mut path = Vec::with_capacity(g.steps + 1);
                path.push(s0);
                let mut s = s0;
                for _ in 0..g.steps {
                    s = self.advance(s, dt, rng.sample(StandardNormal));
                    path.push(s);
                }
                path
            })
            .collect()
    }
}

/// Per-stratum affine fit `a + bS`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
}

impl LinearFit {
    pub fn eval(&self, s: f64) -> f64 {
        self.intercept + self.slope * s
    }
}

/// Least squares on `(1, x)`; falls back to the sample mean if the design
/// is degenerate.
pub fn fit_linear(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    if sxx <= 1e-14 * n * (mx * mx).max(1e-300) {
        return LinearFit {
            intercept: my,
            slope: 0.0,
        };
    }
    let slope = sxy / sxx;
    LinearFit {
        intercept: my - slope * mx,
        slope,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FbsdeSolution {
    pub grid: RegressionGrid,
    /// `fits[batch][stratum]` at `t = 0`.
    pub fits: Vec<Vec<LinearFit>>,
}

impl FbsdeSolution {
    fn batch_values(&self, s: f64) -> impl Iterator<Item = f64> + '_ {
        let j = self.grid.stratum_of(s);
        self.fits.iter().map(move |f| f[j].eval(s))
    }

    pub fn value(&self, s: f64) -> f64 {
        self.batch_values(s).sum::<f64>() / self.fits.len() as f64
    }

    /// Batch-means standard error of [`value`](Self::value).
    pub fn stderr(&self, s: f64) -> f64 {
        let b = self.fits.len() as f64;
        let mean = self.value(s);
        let var = self.batch_values(s).map(|v| (v - mean).powi(2)).sum::<f64>() / (b - 1.0);
        (var / b).sqrt()
    }
}

/// Backward induction with the driver evaluated explicitly at `t_{i+1}`.
pub fn solve_backward(ensemble: &PathEnsemble, driver: &dyn Driver, terminal: &(dyn Fn(f64) -> f64 + Sync)) -> FbsdeSolution {
    let g = ensemble.grid;
    let dt = g.dt();
    let mut fits: Option<Vec<Vec<LinearFit>>> = None;
    for step in (0..g.steps).rev() {
        let t_next = (step + 1) as f64 * dt;
        let prev = fits.as_ref();
        let flat: Vec<LinearFit> = (0..g.batches * g.strata)
            .into_par_iter()
            .map(|idx| {
                let (batch, stratum) = (idx / g.strata, idx % g.strata);
                let (starts, ends) = ensemble.transitions(step, batch, stratum);
                let response: Vec<f64> = ends
                    .iter()
                    .map(|&s| {
                        let y = match prev {
                            None => terminal(s),
                            Some(f) => f[batch][g.stratum_of(s)].eval(s),
                        };
                        y - dt * driver.eval(t_next, s, y)
                    })
                    .collect();
                fit_linear(&starts, &response)
            })
            .collect();
        fits = Some(flat.chunks(g.strata).map(<[LinearFit]>::to_vec).collect());
    }
    FbsdeSolution {
        grid: g,
        fits: fits.expect("at least one time step"),
    }
}

/// Monte Carlo value adjustment at a set of spots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FbsdeRow {
    pub spot: f64,
    pub value: f64,
    pub xva: f64,
    pub stderr: f64,
}

/// Solves the model driver of `config` and reports `Ŷ_0(S) − V(0, S)`.
pub fn fbsde_xva(config: &RunConfig, grid: &RegressionGrid, seed: u64, spots: &[f64]) -> Result<Vec<FbsdeRow>> {
    config.validate()?;
    let grid = RegressionGrid {
        maturity: config.option.maturity,
        ..*grid
    };
    let ensemble = simulate_forward(&grid, &config.market, seed)?;
    let (driver, terminal) = model_driver(config);
    let option: OptionSpec = config.option;
    let g = move |s: f64| match terminal {
        Terminal::Payoff => option.payoff(s),
        Terminal::Zero => 0.0,
    };
    let sol = solve_backward(&ensemble, &driver, &g);
    Ok(spots
        .iter()
        .map(|&s| {
            let value = sol.value(s);
            FbsdeRow {
                spot: s,
                value,
                xva: value - bs_value(&option, s, 0.0, &config.market),
                stderr: sol.stderr(s),
            }
        })
        .collect())
}
