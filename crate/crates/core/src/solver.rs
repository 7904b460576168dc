//! Full pricing runs: the LDG-IMEX march from expiry to today, XVA
//! extraction, Greeks, the expectation-based decomposition of the linear
//! adjustment and the hurdle-rate scaling check.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::analytic::{bs_value, expectation_with, LognormalKernel};
use crate::capital::capital;
use crate::config::{CapitalParams, MarketParams, MtmConvention, OptionSpec, RunConfig};
use crate::drivers::{closeout_coefficient, collateral, CapitalCostDriver, Driver, DriverKind, XvaDriver};
use crate::error::{invalid, Error, Result};
use crate::imex::{select_time_grid, ImexStepper, ImexTableau, TimeGrid};
use crate::ldg::{project_payoff, DGField, DgSpace, Diffusion, FluxVariant, LdgOperator};
use crate::quadrature::{gauss_hermite_normal, simpson};

/// Terminal condition of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminal {
    Payoff,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMeta {
    pub cells: usize,
    pub degree: usize,
    pub steps: usize,
    pub dt: f64,
    pub variant: FluxVariant,
    pub driver: String,
    pub runtime_secs: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub value: DGField,
    pub gradient: DGField,
    pub meta: RunMeta,
    pub option: OptionSpec,
    pub market: MarketParams,
}

impl SolveResult {
    pub fn value(&self, s: f64) -> f64 {
        self.value.eval(s)
    }

    pub fn delta(&self, s: f64) -> f64 {
        self.gradient.eval(s)
    }

    pub fn gamma(&self, s: f64) -> f64 {
        self.gradient.deriv(s)
    }

    /// Risky value minus the closed-form risk-free value.
    pub fn xva(&self, s: f64) -> f64 {
        self.value(s) - bs_value(&self.option, s, 0.0, &self.market)
    }
}

/// Step count for a config: explicit override, else the CFL rule.
pub fn time_grid(config: &RunConfig) -> TimeGrid {
    match config.time_steps {
        Some(steps) => TimeGrid::uniform(config.option.maturity, steps),
        None => {
            let mesh = crate::ldg::Mesh::new(config.s_max(), config.cells);
            select_time_grid(&mesh, config.degree, &config.market, config.cfl, config.option.maturity)
        }
    }
}

pub fn operator_for(config: &RunConfig) -> LdgOperator {
    let space = DgSpace::new(config.s_max(), config.cells, config.degree);
    LdgOperator::new(
        space,
        FluxVariant::from(config.option.kind),
        Diffusion::BlackScholes {
            sigma: config.market.sigma,
        },
        config.market.convection_coefficient(),
    )
}

/// Driver and terminal condition implied by the config's MTM convention.
pub fn model_driver(config: &RunConfig) -> (XvaDriver, Terminal) {
    let kind = DriverKind::from(config.mtm);
    let terminal = if config.mtm == MtmConvention::GarciaKva {
        Terminal::Zero
    } else {
        Terminal::Payoff
    };
    (XvaDriver::new(kind, config.option, config.market, config.capital), terminal)
}

pub fn solve(config: &RunConfig) -> Result<SolveResult> {
    let (driver, terminal) = model_driver(config);
    solve_with(config, &driver, terminal, driver.kind.label())
}

/// Solves `∂_t V̂ + A V̂ = F` backwards from `T` with an arbitrary driver.
pub fn solve_with(config: &RunConfig, driver: &dyn Driver, terminal: Terminal, label: &str) -> Result<SolveResult> {
    config.validate()?;
    let started = Instant::now();
    let op = operator_for(config);
    let space = op.space.clone();
    let grid = time_grid(config);
    let tableau = ImexTableau::for_degree(config.degree);
    let stepper = ImexStepper::new(op.clone(), tableau, grid.dt)?;

    let mut u = match terminal {
        Terminal::Payoff if config.require_strike_node => project_payoff(&config.option, space.clone())?,
        Terminal::Payoff => DGField::interpolate(space.clone(), |s| config.option.payoff(s)),
        Terminal::Zero => DGField::zeros(space.clone()),
    }
    .into_values();

    let maturity = config.option.maturity;
    let speed = config.market.convection_coefficient();
    let explicit = |v: &[f64], tau: f64| -> Vec<f64> {
        let t = maturity - tau;
        let mut r = op.form_c(v);
        let h = op.form_h(v, |s, x| speed * x - driver.eval(t, s, x));
        for (a, b) in r.iter_mut().zip(h) {
            *a += b;
        }
        r
    };
    let p = space.dofs_per_cell();
    for n in 0..grid.steps {
        u = stepper.step(&u, n as f64 * grid.dt, &explicit);
        if let Some(i) = u.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: n + 1, cell: i / p });
        }
    }

    let gradient = DGField::from_values(space.clone(), op.gradient(&u));
    Ok(SolveResult {
        value: DGField::from_values(space, u),
        gradient,
        meta: RunMeta {
            cells: config.cells,
            degree: config.degree,
            steps: grid.steps,
            dt: grid.dt,
            variant: op.variant,
            driver: label.to_string(),
            runtime_secs: started.elapsed().as_secs_f64(),
        },
        option: config.option,
        market: config.market,
    })
}

/// Solve with `F = r v`: reproduces the risk-free value.
pub fn solve_risk_free(config: &RunConfig) -> Result<SolveResult> {
    let r = config.market.r;
    let driver = move |_t: f64, _s: f64, v: f64| r * v;
    solve_with(config, &driver, Terminal::Payoff, "risk_free")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreekRow {
    pub s: f64,
    pub value: f64,
    pub delta: f64,
    pub gamma: f64,
    pub xva: f64,
}

/// Samples value, Greeks and XVA on `spots`.
pub fn greeks(result: &SolveResult, spots: &[f64]) -> Vec<GreekRow> {
    spots
        .iter()
        .map(|&s| GreekRow {
            s,
            value: result.value(s),
            delta: result.delta(s),
            gamma: result.gamma(s),
            xva: result.xva(s),
        })
        .collect()
}

/// Plot grid: every mesh node and every cell midpoint.
pub fn plot_grid(result: &SolveResult) -> Vec<f64> {
    let mesh = &result.value.space().mesh;
    let mut out = Vec::with_capacity(2 * mesh.cells() + 1);
    for j in 0..mesh.cells() {
        out.push(mesh.node(j));
        out.push(mesh.node(j) + 0.5 * mesh.width());
    }
    out.push(mesh.s_max());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XvaBreakdown {
    pub cva: f64,
    pub fbva: f64,
    pub fcva: f64,
    pub cra: f64,
    pub kva: f64,
}

impl XvaBreakdown {
    pub fn total(&self) -> f64 {
        -self.cva + self.fbva - self.fcva - self.cra - self.kva
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreakdownQuadrature {
    /// Even number of Simpson intervals on `[0, T]`.
    pub time_intervals: usize,
    pub hermite_order: usize,
}

impl Default for BreakdownQuadrature {
    fn default() -> Self {
        Self {
            time_intervals: 200,
            hermite_order: 64,
        }
    }
}

/// Expectation form of the linear (`M = V`) adjustment at `t = 0`.
pub fn xva_breakdown(
    s: f64,
    option: &OptionSpec,
    market: &MarketParams,
    capital_params: &CapitalParams,
    quad: BreakdownQuadrature,
) -> XvaBreakdown {
    let hermite = gauss_hermite_normal(quad.hermite_order);
    let time = simpson(0.0, option.maturity, quad.time_intervals);
    let loss = closeout_coefficient(market);
    let funding = market.funding_spread();
    let mut b = XvaBreakdown {
        cva: 0.0,
        fbva: 0.0,
        fcva: 0.0,
        cra: 0.0,
        kva: 0.0,
    };
    for (&u, &w) in time.nodes.iter().zip(&time.weights) {
        let disc = w * (-(market.r_b + market.lambda_c) * u).exp();
        let kernel = LognormalKernel::new(s, market, u);
        let v_at = |z: f64| bs_value(option, z, u, market);
        let net = |z: f64| {
            let v = v_at(z);
            v - collateral(v, market.gamma_x)
        };
        let pos = expectation_with(&hermite, |z| net(z).max(0.0), &kernel);
        let neg = expectation_with(&hermite, |z| net(z).min(0.0), &kernel);
        let x = expectation_with(&hermite, |z| collateral(v_at(z), market.gamma_x), &kernel);
        let k = expectation_with(&hermite, |z| capital(u, z, v_at(z), option, market, capital_params), &kernel);
        b.cva += disc * loss * pos;
        b.fbva -= disc * funding * neg;
        b.fcva += disc * funding * pos;
        b.cra += disc * (market.r_x - market.r) * x;
        b.kva += disc * (market.gamma_k - market.phi * market.r_b) * k;
    }
    b
}

#[derive(Debug, Clone)]
pub struct GarciaCheck {
    /// Hurdle-rate adjustment `U` at `t = 0`.
    pub adjustment: SolveResult,
    /// Funding-rate capital adjustment `U′` at `t = 0`.
    pub reference: SolveResult,
    pub scale: f64,
    pub max_abs_diff: f64,
}

/// Compares `U` against `e^{−(γ^K − r^B)T} U′` at every mesh point.
pub fn garcia_scaling_check(config: &RunConfig) -> Result<GarciaCheck> {
    if config.market.phi != 1.0 {
        return Err(invalid("phi", "scaling identity requires phi = 1"));
    }
    let mut cfg = *config;
    cfg.mtm = MtmConvention::GarciaKva;
    let (driver, _) = model_driver(&cfg);
    let adjustment = solve_with(&cfg, &driver, Terminal::Zero, "garcia")?;
    let prime = CapitalCostDriver {
        option: cfg.option,
        market: cfg.market,
        capital: cfg.capital,
    };
    let reference = solve_with(&cfg, &prime, Terminal::Zero, "capital_cost")?;
    let m = &cfg.market;
    let scale = (-(m.gamma_k - m.r_b) * cfg.option.maturity).exp();
    let max_abs_diff = adjustment
        .value
        .values()
        .iter()
        .zip(reference.value.values())
        .fold(0.0f64, |acc, (u, up)| acc.max((u - scale * up).abs()));
    Ok(GarciaCheck {
        adjustment,
        reference,
        scale,
        max_abs_diff,
    })
}

/// Sample space shared by fields of one configuration.
pub fn space_for(config: &RunConfig) -> Arc<DgSpace> {
    DgSpace::new(config.s_max(), config.cells, config.degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OptionKind;

    fn config(kind: OptionKind, cells: usize) -> RunConfig {
        RunConfig {
            option: OptionSpec {
                kind,
                ..OptionSpec::default()
            },
            cells,
            ..RunConfig::default()
        }
    }

    #[test]
    fn risk_free_hook_matches_closed_form_on_coarse_mesh() {
        for kind in [OptionKind::Call, OptionKind::Put] {
            let cfg = config(kind, 160);
            let res = solve_risk_free(&cfg).unwrap();
            for &s in &[5.0, 10.0, 15.0, 20.0, 30.0] {
                let exact = bs_value(&cfg.option, s, 0.0, &cfg.market);
                assert!((res.value(s) - exact).abs() < 1e-2, "{kind:?} S={s}");
            }
        }
    }

    #[test]
    fn solves_are_deterministic() {
        let cfg = config(OptionKind::Put, 40);
        let a = solve(&cfg).unwrap();
        let b = solve(&cfg).unwrap();
        assert_eq!(a.value.values(), b.value.values());
    }

    #[test]
    fn zero_capital_gives_zero_garcia_fields() {
        let mut cfg = config(OptionKind::Call, 40);
        cfg.capital = CapitalParams::zero();
        let check = garcia_scaling_check(&cfg).unwrap();
        assert_eq!(check.max_abs_diff, 0.0);
        assert!(check.adjustment.value.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn garcia_requires_full_capital_funding() {
        let mut cfg = config(OptionKind::Call, 40);
        cfg.market.phi = 0.5;
        assert!(garcia_scaling_check(&cfg).is_err());
    }

    #[test]
    fn breakdown_degenerate_cases() {
        let o = OptionSpec::default();
        let c = CapitalParams::default();
        let quad = BreakdownQuadrature {
            time_intervals: 20,
            hermite_order: 16,
        };
        let uncollateralized = MarketParams {
            gamma_x: 0.0,
            ..MarketParams::default()
        };
        assert_eq!(xva_breakdown(15.0, &o, &uncollateralized, &c, quad).cra, 0.0);
        let no_issuer_risk = MarketParams {
            lambda_b: 0.0,
            r_b: 0.06,
            ..MarketParams::default()
        };
        let b = xva_breakdown(15.0, &o, &no_issuer_risk, &c, quad);
        assert_eq!(b.fbva, 0.0);
        assert_eq!(b.fcva, 0.0);
        let d = xva_breakdown(15.0, &o, &MarketParams::default(), &c, quad);
        assert!(d.cva > 0.0 && d.fcva > 0.0 && d.cra > 0.0 && d.kva > 0.0 && d.fbva >= 0.0);
    }

    #[test]
    fn plot_grid_has_nodes_and_midpoints() {
        let res = solve(&config(OptionKind::Call, 8)).unwrap();
        let g = plot_grid(&res);
        assert_eq!(g.len(), 17);
        assert_eq!(g[1], 3.75);
        assert_eq!(*g.last().unwrap(), 60.0);
    }
}
