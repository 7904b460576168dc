//! Right-hand sides of the pricing equations `∂_t V̂ + A V̂ = F(t, S, V̂)` and
//! the coefficients of their conservative form in `τ = T − t`:
//! `∂_τ u + ∂_S f = ∂_S(a ∂_S u) + H`.

use serde::{Deserialize, Serialize};

use crate::analytic::bs_value;
use crate::capital::capital;
use crate::config::{CapitalParams, MarketParams, MtmConvention, OptionSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriverKind {
    /// Close-out and capital on the risk-free value `M = V`.
    LinearMtmRiskFree,
    /// Close-out and capital on the risky value `M = V̂`.
    NonlinearMtmRisky,
    /// Capital adjustment discounted at the hurdle rate, with `M = V`.
    GarciaKva,
}

impl DriverKind {
    pub fn needs_risk_free_value(self) -> bool {
        !matches!(self, DriverKind::NonlinearMtmRisky)
    }

    pub fn label(self) -> &'static str {
        match self {
            DriverKind::LinearMtmRiskFree => "linear",
            DriverKind::NonlinearMtmRisky => "nonlinear",
            DriverKind::GarciaKva => "garcia",
        }
    }
}

impl From<MtmConvention> for DriverKind {
    fn from(m: MtmConvention) -> Self {
        match m {
            MtmConvention::RiskFree => DriverKind::LinearMtmRiskFree,
            MtmConvention::Risky => DriverKind::NonlinearMtmRisky,
            MtmConvention::GarciaKva => DriverKind::GarciaKva,
        }
    }
}

/// Collateral `X = γ_X·M`.
pub fn collateral(m: f64, gamma_x: f64) -> f64 {
    gamma_x * m
}

/// Counterparty close-out `X + R^C (M−X)^+ + (M−X)^−`.
pub fn closeout_gc(m: f64, x: f64, recovery_c: f64) -> f64 {
    let net = m - x;
    x + recovery_c * net.max(0.0) + net.min(0.0)
}

/// Coefficient of the positive-exposure term `(M − X)^+` in `F`.
///
/// Equals `λ^C (1 − R^C) = r^C − q^C` under the zero-basis relation.
pub fn closeout_coefficient(market: &MarketParams) -> f64 {
    market.counterparty_loss_rate()
}

/// Driver `F(t, S, v)`. `v_riskfree` is the risk-free value `V(t, S)`,
/// required by the kinds that use `M = V`.
#[allow(clippy::too_many_arguments)]
pub fn driver_f(
    kind: DriverKind,
    t: f64,
    s: f64,
    v: f64,
    v_riskfree: Option<f64>,
    option: &OptionSpec,
    market: &MarketParams,
    capital_params: &CapitalParams,
) -> Result<f64> {
    let capital_rate = market.gamma_k - market.phi * market.r_b;
    let c = closeout_coefficient(market);
    Ok(match kind {
        DriverKind::LinearMtmRiskFree => {
            let vrf = v_riskfree.ok_or(Error::MissingRiskFreeValue)?;
            let x = collateral(vrf, market.gamma_x);
            (market.r_b + market.lambda_c) * v - market.lambda_c * vrf
                + c * (vrf - x).max(0.0)
                + (market.r_x - market.r_b) * x
                + capital_rate * capital(t, s, vrf, option, market, capital_params)
        }
        DriverKind::NonlinearMtmRisky => {
            let x = collateral(v, market.gamma_x);
            market.r_b * v
                + c * (v - x).max(0.0)
                + (market.r_x - market.r_b) * x
                + capital_rate * capital(t, s, v, option, market, capital_params)
        }
        DriverKind::GarciaKva => {
            let vrf = v_riskfree.ok_or(Error::MissingRiskFreeValue)?;
            (market.gamma_k + market.lambda_c) * v
                + (market.gamma_k - market.r_b) * capital(t, s, vrf, option, market, capital_params)
        }
    })
}

/// Source of the conservative form, `(σ² − β)v − F(T − τ, S, v)`.
#[allow(clippy::too_many_arguments)]
pub fn source_h(
    kind: DriverKind,
    tau: f64,
    s: f64,
    v: f64,
    v_riskfree: Option<f64>,
    option: &OptionSpec,
    market: &MarketParams,
    capital_params: &CapitalParams,
) -> Result<f64> {
    let f = driver_f(kind, option.maturity - tau, s, v, v_riskfree, option, market, capital_params)?;
    Ok(market.convection_coefficient() * v - f)
}

/// Diffusion, flux and source coefficients of the conservative form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservativeCoefficients {
    pub sigma: f64,
    pub beta: f64,
}

impl ConservativeCoefficients {
    pub fn new(market: &MarketParams) -> Self {
        Self {
            sigma: market.sigma,
            beta: market.beta(),
        }
    }

    pub fn speed(&self) -> f64 {
        self.sigma * self.sigma - self.beta
    }

    /// `a(S) = σ²S²/2`.
    pub fn diffusion(&self, s: f64) -> f64 {
        0.5 * self.sigma * self.sigma * s * s
    }

    /// `f(S, v) = (σ² − β) S v`.
    pub fn flux(&self, s: f64, v: f64) -> f64 {
        self.speed() * s * v
    }

    /// `G(S, q) = a(S) q`.
    pub fn diffusive_flux(&self, s: f64, q: f64) -> f64 {
        self.diffusion(s) * q
    }
}

/// A pricing-equation right-hand side `F(t, S, v)`.
pub trait Driver: Send + Sync {
    fn eval(&self, t: f64, s: f64, v: f64) -> f64;
}

impl<F> Driver for F
where
    F: Fn(f64, f64, f64) -> f64 + Send + Sync,
{
    fn eval(&self, t: f64, s: f64, v: f64) -> f64 {
        self(t, s, v)
    }
}

/// One of the three model drivers, with the risk-free value taken from the
/// closed form.
#[derive(Debug, Clone, Copy)]
pub struct XvaDriver {
    pub kind: DriverKind,
    pub option: OptionSpec,
    pub market: MarketParams,
    pub capital: CapitalParams,
}

impl XvaDriver {
    pub fn new(kind: DriverKind, option: OptionSpec, market: MarketParams, capital: CapitalParams) -> Self {
        Self {
            kind,
            option,
            market,
            capital,
        }
    }
}

impl Driver for XvaDriver {
    fn eval(&self, t: f64, s: f64, v: f64) -> f64 {
        let vrf = self
            .kind
            .needs_risk_free_value()
            .then(|| bs_value(&self.option, s, t, &self.market));
        driver_f(self.kind, t, s, v, vrf, &self.option, &self.market, &self.capital)
            .expect("risk-free value supplied for every kind that needs it")
    }
}

/// Capital-only driver `(r^B + λ^C) v + (γ^K − φ r^B) K(t, S, V)`.
#[derive(Debug, Clone, Copy)]
pub struct CapitalCostDriver {
    pub option: OptionSpec,
    pub market: MarketParams,
    pub capital: CapitalParams,
}

impl Driver for CapitalCostDriver {
    fn eval(&self, t: f64, s: f64, v: f64) -> f64 {
        let m = &self.market;
        let vrf = bs_value(&self.option, s, t, m);
        (m.r_b + m.lambda_c) * v
            + (m.gamma_k - m.phi * m.r_b) * capital(t, s, vrf, &self.option, m, &self.capital)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capital::capital_requirement;

    fn setup() -> (OptionSpec, MarketParams, CapitalParams) {
        (OptionSpec::default(), MarketParams::default(), CapitalParams::default())
    }

    #[test]
    fn collateral_and_closeout_examples() {
        assert_eq!(collateral(10.0, 0.0), 0.0);
        assert_eq!(collateral(7.0, 1.0), 7.0);
        assert_eq!(collateral(10.0, 0.9), 9.0);
        assert_eq!(closeout_gc(4.0, 4.0, 0.78), 4.0);
        assert!((closeout_gc(10.0, 9.0, 0.78) - 9.78).abs() < 1e-14);
        assert_eq!(closeout_gc(-5.0, 0.0, 0.78), -5.0);
    }

    #[test]
    fn closeout_coefficient_matches_rate_gap() {
        let m = MarketParams::default();
        assert!((closeout_coefficient(&m) - (m.r_c - m.q_c)).abs() < 1e-12);
        assert!(((m.q_c - m.r_c) + m.lambda_c * (1.0 - m.recovery_c)).abs() < 1e-12);
    }

    #[test]
    fn linear_driver_close_out_is_the_substituted_form() {
        let (o, m, c) = setup();
        let (t, s, v, vrf) = (0.3, 17.0, 2.5, 3.1);
        let x = 0.9 * vrf;
        let direct = (m.r_b + m.lambda_c) * v - m.lambda_c * closeout_gc(vrf, x, m.recovery_c)
            + (m.r_x - m.r_b) * x
            + (m.gamma_k - m.r_b) * capital(t, s, vrf, &o, &m, &c);
        let f = driver_f(DriverKind::LinearMtmRiskFree, t, s, v, Some(vrf), &o, &m, &c).unwrap();
        assert!((f - direct).abs() < 1e-13);
    }

    #[test]
    fn zero_state_gives_zero_driver() {
        let (o, m, c) = setup();
        let f = driver_f(DriverKind::NonlinearMtmRisky, 0.0, 0.0, 0.0, None, &o, &m, &c).unwrap();
        assert_eq!(f, 0.0);
        let h = source_h(DriverKind::NonlinearMtmRisky, 0.5, 0.0, 0.0, None, &o, &m, &c).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn missing_risk_free_value_is_an_error() {
        let (o, m, c) = setup();
        for kind in [DriverKind::LinearMtmRiskFree, DriverKind::GarciaKva] {
            assert!(matches!(
                driver_f(kind, 0.0, 15.0, 1.0, None, &o, &m, &c),
                Err(Error::MissingRiskFreeValue)
            ));
        }
    }

    #[test]
    fn linear_slope_in_v() {
        let (o, m, c) = setup();
        let f = |v| driver_f(DriverKind::LinearMtmRiskFree, 0.2, 15.0, v, Some(2.0), &o, &m, &c).unwrap();
        let slope = f(3.0) - f(2.0);
        assert!((slope - (m.r_b + 0.0103)).abs() < 1e-12);
    }

    /// Term-by-term evaluation at the reference point.
    #[test]
    fn nonlinear_driver_matches_term_oracle() {
        let (o, m, c) = setup();
        let v = bs_value(&o, 15.0, 0.0, &m);
        let x = 0.9 * v;
        let k = capital_requirement(0.0, 15.0, v, &o, &m, &c).k_total;
        let expect = 0.060399 * v + 0.0103 * 0.22 * (v - x) + (0.07 - 0.060399) * x + (0.15 - 0.060399) * k;
        let f = driver_f(DriverKind::NonlinearMtmRisky, 0.0, 15.0, v, None, &o, &m, &c).unwrap();
        assert!((f - expect).abs() < 1e-12);
    }

    #[test]
    fn source_examples() {
        let (o, m, c) = setup();
        let f = driver_f(DriverKind::NonlinearMtmRisky, 0.75, 20.0, 6.0, None, &o, &m, &c).unwrap();
        let h = source_h(DriverKind::NonlinearMtmRisky, 0.25, 20.0, 6.0, None, &o, &m, &c).unwrap();
        assert!((h - (0.03 * 6.0 - f)).abs() < 1e-14);
        let flat = MarketParams {
            sigma: 0.06f64.sqrt(),
            ..m
        };
        let f = driver_f(DriverKind::NonlinearMtmRisky, 0.75, 20.0, 6.0, None, &o, &flat, &c).unwrap();
        let h = source_h(DriverKind::NonlinearMtmRisky, 0.25, 20.0, 6.0, None, &o, &flat, &c).unwrap();
        assert!((h + f).abs() < 1e-12);
    }

    #[test]
    fn conservative_coefficients_vanish_at_origin() {
        let k = ConservativeCoefficients::new(&MarketParams::default());
        assert_eq!(k.diffusion(0.0), 0.0);
        assert_eq!(k.flux(0.0, 3.0), 0.0);
        assert!((k.speed() - 0.03).abs() < 1e-15);
    }
}
