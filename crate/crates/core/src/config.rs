//! Model parameters, run configuration and the flat JSON config format.
//!
//! Every field has a default, so an empty JSON object `{}` yields the
//! reference setup (K = 15, T = 1, σ = 0.3, ...). Credit spreads follow the
//! zero-basis relations `λ = (yield − repo)/(1 − R)`; any two members of a
//! triple may be supplied and the third is derived.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Absolute tolerance for the zero-basis identities.
pub const ZERO_BASIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptionKind {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    pub kind: OptionKind,
    pub strike: f64,
    pub maturity: f64,
}

impl OptionSpec {
    pub fn new(kind: OptionKind, strike: f64, maturity: f64) -> Result<Self> {
        let spec = Self {
            kind,
            strike,
            maturity,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strike > 0.0 && self.strike.is_finite()) {
            return Err(invalid("strike", "must be positive"));
        }
        if !(self.maturity > 0.0 && self.maturity.is_finite()) {
            return Err(invalid("maturity", "must be positive"));
        }
        Ok(())
    }

    pub fn payoff(&self, s: f64) -> f64 {
        payoff(self, s)
    }
}

impl Default for OptionSpec {
    fn default() -> Self {
        Self {
            kind: OptionKind::Call,
            strike: 15.0,
            maturity: 1.0,
        }
    }
}

/// Terminal payoff `(S−K)^+` or `(K−S)^+`.
pub fn payoff(option: &OptionSpec, s: f64) -> f64 {
    match option.kind {
        OptionKind::Call => (s - option.strike).max(0.0),
        OptionKind::Put => (option.strike - s).max(0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    pub sigma: f64,
    pub r: f64,
    pub r_b: f64,
    pub lambda_b: f64,
    pub recovery_b: f64,
    pub r_c: f64,
    pub q_c: f64,
    pub lambda_c: f64,
    pub recovery_c: f64,
    pub q_s: f64,
    pub gamma_s: f64,
    pub r_x: f64,
    pub gamma_x: f64,
    pub gamma_k: f64,
    pub phi: f64,
}

impl Default for MarketParams {
    fn default() -> Self {
        let r = 0.06;
        let lambda_b = 0.00133;
        let recovery_b = 0.7;
        let lambda_c = 0.0103;
        let recovery_c = 0.78;
        Self {
            sigma: 0.3,
            r,
            r_b: r + lambda_b * (1.0 - recovery_b),
            lambda_b,
            recovery_b,
            r_c: r + lambda_c * (1.0 - recovery_c),
            q_c: r,
            lambda_c,
            recovery_c,
            q_s: 0.06,
            gamma_s: 0.0,
            r_x: 0.07,
            gamma_x: 0.9,
            gamma_k: 0.15,
            phi: 1.0,
        }
    }
}

impl MarketParams {
    /// Stock drift under the pricing measure, `q_S − γ_S`.
    pub fn beta(&self) -> f64 {
        self.q_s - self.gamma_s
    }

    /// Convection speed coefficient `σ² − β` of the conservative form.
    pub fn convection_coefficient(&self) -> f64 {
        self.sigma * self.sigma - self.beta()
    }

    /// Loss rate on positive counterparty exposure, `λ^C (1 − R^C)`.
    pub fn counterparty_loss_rate(&self) -> f64 {
        self.lambda_c * (1.0 - self.recovery_c)
    }

    /// Issuer funding spread `λ^B (1 − R^B) = r^B − r`.
    pub fn funding_spread(&self) -> f64 {
        self.lambda_b * (1.0 - self.recovery_b)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("sigma", self.sigma),
            ("r", self.r),
            ("r_b", self.r_b),
            ("lambda_b", self.lambda_b),
            ("r_c", self.r_c),
            ("q_c", self.q_c),
            ("lambda_c", self.lambda_c),
            ("q_s", self.q_s),
            ("gamma_s", self.gamma_s),
            ("r_x", self.r_x),
            ("gamma_k", self.gamma_k),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if self.sigma <= 0.0 {
            return Err(invalid("sigma", "must be positive"));
        }
        let unit = [
            ("recovery_b", self.recovery_b),
            ("recovery_c", self.recovery_c),
            ("gamma_x", self.gamma_x),
            ("phi", self.phi),
        ];
        for (name, v) in unit {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(name, format!("{v} not in [0, 1]")));
            }
        }
        if self.lambda_b < 0.0 {
            return Err(invalid("lambda_b", "must be nonnegative"));
        }
        if self.lambda_c < 0.0 {
            return Err(invalid("lambda_c", "must be nonnegative"));
        }
        check_basis(
            "lambda_b",
            self.lambda_b,
            self.r_b - self.r,
            self.recovery_b,
        )?;
        check_basis(
            "lambda_c",
            self.lambda_c,
            self.r_c - self.q_c,
            self.recovery_c,
        )?;
        Ok(())
    }
}

fn check_basis(field: &'static str, lambda: f64, spread: f64, recovery: f64) -> Result<()> {
    let gap = if recovery < 1.0 {
        (lambda - spread / (1.0 - recovery)).abs()
    } else {
        spread.abs()
    };
    if gap > ZERO_BASIS_TOL {
        return Err(invalid(
            field,
            format!("zero-basis identity violated by {gap:.3e}"),
        ));
    }
    Ok(())
}

/// Clock used inside the SA-CCR maturity factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaturityClock {
    /// `MF = √min((T−t) + d/D, 1)`.
    Residual,
    /// `MF = √min(t + d/D, 1)`: the formula applied to elapsed time.
    Elapsed,
}

/// Volatility used in the drift term of the put supervisory delta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PutDeltaDrift {
    Supervisory,
    Stock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapitalParams {
    pub eta: f64,
    pub omega: f64,
    pub alpha: f64,
    pub supervisory_factor: f64,
    pub supervisory_vol: f64,
    pub cva_risk_weight: f64,
    pub leverage_ratio: f64,
    pub multiplier_floor: f64,
    pub multiplier_slope: f64,
    pub day_count_add_days: u32,
    pub business_days_per_year: u32,
    pub maturity_clock: MaturityClock,
    pub put_delta_drift: PutDeltaDrift,
}

impl Default for CapitalParams {
    fn default() -> Self {
        Self {
            eta: 0.08,
            omega: 0.75,
            alpha: 1.4,
            supervisory_factor: 0.32,
            supervisory_vol: 1.5,
            cva_risk_weight: 0.05,
            leverage_ratio: 0.03,
            multiplier_floor: 0.05,
            multiplier_slope: 0.95,
            day_count_add_days: 10,
            business_days_per_year: 360,
            maturity_clock: MaturityClock::Elapsed,
            put_delta_drift: PutDeltaDrift::Stock,
        }
    }
}

impl CapitalParams {
    /// Parameters under which every capital component vanishes.
    pub fn zero() -> Self {
        Self {
            eta: 0.0,
            leverage_ratio: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("eta", self.eta),
            ("omega", self.omega),
            ("alpha", self.alpha),
            ("supervisory_factor", self.supervisory_factor),
            ("supervisory_vol", self.supervisory_vol),
            ("cva_risk_weight", self.cva_risk_weight),
            ("leverage_ratio", self.leverage_ratio),
            ("multiplier_floor", self.multiplier_floor),
            ("multiplier_slope", self.multiplier_slope),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be finite and nonnegative"));
            }
        }
        if self.eta > 1.0 {
            return Err(invalid("eta", "must lie in (0, 1]"));
        }
        if self.alpha == 0.0 {
            return Err(invalid("alpha", "must be positive"));
        }
        if self.supervisory_vol == 0.0 {
            return Err(invalid("supervisory_vol", "must be positive"));
        }
        if self.multiplier_floor >= 1.0 {
            return Err(invalid("multiplier_floor", "must be below 1"));
        }
        if self.business_days_per_year == 0 {
            return Err(invalid("business_days_per_year", "must be positive"));
        }
        let disabled = self.eta == 0.0 && self.leverage_ratio == 0.0;
        if !disabled && self.eta == 0.0 {
            return Err(invalid("eta", "must lie in (0, 1]"));
        }
        if !disabled && self.leverage_ratio < 0.03 {
            return Err(invalid("leverage_ratio", "must be at least 0.03"));
        }
        Ok(())
    }

    /// True when all capital components are identically zero.
    pub fn is_disabled(&self) -> bool {
        self.eta == 0.0 && self.leverage_ratio == 0.0
    }

    pub fn day_count_offset(&self) -> f64 {
        self.day_count_add_days as f64 / self.business_days_per_year as f64
    }
}

/// Mark-to-market convention used at counterparty close-out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MtmConvention {
    /// `M = V`, linear pricing equation.
    RiskFree,
    /// `M = V̂`, semilinear pricing equation.
    Risky,
    /// Capital-only adjustment with the hurdle-rate discounting variant.
    GarciaKva,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub option: OptionSpec,
    pub market: MarketParams,
    pub capital: CapitalParams,
    pub mtm: MtmConvention,
    pub domain_multiple: f64,
    pub cells: usize,
    pub degree: usize,
    pub cfl: f64,
    /// Overrides the CFL-derived number of time steps.
    pub time_steps: Option<usize>,
    /// Reject meshes on which the strike is not a node.
    pub require_strike_node: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            option: OptionSpec::default(),
            market: MarketParams::default(),
            capital: CapitalParams::default(),
            mtm: MtmConvention::Risky,
            domain_multiple: 4.0,
            cells: 640,
            degree: 1,
            cfl: 0.5,
            time_steps: None,
            require_strike_node: true,
        }
    }
}

impl RunConfig {
    pub fn s_max(&self) -> f64 {
        self.domain_multiple * self.option.strike
    }

    pub fn cell_width(&self) -> f64 {
        self.s_max() / self.cells as f64
    }

    pub fn strike_on_node(&self) -> bool {
        let ratio = self.option.strike / self.cell_width();
        (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        self.option.validate()?;
        self.market.validate()?;
        self.capital.validate()?;
        if !(self.domain_multiple > 1.0 && self.domain_multiple.is_finite()) {
            return Err(invalid("domain_multiple", "must exceed 1"));
        }
        if self.cells < 2 {
            return Err(invalid("cells", "need at least 2 cells"));
        }
        if !(1..=2).contains(&self.degree) {
            return Err(invalid("degree", "must be 1 or 2"));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(invalid("cfl", "must be positive"));
        }
        if self.time_steps == Some(0) {
            return Err(invalid("time_steps", "must be positive"));
        }
        if self.require_strike_node && !self.strike_on_node() {
            return Err(Error::MisalignedStrike {
                strike: self.option.strike,
                width: self.cell_width(),
            });
        }
        Ok(())
    }
}

/// Flat on-disk representation. Absent keys take default values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub option_kind: Option<OptionKind>,
    pub strike: Option<f64>,
    pub maturity: Option<f64>,

    pub sigma: Option<f64>,
    pub r: Option<f64>,
    pub r_b: Option<f64>,
    pub lambda_b: Option<f64>,
    pub recovery_b: Option<f64>,
    pub r_c: Option<f64>,
    pub q_c: Option<f64>,
    pub lambda_c: Option<f64>,
    pub recovery_c: Option<f64>,
    pub q_s: Option<f64>,
    pub gamma_s: Option<f64>,
    pub r_x: Option<f64>,
    pub gamma_x: Option<f64>,
    pub gamma_k: Option<f64>,
    pub phi: Option<f64>,

    pub eta: Option<f64>,
    pub omega: Option<f64>,
    pub alpha: Option<f64>,
    pub supervisory_factor: Option<f64>,
    pub supervisory_vol: Option<f64>,
    pub cva_risk_weight: Option<f64>,
    pub leverage_ratio: Option<f64>,
    pub multiplier_floor: Option<f64>,
    pub multiplier_slope: Option<f64>,
    pub day_count_add_days: Option<u32>,
    pub business_days_per_year: Option<u32>,
    pub maturity_clock: Option<MaturityClock>,
    pub put_delta_drift: Option<PutDeltaDrift>,

    pub mtm: Option<MtmConvention>,
    pub domain_multiple: Option<f64>,
    pub cells: Option<usize>,
    pub degree: Option<usize>,
    pub cfl: Option<f64>,
    pub time_steps: Option<usize>,
    pub require_strike_node: Option<bool>,
}

impl ConfigFile {
    /// Fills defaults, derives missing zero-basis members and validates.
    pub fn resolve(&self) -> Result<RunConfig> {
        let d = RunConfig::default();
        let option = OptionSpec {
            kind: self.option_kind.unwrap_or(d.option.kind),
            strike: self.strike.unwrap_or(d.option.strike),
            maturity: self.maturity.unwrap_or(d.option.maturity),
        };

        let dm = d.market;
        let r = self.r.unwrap_or(dm.r);
        let recovery_b = self.recovery_b.unwrap_or(dm.recovery_b);
        let recovery_c = self.recovery_c.unwrap_or(dm.recovery_c);
        let (r_b, lambda_b) = resolve_issuer(self.r_b, self.lambda_b, r, recovery_b, dm.lambda_b)?;
        let (r_c, q_c, lambda_c) =
            resolve_counterparty(self.r_c, self.q_c, self.lambda_c, r, recovery_c, dm.lambda_c)?;
        let market = MarketParams {
            sigma: self.sigma.unwrap_or(dm.sigma),
            r,
            r_b,
            lambda_b,
            recovery_b,
            r_c,
            q_c,
            lambda_c,
            recovery_c,
            q_s: self.q_s.unwrap_or(dm.q_s),
            gamma_s: self.gamma_s.unwrap_or(dm.gamma_s),
            r_x: self.r_x.unwrap_or(dm.r_x),
            gamma_x: self.gamma_x.unwrap_or(dm.gamma_x),
            gamma_k: self.gamma_k.unwrap_or(dm.gamma_k),
            phi: self.phi.unwrap_or(dm.phi),
        };

        let dc = d.capital;
        let capital = CapitalParams {
            eta: self.eta.unwrap_or(dc.eta),
            omega: self.omega.unwrap_or(dc.omega),
            alpha: self.alpha.unwrap_or(dc.alpha),
            supervisory_factor: self.supervisory_factor.unwrap_or(dc.supervisory_factor),
            supervisory_vol: self.supervisory_vol.unwrap_or(dc.supervisory_vol),
            cva_risk_weight: self.cva_risk_weight.unwrap_or(dc.cva_risk_weight),
            leverage_ratio: self.leverage_ratio.unwrap_or(dc.leverage_ratio),
            multiplier_floor: self.multiplier_floor.unwrap_or(dc.multiplier_floor),
            multiplier_slope: self.multiplier_slope.unwrap_or(dc.multiplier_slope),
            day_count_add_days: self.day_count_add_days.unwrap_or(dc.day_count_add_days),
            business_days_per_year: self
                .business_days_per_year
                .unwrap_or(dc.business_days_per_year),
            maturity_clock: self.maturity_clock.unwrap_or(dc.maturity_clock),
            put_delta_drift: self.put_delta_drift.unwrap_or(dc.put_delta_drift),
        };

        let config = RunConfig {
            option,
            market,
            capital,
            mtm: self.mtm.unwrap_or(d.mtm),
            domain_multiple: self.domain_multiple.unwrap_or(d.domain_multiple),
            cells: self.cells.unwrap_or(d.cells),
            degree: self.degree.unwrap_or(d.degree),
            cfl: self.cfl.unwrap_or(d.cfl),
            time_steps: self.time_steps.or(d.time_steps),
            require_strike_node: self.require_strike_node.unwrap_or(d.require_strike_node),
        };
        config.validate()?;
        Ok(config)
    }
}

impl From<&RunConfig> for ConfigFile {
    fn from(c: &RunConfig) -> Self {
        let m = &c.market;
        let k = &c.capital;
        Self {
            option_kind: Some(c.option.kind),
            strike: Some(c.option.strike),
            maturity: Some(c.option.maturity),
            sigma: Some(m.sigma),
            r: Some(m.r),
            r_b: Some(m.r_b),
            lambda_b: Some(m.lambda_b),
            recovery_b: Some(m.recovery_b),
            r_c: Some(m.r_c),
            q_c: Some(m.q_c),
            lambda_c: Some(m.lambda_c),
            recovery_c: Some(m.recovery_c),
            q_s: Some(m.q_s),
            gamma_s: Some(m.gamma_s),
            r_x: Some(m.r_x),
            gamma_x: Some(m.gamma_x),
            gamma_k: Some(m.gamma_k),
            phi: Some(m.phi),
            eta: Some(k.eta),
            omega: Some(k.omega),
            alpha: Some(k.alpha),
            supervisory_factor: Some(k.supervisory_factor),
            supervisory_vol: Some(k.supervisory_vol),
            cva_risk_weight: Some(k.cva_risk_weight),
            leverage_ratio: Some(k.leverage_ratio),
            multiplier_floor: Some(k.multiplier_floor),
            multiplier_slope: Some(k.multiplier_slope),
            day_count_add_days: Some(k.day_count_add_days),
            business_days_per_year: Some(k.business_days_per_year),
            maturity_clock: Some(k.maturity_clock),
            put_delta_drift: Some(k.put_delta_drift),
            mtm: Some(c.mtm),
            domain_multiple: Some(c.domain_multiple),
            cells: Some(c.cells),
            degree: Some(c.degree),
            cfl: Some(c.cfl),
            time_steps: c.time_steps,
            require_strike_node: Some(c.require_strike_node),
        }
    }
}

fn loss_share(recovery: f64, field: &'static str) -> Result<f64> {
    if recovery >= 1.0 {
        return Err(invalid(field, "recovery of 1 leaves the intensity undetermined"));
    }
    Ok(1.0 - recovery)
}

fn resolve_issuer(
    r_b: Option<f64>,
    lambda_b: Option<f64>,
    r: f64,
    recovery: f64,
    default_lambda: f64,
) -> Result<(f64, f64)> {
    match (r_b, lambda_b) {
        (Some(rb), Some(l)) => Ok((rb, l)),
        (Some(rb), None) => Ok((rb, (rb - r) / loss_share(recovery, "recovery_b")?)),
        (None, l) => {
            let l = l.unwrap_or(default_lambda);
            Ok((r + l * (1.0 - recovery), l))
        }
    }
}

fn resolve_counterparty(
    r_c: Option<f64>,
    q_c: Option<f64>,
    lambda_c: Option<f64>,
    r: f64,
    recovery: f64,
    default_lambda: f64,
) -> Result<(f64, f64, f64)> {
    match (r_c, q_c, lambda_c) {
        (Some(rc), Some(qc), Some(l)) => Ok((rc, qc, l)),
        (Some(rc), Some(qc), None) => {
            Ok((rc, qc, (rc - qc) / loss_share(recovery, "recovery_c")?))
        }
        (Some(rc), None, l) => {
            let l = l.unwrap_or(default_lambda);
            Ok((rc, rc - l * (1.0 - recovery), l))
        }
        (None, qc, l) => {
            let qc = qc.unwrap_or(r);
            let l = l.unwrap_or(default_lambda);
            Ok((qc + l * (1.0 - recovery), qc, l))
        }
    }
}

pub fn parse_config(json: &str) -> Result<RunConfig> {
    let file: ConfigFile = serde_json::from_str(json)?;
    file.resolve()
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn to_json(config: &RunConfig) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ConfigFile::from(config))?)
}

pub fn save_config(config: &RunConfig, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(config)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_reference_setup() {
        let c = parse_config("{}").unwrap();
        assert_eq!(c.option.strike, 15.0);
        assert_eq!(c.s_max(), 60.0);
        assert!((c.market.beta() - 0.06).abs() < 1e-15);
        assert!((c.market.convection_coefficient() - 0.03).abs() < 1e-15);
        assert!((c.market.r_b - 0.060399).abs() < 1e-15);
    }

    #[test]
    fn zero_basis_holds_after_derivation() {
        let m = parse_config("{}").unwrap().market;
        assert!((m.lambda_c - (m.r_c - m.q_c) / (1.0 - m.recovery_c)).abs() <= ZERO_BASIS_TOL);
        assert!((m.lambda_b - (m.r_b - m.r) / (1.0 - m.recovery_b)).abs() <= ZERO_BASIS_TOL);
    }

    #[test]
    fn issuer_intensity_derived_from_zero_spread() {
        let c = parse_config(r#"{"r_b": 0.06, "r": 0.06, "recovery_b": 0.7}"#).unwrap();
        assert_eq!(c.market.lambda_b, 0.0);
    }

    #[test]
    fn inconsistent_triple_rejected() {
        let spread = 1.1 * 0.0103 * (1.0 - 0.78);
        let json = format!(
            r#"{{"lambda_c": 0.0103, "recovery_c": 0.78, "r_c": {}, "q_c": 0.06}}"#,
            0.06 + spread
        );
        match parse_config(&json) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "lambda_c"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn counterparty_yield_derived_from_repo_and_intensity() {
        let c = parse_config(r#"{"q_c": 0.05, "lambda_c": 0.02, "recovery_c": 0.5}"#).unwrap();
        assert!((c.market.r_c - 0.06).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse_config(r#"{"sigmaa": 0.2}"#).is_err());
    }

    #[test]
    fn misaligned_strike_rejected_unless_relaxed() {
        assert!(matches!(
            parse_config(r#"{"cells": 10}"#),
            Err(Error::MisalignedStrike { .. })
        ));
        assert!(parse_config(r#"{"cells": 10, "require_strike_node": false}"#).is_ok());
        assert!(parse_config(r#"{"cells": 20}"#).is_ok());
    }

    #[test]
    fn invalid_ranges_rejected() {
        assert!(parse_config(r#"{"sigma": 0.0}"#).is_err());
        assert!(parse_config(r#"{"gamma_x": 1.2}"#).is_err());
        assert!(parse_config(r#"{"leverage_ratio": 0.01}"#).is_err());
        assert!(parse_config(r#"{"degree": 3}"#).is_err());
        assert!(parse_config(r#"{"cells": 1}"#).is_err());
    }

    #[test]
    fn payoff_examples() {
        let call = OptionSpec::default();
        let put = OptionSpec {
            kind: OptionKind::Put,
            ..call
        };
        assert_eq!(payoff(&call, 20.0), 5.0);
        assert_eq!(payoff(&put, 20.0), 0.0);
        assert_eq!(payoff(&call, 15.0), 0.0);
    }
}
