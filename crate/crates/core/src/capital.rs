//! Regulatory capital `K(t, S, M)`: SA-CCR exposure at default, CCR and CVA
//! risk-weighted assets, and the leverage-ratio floor. Market-risk capital is
//! not modelled.

use serde::Serialize;

use crate::analytic::norm_cdf;
use crate::config::{CapitalParams, MarketParams, MaturityClock, OptionKind, OptionSpec, PutDeltaDrift};

/// Shift applied to spot and strike inside the supervisory delta.
const DELTA_SHIFT: f64 = 0.01;
/// Discount rate inside the CVA maturity adjustment.
const CVA_DISCOUNT: f64 = 0.05;
/// Scaling from capital to risk-weighted assets.
const RWA_SCALE: f64 = 12.5;
const CVA_FACTOR: f64 = 0.65;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CapitalBreakdown {
    pub supervisory_delta: f64,
    pub maturity_factor: f64,
    pub add_on: f64,
    pub replacement_cost: f64,
    pub multiplier: f64,
    pub pfe: f64,
    pub ead: f64,
    pub rwa_ccr: f64,
    pub rwa_cva: f64,
    pub k_ccr: f64,
    pub k_cva: f64,
    pub k_lr: f64,
    pub k_total: f64,
}

/// Smallest residual maturity used by the delta; keeps `K` defined at expiry.
pub fn min_residual(capital: &CapitalParams) -> f64 {
    1.0 / capital.business_days_per_year as f64
}

fn delta_argument(option: &OptionSpec, s: f64, tau: f64, vol: f64, drift_vol: f64) -> f64 {
    ((s + DELTA_SHIFT).ln() - (option.strike + DELTA_SHIFT).ln() + 0.5 * drift_vol * drift_vol * tau)
        / (vol * tau.sqrt())
}

/// Supervisory delta with residual maturity `T − t`.
///
/// Returns `None` when `t ≥ T`; [`capital_requirement`] clamps instead.
pub fn supervisory_delta(option: &OptionSpec, s: f64, t: f64, vol: f64) -> Option<f64> {
    let tau = option.maturity - t;
    if tau <= 0.0 {
        return None;
    }
    Some(delta_with(option, s, tau, vol, vol))
}

fn delta_with(option: &OptionSpec, s: f64, tau: f64, vol: f64, put_drift_vol: f64) -> f64 {
    match option.kind {
        OptionKind::Call => norm_cdf(delta_argument(option, s, tau, vol, vol)),
        OptionKind::Put => -norm_cdf(-delta_argument(option, s, tau, vol, put_drift_vol)),
    }
}

/// `√min((T−t) + d/D, 1)`.
pub fn maturity_factor(t: f64, maturity: f64, capital: &CapitalParams) -> f64 {
    ((maturity - t) + capital.day_count_offset()).min(1.0).sqrt()
}

/// `(1 − e^{−x})/x` with `x = 0.05·M_eff`, continuous at zero.
fn cva_discount_factor(m_eff: f64) -> f64 {
    let x = CVA_DISCOUNT * m_eff;
    if m_eff < 1e-6 {
        1.0 - x / 2.0 + x * x / 6.0
    } else {
        -(-x).exp_m1() / x
    }
}

/// SA-CCR multiplier `min{1, floor + slope·exp((M−X)/(2(1−floor)·AddOn))}`.
pub fn multiplier(net: f64, add_on: f64, capital: &CapitalParams) -> f64 {
    if add_on == 0.0 {
        return 1.0;
    }
    let floor = capital.multiplier_floor;
    let expo = net / (2.0 * (1.0 - floor) * add_on);
    (floor + capital.multiplier_slope * expo.exp()).min(1.0)
}

fn put_drift_vol(market: &MarketParams, capital: &CapitalParams) -> f64 {
    match capital.put_delta_drift {
        PutDeltaDrift::Supervisory => capital.supervisory_vol,
        PutDeltaDrift::Stock => market.sigma,
    }
}

/// Exposure-at-default fields of the breakdown; RWA and capital left at zero.
pub fn ead_saccr(
    m: f64,
    x: f64,
    s: f64,
    t: f64,
    option: &OptionSpec,
    market: &MarketParams,
    capital: &CapitalParams,
) -> CapitalBreakdown {
    let tau = (option.maturity - t).max(min_residual(capital));
    CapitalBreakdown::default().with_exposure(m, x, s, t, tau, option, capital, put_drift_vol(market, capital))
}

impl CapitalBreakdown {
    #[allow(clippy::too_many_arguments)]
    fn with_exposure(
        mut self,
        m: f64,
        x: f64,
        s: f64,
        t: f64,
        tau: f64,
        option: &OptionSpec,
        capital: &CapitalParams,
        put_drift_vol: f64,
    ) -> Self {
        let vol = capital.supervisory_vol;
        let delta = delta_with(option, s, tau, vol, put_drift_vol);
        let clock = match capital.maturity_clock {
            MaturityClock::Residual => t,
            MaturityClock::Elapsed => option.maturity - t,
        };
        let mf = maturity_factor(clock, option.maturity, capital);
        let add_on = capital.supervisory_factor * s * mf * delta;
        let net = m - x;
        let rc = net.max(0.0);
        let mult = multiplier(net, add_on, capital);
        let pfe = if add_on == 0.0 { 0.0 } else { mult * add_on };
        self.supervisory_delta = delta;
        self.maturity_factor = mf;
        self.add_on = add_on;
        self.replacement_cost = rc;
        self.multiplier = mult;
        self.pfe = pfe;
        self.ead = (capital.alpha * (rc + pfe)).max(0.0);
        self
    }
}

/// Full capital breakdown at `(t, S)` for mark-to-market `M`, with collateral
/// `X = γ_X·M`.
pub fn capital_requirement(
    t: f64,
    s: f64,
    m: f64,
    option: &OptionSpec,
    market: &MarketParams,
    capital: &CapitalParams,
) -> CapitalBreakdown {
    if capital.is_disabled() {
        return CapitalBreakdown::default();
    }
    let x = market.gamma_x * m;
    let tau = (option.maturity - t).max(min_residual(capital));
    let mut b = CapitalBreakdown::default().with_exposure(
        m,
        x,
        s,
        t,
        tau,
        option,
        capital,
        put_drift_vol(market, capital),
    );

    let m_eff = (option.maturity - t).clamp(0.0, 1.0);
    b.rwa_ccr = capital.omega * RWA_SCALE * b.ead;
    b.rwa_cva = (RWA_SCALE * CVA_FACTOR / capital.alpha)
        * capital.cva_risk_weight
        * m_eff
        * b.ead
        * cva_discount_factor(m_eff);
    b.k_ccr = capital.eta * b.rwa_ccr;
    b.k_cva = capital.eta * b.rwa_cva;
    b.k_lr = (capital.leverage_ratio * (m.max(0.0) + b.add_on)).max(0.0);
    b.k_total = (b.k_ccr + b.k_cva).max(b.k_lr);
    b
}

/// Total capital `K(t, S, M)`.
pub fn capital(t: f64, s: f64, m: f64, option: &OptionSpec, market: &MarketParams, capital: &CapitalParams) -> f64 {
    capital_requirement(t, s, m, option, market, capital).k_total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::bs_value;

    fn call() -> OptionSpec {
        OptionSpec::default()
    }

    fn put() -> OptionSpec {
        OptionSpec {
            kind: OptionKind::Put,
            ..call()
        }
    }

    #[test]
    fn supervisory_delta_examples() {
        let d = supervisory_delta(&call(), 15.0, 0.0, 1.5).unwrap();
        assert!((d - 0.773372647623132).abs() < 1e-12);
        let p = supervisory_delta(&put(), 15.0, 0.0, 1.5).unwrap();
        assert!((p + 0.226627352376868).abs() < 1e-12);
        assert!(supervisory_delta(&call(), 15.0, 1.0, 1.5).is_none());
        assert!(supervisory_delta(&call(), 1e9, 0.0, 1.5).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn maturity_factor_examples() {
        let c = CapitalParams::default();
        assert_eq!(maturity_factor(0.0, 1.0, &c), 1.0);
        assert!((maturity_factor(0.5, 1.0, &c) - 0.726483157).abs() < 1e-8);
        assert!((maturity_factor(1.0, 1.0, &c) - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn multiplier_examples() {
        let printed = CapitalParams {
            multiplier_slope: 0.095,
            ..CapitalParams::default()
        };
        assert!((multiplier(0.0, 2.0, &printed) - 0.145).abs() < 1e-15);
        assert_eq!(multiplier(0.0, 2.0, &CapitalParams::default()), 1.0);
        let far = multiplier(-1e6, 2.0, &CapitalParams::default());
        assert!((far - 0.05).abs() < 1e-15);
    }

    #[test]
    fn degenerate_spot_leaves_replacement_cost_only() {
        let c = CapitalParams::default();
        let m = MarketParams::default();
        let b = ead_saccr(10.0, 9.0, 0.0, 0.0, &call(), &m, &c);
        assert_eq!(b.add_on, 0.0);
        assert_eq!(b.multiplier, 1.0);
        assert_eq!(b.pfe, 0.0);
        assert!((b.ead - 1.4).abs() < 1e-15);
        assert_eq!(capital_requirement(0.0, 0.0, 0.0, &call(), &m, &c).k_total, 0.0);
    }

    #[test]
    fn cva_discount_series_is_continuous() {
        let m: f64 = 0.999e-6;
        let x = 0.05 * m;
        let closed = -(-x).exp_m1() / x;
        assert!((cva_discount_factor(m) - closed).abs() < 1e-10);
        let above = cva_discount_factor(1.001e-6);
        assert!((cva_discount_factor(m) - above).abs() < 1e-10);
        assert_eq!(cva_discount_factor(0.0), 1.0);
    }

    #[test]
    fn expiry_is_total() {
        let m = MarketParams::default();
        let c = CapitalParams::default();
        let b = capital_requirement(1.0, 20.0, 5.0, &call(), &m, &c);
        assert!(b.k_total.is_finite() && b.k_total > 0.0);
        assert_eq!(b.rwa_cva, 0.0);
    }

    /// Step-by-step evaluation at t = 0, S = K, M = risk-free call value.
    #[test]
    fn reference_point_matches_sequential_oracle() {
        let m = MarketParams::default();
        let c = CapitalParams::default();
        let v = bs_value(&call(), 15.0, 0.0, &m);
        let x = 0.9 * v;
        let delta = 0.773372647623132;
        let mf = (10.0f64 / 360.0).sqrt();
        let add_on = 0.32 * 15.0 * mf * delta;
        let rc = v - x;
        let mult = 1f64.min(0.05 + 0.95 * (rc / (1.9 * add_on)).exp());
        let ead = 1.4 * (rc + mult * add_on);
        let rwa_ccr = 0.75 * 12.5 * ead;
        let rwa_cva = (12.5 * 0.65 / 1.4) * 0.05 * ead * (1.0 - (-0.05f64).exp()) / 0.05;
        let k_model = 0.08 * (rwa_ccr + rwa_cva);
        let k_lr = 0.03 * (v + add_on);
        let b = capital_requirement(0.0, 15.0, v, &call(), &m, &c);
        assert!((b.maturity_factor - mf).abs() < 1e-15);
        assert!((b.ead - ead).abs() < 1e-12);
        assert!((b.k_total - k_model.max(k_lr)).abs() < 1e-12);
        assert!((b.k_total - 0.908_038_3).abs() < 1e-6, "{}", b.k_total);
    }

    #[test]
    fn doubling_eta_doubles_model_capital_only() {
        let m = MarketParams::default();
        let c = CapitalParams::default();
        let c2 = CapitalParams { eta: 0.16, ..c };
        let a = capital_requirement(0.3, 17.0, 3.0, &call(), &m, &c);
        let b = capital_requirement(0.3, 17.0, 3.0, &call(), &m, &c2);
        assert!(((b.k_ccr + b.k_cva) - 2.0 * (a.k_ccr + a.k_cva)).abs() < 1e-14);
        assert_eq!(a.k_lr, b.k_lr);
        assert_eq!(b.k_total, (b.k_ccr + b.k_cva).max(b.k_lr));
    }

    /// Bound on `|∂K/∂M|` from the chain rule through RC, PFE and the
    /// leverage floor.
    fn lipschitz_in_mtm(m: &MarketParams, c: &CapitalParams) -> f64 {
        let net = 1.0 - m.gamma_x;
        let pfe = c.multiplier_slope / (2.0 * (1.0 - c.multiplier_floor));
        let rwa_per_ead = c.omega * RWA_SCALE + RWA_SCALE * CVA_FACTOR / c.alpha * c.cva_risk_weight;
        c.eta * rwa_per_ead * c.alpha * net * (1.0 + pfe) + c.leverage_ratio
    }

    proptest::proptest! {
        #[test]
        fn supervisory_delta_is_bounded(s in 0.0f64..200.0, t in 0.0f64..0.999, vol in 0.05f64..3.0) {
            let d = supervisory_delta(&call(), s, t, vol).unwrap();
            proptest::prop_assert!((0.0..=1.0).contains(&d));
            let p = supervisory_delta(&put(), s, t, vol).unwrap();
            proptest::prop_assert!((-1.0..=0.0).contains(&p));
        }

        #[test]
        fn total_is_max_of_model_and_leverage(t in 0.0f64..1.0, s in 0.0f64..60.0, mtm in -20.0f64..50.0, is_put: bool) {
            let o = if is_put { put() } else { call() };
            let b = capital_requirement(t, s, mtm, &o, &MarketParams::default(), &CapitalParams::default());
            proptest::prop_assert_eq!(b.k_total, (b.k_ccr + b.k_cva).max(b.k_lr));
            proptest::prop_assert!(b.k_total >= b.k_lr && b.k_total >= b.k_ccr + b.k_cva && b.k_lr >= 0.0);
        }

        #[test]
        fn capital_is_lipschitz_in_mtm(t in 0.0f64..1.0, s in 0.1f64..60.0, mtm in -20.0f64..50.0, dm in -1.0f64..1.0, is_put: bool) {
            let o = if is_put { put() } else { call() };
            let (m, c) = (MarketParams::default(), CapitalParams::default());
            proptest::prop_assume!(dm.abs() > 1e-9);
            let slope = (capital(t, s, mtm + dm, &o, &m, &c) - capital(t, s, mtm, &o, &m, &c)).abs() / dm.abs();
            proptest::prop_assert!(slope <= lipschitz_in_mtm(&m, &c) * (1.0 + 1e-9), "slope {}", slope);
        }

        #[test]
        fn multiplier_tends_to_floor(add_on in 0.01f64..10.0) {
            let c = CapitalParams::default();
            let far = multiplier(-1e4 * add_on, add_on, &c);
            proptest::prop_assert!((far - c.multiplier_floor).abs() < 1e-12);
            proptest::prop_assert_eq!(multiplier(1e4 * add_on, add_on, &c), 1.0);
        }
    }
}
