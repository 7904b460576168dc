//! Closed-form Black–Scholes prices and Greeks with drift `β = q_S − γ_S`,
//! plus expectations under the lognormal transition law.

use libm::erfc;

use crate::config::{payoff, MarketParams, OptionKind, OptionSpec};
use crate::quadrature::{gauss_hermite_normal, Rule};

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn d1_d2(s: f64, strike: f64, tau: f64, beta: f64, sigma: f64) -> (f64, f64) {
    let sd = sigma * tau.sqrt();
    let d1 = ((s / strike).ln() + (beta + 0.5 * sigma * sigma) * tau) / sd;
    (d1, d1 - sd)
}

/// Risk-free value `e^{−r(T−t)} E[g(S_T) | S_t = S]`.
pub fn bs_value(option: &OptionSpec, s: f64, t: f64, market: &MarketParams) -> f64 {
    let tau = option.maturity - t;
    if tau <= 0.0 {
        return payoff(option, s);
    }
    let k = option.strike;
    let disc = (-market.r * tau).exp();
    if s <= 0.0 {
        return match option.kind {
            OptionKind::Call => 0.0,
            OptionKind::Put => k * disc,
        };
    }
    let fwd = s * (market.beta() * tau).exp();
    let (d1, d2) = d1_d2(s, k, tau, market.beta(), market.sigma);
    match option.kind {
        OptionKind::Call => disc * (fwd * norm_cdf(d1) - k * norm_cdf(d2)),
        OptionKind::Put => disc * (k * norm_cdf(-d2) - fwd * norm_cdf(-d1)),
    }
}

pub fn bs_delta(option: &OptionSpec, s: f64, t: f64, market: &MarketParams) -> f64 {
    let tau = option.maturity - t;
    let k = option.strike;
    if tau <= 0.0 {
        return match option.kind {
            OptionKind::Call if s > k => 1.0,
            OptionKind::Put if s < k => -1.0,
            _ => 0.0,
        };
    }
    let carry = ((market.beta() - market.r) * tau).exp();
    if s <= 0.0 {
        return match option.kind {
            OptionKind::Call => 0.0,
            OptionKind::Put => -carry,
        };
    }
    let (d1, _) = d1_d2(s, k, tau, market.beta(), market.sigma);
    match option.kind {
        OptionKind::Call => carry * norm_cdf(d1),
        OptionKind::Put => -carry * norm_cdf(-d1),
    }
}

pub fn bs_gamma(option: &OptionSpec, s: f64, t: f64, market: &MarketParams) -> f64 {
    let tau = option.maturity - t;
    if tau <= 0.0 || s <= 0.0 {
        return 0.0;
    }
    let carry = ((market.beta() - market.r) * tau).exp();
    let (d1, _) = d1_d2(s, option.strike, tau, market.beta(), market.sigma);
    carry * norm_pdf(d1) / (s * market.sigma * tau.sqrt())
}

/// Law of `S_u` given `S_t = spot` under `dS = βS dt + σS dW`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LognormalKernel {
    pub spot: f64,
    pub drift: f64,
    pub vol: f64,
    pub horizon: f64,
}

impl LognormalKernel {
    pub fn new(spot: f64, market: &MarketParams, horizon: f64) -> Self {
        Self {
            spot,
            drift: market.beta(),
            vol: market.sigma,
            horizon,
        }
    }

    /// Terminal value reached from the standard normal draw `z`.
    pub fn transform(&self, z: f64) -> f64 {
        let h = self.horizon.max(0.0);
        self.spot * ((self.drift - 0.5 * self.vol * self.vol) * h + self.vol * h.sqrt() * z).exp()
    }
}

/// Gauss–Hermite approximation of `E[h(S_u) | S_t]` with `order` nodes.
pub fn lognormal_expectation(h: impl Fn(f64) -> f64, kernel: &LognormalKernel, order: usize) -> f64 {
    assert!(order >= 8, "quadrature order must be at least 8");
    expectation_with(&gauss_hermite_normal(order), h, kernel)
}

/// As [`lognormal_expectation`], reusing a precomputed standard-normal rule.
pub fn expectation_with(rule: &Rule, h: impl Fn(f64) -> f64, kernel: &LognormalKernel) -> f64 {
    if kernel.horizon <= 0.0 || kernel.vol == 0.0 {
        return h(kernel.transform(0.0));
    }
    rule.integrate(|z| h(kernel.transform(z)))
}
