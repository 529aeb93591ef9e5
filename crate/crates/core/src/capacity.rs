//! Capacity bounds for Nyquist and faster-than-Nyquist multicarrier signals.
//!
//! With subcarrier spacing `α/2T` a band of width `W` holds `2TW/α`
//! independent amplitudes, which gives the FTN bound
//! `C ≤ (1/α)·W·log2(1 + P_S / (P_N + P_ICI))`. At `α = 1` and no ICI it
//! reduces to the Shannon limit.
//!
//! Sphere volumes and signal counts are returned in the log domain because
//! the dimension `2TW/α` is far beyond what `f64` can exponentiate.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::stats::db_to_linear;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityParams {
    pub bandwidth_hz: f64,
    pub signal_power: f64,
    pub noise_power: f64,
    pub ici_power: f64,
    pub alpha: f64,
    /// Symbol duration `T` in seconds.
    pub symbol_duration: f64,
}

impl CapacityParams {
    /// Unit noise power with the signal power set from `snr_db`.
    pub fn from_snr_db(bandwidth_hz: f64, snr_db: f64, alpha: f64) -> Self {
        CapacityParams {
            bandwidth_hz,
            signal_power: db_to_linear(snr_db),
            noise_power: 1.0,
            ici_power: 0.0,
            alpha,
            symbol_duration: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::parameter(field, "must be positive"))
            }
        }
        fn non_negative(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::parameter(field, "must be non-negative"))
            }
        }
        positive("bandwidth_hz", self.bandwidth_hz)?;
        non_negative("signal_power", self.signal_power)?;
        positive("noise_power", self.noise_power)?;
        non_negative("ici_power", self.ici_power)?;
        positive("symbol_duration", self.symbol_duration)?;
        if !(self.alpha.is_finite() && self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::parameter("alpha", "must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn snr(&self) -> f64 {
        self.signal_power / self.noise_power
    }
}

/// `W·log2(1 + P_S/P_N)`.
pub fn shannon_limit(p: &CapacityParams) -> Result<f64> {
    p.validate()?;
    Ok(p.bandwidth_hz * (1.0 + p.snr()).log2())
}

/// Natural log of the volume of an `n`-ball of radius `r`.
pub fn ln_sphere_volume(n: f64, r: f64) -> Result<f64> {
    if !(n.is_finite() && n >= 1.0) {
        return Err(Error::parameter("n", "must be at least 1"));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::parameter("r", "must be non-negative"));
    }
    if r == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(0.5 * n * std::f64::consts::PI.ln() + n * r.ln() - ln_gamma(0.5 * n + 1.0))
}

/// `π^(n/2)·r^n / Γ(n/2 + 1)`; overflows to infinity for large `n·ln r`,
/// see [`ln_sphere_volume`].
pub fn sphere_volume(n: f64, r: f64) -> Result<f64> {
    Ok(ln_sphere_volume(n, r)?.exp())
}

/// `log2 M` for the largest number `M` of distinguishable signals,
/// `(W·T/α)·log2(1 + P_S/P_N)`.
pub fn distinguishable_signals(p: &CapacityParams) -> Result<f64> {
    p.validate()?;
    Ok(p.bandwidth_hz * p.symbol_duration / p.alpha * (1.0 + p.snr()).log2())
}

/// `(1/α)·W·log2(1 + P_S/(P_N + P_ICI))`.
pub fn capacity_ftn(p: &CapacityParams) -> Result<f64> {
    p.validate()?;
    let nyquist_term = p.bandwidth_hz * (1.0 + p.signal_power / (p.noise_power + p.ici_power)).log2();
    Ok((1.0 / p.alpha) * nyquist_term)
}

/// All capacity quantities for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub params: CapacityParams,
    pub shannon_limit: f64,
    pub capacity_ftn: f64,
    pub log2_distinguishable_signals: f64,
    /// Dimension `2TW/α` of the received-signal sphere.
    pub signal_dimensions: f64,
    /// log2 volume of the received-signal sphere of radius
    /// `sqrt(2TW(P_S + P_N)/α)`.
    pub log2_received_sphere_volume: f64,
}

pub fn capacity_report(p: &CapacityParams) -> Result<CapacityReport> {
    p.validate()?;
    let dims = 2.0 * p.symbol_duration * p.bandwidth_hz / p.alpha;
    let radius = (dims * (p.signal_power + p.noise_power)).sqrt();
    let log2_volume = if dims >= 1.0 {
        ln_sphere_volume(dims, radius)? / std::f64::consts::LN_2
    } else {
        f64::NAN
    };
    Ok(CapacityReport {
        params: *p,
        shannon_limit: shannon_limit(p)?,
        capacity_ftn: capacity_ftn(p)?,
        log2_distinguishable_signals: distinguishable_signals(p)?,
        signal_dimensions: dims,
        log2_received_sphere_volume: log2_volume,
    })
}
