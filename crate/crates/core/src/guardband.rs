//! Process- and temperature-variation guard banding for a scaled thermal
//! stability factor, and sizing of the adjustable write-driver current levels.
//!
//! A scaled `delta` must survive the hot corner of a +n-sigma die, so the
//! as-designed value is inflated to `delta_gb`. On the cold corner of the
//! same die the stability rises further to `delta_pt_max`, which sets the
//! strongest write-driver leg.

use crate::error::{Error, Result};
use crate::mtj::{critical_current, MtjTechParams};
use serde::{Deserialize, Serialize};

/// Process and temperature variation corners.
///
/// `sigma_frac` is the per-die standard deviation of `delta` expressed as a
/// fraction of the guard-banded mean; the guard band covers `n_sigma` of it
/// multiplicatively. Degenerate profiles (zero sigma, `t_hot == t_nom`) are
/// accepted and make the corner transforms the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VariationProfile {
    /// Standard deviation of delta as a fraction of its mean.
    pub sigma_frac: f64,
    /// Number of sigmas covered by the guard band.
    pub n_sigma: f64,
    /// Nominal temperature, K.
    pub t_nom: f64,
    /// Hot corner temperature, K.
    pub t_hot: f64,
    /// Cold corner temperature, K.
    pub t_cold: f64,
}

impl Default for VariationProfile {
    fn default() -> Self {
        VariationProfile {
            sigma_frac: 0.021,
            n_sigma: 4.0,
            t_nom: 300.0,
            t_hot: 393.0,
            t_cold: 253.0,
        }
    }
}

impl VariationProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_frac >= 0.0) || !(self.n_sigma >= 0.0) {
            return Err(Error::Domain(
                "sigma_frac and n_sigma must be non-negative".to_string(),
            ));
        }
        if !(self.sigma_frac * self.n_sigma < 1.0) {
            return Err(Error::Domain(format!(
                "n_sigma * sigma_frac must stay below 1, got {}",
                self.sigma_frac * self.n_sigma
            )));
        }
        if !(self.t_cold > 0.0 && self.t_cold <= self.t_nom && self.t_nom <= self.t_hot) {
            return Err(Error::Domain(format!(
                "temperatures must satisfy 0 < t_cold <= t_nom <= t_hot, got {} / {} / {}",
                self.t_cold, self.t_nom, self.t_hot
            )));
        }
        Ok(())
    }

    fn sigma_cover(&self) -> f64 {
        self.n_sigma * self.sigma_frac
    }
}

/// Inflate a scaled `delta` so that a -n-sigma die at the hot corner still
/// provides it: `delta_gb = delta_scaled * (t_hot/t_nom) / (1 - n*sigma)`.
pub fn guardbanded_delta(delta_scaled: f64, profile: &VariationProfile) -> Result<f64> {
    profile.validate()?;
    if !(delta_scaled > 0.0) {
        return Err(Error::Domain(format!(
            "delta_scaled must be > 0, got {delta_scaled}"
        )));
    }
    Ok(delta_scaled * (profile.t_hot / profile.t_nom) / (1.0 - profile.sigma_cover()))
}

/// Effective stability a guard-banded design still delivers on the weak/hot
/// corner: `(delta_gb - n*sigma*delta_gb) * (t_nom/t_hot)`. Exact inverse of
/// [`guardbanded_delta`].
pub fn scaled_delta_check(delta_gb: f64, profile: &VariationProfile) -> Result<f64> {
    profile.validate()?;
    if !(delta_gb > 0.0) {
        return Err(Error::Domain(format!("delta_gb must be > 0, got {delta_gb}")));
    }
    Ok(delta_gb * (1.0 - profile.sigma_cover()) * (profile.t_nom / profile.t_hot))
}

/// Highest stability a guard-banded design reaches, on the strong/cold
/// corner: `(delta_gb + n*sigma*delta_gb) * (t_nom/t_cold)`. This corner
/// dictates the largest required write current.
pub fn delta_pt_max(delta_gb: f64, profile: &VariationProfile) -> Result<f64> {
    profile.validate()?;
    if !(delta_gb > 0.0) {
        return Err(Error::Domain(format!("delta_gb must be > 0, got {delta_gb}")));
    }
    Ok(delta_gb * (1.0 + profile.sigma_cover()) * (profile.t_nom / profile.t_cold))
}

/// Write-driver current levels, linearly spaced from the nominal drive
/// `iw_over_ic * Ic(delta_gb, t_nom)` up to the worst-case drive
/// `iw_over_ic * Ic(delta_pt_max, t_cold)`, in A.
///
/// Level 0 is the always-on nominal driver; the monitor block enables the
/// stronger legs as process/temperature push `delta` upward. With `Ic`
/// linear in both `delta` and `T`, the top/bottom ratio reduces to
/// `1 + n_sigma * sigma_frac`.
pub fn write_driver_levels(
    params: &MtjTechParams,
    delta_gb: f64,
    profile: &VariationProfile,
    n_levels: usize,
    iw_over_ic: f64,
) -> Result<Vec<f64>> {
    profile.validate()?;
    if n_levels < 2 {
        return Err(Error::Domain(format!(
            "a write driver needs at least 2 levels, got {n_levels}"
        )));
    }
    if !(iw_over_ic > 1.0) {
        return Err(Error::Domain(format!(
            "iw_over_ic must be strictly greater than 1, got {iw_over_ic}"
        )));
    }
    let nominal = iw_over_ic * critical_current(params, delta_gb, profile.t_nom)?;
    let worst_delta = delta_pt_max(delta_gb, profile)?;
    let worst = iw_over_ic * critical_current(params, worst_delta, profile.t_cold)?;
    let span = worst - nominal;
    let steps = (n_levels - 1) as f64;
    Ok((0..n_levels)
        .map(|i| nominal + span * i as f64 / steps)
        .collect())
}
