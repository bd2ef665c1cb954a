//! MTJ reliability model: thermal stability, critical current, retention
//! failure, read disturb, and write error rate, plus the inverse forms used
//! to solve an operating point for target retention time and bit error rates.
//!
//! Probabilities are evaluated with `expm1`/`ln_1p` formulations so that
//! values far below 1e-12 keep full precision; this is a correctness
//! requirement for the inverse round-trips, not an optimization.

use crate::constants::{BOLTZMANN, ELECTRON_CHARGE, PLANCK};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// MTJ technology constants.
///
/// Two separate attempt-time constants are carried: `tau_retention` governs
/// the thermal relaxation processes (retention failure and read disturb)
/// while `tau_write` governs the spin-torque switching dynamics. Calibrating
/// the retention model against second-to-year retention targets yields a
/// constant near 1 s, while write pulses are nanosecond-scale, so the two are
/// independently configurable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MtjTechParams {
    /// Attempt-time constant for retention failure and read disturb, s.
    pub tau_retention: f64,
    /// Attempt-time constant for write switching, s.
    pub tau_write: f64,
    /// LLGE damping constant (dimensionless).
    pub alpha: f64,
    /// Spin-transfer-torque efficiency (dimensionless).
    pub eta: f64,
    /// Demagnetization factor `1 + 4*pi*M_eff / (2*H_K)` folded into one
    /// dimensionless term.
    pub m_eff_term: f64,
    /// Anisotropy field, A/m.
    pub h_k: f64,
    /// Saturation magnetization, A/m.
    pub m_s: f64,
    /// MTJ free-layer volume, m^3.
    pub volume: f64,
    /// Nominal operating temperature, K.
    pub t_nom: f64,
}

impl Default for MtjTechParams {
    fn default() -> Self {
        // h_k and m_s are representative perpendicular-MTJ values; volume is
        // chosen so the default stack sits at delta = 60 at 300 K, the usual
        // ten-year-retention design point.
        let h_k = 1.1e5;
        let m_s = 1.2e6;
        let delta_60 = 60.0 * 2.0 * BOLTZMANN * 300.0;
        MtjTechParams {
            tau_retention: 1.0,
            tau_write: 1e-9,
            alpha: 0.05,
            eta: 1.0,
            m_eff_term: 3.0,
            h_k,
            m_s,
            volume: delta_60 / (h_k * m_s),
            t_nom: 300.0,
        }
    }
}

impl MtjTechParams {
    /// All fields must be strictly positive.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("tau_retention", self.tau_retention),
            ("tau_write", self.tau_write),
            ("alpha", self.alpha),
            ("eta", self.eta),
            ("m_eff_term", self.m_eff_term),
            ("h_k", self.h_k),
            ("m_s", self.m_s),
            ("volume", self.volume),
            ("t_nom", self.t_nom),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "MTJ parameter {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Retention and bit-error-rate targets for an operating point.
///
/// Defaults to the global-buffer design center: 3 s retention at 1e-8
/// per-bit budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetentionTargets {
    /// Required data retention time, s.
    pub t_ret: f64,
    /// Retention-failure probability budget per bit.
    pub ber_rf: f64,
    /// Read-disturb probability budget per bit.
    pub ber_rd: f64,
    /// Write-error probability budget per bit.
    pub ber_we: f64,
}

impl Default for RetentionTargets {
    fn default() -> Self {
        RetentionTargets { t_ret: 3.0, ber_rf: 1e-8, ber_rd: 1e-8, ber_we: 1e-8 }
    }
}

/// Current ratios used as design knobs when solving an operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurrentKnobs {
    /// Read current as a fraction of the critical current, in (0, 1).
    pub ir_over_ic: f64,
    /// Write current as a multiple of the critical current, > 1.
    pub iw_over_ic: f64,
}

impl Default for CurrentKnobs {
    fn default() -> Self {
        CurrentKnobs { ir_over_ic: 0.3, iw_over_ic: 1.5 }
    }
}

/// A solved MTJ design point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    /// Thermal stability factor.
    pub delta: f64,
    /// Critical switching current, A.
    pub i_c: f64,
    /// Write current, A (`> i_c`).
    pub i_w: f64,
    /// Read current, A (`< i_c`).
    pub i_r: f64,
    /// Write pulse width, s.
    pub t_w: f64,
    /// Maximum read pulse width meeting the read-disturb budget, s.
    pub t_r: f64,
    /// Retention target the point was solved for, s.
    pub t_ret: f64,
    /// Retention-failure budget the point was solved for.
    pub ber_rf: f64,
    /// Read-disturb budget the point was solved for.
    pub ber_rd: f64,
    /// Write-error budget the point was solved for.
    pub ber_we: f64,
}

/// Result of solving for a write pulse width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WritePulse {
    /// Pulse width, s. Zero when the target is already met at zero pulse.
    pub seconds: f64,
    /// True when the error-rate target is satisfied even at zero pulse
    /// width, i.e. the requested rate is above the instantaneous-switching
    /// error floor for this overdrive.
    pub met_at_zero: bool,
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
    }
    Ok(())
}

fn require_non_negative(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be >= 0, got {v}")));
    }
    Ok(())
}

fn require_probability(name: &str, p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "{name} must lie strictly inside (0,1), got {p}"
        )));
    }
    Ok(())
}

/// `-ln(1-p)`, accurate for small p.
fn neg_ln_1m(p: f64) -> f64 {
    -(-p).ln_1p()
}

/// Thermal stability factor `H_K * M_S * V / (2 * k_B * T)`.
pub fn thermal_stability(h_k: f64, m_s: f64, volume: f64, temperature: f64) -> Result<f64> {
    require_positive("h_k", h_k)?;
    require_positive("m_s", m_s)?;
    require_positive("volume", volume)?;
    require_positive("temperature", temperature)?;
    Ok(h_k * m_s * volume / (2.0 * BOLTZMANN * temperature))
}

/// Critical switching current `(4 e k_B T / h) * (alpha/eta) * delta * m_eff_term`, A.
///
/// Linear in both `delta` and `temperature`.
pub fn critical_current(params: &MtjTechParams, delta: f64, temperature: f64) -> Result<f64> {
    params.validate()?;
    require_positive("delta", delta)?;
    require_positive("temperature", temperature)?;
    let prefactor = 4.0 * ELECTRON_CHARGE * BOLTZMANN * temperature / PLANCK;
    Ok(prefactor * (params.alpha / params.eta) * delta * params.m_eff_term)
}

/// Retention failure probability `1 - exp(-t / (tau * e^delta))` after an
/// elapsed time `t`.
pub fn retention_failure_prob(t: f64, tau: f64, delta: f64) -> Result<f64> {
    require_non_negative("t", t)?;
    require_positive("tau", tau)?;
    require_positive("delta", delta)?;
    let rate_arg = (t / tau) * (-delta).exp();
    Ok(-(-rate_arg).exp_m1())
}

/// Retention time sustaining a failure probability `p`:
/// `-tau * e^delta * ln(1-p)`.
pub fn retention_time_for_ber(p: f64, tau: f64, delta: f64) -> Result<f64> {
    require_probability("p", p)?;
    require_positive("tau", tau)?;
    require_positive("delta", delta)?;
    Ok(tau * delta.exp() * neg_ln_1m(p))
}

/// Thermal stability factor required to hold data for `t` seconds at
/// failure probability `p`: `ln(t / (-tau * ln(1-p)))`.
pub fn delta_for_retention(t: f64, p: f64, tau: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_probability("p", p)?;
    require_positive("tau", tau)?;
    let operand = t / (tau * neg_ln_1m(p));
    if !(operand > 0.0) || !operand.is_finite() {
        return Err(Error::Domain(format!(
            "log operand must be positive and finite, got {operand}"
        )));
    }
    Ok(operand.ln())
}

/// Attempt-time constant implied by a (retention time, failure probability,
/// delta) triple: `t / (-ln(1-p) * e^delta)`.
pub fn calibrate_tau(t: f64, p: f64, delta: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_probability("p", p)?;
    require_positive("delta", delta)?;
    Ok((t / neg_ln_1m(p)) * (-delta).exp())
}

/// Read disturb probability `1 - exp(-t_r / (tau * e^{delta (1 - I_r/I_c)}))`.
///
/// The read current lowers the effective barrier because reading shares the
/// write-1 current path; `i_r` must stay strictly below `i_c`.
pub fn read_disturb_prob(t_r: f64, tau: f64, delta: f64, i_r: f64, i_c: f64) -> Result<f64> {
    require_non_negative("t_r", t_r)?;
    require_positive("tau", tau)?;
    require_positive("delta", delta)?;
    require_non_negative("i_r", i_r)?;
    require_positive("i_c", i_c)?;
    if i_r >= i_c {
        return Err(Error::Domain(format!(
            "read current {i_r} A must stay below the critical current {i_c} A"
        )));
    }
    let rate_arg = (t_r / tau) * (-delta * (1.0 - i_r / i_c)).exp();
    Ok(-(-rate_arg).exp_m1())
}

/// Longest read pulse keeping the disturb probability at `p`:
/// `-ln(1-p) * tau * e^{delta (1 - ir_over_ic)}`.
pub fn max_read_pulse(p: f64, tau: f64, delta: f64, ir_over_ic: f64) -> Result<f64> {
    require_probability("p", p)?;
    require_positive("tau", tau)?;
    require_positive("delta", delta)?;
    if !(0.0..1.0).contains(&ir_over_ic) {
        return Err(Error::Domain(format!(
            "ir_over_ic must lie in [0,1), got {ir_over_ic}"
        )));
    }
    Ok(neg_ln_1m(p) * tau * (delta * (1.0 - ir_over_ic)).exp())
}

/// Write error rate for a pulse of width `t_w` at overdrive `r = I_w/I_c`:
///
/// `1 - exp(-pi^2 delta (r-1) / (4 (r e^{(t_w/tau)(r-1)} - 1)))`
///
/// Only defined for `r > 1`; the expression is singular at `r = 1` and a
/// sub-critical write current cannot switch the cell at all.
pub fn write_error_rate(t_w: f64, tau: f64, delta: f64, iw_over_ic: f64) -> Result<f64> {
    require_non_negative("t_w", t_w)?;
    require_positive("tau", tau)?;
    require_positive("delta", delta)?;
    let r = iw_over_ic;
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "iw_over_ic must be strictly greater than 1, got {r}"
        )));
    }
    let amplitude = std::f64::consts::PI.powi(2) * delta * (r - 1.0);
    let growth = r * ((r - 1.0) / tau * t_w).exp() - 1.0;
    Ok(-(-amplitude / (4.0 * growth)).exp_m1())
}

/// Shortest write pulse meeting a write-error-rate target `p` at overdrive
/// `r = iw_over_ic`.
///
/// With `A = pi^2 delta (r-1)` and `L = -ln(1-p)` the closed form is
/// `t_w = tau/(r-1) * ln((A/(4L) + 1) / r)`. When `A/(4L) + 1 <= r` even a
/// zero-length pulse meets the target; `met_at_zero` reports that case.
pub fn write_pulse_for_wer(p: f64, tau: f64, delta: f64, iw_over_ic: f64) -> Result<WritePulse> {
    require_probability("p", p)?;
    require_positive("tau", tau)?;
    require_positive("delta", delta)?;
    let r = iw_over_ic;
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "iw_over_ic must be strictly greater than 1, got {r}"
        )));
    }
    let amplitude = std::f64::consts::PI.powi(2) * delta * (r - 1.0);
    let budget = neg_ln_1m(p);
    let operand = amplitude / (4.0 * budget) + 1.0;
    if operand <= r {
        return Ok(WritePulse { seconds: 0.0, met_at_zero: true });
    }
    Ok(WritePulse {
        seconds: tau / (r - 1.0) * (operand / r).ln(),
        met_at_zero: false,
    })
}

/// Solve a complete operating point for the given targets and current knobs.
///
/// `delta` comes from the retention target, the read pulse bound from the
/// read-disturb budget at that `delta`, the write pulse from the write-error
/// budget, and the currents from the critical current at `t_nom`.
pub fn solve_operating_point(
    params: &MtjTechParams,
    targets: &RetentionTargets,
    knobs: &CurrentKnobs,
) -> Result<OperatingPoint> {
    params.validate()?;
    if !(knobs.ir_over_ic > 0.0 && knobs.ir_over_ic < 1.0) {
        return Err(Error::Domain(format!(
            "ir_over_ic must lie in (0,1), got {}",
            knobs.ir_over_ic
        )));
    }
    let delta = delta_for_retention(targets.t_ret, targets.ber_rf, params.tau_retention)?;
    if !(delta > 0.0) {
        return Err(Error::Domain(format!(
            "targets imply a non-positive thermal stability factor {delta}"
        )));
    }
    let t_r = max_read_pulse(targets.ber_rd, params.tau_retention, delta, knobs.ir_over_ic)?;
    let pulse = write_pulse_for_wer(targets.ber_we, params.tau_write, delta, knobs.iw_over_ic)?;
    let i_c = critical_current(params, delta, params.t_nom)?;
    let point = OperatingPoint {
        delta,
        i_c,
        i_w: knobs.iw_over_ic * i_c,
        i_r: knobs.ir_over_ic * i_c,
        t_w: pulse.seconds,
        t_r,
        t_ret: targets.t_ret,
        ber_rf: targets.ber_rf,
        ber_rd: targets.ber_rd,
        ber_we: targets.ber_we,
    };
    point.check_meets_targets(params)?;
    Ok(point)
}

impl OperatingPoint {
    /// Re-evaluate the three forward equations at the solved fields and
    /// confirm each stays within its stored budget (small numerical slack).
    pub fn check_meets_targets(&self, params: &MtjTechParams) -> Result<()> {
        const SLACK: f64 = 1.0 + 1e-9;
        let p_rf = retention_failure_prob(self.t_ret, params.tau_retention, self.delta)?;
        let p_rd =
            read_disturb_prob(self.t_r, params.tau_retention, self.delta, self.i_r, self.i_c)?;
        let p_we =
            write_error_rate(self.t_w, params.tau_write, self.delta, self.i_w / self.i_c)?;
        for (name, got, budget) in [
            ("retention failure", p_rf, self.ber_rf),
            ("read disturb", p_rd, self.ber_rd),
            ("write error", p_we, self.ber_we),
        ] {
            if got > budget * SLACK {
                return Err(Error::Domain(format!(
                    "solved point violates its {name} budget: {got} > {budget}"
                )));
            }
        }
        if !(self.i_w > self.i_c) || !(self.i_r > 0.0 && self.i_r < self.i_c) {
            return Err(Error::Domain(
                "solved currents violate i_r < i_c < i_w".to_string(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    #[test]
    fn thermal_stability_matches_direct_arithmetic() {
        // Numerator chosen so delta = 60 exactly at 300 K.
        let numerator = 60.0 * 2.0 * BOLTZMANN * 300.0;
        let d = thermal_stability(1.0, 1.0, numerator, 300.0).unwrap();
        assert!(rel_err(d, 60.0) < 1e-12, "delta = {d}");
    }

    #[test]
    fn thermal_stability_linear_in_volume_and_inverse_in_temperature() {
        let base = thermal_stability(1.1e5, 1.2e6, 3e-27, 300.0).unwrap();
        let twice_v = thermal_stability(1.1e5, 1.2e6, 6e-27, 300.0).unwrap();
        let twice_t = thermal_stability(1.1e5, 1.2e6, 3e-27, 600.0).unwrap();
        assert!(rel_err(twice_v, 2.0 * base) < 1e-12);
        assert!(rel_err(twice_t, 0.5 * base) < 1e-12);
    }

    #[test]
    fn thermal_stability_rejects_non_positive_inputs() {
        assert!(thermal_stability(0.0, 1.0, 1.0, 300.0).is_err());
        assert!(thermal_stability(1.0, -1.0, 1.0, 300.0).is_err());
        assert!(thermal_stability(1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn critical_current_matches_frozen_constant_product() {
        // alpha/eta = 0.05, m_eff_term = 3, delta = 40, T = 300 K evaluated
        // with 40-digit arithmetic.
        let params = MtjTechParams {
            alpha: 0.05,
            eta: 1.0,
            m_eff_term: 3.0,
            ..MtjTechParams::default()
        };
        let i_c = critical_current(&params, 40.0, 300.0).unwrap();
        assert!(rel_err(i_c, 2.4036439889486161e-5) < 1e-12, "i_c = {i_c}");
    }

    #[test]
    fn critical_current_is_linear_in_delta_and_temperature() {
        let params = MtjTechParams::default();
        let base = critical_current(&params, 30.0, 300.0).unwrap();
        let twice_delta = critical_current(&params, 60.0, 300.0).unwrap();
        let twice_t = critical_current(&params, 30.0, 600.0).unwrap();
        assert!(rel_err(twice_delta, 2.0 * base) < 1e-12);
        assert!(rel_err(twice_t, 2.0 * base) < 1e-12);
    }

    #[test]
    fn retention_failure_prob_goldens() {
        assert_eq!(retention_failure_prob(0.0, 1e-9, 60.0).unwrap(), 0.0);
        // t/(tau e^60) = 1.142e8 / 1.142e17.
        let p = retention_failure_prob(1.142e8, 1e-9, 60.0).unwrap();
        assert!(rel_err(p, 9.9999352859994909e-10) < 1e-12, "p = {p}");
        // 3 s at delta = 19.5 under tau = 1 s.
        let p = retention_failure_prob(3.0, 1.0, 19.5).unwrap();
        assert!(rel_err(p, 1.0194803406518205e-8) < 1e-12, "p = {p}");
    }

    #[test]
    fn retention_failure_prob_rejects_negative_time() {
        assert!(retention_failure_prob(-1.0, 1.0, 10.0).is_err());
    }

    #[test]
    fn small_probabilities_keep_precision() {
        // For x << 1, 1-exp(-x) = x - x^2/2 + ...; the leading correction is
        // relative x/2, so at x = 1e-15 the result must match x to ~1e-15.
        let tau = 1.0_f64;
        let delta = 40.0_f64;
        let x = 1e-15_f64;
        let t = x * tau * delta.exp();
        let p = retention_failure_prob(t, tau, delta).unwrap();
        assert!(rel_err(p, x) < 1e-12, "p = {p:e}, x = {x:e}");
        assert!(p > 0.0);
    }

    #[test]
    fn retention_time_goldens() {
        let t = retention_time_for_ber(1e-9, 1.0, 39.0).unwrap();
        assert!(rel_err(t, 8.6593400467290447e7) < 1e-12, "t = {t}");
        let t = retention_time_for_ber(1e-5, 1.0, 12.5).unwrap();
        assert!(rel_err(t, 2.683386282162517) < 1e-12, "t = {t}");
        // p -> 0 drives the retention time to 0.
        let t = retention_time_for_ber(1e-300, 1.0, 12.5).unwrap();
        assert!(t < 1e-290);
    }

    #[test]
    fn delta_for_retention_goldens() {
        let d = delta_for_retention(9.46e7, 1e-9, 1.0).unwrap();
        assert!(rel_err(d, 39.088433870468518) < 1e-12, "d = {d}");
        let d = delta_for_retention(3.0, 1e-8, 1.0).unwrap();
        assert!(rel_err(d, 19.519293027620475) < 1e-12, "d = {d}");
    }

    #[test]
    fn delta_retention_round_trip() {
        let (p, tau, delta) = (1e-7, 1.0, 23.5);
        let t = retention_time_for_ber(p, tau, delta).unwrap();
        let d = delta_for_retention(t, p, tau).unwrap();
        assert!(rel_err(d, delta) < 1e-12);
    }

    #[test]
    fn calibrate_tau_goldens_and_round_trip() {
        let tau = calibrate_tau(9.46e7, 1e-9, 39.0).unwrap();
        assert!(rel_err(tau, 1.0924620062210624) < 1e-12, "tau = {tau}");
        let tau = calibrate_tau(3.0, 1e-8, 19.5).unwrap();
        assert!(rel_err(tau, 1.0194803407511196) < 1e-12, "tau = {tau}");

        let (p, tau0, delta) = (3.3e-6, 0.7, 31.0);
        let t = retention_time_for_ber(p, tau0, delta).unwrap();
        assert!(rel_err(calibrate_tau(t, p, delta).unwrap(), tau0) < 1e-12);
    }

    #[test]
    fn read_disturb_reduces_to_retention_at_zero_current() {
        let (t, tau, delta) = (0.37, 2.0, 18.0);
        let a = read_disturb_prob(t, tau, delta, 0.0, 1e-5).unwrap();
        let b = retention_failure_prob(t, tau, delta).unwrap();
        assert_eq!(a, b);
        assert_eq!(read_disturb_prob(0.0, tau, delta, 1e-6, 1e-5).unwrap(), 0.0);
    }

    #[test]
    fn read_disturb_golden() {
        let p = read_disturb_prob(2.29e-9, 1e-9, 27.5, 0.3e-5, 1e-5).unwrap();
        assert!(rel_err(p, 9.9923285093177616e-9) < 1e-12, "p = {p}");
    }

    #[test]
    fn read_disturb_rejects_read_current_at_or_above_critical() {
        assert!(read_disturb_prob(1e-9, 1e-9, 27.5, 1e-5, 1e-5).is_err());
        assert!(read_disturb_prob(1e-9, 1e-9, 27.5, 2e-5, 1e-5).is_err());
    }

    #[test]
    fn max_read_pulse_golden_and_consistency() {
        let t = max_read_pulse(1e-8, 1e-9, 27.5, 0.3).unwrap();
        assert!(rel_err(t, 2.2917581201152247e-9) < 1e-12, "t = {t}");
        // Zero read current makes the bound coincide with the retention time.
        let a = max_read_pulse(1e-8, 1e-9, 27.5, 0.0).unwrap();
        let b = retention_time_for_ber(1e-8, 1e-9, 27.5).unwrap();
        assert!(rel_err(a, b) < 1e-15);
        // Monotone increasing in delta.
        let lo = max_read_pulse(1e-8, 1e-9, 20.0, 0.3).unwrap();
        assert!(t > lo);
    }

    #[test]
    fn write_error_rate_limits() {
        // Zero-length pulse at delta = 40, r = 1.5 saturates to ~1.
        let p = write_error_rate(0.0, 1.0, 40.0, 1.5).unwrap();
        assert!(p > 1.0 - 1e-12, "p = {p}");
        // Long pulses drive the error rate to zero.
        let p = write_error_rate(1e-3, 1e-9, 40.0, 1.5).unwrap();
        assert_eq!(p, 0.0);
        // Golden forward value near the 1e-8 design point.
        let p = write_error_rate(43.1e-9, 1e-9, 27.5, 1.5).unwrap();
        assert!(rel_err(p, 9.8947563863126733e-9) < 1e-12, "p = {p}");
    }

    #[test]
    fn write_error_rate_rejects_sub_critical_overdrive() {
        assert!(write_error_rate(1e-9, 1e-9, 30.0, 1.0).is_err());
        assert!(write_error_rate(1e-9, 1e-9, 30.0, 0.5).is_err());
    }

    #[test]
    fn write_pulse_goldens() {
        let w = write_pulse_for_wer(1e-8, 1e-9, 27.5, 1.5).unwrap();
        assert!(!w.met_at_zero);
        assert!(rel_err(w.seconds, 4.3078839731660887e-8) < 1e-12, "t_w = {}", w.seconds);
        // Higher overdrive shortens the pulse.
        let w2 = write_pulse_for_wer(1e-8, 1e-9, 27.5, 2.0).unwrap();
        assert!(rel_err(w2.seconds, 2.1944884973791232e-8) < 1e-12);
        assert!(w2.seconds < w.seconds);
        // Halving delta shortens the pulse (log-of-delta structure).
        let w3 = write_pulse_for_wer(1e-8, 1e-9, 13.75, 1.5).unwrap();
        assert!(w3.seconds < w.seconds);
    }

    #[test]
    fn write_pulse_target_met_at_zero() {
        // A loose target with strong overdrive and tiny delta needs no pulse:
        // A/(4L)+1 <= r.
        let w = write_pulse_for_wer(0.9999999, 1e-9, 1e-6, 2000.0).unwrap();
        assert!(w.met_at_zero);
        assert_eq!(w.seconds, 0.0);
    }

    #[test]
    fn solve_operating_point_reproduces_buffer_design_point() {
        let params = MtjTechParams::default();
        let targets = RetentionTargets { t_ret: 3.0, ber_rf: 1e-8, ber_rd: 1e-8, ber_we: 1e-8 };
        let knobs = CurrentKnobs { ir_over_ic: 0.3, iw_over_ic: 1.5 };
        let op = solve_operating_point(&params, &targets, &knobs).unwrap();
        assert!(rel_err(op.delta, 19.519293027620475) < 1e-12, "delta = {}", op.delta);
        assert!(op.i_w > op.i_c && op.i_r < op.i_c && op.i_r > 0.0);
        assert!(op.t_w > 0.0 && op.t_r > 0.0);

        // A larger write overdrive leaves delta alone and shrinks t_w.
        let knobs2 = CurrentKnobs { ir_over_ic: 0.3, iw_over_ic: 2.0 };
        let op2 = solve_operating_point(&params, &targets, &knobs2).unwrap();
        assert_eq!(op2.delta, op.delta);
        assert!(op2.t_w < op.t_w);
    }

    #[test]
    fn solve_operating_point_rejects_infeasible_targets() {
        let params = MtjTechParams::default();
        let targets = RetentionTargets { t_ret: 3.0, ber_rf: 1.0, ber_rd: 1e-8, ber_we: 1e-8 };
        let knobs = CurrentKnobs { ir_over_ic: 0.3, iw_over_ic: 1.5 };
        assert!(solve_operating_point(&params, &targets, &knobs).is_err());
    }
}
