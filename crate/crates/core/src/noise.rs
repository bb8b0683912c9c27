//! Two-port noise model: noise factor for a source termination and
//! constant-noise circles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::units::power_db;
use crate::{Error, Result};

/// Vendor noise parameters at one frequency. `f_min` is a linear factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub f_min: f64,
    pub gamma_opt: Complex64,
    pub r_n_ohm: f64,
    pub freq_hz: f64,
}

impl NoiseParams {
    pub fn new(f_min: f64, gamma_opt: Complex64, r_n_ohm: f64, freq_hz: f64) -> Result<Self> {
        if !(f_min >= 1.0 && f_min.is_finite()) {
            return Err(Error::InvalidNoiseParams(format!("F_min {f_min} must be ≥ 1")));
        }
        if gamma_opt.norm() >= 1.0 {
            return Err(Error::InvalidNoiseParams(format!("|Γ_opt| = {} must be < 1", gamma_opt.norm())));
        }
        if !(r_n_ohm >= 0.0 && r_n_ohm.is_finite()) {
            return Err(Error::InvalidNoiseParams(format!("R_n {r_n_ohm} Ω must be ≥ 0")));
        }
        if !(freq_hz > 0.0) {
            return Err(Error::InvalidNoiseParams(format!("frequency {freq_hz} Hz")));
        }
        Ok(Self { f_min, gamma_opt, r_n_ohm, freq_hz })
    }

    pub fn f_min_db(&self) -> f64 {
        power_db(self.f_min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseCircle {
    pub f_target: f64,
    pub center: Complex64,
    pub radius: f64,
}

/// F = F_min + (4 R_n / Z0) · |Γ_s − Γ_opt|² / ((1 − |Γ_s|²) |1 + Γ_opt|²)
pub fn noise_figure(gamma_s: Complex64, np: &NoiseParams, z0: f64) -> Result<f64> {
    if gamma_s.norm() >= 1.0 {
        return Err(Error::ReflectionOutOfDisk(gamma_s.norm()));
    }
    let one = Complex64::new(1.0, 0.0);
    let excess = 4.0 * np.r_n_ohm / z0 * (gamma_s - np.gamma_opt).norm_sqr()
        / ((1.0 - gamma_s.norm_sqr()) * (one + np.gamma_opt).norm_sqr());
    Ok(np.f_min + excess)
}

pub fn noise_circle(f_target: f64, np: &NoiseParams, z0: f64) -> Result<NoiseCircle> {
    if f_target < np.f_min {
        return Err(Error::TargetBelowFmin { target: f_target, f_min: np.f_min });
    }
    let excess = f_target - np.f_min;
    if np.r_n_ohm == 0.0 {
        // Every termination already gives F_min.
        return Ok(NoiseCircle { f_target, center: Complex64::new(0.0, 0.0), radius: 1.0 });
    }
    let one = Complex64::new(1.0, 0.0);
    let n = excess * (one + np.gamma_opt).norm_sqr() * z0 / (4.0 * np.r_n_ohm);
    let center = np.gamma_opt / (1.0 + n);
    let radius = (n * n + n * (1.0 - np.gamma_opt.norm_sqr())).sqrt() / (1.0 + n);
    Ok(NoiseCircle { f_target, center, radius })
}
