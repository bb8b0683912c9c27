//! Quasi-static microstrip model (Hammerstad–Jensen with thickness
//! correction) and realization of stub networks as physical lines.
//!
//! No dispersion or loss is modeled.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::synth::StubSolution;
use crate::units::{ETA0, SPEED_OF_LIGHT};
use crate::{Error, Result};

const MIN_ASPECT: f64 = 0.01;
const MAX_ASPECT: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Substrate {
    pub name: String,
    pub eps_r: f64,
    pub h_mm: f64,
    pub t_um: f64,
}

impl Substrate {
    pub fn new(name: impl Into<String>, eps_r: f64, h_mm: f64, t_um: f64) -> Result<Self> {
        let s = Self { name: name.into(), eps_r, h_mm, t_um };
        s.validate()?;
        Ok(s)
    }

    /// Rogers RO4003C, 32 mil core, 1/2 oz copper (design Dk 3.38).
    pub fn ro4003c() -> Self {
        Self { name: "RO4003C".into(), eps_r: 3.38, h_mm: 0.813, t_um: 17.0 }
    }

    pub fn air(h_mm: f64) -> Self {
        Self { name: "air".into(), eps_r: 1.0, h_mm, t_um: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_r >= 1.0 && self.eps_r.is_finite()) {
            return Err(Error::InvalidSubstrate(format!("eps_r {} must be ≥ 1", self.eps_r)));
        }
        if !(self.h_mm > 0.0 && self.h_mm.is_finite()) {
            return Err(Error::InvalidSubstrate(format!("h {} mm must be positive", self.h_mm)));
        }
        if !(self.t_um >= 0.0 && self.t_um.is_finite()) {
            return Err(Error::InvalidSubstrate(format!("t {} µm must be non-negative", self.t_um)));
        }
        Ok(())
    }
}

impl Default for Substrate {
    fn default() -> Self {
        Self::ro4003c()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicrostripLine {
    pub w_mm: f64,
    pub length_mm: f64,
    /// Electrical length in wavelengths at the design frequency.
    pub length_wl: f64,
    pub z0_ohm: f64,
    pub eps_eff: f64,
    pub substrate: Substrate,
}

/// Impedance of a zero-thickness line in air at normalized width `u`.
fn z01(u: f64) -> f64 {
    let f = 6.0 + (2.0 * PI - 6.0) * (-(30.666 / u).powf(0.7528)).exp();
    ETA0 / (2.0 * PI) * (f / u + (1.0 + 4.0 / (u * u)).sqrt()).ln()
}

/// Zero-thickness effective permittivity.
fn eps_eff0(u: f64, eps_r: f64) -> f64 {
    let a = 1.0
        + ((u.powi(4) + (u / 52.0).powi(2)) / (u.powi(4) + 0.432)).ln() / 49.0
        + (1.0 + (u / 18.1).powi(3)).ln() / 18.7;
    let b = 0.564 * ((eps_r - 0.9) / (eps_r + 3.0)).powf(0.053);
    (eps_r + 1.0) / 2.0 + (eps_r - 1.0) / 2.0 * (1.0 + 10.0 / u).powf(-a * b)
}

/// Characteristic impedance and effective permittivity of a line of width
/// `w_mm`. `freq_hz` is accepted for interface symmetry; the model is
/// quasi-static.
pub fn analyze(w_mm: f64, sub: &Substrate, _freq_hz: f64) -> Result<(f64, f64)> {
    sub.validate()?;
    let u = w_mm / sub.h_mm;
    if !(MIN_ASPECT..=MAX_ASPECT).contains(&u) {
        return Err(Error::AspectRatioOutOfRange(u));
    }
    Ok(analyze_u(u, sub))
}

fn analyze_u(u: f64, sub: &Substrate) -> (f64, f64) {
    let t = sub.t_um * 1e-3 / sub.h_mm;
    let (du1, dur) = if t > 0.0 {
        let coth = 1.0 / (6.517 * u).sqrt().tanh();
        let du1 = t / PI * (1.0 + 4.0 * E / (t * coth * coth)).ln();
        let dur = 0.5 * (1.0 + 1.0 / (sub.eps_r - 1.0).sqrt().cosh()) * du1;
        (du1, dur)
    } else {
        (0.0, 0.0)
    };
    let (u1, ur) = (u + du1, u + dur);
    let e = eps_eff0(ur, sub.eps_r);
    let z0 = z01(ur) / e.sqrt();
    let eps_eff = e * (z01(u1) / z01(ur)).powi(2);
    (z0, eps_eff)
}

/// Width giving `z0_target`, found by bisection in log(w/h).
pub fn synthesize(z0_target: f64, sub: &Substrate, _freq_hz: f64) -> Result<MicrostripLine> {
    if !(10.0..=200.0).contains(&z0_target) {
        return Err(Error::TargetOutOfRange(z0_target));
    }
    sub.validate()?;
    let z_at = |u: f64| analyze_u(u, sub).0;
    let (mut lo, mut hi) = (MIN_ASPECT, MAX_ASPECT);
    // z0 decreases with width.
    if z_at(lo) < z0_target || z_at(hi) > z0_target {
        return Err(Error::TargetOutOfRange(z0_target));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if z_at(mid) > z0_target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-14 {
            break;
        }
    }
    let u = (lo * hi).sqrt();
    let w_mm = u * sub.h_mm;
    let (z0, eps_eff) = analyze_u(u, sub);
    Ok(MicrostripLine { w_mm, length_mm: 0.0, length_wl: 0.0, z0_ohm: z0, eps_eff, substrate: sub.clone() })
}

/// Physical length in mm of `len_frac` guided wavelengths.
pub fn electrical_to_physical(len_frac: f64, eps_eff: f64, freq_hz: f64) -> f64 {
    len_frac * SPEED_OF_LIGHT / (freq_hz * eps_eff.sqrt()) * 1e3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedStubNetwork {
    pub line: MicrostripLine,
    pub stub: MicrostripLine,
}

pub fn realize_stub_network(sol: &StubSolution, sub: &Substrate, freq_hz: f64) -> Result<RealizedStubNetwork> {
    let base = synthesize(sol.z0_ohm, sub, freq_hz)?;
    let with_len = |len_wl: f64| MicrostripLine {
        length_mm: electrical_to_physical(len_wl, base.eps_eff, freq_hz),
        length_wl: len_wl,
        ..base.clone()
    };
    Ok(RealizedStubNetwork { line: with_len(sol.line_len_wl), stub: with_len(sol.stub_len_wl) })
}
