//! Numeric tolerances, unit conversions and polar helpers.
//!
//! Angles are degrees at every I/O boundary and radians inside.

use num_complex::Complex64;

/// Round-trip and identity tolerance for conversions.
pub const ROUND_TRIP_TOL: f64 = 1e-12;
/// Smallest denominator magnitude accepted by a conversion.
pub const DENOM_EPS: f64 = 1e-15;
/// Distance from a tan/cot pole at which a stub is rejected.
pub const POLE_EPS: f64 = 1e-9;
/// Guard band around K = 1, |Δ| = 1 and μ = 1.
pub const STABILITY_GUARD: f64 = 1e-9;
/// Residual every synthesized matching network must reach.
pub const SYNTH_RESIDUAL: f64 = 1e-9;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Free-space wave impedance, Ω.
pub const ETA0: f64 = 376.730_313_668;

pub fn from_polar_deg(mag: f64, deg: f64) -> Complex64 {
    Complex64::from_polar(mag, deg.to_radians())
}

/// Magnitude and angle in degrees.
pub fn to_polar_deg(z: Complex64) -> (f64, f64) {
    (z.norm(), z.arg().to_degrees())
}

pub fn power_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

pub fn db_to_power(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// 20·log10 of a wave magnitude.
pub fn mag_db(mag: f64) -> f64 {
    20.0 * mag.log10()
}

pub fn db_to_mag(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Parses a frequency such as `3.2GHz`, `3.2 ghz`, `800 MHz` or `3.2e9`.
/// A bare number is taken as Hz.
pub fn parse_frequency(text: &str) -> Option<f64> {
    let t = text.trim();
    let split = t
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let value: f64 = num.trim().parse().ok()?;
    let mult = match unit.trim().to_ascii_lowercase().as_str() {
        "" | "hz" => 1.0,
        "khz" => 1e3,
        "mhz" => 1e6,
        "ghz" => 1e9,
        _ => return None,
    };
    let hz = value * mult;
    (hz.is_finite() && hz > 0.0).then_some(hz)
}
