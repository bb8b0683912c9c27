//! Rollett K–Δ test, Edwards–Sinsky μ-test and stability circles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::twoport::TwoPortS;
use crate::units::{DENOM_EPS, STABILITY_GUARD};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unconditional,
    Conditional,
}

/// Which side of a stability circle keeps the opposite port's |Γ| below 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StableRegion {
    InsideCircle,
    OutsideCircle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityCircle {
    pub center: Complex64,
    pub radius: f64,
    pub stable_region: StableRegion,
}

impl StabilityCircle {
    /// True when every point of the closed unit disk lies in the stable region.
    pub fn unit_disk_stable(&self) -> bool {
        let d = self.center.norm();
        match self.stable_region {
            StableRegion::OutsideCircle => d - self.radius > 1.0,
            StableRegion::InsideCircle => self.radius - d > 1.0,
        }
    }
}

/// Stability boundary in one reflection plane. When the circle's center
/// runs off to infinity the boundary is a straight line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum StabilityBoundary {
    Circle(StabilityCircle),
    HalfPlane,
}

impl StabilityBoundary {
    pub fn circle(&self) -> Option<&StabilityCircle> {
        match self {
            StabilityBoundary::Circle(c) => Some(c),
            StabilityBoundary::HalfPlane => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub freq_hz: f64,
    pub delta: Complex64,
    pub delta_mag: f64,
    /// `None` for a unilateral device, where K is unbounded.
    pub k: Option<f64>,
    pub mu: f64,
    pub mu_prime: f64,
    pub verdict: Verdict,
    /// Set when K, |Δ| or μ sits within the guard band around 1.
    pub boundary: bool,
    pub unilateral: bool,
    pub source: StabilityBoundary,
    pub load: StabilityBoundary,
}

impl StabilityReport {
    pub fn is_unconditional(&self) -> bool {
        self.verdict == Verdict::Unconditional
    }
}

pub fn delta(net: &TwoPortS) -> Complex64 {
    net.s11 * net.s22 - net.s12 * net.s21
}

pub fn k_factor(net: &TwoPortS) -> Result<f64> {
    let loop_gain = (net.s12 * net.s21).norm();
    if loop_gain < DENOM_EPS {
        return Err(Error::UnilateralDevice);
    }
    let d = delta(net).norm_sqr();
    Ok((1.0 - net.s11.norm_sqr() - net.s22.norm_sqr() + d) / (2.0 * loop_gain))
}

/// Distance from the origin of the Γ_L plane to the nearest unstable point.
pub fn mu_test(net: &TwoPortS) -> Result<f64> {
    let d = delta(net);
    let den = (net.s22 - d * net.s11.conj()).norm() + (net.s12 * net.s21).norm();
    if den < DENOM_EPS {
        return Err(Error::DegenerateNetwork("μ denominator vanishes"));
    }
    Ok((1.0 - net.s11.norm_sqr()) / den)
}

/// Source-plane dual of [`mu_test`].
pub fn mu_prime(net: &TwoPortS) -> Result<f64> {
    mu_test(&net.transposed())
}

fn circle_for(
    s_self: Complex64,
    s_other: Complex64,
    d: Complex64,
    loop_gain: Complex64,
    side: &'static str,
) -> Result<StabilityCircle> {
    let den = s_self.norm_sqr() - d.norm_sqr();
    if den.abs() < DENOM_EPS {
        return Err(Error::CircleDegenerate(side));
    }
    let center = (s_self - d * s_other.conj()).conj() / den;
    let radius = (loop_gain / den).norm();
    // Γ = 0 maps the opposite port's reflection to s_other.
    let origin_stable = s_other.norm() < 1.0;
    let origin_inside = center.norm() < radius;
    let stable_region = if origin_stable == origin_inside {
        StableRegion::InsideCircle
    } else {
        StableRegion::OutsideCircle
    };
    Ok(StabilityCircle { center, radius, stable_region })
}

/// Returns `(source, load)` circles: the Γ_S locus of |Γ_out| = 1 and the
/// Γ_L locus of |Γ_in| = 1.
pub fn stability_circles(net: &TwoPortS) -> Result<(StabilityCircle, StabilityCircle)> {
    let d = delta(net);
    let p = net.s12 * net.s21;
    let source = circle_for(net.s11, net.s22, d, p, "source")?;
    let load = circle_for(net.s22, net.s11, d, p, "load")?;
    Ok((source, load))
}

fn boundary_or_half_plane(r: Result<StabilityCircle>) -> Result<StabilityBoundary> {
    match r {
        Ok(c) => Ok(StabilityBoundary::Circle(c)),
        Err(Error::CircleDegenerate(_)) => Ok(StabilityBoundary::HalfPlane),
        Err(e) => Err(e),
    }
}

pub fn classify(net: &TwoPortS) -> Result<StabilityReport> {
    let d = delta(net);
    let delta_mag = d.norm();
    let mu = mu_test(net)?;
    let mu_p = mu_prime(net)?;
    let (k, unilateral) = match k_factor(net) {
        Ok(k) => (Some(k), false),
        Err(Error::UnilateralDevice) => (None, true),
        Err(e) => return Err(e),
    };

    let near = |x: f64| (x - 1.0).abs() < STABILITY_GUARD;
    let (k_delta_pass, boundary) = match k {
        Some(k) => (k > 1.0 && delta_mag < 1.0, near(k) || near(delta_mag) || near(mu)),
        // K → ∞: the K–Δ test reduces to both port reflections inside the disk.
        None => {
            let (a, b) = (net.s11.norm(), net.s22.norm());
            (a < 1.0 && b < 1.0, near(a) || near(b) || near(mu))
        }
    };
    let mu_pass = mu > 1.0;
    if !boundary && k_delta_pass != mu_pass {
        return Err(Error::StabilityTestDisagreement { k: k.unwrap_or(f64::INFINITY), delta_mag, mu });
    }
    let verdict = if mu_pass && k_delta_pass && !boundary {
        Verdict::Unconditional
    } else {
        Verdict::Conditional
    };

    let p = net.s12 * net.s21;
    let source = boundary_or_half_plane(circle_for(net.s11, net.s22, d, p, "source"))?;
    let load = boundary_or_half_plane(circle_for(net.s22, net.s11, d, p, "load"))?;

    Ok(StabilityReport {
        freq_hz: net.freq_hz,
        delta: d,
        delta_mag,
        k,
        mu,
        mu_prime: mu_p,
        verdict,
        boundary,
        unilateral,
        source,
        load,
    })
}
