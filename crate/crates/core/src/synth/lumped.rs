use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{looking_back_gamma, MatchNetwork, Synthesizer};
use crate::twoport::{gamma_to_z, ElementModel, Lumped};
use crate::units::SYNTH_RESIDUAL;
use crate::{Error, Result};

/// Which element sits at the `z0` port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LumpedTopology {
    ShuntFirst,
    SeriesFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LumpedSolution {
    pub topology: LumpedTopology,
    /// Port side first. A single element when the other reactance vanishes.
    pub elements: Vec<ElementModel>,
    pub freq_hz: f64,
    pub target: Complex64,
    pub achieved_gamma: Complex64,
    pub residual: f64,
}

/// Reactances below this fraction of `z0` are treated as absent.
const NEGLIGIBLE_REACTANCE: f64 = 1e-12;

fn series_part(x: f64, w: f64) -> Lumped {
    if x > 0.0 {
        Lumped::Inductor { henry: x / w }
    } else {
        Lumped::Capacitor { farad: -1.0 / (w * x) }
    }
}

fn shunt_part(b: f64, w: f64) -> Lumped {
    if b > 0.0 {
        Lumped::Capacitor { farad: b / w }
    } else {
        Lumped::Inductor { henry: -1.0 / (w * b) }
    }
}

/// Signed roots ±√r, collapsed to one when r is zero.
fn signed_roots(radicand: f64) -> Vec<f64> {
    let r = radicand.max(0.0).sqrt();
    if r == 0.0 {
        vec![0.0]
    } else {
        vec![r, -r]
    }
}

/// Enumerates every two-element L-section that presents `target` to the
/// device, looking back through the network into `z0`.
pub fn synth_lumped(target: Complex64, z0: f64, freq_hz: f64) -> Result<Vec<LumpedSolution>> {
    if target.norm() >= 1.0 {
        return Err(Error::ReflectionOutOfDisk(target.norm()));
    }
    if target.norm() < 1e-12 {
        return Err(Error::AlreadyMatched);
    }
    let w = 2.0 * PI * freq_hz;
    let z_t = gamma_to_z(target, z0)?;
    let y_t = 1.0 / z_t;
    let g0 = 1.0 / z0;

    let mut candidates: Vec<(LumpedTopology, Vec<ElementModel>)> = Vec::new();

    // Shunt B at the port, series X toward the device:
    // Re 1/(G0 + jB) = R_t  ⇒  B² = G0/R_t − G0²;  X = X_t + B/(G0² + B²).
    let radicand = g0 / z_t.re - g0 * g0;
    if z_t.re > 0.0 && radicand >= -1e-15 * g0 * g0 {
        for b in signed_roots(radicand) {
            let x = z_t.im + b / (g0 * g0 + b * b);
            let mut els = Vec::new();
            if (b * z0).abs() > NEGLIGIBLE_REACTANCE {
                els.push(ElementModel::Shunt { part: shunt_part(b, w) });
            }
            if (x / z0).abs() > NEGLIGIBLE_REACTANCE {
                els.push(ElementModel::Series { part: series_part(x, w) });
            }
            candidates.push((LumpedTopology::ShuntFirst, els));
        }
    }

    // Series X at the port, shunt B toward the device:
    // Re 1/(z0 + jX) = G_t  ⇒  X² = z0/G_t − z0²;  B = B_t + X/(z0² + X²).
    let radicand = z0 / y_t.re - z0 * z0;
    if y_t.re > 0.0 && radicand >= -1e-15 * z0 * z0 {
        for x in signed_roots(radicand) {
            let b = y_t.im + x / (z0 * z0 + x * x);
            let mut els = Vec::new();
            if (x / z0).abs() > NEGLIGIBLE_REACTANCE {
                els.push(ElementModel::Series { part: series_part(x, w) });
            }
            if (b * z0).abs() > NEGLIGIBLE_REACTANCE {
                els.push(ElementModel::Shunt { part: shunt_part(b, w) });
            }
            candidates.push((LumpedTopology::SeriesFirst, els));
        }
    }

    let mut out = Vec::new();
    for (topology, elements) in candidates {
        if elements.is_empty() {
            continue;
        }
        let achieved_gamma = looking_back_gamma(&elements, z0, freq_hz)?;
        let residual = (achieved_gamma - target).norm();
        if residual >= SYNTH_RESIDUAL {
            continue;
        }
        let sol = LumpedSolution { topology, elements, freq_hz, target, achieved_gamma, residual };
        // Single-element degenerate cases can appear from both topologies.
        if !out.iter().any(|o: &LumpedSolution| o.elements == sol.elements) {
            out.push(sol);
        }
    }
    if out.is_empty() {
        return Err(Error::NoRealizableSection);
    }
    Ok(out)
}

pub struct LumpedSynthesizer;

impl Synthesizer for LumpedSynthesizer {
    fn name(&self) -> &'static str {
        "lumped"
    }

    fn description(&self) -> &'static str {
        "two-element L-section (shunt-first and series-first)"
    }

    fn synthesize(&self, target: Complex64, z0: f64, freq_hz: f64) -> Result<Vec<MatchNetwork>> {
        Ok(synth_lumped(target, z0, freq_hz)?.into_iter().map(MatchNetwork::Lumped).collect())
    }
}
