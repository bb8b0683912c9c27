use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{looking_back_gamma, MatchNetwork, Synthesizer};
use crate::twoport::ElementModel;
use crate::units::SYNTH_RESIDUAL;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StubKind {
    Open,
    Short,
}

/// Shunt stub at the `z0` port followed by a series line toward the
/// device. Lengths are fractions of the guided wavelength at `freq_hz`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StubSolution {
    pub stub_len_wl: f64,
    pub line_len_wl: f64,
    pub stub_kind: StubKind,
    pub z0_ohm: f64,
    pub freq_hz: f64,
    pub target: Complex64,
    pub achieved_gamma: Complex64,
    pub residual: f64,
}

impl StubSolution {
    pub fn elements(&self) -> Vec<ElementModel> {
        stub_elements(self.stub_kind, self.stub_len_wl, self.line_len_wl, self.z0_ohm, self.freq_hz)
    }

    pub fn total_len_wl(&self) -> f64 {
        self.stub_len_wl + self.line_len_wl
    }
}

fn stub_elements(kind: StubKind, stub: f64, line: f64, z0: f64, f: f64) -> Vec<ElementModel> {
    let s = match kind {
        StubKind::Open => ElementModel::OpenStub { z0_ohm: z0, length_wl: stub, ref_freq_hz: f },
        StubKind::Short => ElementModel::ShortStub { z0_ohm: z0, length_wl: stub, ref_freq_hz: f },
    };
    vec![s, ElementModel::Line { z0_ohm: z0, length_wl: line, ref_freq_hz: f }]
}

/// Normalized stub susceptance for a stub of `len` wavelengths.
fn stub_susceptance(kind: StubKind, len: f64) -> f64 {
    let (s, c) = (2.0 * PI * len).sin_cos();
    match kind {
        StubKind::Open => s / c,
        StubKind::Short => -c / s,
    }
}

fn stub_length_for(kind: StubKind, b: f64) -> f64 {
    let theta = match kind {
        StubKind::Open => b.atan(),
        StubKind::Short => (-1.0 / b).atan(),
    };
    (theta / (2.0 * PI)).rem_euclid(0.5)
}

/// Reflection at the stub node looking toward the port: y = 1 + jb.
fn node_gamma(b: f64) -> Complex64 {
    let jb = Complex64::new(0.0, b);
    -jb / (2.0 + jb)
}

/// Line length rotating `node` onto the phase of `target`.
fn line_length_for(node: Complex64, target: Complex64) -> f64 {
    ((node.arg() - target.arg()) / (4.0 * PI)).rem_euclid(0.5)
}

/// Bisection on the stub length so that |Γ_node| hits `rho`, starting
/// from the closed-form estimate.
fn refine_stub(kind: StubKind, rho: f64, estimate: f64) -> Option<f64> {
    let f = |len: f64| node_gamma(stub_susceptance(kind, len)).norm() - rho;
    let (mut lo, mut hi) = (estimate - 1e-3, estimate + 1e-3);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some((0.5 * (lo + hi)).rem_euclid(0.5))
}

fn build(kind: StubKind, stub: f64, line: f64, target: Complex64, z0: f64, f: f64) -> Result<StubSolution> {
    let achieved_gamma = looking_back_gamma(&stub_elements(kind, stub, line, z0, f), z0, f)?;
    Ok(StubSolution {
        stub_len_wl: stub,
        line_len_wl: line,
        stub_kind: kind,
        z0_ohm: z0,
        freq_hz: f,
        target,
        achieved_gamma,
        residual: (achieved_gamma - target).norm(),
    })
}

/// Both single-stub solutions for `target`, shortest total length first.
pub fn synth_single_stub(target: Complex64, z0: f64, freq_hz: f64, kind: StubKind) -> Result<Vec<StubSolution>> {
    let rho = target.norm();
    if rho >= 1.0 {
        return Err(Error::ReflectionOutOfDisk(rho));
    }
    if rho < 1e-12 {
        return Err(Error::AlreadyMatched);
    }
    // |−jb/(2 + jb)| = ρ  ⇒  b = ±2ρ/√(1 − ρ²)
    let b_mag = 2.0 * rho / (1.0 - rho * rho).sqrt();
    let mut out = Vec::new();
    for b in [b_mag, -b_mag] {
        let mut stub = stub_length_for(kind, b);
        let node = node_gamma(stub_susceptance(kind, stub));
        let mut line = line_length_for(node, target);
        let mut sol = build(kind, stub, line, target, z0, freq_hz);
        if matches!(&sol, Ok(s) if s.residual >= SYNTH_RESIDUAL) {
            if let Some(refined) = refine_stub(kind, rho, stub) {
                stub = refined;
                line = line_length_for(node_gamma(stub_susceptance(kind, stub)), target);
                sol = build(kind, stub, line, target, z0, freq_hz);
            }
        }
        let sol = sol?;
        if sol.residual >= SYNTH_RESIDUAL {
            return Err(Error::NoSolution(format!("residual {} after refinement", sol.residual)));
        }
        out.push(sol);
    }
    out.sort_by(|a, b| a.total_len_wl().total_cmp(&b.total_len_wl()));
    Ok(out)
}

pub struct StubSynthesizer {
    kind: StubKind,
}

impl StubSynthesizer {
    pub fn new(kind: StubKind) -> Self {
        Self { kind }
    }
}

impl Synthesizer for StubSynthesizer {
    fn name(&self) -> &'static str {
        match self.kind {
            StubKind::Open => "stub",
            StubKind::Short => "stub-short",
        }
    }

    fn description(&self) -> &'static str {
        match self.kind {
            StubKind::Open => "open shunt stub at the port plus series line",
            StubKind::Short => "shorted shunt stub at the port plus series line",
        }
    }

    fn synthesize(&self, target: Complex64, z0: f64, freq_hz: f64) -> Result<Vec<MatchNetwork>> {
        Ok(synth_single_stub(target, z0, freq_hz, self.kind)?
            .into_iter()
            .map(MatchNetwork::Stub)
            .collect())
    }
}
