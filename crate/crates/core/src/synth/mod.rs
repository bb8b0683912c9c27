//! Matching-network synthesis.
//!
//! Each network family implements [`Synthesizer`] and is looked up by name
//! in a [`SynthRegistry`]. A synthesized network is always re-analyzed
//! through the element models before it is returned.

mod lumped;
mod stub;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::twoport::{cascade_all, AbcdMatrix, ElementModel};
use crate::{Error, Result};

pub use lumped::{synth_lumped, LumpedSolution, LumpedSynthesizer, LumpedTopology};
pub use stub::{synth_single_stub, StubKind, StubSolution, StubSynthesizer};

/// A network placed between a `z0` port and the device. Elements are
/// ordered from the port toward the device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "style", rename_all = "snake_case")]
pub enum MatchNetwork {
    Lumped(LumpedSolution),
    Stub(StubSolution),
}

impl MatchNetwork {
    pub fn elements(&self) -> Vec<ElementModel> {
        match self {
            MatchNetwork::Lumped(s) => s.elements.clone(),
            MatchNetwork::Stub(s) => s.elements(),
        }
    }

    pub fn achieved_gamma(&self) -> Complex64 {
        match self {
            MatchNetwork::Lumped(s) => s.achieved_gamma,
            MatchNetwork::Stub(s) => s.achieved_gamma,
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            MatchNetwork::Lumped(s) => s.residual,
            MatchNetwork::Stub(s) => s.residual,
        }
    }

    pub fn style(&self) -> &'static str {
        match self {
            MatchNetwork::Lumped(_) => "lumped",
            MatchNetwork::Stub(_) => "stub",
        }
    }

    /// Chain matrix from the port side to the device side.
    pub fn port_to_device(&self, freq_hz: f64) -> Result<AbcdMatrix> {
        let mats = self
            .elements()
            .iter()
            .map(|e| e.abcd(freq_hz))
            .collect::<Result<Vec<_>>>()?;
        cascade_all(freq_hz, &mats)
    }

    /// Chain matrix from the device side to the port side. Every element
    /// model is symmetric, so reversing the order suffices.
    pub fn device_to_port(&self, freq_hz: f64) -> Result<AbcdMatrix> {
        let mats = self
            .elements()
            .iter()
            .rev()
            .map(|e| e.abcd(freq_hz))
            .collect::<Result<Vec<_>>>()?;
        cascade_all(freq_hz, &mats)
    }
}

/// Reflection seen from the device plane looking back through `elements`
/// into a `z0` termination.
pub fn looking_back_gamma(elements: &[ElementModel], z0: f64, freq_hz: f64) -> Result<Complex64> {
    let mats = elements.iter().map(|e| e.abcd(freq_hz)).collect::<Result<Vec<_>>>()?;
    let m = cascade_all(freq_hz, &mats)?;
    Ok(m.to_s(z0)?.s22)
}

/// Re-derives the reflection a network presents at `freq_hz`.
pub fn verify_network(net: &MatchNetwork, z0: f64, freq_hz: f64) -> Result<Complex64> {
    looking_back_gamma(&net.elements(), z0, freq_hz)
}

pub trait Synthesizer: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// All realizable networks presenting `target` to the device at `freq_hz`.
    fn synthesize(&self, target: Complex64, z0: f64, freq_hz: f64) -> Result<Vec<MatchNetwork>>;
}

#[derive(Clone)]
pub struct SynthRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Synthesizer>>,
}

impl SynthRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// `lumped`, `stub` (open stub) and `stub-short`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(LumpedSynthesizer));
        r.register(Arc::new(StubSynthesizer::new(StubKind::Open)));
        r.register(Arc::new(StubSynthesizer::new(StubKind::Short)));
        r
    }

    pub fn register(&mut self, s: Arc<dyn Synthesizer>) {
        self.entries.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Result<&Arc<dyn Synthesizer>> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownSynthesizer(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for SynthRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
