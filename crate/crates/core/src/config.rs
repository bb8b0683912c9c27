//! Design configuration, read from TOML.
//!
//! ```toml
//! sparams = "bfp640.s2p"      # relative to the config file
//! f0 = "3.2 GHz"              # or a number in Hz
//! z0 = 50.0
//! network_style = "both"      # lumped | distributed | both
//! stub = "open"               # open | short
//! resistor_series = "E24"     # exact | E12 | E24
//!
//! [substrate]
//! name = "RO4003C"
//! eps_r = 3.38
//! h_mm = 0.813
//! t_um = 17.0
//!
//! [bias]
//! v_supply = 5.0
//! v_x = 1.5
//! v_ce = 2.0
//! i_c_ma = 20.0
//! v_be = 0.8
//! beta = 200.0
//! k = 50.0
//!
//! [noise]
//! f_min_db = 0.6              # or f_min (linear)
//! gamma_opt_mag = 0.3
//! gamma_opt_deg = 45.0
//! r_n_ohm = 10.0
//!
//! [sweep]
//! f_start = "3.0 GHz"
//! f_stop = "3.4 GHz"
//! n_points = 41
//! ```
//!
//! Every section is optional. Missing `[substrate]` and `[bias]` fields
//! take the RO4003C and BFP640 defaults; a missing `[bias]` section skips
//! bias design.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bias::{BiasSpec, ResistorSeries};
use crate::microstrip::Substrate;
use crate::noise::NoiseParams;
use crate::synth::StubKind;
use crate::units::{db_to_power, from_polar_deg, parse_frequency};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkStyle {
    Lumped,
    Distributed,
    Both,
}

impl std::str::FromStr for NetworkStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lumped" => Ok(Self::Lumped),
            "distributed" | "stub" => Ok(Self::Distributed),
            "both" => Ok(Self::Both),
            other => Err(Error::Config(format!("unknown network style {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub f_start_hz: f64,
    pub f_stop_hz: f64,
    pub n_points: usize,
}

impl Sweep {
    pub fn new(f_start_hz: f64, f_stop_hz: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::Config(format!("sweep needs at least 2 points, got {n_points}")));
        }
        if !(f_start_hz < f_stop_hz) || f_start_hz <= 0.0 {
            return Err(Error::Config(format!("sweep start {f_start_hz} Hz must be below stop {f_stop_hz} Hz")));
        }
        Ok(Self { f_start_hz, f_stop_hz, n_points })
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let step = (self.f_stop_hz - self.f_start_hz) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| if i + 1 == self.n_points { self.f_stop_hz } else { self.f_start_hz + step * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignConfig {
    pub sparam_source: PathBuf,
    pub f0_hz: f64,
    pub z0_ohm: f64,
    pub substrate: Substrate,
    pub bias: Option<BiasSpec>,
    pub noise: Option<NoiseParams>,
    pub network_style: NetworkStyle,
    pub stub_kind: StubKind,
    pub resistor_series: ResistorSeries,
    pub sweep: Option<Sweep>,
}

impl DesignConfig {
    pub fn new(sparam_source: impl Into<PathBuf>, f0_hz: f64) -> Self {
        Self {
            sparam_source: sparam_source.into(),
            f0_hz,
            z0_ohm: 50.0,
            substrate: Substrate::default(),
            bias: None,
            noise: None,
            network_style: NetworkStyle::Both,
            stub_kind: StubKind::Open,
            resistor_series: ResistorSeries::Exact,
            sweep: None,
        }
    }

    /// Synthesizer registry names implied by the style and stub kind.
    pub fn synthesizer_names(&self) -> Vec<&'static str> {
        let stub = match self.stub_kind {
            StubKind::Open => "stub",
            StubKind::Short => "stub-short",
        };
        match self.network_style {
            NetworkStyle::Lumped => vec!["lumped"],
            NetworkStyle::Distributed => vec![stub],
            NetworkStyle::Both => vec![stub, "lumped"],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f0_hz > 0.0 && self.f0_hz.is_finite()) {
            return Err(Error::Config(format!("f0 {} Hz must be positive", self.f0_hz)));
        }
        if !(self.z0_ohm > 0.0 && self.z0_ohm.is_finite()) {
            return Err(Error::Config(format!("z0 {} Ω must be positive", self.z0_ohm)));
        }
        self.substrate.validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text, path.parent())
    }

    /// Parses a config; a relative `sparams` path is resolved against `base`.
    pub fn from_toml_str(text: &str, base: Option<&Path>) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        raw.resolve(base)
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FreqField {
    Hz(f64),
    Text(String),
}

impl FreqField {
    fn hz(&self, what: &str) -> Result<f64> {
        match self {
            FreqField::Hz(v) if *v > 0.0 => Ok(*v),
            FreqField::Hz(v) => Err(Error::Config(format!("{what}: {v} Hz must be positive"))),
            FreqField::Text(t) => parse_frequency(t).ok_or_else(|| Error::Config(format!("{what}: cannot parse {t:?}"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    f_min: Option<f64>,
    f_min_db: Option<f64>,
    gamma_opt_mag: f64,
    gamma_opt_deg: f64,
    r_n_ohm: f64,
    freq: Option<FreqField>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    f_start: FreqField,
    f_stop: FreqField,
    n_points: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    sparams: Option<PathBuf>,
    f0: Option<FreqField>,
    z0: Option<f64>,
    network_style: Option<String>,
    stub: Option<String>,
    resistor_series: Option<String>,
    substrate: Option<Substrate>,
    bias: Option<BiasSpec>,
    noise: Option<RawNoise>,
    sweep: Option<RawSweep>,
}

impl RawConfig {
    fn resolve(self, base: Option<&Path>) -> Result<DesignConfig> {
        let sparams = self.sparams.unwrap_or_default();
        let sparam_source = match base {
            Some(b) if sparams.is_relative() && !sparams.as_os_str().is_empty() => b.join(sparams),
            _ => sparams,
        };
        let f0_hz = match &self.f0 {
            Some(f) => f.hz("f0")?,
            None => 0.0,
        };
        let mut cfg = DesignConfig::new(sparam_source, f0_hz);
        if let Some(z) = self.z0 {
            cfg.z0_ohm = z;
        }
        if let Some(s) = &self.network_style {
            cfg.network_style = s.parse()?;
        }
        if let Some(s) = &self.stub {
            cfg.stub_kind = match s.to_ascii_lowercase().as_str() {
                "open" => StubKind::Open,
                "short" => StubKind::Short,
                other => return Err(Error::Config(format!("unknown stub kind {other:?}"))),
            };
        }
        if let Some(s) = &self.resistor_series {
            cfg.resistor_series = s.parse()?;
        }
        if let Some(s) = self.substrate {
            s.validate()?;
            cfg.substrate = s;
        }
        cfg.bias = self.bias;
        if let Some(n) = self.noise {
            let f_min = match (n.f_min, n.f_min_db) {
                (Some(lin), None) => lin,
                (None, Some(db)) => db_to_power(db),
                _ => return Err(Error::Config("noise: give exactly one of f_min, f_min_db".into())),
            };
            let freq = match &n.freq {
                Some(f) => f.hz("noise.freq")?,
                None => f0_hz.max(1.0),
            };
            cfg.noise = Some(NoiseParams::new(
                f_min,
                from_polar_deg(n.gamma_opt_mag, n.gamma_opt_deg),
                n.r_n_ohm,
                freq,
            )?);
        }
        if let Some(s) = self.sweep {
            cfg.sweep = Some(Sweep::new(s.f_start.hz("sweep.f_start")?, s.f_stop.hz("sweep.f_stop")?, s.n_points)?);
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_config() {
        let text = r#"
            sparams = "dev.s2p"
            f0 = "3.2 GHz"
            network_style = "distributed"
            resistor_series = "E24"
            [substrate]
            eps_r = 3.55
            [bias]
            beta = 120.0
            [noise]
            f_min_db = 0.6
            gamma_opt_mag = 0.3
            gamma_opt_deg = 45.0
            r_n_ohm = 10.0
            [sweep]
            f_start = "3.0GHz"
            f_stop = 3.4e9
            n_points = 5
        "#;
        let cfg = DesignConfig::from_toml_str(text, Some(Path::new("/data"))).unwrap();
        assert_eq!(cfg.sparam_source, PathBuf::from("/data/dev.s2p"));
        assert_eq!(cfg.f0_hz, 3.2e9);
        assert_eq!(cfg.substrate.eps_r, 3.55);
        assert_eq!(cfg.substrate.h_mm, 0.813);
        assert_eq!(cfg.bias.unwrap().beta, 120.0);
        assert_eq!(cfg.bias.unwrap().v_supply, 5.0);
        assert_eq!(cfg.synthesizer_names(), vec!["stub"]);
        assert_eq!(cfg.resistor_series, ResistorSeries::E24);
        let np = cfg.noise.unwrap();
        assert!((np.f_min_db() - 0.6).abs() < 1e-12);
        assert_eq!(np.freq_hz, 3.2e9);
        let f = cfg.sweep.unwrap().frequencies();
        assert_eq!(f, vec![3.0e9, 3.1e9, 3.2e9, 3.3e9, 3.4e9]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DesignConfig::from_toml_str("f0 = \"fast\"", None).is_err());
        assert!(DesignConfig::from_toml_str("bogus = 1", None).is_err());
        assert!(DesignConfig::from_toml_str("[sweep]\nf_start=2e9\nf_stop=1e9\nn_points=3", None).is_err());
        assert!(DesignConfig::from_toml_str("[sweep]\nf_start=1e9\nf_stop=2e9\nn_points=1", None).is_err());
        assert!(DesignConfig::from_toml_str("network_style = \"fancy\"", None).is_err());
        assert!(DesignConfig::from_toml_str("[substrate]\neps_r = 0.5", None).is_err());
    }

    #[test]
    fn defaults() {
        let cfg = DesignConfig::from_toml_str("f0 = 1e9", None).unwrap();
        assert_eq!(cfg.network_style, NetworkStyle::Both);
        assert_eq!(cfg.synthesizer_names(), vec!["stub", "lumped"]);
        assert!(cfg.bias.is_none() && cfg.noise.is_none() && cfg.sweep.is_none());
        assert_eq!(cfg.substrate, Substrate::ro4003c());
    }
}
