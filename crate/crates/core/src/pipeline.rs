//! End-to-end design flow:
//! parse → stability → match → synthesize → realize → bias → verify.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bias::{self, BiasDesignResult, BiasSpec, ResistorSeries};
use crate::config::DesignConfig;
use crate::gain::{self, MatchDesign};
use crate::microstrip::{self, RealizedStubNetwork};
use crate::noise::{self, NoiseCircle, NoiseParams};
use crate::stability::{self, StabilityReport};
use crate::synth::{verify_network, MatchNetwork, SynthRegistry};
use crate::touchstone::{self, BiasAnnotation, TouchstoneDocument};
use crate::twoport::{cascade, TwoPortS};
use crate::units::{db_to_power, mag_db, power_db};
use crate::Error;

/// Allowed gap between cascade |s21|² and G_T,max at f0.
pub const GAIN_CHECK_TOL_DB: f64 = 0.1;
/// Port reflections at f0 must sit below this.
pub const RETURN_LOSS_LIMIT_DB: f64 = -20.0;
/// Floor for reflection magnitudes before taking dB.
const MAG_FLOOR: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Config,
    Parse,
    Stability,
    Match,
    Synthesis,
    Microstrip,
    Bias,
    Verification,
    Io,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Config => "config",
            Stage::Parse => "parse",
            Stage::Stability => "stability",
            Stage::Match => "match",
            Stage::Synthesis => "synthesis",
            Stage::Microstrip => "microstrip",
            Stage::Bias => "bias",
            Stage::Verification => "verification",
            Stage::Io => "io",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, StageError>;
}

impl<T> AtStage<T> for crate::Result<T> {
    fn at(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignStatus {
    Completed,
    /// Stopped after stability: no synthesis output is present.
    HaltedConditionalStability,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub freq_hz: f64,
    pub s11_db: f64,
    pub s11_deg: f64,
    pub s21_db: f64,
    pub s21_deg: f64,
    pub s22_db: f64,
    pub s22_deg: f64,
    pub k: Option<f64>,
    pub mu: Option<f64>,
    pub nf_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeVerification {
    /// Synthesizer that produced the networks.
    pub network: String,
    pub at_f0: SweepRow,
    pub gain_error_db: f64,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSection {
    pub params: NoiseParams,
    pub f_min_db: f64,
    /// Noise figure with the source terminated in the max-gain Γ_S.
    pub nf_at_match_db: f64,
    pub circles: Vec<NoiseCircle>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasSection {
    pub spec: BiasSpec,
    pub design: BiasDesignResult,
    pub rounded: Option<BiasDesignResult>,
    pub annotations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedPort {
    pub port: String,
    pub network_index: usize,
    pub lines: RealizedStubNetwork,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub gt_max_db: f64,
    pub achieved_gain_db: f64,
    pub s11_db: f64,
    pub s22_db: f64,
}

/// A known difference between this tool's results and the published
/// reference design, with the source of the published number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub topic: String,
    pub published: String,
    pub computed: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub status: DesignStatus,
    pub f0_hz: f64,
    pub z0_ohm: f64,
    pub device_bias: BiasAnnotation,
    pub device: TwoPortS,
    pub stability: StabilityReport,
    pub matching: Option<MatchDesign>,
    pub noise: Option<NoiseSection>,
    pub input_networks: Vec<MatchNetwork>,
    pub output_networks: Vec<MatchNetwork>,
    pub microstrip: Vec<RealizedPort>,
    pub microstrip_caveat: String,
    pub bias: Option<BiasSection>,
    pub verification: Vec<CascadeVerification>,
    pub summary: Option<Summary>,
    pub deviations: Vec<Deviation>,
}

impl DesignReport {
    pub fn is_halted(&self) -> bool {
        self.status == DesignStatus::HaltedConditionalStability
    }
}

pub fn load_document(cfg: &DesignConfig) -> Result<TouchstoneDocument, StageError> {
    let text = std::fs::read_to_string(&cfg.sparam_source)
        .map_err(|e| Error::Io(format!("{}: {e}", cfg.sparam_source.display())))
        .at(Stage::Io)?;
    touchstone::parse_touchstone(&text).at(Stage::Parse)
}

/// Runs the full flow on the configured Touchstone file.
pub fn run_design(cfg: &DesignConfig) -> Result<DesignReport, StageError> {
    let doc = load_document(cfg)?;
    run_design_on(cfg, &doc)
}

/// Runs the full flow on an already parsed document.
pub fn run_design_on(cfg: &DesignConfig, doc: &TouchstoneDocument) -> Result<DesignReport, StageError> {
    cfg.validate().at(Stage::Config)?;
    let device = touchstone::sample_at(doc, cfg.f0_hz).at(Stage::Parse)?;
    let stability = stability::classify(&device).at(Stage::Stability)?;

    let mut report = DesignReport {
        status: DesignStatus::HaltedConditionalStability,
        f0_hz: cfg.f0_hz,
        z0_ohm: cfg.z0_ohm,
        device_bias: doc.bias,
        device,
        stability,
        matching: None,
        noise: None,
        input_networks: Vec::new(),
        output_networks: Vec::new(),
        microstrip: Vec::new(),
        microstrip_caveat: "quasi-static, lossless; T-junction and bend parasitics ignored".into(),
        bias: None,
        verification: Vec::new(),
        summary: None,
        deviations: Vec::new(),
    };
    if !report.stability.is_unconditional() {
        return Ok(report);
    }

    // Device data may use a different reference impedance than the design.
    let device_z0 = device.to_abcd().and_then(|m| m.to_s(cfg.z0_ohm)).at(Stage::Match)?;
    let matching = gain::conjugate_match(&device_z0).at(Stage::Match)?;
    let gt_max = gain::max_transducer_gain(&device_z0).at(Stage::Match)?;

    report.noise = cfg
        .noise
        .as_ref()
        .map(|np| noise_section(np, &matching, cfg.z0_ohm))
        .transpose()
        .at(Stage::Match)?;

    let registry = SynthRegistry::with_builtins();
    for name in cfg.synthesizer_names() {
        let synth = registry.get(name).at(Stage::Synthesis)?;
        let inputs = synth.synthesize(matching.gamma_s, cfg.z0_ohm, cfg.f0_hz).at(Stage::Synthesis)?;
        let outputs = synth.synthesize(matching.gamma_l, cfg.z0_ohm, cfg.f0_hz).at(Stage::Synthesis)?;
        report.input_networks.extend(inputs);
        report.output_networks.extend(outputs);
    }

    for (port, nets) in [("input", &report.input_networks), ("output", &report.output_networks)] {
        for (i, n) in nets.iter().enumerate() {
            if let MatchNetwork::Stub(sol) = n {
                let lines = microstrip::realize_stub_network(sol, &cfg.substrate, cfg.f0_hz).at(Stage::Microstrip)?;
                report.microstrip.push(RealizedPort { port: port.into(), network_index: i, lines });
            }
        }
    }

    if let Some(spec) = &cfg.bias {
        report.bias = Some(bias_section(spec, cfg.resistor_series).at(Stage::Bias)?);
    }

    let freqs = match &cfg.sweep {
        Some(s) => s.frequencies(),
        None => vec![cfg.f0_hz],
    };
    let gt_max_db = power_db(gt_max);
    for name in cfg.synthesizer_names() {
        let pick = |nets: &[MatchNetwork]| {
            nets.iter()
                .find(|n| registry_name(n, cfg) == name)
                .cloned()
                .ok_or_else(|| Error::NoSolution(format!("no {name} network")))
        };
        let input = pick(&report.input_networks).at(Stage::Verification)?;
        let output = pick(&report.output_networks).at(Stage::Verification)?;
        let v = verify_cascade(&input, &output, doc, cfg, &freqs, gt_max_db).at(Stage::Verification)?;
        report.verification.push(CascadeVerification { network: name.to_string(), ..v });
    }

    let primary = &report.verification[0].at_f0;
    report.summary = Some(Summary {
        gt_max_db,
        achieved_gain_db: primary.s21_db,
        s11_db: primary.s11_db,
        s22_db: primary.s22_db,
    });
    report.deviations = reference_deviations(&report);
    report.matching = Some(matching);
    report.status = DesignStatus::Completed;
    Ok(report)
}

fn registry_name(n: &MatchNetwork, cfg: &DesignConfig) -> &'static str {
    match n {
        MatchNetwork::Lumped(_) => "lumped",
        MatchNetwork::Stub(_) => match cfg.stub_kind {
            crate::synth::StubKind::Open => "stub",
            crate::synth::StubKind::Short => "stub-short",
        },
    }
}

fn noise_section(np: &NoiseParams, m: &MatchDesign, z0: f64) -> crate::Result<NoiseSection> {
    let nf = noise::noise_figure(m.gamma_s, np, z0)?;
    let circles = [0.25, 0.5, 1.0]
        .iter()
        .map(|step| noise::noise_circle(db_to_power(np.f_min_db() + step), np, z0))
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(NoiseSection { params: *np, f_min_db: np.f_min_db(), nf_at_match_db: power_db(nf), circles })
}

fn bias_section(spec: &BiasSpec, series: ResistorSeries) -> crate::Result<BiasSection> {
    let design = bias::design_bias(spec)?;
    let rounded = match series {
        ResistorSeries::Exact => None,
        s => Some(bias::round_to_series(&design, spec, s)?),
    };
    Ok(BiasSection {
        spec: *spec,
        design,
        rounded,
        annotations: vec![
            "DC blocking capacitors at the RF input and output (not modeled)".into(),
            "RF choke or quarter-wave feed from the divider tap to the base (not modeled)".into(),
            "RF choke or quarter-wave feed from R4 to the collector (not modeled)".into(),
        ],
    })
}

fn row(freq_hz: f64, s: &TwoPortS, nf: Option<f64>) -> SweepRow {
    let db = |z: num_complex::Complex64| mag_db(z.norm().max(MAG_FLOOR));
    let deg = |z: num_complex::Complex64| z.arg().to_degrees();
    SweepRow {
        freq_hz,
        s11_db: db(s.s11),
        s11_deg: deg(s.s11),
        s21_db: db(s.s21),
        s21_deg: deg(s.s21),
        s22_db: db(s.s22),
        s22_deg: deg(s.s22),
        k: stability::k_factor(s).ok(),
        mu: stability::mu_test(s).ok(),
        nf_db: nf.map(power_db),
    }
}

fn evaluate(
    input: &MatchNetwork,
    output: &MatchNetwork,
    doc: &TouchstoneDocument,
    cfg: &DesignConfig,
    freq_hz: f64,
) -> crate::Result<SweepRow> {
    let device = touchstone::sample_at(doc, freq_hz)?.to_abcd()?;
    let total = cascade(&cascade(&input.port_to_device(freq_hz)?, &device)?, &output.device_to_port(freq_hz)?)?;
    let s = total.to_s(cfg.z0_ohm)?;
    let nf = match &cfg.noise {
        Some(np) => Some(noise::noise_figure(verify_network(input, cfg.z0_ohm, freq_hz)?, np, cfg.z0_ohm)?),
        None => None,
    };
    Ok(row(freq_hz, &s, nf))
}

/// Cascades input network, interpolated device and output network at every
/// sweep frequency, holding element values and physical lengths fixed.
/// Fails unless the f0 point reaches `gt_max_db` within 0.1 dB with both
/// port reflections below −20 dB.
pub fn verify_cascade(
    input: &MatchNetwork,
    output: &MatchNetwork,
    doc: &TouchstoneDocument,
    cfg: &DesignConfig,
    freqs: &[f64],
    gt_max_db: f64,
) -> crate::Result<CascadeVerification> {
    let at_f0 = evaluate(input, output, doc, cfg, cfg.f0_hz)?;
    let rows = freqs
        .par_iter()
        .map(|&f| evaluate(input, output, doc, cfg, f))
        .collect::<crate::Result<Vec<_>>>()?;
    let gain_error_db = at_f0.s21_db - gt_max_db;
    if gain_error_db.abs() > GAIN_CHECK_TOL_DB {
        return Err(Error::VerificationFailed(format!(
            "cascade gain {:.3} dB vs G_T,max {gt_max_db:.3} dB",
            at_f0.s21_db
        )));
    }
    if at_f0.s11_db > RETURN_LOSS_LIMIT_DB || at_f0.s22_db > RETURN_LOSS_LIMIT_DB {
        return Err(Error::VerificationFailed(format!(
            "port reflections {:.1} dB / {:.1} dB above {RETURN_LOSS_LIMIT_DB} dB",
            at_f0.s11_db, at_f0.s22_db
        )));
    }
    Ok(CascadeVerification { network: input.style().to_string(), at_f0, gain_error_db, rows })
}

fn fmt_circle(b: &crate::stability::StabilityBoundary) -> String {
    match b.circle() {
        Some(c) => format!(
            "center {:.3}∠{:.1}°, radius {:.3}",
            c.center.norm(),
            c.center.arg().to_degrees(),
            c.radius
        ),
        None => "half-plane boundary".into(),
    }
}

/// Published figures of the BFP640 reference amplifier that this flow does
/// not reproduce, next to what this run computed.
fn reference_deviations(r: &DesignReport) -> Vec<Deviation> {
    let gt = r.summary.as_ref().map(|s| s.gt_max_db).unwrap_or(f64::NAN);
    let mut out = vec![
        Deviation {
            topic: "realized gain".into(),
            published: "16.01 dB (EM-simulated microstrip layout with bias and stabilization)".into(),
            computed: format!("{gt:.3} dB (ideal lossless networks)"),
            source: "reference design: simulated S21 of the final layout".into(),
        },
        Deviation {
            topic: "noise figure".into(),
            published: "1.34 dB".into(),
            computed: match &r.noise {
                Some(n) => format!("{:.3} dB at the max-gain Γ_S (F_min {:.3} dB)", n.nf_at_match_db, n.f_min_db),
                None => "n/a (vendor noise parameters not supplied)".into(),
            },
            source: "reference design: simulated noise figure at 3.2 GHz".into(),
        },
        Deviation {
            topic: "stability circles".into(),
            published: "source 1.13∠68°, r 0.2; load 1.36∠47°, r 0.5".into(),
            computed: format!("source {}; load {}", fmt_circle(&r.stability.source), fmt_circle(&r.stability.load)),
            source: "reference design: printed stability circle centers and radii".into(),
        },
        Deviation {
            topic: "lumped matching values".into(),
            published: "input 0.113 nF shunt + 7.957 pH series; output 84.5 pH series + 0.621 nH shunt".into(),
            computed: "synthesized L-sections listed in input_networks / output_networks".into(),
            source: "reference design: printed lumped element values".into(),
        },
        Deviation {
            topic: "S12 polar magnitude".into(),
            published: "0.767∠43.4° beside 0.055728 + j0.0527".into(),
            computed: "rectangular form used (|S12| = 0.0767)".into(),
            source: "reference design: transistor S-parameter table".into(),
        },
    ];
    if let Some(b) = &r.bias {
        out.push(Deviation {
            topic: "bias divider R2".into(),
            published: "686 kΩ".into(),
            computed: format!("{:.1} Ω", b.design.r2_ohm),
            source: "reference design: printed bias resistor values".into(),
        });
    }
    out
}
