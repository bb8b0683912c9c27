//! `ampkit` — command-line front end for the amplifier design flow.
//!
//! Exit codes: 0 success, 2 conditionally stable device (halted), 3 parse
//! or configuration error, 4 infeasible synthesis/realization, 5 I/O,
//! 1 anything else (including usage errors).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ampkit_core::bias::{design_bias, round_to_series, BiasDesignResult, ResistorSeries};
use ampkit_core::config::{DesignConfig, NetworkStyle};
use ampkit_core::gain::{conjugate_match, MatchDesign};
use ampkit_core::microstrip::{electrical_to_physical, synthesize, Substrate};
use ampkit_core::pipeline::{load_document, run_design_on, DesignReport, StageError};
use ampkit_core::report::{emit_report, EmitterRegistry};
use ampkit_core::stability::{classify, StabilityBoundary, StabilityReport};
use ampkit_core::synth::{MatchNetwork, SynthRegistry};
use ampkit_core::touchstone::sample_at;
use ampkit_core::twoport::{ElementModel, Lumped, TwoPortS};
use ampkit_core::units::parse_frequency;
use ampkit_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ampkit", version, about = "Small-signal microwave amplifier design")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Touchstone (.s2p) file with the transistor S-parameters.
    #[arg(long, global = true)]
    sparams: Option<PathBuf>,
    /// Design frequency, e.g. "3.2 GHz" or 3.2e9.
    #[arg(long, global = true, value_parser = parse_freq)]
    freq: Option<f64>,
    /// TOML design file; --sparams and --freq override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for `design`.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Lumped,
    Stub,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Rollett K, |Δ|, μ/μ' and the stability circles.
    Stability,
    /// Simultaneous conjugate match and gain blocks.
    Match,
    /// Matching networks for both ports.
    Synth {
        #[arg(long, value_enum)]
        style: Option<Style>,
    },
    /// Width and length of a microstrip line on the configured substrate.
    Microstrip {
        /// Characteristic impedance in Ω.
        #[arg(long, default_value_t = 50.0)]
        z0: f64,
        /// Electrical length in guided wavelengths.
        #[arg(long, default_value_t = 0.25)]
        len_frac: f64,
    },
    /// Four-resistor bias divider.
    Bias {
        #[arg(long)]
        series: Option<ResistorSeries>,
    },
    /// Synthesize and verify the cascade, printing the sweep table.
    Verify,
    /// Full flow; writes report, sweep table and Smith chart to --out.
    Design,
}

fn parse_freq(s: &str) -> Result<f64, String> {
    parse_frequency(s).filter(|f| *f > 0.0).ok_or_else(|| format!("cannot parse frequency {s:?}"))
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

impl From<StageError> for Failure {
    fn from(e: StageError) -> Self {
        Failure { code: exit_code(&e.error), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 5, message: e.to_string() }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 5,
        Error::PotentiallyUnstable { .. } => 2,
        Error::MalformedOptionLine(_)
        | Error::NonMonotonicFrequency { .. }
        | Error::WrongColumnCount { .. }
        | Error::BadNumber { .. }
        | Error::UnsupportedParamType(_)
        | Error::UnsupportedVersion(_)
        | Error::EmptyDocument
        | Error::OutOfBand { .. }
        | Error::Config(_)
        | Error::InvalidSubstrate(_)
        | Error::InvalidNoiseParams(_)
        | Error::UnknownReportForm(_) => 3,
        Error::AlreadyMatched
        | Error::NoRealizableSection
        | Error::NoSolution(_)
        | Error::UnknownSynthesizer(_)
        | Error::StubSingularity { .. }
        | Error::AspectRatioOutOfRange(_)
        | Error::TargetOutOfRange(_)
        | Error::InfeasibleSpec(_)
        | Error::NoOperatingPoint { .. }
        | Error::VerificationFailed(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ampkit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn config(common: &Common, needs_device: bool) -> Result<DesignConfig, Failure> {
    let mut cfg = match &common.config {
        Some(p) => DesignConfig::load(p)?,
        None => DesignConfig::new(PathBuf::new(), 0.0),
    };
    if let Some(p) = &common.sparams {
        cfg.sparam_source = p.clone();
    }
    if let Some(f) = common.freq {
        cfg.f0_hz = f;
    }
    if needs_device {
        if cfg.sparam_source.as_os_str().is_empty() {
            return Err(Failure { code: 3, message: "no S-parameter file: pass --sparams or --config".into() });
        }
        if cfg.f0_hz <= 0.0 {
            return Err(Failure { code: 3, message: "no design frequency: pass --freq or set f0 in the config".into() });
        }
    }
    Ok(cfg)
}

fn device(cfg: &DesignConfig) -> Result<TwoPortS, Failure> {
    let doc = load_document(cfg)?;
    let net = sample_at(&doc, cfg.f0_hz)?;
    // Work in the design system impedance.
    Ok(net.to_abcd()?.to_s(cfg.z0_ohm)?)
}

fn emit<T: Serialize>(format: Format, human: impl FnOnce() -> String, value: &T) -> Result<(), Failure> {
    if format != Format::Machine {
        print!("{}", human());
    }
    if format != Format::Human {
        let json = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 1, message: e.to_string() })?;
        println!("{json}");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let common = &cli.common;
    match &cli.command {
        Command::Stability => {
            let cfg = config(common, true)?;
            let r = classify(&device(&cfg)?)?;
            emit(common.format, || stability_text(&r), &r)?;
            Ok(if r.is_unconditional() { 0 } else { 2 })
        }
        Command::Match => {
            let cfg = config(common, true)?;
            let net = device(&cfg)?;
            let r = classify(&net)?;
            if !r.is_unconditional() {
                emit(common.format, || stability_text(&r), &r)?;
                eprintln!("ampkit: device is only conditionally stable; no conjugate match");
                return Ok(2);
            }
            let m = conjugate_match(&net)?;
            emit(common.format, || match_text(&m), &m)?;
            Ok(0)
        }
        Command::Synth { style } => {
            let mut cfg = config(common, true)?;
            if let Some(s) = style {
                cfg.network_style = match s {
                    Style::Lumped => NetworkStyle::Lumped,
                    Style::Stub => NetworkStyle::Distributed,
                    Style::Both => NetworkStyle::Both,
                };
            }
            let net = device(&cfg)?;
            if !classify(&net)?.is_unconditional() {
                eprintln!("ampkit: device is only conditionally stable; nothing to synthesize");
                return Ok(2);
            }
            let m = conjugate_match(&net)?;
            let registry = SynthRegistry::with_builtins();
            let mut out = SynthOutput { input: Vec::new(), output: Vec::new() };
            for name in cfg.synthesizer_names() {
                let s = registry.get(name)?;
                out.input.extend(s.synthesize(m.gamma_s, cfg.z0_ohm, cfg.f0_hz)?);
                out.output.extend(s.synthesize(m.gamma_l, cfg.z0_ohm, cfg.f0_hz)?);
            }
            emit(common.format, || synth_text(&out), &out)?;
            Ok(0)
        }
        Command::Microstrip { z0, len_frac } => {
            let cfg = config(common, false)?;
            let f = if cfg.f0_hz > 0.0 { cfg.f0_hz } else { return Err(Failure { code: 3, message: "pass --freq".into() }) };
            let mut line = synthesize(*z0, &cfg.substrate, f)?;
            line.length_wl = *len_frac;
            line.length_mm = electrical_to_physical(*len_frac, line.eps_eff, f);
            emit(
                common.format,
                || {
                    format!(
                        "{}: Z0 {:.2} Ω → W = {:.4} mm, ε_eff = {:.4}, {:.4} λ = {:.3} mm at {:.4} GHz\n",
                        substrate_label(&cfg.substrate),
                        line.z0_ohm,
                        line.w_mm,
                        line.eps_eff,
                        line.length_wl,
                        line.length_mm,
                        f / 1e9
                    )
                },
                &line,
            )?;
            Ok(0)
        }
        Command::Bias { series } => {
            let cfg = config(common, false)?;
            let spec = cfg.bias.unwrap_or_default();
            let series = series.unwrap_or(cfg.resistor_series);
            let exact = design_bias(&spec)?;
            let rounded = match series {
                ResistorSeries::Exact => None,
                s => Some(round_to_series(&exact, &spec, s)?),
            };
            let out = BiasOutput { exact, rounded };
            emit(common.format, || bias_text(&out), &out)?;
            Ok(0)
        }
        Command::Verify => {
            let cfg = config(common, true)?;
            let r = design(&cfg)?;
            if r.is_halted() {
                emit(common.format, || stability_text(&r.stability), &r.stability)?;
                return Ok(2);
            }
            emit(common.format, || verify_text(&r), &r.verification)?;
            Ok(0)
        }
        Command::Design => {
            let cfg = config(common, true)?;
            let r = design(&cfg)?;
            let mut forms = Vec::new();
            if common.format != Format::Machine {
                forms.push("human");
            }
            if common.format != Format::Human {
                forms.push("machine");
            }
            if !r.is_halted() {
                forms.push("sweep");
            }
            forms.push("smith");
            let stem = stem_for(&cfg, common.config.as_deref());
            let written = emit_report(&r, &forms, &common.out, &stem)?;
            if common.format != Format::Machine {
                print!("{}", EmitterRegistry::with_builtins().get("human")?.render(&r)?);
            }
            for p in written {
                eprintln!("wrote {}", p.display());
            }
            Ok(if r.is_halted() { 2 } else { 0 })
        }
    }
}

fn design(cfg: &DesignConfig) -> Result<DesignReport, Failure> {
    let doc = load_document(cfg)?;
    Ok(run_design_on(cfg, &doc)?)
}

fn stem_for(cfg: &DesignConfig, config: Option<&Path>) -> String {
    config
        .or(Some(cfg.sparam_source.as_path()))
        .and_then(|p| p.file_stem())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "design".into())
}

#[derive(Serialize)]
struct SynthOutput {
    input: Vec<MatchNetwork>,
    output: Vec<MatchNetwork>,
}

#[derive(Serialize)]
struct BiasOutput {
    exact: BiasDesignResult,
    rounded: Option<BiasDesignResult>,
}

fn polar(z: ampkit_core::Complex64) -> String {
    format!("{:.4}∠{:.2}°", z.norm(), z.arg().to_degrees())
}

fn substrate_label(s: &Substrate) -> String {
    format!("{} (ε_r {}, h {} mm, t {} µm)", s.name, s.eps_r, s.h_mm, s.t_um)
}

fn stability_text(r: &StabilityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "|Δ| = {:.5}", r.delta_mag);
    match r.k {
        Some(k) => {
            let _ = writeln!(s, "K   = {k:.5}");
        }
        None => s.push_str("K   = ∞ (unilateral)\n"),
    }
    let _ = writeln!(s, "μ   = {:.5}   μ' = {:.5}", r.mu, r.mu_prime);
    let _ = writeln!(s, "verdict: {:?}{}", r.verdict, if r.boundary { " (at the stability boundary)" } else { "" });
    for (name, b) in [("source", &r.source), ("load", &r.load)] {
        match b {
            StabilityBoundary::Circle(c) => {
                let _ = writeln!(
                    s,
                    "{name} circle: center {}, radius {:.4}, stable {:?}",
                    polar(c.center),
                    c.radius,
                    c.stable_region
                );
            }
            StabilityBoundary::HalfPlane => {
                let _ = writeln!(s, "{name} boundary: straight line (half-plane)");
            }
        }
    }
    s
}

fn match_text(m: &MatchDesign) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Γ_S = {}   Γ_L = {}", polar(m.gamma_s), polar(m.gamma_l));
    let g = &m.gains;
    let _ = writeln!(
        s,
        "G_S {:.3} dB   G_0 {:.3} dB   G_L {:.3} dB   G_T {:.3} dB",
        g.gs_db(),
        g.g0_db(),
        g.gl_db(),
        g.gt_db()
    );
    s
}

fn part_text(e: &ElementModel) -> String {
    let (place, part) = match e {
        ElementModel::Series { part } => ("series", part),
        ElementModel::Shunt { part } => ("shunt", part),
        other => return format!("{other:?}"),
    };
    match *part {
        Lumped::Inductor { henry } => format!("{place} L {:.4} nH", henry * 1e9),
        Lumped::Capacitor { farad } => format!("{place} C {:.4} pF", farad * 1e12),
        Lumped::Resistor { ohm } => format!("{place} R {ohm:.2} Ω"),
    }
}

fn network_text(n: &MatchNetwork) -> String {
    match n {
        MatchNetwork::Stub(st) => format!(
            "{:?} stub {:.4} λ → line {:.4} λ (residual {:.1e})",
            st.stub_kind, st.stub_len_wl, st.line_len_wl, st.residual
        ),
        MatchNetwork::Lumped(l) => {
            let parts: Vec<String> = l.elements.iter().map(part_text).collect();
            format!("{} (residual {:.1e})", parts.join(" → "), l.residual)
        }
    }
}

fn synth_text(o: &SynthOutput) -> String {
    let mut s = String::new();
    for (port, nets) in [("input", &o.input), ("output", &o.output)] {
        let _ = writeln!(s, "{port} (port → device):");
        for (i, n) in nets.iter().enumerate() {
            let _ = writeln!(s, "  [{i}] {}", network_text(n));
        }
    }
    s
}

fn bias_text(o: &BiasOutput) -> String {
    let mut s = String::new();
    for r in std::iter::once(&o.exact).chain(o.rounded.as_ref()) {
        let _ = writeln!(
            s,
            "{:?}: R1 {:.1} Ω  R2 {:.1} Ω  R3 {:.1} Ω  R4 {:.1} Ω → I_C {:.3} mA, V_CE {:.3} V ({:+.2} %)",
            r.series,
            r.r1_ohm,
            r.r2_ohm,
            r.r3_ohm,
            r.r4_ohm,
            r.verified_ic_ma,
            r.verified_vce,
            100.0 * r.ic_drift
        );
    }
    s
}

fn verify_text(r: &DesignReport) -> String {
    let mut s = String::new();
    for v in &r.verification {
        let _ = writeln!(s, "{} networks (gain error at f0 {:+.4} dB):", v.network, v.gain_error_db);
        let _ = writeln!(s, "  {:>12} {:>9} {:>9} {:>9} {:>8}", "freq (GHz)", "S11 dB", "S21 dB", "S22 dB", "K");
        for row in &v.rows {
            let _ = writeln!(
                s,
                "  {:>12.4} {:>9.2} {:>9.3} {:>9.2} {:>8}",
                row.freq_hz / 1e9,
                row.s11_db,
                row.s21_db,
                row.s22_db,
                row.k.map(|k| format!("{k:.4}")).unwrap_or_else(|| "-".into())
            );
        }
    }
    s
}
