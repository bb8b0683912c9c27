//! Touchstone v1 two-port (`.s2p`) reading, writing and interpolation.
//!
//! Records are held in Hz and rectangular form whatever the file used.
//! Data rows follow the two-port column order S11 S21 S12 S22.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_complex::Complex64;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::twoport::TwoPortS;
use crate::units::{db_to_mag, from_polar_deg, mag_db};
use crate::{Error, Result};

/// Frequencies closer than this to a record are served exactly.
pub const EXACT_FREQ_TOL_HZ: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreqUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    pub fn multiplier(self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            FreqUnit::Hz => "Hz",
            FreqUnit::KHz => "kHz",
            FreqUnit::MHz => "MHz",
            FreqUnit::GHz => "GHz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DataFormat {
    /// Magnitude, angle in degrees.
    MA,
    /// 20·log10 magnitude, angle in degrees.
    DB,
    /// Real, imaginary.
    RI,
}

impl std::str::FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "MA" => Ok(DataFormat::MA),
            "DB" => Ok(DataFormat::DB),
            "RI" => Ok(DataFormat::RI),
            other => Err(Error::MalformedOptionLine(format!("unknown format {other}"))),
        }
    }
}

impl DataFormat {
    fn decode(self, a: f64, b: f64) -> Complex64 {
        match self {
            DataFormat::MA => from_polar_deg(a, b),
            DataFormat::DB => from_polar_deg(db_to_mag(a), b),
            DataFormat::RI => Complex64::new(a, b),
        }
    }

    fn encode(self, z: Complex64) -> (f64, f64) {
        match self {
            DataFormat::MA => (z.norm(), z.arg().to_degrees()),
            DataFormat::DB => (mag_db(z.norm()), z.arg().to_degrees()),
            DataFormat::RI => (z.re, z.im),
        }
    }
}

/// Bias point found in comment lines, when present.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BiasAnnotation {
    pub vce: Option<f64>,
    pub ic_ma: Option<f64>,
}

impl BiasAnnotation {
    pub fn is_empty(&self) -> bool {
        self.vce.is_none() && self.ic_ma.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TouchstoneDocument {
    pub freq_unit: FreqUnit,
    pub format: DataFormat,
    pub z0_ohm: f64,
    pub records: Vec<TwoPortS>,
    pub bias: BiasAnnotation,
}

impl TouchstoneDocument {
    pub fn band(&self) -> Option<(f64, f64)> {
        Some((self.records.first()?.freq_hz, self.records.last()?.freq_hz))
    }
}

struct OptionLine {
    unit: FreqUnit,
    format: DataFormat,
    z0: f64,
}

fn parse_option_line(line: &str) -> Result<OptionLine> {
    let mut opt = OptionLine { unit: FreqUnit::GHz, format: DataFormat::MA, z0: 50.0 };
    let mut tokens = line.trim_start_matches('#').split_whitespace();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            "HZ" => opt.unit = FreqUnit::Hz,
            "KHZ" => opt.unit = FreqUnit::KHz,
            "MHZ" => opt.unit = FreqUnit::MHz,
            "GHZ" => opt.unit = FreqUnit::GHz,
            "S" => {}
            p @ ("Y" | "Z" | "H" | "G") => return Err(Error::UnsupportedParamType(p.to_string())),
            "MA" => opt.format = DataFormat::MA,
            "DB" => opt.format = DataFormat::DB,
            "RI" => opt.format = DataFormat::RI,
            "R" => {
                let v = tokens
                    .next()
                    .ok_or_else(|| Error::MalformedOptionLine("R without a value".into()))?;
                opt.z0 = v
                    .parse::<f64>()
                    .ok()
                    .filter(|z| *z > 0.0 && z.is_finite())
                    .ok_or_else(|| Error::MalformedOptionLine(format!("bad reference impedance {v:?}")))?;
            }
            other => return Err(Error::MalformedOptionLine(format!("unexpected token {other:?}"))),
        }
    }
    Ok(opt)
}

fn bias_patterns() -> &'static (Regex, Regex) {
    static RE: OnceLock<(Regex, Regex)> = OnceLock::new();
    RE.get_or_init(|| {
        (
            Regex::new(r"(?i)\bvce\s*[=:]?\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)").unwrap(),
            Regex::new(r"(?i)\bic\s*[=:]?\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)").unwrap(),
        )
    })
}

fn scan_bias(comment: &str, bias: &mut BiasAnnotation) {
    let (vce, ic) = bias_patterns();
    let grab = |re: &Regex| re.captures(comment).and_then(|c| c[1].parse::<f64>().ok());
    if bias.vce.is_none() {
        bias.vce = grab(vce);
    }
    if bias.ic_ma.is_none() {
        bias.ic_ma = grab(ic);
    }
}

pub fn parse_touchstone(text: &str) -> Result<TouchstoneDocument> {
    let mut option: Option<OptionLine> = None;
    let mut bias = BiasAnnotation::default();
    let mut records: Vec<TwoPortS> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (body, comment) = match raw.find('!') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            scan_bias(c, &mut bias);
        }
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        if body.starts_with('[') {
            let keyword = body.split(']').next().unwrap_or(body);
            return Err(Error::UnsupportedVersion(format!("{keyword}]")));
        }
        if body.starts_with('#') {
            // Only the first option line counts.
            if option.is_none() {
                option = Some(parse_option_line(body)?);
            }
            continue;
        }
        let opt = option
            .as_ref()
            .ok_or_else(|| Error::MalformedOptionLine(format!("data on line {line_no} before the option line")))?;
        let cols: Vec<&str> = body.split_whitespace().collect();
        if cols.len() != 9 {
            return Err(Error::WrongColumnCount { line: line_no, found: cols.len() });
        }
        let mut v = [0.0; 9];
        for (slot, tok) in v.iter_mut().zip(&cols) {
            *slot = tok
                .parse()
                .map_err(|_| Error::BadNumber { line: line_no, token: tok.to_string() })?;
        }
        let freq = v[0] * opt.unit.multiplier();
        if let Some(prev) = records.last() {
            if freq <= prev.freq_hz {
                return Err(Error::NonMonotonicFrequency { line: line_no, freq });
            }
        }
        let d = |i: usize| opt.format.decode(v[i], v[i + 1]);
        records.push(
            TwoPortS::new(freq, d(1), d(5), d(3), d(7), opt.z0)
                .map_err(|e| Error::MalformedOptionLine(format!("line {line_no}: {e}")))?,
        );
    }

    let opt = option.ok_or_else(|| Error::MalformedOptionLine("no option line".into()))?;
    if records.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(TouchstoneDocument { freq_unit: opt.unit, format: opt.format, z0_ohm: opt.z0, records, bias })
}

pub fn write_touchstone(doc: &TouchstoneDocument, format: DataFormat) -> Result<String> {
    if doc.records.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let mut out = String::new();
    if !doc.bias.is_empty() {
        let mut note = String::from("! bias:");
        if let Some(v) = doc.bias.vce {
            let _ = write!(note, " Vce = {v} V");
        }
        if let Some(i) = doc.bias.ic_ma {
            let _ = write!(note, " Ic = {i} mA");
        }
        out.push_str(&note);
        out.push('\n');
    }
    let fmt = match format {
        DataFormat::MA => "MA",
        DataFormat::DB => "DB",
        DataFormat::RI => "RI",
    };
    let _ = writeln!(out, "# {} S {} R {}", doc.freq_unit.keyword(), fmt, doc.z0_ohm);
    let mult = doc.freq_unit.multiplier();
    for r in &doc.records {
        let _ = write!(out, "{:.15e}", r.freq_hz / mult);
        for z in [r.s11, r.s21, r.s12, r.s22] {
            let (a, b) = format.encode(z);
            let _ = write!(out, " {a:.15e} {b:.15e}");
        }
        out.push('\n');
    }
    Ok(out)
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Linear interpolation in magnitude and unwrapped phase.
fn interp(a: Complex64, b: Complex64, t: f64) -> Complex64 {
    let mag = a.norm() + t * (b.norm() - a.norm());
    let step = wrap_pi(b.arg() - a.arg());
    Complex64::from_polar(mag, a.arg() + t * step)
}

pub fn sample_at(doc: &TouchstoneDocument, freq_hz: f64) -> Result<TwoPortS> {
    let (min, max) = doc.band().ok_or(Error::EmptyDocument)?;
    let out_of_band = Error::OutOfBand { freq: freq_hz, min, max };
    if let Some(r) = doc.records.iter().find(|r| (r.freq_hz - freq_hz).abs() <= EXACT_FREQ_TOL_HZ) {
        return Ok(*r);
    }
    if !(freq_hz >= min && freq_hz <= max) {
        return Err(out_of_band);
    }
    let hi = doc.records.partition_point(|r| r.freq_hz < freq_hz);
    if hi == 0 || hi >= doc.records.len() {
        return Err(out_of_band);
    }
    let (a, b) = (&doc.records[hi - 1], &doc.records[hi]);
    let t = (freq_hz - a.freq_hz) / (b.freq_hz - a.freq_hz);
    TwoPortS::new(
        freq_hz,
        interp(a.s11, b.s11, t),
        interp(a.s12, b.s12, t),
        interp(a.s21, b.s21, t),
        interp(a.s22, b.s22, t),
        doc.z0_ohm,
    )
}
