//! Two-port representations, element models and reflection transforms.
//!
//! All cascading happens in ABCD form. S-parameters are always referenced
//! to the network's own real `z0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::units::{DENOM_EPS, POLE_EPS};
use crate::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const J: Complex64 = Complex64::new(0.0, 1.0);

/// 2×2 scattering matrix at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPortS {
    pub freq_hz: f64,
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
    pub z0_ohm: f64,
}

impl TwoPortS {
    pub fn new(
        freq_hz: f64,
        s11: Complex64,
        s12: Complex64,
        s21: Complex64,
        s22: Complex64,
        z0_ohm: f64,
    ) -> Result<Self> {
        if !(freq_hz > 0.0 && freq_hz.is_finite()) {
            return Err(Error::InvalidNetwork(format!("frequency {freq_hz} Hz must be positive")));
        }
        if !(z0_ohm > 0.0 && z0_ohm.is_finite()) {
            return Err(Error::InvalidNetwork(format!("z0 {z0_ohm} Ω must be positive")));
        }
        Ok(Self { freq_hz, s11, s12, s21, s22, z0_ohm })
    }

    /// Ports swapped: s11↔s22, s12↔s21.
    pub fn transposed(&self) -> Self {
        Self { s11: self.s22, s22: self.s11, s12: self.s21, s21: self.s12, ..*self }
    }

    pub fn to_abcd(&self) -> Result<AbcdMatrix> {
        s_to_abcd(self)
    }
}

/// Chain (transmission) matrix. `b` is in Ω and `c` in S.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbcdMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub freq_hz: f64,
}

impl AbcdMatrix {
    pub fn identity(freq_hz: f64) -> Self {
        Self { a: ONE, b: ZERO, c: ZERO, d: ONE, freq_hz }
    }

    pub fn series(z: Complex64, freq_hz: f64) -> Self {
        Self { b: z, ..Self::identity(freq_hz) }
    }

    pub fn shunt(y: Complex64, freq_hz: f64) -> Self {
        Self { c: y, ..Self::identity(freq_hz) }
    }

    /// Lossless line of characteristic impedance `zc` and electrical
    /// angle `theta` (radians).
    pub fn line(zc: f64, theta: f64, freq_hz: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            a: Complex64::new(c, 0.0),
            b: J * zc * s,
            c: J * s / zc,
            d: Complex64::new(c, 0.0),
            freq_hz,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn to_s(&self, z0: f64) -> Result<TwoPortS> {
        abcd_to_s(self, z0)
    }

    /// Impedance seen looking into port 2 with port 1 terminated in `z_term`.
    pub fn output_impedance(&self, z_term: Complex64) -> Result<Complex64> {
        let den = self.c * z_term + self.a;
        if den.norm() < DENOM_EPS {
            return Err(Error::DegenerateNetwork("output impedance denominator vanishes"));
        }
        Ok((self.d * z_term + self.b) / den)
    }

    /// Impedance seen looking into port 1 with port 2 terminated in `z_term`.
    pub fn input_impedance(&self, z_term: Complex64) -> Result<Complex64> {
        let den = self.c * z_term + self.d;
        if den.norm() < DENOM_EPS {
            return Err(Error::DegenerateNetwork("input impedance denominator vanishes"));
        }
        Ok((self.a * z_term + self.b) / den)
    }
}

pub fn s_to_abcd(net: &TwoPortS) -> Result<AbcdMatrix> {
    let TwoPortS { s11, s12, s21, s22, z0_ohm: z0, freq_hz } = *net;
    if s21.norm() < DENOM_EPS {
        return Err(Error::DegenerateNetwork("s21 vanishes in S→ABCD conversion"));
    }
    let p = s12 * s21;
    let den = 2.0 * s21;
    Ok(AbcdMatrix {
        a: ((ONE + s11) * (ONE - s22) + p) / den,
        b: z0 * ((ONE + s11) * (ONE + s22) - p) / den,
        c: ((ONE - s11) * (ONE - s22) - p) / (den * z0),
        d: ((ONE - s11) * (ONE + s22) + p) / den,
        freq_hz,
    })
}

pub fn abcd_to_s(m: &AbcdMatrix, z0: f64) -> Result<TwoPortS> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(Error::InvalidNetwork(format!("z0 {z0} Ω must be positive")));
    }
    let AbcdMatrix { a, b, c, d, freq_hz } = *m;
    let den = a + b / z0 + c * z0 + d;
    if den.norm() < DENOM_EPS {
        return Err(Error::DegenerateNetwork("ABCD→S denominator vanishes"));
    }
    TwoPortS::new(
        freq_hz,
        (a + b / z0 - c * z0 - d) / den,
        2.0 * (a * d - b * c) / den,
        2.0 / den,
        (-a + b / z0 - c * z0 + d) / den,
        z0,
    )
}

pub fn cascade(left: &AbcdMatrix, right: &AbcdMatrix) -> Result<AbcdMatrix> {
    let (fl, fr) = (left.freq_hz, right.freq_hz);
    if (fl - fr).abs() > 1e-12 * fl.abs().max(fr.abs()) {
        return Err(Error::FrequencyMismatch { left: fl, right: fr });
    }
    Ok(AbcdMatrix {
        a: left.a * right.a + left.b * right.c,
        b: left.a * right.b + left.b * right.d,
        c: left.c * right.a + left.d * right.c,
        d: left.c * right.b + left.d * right.d,
        freq_hz: fl,
    })
}

/// Cascades a chain of matrices left to right.
pub fn cascade_all<'a, I>(freq_hz: f64, chain: I) -> Result<AbcdMatrix>
where
    I: IntoIterator<Item = &'a AbcdMatrix>,
{
    chain
        .into_iter()
        .try_fold(AbcdMatrix::identity(freq_hz), |acc, m| cascade(&acc, m))
}

/// Lumped component value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lumped {
    Inductor { henry: f64 },
    Capacitor { farad: f64 },
    Resistor { ohm: f64 },
}

impl Lumped {
    pub fn impedance(&self, freq_hz: f64) -> Complex64 {
        let w = 2.0 * PI * freq_hz;
        match *self {
            Lumped::Inductor { henry } => J * w * henry,
            Lumped::Capacitor { farad } => -J / (w * farad),
            Lumped::Resistor { ohm } => Complex64::new(ohm, 0.0),
        }
    }

    fn value(&self) -> f64 {
        match *self {
            Lumped::Inductor { henry } => henry,
            Lumped::Capacitor { farad } => farad,
            Lumped::Resistor { ohm } => ohm,
        }
    }
}

/// A matching-network building block.
///
/// Distributed elements carry their electrical length as a fraction of the
/// guided wavelength at `ref_freq_hz`; evaluating at another frequency keeps
/// the physical length fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "element", rename_all = "snake_case")]
pub enum ElementModel {
    Series { part: Lumped },
    Shunt { part: Lumped },
    Line { z0_ohm: f64, length_wl: f64, ref_freq_hz: f64 },
    OpenStub { z0_ohm: f64, length_wl: f64, ref_freq_hz: f64 },
    ShortStub { z0_ohm: f64, length_wl: f64, ref_freq_hz: f64 },
}

impl ElementModel {
    fn validate(&self) -> Result<()> {
        match self {
            ElementModel::Series { part } | ElementModel::Shunt { part } => {
                let v = part.value();
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidElement(format!("{part:?} must be positive and finite")));
                }
            }
            ElementModel::Line { z0_ohm, length_wl, ref_freq_hz }
            | ElementModel::OpenStub { z0_ohm, length_wl, ref_freq_hz }
            | ElementModel::ShortStub { z0_ohm, length_wl, ref_freq_hz } => {
                if !(*z0_ohm > 0.0 && z0_ohm.is_finite()) {
                    return Err(Error::InvalidElement(format!("line impedance {z0_ohm} Ω")));
                }
                if !(*length_wl >= 0.0 && length_wl.is_finite()) {
                    return Err(Error::InvalidElement(format!("line length {length_wl} λ")));
                }
                if !(*ref_freq_hz > 0.0 && ref_freq_hz.is_finite()) {
                    return Err(Error::InvalidElement(format!("reference frequency {ref_freq_hz} Hz")));
                }
            }
        }
        Ok(())
    }

    /// Chain matrix at `freq_hz`.
    pub fn abcd(&self, freq_hz: f64) -> Result<AbcdMatrix> {
        if !(freq_hz > 0.0 && freq_hz.is_finite()) {
            return Err(Error::InvalidElement(format!("frequency {freq_hz} Hz")));
        }
        self.validate()?;
        let theta = |len: f64, f_ref: f64| 2.0 * PI * len * freq_hz / f_ref;
        Ok(match *self {
            ElementModel::Series { part } => AbcdMatrix::series(part.impedance(freq_hz), freq_hz),
            ElementModel::Shunt { part } => AbcdMatrix::shunt(1.0 / part.impedance(freq_hz), freq_hz),
            ElementModel::Line { z0_ohm, length_wl, ref_freq_hz } => {
                AbcdMatrix::line(z0_ohm, theta(length_wl, ref_freq_hz), freq_hz)
            }
            ElementModel::OpenStub { z0_ohm, length_wl, ref_freq_hz } => {
                let (s, c) = theta(length_wl, ref_freq_hz).sin_cos();
                if c.abs() < POLE_EPS {
                    return Err(Error::StubSingularity { length: length_wl });
                }
                AbcdMatrix::shunt(J * (s / c) / z0_ohm, freq_hz)
            }
            ElementModel::ShortStub { z0_ohm, length_wl, ref_freq_hz } => {
                let (s, c) = theta(length_wl, ref_freq_hz).sin_cos();
                if s.abs() < POLE_EPS {
                    return Err(Error::StubSingularity { length: length_wl });
                }
                AbcdMatrix::shunt(-J * (c / s) / z0_ohm, freq_hz)
            }
        })
    }
}

pub fn element_to_twoport(e: &ElementModel, freq_hz: f64, z0: f64) -> Result<TwoPortS> {
    e.abcd(freq_hz)?.to_s(z0)
}

pub fn gamma_to_z(gamma: Complex64, z0: f64) -> Result<Complex64> {
    let den = ONE - gamma;
    if den.norm() < 1e-12 {
        return Err(Error::OpenCircuit);
    }
    Ok(z0 * (ONE + gamma) / den)
}

pub fn z_to_gamma(z: Complex64, z0: f64) -> Result<Complex64> {
    let den = z + z0;
    if den.norm() < DENOM_EPS {
        return Err(Error::DegenerateNetwork("z + z0 vanishes"));
    }
    Ok((z - z0) / den)
}

/// Γ_in = s11 + s12·s21·Γ_L / (1 − s22·Γ_L).
pub fn input_reflection(net: &TwoPortS, gamma_l: Complex64) -> Result<Complex64> {
    let den = ONE - net.s22 * gamma_l;
    if den.norm() < DENOM_EPS {
        return Err(Error::DegenerateNetwork("1 − s22·Γ_L vanishes"));
    }
    Ok(net.s11 + net.s12 * net.s21 * gamma_l / den)
}

/// Γ_out = s22 + s12·s21·Γ_S / (1 − s11·Γ_S).
pub fn output_reflection(net: &TwoPortS, gamma_s: Complex64) -> Result<Complex64> {
    input_reflection(&net.transposed(), gamma_s)
}
