//! Four-resistor divider bias for a grounded-emitter bipolar stage.
//!
//! Topology: supply → R4 → collector; supply → R2 → tap; tap → R1 → ground;
//! tap → R3 → base.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BiasSpec {
    pub v_supply: f64,
    /// Divider tap voltage.
    pub v_x: f64,
    pub v_ce: f64,
    pub i_c_ma: f64,
    pub v_be: f64,
    pub beta: f64,
    /// Divider current as a multiple of the base current.
    pub k: f64,
}

impl Default for BiasSpec {
    /// BFP640 at V_CE = 2 V, I_C = 20 mA from a 5 V rail.
    fn default() -> Self {
        Self { v_supply: 5.0, v_x: 1.5, v_ce: 2.0, i_c_ma: 20.0, v_be: 0.8, beta: 200.0, k: 50.0 }
    }
}

impl BiasSpec {
    fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InfeasibleSpec(m));
        if !(self.v_supply > self.v_ce && self.v_ce > 0.0) {
            return fail(format!("need V_supply > V_CE > 0 (got {} V, {} V)", self.v_supply, self.v_ce));
        }
        if !(self.v_x > self.v_be) {
            return fail(format!("tap voltage {} V must exceed V_BE {} V", self.v_x, self.v_be));
        }
        if !(self.v_supply > self.v_x) {
            return fail(format!("tap voltage {} V must be below the supply", self.v_x));
        }
        if !(self.i_c_ma > 0.0 && self.beta > 0.0 && self.k > 0.0) {
            return fail("I_C, β and k must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResistorSeries {
    Exact,
    E12,
    E24,
}

impl std::str::FromStr for ResistorSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Self::Exact),
            "e12" => Ok(Self::E12),
            "e24" => Ok(Self::E24),
            other => Err(Error::Config(format!("unknown resistor series {other:?}"))),
        }
    }
}

// Mantissas ×10, kept integral so decade scaling stays exact.
const E12: [f64; 12] = [10.0, 12.0, 15.0, 18.0, 22.0, 27.0, 33.0, 39.0, 47.0, 56.0, 68.0, 82.0];
const E24: [f64; 24] = [
    10.0, 11.0, 12.0, 13.0, 15.0, 16.0, 18.0, 20.0, 22.0, 24.0, 27.0, 30.0, 33.0, 36.0, 39.0, 43.0, 47.0, 51.0,
    56.0, 62.0, 68.0, 75.0, 82.0, 91.0,
];

impl ResistorSeries {
    fn mantissas(self) -> &'static [f64] {
        match self {
            Self::Exact => &[],
            Self::E12 => &E12,
            Self::E24 => &E24,
        }
    }

    /// Nearest preferred value by ratio (log distance).
    pub fn snap(self, ohm: f64) -> f64 {
        if self == Self::Exact || !(ohm > 0.0 && ohm.is_finite()) {
            return ohm;
        }
        let decade = 10f64.powf(ohm.log10().floor());
        let ms = self.mantissas();
        ms.iter()
            .map(|m| m * decade / 10.0)
            .chain(std::iter::once(10.0 * decade))
            .chain(std::iter::once(ms[ms.len() - 1] * decade / 100.0))
            .min_by(|a, b| (a / ohm).ln().abs().total_cmp(&(b / ohm).ln().abs()))
            .unwrap_or(ohm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasDesignResult {
    pub r1_ohm: f64,
    pub r2_ohm: f64,
    pub r3_ohm: f64,
    pub r4_ohm: f64,
    pub i_b_ma: f64,
    pub i_x_ma: f64,
    pub verified_ic_ma: f64,
    pub verified_vce: f64,
    pub series: ResistorSeries,
    /// Relative change of the verified collector current against the spec.
    pub ic_drift: f64,
}

pub fn design_bias(spec: &BiasSpec) -> Result<BiasDesignResult> {
    spec.validate()?;
    let i_c = spec.i_c_ma * 1e-3;
    let i_b = i_c / spec.beta;
    let i_x = spec.k * i_b;
    let r1 = spec.v_x / i_x;
    let r2 = (spec.v_supply - spec.v_x) / (i_x + i_b);
    let r3 = (spec.v_x - spec.v_be) / i_b;
    let r4 = (spec.v_supply - spec.v_ce) / i_c;
    for (name, r) in [("R1", r1), ("R2", r2), ("R3", r3), ("R4", r4)] {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InfeasibleSpec(format!("{name} = {r} Ω")));
        }
    }
    let mut out = BiasDesignResult {
        r1_ohm: r1,
        r2_ohm: r2,
        r3_ohm: r3,
        r4_ohm: r4,
        i_b_ma: i_b * 1e3,
        i_x_ma: i_x * 1e3,
        verified_ic_ma: 0.0,
        verified_vce: 0.0,
        series: ResistorSeries::Exact,
        ic_drift: 0.0,
    };
    attach_operating_point(&mut out, spec)?;
    Ok(out)
}

fn attach_operating_point(r: &mut BiasDesignResult, spec: &BiasSpec) -> Result<()> {
    let (ic, vce) = verify_bias(r, spec)?;
    r.verified_ic_ma = ic;
    r.verified_vce = vce;
    r.ic_drift = ic / spec.i_c_ma - 1.0;
    Ok(())
}

/// Re-solves the DC node equations for the tap voltage and returns the
/// recovered `(I_C mA, V_CE V)`.
pub fn verify_bias(r: &BiasDesignResult, spec: &BiasSpec) -> Result<(f64, f64)> {
    for v in [r.r1_ohm, r.r2_ohm, r.r3_ohm] {
        if !(v > 0.0) {
            return Err(Error::InfeasibleSpec(format!("non-positive resistor {v} Ω")));
        }
    }
    // (Vs − vx)/R2 = vx/R1 + (vx − Vbe)/R3
    let g = 1.0 / r.r1_ohm + 1.0 / r.r2_ohm + 1.0 / r.r3_ohm;
    let v_x = (spec.v_supply / r.r2_ohm + spec.v_be / r.r3_ohm) / g;
    if v_x <= spec.v_be {
        return Err(Error::NoOperatingPoint { v_x });
    }
    let i_b = (v_x - spec.v_be) / r.r3_ohm;
    let i_c = spec.beta * i_b;
    Ok((i_c * 1e3, spec.v_supply - i_c * r.r4_ohm))
}

/// Snaps every resistor to `series` and recomputes the operating point.
pub fn round_to_series(r: &BiasDesignResult, spec: &BiasSpec, series: ResistorSeries) -> Result<BiasDesignResult> {
    let mut out = BiasDesignResult {
        r1_ohm: series.snap(r.r1_ohm),
        r2_ohm: series.snap(r.r2_ohm),
        r3_ohm: series.snap(r.r3_ohm),
        r4_ohm: series.snap(r.r4_ohm),
        series,
        ..*r
    };
    attach_operating_point(&mut out, spec)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn reference_spec() {
        let r = design_bias(&BiasSpec::default()).unwrap();
        assert!(rel(r.r1_ohm, 300.0) < 1e-12);
        assert!(rel(r.r2_ohm, 3.5 / 5.1e-3) < 1e-12);
        assert!(rel(r.r3_ohm, 7000.0) < 1e-12);
        assert!(rel(r.r4_ohm, 150.0) < 1e-12);
        assert!(rel(r.verified_ic_ma, 20.0) < 1e-9);
        assert!(rel(r.verified_vce, 2.0) < 1e-9);
    }

    #[test]
    fn infeasible_specs() {
        let inf = BiasSpec { beta: f64::INFINITY, ..BiasSpec::default() };
        assert!(matches!(design_bias(&inf), Err(Error::InfeasibleSpec(_))));
        let flat = BiasSpec { v_x: 0.8, ..BiasSpec::default() };
        assert!(matches!(design_bias(&flat), Err(Error::InfeasibleSpec(_))));
        let low = BiasSpec { v_supply: 1.0, ..BiasSpec::default() };
        assert!(design_bias(&low).is_err());
    }

    #[test]
    fn rounded_r3_raises_collector_current() {
        // Oracle: node equation with R3 = 6.8 kΩ solved by hand.
        // vx·(1/300 + 1/686.27 + 1/6800) = 5/686.27 + 0.8/6800
        let spec = BiasSpec::default();
        let mut r = design_bias(&spec).unwrap();
        r.r3_ohm = 6800.0;
        let r2 = 3.5 / 5.1e-3;
        let vx = (5.0 / r2 + 0.8 / 6800.0) / (1.0 / 300.0 + 1.0 / r2 + 1.0 / 6800.0);
        let ic = 200.0 * (vx - 0.8) / 6800.0 * 1e3;
        let (got, _) = verify_bias(&r, &spec).unwrap();
        assert!((got - ic).abs() < 1e-12);
        assert!((got - 20.6).abs() < 0.05);
    }

    #[test]
    fn zero_collector_resistor() {
        let spec = BiasSpec::default();
        let mut r = design_bias(&spec).unwrap();
        r.r4_ohm = 0.0;
        assert_eq!(verify_bias(&r, &spec).unwrap().1, 5.0);
    }

    #[test]
    fn cutoff_detected() {
        let spec = BiasSpec::default();
        let mut r = design_bias(&spec).unwrap();
        r.r2_ohm = 1e9;
        assert!(matches!(verify_bias(&r, &spec), Err(Error::NoOperatingPoint { .. })));
    }

    #[test]
    fn preferred_values() {
        assert_eq!(ResistorSeries::E24.snap(7000.0), 6800.0);
        assert_eq!(ResistorSeries::E12.snap(300.0), 330.0);
        assert_eq!(ResistorSeries::E24.snap(300.0), 300.0);
        assert!((ResistorSeries::E12.snap(9.6) - 10.0).abs() < 1e-12);
        assert_eq!(ResistorSeries::Exact.snap(686.27), 686.27);
    }

    #[test]
    fn rounding_reports_drift() {
        let spec = BiasSpec::default();
        let r = design_bias(&spec).unwrap();
        assert_eq!(round_to_series(&r, &spec, ResistorSeries::Exact).unwrap(), r);
        let e12 = round_to_series(&r, &spec, ResistorSeries::E12).unwrap();
        assert_eq!(e12.r1_ohm, 330.0);
        assert_eq!(e12.series, ResistorSeries::E12);
        let (ic, vce) = verify_bias(&e12, &spec).unwrap();
        assert_eq!((ic, vce), (e12.verified_ic_ma, e12.verified_vce));
        assert!(e12.ic_drift.abs() > 1e-3);
    }
}
