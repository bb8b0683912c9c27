//! Simultaneous conjugate match and transducer-gain decomposition.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::stability::{self, Verdict};
use crate::twoport::{input_reflection, output_reflection, TwoPortS};
use crate::units::{power_db, DENOM_EPS};
use crate::{Error, Result};

/// Tolerance on the Γ_in(Γ_L) = Γ_S* fixed point.
const MATCH_FIXED_POINT_TOL: f64 = 1e-9;
/// Allowed disagreement between the two maximum-gain routes.
const GAIN_ROUTE_TOL_DB: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainBlocks {
    pub gs: f64,
    pub g0: f64,
    pub gl: f64,
    pub gt: f64,
}

impl GainBlocks {
    pub fn gs_db(&self) -> f64 {
        power_db(self.gs)
    }
    pub fn g0_db(&self) -> f64 {
        power_db(self.g0)
    }
    pub fn gl_db(&self) -> f64 {
        power_db(self.gl)
    }
    pub fn gt_db(&self) -> f64 {
        power_db(self.gt)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchDesign {
    /// Both roots of the source quadratic; a single entry when C₁ = 0.
    pub gamma_s_roots: Vec<Complex64>,
    pub gamma_l_roots: Vec<Complex64>,
    pub gamma_s: Complex64,
    pub gamma_l: Complex64,
    pub b1: f64,
    pub b2: f64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub gains: GainBlocks,
}

/// Roots of C·Γ² − B·Γ + C* = 0, i.e. Γ = (B ± √(B² − 4|C|²)) / 2C.
fn quadratic_roots(b: f64, c: Complex64) -> Result<Vec<Complex64>> {
    if c.norm() < DENOM_EPS {
        return Ok(vec![Complex64::new(0.0, 0.0)]);
    }
    let mut disc = b * b - 4.0 * c.norm_sqr();
    if disc < 0.0 {
        if disc > -1e-12 * b * b {
            disc = 0.0;
        } else {
            return Err(Error::NegativeDiscriminant);
        }
    }
    let root = disc.sqrt();
    Ok(vec![(b + root) / (2.0 * c), (b - root) / (2.0 * c)])
}

/// Root inside the unit disk. If both qualify, the smaller magnitude wins,
/// ties going to the smaller |phase|.
fn select_root(roots: &[Complex64]) -> Result<Complex64> {
    roots
        .iter()
        .copied()
        .filter(|g| g.norm() < 1.0)
        .min_by(|a, b| {
            a.norm()
                .total_cmp(&b.norm())
                .then(a.arg().abs().total_cmp(&b.arg().abs()))
        })
        .ok_or(Error::ReflectionOutOfDisk(roots.iter().map(|g| g.norm()).fold(f64::INFINITY, f64::min)))
}

fn require_unconditional(net: &TwoPortS) -> Result<()> {
    let report = stability::classify(net)?;
    if report.verdict != Verdict::Unconditional {
        return Err(Error::PotentiallyUnstable {
            k: report.k.unwrap_or(f64::INFINITY),
            delta_mag: report.delta_mag,
        });
    }
    Ok(())
}

pub fn conjugate_match(net: &TwoPortS) -> Result<MatchDesign> {
    require_unconditional(net)?;
    let (s11, s22) = (net.s11, net.s22);
    let d = stability::delta(net);
    let b1 = 1.0 + s11.norm_sqr() - s22.norm_sqr() - d.norm_sqr();
    let b2 = 1.0 + s22.norm_sqr() - s11.norm_sqr() - d.norm_sqr();
    let c1 = s11 - d * s22.conj();
    let c2 = s22 - d * s11.conj();

    let gamma_s_roots = quadratic_roots(b1, c1)?;
    let gamma_l_roots = quadratic_roots(b2, c2)?;
    let gamma_s = select_root(&gamma_s_roots)?;
    let gamma_l = select_root(&gamma_l_roots)?;

    let residual = (input_reflection(net, gamma_l)? - gamma_s.conj()).norm();
    if residual > MATCH_FIXED_POINT_TOL {
        return Err(Error::MatchInconsistent { residual });
    }
    let gains = gain_blocks(net, gamma_s, gamma_l)?;
    Ok(MatchDesign { gamma_s_roots, gamma_l_roots, gamma_s, gamma_l, b1, b2, c1, c2, gains })
}

/// Bilateral transducer-gain decomposition G_T = G_S·G_0·G_L, with the
/// source block using Γ_in (the load-dependent input reflection).
pub fn gain_blocks(net: &TwoPortS, gamma_s: Complex64, gamma_l: Complex64) -> Result<GainBlocks> {
    for g in [gamma_s, gamma_l] {
        if g.norm() >= 1.0 {
            return Err(Error::ReflectionOutOfDisk(g.norm()));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let gin = input_reflection(net, gamma_l)?;
    let den_s = (one - gin * gamma_s).norm_sqr();
    let den_l = (one - net.s22 * gamma_l).norm_sqr();
    if den_s < DENOM_EPS || den_l < DENOM_EPS {
        return Err(Error::DegenerateNetwork("gain denominator vanishes"));
    }
    let gs = (1.0 - gamma_s.norm_sqr()) / den_s;
    let g0 = net.s21.norm_sqr();
    let gl = (1.0 - gamma_l.norm_sqr()) / den_l;
    Ok(GainBlocks { gs, g0, gl, gt: gs * g0 * gl })
}

/// |s21/s12|·(K − √(K² − 1)) for K ≥ 1, and the stable-gain bound
/// |s21/s12| below that.
pub fn max_gain_closed_form(net: &TwoPortS) -> Result<f64> {
    let k = stability::k_factor(net)?;
    let ratio = net.s21.norm() / net.s12.norm();
    if k < 1.0 {
        return Ok(ratio);
    }
    // 1/(K + √(K²−1)) avoids cancellation at large K.
    Ok(ratio / (k + (k * k - 1.0).sqrt()))
}

/// Unilateral maximum gain |s21|² / ((1 − |s11|²)(1 − |s22|²)).
pub fn unilateral_max_gain(net: &TwoPortS) -> f64 {
    net.s21.norm_sqr() / ((1.0 - net.s11.norm_sqr()) * (1.0 - net.s22.norm_sqr()))
}

/// Maximum transducer gain, computed at the conjugate match and by the
/// closed form, cross-checked to 0.01 dB.
pub fn max_transducer_gain(net: &TwoPortS) -> Result<f64> {
    let design = conjugate_match(net)?;
    let by_blocks = design.gains.gt;
    let by_formula = match max_gain_closed_form(net) {
        Ok(g) => g,
        Err(Error::UnilateralDevice) => unilateral_max_gain(net),
        Err(e) => return Err(e),
    };
    let diff_db = (power_db(by_blocks) - power_db(by_formula)).abs();
    if diff_db > GAIN_ROUTE_TOL_DB {
        return Err(Error::GainCrossCheck { diff_db });
    }
    Ok(by_blocks)
}

/// Γ_out at the selected source termination, for the dual fixed point.
pub fn output_match_residual(net: &TwoPortS, design: &MatchDesign) -> Result<f64> {
    Ok((output_reflection(net, design.gamma_s)? - design.gamma_l.conj()).norm())
}
