#![allow(dead_code)]

use std::path::PathBuf;

use ampkit_core::twoport::TwoPortS;
use ampkit_core::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const F0: f64 = 3.2e9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn polar(mag: f64, deg: f64) -> Complex64 {
    Complex64::from_polar(mag, deg.to_radians())
}

/// BFP640 at 3.2 GHz, Vce = 2 V, Ic = 20 mA (rectangular table values).
pub fn bfp640() -> TwoPortS {
    TwoPortS::new(F0, c(-0.301283, 0.1411), c(0.055728, 0.0527), c(3.559701, 6.1905), c(0.055297, -0.1283), 50.0)
        .unwrap()
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn random_in_disk(rng: &mut ChaCha8Rng, r_max: f64) -> Complex64 {
    let r = r_max * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// A plausible small-signal transistor: passive-ish ports, gain, weak feedback.
pub fn random_device(rng: &mut ChaCha8Rng) -> TwoPortS {
    let s11 = random_in_disk(rng, 0.95);
    let s22 = random_in_disk(rng, 0.95);
    let s21 = Complex64::from_polar(rng.gen_range(0.5..8.0), rng.gen_range(-3.1..3.1));
    let s12 = Complex64::from_polar(rng.gen_range(0.005..0.25), rng.gen_range(-3.1..3.1));
    TwoPortS::new(F0, s11, s12, s21, s22, 50.0).unwrap()
}

/// Largest |Γ_in| over the load plane and |Γ_out| over the source plane,
/// sampled on an n_r × n_phi polar grid covering the closed unit disk.
/// Written out directly rather than through the library.
pub fn disk_scan(net: &TwoPortS, n_r: usize, n_phi: usize) -> (f64, f64) {
    let p = net.s12 * net.s21;
    (0..n_r)
        .into_par_iter()
        .map(|i| {
            let r = i as f64 / (n_r - 1) as f64;
            let mut worst = (0.0f64, 0.0f64);
            for j in 0..n_phi {
                let g = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64);
                let gin = (net.s11 + p * g / (1.0 - net.s22 * g)).norm();
                let gout = (net.s22 + p * g / (1.0 - net.s11 * g)).norm();
                worst.0 = worst.0.max(gin);
                worst.1 = worst.1.max(gout);
            }
            worst
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)))
}
