use ampkit_core::microstrip::{analyze, electrical_to_physical, realize_stub_network, synthesize, Substrate};
use ampkit_core::synth::{synth_single_stub, StubKind};
use ampkit_core::units::SPEED_OF_LIGHT;
use ampkit_core::{Complex64, Error};
use proptest::prelude::*;
use std::f64::consts::PI;

const F0: f64 = 3.2e9;

fn substrate() -> impl Strategy<Value = Substrate> {
    (1.5..12.0f64, 0.1..2.0f64, 0.0..40.0f64).prop_map(|(er, h, t)| Substrate::new("random", er, h, t).unwrap())
}

/// Closed-form width synthesis for a zero-thickness strip (Wheeler /
/// Hammerstad inverse, about 1 % accurate).
fn closed_form_w_over_h(z0: f64, er: f64) -> f64 {
    let a = z0 / 60.0 * ((er + 1.0) / 2.0).sqrt() + (er - 1.0) / (er + 1.0) * (0.23 + 0.11 / er);
    let narrow = 8.0 * a.exp() / ((2.0 * a).exp() - 2.0);
    if narrow < 2.0 {
        return narrow;
    }
    let b = 377.0 * PI / (2.0 * z0 * er.sqrt());
    2.0 / PI * (b - 1.0 - (2.0 * b - 1.0).ln() + (er - 1.0) / (2.0 * er) * ((b - 1.0).ln() + 0.39 - 0.61 / er))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn synthesis_round_trip(z in 20.0..120.0f64, sub in substrate()) {
        let line = synthesize(z, &sub, F0).unwrap();
        let (z_back, e) = analyze(line.w_mm, &sub, F0).unwrap();
        prop_assert!((z_back - z).abs() < 0.01, "{z_back} vs {z}");
        prop_assert!((e / line.eps_eff - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eps_eff_is_bounded(u in 0.05..50.0f64, sub in substrate()) {
        let (_, e) = analyze(u * sub.h_mm, &sub, F0).unwrap();
        prop_assert!(e > 1.0 && e < sub.eps_r, "ε_eff {e} for ε_r {}", sub.eps_r);
    }

    #[test]
    fn impedance_falls_with_width(u in 0.05..40.0f64, sub in substrate()) {
        let (z1, _) = analyze(u * sub.h_mm, &sub, F0).unwrap();
        let (z2, _) = analyze(1.05 * u * sub.h_mm, &sub, F0).unwrap();
        prop_assert!(z2 < z1);
    }

    #[test]
    fn agrees_with_closed_form_inverse(z in 20.0..120.0f64, er in 2.0..10.0f64) {
        let sub = Substrate::new("thin", er, 1.0, 0.0).unwrap();
        let w = synthesize(z, &sub, F0).unwrap().w_mm;
        let want = closed_form_w_over_h(z, er);
        prop_assert!((w / want - 1.0).abs() < 0.02, "w/h {w} vs {want}");
    }
}

#[test]
fn fifty_ohm_in_air() {
    let sub = Substrate::air(1.0);
    let line = synthesize(50.0, &sub, F0).unwrap();
    assert!((line.w_mm / closed_form_w_over_h(50.0, 1.0) - 1.0).abs() < 0.002);
    assert_eq!(line.eps_eff, 1.0);
}

#[test]
fn physical_length_in_air_is_free_space_fraction() {
    let quarter = electrical_to_physical(0.25, 1.0, F0);
    assert!((quarter - SPEED_OF_LIGHT / F0 / 4.0 * 1e3).abs() < 1e-9);
    // Denser substrate shortens the line by √ε_eff.
    assert!((electrical_to_physical(0.25, 4.0, F0) - quarter / 2.0).abs() < 1e-9);
}

#[test]
fn copper_thickness_lowers_impedance() {
    let bare = Substrate::new("bare", 3.38, 0.813, 0.0).unwrap();
    let clad = Substrate::ro4003c();
    let (z_bare, _) = analyze(1.8, &bare, F0).unwrap();
    let (z_clad, _) = analyze(1.8, &clad, F0).unwrap();
    assert!(z_clad < z_bare);
}

#[test]
fn out_of_range_inputs_are_rejected() {
    let sub = Substrate::ro4003c();
    assert!(matches!(synthesize(5.0, &sub, F0), Err(Error::TargetOutOfRange(_))));
    assert!(matches!(analyze(1e-4, &sub, F0), Err(Error::AspectRatioOutOfRange(_))));
    assert!(Substrate::new("bad", 0.5, 1.0, 0.0).is_err());
    assert!(Substrate::new("bad", 3.0, -1.0, 0.0).is_err());
}

#[test]
fn stub_network_realizes_on_ro4003c() {
    let sub = Substrate::ro4003c();
    let target = Complex64::from_polar(0.734, (-157.78f64).to_radians());
    let sol = &synth_single_stub(target, 50.0, F0, StubKind::Open).unwrap()[0];
    let real = realize_stub_network(sol, &sub, F0).unwrap();
    assert!((real.line.z0_ohm - 50.0).abs() < 0.01);
    let guided_mm = SPEED_OF_LIGHT / (F0 * real.line.eps_eff.sqrt()) * 1e3;
    assert!((real.line.length_mm - sol.line_len_wl * guided_mm).abs() < 1e-9);
    assert!((real.stub.length_mm - sol.stub_len_wl * guided_mm).abs() < 1e-9);
}
