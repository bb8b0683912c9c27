mod common;

use ampkit_core::twoport::{
    abcd_to_s, cascade, cascade_all, element_to_twoport, gamma_to_z, s_to_abcd, z_to_gamma, AbcdMatrix, ElementModel,
    Lumped, TwoPortS,
};
use ampkit_core::{Complex64, Error};
use common::{c, F0};
use proptest::prelude::*;

fn cplx(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r, -180.0..180.0f64).prop_map(|(m, d)| Complex64::from_polar(m, d.to_radians()))
}

fn twoport() -> impl Strategy<Value = TwoPortS> {
    (cplx(1.5), cplx(1.0), (0.05..10.0f64, -180.0..180.0f64), cplx(1.5), 10.0..200.0f64).prop_map(
        |(s11, s12, (m21, d21), s22, z0)| {
            TwoPortS::new(F0, s11, s12, Complex64::from_polar(m21, d21.to_radians()), s22, z0).unwrap()
        },
    )
}

fn element() -> impl Strategy<Value = ElementModel> {
    let lumped = prop_oneof![
        (1e-11..1e-7f64).prop_map(|h| Lumped::Inductor { henry: h }),
        (1e-14..1e-10f64).prop_map(|f| Lumped::Capacitor { farad: f }),
    ];
    prop_oneof![
        lumped.clone().prop_map(|part| ElementModel::Series { part }),
        lumped.prop_map(|part| ElementModel::Shunt { part }),
        (20.0..120.0f64, 0.0..0.5f64).prop_map(|(z, l)| ElementModel::Line { z0_ohm: z, length_wl: l, ref_freq_hz: F0 }),
        (20.0..120.0f64, 0.01..0.24f64)
            .prop_map(|(z, l)| ElementModel::OpenStub { z0_ohm: z, length_wl: l, ref_freq_hz: F0 }),
        (20.0..120.0f64, 0.01..0.49f64)
            .prop_map(|(z, l)| ElementModel::ShortStub { z0_ohm: z, length_wl: l, ref_freq_hz: F0 }),
    ]
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn s_abcd_round_trip(net in twoport()) {
        let back = abcd_to_s(&s_to_abcd(&net).unwrap(), net.z0_ohm).unwrap();
        for (a, b) in [(back.s11, net.s11), (back.s12, net.s12), (back.s21, net.s21), (back.s22, net.s22)] {
            prop_assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }
}

proptest! {
    #[test]
    fn abcd_s_round_trip_of_elements(e in element()) {
        let m = e.abcd(F0).unwrap();
        let back = s_to_abcd(&abcd_to_s(&m, 50.0).unwrap()).unwrap();
        prop_assert!(close(back.a, m.a, 1e-12) && close(back.b, m.b, 1e-12));
        prop_assert!(close(back.c, m.c, 1e-12) && close(back.d, m.d, 1e-12));
    }

    #[test]
    fn lossless_elements_conserve_power(e in element(), f in 0.2e9..8e9f64) {
        let s = match element_to_twoport(&e, f, 50.0) {
            Ok(s) => s,
            Err(Error::StubSingularity { .. }) => return Ok(()),
            Err(err) => return Err(TestCaseError::fail(err.to_string())),
        };
        prop_assert!((s.s11.norm_sqr() + s.s21.norm_sqr() - 1.0).abs() < 1e-9);
        prop_assert!((s.s22.norm_sqr() + s.s12.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn passive_cascades_are_reciprocal(es in prop::collection::vec(element(), 1..6)) {
        let ms: Vec<_> = es.iter().map(|e| e.abcd(F0).unwrap()).collect();
        let m = cascade_all(F0, &ms).unwrap();
        prop_assert!((m.det() - 1.0).norm() < 1e-9);
        let s = m.to_s(50.0).unwrap();
        prop_assert!((s.s12 - s.s21).norm() < 1e-9);
    }

    #[test]
    fn cascade_is_associative(a in element(), b in element(), e in element()) {
        let (ma, mb, me) = (a.abcd(F0).unwrap(), b.abcd(F0).unwrap(), e.abcd(F0).unwrap());
        let left = cascade(&cascade(&ma, &mb).unwrap(), &me).unwrap();
        let right = cascade(&ma, &cascade(&mb, &me).unwrap()).unwrap();
        let scale = 1.0 + [left.a, left.b, left.c, left.d].iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (x, y) in [(left.a, right.a), (left.b, right.b), (left.c, right.c), (left.d, right.d)] {
            prop_assert!((x - y).norm() < 1e-12 * scale * scale);
        }
    }

    #[test]
    fn identity_is_neutral(e in element()) {
        let m = e.abcd(F0).unwrap();
        let id = AbcdMatrix::identity(F0);
        prop_assert_eq!(cascade(&id, &m).unwrap(), m);
        prop_assert_eq!(cascade(&m, &id).unwrap(), m);
    }

    #[test]
    fn gamma_z_round_trip(g in cplx(0.999)) {
        let z = gamma_to_z(g, 50.0).unwrap();
        prop_assert!(z.re >= -1e-9);
        prop_assert!((z_to_gamma(z, 50.0).unwrap() - g).norm() < 1e-10);
    }
}

// Textbook closed forms, written without the chain matrix.
#[test]
fn series_and_shunt_match_closed_forms() {
    let z0 = 50.0;
    let z = c(13.0, -27.0);
    let s = AbcdMatrix::series(z, F0).to_s(z0).unwrap();
    assert!((s.s11 - z / (z + 2.0 * z0)).norm() < 1e-14);
    assert!((s.s21 - 2.0 * z0 / (z + 2.0 * z0)).norm() < 1e-14);

    let y = c(0.004, 0.02);
    let s = AbcdMatrix::shunt(y, F0).to_s(z0).unwrap();
    assert!((s.s11 - (-y * z0) / (2.0 + y * z0)).norm() < 1e-14);
    assert!((s.s21 - 2.0 / (2.0 + y * z0)).norm() < 1e-14);
}

#[test]
fn matched_line_is_pure_phase_delay() {
    for len in [0.0, 0.1, 0.125, 0.37] {
        let e = ElementModel::Line { z0_ohm: 50.0, length_wl: len, ref_freq_hz: F0 };
        let s = element_to_twoport(&e, F0, 50.0).unwrap();
        assert!(s.s11.norm() < 1e-14);
        let want = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * len);
        assert!((s.s21 - want).norm() < 1e-14);
    }
}

#[test]
fn line_scales_with_frequency() {
    // Fixed physical length: an eighth-wave at f0 is a quarter-wave at 2·f0.
    let e = ElementModel::Line { z0_ohm: 50.0, length_wl: 0.125, ref_freq_hz: F0 };
    let s = element_to_twoport(&e, 2.0 * F0, 50.0).unwrap();
    assert!((s.s21 - c(0.0, -1.0)).norm() < 1e-14);
}

#[test]
fn stub_poles_are_reported() {
    let open = ElementModel::OpenStub { z0_ohm: 50.0, length_wl: 0.25, ref_freq_hz: F0 };
    assert!(matches!(open.abcd(F0), Err(Error::StubSingularity { .. })));
    let short = ElementModel::ShortStub { z0_ohm: 50.0, length_wl: 0.5, ref_freq_hz: F0 };
    assert!(matches!(short.abcd(F0), Err(Error::StubSingularity { .. })));
}

#[test]
fn zero_s21_is_degenerate() {
    let net = TwoPortS::new(F0, c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.2, 0.0), 50.0).unwrap();
    assert!(matches!(s_to_abcd(&net), Err(Error::DegenerateNetwork(_))));
}

#[test]
fn cascade_rejects_mixed_frequencies() {
    let a = AbcdMatrix::identity(1e9);
    let b = AbcdMatrix::identity(2e9);
    assert!(matches!(cascade(&a, &b), Err(Error::FrequencyMismatch { .. })));
}

#[test]
fn device_survives_round_trip() {
    let net = common::bfp640();
    let back = abcd_to_s(&s_to_abcd(&net).unwrap(), 50.0).unwrap();
    assert!((back.s21 - net.s21).norm() < 1e-12);
    assert!((back.s12 - net.s12).norm() < 1e-12);
}
