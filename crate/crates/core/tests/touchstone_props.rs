mod common;

use ampkit_core::touchstone::{
    parse_touchstone, sample_at, write_touchstone, BiasAnnotation, DataFormat, FreqUnit, TouchstoneDocument,
};
use ampkit_core::twoport::TwoPortS;
use ampkit_core::{Complex64, Error};
use common::{c, data_path};
use proptest::prelude::*;

const FORMATS: [DataFormat; 3] = [DataFormat::MA, DataFormat::DB, DataFormat::RI];

fn cplx() -> impl Strategy<Value = Complex64> {
    (1e-4..20.0f64, -179.9..179.9f64).prop_map(|(m, d)| Complex64::from_polar(m, d.to_radians()))
}

fn document() -> impl Strategy<Value = TouchstoneDocument> {
    (
        prop::collection::vec((cplx(), cplx(), cplx(), cplx()), 1..12),
        prop_oneof![Just(FreqUnit::Hz), Just(FreqUnit::KHz), Just(FreqUnit::MHz), Just(FreqUnit::GHz)],
        prop_oneof![Just(50.0), Just(75.0), 10.0..200.0f64],
        0.1e9..2e9f64,
    )
        .prop_map(|(rows, unit, z0, f_start)| {
            let records = rows
                .into_iter()
                .enumerate()
                .map(|(i, (a, b, cc, d))| TwoPortS::new(f_start + 0.25e9 * i as f64, a, b, cc, d, z0).unwrap())
                .collect();
            TouchstoneDocument { freq_unit: unit, format: DataFormat::RI, z0_ohm: z0, records, bias: BiasAnnotation::default() }
        })
}

fn max_diff(a: &TouchstoneDocument, b: &TouchstoneDocument) -> f64 {
    a.records
        .iter()
        .zip(&b.records)
        .flat_map(|(x, y)| [(x.s11, y.s11), (x.s12, y.s12), (x.s21, y.s21), (x.s22, y.s22)])
        .map(|(x, y)| (x - y).norm() / (1.0 + y.norm()))
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn write_parse_round_trip(doc in document()) {
        for fmt in FORMATS {
            let text = write_touchstone(&doc, fmt).unwrap();
            let back = parse_touchstone(&text).unwrap();
            prop_assert_eq!(back.format, fmt);
            prop_assert_eq!(back.freq_unit, doc.freq_unit);
            prop_assert_eq!(back.records.len(), doc.records.len());
            prop_assert!(max_diff(&back, &doc) < 1e-12);
            for (x, y) in back.records.iter().zip(&doc.records) {
                prop_assert!((x.freq_hz / y.freq_hz - 1.0).abs() < 1e-14);
                prop_assert_eq!(x.z0_ohm, y.z0_ohm);
            }
        }
    }

    #[test]
    fn formats_agree(doc in document()) {
        let parsed: Vec<_> = FORMATS
            .iter()
            .map(|&f| parse_touchstone(&write_touchstone(&doc, f).unwrap()).unwrap())
            .collect();
        prop_assert!(max_diff(&parsed[0], &parsed[1]) < 1e-9);
        prop_assert!(max_diff(&parsed[1], &parsed[2]) < 1e-9);
        prop_assert!(max_diff(&parsed[0], &parsed[2]) < 1e-9);
    }

    #[test]
    fn sampling_hits_records_exactly(doc in document()) {
        for r in &doc.records {
            prop_assert_eq!(sample_at(&doc, r.freq_hz).unwrap(), *r);
        }
    }

    #[test]
    fn interpolation_stays_between_magnitudes(doc in document(), t in 0.0..1.0f64) {
        prop_assume!(doc.records.len() >= 2);
        let (a, b) = (&doc.records[0], &doc.records[1]);
        let s = sample_at(&doc, a.freq_hz + t * (b.freq_hz - a.freq_hz)).unwrap();
        let (lo, hi) = (a.s21.norm().min(b.s21.norm()), a.s21.norm().max(b.s21.norm()));
        prop_assert!(s.s21.norm() >= lo - 1e-12 && s.s21.norm() <= hi + 1e-12);
    }
}

#[test]
fn reference_file_reproduces_table() {
    let text = std::fs::read_to_string(data_path("bfp640_3g2.s2p")).unwrap();
    let doc = parse_touchstone(&text).unwrap();
    assert_eq!(doc.records.len(), 1);
    let r = doc.records[0];
    let want = common::bfp640();
    assert_eq!(r.freq_hz, 3.2e9);
    for (x, y) in [(r.s11, want.s11), (r.s12, want.s12), (r.s21, want.s21), (r.s22, want.s22)] {
        assert!((x - y).norm() < 1e-3);
    }
    assert_eq!(doc.bias, BiasAnnotation { vce: Some(2.0), ic_ma: Some(20.0) });
}

#[test]
fn bias_comment_survives_write() {
    let text = std::fs::read_to_string(data_path("bfp640_3g2.s2p")).unwrap();
    let doc = parse_touchstone(&text).unwrap();
    let back = parse_touchstone(&write_touchstone(&doc, DataFormat::MA).unwrap()).unwrap();
    assert_eq!(back.bias, doc.bias);
}

#[test]
fn single_point_file_refuses_other_frequencies() {
    let text = std::fs::read_to_string(data_path("bfp640_3g2.s2p")).unwrap();
    let doc = parse_touchstone(&text).unwrap();
    assert!(sample_at(&doc, 3.2e9 + 0.5).is_ok());
    assert!(matches!(sample_at(&doc, 3.3e9), Err(Error::OutOfBand { .. })));
}

#[test]
fn malformed_inputs_are_rejected() {
    type Check = fn(&Error) -> bool;
    let cases: [(&str, Check); 8] = [
        ("1 0 0 0 0 0 0 0 0\n", |e| matches!(e, Error::MalformedOptionLine(_))),
        ("# GHz S XY R 50\n1 0 0 0 0 0 0 0 0\n", |e| matches!(e, Error::MalformedOptionLine(_))),
        ("# GHz Y RI R 50\n1 0 0 0 0 0 0 0 0\n", |e| matches!(e, Error::UnsupportedParamType(_))),
        ("# GHz S RI R 50\n1 0 0 0 0 0 0 0\n", |e| matches!(e, Error::WrongColumnCount { line: 2, found: 8 })),
        ("# GHz S RI R 50\n1 0 0 0 x 0 0 0 0\n", |e| matches!(e, Error::BadNumber { line: 2, .. })),
        ("# GHz S RI R 50\n2 0 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0 0\n", |e| {
            matches!(e, Error::NonMonotonicFrequency { line: 3, .. })
        }),
        ("# GHz S RI R 50\n! nothing\n", |e| matches!(e, Error::EmptyDocument)),
        ("[Version] 2.0\n# GHz S RI R 50\n", |e| matches!(e, Error::UnsupportedVersion(_))),
    ];
    for (text, check) in cases {
        let err = parse_touchstone(text).unwrap_err();
        assert!(check(&err), "{text:?} gave {err:?}");
    }
}

#[test]
fn defaults_and_case_are_tolerated() {
    // Bare "#" means GHz, S, MA, 50 Ω.
    let doc = parse_touchstone("#\n1 0.5 90 2 0 0.1 0 0.3 -90\n").unwrap();
    assert_eq!(doc.freq_unit, FreqUnit::GHz);
    assert_eq!(doc.format, DataFormat::MA);
    assert_eq!(doc.z0_ohm, 50.0);
    assert!((doc.records[0].s11 - c(0.0, 0.5)).norm() < 1e-15);
    let doc = parse_touchstone("# mhz s db r 75\n100 -6 0 6 0 -20 0 -10 0\n").unwrap();
    assert_eq!(doc.records[0].freq_hz, 100e6);
    assert!((doc.records[0].s21.norm() - 10f64.powf(0.3)).abs() < 1e-12);
}
