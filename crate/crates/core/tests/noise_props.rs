mod common;

use ampkit_core::noise::{noise_circle, noise_figure, NoiseParams};
use ampkit_core::{Complex64, Error};
use common::{c, F0};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = NoiseParams> {
    (1.0..3.0f64, 0.0..0.9f64, -180.0..180.0f64, 0.5..60.0f64).prop_map(|(f, m, d, rn)| {
        NoiseParams::new(f, Complex64::from_polar(m, d.to_radians()), rn, F0).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn optimum_gives_minimum(np in params(), g in (0.0..0.99f64, -3.1..3.1f64)) {
        let at_opt = noise_figure(np.gamma_opt, &np, 50.0).unwrap();
        prop_assert!((at_opt - np.f_min).abs() < 1e-12);
        let f = noise_figure(Complex64::from_polar(g.0, g.1), &np, 50.0).unwrap();
        prop_assert!(f >= np.f_min - 1e-12);
    }

    #[test]
    fn circles_reproduce_their_target(np in params(), excess_db in 0.01..3.0f64) {
        let target = np.f_min * 10f64.powf(excess_db / 10.0);
        let nc = noise_circle(target, &np, 50.0).unwrap();
        prop_assert!(nc.center.norm() + nc.radius < 1.0 + 1e-12);
        for j in 0..360 {
            let g = nc.center + Complex64::from_polar(nc.radius, (j as f64).to_radians());
            let f = noise_figure(g, &np, 50.0).unwrap();
            prop_assert!((f - target).abs() < 1e-9, "{f} vs {target}");
        }
    }

    #[test]
    fn circles_nest(np in params()) {
        // Higher targets give circles that contain the lower ones.
        let a = noise_circle(np.f_min * 1.1, &np, 50.0).unwrap();
        let b = noise_circle(np.f_min * 1.5, &np, 50.0).unwrap();
        prop_assert!((a.center - b.center).norm() + a.radius <= b.radius + 1e-12);
    }
}

#[test]
fn target_at_fmin_collapses_to_optimum() {
    let np = NoiseParams::new(1.3, c(0.2, 0.3), 8.0, F0).unwrap();
    let nc = noise_circle(1.3, &np, 50.0).unwrap();
    assert!((nc.center - np.gamma_opt).norm() < 1e-15);
    assert!(nc.radius < 1e-15);
}

#[test]
fn target_below_fmin_is_rejected() {
    let np = NoiseParams::new(1.3, c(0.2, 0.3), 8.0, F0).unwrap();
    assert!(matches!(noise_circle(1.2, &np, 50.0), Err(Error::TargetBelowFmin { .. })));
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(NoiseParams::new(0.9, c(0.0, 0.0), 8.0, F0).is_err());
    assert!(NoiseParams::new(1.2, c(1.0, 0.0), 8.0, F0).is_err());
    assert!(NoiseParams::new(1.2, c(0.1, 0.0), -1.0, F0).is_err());
}
