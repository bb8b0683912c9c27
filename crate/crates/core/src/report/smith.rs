use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pipeline::DesignReport;
use crate::stability::StabilityBoundary;
use crate::units::power_db;

const SIZE: f64 = 600.0;
const CENTER: f64 = SIZE / 2.0;
const SCALE: f64 = 250.0;

/// Circle in Γ-plane units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryCircle {
    pub id: String,
    pub class: String,
    pub center: Complex64,
    pub radius: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryPoint {
    pub id: String,
    pub gamma: Complex64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SmithGeometry {
    pub grid: Vec<GeometryCircle>,
    pub stability: Vec<GeometryCircle>,
    pub noise: Vec<GeometryCircle>,
    pub points: Vec<GeometryPoint>,
}

pub fn smith_geometry(r: &DesignReport) -> SmithGeometry {
    let mut g = SmithGeometry::default();
    let circ = |id: String, class: &str, center: Complex64, radius: f64, label: String| GeometryCircle {
        id,
        class: class.into(),
        center,
        radius,
        label,
    };
    g.grid.push(circ("unit-circle".into(), "unit", Complex64::new(0.0, 0.0), 1.0, "|Γ| = 1".into()));
    for rn in [0.2, 0.5, 1.0, 2.0, 5.0] {
        g.grid.push(circ(
            format!("r-{rn}"),
            "grid-r",
            Complex64::new(rn / (1.0 + rn), 0.0),
            1.0 / (1.0 + rn),
            format!("r = {rn}"),
        ));
    }
    for xn in [0.2, 0.5, 1.0, 2.0, 5.0, -0.2, -0.5, -1.0, -2.0, -5.0] {
        g.grid.push(circ(format!("x-{xn}"), "grid-x", Complex64::new(1.0, 1.0 / xn), 1.0 / xn.abs(), format!("x = {xn}")));
    }

    for (plane, b) in [("source", &r.stability.source), ("load", &r.stability.load)] {
        if let StabilityBoundary::Circle(c) = b {
            g.stability.push(circ(
                format!("stability-{plane}"),
                "stability",
                c.center,
                c.radius,
                format!("{plane} stability circle ({:?} stable)", c.stable_region),
            ));
        }
    }

    if let Some(n) = &r.noise {
        for (i, c) in n.circles.iter().enumerate() {
            g.noise.push(circ(
                format!("noise-{i}"),
                "noise",
                c.center,
                c.radius,
                format!("NF = {:.2} dB", power_db(c.f_target)),
            ));
        }
        g.points.push(GeometryPoint { id: "gamma-opt".into(), gamma: n.params.gamma_opt, label: "Γ_opt".into() });
    }
    if let Some(m) = &r.matching {
        g.points.push(GeometryPoint { id: "gamma-s".into(), gamma: m.gamma_s, label: "Γ_S".into() });
        g.points.push(GeometryPoint { id: "gamma-l".into(), gamma: m.gamma_l, label: "Γ_L".into() });
    }
    g
}

fn px(z: Complex64) -> (f64, f64) {
    (CENTER + SCALE * z.re, CENTER - SCALE * z.im)
}

fn circle_svg(out: &mut String, c: &GeometryCircle, style: &str, clip: Option<&str>) {
    let (x, y) = px(c.center);
    let clip = clip.map(|id| format!(" clip-path=\"url(#{id})\"")).unwrap_or_default();
    let _ = writeln!(
        out,
        "  <circle id=\"{}\" class=\"{}\" cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"{:.4}\" data-center-re=\"{:.12e}\" data-center-im=\"{:.12e}\" data-radius=\"{:.12e}\" {style}{clip}><title>{}</title></circle>",
        c.id,
        c.class,
        SCALE * c.radius,
        c.center.re,
        c.center.im,
        c.radius,
        c.label
    );
}

pub fn render_svg(g: &SmithGeometry) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(
        out,
        "  <defs><clipPath id=\"disk\"><circle cx=\"{CENTER}\" cy=\"{CENTER}\" r=\"{SCALE}\"/></clipPath></defs>"
    );
    let _ = writeln!(out, "  <rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>");
    for c in &g.grid {
        match c.class.as_str() {
            "unit" => circle_svg(&mut out, c, "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"", None),
            _ => circle_svg(&mut out, c, "fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.6\"", Some("disk")),
        }
    }
    let _ = writeln!(
        out,
        "  <line x1=\"{:.4}\" y1=\"{CENTER}\" x2=\"{:.4}\" y2=\"{CENTER}\" stroke=\"#bbbbbb\" stroke-width=\"0.6\"/>",
        CENTER - SCALE,
        CENTER + SCALE
    );
    for c in &g.stability {
        circle_svg(&mut out, c, "fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"", None);
    }
    for c in &g.noise {
        circle_svg(&mut out, c, "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\"", None);
    }
    for p in &g.points {
        let (x, y) = px(p.gamma);
        let _ = writeln!(
            out,
            "  <circle id=\"{}\" class=\"point\" cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"4\" fill=\"#2ca02c\" data-re=\"{:.12e}\" data-im=\"{:.12e}\"/>",
            p.id, p.gamma.re, p.gamma.im
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.4}\" y=\"{:.4}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
            x + 6.0,
            y - 6.0,
            p.label
        );
    }
    out.push_str("</svg>\n");
    out
}
