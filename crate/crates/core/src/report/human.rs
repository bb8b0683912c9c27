use std::fmt::Write as _;

use num_complex::Complex64;

use crate::pipeline::{DesignReport, DesignStatus};
use crate::stability::StabilityBoundary;
use crate::synth::MatchNetwork;
use crate::twoport::{ElementModel, Lumped};
use crate::units::{power_db, to_polar_deg};

fn polar(z: Complex64) -> String {
    let (m, a) = to_polar_deg(z);
    format!("{m:.4}∠{a:.2}°")
}

fn element(e: &ElementModel) -> String {
    let part = |p: &Lumped| match *p {
        Lumped::Inductor { henry } => format!("L = {:.4} nH", henry * 1e9),
        Lumped::Capacitor { farad } => format!("C = {:.4} pF", farad * 1e12),
        Lumped::Resistor { ohm } => format!("R = {ohm:.3} Ω"),
    };
    match e {
        ElementModel::Series { part: p } => format!("series {}", part(p)),
        ElementModel::Shunt { part: p } => format!("shunt {}", part(p)),
        ElementModel::Line { length_wl, z0_ohm, .. } => format!("line {length_wl:.4} λ ({z0_ohm} Ω)"),
        ElementModel::OpenStub { length_wl, z0_ohm, .. } => format!("open stub {length_wl:.4} λ ({z0_ohm} Ω)"),
        ElementModel::ShortStub { length_wl, z0_ohm, .. } => format!("short stub {length_wl:.4} λ ({z0_ohm} Ω)"),
    }
}

fn boundary(b: &StabilityBoundary) -> String {
    match b.circle() {
        Some(c) => format!(
            "center {}, radius {:.4}, stable {:?}, unit disk stable: {}",
            polar(c.center),
            c.radius,
            c.stable_region,
            c.unit_disk_stable()
        ),
        None => "straight-line boundary (center at infinity)".into(),
    }
}

fn networks(out: &mut String, title: &str, nets: &[MatchNetwork]) {
    let _ = writeln!(out, "{title}:");
    for (i, n) in nets.iter().enumerate() {
        let els: Vec<String> = n.elements().iter().map(element).collect();
        let _ = writeln!(out, "  [{i}] {:<6} {}   (residual {:.1e})", n.style(), els.join(" → "), n.residual());
    }
}

pub fn render(r: &DesignReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Amplifier design at {:.4} GHz, z0 = {} Ω", r.f0_hz / 1e9, r.z0_ohm);
    if let (Some(v), Some(i)) = (r.device_bias.vce, r.device_bias.ic_ma) {
        let _ = writeln!(out, "Device bias from data file: V_CE = {v} V, I_C = {i} mA");
    }
    let d = &r.device;
    let _ = writeln!(
        out,
        "Device S: S11 {}  S21 {}  S12 {}  S22 {}",
        polar(d.s11),
        polar(d.s21),
        polar(d.s12),
        polar(d.s22)
    );

    let s = &r.stability;
    let _ = writeln!(out, "\nStability");
    let _ = writeln!(out, "  |Δ| = {:.4}", s.delta_mag);
    match s.k {
        Some(k) => {
            let _ = writeln!(out, "  K   = {k:.4}");
        }
        None => {
            let _ = writeln!(out, "  K   = ∞ (unilateral)");
        }
    }
    let _ = writeln!(out, "  μ   = {:.4}   μ' = {:.4}", s.mu, s.mu_prime);
    let _ = writeln!(out, "  verdict: {:?}{}", s.verdict, if s.boundary { " (boundary)" } else { "" });
    let _ = writeln!(out, "  source circle: {}", boundary(&s.source));
    let _ = writeln!(out, "  load circle:   {}", boundary(&s.load));

    if r.status == DesignStatus::HaltedConditionalStability {
        let _ = writeln!(out, "\nHalted: device is only conditionally stable; no conjugate match attempted.");
        return out;
    }

    if let Some(m) = &r.matching {
        let _ = writeln!(out, "\nSimultaneous conjugate match");
        let roots = |v: &[Complex64]| v.iter().map(|z| polar(*z)).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "  Γ_S roots: {}   selected {}", roots(&m.gamma_s_roots), polar(m.gamma_s));
        let _ = writeln!(out, "  Γ_L roots: {}   selected {}", roots(&m.gamma_l_roots), polar(m.gamma_l));
        let g = &m.gains;
        let _ = writeln!(
            out,
            "  G_S = {:.4} ({:.3} dB)  G_0 = {:.3} ({:.3} dB)  G_L = {:.4} ({:.3} dB)",
            g.gs,
            g.gs_db(),
            g.g0,
            g.g0_db(),
            g.gl,
            g.gl_db()
        );
        let _ = writeln!(out, "  G_T = {:.3} ({:.3} dB)", g.gt, power_db(g.gt));
    }
    if let Some(n) = &r.noise {
        let _ = writeln!(out, "  NF at Γ_S = {:.3} dB (F_min {:.3} dB)", n.nf_at_match_db, n.f_min_db);
    }

    let _ = writeln!(out);
    networks(&mut out, "Input networks (port → device)", &r.input_networks);
    networks(&mut out, "Output networks (port → device)", &r.output_networks);

    if !r.microstrip.is_empty() {
        let _ = writeln!(out, "\nMicrostrip ({})", r.microstrip_caveat);
        for p in &r.microstrip {
            let l = &p.lines;
            let _ = writeln!(
                out,
                "  {} [{}]: W = {:.3} mm, ε_eff = {:.4}; line {:.3} mm, stub {:.3} mm",
                p.port, p.network_index, l.line.w_mm, l.line.eps_eff, l.line.length_mm, l.stub.length_mm
            );
        }
    }

    if let Some(b) = &r.bias {
        let d = &b.design;
        let _ = writeln!(out, "\nBias network");
        let _ = writeln!(
            out,
            "  R1 = {:.1} Ω  R2 = {:.1} Ω  R3 = {:.1} Ω  R4 = {:.1} Ω  (I_B {:.4} mA, I_X {:.3} mA)",
            d.r1_ohm, d.r2_ohm, d.r3_ohm, d.r4_ohm, d.i_b_ma, d.i_x_ma
        );
        if let Some(x) = &b.rounded {
            let _ = writeln!(
                out,
                "  {:?}: R1 = {} Ω  R2 = {} Ω  R3 = {} Ω  R4 = {} Ω → I_C {:.3} mA ({:+.2} %), V_CE {:.3} V",
                x.series,
                x.r1_ohm,
                x.r2_ohm,
                x.r3_ohm,
                x.r4_ohm,
                x.verified_ic_ma,
                x.ic_drift * 100.0,
                x.verified_vce
            );
        }
        for a in &b.annotations {
            let _ = writeln!(out, "  note: {a}");
        }
    }

    if let Some(sm) = &r.summary {
        let _ = writeln!(out, "\nVerification at f0");
        for v in &r.verification {
            let _ = writeln!(
                out,
                "  {:<10} S21 {:.3} dB (error {:+.4} dB)  S11 {:.1} dB  S22 {:.1} dB",
                v.network, v.at_f0.s21_db, v.gain_error_db, v.at_f0.s11_db, v.at_f0.s22_db
            );
        }
        let _ = writeln!(out, "  G_T,max = {:.3} dB, achieved {:.3} dB", sm.gt_max_db, sm.achieved_gain_db);
    }

    if !r.deviations.is_empty() {
        let _ = writeln!(out, "\nKnown deviations from the published reference design");
        for d in &r.deviations {
            let _ = writeln!(out, "  - {}: published {}; computed {} [{}]", d.topic, d.published, d.computed, d.source);
        }
    }
    out
}
