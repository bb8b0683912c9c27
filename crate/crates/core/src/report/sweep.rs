use std::fmt::Write as _;

use crate::pipeline::DesignReport;

pub const HEADER: [&str; 9] = ["freq_Hz", "S11_dB", "S11_deg", "S21_dB", "S21_deg", "S22_dB", "S22_deg", "K", "mu"];

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.9e}")).unwrap_or_default()
}

/// Delimited table of the primary verification sweep. The NF column is
/// present only when noise parameters were supplied.
pub fn render(report: &DesignReport) -> String {
    let with_nf = report.noise.is_some();
    let mut out = HEADER.join(",");
    if with_nf {
        out.push_str(",NF_dB");
    }
    out.push('\n');
    let Some(v) = report.verification.first() else {
        return out;
    };
    for r in &v.rows {
        let _ = write!(
            out,
            "{:.6},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{},{}",
            r.freq_hz,
            r.s11_db,
            r.s11_deg,
            r.s21_db,
            r.s21_deg,
            r.s22_db,
            r.s22_deg,
            opt(r.k),
            opt(r.mu)
        );
        if with_nf {
            let _ = write!(out, ",{}", opt(r.nf_db));
        }
        out.push('\n');
    }
    out
}
