//! Report emitters, registered by form name: `human`, `machine`, `sweep`
//! and `smith`.

mod human;
mod smith;
mod sweep;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::pipeline::DesignReport;
use crate::{Error, Result};

pub use smith::{smith_geometry, GeometryCircle, GeometryPoint, SmithGeometry};

pub trait ReportEmitter: Send + Sync {
    fn name(&self) -> &'static str;

    /// Appended to the output stem, e.g. `.sweep.csv`.
    fn suffix(&self) -> &'static str;

    fn render(&self, report: &DesignReport) -> Result<String>;
}

pub struct HumanEmitter;
pub struct MachineEmitter;
pub struct SweepEmitter;
pub struct SmithEmitter;

impl ReportEmitter for HumanEmitter {
    fn name(&self) -> &'static str {
        "human"
    }
    fn suffix(&self) -> &'static str {
        ".txt"
    }
    fn render(&self, report: &DesignReport) -> Result<String> {
        Ok(human::render(report))
    }
}

impl ReportEmitter for MachineEmitter {
    fn name(&self) -> &'static str {
        "machine"
    }
    fn suffix(&self) -> &'static str {
        ".report"
    }
    fn render(&self, report: &DesignReport) -> Result<String> {
        let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

impl ReportEmitter for SweepEmitter {
    fn name(&self) -> &'static str {
        "sweep"
    }
    fn suffix(&self) -> &'static str {
        ".sweep.csv"
    }
    fn render(&self, report: &DesignReport) -> Result<String> {
        Ok(sweep::render(report))
    }
}

impl ReportEmitter for SmithEmitter {
    fn name(&self) -> &'static str {
        "smith"
    }
    fn suffix(&self) -> &'static str {
        ".smith.svg"
    }
    fn render(&self, report: &DesignReport) -> Result<String> {
        Ok(smith::render_svg(&smith_geometry(report)))
    }
}

pub fn parse_machine_report(text: &str) -> Result<DesignReport> {
    serde_json::from_str(text).map_err(|e| Error::Io(format!("machine report: {e}")))
}

#[derive(Clone)]
pub struct EmitterRegistry {
    entries: BTreeMap<&'static str, Arc<dyn ReportEmitter>>,
}

impl EmitterRegistry {
    pub fn with_builtins() -> Self {
        let mut r = Self { entries: BTreeMap::new() };
        r.register(Arc::new(HumanEmitter));
        r.register(Arc::new(MachineEmitter));
        r.register(Arc::new(SweepEmitter));
        r.register(Arc::new(SmithEmitter));
        r
    }

    pub fn register(&mut self, e: Arc<dyn ReportEmitter>) {
        self.entries.insert(e.name(), e);
    }

    pub fn get(&self, name: &str) -> Result<&Arc<dyn ReportEmitter>> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownReportForm(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for EmitterRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

/// Writes `<out_dir>/<stem><suffix>` for every requested form and returns
/// the written paths.
pub fn emit_report(report: &DesignReport, forms: &[&str], out_dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let registry = EmitterRegistry::with_builtins();
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for form in forms {
        let emitter = registry.get(form)?;
        let path = out_dir.join(format!("{stem}{}", emitter.suffix()));
        std::fs::write(&path, emitter.render(report)?)?;
        written.push(path);
    }
    Ok(written)
}
