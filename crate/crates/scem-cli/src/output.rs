//! Artifact writers. Every file `scem` produces records how it was made:
//! JSON reports embed a `provenance` object next to the `report`, CSVs open
//! with `#` comment lines holding the same object, and opaque formats get a
//! `<name>.meta.json` sidecar. Readers of the CSVs should skip lines
//! starting with `#`.

use std::error::Error;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::Global;

/// Enough to reproduce the run: binary version, subcommand, resolved
/// global settings, and the resolved option set as one JSON object.
/// Options left to library defaults stay `null`; the pinned version makes
/// those defaults recoverable.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub jobs: usize,
    pub deterministic: bool,
    pub output_dir: String,
    pub options: serde_json::Value,
}

impl Provenance {
    pub fn new(
        command: &'static str,
        global: &Global,
        options: &impl Serialize,
    ) -> Result<Self, Box<dyn Error>> {
        Ok(Provenance {
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed: global.seed,
            jobs: global.jobs,
            deterministic: global.deterministic,
            output_dir: global.output_dir.display().to_string(),
            options: serde_json::to_value(options)?,
        })
    }
}

pub fn write_json_report(
    path: &Path,
    prov: &Provenance,
    report: &impl Serialize,
) -> Result<(), Box<dyn Error>> {
    #[derive(Serialize)]
    struct Artifact<'a, T: Serialize> {
        provenance: &'a Provenance,
        report: &'a T,
    }
    let mut text = serde_json::to_string_pretty(&Artifact {
        provenance: prov,
        report,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("write {}: {e}", path.display()))?;
    Ok(())
}

pub fn write_csv(
    path: &Path,
    prov: &Provenance,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), Box<dyn Error>> {
    let mut buf = Vec::new();
    writeln!(buf, "# scem {} {}", prov.version, prov.command)?;
    writeln!(buf, "# provenance: {}", serde_json::to_string(prov)?)?;
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let buf = w.into_inner().map_err(|e| format!("csv buffer: {e}"))?;
    fs::write(path, buf).map_err(|e| format!("write {}: {e}", path.display()))?;
    Ok(())
}

/// Writes `<artifact>.meta.json` beside an artifact whose own format has no
/// room for metadata.
pub fn write_sidecar(artifact: &Path, prov: &Provenance) -> Result<PathBuf, Box<dyn Error>> {
    let mut name = artifact.as_os_str().to_owned();
    name.push(".meta.json");
    let path = PathBuf::from(name);
    let mut text = serde_json::to_string_pretty(prov)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| format!("write {}: {e}", path.display()))?;
    Ok(path)
}
