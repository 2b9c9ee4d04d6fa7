//! Machine-readable run reports and atomic file output.
//!
//! Every command emits the same report object; fields that do not apply to
//! a command are `null`. The effective configuration is echoed in full so
//! any number in a report can be reproduced from the report alone.

use crate::config::EffectiveConfig;
use crate::metrics::DistortionReport;
use serde::Serialize;
use std::io::{self, Write};
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: EffectiveConfig,
    /// Input path(s): one entry for most commands, original and modified for
    /// the metrics command.
    pub input: Vec<String>,
    pub digest_expected: Option<String>,
    pub digest_extracted_primary: Option<String>,
    pub digest_extracted_secondary: Option<String>,
    pub copies_agree: Option<bool>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    pub metrics: Option<DistortionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics_per_channel: Option<Vec<DistortionReport>>,
}

impl RunReport {
    pub fn new(command: &str, config: EffectiveConfig, input: Vec<String>) -> Self {
        Self {
            command: command.to_string(),
            config,
            input,
            digest_expected: None,
            digest_extracted_primary: None,
            digest_extracted_secondary: None,
            copies_agree: None,
            matches: None,
            metrics: None,
            metrics_per_channel: None,
        }
    }
}

/// Writes via a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Serializes a report as pretty JSON and writes it atomically.
pub fn save_report<T: Serialize>(path: &Path, report: &T) -> io::Result<()> {
    let mut bytes = serde_json::to_vec_pretty(report)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.bin");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
    }
}
