//! File emission. Data files carry no timestamps; provenance goes to a
//! `<file>.meta.json` sidecar.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| io_err(path, e))
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    generated_unix: u64,
    config: &'a RunConfig,
}

/// Writes `bytes` and its sidecar; returns the data path.
pub fn emit(path: PathBuf, bytes: &[u8], command: &str, config: &RunConfig) -> Result<PathBuf, CliError> {
    write_bytes(&path, bytes)?;
    let meta = Meta {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        generated_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config,
    };
    let side = sidecar_path(&path);
    write_bytes(&side, &to_json(&meta)?)?;
    Ok(path)
}

pub fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

/// CSV with a header from the row type; floats use shortest round-trip
/// decimals.
pub fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        a: f64,
        b: f64,
    }

    #[test]
    fn csv_floats_round_trip() {
        let v = [0.1 + 0.2, 1e-300, -2.5e-12];
        let bytes = to_csv(v.iter().map(|&a| Row { a, b: 1.0 })).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("a,b"));
        for (line, &want) in lines.zip(&v) {
            let got: f64 = line.split(',').next().unwrap().parse().unwrap();
            assert_eq!(got.to_bits(), want.to_bits());
        }
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(
            sidecar_path(Path::new("out/p.csv")),
            Path::new("out/p.csv.meta.json")
        );
    }
}
