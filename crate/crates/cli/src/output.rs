use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// What a command produces.
pub enum Artifact {
    Json(Value),
    Csv {
        /// Lines written before the header, each prefixed with `# `.
        comments: Vec<String>,
        header: Vec<&'static str>,
        rows: Vec<Vec<String>>,
    },
}

impl Artifact {
    pub fn json<T: Serialize>(v: &T) -> Result<Self, CliError> {
        Ok(Artifact::Json(serde_json::to_value(v)?))
    }

    pub fn render(&self) -> Result<Vec<u8>, CliError> {
        match self {
            Artifact::Json(v) => {
                let mut s = serde_json::to_vec_pretty(v)?;
                s.push(b'\n');
                Ok(s)
            }
            Artifact::Csv { comments, header, rows } => {
                let mut out = Vec::new();
                for c in comments {
                    writeln!(out, "# {c}")?;
                }
                let mut w = csv::Writer::from_writer(out);
                w.write_record(header)?;
                for r in rows {
                    w.write_record(r)?;
                }
                w.into_inner().map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: PathBuf,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Versions {
    pub threeprimes: &'static str,
    pub threeprimes_cli: &'static str,
}

/// Sidecar describing one run.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config_file: Option<PathBuf>,
    /// Values read from the config file, before flags were applied.
    pub config_values: Value,
    /// Every option as finally parsed.
    pub options: Value,
    pub seed: u64,
    pub threads: usize,
    pub deterministic: bool,
    pub versions: Versions,
    pub started_unix_s: u64,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputDigest>,
    pub summary: Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Io(format!("cannot create a temporary file in {}: {e}", dir.display())))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Default sidecar path: `<out>.manifest.json`.
pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_comments() {
        let a = Artifact::Csv {
            comments: vec!["note".into()],
            header: vec!["n", "v"],
            rows: vec![vec!["1".into(), "0.5".into()], vec!["2".into(), "a,b".into()]],
        };
        let s = String::from_utf8(a.render().unwrap()).unwrap();
        assert_eq!(s, "# note\nn,v\n1,0.5\n2,\"a,b\"\n");
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("o.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        assert_eq!(manifest_path_for(&p), dir.path().join("o.txt.manifest.json"));
    }
}
