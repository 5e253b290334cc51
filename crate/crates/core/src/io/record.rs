use std::path::{Component, Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use super::canonical::{check_csv, to_canonical_json};
use super::config::RunConfig;
use crate::{Error, Result, VERSION};

/// File name of the run record inside an output directory.
pub const RECORD_FILE: &str = "run.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Everything needed to replay a run and check its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunRecord {
    pub version: String,
    pub config: RunConfig,
    pub started_at: String,
    pub finished_at: String,
    pub inputs: Vec<FileDigest>,
    /// Output files relative to the run directory, sorted by path.
    pub outputs: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn file_digest(path: &Path) -> Result<FileDigest> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(FileDigest {
        path: path.to_string_lossy().replace('\\', "/"),
        sha256: sha256_hex(&bytes),
        bytes: bytes.len() as u64,
    })
}

fn now() -> String {
    OffsetDateTime::now_utc()
        .format(&Rfc3339)
        .unwrap_or_else(|_| "unknown".into())
}

/// Single writer for one output directory. Files are written as they are added; the
/// record with the manifest is written by [`RunWriter::finish`].
#[derive(Debug)]
pub struct RunWriter {
    dir: PathBuf,
    started_at: String,
    outputs: Vec<FileDigest>,
}

impl RunWriter {
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Self {
            dir,
            started_at: now(),
            outputs: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn check_name(&self, name: &str) -> Result<()> {
        let p = Path::new(name);
        let plain = p.components().all(|c| matches!(c, Component::Normal(_)));
        if name.is_empty() || !plain || name == RECORD_FILE {
            return Err(Error::Config(format!("invalid output name `{name}`")));
        }
        if self.outputs.iter().any(|o| o.path == name) {
            return Err(Error::Config(format!("output `{name}` written twice")));
        }
        Ok(())
    }

    fn write(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        self.check_name(name)?;
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        self.outputs.push(FileDigest {
            path: name.to_string(),
            sha256: sha256_hex(text.as_bytes()),
            bytes: text.len() as u64,
        });
        Ok(path)
    }

    /// Canonical JSON; non-finite floats anywhere in `value` are rejected.
    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let text = to_canonical_json(value)?;
        self.write(name, &text)
    }

    pub fn csv(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        check_csv(name, text)?;
        self.write(name, text)
    }

    /// Writes `run.json` and returns its path.
    pub fn finish(mut self, config: &RunConfig, inputs: Vec<FileDigest>) -> Result<PathBuf> {
        self.outputs.sort_by(|a, b| a.path.cmp(&b.path));
        let record = RunRecord {
            version: VERSION.to_string(),
            config: config.clone(),
            started_at: self.started_at,
            finished_at: now(),
            inputs,
            outputs: self.outputs,
        };
        let path = self.dir.join(RECORD_FILE);
        let text = to_canonical_json(&record)?;
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

/// Reads `dir/run.json` and checks every listed output against its digest.
pub fn read_run(dir: impl AsRef<Path>) -> Result<RunRecord> {
    let dir = dir.as_ref();
    let path = dir.join(RECORD_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let record: RunRecord =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut problems = Vec::new();
    for out in &record.outputs {
        let p = dir.join(&out.path);
        match std::fs::read(&p) {
            Ok(bytes) if sha256_hex(&bytes) == out.sha256 && bytes.len() as u64 == out.bytes => {}
            Ok(_) => problems.push(format!("{}: digest mismatch", out.path)),
            Err(e) => problems.push(format!("{}: {e}", out.path)),
        }
    }
    if !problems.is_empty() {
        return Err(Error::Integrity(problems.join("; ")));
    }
    Ok(record)
}

/// Output paths whose digests differ between two records (including missing ones).
pub fn manifest_diff(a: &RunRecord, b: &RunRecord) -> Vec<String> {
    let mut diff = Vec::new();
    for x in &a.outputs {
        match b.outputs.iter().find(|y| y.path == x.path) {
            Some(y) if y.sha256 == x.sha256 => {}
            Some(_) => diff.push(format!("{}: contents differ", x.path)),
            None => diff.push(format!("{}: missing from the replay", x.path)),
        }
    }
    for y in &b.outputs {
        if !a.outputs.iter().any(|x| x.path == y.path) {
            diff.push(format!("{}: only in the replay", y.path));
        }
    }
    diff
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::config::parse_config;
    use crate::lab::report::{EigenRecord, VerificationReport};

    fn config() -> RunConfig {
        parse_config(r#"{"kind": "hull", "a": 3, "b": 0.9}"#).unwrap()
    }

    fn write_run(dir: &Path) -> PathBuf {
        let mut w = RunWriter::create(dir).unwrap();
        w.csv("boundary.csv", "re,im\n0,1.7320508075688772\n").unwrap();
        w.json("region.json", &serde_json::json!({"b": 0.9, "a": 3.0})).unwrap();
        w.finish(&config(), Vec::new()).unwrap()
    }

    #[test]
    fn same_report_twice_is_byte_identical() {
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        write_run(d1.path());
        write_run(d2.path());
        for name in ["boundary.csv", "region.json"] {
            let a = std::fs::read(d1.path().join(name)).unwrap();
            let b = std::fs::read(d2.path().join(name)).unwrap();
            assert_eq!(a, b, "{name}");
        }
        let (r1, r2) = (read_run(d1.path()).unwrap(), read_run(d2.path()).unwrap());
        assert!(manifest_diff(&r1, &r2).is_empty());
        assert_eq!(r1.config, config());
        assert_eq!(r1.outputs[0].path, "boundary.csv");
    }

    #[test]
    fn nan_margin_is_rejected() {
        let d = tempfile::tempdir().unwrap();
        let mut w = RunWriter::create(d.path()).unwrap();
        let mut r = VerificationReport::new(serde_json::Value::Null);
        r.eigenvalues.push(EigenRecord {
            re: 0.0,
            im: 1.0,
            contained: true,
            margin: f64::NAN,
        });
        match w.json("report.json", &r) {
            Err(Error::NonFinite(p)) => assert!(p.contains("eigenvalues.[0].margin"), "{p}"),
            other => panic!("{other:?}"),
        }
        assert!(!d.path().join("report.json").exists());
    }

    #[test]
    fn corruption_is_detected() {
        let d = tempfile::tempdir().unwrap();
        write_run(d.path());
        std::fs::write(d.path().join("boundary.csv"), "re,im\n0,1.8\n").unwrap();
        assert!(matches!(read_run(d.path()), Err(Error::Integrity(m)) if m.contains("boundary.csv")));
        std::fs::remove_file(d.path().join("region.json")).unwrap();
        assert!(matches!(read_run(d.path()), Err(Error::Integrity(m)) if m.contains("region.json")));
    }

    #[test]
    fn bad_names_and_duplicates() {
        let d = tempfile::tempdir().unwrap();
        let mut w = RunWriter::create(d.path()).unwrap();
        assert!(w.csv("../x.csv", "a\n").is_err());
        assert!(w.csv(RECORD_FILE, "a\n").is_err());
        w.csv("x.csv", "a\n1\n").unwrap();
        assert!(w.csv("x.csv", "a\n1\n").is_err());
    }

    #[test]
    fn io_errors_carry_the_path() {
        let d = tempfile::tempdir().unwrap();
        let file = d.path().join("blocker");
        std::fs::write(&file, "x").unwrap();
        let err = RunWriter::create(file.join("sub")).unwrap_err();
        assert!(err.to_string().contains("blocker"), "{err}");
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
