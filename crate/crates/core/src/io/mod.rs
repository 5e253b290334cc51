//! Configuration and deterministic output.

mod canonical;
pub mod config;
pub mod record;

pub use canonical::{check_csv, ensure_finite, to_canonical_json};
pub use config::{
    load_config, parse_config, save_config, MatrixLabConfig, PerturbConfig, PotentialKind, ProbeKind, RegionConfig,
    RegionKind, RunConfig, SlConfig, Tau0Config,
};
pub use record::{file_digest, manifest_diff, read_run, sha256_hex, FileDigest, RunRecord, RunWriter, RECORD_FILE};

/// Shortest decimal that round-trips to the same `f64`.
pub fn format_f64(v: f64) -> String {
    let mut buf = ryu::Buffer::new();
    buf.format(v).to_string()
}
