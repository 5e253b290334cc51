mod flags;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use krein_enclosure::io::{file_digest, load_config, manifest_diff, parse_config, read_run, RunConfig};
use krein_enclosure::{Error, Result, VERSION};
use serde_json::{Map, Value};

use flags::{MatrixLabArgs, Overlay, PerturbArgs, RegionArgs, SlArgs, Tau0Args};
use run::{execute, Verdict};

const OK: u8 = 0;
const VERIFICATION_FAILED: u8 = 1;
const USAGE: u8 = 2;
const HYPOTHESIS: u8 = 3;
const NUMERICAL: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "krein-enclosure",
    version = VERSION,
    about = "Spectral enclosures for J-self-adjoint operators",
    after_help = "Exit codes: 0 verified, 1 verification failure, 2 usage or validation error, \
                  3 hypotheses not met, 4 numerical failure.")]
struct Cli {
    /// Worker threads for trials and sweeps (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary polyline of an enclosure region.
    #[command(allow_negative_numbers = true)]
    Region(RegionArgs),
    /// Randomized check of the block operator enclosure.
    #[command(allow_negative_numbers = true)]
    MatrixLab(MatrixLabArgs),
    /// Check of the perturbation enclosure on one problem file or generated problems.
    #[command(allow_negative_numbers = true)]
    Perturb(PerturbArgs),
    /// Indefinite Sturm-Liouville eigenvalues against the rectangle and competing region.
    #[command(allow_negative_numbers = true)]
    Sl(SlArgs),
    /// Hilbert-form quotient for a probe pair.
    #[command(allow_negative_numbers = true)]
    Tau0(Tau0Args),
    /// Run a config file; the command is taken from it or inferred from its keys.
    Run {
        config: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Check a run directory, rerun its config and compare output digests.
    Replay {
        dir: PathBuf,
        /// Where to write the rerun (default: a temporary directory).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Hypothesis(_) => HYPOTHESIS,
        Error::Numerical(_) | Error::NonFinite(_) | Error::InSpectrum(_) => NUMERICAL,
        Error::Integrity(_) => VERIFICATION_FAILED,
        _ => USAGE,
    }
}

fn read_object(path: &Path) -> Result<Map<String, Value>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(Error::Config(format!("{}: config must be a JSON object", path.display()))),
        Err(e) => Err(Error::Config(format!("{}: parse error: {e}", path.display()))),
    }
}

/// The config file (if any) with the given flags laid over it.
fn merged(command: &str, file: Option<&Path>, flags: &dyn Overlay) -> Result<RunConfig> {
    let mut map = match file {
        Some(p) => read_object(p)?,
        None => Map::new(),
    };
    if let Some(c) = map.get("command").and_then(Value::as_str) {
        if c != command {
            return Err(Error::Config(format!("config is for `{c}`, not `{command}`")));
        }
    }
    flags.overlay(&mut map);
    map.insert("command".into(), Value::from(command));
    parse_config(&Value::Object(map).to_string()).map_err(|e| match (e, file) {
        (Error::Config(m), Some(p)) => Error::Config(format!("{}: {m}", p.display())),
        (e, _) => e,
    })
}

fn report(verdict: &Verdict, record: Option<&Path>) -> u8 {
    if let Some(r) = record {
        eprintln!("wrote {}", r.display());
    }
    match verdict {
        Verdict::Pass => OK,
        Verdict::Fail(msg) => {
            eprintln!("verification failed: {msg}");
            VERIFICATION_FAILED
        }
        Verdict::Hypothesis(msg) => {
            eprintln!("hypotheses not met: {msg}");
            HYPOTHESIS
        }
    }
}

fn replay(dir: &Path, out: Option<PathBuf>) -> Result<u8> {
    let record = read_run(dir)?;
    if record.version != VERSION {
        eprintln!("note: recorded with version {}, replaying with {VERSION}", record.version);
    }
    for input in &record.inputs {
        let now = file_digest(Path::new(&input.path))?;
        if now.sha256 != input.sha256 {
            return Err(Error::Integrity(format!("input {} changed since the run", input.path)));
        }
    }
    let scratch;
    let target = match out {
        Some(p) => p,
        None => {
            scratch = tempfile::tempdir().map_err(|e| Error::Config(format!("temporary directory: {e}")))?;
            scratch.path().to_path_buf()
        }
    };
    let mut config = record.config.clone();
    config.set_out(Some(target.clone()));
    let (verdict, _) = execute(&config, &mut std::io::sink())?;
    let diff = manifest_diff(&record, &read_run(&target)?);
    if !diff.is_empty() {
        for d in &diff {
            eprintln!("{d}");
        }
        return Ok(VERIFICATION_FAILED);
    }
    eprintln!("{} outputs reproduced byte for byte", record.outputs.len());
    Ok(match verdict {
        Verdict::Pass => OK,
        other => report(&other, None),
    })
}

fn main_inner(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(Error::Config("--jobs must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let config = match &cli.command {
        Command::Region(a) => merged("region", a.config.as_deref(), a)?,
        Command::MatrixLab(a) => merged("matrix-lab", a.config.as_deref(), a)?,
        Command::Perturb(a) => merged("perturb", a.config.as_deref(), a)?,
        Command::Sl(a) => merged("sl", a.config.as_deref(), a)?,
        Command::Tau0(a) => merged("tau0", a.config.as_deref(), a)?,
        Command::Run { config, out } => {
            let mut c = load_config(config)?;
            if out.is_some() {
                c.set_out(out.clone());
                c.validate()?;
            }
            c
        }
        Command::Replay { dir, out } => return replay(dir, out.clone()),
    };
    let mut stdout = std::io::stdout().lock();
    let (verdict, record) = execute(&config, &mut stdout)?;
    Ok(report(&verdict, record.as_deref()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
