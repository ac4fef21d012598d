use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use qldpc::code::CodeManifest;
use qldpc::simulator::{run_point_with, PointStats, SweepResult, TrialTrace};
use qldpc::DecoderKind;
use serde::{Deserialize, Serialize};

use crate::args::SweepArgs;
use crate::config::RunConfig;
use crate::Failure;

/// Completed points of an unfinished sweep.
#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    config: RunConfig,
    points: Vec<PointStats>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CodeInfo {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub manifest: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PointSeed {
    pub decoder: DecoderKind,
    pub p: f64,
    pub seed: u64,
}

/// JSON record written next to the CSV.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub code: CodeInfo,
    pub config: RunConfig,
    pub point_seeds: Vec<PointSeed>,
    pub workers: usize,
    pub resumed: bool,
    pub started_unix: u64,
    pub wall_clock_seconds: f64,
}

#[derive(Serialize)]
struct TraceRecord<'a> {
    decoder: DecoderKind,
    p: f64,
    #[serde(flatten)]
    trace: &'a TrialTrace,
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn checkpoint_path(out: &Path) -> PathBuf {
    with_suffix(out, ".checkpoint.json")
}

pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

/// Writes `text` to a sibling temporary file and renames it over `path`.
fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let tmp = with_suffix(path, ".tmp");
    fs::write(&tmp, text)
        .map_err(|e| Failure::runtime(format!("writing {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| Failure::runtime(format!("writing {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(Failure::runtime)
}

pub fn run(args: &SweepArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let started_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let config = RunConfig::from_args(args).map_err(Failure::usage)?;
    let (code_manifest, code) = CodeManifest::open(&config.code)
        .map_err(|e| Failure::usage(format!("{}: {e}", config.code.display())))?;
    let checkpoint_file = checkpoint_path(&config.out);

    let mut done: Vec<PointStats> = Vec::new();
    if args.resume {
        let text = fs::read_to_string(&checkpoint_file).map_err(|e| {
            Failure::usage(format!(
                "no checkpoint to resume at {}: {e}",
                checkpoint_file.display()
            ))
        })?;
        let checkpoint: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", checkpoint_file.display())))?;
        if checkpoint.config != config {
            return Err(Failure::usage(
                "the checkpoint was written for a different run configuration",
            ));
        }
        done = checkpoint.points;
    }

    let mut trace_out = match &config.trace {
        Some(path) => Some(
            OpenOptions::new()
                .create(true)
                .write(true)
                .append(args.resume)
                .truncate(!args.resume)
                .open(path)
                .map_err(|e| Failure::runtime(format!("opening {}: {e}", path.display())))?,
        ),
        None => None,
    };

    let options = config.options();
    let mut result = SweepResult::default();
    for setup in config.setups() {
        for &p in &config.p_list {
            if let Some(stats) = done.iter().find(|s| s.decoder == setup.kind && s.p == p) {
                result.points.push(stats.clone());
                continue;
            }
            let out = run_point_with(
                &code,
                setup.kind,
                p,
                &setup.config,
                config.stop,
                config.seed,
                &options,
            )
            .map_err(Failure::runtime)?;
            eprintln!(
                "{} p={} trials={} errors={} ler={:.3e}",
                out.stats.decoder,
                out.stats.p,
                out.stats.trials,
                out.stats.logical_errors,
                out.stats.ler
            );
            if let Some(file) = trace_out.as_mut() {
                for trace in &out.traces {
                    let record = TraceRecord {
                        decoder: setup.kind,
                        p,
                        trace,
                    };
                    let line = serde_json::to_string(&record).map_err(Failure::runtime)?;
                    writeln!(file, "{line}")
                        .map_err(|e| Failure::runtime(format!("writing trace: {e}")))?;
                }
            }
            result.points.push(out.stats);
            write_atomic(&config.out, &result.to_csv())?;
            let checkpoint = Checkpoint {
                config: config.clone(),
                points: result.points.clone(),
            };
            write_atomic(&checkpoint_file, &to_json(&checkpoint)?)?;
        }
    }
    write_atomic(&config.out, &result.to_csv())?;

    let manifest = RunManifest {
        version: format!("qldpc {}", env!("CARGO_PKG_VERSION")),
        code: CodeInfo {
            name: code_manifest.name,
            n: code.n(),
            k: code.k(),
            manifest: config.code.clone(),
        },
        point_seeds: result
            .points
            .iter()
            .map(|s| PointSeed {
                decoder: s.decoder,
                p: s.p,
                seed: s.seed,
            })
            .collect(),
        config,
        workers: rayon::current_num_threads(),
        resumed: args.resume,
        started_unix,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    let path = args
        .manifest
        .clone()
        .unwrap_or_else(|| manifest_path(&manifest.config.out));
    write_atomic(&path, &to_json(&manifest)?)?;
    if checkpoint_file.exists() {
        fs::remove_file(&checkpoint_file).map_err(|e| {
            Failure::runtime(format!("removing {}: {e}", checkpoint_file.display()))
        })?;
    }
    Ok(())
}
