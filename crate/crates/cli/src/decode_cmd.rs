use std::fs;
use std::path::Path;

use qldpc::channel::prior_llr_capped;
use qldpc::code::CodeManifest;
use qldpc::decoders::{decode, uniform_priors, TracePoint};
use qldpc::simulator::{Classification, Classifier};
use qldpc::{BinaryVector, TannerGraph};
use serde::Serialize;

use crate::args::DecodeArgs;
use crate::config::DecoderOverrides;
use crate::Failure;

#[derive(Serialize)]
struct DecodeReport {
    line: usize,
    decoder: String,
    e_hat: String,
    e_hat_hex: String,
    weight: usize,
    converged: bool,
    ms_iterations: usize,
    lp_iterations: usize,
    stop_reason: qldpc::decoders::StopReason,
    early_stopped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<Classification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TracePoint>>,
}

fn read_vectors(path: &Path) -> Result<Vec<(usize, BinaryVector)>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("reading {}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            BinaryVector::parse(l.trim())
                .map(|v| (i + 1, v))
                .map_err(|e| Failure::usage(format!("{}:{}: {e}", path.display(), i + 1)))
        })
        .collect()
}

/// Prints one JSON object per input line.
pub fn run(args: &DecodeArgs) -> Result<(), Failure> {
    let (_, code) = CodeManifest::open(&args.code)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.code.display())))?;
    let setup = DecoderOverrides::from_args(&args.decoder_args).setup(args.decoder);
    setup.config.validate().map_err(Failure::usage)?;
    let llr = prior_llr_capped(args.p, 100.0).map_err(Failure::usage)?;
    let priors = uniform_priors(code.n(), llr);
    let graph = TannerGraph::new(code.hz()).map_err(Failure::usage)?;

    let (path, errors_given) = match (&args.syndrome_file, &args.error_file) {
        (Some(p), _) => (p, false),
        (None, Some(p)) => (p, true),
        (None, None) => {
            return Err(Failure::usage(
                "one of --syndrome-file or --error-file is required",
            ))
        }
    };
    let inputs = read_vectors(path)?;
    let classifier = errors_given.then(|| Classifier::new(&code));

    for (line, v) in inputs {
        let expected = if errors_given {
            code.n()
        } else {
            graph.num_checks()
        };
        if v.len() != expected {
            return Err(Failure::usage(format!(
                "{}:{line}: expected {expected} bits, found {}",
                path.display(),
                v.len()
            )));
        }
        let s = if errors_given {
            code.hz().syndrome(&v).map_err(Failure::usage)?
        } else {
            v.clone()
        };
        let mut trace = Vec::new();
        let outcome = decode(
            setup.kind,
            &s,
            &graph,
            &setup.config,
            &priors,
            args.trace.then_some(&mut trace),
        )
        .map_err(Failure::runtime)?;
        let classification = match &classifier {
            Some(c) => Some(c.classify(&v, &outcome).map_err(Failure::runtime)?),
            None => None,
        };
        let report = DecodeReport {
            line,
            decoder: setup.kind.to_string(),
            e_hat: outcome.e_hat.to_string(),
            e_hat_hex: outcome.e_hat.to_hex(),
            weight: outcome.e_hat.weight(),
            converged: outcome.converged,
            ms_iterations: outcome.ms_iterations,
            lp_iterations: outcome.lp_iterations,
            stop_reason: outcome.stop_reason,
            early_stopped: outcome.early_stopped,
            classification,
            trace: args.trace.then_some(trace),
        };
        println!(
            "{}",
            serde_json::to_string(&report).map_err(Failure::runtime)?
        );
    }
    Ok(())
}
