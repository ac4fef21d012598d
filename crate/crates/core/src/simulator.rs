//! Monte-Carlo estimation of logical error rates and iteration counts.
//!
//! Trial `t` at depolarizing probability `p` draws its error from
//! `trial_rng(point_seed(master, p), t)`, so its result depends on nothing
//! but `(master, p, t)` and the decoder. Trials are evaluated in blocks on the
//! rayon pool and then scanned in index order to apply the stop rule, which
//! makes every tally independent of the number of workers.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::channel::{point_seed, prior_llr_capped, trial_rng, DepolarizingChannel};
use crate::code::{CssCode, TannerGraph};
use crate::decoders::{
    decode, uniform_priors, DecodeOutcome, DecoderConfig, DecoderKind, TracePoint,
};
use crate::error::{Error, Result};
use crate::gf2::{BinaryVector, RowSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Success,
    LogicalFailure,
    NonConvergence,
}

/// Success iff the decoder converged and `e_hat ⊕ e` is an X stabilizer.
/// Decoding is of X errors against `H_Z`.
pub fn classify_outcome(
    e: &BinaryVector,
    outcome: &DecodeOutcome,
    code: &CssCode,
) -> Result<Classification> {
    if !outcome.converged {
        return Ok(Classification::NonConvergence);
    }
    let residual = e.try_xor(&outcome.e_hat)?;
    Ok(if code.hx().in_row_space(&residual)? {
        Classification::Success
    } else {
        Classification::LogicalFailure
    })
}

/// [`classify_outcome`] with the stabilizer basis reduced once up front.
#[derive(Clone, Debug)]
pub struct Classifier {
    stabilizers: RowSpace,
}

impl Classifier {
    pub fn new(code: &CssCode) -> Self {
        Classifier {
            stabilizers: code.x_stabilizers(),
        }
    }

    pub fn classify(&self, e: &BinaryVector, outcome: &DecodeOutcome) -> Result<Classification> {
        if !outcome.converged {
            return Ok(Classification::NonConvergence);
        }
        let residual = e.try_xor(&outcome.e_hat)?;
        Ok(
            if residual.is_zero() || self.stabilizers.contains(&residual)? {
                Classification::Success
            } else {
                Classification::LogicalFailure
            },
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    /// True X error.
    pub e: BinaryVector,
    pub outcome: DecodeOutcome,
    pub classification: Classification,
}

/// A point ends at whichever bound is reached first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub target_logical_errors: u64,
    pub max_trials: u64,
}

impl StopRule {
    pub fn trials(max_trials: u64) -> Self {
        StopRule {
            target_logical_errors: u64::MAX,
            max_trials,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_trials == 0 || self.target_logical_errors == 0 {
            return Err(Error::InvalidConfig(
                "a point needs at least one trial and one target error".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    /// Count non-converged trials as logical errors.
    pub count_nonconvergence: bool,
    /// Prior LLR used when `p = 0` and upper bound on the prior otherwise.
    pub llr_cap: f64,
    /// Record iteration traces for trials `0..trace_trials`.
    pub trace_trials: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            count_nonconvergence: true,
            llr_cap: 100.0,
            trace_trials: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointStats {
    pub decoder: DecoderKind,
    pub p: f64,
    pub trials: u64,
    /// Logical failures plus, unless disabled, non-convergences.
    pub logical_errors: u64,
    pub failures: u64,
    pub non_converged: u64,
    pub ler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub avg_ms_iters: f64,
    pub avg_lp_iters: f64,
    pub avg_total_iters: f64,
    /// Seed of this point's trial streams.
    pub seed: u64,
}

pub const CSV_HEADER: &str =
    "decoder,p,trials,logical_errors,ler,ci_low,ci_high,avg_ms_iters,avg_lp_iters,avg_total_iters,seed";

impl PointStats {
    /// One CSV row in [`CSV_HEADER`] order; reals use the shortest
    /// representation that round-trips.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.decoder,
            self.p,
            self.trials,
            self.logical_errors,
            self.ler,
            self.ci_low,
            self.ci_high,
            self.avg_ms_iters,
            self.avg_lp_iters,
            self.avg_total_iters,
            self.seed
        )
    }
}

/// Iteration trace of one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace {
    pub trial: u64,
    pub points: Vec<TracePoint>,
}

#[derive(Clone, Debug)]
pub struct PointOutput {
    pub stats: PointStats,
    pub traces: Vec<TrialTrace>,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, confidence: f64) -> Result<(f64, f64)> {
    if n == 0 || k > n || !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "wilson interval needs 0 <= k <= n, n > 0 and confidence in (0, 1); got k={k}, n={n}, confidence={confidence}"
        )));
    }
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let (kf, nf) = (k as f64, n as f64);
    let z2 = z * z;
    let center = (kf + z2 / 2.0) / (nf + z2);
    let half = z / (nf + z2) * (kf * (nf - kf) / nf + z2 / 4.0).sqrt();
    let rate = kf / nf;
    let lo = if k == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, rate)
    };
    let hi = if k == n {
        1.0
    } else {
        (center + half).clamp(rate, 1.0)
    };
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug)]
struct TrialSummary {
    classification: Classification,
    ms: u32,
    lp: u32,
}

/// Everything needed to replay individual trials of one point.
pub struct TrialSimulator<'a> {
    code: &'a CssCode,
    graph: TannerGraph,
    classifier: Classifier,
    channel: DepolarizingChannel,
    priors: Vec<f64>,
    kind: DecoderKind,
    config: DecoderConfig,
    seed: u64,
}

impl<'a> TrialSimulator<'a> {
    pub fn new(
        code: &'a CssCode,
        kind: DecoderKind,
        p: f64,
        config: &DecoderConfig,
        master_seed: u64,
        options: &SimOptions,
    ) -> Result<Self> {
        config.validate()?;
        let graph = TannerGraph::new(code.hz())?;
        let channel = DepolarizingChannel::new(p, code.n())?;
        let llr = prior_llr_capped(p, options.llr_cap)?;
        Ok(TrialSimulator {
            code,
            classifier: Classifier::new(code),
            priors: uniform_priors(code.n(), llr),
            graph,
            channel,
            kind,
            config: *config,
            seed: point_seed(master_seed, p),
        })
    }

    /// Seed of this point's trial streams.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    /// Samples, decodes and classifies trial `trial`.
    pub fn run(&self, trial: u64, trace: Option<&mut Vec<TracePoint>>) -> Result<TrialRecord> {
        let e = self.channel.sample(&mut trial_rng(self.seed, trial)).x;
        let s = self.code.hz().syndrome(&e)?;
        let outcome = decode(
            self.kind,
            &s,
            &self.graph,
            &self.config,
            &self.priors,
            trace,
        )?;
        let classification = self.classifier.classify(&e, &outcome)?;
        Ok(TrialRecord {
            trial,
            e,
            outcome,
            classification,
        })
    }
}

const BLOCK: u64 = 64;

/// Full record of a single trial, reproducing exactly what [`run_point`]
/// evaluates for trial index `trial`.
pub fn simulate_trial(
    code: &CssCode,
    kind: DecoderKind,
    p: f64,
    config: &DecoderConfig,
    master_seed: u64,
    trial: u64,
    trace: Option<&mut Vec<TracePoint>>,
) -> Result<TrialRecord> {
    TrialSimulator::new(code, kind, p, config, master_seed, &SimOptions::default())?
        .run(trial, trace)
}

pub fn run_point(
    code: &CssCode,
    kind: DecoderKind,
    p: f64,
    config: &DecoderConfig,
    stop: StopRule,
    master_seed: u64,
) -> Result<PointStats> {
    Ok(run_point_with(
        code,
        kind,
        p,
        config,
        stop,
        master_seed,
        &SimOptions::default(),
    )?
    .stats)
}

pub fn run_point_with(
    code: &CssCode,
    kind: DecoderKind,
    p: f64,
    config: &DecoderConfig,
    stop: StopRule,
    master_seed: u64,
    options: &SimOptions,
) -> Result<PointOutput> {
    stop.validate()?;
    let ctx = TrialSimulator::new(code, kind, p, config, master_seed, options)?;
    let counts_as_error = |c: Classification| match c {
        Classification::Success => false,
        Classification::LogicalFailure => true,
        Classification::NonConvergence => options.count_nonconvergence,
    };

    let (mut trials, mut errors, mut failures, mut non_converged) = (0u64, 0u64, 0u64, 0u64);
    let (mut ms_total, mut lp_total) = (0u64, 0u64);
    let mut traces = Vec::new();
    let workers = rayon::current_num_threads() as u64;

    'outer: while trials < stop.max_trials {
        // Wave size only affects wasted work past the stopping trial, never the result.
        let remaining = stop.max_trials - trials;
        let wanted = if errors > 0 && stop.target_logical_errors != u64::MAX {
            let missing = stop.target_logical_errors - errors;
            (missing.saturating_mul(trials) / errors).max(BLOCK)
        } else {
            BLOCK * 4
        };
        let wave = wanted
            .min(BLOCK * 16 * workers.max(1))
            .max(BLOCK * workers.min(4))
            .min(remaining);
        let start = trials;
        let blocks: Vec<(u64, u64)> = (0..wave.div_ceil(BLOCK))
            .map(|b| {
                let lo = start + b * BLOCK;
                (lo, (lo + BLOCK).min(start + wave))
            })
            .collect();
        let results: Vec<Vec<TrialSummary>> = blocks
            .par_iter()
            .map(|&(lo, hi)| {
                (lo..hi)
                    .map(|t| {
                        let r = ctx.run(t, None)?;
                        Ok(TrialSummary {
                            classification: r.classification,
                            ms: r.outcome.ms_iterations as u32,
                            lp: r.outcome.lp_iterations as u32,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        for summary in results.into_iter().flatten() {
            trials += 1;
            ms_total += u64::from(summary.ms);
            lp_total += u64::from(summary.lp);
            match summary.classification {
                Classification::LogicalFailure => failures += 1,
                Classification::NonConvergence => non_converged += 1,
                Classification::Success => {}
            }
            if counts_as_error(summary.classification) {
                errors += 1;
            }
            if errors >= stop.target_logical_errors || trials >= stop.max_trials {
                break 'outer;
            }
        }
    }

    for t in 0..options.trace_trials.min(trials) {
        let mut points = Vec::new();
        ctx.run(t, Some(&mut points))?;
        traces.push(TrialTrace { trial: t, points });
    }

    let (ci_low, ci_high) = wilson_interval(errors, trials, 0.95)?;
    let tf = trials as f64;
    let stats = PointStats {
        decoder: kind,
        p,
        trials,
        logical_errors: errors,
        failures,
        non_converged,
        ler: errors as f64 / tf,
        ci_low,
        ci_high,
        avg_ms_iters: ms_total as f64 / tf,
        avg_lp_iters: lp_total as f64 / tf,
        avg_total_iters: (ms_total + lp_total) as f64 / tf,
        seed: ctx.seed,
    };
    Ok(PointOutput { stats, traces })
}

/// A decoder together with the parameters it runs with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderSetup {
    pub kind: DecoderKind,
    pub config: DecoderConfig,
}

impl DecoderSetup {
    /// Reference parameters for `kind`.
    pub fn reference(kind: DecoderKind) -> Self {
        DecoderSetup {
            kind,
            config: DecoderConfig::for_kind(kind),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<PointStats>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for point in &self.points {
            writeln!(out, "{}", point.csv_row()).unwrap();
        }
        out
    }
}

/// One point per `(decoder, p)`, decoder-major. `on_point` sees each point as
/// soon as it is finished.
pub fn sweep_with(
    code: &CssCode,
    setups: &[DecoderSetup],
    ps: &[f64],
    stop: StopRule,
    master_seed: u64,
    options: &SimOptions,
    mut on_point: impl FnMut(&PointOutput) -> Result<()>,
) -> Result<SweepResult> {
    if ps.is_empty() {
        return Err(Error::InvalidConfig("the probability list is empty".into()));
    }
    let mut result = SweepResult::default();
    for setup in setups {
        for &p in ps {
            let out = run_point_with(
                code,
                setup.kind,
                p,
                &setup.config,
                stop,
                master_seed,
                options,
            )?;
            on_point(&out)?;
            result.points.push(out.stats);
        }
    }
    Ok(result)
}

pub fn sweep(
    code: &CssCode,
    setups: &[DecoderSetup],
    ps: &[f64],
    stop: StopRule,
    master_seed: u64,
) -> Result<SweepResult> {
    sweep_with(
        code,
        setups,
        ps,
        stop,
        master_seed,
        &SimOptions::default(),
        |_| Ok(()),
    )
}
