use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qldpc::simulator::{DecoderSetup, SimOptions, StopRule};
use qldpc::{DecoderConfig, DecoderKind};
use serde::{Deserialize, Serialize};

use crate::args::{DecoderArgs, SweepArgs};

/// Overrides applied on top of the reference parameters of every decoder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ims_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ilp_max: Option<usize>,
    #[serde(default = "yes")]
    pub early_stop: bool,
}

fn yes() -> bool {
    true
}

impl Default for DecoderOverrides {
    fn default() -> Self {
        DecoderOverrides {
            alpha: None,
            alpha1: None,
            ims_max: None,
            ilp_max: None,
            early_stop: true,
        }
    }
}

impl DecoderOverrides {
    pub fn from_args(args: &DecoderArgs) -> Self {
        DecoderOverrides {
            alpha: args.alpha,
            alpha1: args.alpha1,
            ims_max: args.ims_max,
            ilp_max: args.ilp_max,
            early_stop: !args.no_early_stop,
        }
    }

    fn merge(&mut self, args: &DecoderArgs) {
        self.alpha = args.alpha.or(self.alpha);
        self.alpha1 = args.alpha1.or(self.alpha1);
        self.ims_max = args.ims_max.or(self.ims_max);
        self.ilp_max = args.ilp_max.or(self.ilp_max);
        if args.no_early_stop {
            self.early_stop = false;
        }
    }

    /// The decoder actually run for `kind`: without early stopping the
    /// combined decoder becomes its no-early-stop variant.
    pub fn setup(&self, kind: DecoderKind) -> DecoderSetup {
        let kind = match kind {
            DecoderKind::Combined if !self.early_stop => DecoderKind::CombinedNoEarlyStop,
            other => other,
        };
        let base = DecoderConfig::for_kind(kind);
        DecoderSetup {
            kind,
            config: DecoderConfig {
                alpha: self.alpha.unwrap_or(base.alpha),
                alpha1: self.alpha1.unwrap_or(base.alpha1),
                ims_max: self.ims_max.unwrap_or(base.ims_max),
                ilp_max: self.ilp_max.unwrap_or(base.ilp_max),
                ..base
            },
        }
    }
}

/// Everything that determines the output of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Code manifest.
    pub code: PathBuf,
    pub decoders: Vec<DecoderKind>,
    #[serde(default)]
    pub decoder: DecoderOverrides,
    pub p_list: Vec<f64>,
    pub stop: StopRule,
    pub seed: u64,
    pub out: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
    #[serde(default = "default_trace_trials")]
    pub trace_trials: u64,
    #[serde(default = "yes")]
    pub count_nonconvergence: bool,
}

fn default_trace_trials() -> u64 {
    10
}

pub const DEFAULT_TARGET_ERRORS: u64 = 100;
pub const DEFAULT_MAX_TRIALS: u64 = 100_000;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing run configuration {}", path.display()))
    }

    /// Config file (if any) overridden by explicit flags.
    pub fn from_args(args: &SweepArgs) -> Result<Self> {
        let base = match &args.config {
            Some(path) => Some(Self::load(path)?),
            None => None,
        };
        let code = match (&args.code, &base) {
            (Some(c), _) => c.clone(),
            (None, Some(b)) => b.code.clone(),
            (None, None) => bail!("--code is required"),
        };
        let decoders = if !args.decoder.is_empty() {
            args.decoder.clone()
        } else if let Some(b) = &base {
            b.decoders.clone()
        } else {
            vec![DecoderKind::Combined]
        };
        let p_list = if let Some(p) = args.p {
            vec![p]
        } else if !args.p_list.is_empty() {
            args.p_list.clone()
        } else if let Some(b) = &base {
            b.p_list.clone()
        } else {
            bail!("one of --p or --p-list is required")
        };
        let out = match (&args.out, &base) {
            (Some(o), _) => o.clone(),
            (None, Some(b)) => b.out.clone(),
            (None, None) => bail!("--out is required"),
        };
        let mut decoder = base.as_ref().map(|b| b.decoder.clone()).unwrap_or_default();
        decoder.merge(&args.decoder_args);
        let base_stop = base.as_ref().map(|b| b.stop);
        let stop = StopRule {
            target_logical_errors: args
                .target_errors
                .or(base_stop.map(|s| s.target_logical_errors))
                .unwrap_or(DEFAULT_TARGET_ERRORS),
            max_trials: args
                .max_trials
                .or(base_stop.map(|s| s.max_trials))
                .unwrap_or(DEFAULT_MAX_TRIALS),
        };
        let config = RunConfig {
            code,
            decoders,
            decoder,
            p_list,
            stop,
            seed: args.seed.or(base.as_ref().map(|b| b.seed)).unwrap_or(1),
            out,
            trace: args
                .trace
                .clone()
                .or(base.as_ref().and_then(|b| b.trace.clone())),
            trace_trials: args
                .trace_trials
                .or(base.as_ref().map(|b| b.trace_trials))
                .unwrap_or_else(default_trace_trials),
            count_nonconvergence: !args.separate_nonconvergence
                && base.as_ref().is_none_or(|b| b.count_nonconvergence),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.decoders.is_empty() {
            bail!("no decoder selected");
        }
        if self.p_list.is_empty() {
            bail!("the probability list is empty");
        }
        for &p in &self.p_list {
            if !(0.0..=1.0).contains(&p) {
                bail!("depolarizing probability {p} is outside [0, 1]");
            }
        }
        if self.stop.max_trials == 0 || self.stop.target_logical_errors == 0 {
            bail!("--max-trials and --target-errors must be positive");
        }
        for kind in &self.decoders {
            self.decoder.setup(*kind).config.validate()?;
        }
        Ok(())
    }

    pub fn setups(&self) -> Vec<DecoderSetup> {
        self.decoders
            .iter()
            .map(|&k| self.decoder.setup(k))
            .collect()
    }

    pub fn options(&self) -> SimOptions {
        SimOptions {
            count_nonconvergence: self.count_nonconvergence,
            trace_trials: if self.trace.is_some() {
                self.trace_trials
            } else {
                0
            },
            ..SimOptions::default()
        }
    }
}
