//! Syndrome-based decoders: min-sum, iterative LP, and min-sum followed by LP
//! post-processing with an early-stopping rule.
//!
//! All decoders work on flat per-edge buffers indexed by the edge numbering
//! of [`TannerGraph`]. Every iteration budget counts executed iterations: a
//! budget of `b` runs at most `b` iterations.

mod combined;
mod lp;
mod min_sum;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::TannerGraph;
use crate::error::{check_len, Error, Result};
use crate::gf2::BinaryVector;

pub use combined::{combined_decode, combined_decode_traced};
pub use lp::{sb_lp_decode, sb_lp_decode_traced, sb_lp_iteration, spc_max, LpState, ParityClass};
pub use min_sum::{check_node_update, ms_iteration, sb_ms_decode, sb_ms_decode_traced, MsState};

/// Hard decision: 0 if `x > 0`, else 1 (zero maps to 1).
#[inline]
pub fn hd(x: f64) -> u8 {
    u8::from(!(x > 0.0))
}

/// `+1` if `x > 0`, else `-1`; equals `1 - 2 hd(x)`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    SbMs,
    SbLp,
    Combined,
    CombinedNoEarlyStop,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] = [
        DecoderKind::SbMs,
        DecoderKind::SbLp,
        DecoderKind::Combined,
        DecoderKind::CombinedNoEarlyStop,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DecoderKind::SbMs => "sb-ms",
            DecoderKind::SbLp => "sb-lp",
            DecoderKind::Combined => "combined",
            DecoderKind::CombinedNoEarlyStop => "combined-no-early-stop",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DecoderKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown decoder kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    /// Min-sum scaling factor.
    pub alpha: f64,
    /// LP scaling factor.
    pub alpha1: f64,
    pub ims_max: usize,
    pub ilp_max: usize,
    pub early_stop: bool,
    /// Early-stop threshold on the syndrome change; `None` means the maximum
    /// variable-node degree of the graph.
    pub dv_threshold: Option<usize>,
    /// Optional symmetric clamp on every message magnitude.
    pub magnitude_cap: Option<f64>,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            alpha: 0.75,
            alpha1: 0.9,
            ims_max: 100,
            ilp_max: 100,
            early_stop: true,
            dv_threshold: None,
            magnitude_cap: None,
        }
    }
}

impl DecoderConfig {
    /// Reference parameters for a decoder kind: 100 iterations for the
    /// standalone decoders, 25 min-sum + 75 LP for the combined ones.
    pub fn for_kind(kind: DecoderKind) -> Self {
        let base = DecoderConfig::default();
        match kind {
            DecoderKind::SbMs | DecoderKind::SbLp => base,
            DecoderKind::Combined => DecoderConfig {
                ims_max: 25,
                ilp_max: 75,
                ..base
            },
            DecoderKind::CombinedNoEarlyStop => DecoderConfig {
                ims_max: 25,
                ilp_max: 75,
                early_stop: false,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.alpha1 > 0.0 && self.alpha1 <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha1 must lie in (0, 1], got {}",
                self.alpha1
            )));
        }
        if let Some(cap) = self.magnitude_cap {
            if !(cap > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "magnitude cap must be positive, got {cap}"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn threshold(&self, graph: &TannerGraph) -> usize {
        self.dv_threshold.unwrap_or_else(|| graph.dv_max())
    }

    #[inline]
    pub(crate) fn clamp(&self, x: f64) -> f64 {
        match self.magnitude_cap {
            Some(cap) => x.clamp(-cap, cap),
            None => x,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    SyndromeMatched,
    BudgetExhausted,
    /// Min-sum was stopped by the syndrome-change rule and LP then matched the syndrome.
    EarlyStoppedThenLp,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub e_hat: BinaryVector,
    pub s_hat: BinaryVector,
    /// `s_hat` equals the input syndrome.
    pub converged: bool,
    pub ms_iterations: usize,
    pub lp_iterations: usize,
    pub stop_reason: StopReason,
    /// The min-sum stage ended on the syndrome-change rule.
    pub early_stopped: bool,
}

impl DecodeOutcome {
    pub fn total_iterations(&self) -> usize {
        self.ms_iterations + self.lp_iterations
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Ms,
    Lp,
}

/// State after one decoder iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoint {
    pub stage: Stage,
    /// Iteration count within the stage, starting at 1.
    pub iteration: usize,
    /// Syndrome bits not yet matched, `d_H(s_hat, s)`.
    pub unmatched: usize,
    /// Syndrome bits that changed in this iteration, `d_H(s_hat_pre, s_hat)`.
    pub changed: usize,
}

/// One prior LLR per variable node, all equal to `llr`.
pub fn uniform_priors(n: usize, llr: f64) -> Vec<f64> {
    vec![llr; n]
}

/// Runs the decoder selected by `kind`. The two combined kinds override
/// `config.early_stop`.
pub fn decode(
    kind: DecoderKind,
    s: &BinaryVector,
    graph: &TannerGraph,
    config: &DecoderConfig,
    priors: &[f64],
    trace: Option<&mut Vec<TracePoint>>,
) -> Result<DecodeOutcome> {
    match kind {
        DecoderKind::SbMs => Ok(sb_ms_decode_traced(s, graph, config, priors, trace)?.0),
        DecoderKind::SbLp => sb_lp_decode_traced(s, graph, config, priors, None, trace),
        DecoderKind::Combined | DecoderKind::CombinedNoEarlyStop => {
            let config = DecoderConfig {
                early_stop: kind == DecoderKind::Combined,
                ..*config
            };
            combined_decode_traced(s, graph, &config, priors, trace)
        }
    }
}

pub(crate) fn check_inputs(
    s: &BinaryVector,
    graph: &TannerGraph,
    config: &DecoderConfig,
    priors: &[f64],
) -> Result<Vec<u8>> {
    check_len(graph.num_checks(), s.len())?;
    check_len(graph.num_vars(), priors.len())?;
    config.validate()?;
    Ok(s.to_bytes())
}

/// `s_hat = e_hat Hᵀ` over the graph; returns the number of mismatches with `s`.
pub(crate) fn recompute_syndrome(
    graph: &TannerGraph,
    e_hat: &[u8],
    s_hat: &mut [u8],
    s: &[u8],
) -> usize {
    let vars = graph.edge_vars();
    let mut unmatched = 0;
    for (i, out) in s_hat.iter_mut().enumerate() {
        let parity = vars[graph.check_edges(i)]
            .iter()
            .fold(0u8, |acc, &j| acc ^ e_hat[j]);
        *out = parity;
        unmatched += usize::from(parity != s[i]);
    }
    unmatched
}

pub(crate) fn distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hard_decision_and_sign() {
        assert_eq!(hd(5.0), 0);
        assert_eq!(hd(0.0), 1);
        assert_eq!(hd(-0.0), 1);
        assert_eq!(hd(-0.3), 1);
        assert_eq!(sgn(2.0), 1.0);
        assert_eq!(sgn(0.0), -1.0);
        assert_eq!(sgn(-2.0), -1.0);
        for x in [
            -3.5,
            -1e-300,
            -0.0,
            0.0,
            1e-300,
            7.0,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ] {
            assert_eq!(sgn(x), 1.0 - 2.0 * f64::from(hd(x)));
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in DecoderKind::ALL {
            assert_eq!(kind.as_str().parse::<DecoderKind>().unwrap(), kind);
        }
        assert!("bp-osd".parse::<DecoderKind>().is_err());
    }

    #[test]
    fn reference_budgets() {
        let c = DecoderConfig::for_kind(DecoderKind::Combined);
        assert_eq!((c.ims_max, c.ilp_max, c.early_stop), (25, 75, true));
        let c = DecoderConfig::for_kind(DecoderKind::SbLp);
        assert_eq!(
            (c.alpha, c.alpha1, c.ims_max, c.ilp_max),
            (0.75, 0.9, 100, 100)
        );
    }

    #[test]
    fn config_validation() {
        assert!(DecoderConfig::default().validate().is_ok());
        let bad = DecoderConfig {
            alpha: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = DecoderConfig {
            alpha1: 1.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
