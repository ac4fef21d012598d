use super::lp::{run_lp, LpState};
use super::min_sum::{ms_iteration, MsState};
use super::{check_inputs, distance, DecodeOutcome, DecoderConfig, Stage, StopReason, TracePoint};
use crate::code::TannerGraph;
use crate::error::Result;
use crate::gf2::BinaryVector;

pub fn combined_decode(
    s: &BinaryVector,
    graph: &TannerGraph,
    config: &DecoderConfig,
    priors: &[f64],
) -> Result<DecodeOutcome> {
    combined_decode_traced(s, graph, config, priors, None)
}

/// Min-sum followed by LP post-processing.
///
/// With `early_stop`, min-sum runs at least one pass and stops after the
/// first pass whose syndrome estimate moved by at most the threshold
/// (default: maximum variable degree). Without it, min-sum runs until the
/// syndrome matches or `ims_max` passes are spent. If min-sum did not match
/// the syndrome, LP starts from `u_bar = u + v` with a fresh budget of
/// `ilp_max` iterations.
pub fn combined_decode_traced(
    s: &BinaryVector,
    graph: &TannerGraph,
    config: &DecoderConfig,
    priors: &[f64],
    mut trace: Option<&mut Vec<TracePoint>>,
) -> Result<DecodeOutcome> {
    let s_bits = check_inputs(s, graph, config, priors)?;
    let threshold = config.threshold(graph);
    let mut ms = MsState::new(graph, priors);
    let mut prev = ms.s_hat.clone();
    let mut unmatched = distance(&s_bits, &ms.s_hat);
    let mut early_stopped = false;

    let first_pass = if config.early_stop {
        config.ims_max > 0
    } else {
        unmatched != 0 && config.ims_max > 0
    };
    if first_pass {
        loop {
            prev.copy_from_slice(&ms.s_hat);
            ms_iteration(&mut ms, &s_bits, graph, config);
            unmatched = distance(&s_bits, &ms.s_hat);
            let changed = distance(&prev, &ms.s_hat);
            if let Some(t) = trace.as_deref_mut() {
                t.push(TracePoint {
                    stage: Stage::Ms,
                    iteration: ms.iteration,
                    unmatched,
                    changed,
                });
            }
            if unmatched == 0 {
                break;
            }
            if config.early_stop && changed <= threshold {
                early_stopped = true;
                break;
            }
            if ms.iteration >= config.ims_max {
                break;
            }
        }
    }

    if unmatched == 0 {
        return Ok(DecodeOutcome {
            e_hat: BinaryVector::from_bytes(&ms.e_hat),
            s_hat: BinaryVector::from_bytes(&ms.s_hat),
            converged: true,
            ms_iterations: ms.iteration,
            lp_iterations: 0,
            stop_reason: StopReason::SyndromeMatched,
            early_stopped: false,
        });
    }

    let handoff: Vec<f64> =
        ms.u.iter()
            .zip(&ms.v)
            .map(|(u, v)| config.clamp(u + v))
            .collect();
    let mut lp = LpState::with_edges(graph, priors, handoff);
    lp.e_hat.copy_from_slice(&ms.e_hat);
    lp.s_hat.copy_from_slice(&ms.s_hat);
    let (mut outcome, _) = run_lp(lp, &s_bits, graph, config, trace);
    outcome.ms_iterations = ms.iteration;
    outcome.early_stopped = early_stopped;
    if outcome.converged && early_stopped {
        outcome.stop_reason = StopReason::EarlyStoppedThenLp;
    }
    Ok(outcome)
}
