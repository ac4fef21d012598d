use super::{
    check_inputs, distance, hd, recompute_syndrome, DecodeOutcome, DecoderConfig, Stage,
    StopReason, TracePoint,
};
use crate::code::TannerGraph;
use crate::error::{check_len, Result};
use crate::gf2::BinaryVector;

/// Parity of the local configurations a check admits: even-weight words of
/// the single parity-check code when its syndrome bit is 0, odd-weight words
/// when it is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityClass {
    Even,
    Odd,
}

impl ParityClass {
    pub fn of_syndrome(bit: bool) -> Self {
        if bit {
            ParityClass::Odd
        } else {
            ParityClass::Even
        }
    }

    pub fn flip(self) -> Self {
        match self {
            ParityClass::Even => ParityClass::Odd,
            ParityClass::Odd => ParityClass::Even,
        }
    }
}

/// `max Σ values[k]·x[k]` over binary `x` with the given weight parity.
///
/// Takes every strictly positive entry; if that selection has the wrong
/// parity, toggles an entry of smallest magnitude. The selected entries are
/// summed in index order. Toggling different entries of equal magnitude can
/// round differently, so ties keep the largest rounded sum. `None` when no
/// vector of the requested parity exists (empty input, odd parity).
pub fn spc_max(values: &[f64], parity: ParityClass) -> Option<f64> {
    if values.is_empty() {
        return match parity {
            ParityClass::Even => Some(0.0),
            ParityClass::Odd => None,
        };
    }
    let sum_with = |toggle: Option<usize>| {
        let mut sum = 0.0;
        for (k, &x) in values.iter().enumerate() {
            if (x > 0.0) != (toggle == Some(k)) {
                sum += x;
            }
        }
        sum
    };
    let positives = values.iter().filter(|&&x| x > 0.0).count();
    if (positives % 2 == 1) == (parity == ParityClass::Odd) {
        return Some(sum_with(None));
    }
    let min = values.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let mut candidates = values
        .iter()
        .enumerate()
        .filter(|(_, x)| x.abs() == min)
        .map(|(k, _)| k);
    let first = candidates
        .next()
        .map_or(f64::NEG_INFINITY, |k| sum_with(Some(k)));
    Some(candidates.fold(first, |best, k| best.max(sum_with(Some(k)))))
}

/// Edge values of the LP decoder, double-buffered so an iteration reads only
/// the previous iteration's values.
#[derive(Clone, Debug, PartialEq)]
pub struct LpState {
    pub u_bar: Vec<f64>,
    next: Vec<f64>,
    pub lambda: Vec<f64>,
    pub e_hat: Vec<u8>,
    pub s_hat: Vec<u8>,
    pub iteration: usize,
}

impl LpState {
    /// Cold start: all edge values zero.
    pub fn new(graph: &TannerGraph, priors: &[f64]) -> Self {
        Self::with_edges(graph, priors, vec![0.0; graph.num_edges()])
    }

    /// Starts from given edge values, e.g. the min-sum handoff.
    pub fn with_edges(graph: &TannerGraph, priors: &[f64], u_bar: Vec<f64>) -> Self {
        assert_eq!(u_bar.len(), graph.num_edges(), "one edge value per edge");
        LpState {
            next: vec![0.0; u_bar.len()],
            u_bar,
            lambda: priors.to_vec(),
            e_hat: vec![0; graph.num_vars()],
            s_hat: vec![0; graph.num_checks()],
            iteration: 0,
        }
    }
}

/// One fully parallel LP iteration: every edge value is recomputed from the
/// previous iteration's values as
/// `u_bar[i,j] = (alpha1 / 2)·(T0 − T1 − S)`, where `S` is the prior plus the
/// other edges at `j`, and `T0`/`T1` are the best local-code scores of the
/// other edges at `i` with `x_j = 0`/`x_j = 1`.
pub fn sb_lp_iteration(state: &mut LpState, s: &[u8], graph: &TannerGraph, config: &DecoderConfig) {
    let half = config.alpha1 / 2.0;
    let vars = graph.edge_vars();
    let mut others = Vec::with_capacity(graph.dc_max());
    for (i, &bit) in s.iter().enumerate() {
        let range = graph.check_edges(i);
        let local = &state.u_bar[range.clone()];
        // x_j = 0 leaves the check's own parity to the other edges; x_j = 1 flips it
        let parity0 = ParityClass::of_syndrome(bit == 1);
        for (k, e) in range.enumerate() {
            let j = vars[e];
            let incoming: f64 = graph
                .var_edges(j)
                .iter()
                .filter(|&&e2| e2 != e)
                .map(|&e2| state.u_bar[e2])
                .sum();
            let support = state.lambda[j] + incoming;

            others.clear();
            others.extend(
                local
                    .iter()
                    .enumerate()
                    .filter(|&(k2, _)| k2 != k)
                    .map(|(_, &x)| x),
            );
            let t0 = spc_max(&others, parity0).unwrap_or(f64::NEG_INFINITY);
            let t1 = spc_max(&others, parity0.flip()).unwrap_or(f64::NEG_INFINITY);
            state.next[e] = config.clamp(half * (t0 - t1 - support));
        }
    }
    std::mem::swap(&mut state.u_bar, &mut state.next);
    for j in 0..graph.num_vars() {
        let total: f64 = graph.var_edges(j).iter().map(|&e| state.u_bar[e]).sum();
        state.e_hat[j] = hd(state.lambda[j] + total);
    }
    recompute_syndrome(graph, &state.e_hat, &mut state.s_hat, s);
    state.iteration += 1;
}

pub fn sb_lp_decode(
    s: &BinaryVector,
    graph: &TannerGraph,
    config: &DecoderConfig,
    priors: &[f64],
    init_u_bar: Option<&[f64]>,
) -> Result<DecodeOutcome> {
    sb_lp_decode_traced(s, graph, config, priors, init_u_bar, None)
}

/// LP iterations until the syndrome is matched or `ilp_max` iterations have
/// run, from zero edge values or from `init_u_bar`.
pub fn sb_lp_decode_traced(
    s: &BinaryVector,
    graph: &TannerGraph,
    config: &DecoderConfig,
    priors: &[f64],
    init_u_bar: Option<&[f64]>,
    trace: Option<&mut Vec<TracePoint>>,
) -> Result<DecodeOutcome> {
    let s_bits = check_inputs(s, graph, config, priors)?;
    let state = match init_u_bar {
        Some(init) => {
            check_len(graph.num_edges(), init.len())?;
            LpState::with_edges(graph, priors, init.to_vec())
        }
        None => LpState::new(graph, priors),
    };
    Ok(run_lp(state, &s_bits, graph, config, trace).0)
}

/// Drives `state` to convergence or budget. `s_hat` in `state` is taken as the
/// current estimate, so a handoff keeps the previous stage's syndrome.
pub(crate) fn run_lp(
    mut state: LpState,
    s: &[u8],
    graph: &TannerGraph,
    config: &DecoderConfig,
    mut trace: Option<&mut Vec<TracePoint>>,
) -> (DecodeOutcome, LpState) {
    let mut unmatched = distance(s, &state.s_hat);
    let mut prev = state.s_hat.clone();
    while unmatched != 0 && state.iteration < config.ilp_max {
        prev.copy_from_slice(&state.s_hat);
        sb_lp_iteration(&mut state, s, graph, config);
        unmatched = distance(s, &state.s_hat);
        if let Some(t) = trace.as_deref_mut() {
            t.push(TracePoint {
                stage: Stage::Lp,
                iteration: state.iteration,
                unmatched,
                changed: distance(&prev, &state.s_hat),
            });
        }
    }
    let converged = unmatched == 0;
    let outcome = DecodeOutcome {
        e_hat: BinaryVector::from_bytes(&state.e_hat),
        s_hat: BinaryVector::from_bytes(&state.s_hat),
        converged,
        ms_iterations: 0,
        lp_iterations: state.iteration,
        stop_reason: if converged {
            StopReason::SyndromeMatched
        } else {
            StopReason::BudgetExhausted
        },
        early_stopped: false,
    };
    (outcome, state)
}
