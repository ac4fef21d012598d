use super::{
    check_inputs, distance, hd, recompute_syndrome, DecodeOutcome, DecoderConfig, Stage,
    StopReason, TracePoint,
};
use crate::code::TannerGraph;
use crate::error::Result;
use crate::gf2::BinaryVector;

/// Message buffers of the min-sum decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct MsState {
    /// Check-to-variable messages, per edge.
    pub u: Vec<f64>,
    /// Variable-to-check messages, per edge.
    pub v: Vec<f64>,
    pub lambda: Vec<f64>,
    pub e_hat: Vec<u8>,
    pub s_hat: Vec<u8>,
    pub iteration: usize,
}

impl MsState {
    /// Cold start: all messages zero, `e_hat = 0`, `s_hat = 0`.
    pub fn new(graph: &TannerGraph, priors: &[f64]) -> Self {
        MsState {
            u: vec![0.0; graph.num_edges()],
            v: vec![0.0; graph.num_edges()],
            lambda: priors.to_vec(),
            e_hat: vec![0; graph.num_vars()],
            s_hat: vec![0; graph.num_checks()],
            iteration: 0,
        }
    }
}

/// Check-node rule for one check: for every edge `k`,
/// `out[k] = (-1)^syndrome · Π_{k'≠k} sgn(v[k']) · min_{k'≠k} |v[k']|`.
///
/// An edge with no siblings receives `±inf`.
pub fn check_node_update(v: &[f64], syndrome: bool, out: &mut [f64]) {
    debug_assert_eq!(v.len(), out.len());
    let mut negative = syndrome;
    let (mut min1, mut min2, mut argmin) = (f64::INFINITY, f64::INFINITY, usize::MAX);
    for (k, &x) in v.iter().enumerate() {
        negative ^= !(x > 0.0);
        let mag = x.abs();
        if mag < min1 {
            min2 = min1;
            min1 = mag;
            argmin = k;
        } else if mag < min2 {
            min2 = mag;
        }
    }
    for (k, (&x, o)) in v.iter().zip(out.iter_mut()).enumerate() {
        let mag = if k == argmin { min2 } else { min1 };
        let flip = negative ^ !(x > 0.0);
        *o = if flip { -mag } else { mag };
    }
}

/// One flooding iteration: all variable-to-check messages from the previous
/// check-to-variable messages, then all check-to-variable messages from the
/// fresh ones, then the hard decision and its syndrome.
pub fn ms_iteration(state: &mut MsState, s: &[u8], graph: &TannerGraph, config: &DecoderConfig) {
    let alpha = config.alpha;
    for j in 0..graph.num_vars() {
        let edges = graph.var_edges(j);
        for &e in edges {
            let extrinsic: f64 = edges
                .iter()
                .filter(|&&e2| e2 != e)
                .map(|&e2| state.u[e2])
                .sum();
            state.v[e] = config.clamp(state.lambda[j] + alpha * extrinsic);
        }
    }
    for (i, &bit) in s.iter().enumerate() {
        let range = graph.check_edges(i);
        check_node_update(
            &state.v[range.clone()],
            bit == 1,
            &mut state.u[range.clone()],
        );
        if config.magnitude_cap.is_some() {
            for x in &mut state.u[range] {
                *x = config.clamp(*x);
            }
        }
    }
    for j in 0..graph.num_vars() {
        let total: f64 = graph.var_edges(j).iter().map(|&e| state.u[e]).sum();
        state.e_hat[j] = hd(state.lambda[j] + alpha * total);
    }
    recompute_syndrome(graph, &state.e_hat, &mut state.s_hat, s);
    state.iteration += 1;
}

pub fn sb_ms_decode(
    s: &BinaryVector,
    graph: &TannerGraph,
    config: &DecoderConfig,
    priors: &[f64],
) -> Result<(DecodeOutcome, MsState)> {
    sb_ms_decode_traced(s, graph, config, priors, None)
}

/// Min-sum until the syndrome is matched or `ims_max` iterations have run.
pub fn sb_ms_decode_traced(
    s: &BinaryVector,
    graph: &TannerGraph,
    config: &DecoderConfig,
    priors: &[f64],
    mut trace: Option<&mut Vec<TracePoint>>,
) -> Result<(DecodeOutcome, MsState)> {
    let s_bits = check_inputs(s, graph, config, priors)?;
    let mut state = MsState::new(graph, priors);
    let mut unmatched = distance(&s_bits, &state.s_hat);
    let mut prev = state.s_hat.clone();
    while unmatched != 0 && state.iteration < config.ims_max {
        prev.copy_from_slice(&state.s_hat);
        ms_iteration(&mut state, &s_bits, graph, config);
        unmatched = distance(&s_bits, &state.s_hat);
        if let Some(t) = trace.as_deref_mut() {
            t.push(TracePoint {
                stage: Stage::Ms,
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
        ms_iterations: state.iteration,
        lp_iterations: 0,
        stop_reason: if converged {
            StopReason::SyndromeMatched
        } else {
            StopReason::BudgetExhausted
        },
        early_stopped: false,
    };
    Ok((outcome, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::test_codes::{steane, steane_graph, toric};
    use crate::decoders::{sgn, uniform_priors};
    use crate::gf2::BinaryMatrix;
    use proptest::prelude::*;

    // Direct transcription of the check rule: product of signs and minimum
    // magnitude over the other edges.
    fn brute_force_cn(v: &[f64], syndrome: bool, k: usize) -> f64 {
        let mut sign = if syndrome { -1.0 } else { 1.0 };
        let mut mag = f64::INFINITY;
        for (k2, &x) in v.iter().enumerate() {
            if k2 != k {
                sign *= sgn(x);
                mag = mag.min(x.abs());
            }
        }
        sign * mag
    }

    #[test]
    fn check_rule_examples() {
        let v = [1.5, -2.0, 0.5];
        let mut out = [0.0; 3];
        check_node_update(&v, true, &mut out);
        assert_eq!(out[0], brute_force_cn(&v, true, 0));
        assert_eq!(out[0], 0.5);
        check_node_update(&v, false, &mut out);
        assert_eq!(out[2], -1.5);
    }

    #[test]
    fn zero_syndrome_fixed_point() {
        let g = steane_graph();
        let priors = uniform_priors(7, 2.0);
        let mut state = MsState::new(&g, &priors);
        ms_iteration(&mut state, &[0, 0, 0], &g, &DecoderConfig::default());
        assert!(state.v.iter().all(|&x| x == 2.0));
        assert!(state.u.iter().all(|&x| x == 2.0));
        assert!(state.e_hat.iter().all(|&b| b == 0));
        assert!(state.s_hat.iter().all(|&b| b == 0));
        assert_eq!(state.iteration, 1);
    }

    #[test]
    fn zero_syndrome_needs_no_iterations() {
        let g = steane_graph();
        let (out, _) = sb_ms_decode(
            &BinaryVector::zeros(3),
            &g,
            &DecoderConfig::default(),
            &uniform_priors(7, 4.0),
        )
        .unwrap();
        assert!(out.converged);
        assert_eq!(out.ms_iterations, 0);
        assert!(out.e_hat.is_zero());
    }

    #[test]
    fn steane_single_errors() {
        let code = steane();
        let g = steane_graph();
        let priors = uniform_priors(7, crate::channel::prior_llr(0.01).unwrap());
        for j in 0..7 {
            let e = BinaryVector::from_ones(7, &[j]);
            let s = code.hz().syndrome(&e).unwrap();
            let (out, _) = sb_ms_decode(&s, &g, &DecoderConfig::default(), &priors).unwrap();
            assert!(out.converged, "error on qubit {j}");
            assert_eq!(code.hz().syndrome(&out.e_hat).unwrap(), s);
        }
    }

    #[test]
    fn budget_is_respected() {
        let code = toric(5);
        let g = TannerGraph::new(code.hz()).unwrap();
        let priors = uniform_priors(g.num_vars(), 1.0);
        let s = BinaryVector::from_ones(g.num_checks(), &[0]);
        // a single unmatched check is unsatisfiable (odd weight syndrome on a
        // ring-product code has no solution), so the decoder runs to budget
        let config = DecoderConfig {
            ims_max: 7,
            ..Default::default()
        };
        let mut trace = Vec::new();
        let (out, state) = sb_ms_decode_traced(&s, &g, &config, &priors, Some(&mut trace)).unwrap();
        assert!(!out.converged);
        assert_eq!(out.ms_iterations, 7);
        assert_eq!(state.iteration, 7);
        assert_eq!(trace.len(), 7);
        assert_eq!(out.stop_reason, StopReason::BudgetExhausted);
    }

    #[test]
    fn rejects_wrong_syndrome_length() {
        let g = steane_graph();
        assert!(sb_ms_decode(
            &BinaryVector::zeros(4),
            &g,
            &DecoderConfig::default(),
            &[1.0; 7]
        )
        .is_err());
        assert!(sb_ms_decode(
            &BinaryVector::zeros(3),
            &g,
            &DecoderConfig::default(),
            &[1.0; 6]
        )
        .is_err());
    }

    #[test]
    fn magnitude_cap_bounds_messages() {
        let g = TannerGraph::new(&BinaryMatrix::from_dense(&[[1u8, 1, 0], [0, 1, 1]]).unwrap())
            .unwrap();
        let config = DecoderConfig {
            magnitude_cap: Some(0.5),
            ..Default::default()
        };
        let mut state = MsState::new(&g, &[3.0, 3.0, 3.0]);
        ms_iteration(&mut state, &[1, 0], &g, &config);
        assert!(state.u.iter().chain(&state.v).all(|x| x.abs() <= 0.5));
    }

    proptest! {
        #[test]
        fn check_rule_matches_brute_force(
            v in prop::collection::vec(prop_oneof![-5.0f64..5.0, Just(0.0), Just(-0.0)], 1..=8),
            syndrome in any::<bool>(),
        ) {
            let mut out = vec![0.0; v.len()];
            check_node_update(&v, syndrome, &mut out);
            for k in 0..v.len() {
                let expected = brute_force_cn(&v, syndrome, k);
                prop_assert_eq!(out[k].to_bits(), expected.to_bits(), "edge {}", k);
            }
        }
    }
}
