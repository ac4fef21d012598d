//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qldpc::channel::{prior_llr, DepolarizingChannel};
use qldpc::code::{b1, generalized_bicycle, hypergraph_product, repetition_ring};
use qldpc::decoders::{
    check_node_update, decode, spc_max, uniform_priors, ParityClass, Stage, TracePoint,
};
use qldpc::simulator::{run_point, SimOptions, StopRule, TrialSimulator};
use qldpc::{BinaryMatrix, BinaryVector, CssCode, DecoderConfig, DecoderKind, TannerGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn hamming() -> BinaryMatrix {
    BinaryMatrix::from_dense(&[
        [0u8, 0, 0, 1, 1, 1, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [1, 0, 1, 0, 1, 0, 1],
    ])
    .unwrap()
}

fn steane() -> CssCode {
    CssCode::new("steane", hamming(), hamming()).unwrap()
}

fn toric(ell: usize) -> CssCode {
    let r = repetition_ring(ell).unwrap();
    hypergraph_product(&r, &r).unwrap()
}

/// Real vector mixing continuous values, small integers (ties) and zeros.
fn random_values(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len)
        .map(|_| match rng.gen_range(0..10) {
            0 => 0.0,
            1 => -0.0,
            2..=4 => rng.gen_range(-4i32..=4) as f64,
            _ => rng.gen_range(-10.0..10.0),
        })
        .collect()
}

fn brute_spc_max(values: &[f64], odd: bool) -> Option<f64> {
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << values.len()) {
        if (mask.count_ones() % 2 == 1) != odd {
            continue;
        }
        let mut sum = 0.0;
        for (k, &x) in values.iter().enumerate() {
            if mask >> k & 1 == 1 {
                sum += x;
            }
        }
        if best.is_none_or(|b| sum > b) {
            best = Some(sum);
        }
    }
    best
}

fn criterion_1() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let start = Instant::now();
    let mut mismatches = 0;
    let cases = 100_000;
    for _ in 0..cases {
        let len = rng.gen_range(2..=12);
        let v = random_values(&mut rng, len);
        for (odd, parity) in [(false, ParityClass::Even), (true, ParityClass::Odd)] {
            let fast = spc_max(&v, parity).map(f64::to_bits);
            let slow = brute_spc_max(&v, odd).map(f64::to_bits);
            if fast != slow {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        mismatches == 0 && elapsed < Duration::from_secs(10),
        format!(
            "{cases} vectors x 2 parities, {mismatches} mismatches, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut mismatches = 0;
    let cases = 100_000;
    for _ in 0..cases {
        let degree = rng.gen_range(1..=8);
        let v = random_values(&mut rng, degree);
        for syndrome in [false, true] {
            let mut out = vec![0.0; degree];
            check_node_update(&v, syndrome, &mut out);
            for k in 0..degree {
                let mut sign = if syndrome { -1.0 } else { 1.0 };
                let mut min = f64::INFINITY;
                for (k2, &x) in v.iter().enumerate() {
                    if k2 != k {
                        sign *= if x > 0.0 { 1.0 } else { -1.0 };
                        min = min.min(x.abs());
                    }
                }
                if out[k] != sign * min {
                    mismatches += 1;
                }
            }
        }
    }
    verdict(
        mismatches == 0,
        format!("{cases} neighborhoods x 2 syndromes, {mismatches} mismatching messages"),
    )
}

/// All 2^rows combinations of the rows of `h`, as dense bit vectors.
fn row_span(h: &BinaryMatrix) -> Vec<Vec<u8>> {
    let dense: Vec<Vec<u8>> = (0..h.rows())
        .map(|i| (0..h.cols()).map(|j| u8::from(h.get(i, j))).collect())
        .collect();
    (0u32..(1 << h.rows()))
        .map(|mask| {
            let mut v = vec![0u8; h.cols()];
            for (i, row) in dense.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.iter_mut().zip(row).for_each(|(a, b)| *a ^= b);
                }
            }
            v
        })
        .collect()
}

fn criterion_3() -> Verdict {
    let code = steane();
    let graph = TannerGraph::new(code.hz()).unwrap();
    let span = row_span(code.hx());
    let priors = uniform_priors(7, prior_llr(0.01).unwrap());
    let start = Instant::now();
    let mut ok = 0;
    let mut failed = Vec::new();
    for kind in [DecoderKind::SbMs, DecoderKind::SbLp, DecoderKind::Combined] {
        let config = DecoderConfig::for_kind(kind);
        for j in 0..7 {
            let e = BinaryVector::from_ones(7, &[j]);
            let s = code.hz().syndrome(&e).unwrap();
            let out = decode(kind, &s, &graph, &config, &priors, None).unwrap();
            let residual: Vec<u8> = out
                .e_hat
                .to_bytes()
                .iter()
                .zip(e.to_bytes())
                .map(|(a, b)| a ^ b)
                .collect();
            if out.converged && span.contains(&residual) {
                ok += 1;
            } else {
                failed.push(format!("{kind}/q{j}"));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        ok == 21 && elapsed < Duration::from_secs(1),
        format!(
            "{ok}/21 weight-1 errors decoded, {:.3} s, failing: [{}]",
            elapsed.as_secs_f64(),
            failed.join(", ")
        ),
    )
}

fn criterion_4() -> Verdict {
    let codes = [
        (steane(), 300_000u64),
        (toric(3), 300_000),
        (toric(4), 150_000),
        (generalized_bicycle(&[0, 1], &[0, 3], 7).unwrap(), 150_000),
        (toric(6), 95_000),
        (b1(), 5_000),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut trials = 0u64;
    let mut violations = 0u64;
    let mut converged = 0u64;
    for (code, count) in &codes {
        let graph = TannerGraph::new(code.hz()).unwrap();
        for t in 0..*count {
            let kind = DecoderKind::ALL[(t % 4) as usize];
            let p = rng.gen_range(0.001..0.2);
            let priors = uniform_priors(code.n(), prior_llr(p).unwrap());
            let s = if rng.gen_bool(0.3) {
                BinaryVector::from_bools((0..graph.num_checks()).map(|_| rng.gen_bool(0.5)))
            } else {
                let e = DepolarizingChannel::new(p, code.n())
                    .unwrap()
                    .sample(&mut rng)
                    .x;
                code.hz().syndrome(&e).unwrap()
            };
            let out = decode(
                kind,
                &s,
                &graph,
                &DecoderConfig::for_kind(kind),
                &priors,
                None,
            )
            .unwrap();
            trials += 1;
            if out.converged {
                converged += 1;
                if code.hz().syndrome(&out.e_hat).unwrap() != s {
                    violations += 1;
                }
            }
        }
    }
    verdict(
        trials >= 1_000_000 && violations == 0,
        format!("{trials} trials ({converged} converged), {violations} violations"),
    )
}

fn b1_options() -> SimOptions {
    SimOptions::default()
}

fn criterion_5(code: &CssCode) -> Verdict {
    let p = 0.05;
    let seed = 5;
    let ms = TrialSimulator::new(
        code,
        DecoderKind::SbMs,
        p,
        &DecoderConfig::for_kind(DecoderKind::SbMs),
        seed,
        &b1_options(),
    )
    .unwrap();
    let combined_config = DecoderConfig::for_kind(DecoderKind::Combined);
    let combined = TrialSimulator::new(
        code,
        DecoderKind::Combined,
        p,
        &combined_config,
        seed,
        &b1_options(),
    )
    .unwrap();
    let dv = combined.graph().dv_max();
    let (mut failures, mut halted, mut scanned) = (0u64, 0u64, 0u64);
    while failures < 50 && scanned < 20_000 {
        let record = ms.run(scanned, None).unwrap();
        scanned += 1;
        if record.outcome.converged {
            continue;
        }
        failures += 1;
        let mut trace: Vec<TracePoint> = Vec::new();
        combined.run(record.trial, Some(&mut trace)).unwrap();
        let ms_points: Vec<&TracePoint> = trace.iter().filter(|t| t.stage == Stage::Ms).collect();
        let first_small = ms_points.iter().position(|t| t.changed <= dv);
        if let Some(pos) = first_small {
            let last = ms_points.len() - 1;
            if pos == last
                && ms_points[pos].unmatched > 0
                && ms_points[pos].iteration < combined_config.ims_max
            {
                halted += 1;
            }
        }
    }
    let fraction = halted as f64 / failures.max(1) as f64;
    verdict(
        failures > 0 && fraction >= 0.5,
        format!(
            "{halted}/{failures} SB-MS failures ({scanned} trials scanned) halted early with change <= {dv} ({:.0}%)",
            100.0 * fraction
        ),
    )
}

fn criterion_6(code: &CssCode) -> Verdict {
    let stop = StopRule {
        target_logical_errors: 100,
        max_trials: 500_000,
    };
    let stats = run_point(
        code,
        DecoderKind::SbMs,
        0.05,
        &DecoderConfig::for_kind(DecoderKind::SbMs),
        stop,
        6,
    )
    .unwrap();
    verdict(
        stats.logical_errors >= 100 && (3e-3..=3e-2).contains(&stats.ler),
        format!(
            "SB-MS p=0.05: ler {:.3e} [{:.3e}, {:.3e}] from {} errors in {} trials, band [3e-3, 3e-2]",
            stats.ler, stats.ci_low, stats.ci_high, stats.logical_errors, stats.trials
        ),
    )
}

fn criterion_7(code: &CssCode) -> Verdict {
    let stop = StopRule {
        target_logical_errors: 100,
        max_trials: 500_000,
    };
    let point =
        |kind| run_point(code, kind, 0.06, &DecoderConfig::for_kind(kind), stop, 7).unwrap();
    let ms = point(DecoderKind::SbMs);
    let combined = point(DecoderKind::Combined);
    verdict(
        combined.ler <= ms.ler / 5.0 && combined.ci_high < ms.ci_low,
        format!(
            "p=0.06: SB-MS ler {:.3e} [{:.3e}, {:.3e}] ({} trials), combined ler {:.3e} [{:.3e}, {:.3e}] ({} trials), ratio {:.2}",
            ms.ler,
            ms.ci_low,
            ms.ci_high,
            ms.trials,
            combined.ler,
            combined.ci_low,
            combined.ci_high,
            combined.trials,
            ms.ler / combined.ler.max(f64::MIN_POSITIVE)
        ),
    )
}

fn criterion_8(code: &CssCode) -> Verdict {
    let stop = StopRule::trials(10_000);
    let point =
        |kind| run_point(code, kind, 0.08, &DecoderConfig::for_kind(kind), stop, 8).unwrap();
    let ms = point(DecoderKind::SbMs);
    let lp = point(DecoderKind::SbLp);
    let combined = point(DecoderKind::Combined);
    verdict(
        combined.avg_total_iters < ms.avg_total_iters
            && combined.avg_total_iters < lp.avg_total_iters,
        format!(
            "p=0.08, {} trials each: combined {:.2}, SB-MS {:.2}, SB-LP {:.2} average iterations",
            ms.trials, combined.avg_total_iters, ms.avg_total_iters, lp.avg_total_iters
        ),
    )
}

fn qldpc(dir: &Path, args: &[&str], workers: &str) -> bool {
    Command::new(env!("CARGO_BIN_EXE_qldpc"))
        .args(args)
        .current_dir(dir)
        .env("QLDPC_WORKERS", workers)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn criterion_9() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    if !qldpc(
        d,
        &["code", "build", "--hgp-ring", "5", "5", "--out", "toric5"],
        "1",
    ) {
        return verdict(false, "code build failed");
    }
    let sweep = |out: &str, workers: &str| {
        qldpc(
            d,
            &[
                "sweep",
                "--code",
                "toric5/code.json",
                "--decoder",
                "sb-ms,sb-lp,combined,combined-no-early-stop",
                "--p-list",
                "0.02,0.05,0.1",
                "--target-errors",
                "40",
                "--max-trials",
                "3000",
                "--seed",
                "9",
                "--out",
                out,
            ],
            workers,
        )
    };
    let runs = [
        ("a.csv", "1"),
        ("b.csv", "1"),
        ("c.csv", "4"),
        ("d.csv", "3"),
    ];
    for (out, workers) in runs {
        if !sweep(out, workers) {
            return verdict(false, format!("sweep {out} failed"));
        }
    }
    let texts: Vec<Vec<u8>> = runs
        .iter()
        .map(|(out, _)| std::fs::read(d.join(out)).unwrap())
        .collect();
    let identical = texts.iter().all(|t| *t == texts[0]);
    let rows = String::from_utf8_lossy(&texts[0])
        .lines()
        .count()
        .saturating_sub(1);
    verdict(
        identical && rows == 12,
        format!("4 sweeps (workers 1, 1, 4, 3), {rows} rows each, byte-identical: {identical}"),
    )
}

fn main() {
    let mut all_pass = true;
    let mut report = |n: u32, v: Verdict| {
        println!(
            "{} criterion {n}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        all_pass &= v.pass;
    };
    report(1, criterion_1());
    report(2, criterion_2());
    report(3, criterion_3());
    report(4, criterion_4());
    let code = b1();
    report(5, criterion_5(&code));
    report(6, criterion_6(&code));
    report(7, criterion_7(&code));
    report(8, criterion_8(&code));
    report(9, criterion_9());
    if !all_pass {
        std::process::exit(1);
    }
}
