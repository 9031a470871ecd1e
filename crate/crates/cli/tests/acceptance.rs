//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p reid-lab --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use reid_core::certifier::{brute_force_gap, certify_reid, default_epsilon, reid_gap_at};
use reid_core::generators::{
    generate_pair, mix_seed, ordered_positive_pair, random_ginibre, random_positive, random_unitary, GenConfig,
    HypothesisClass,
};
use reid_core::predicates::{is_hyponormal, normality_defect};
use reid_core::proof_steps::{check_sqrt_monotone, PROOF_STEP_TOLERANCE};
use reid_core::spectral::operator_norm;
use reid_core::{CertStatus, Complex64, ComplexMatrix, ReidInstance, TolerancePolicy};
use reid_lab::campaign::jordan_regression;
use reid_lab::cli::run_args;
use reid_lab::report::{CounterexampleReport, FuzzReport, ProofStepsReport};
use serde::de::DeserializeOwned;

const SEED: u64 = 42;
const DIMS: std::ops::RangeInclusive<usize> = 2..=8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Runs the CLI in-process and decodes its JSON output.
fn cli<T: DeserializeOwned>(args: &[&str]) -> Result<(i32, T), String> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_args(
        std::iter::once("reidlab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    let value = serde_json::from_slice(&out).map_err(|e| {
        format!(
            "exit {code}, undecodable output ({e}): {}",
            String::from_utf8_lossy(&err)
        )
    })?;
    Ok((code, value))
}

fn config(trial: usize) -> GenConfig {
    let dims: Vec<usize> = DIMS.collect();
    GenConfig::new(dims[trial % dims.len()], mix_seed(SEED, trial as u64)).expect("valid config")
}

fn counterexample_exact() -> Outcome {
    let start = Instant::now();
    for n in 2..=16usize {
        let (code, r): (i32, CounterexampleReport) = cli(&["counterexample", "--n", &n.to_string()])?;
        if (r.lhs, r.rhs, r.gap) != (2, 1, 1) {
            return Err(format!("n={n}: (lhs, rhs, gap) = ({}, {}, {})", r.lhs, r.rhs, r.gap));
        }
        if !r.agrees || code != 0 || r.certificate.status != "VIOLATED" {
            return Err(format!(
                "n={n}: agrees={} exit={code} status={}",
                r.agrees, r.certificate.status
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("n=2..16 took {elapsed:.2?} (limit 1 s)"));
    }
    Ok(format!(
        "n=2..16 exact (2, 1, 1), certifier VIOLATED, {elapsed:.2?} < 1 s"
    ))
}

fn fuzz_campaign(class: &str) -> Outcome {
    let start = Instant::now();
    let (code, r): (i32, FuzzReport) = cli(&[
        "fuzz", "--class", class, "--dims", "2..8", "--trials", "500", "--seed", "42",
    ])?;
    let elapsed = start.elapsed();
    let certified = r.summary.get(CertStatus::CertifiedHolds);
    if certified != 500 || code != 0 {
        return Err(format!("{certified}/500 CERTIFIED_HOLDS, exit {code}"));
    }
    let mut worst: f64 = 0.0;
    for v in &r.verdicts {
        let bound = 1e-6 * v.lipschitz_bound.max(1.0);
        if v.gap_upper > bound {
            return Err(format!("trial {}: gap_upper {:e} > {:e}", v.trial, v.gap_upper, bound));
        }
        worst = worst.max(v.gap_upper / bound);
    }
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:.2?} (limit 60 s)"));
    }
    Ok(format!(
        "500/500 CERTIFIED_HOLDS, max gap_upper / (1e-6 scale) = {worst:.2e}, {elapsed:.2?} < 60 s"
    ))
}

/// Trial `i` cycles the three classes plus an unconstrained `K`.
fn sandwich_instance(i: usize) -> (ComplexMatrix, ComplexMatrix) {
    let cfg = config(i);
    match i % 4 {
        3 => (
            random_positive(&cfg, i % 8 == 7).unwrap(),
            random_ginibre(&cfg.child(2)).unwrap(),
        ),
        c => {
            let pair = generate_pair(HypothesisClass::ALL[c], &cfg).unwrap();
            (pair.a, pair.k)
        }
    }
}

fn certifier_sandwich() -> Outcome {
    let tol = TolerancePolicy::default();
    let (mut max_excess, mut max_witness_err) = (f64::NEG_INFINITY, 0.0f64);
    let mut violated = 0;
    for i in 0..200 {
        let (a, k) = sandwich_instance(i);
        let inst = ReidInstance::new(a.clone(), k.clone(), &tol).map_err(|e| format!("instance {i}: {e}"))?;
        let cert = certify_reid(&inst, default_epsilon(inst.product()).unwrap(), &tol)
            .map_err(|e| format!("instance {i}: {e}"))?;
        violated += usize::from(cert.status == CertStatus::Violated);
        let (sampled, _) = brute_force_gap(
            inst.product(),
            &inst.dominating(),
            10_000,
            mix_seed(SEED ^ 0x5a, i as u64),
        )
        .unwrap();
        if sampled > cert.gap_upper + 1e-10 {
            return Err(format!(
                "instance {i}: sampled gap {sampled:e} > gap_upper {:e} + 1e-10",
                cert.gap_upper
            ));
        }
        let at_witness = reid_gap_at(&a, &k, &cert.witness).unwrap();
        let err = (at_witness - cert.gap_lower).abs();
        if err > 1e-10 {
            return Err(format!(
                "instance {i}: witness gap {at_witness:e} vs gap_lower {:e}",
                cert.gap_lower
            ));
        }
        max_excess = max_excess.max(sampled - cert.gap_upper);
        max_witness_err = max_witness_err.max(err);
    }
    Ok(format!(
        "200 instances ({violated} VIOLATED): max(sampled - gap_upper) = {max_excess:.2e}, \
         max |witness gap - gap_lower| = {max_witness_err:.2e}"
    ))
}

fn proof_chain() -> Outcome {
    let rtol = format!("{:e}", PROOF_STEP_TOLERANCE.rtol);
    let atol = PROOF_STEP_TOLERANCE.atol.to_string();
    let args = [
        "proofsteps",
        "--dims",
        "2..8",
        "--trials",
        "200",
        "--seed",
        "42",
        "--atol",
        &atol,
        "--rtol",
        &rtol,
    ];
    let (code, r): (i32, ProofStepsReport) = cli(&args)?;
    if r.failing_instances != 0 || code != 0 {
        return Err(format!(
            "{} failing instances {:?}, exit {code}",
            r.failing_instances, r.failing_steps
        ));
    }
    let concluded = r
        .instances
        .iter()
        .filter(|i| i.steps.iter().any(|s| s.step_name == "reid_conclusion" && s.holds))
        .count();
    if concluded != 200 {
        return Err(format!("reid_conclusion certified on {concluded}/200"));
    }
    let steps = r.instances[0].steps.len();
    Ok(format!(
        "200/200 instances, all {steps} steps hold at rtol {rtol}, conclusion CERTIFIED_HOLDS"
    ))
}

fn sqrt_monotone() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let (x, y) = ordered_positive_pair(&config(i)).unwrap();
        let step = check_sqrt_monotone(&x, &y, &PROOF_STEP_TOLERANCE).map_err(|e| format!("pair {i}: {e}"))?;
        if !step.holds {
            return Err(format!("pair {i}: {}", step.detail));
        }
        worst = worst.max(step.defect / step.floor);
    }
    Ok(format!(
        "1000/1000 pairs, max negative part / (1e-8 scale) = {worst:.2e}"
    ))
}

fn jordan() -> Outcome {
    let r = jordan_regression(&TolerancePolicy::default()).map_err(|e| e.to_string())?;
    let (dl, dr) = ((r.lhs - 0.3).abs(), (r.rhs - 0.1).abs());
    if dl > 1e-12 || dr > 1e-12 {
        return Err(format!("lhs {} rhs {}", r.lhs, r.rhs));
    }
    if !r.violated {
        return Err(format!("certificate status {}", r.certificate.status));
    }
    Ok(format!(
        "lhs 0.3 (err {dl:.1e}), rhs 0.1 (err {dr:.1e}), certificate VIOLATED"
    ))
}

/// Even trials are Ginibre matrices, odd trials normal `U D U*`.
fn commutator_sample(i: usize) -> ComplexMatrix {
    let cfg = config(i);
    let g = random_ginibre(&cfg).unwrap();
    if i.is_multiple_of(2) {
        return g;
    }
    let u = random_unitary(&cfg.child(3)).unwrap();
    let d = ComplexMatrix::from_diagonal(&g.diagonal());
    u.try_mul(&d).unwrap().try_mul(&u.adjoint()).unwrap()
}

fn self_commutator() -> Outcome {
    let tol = PROOF_STEP_TOLERANCE;
    let (mut hyponormal, mut worst_trace) = (0, 0.0f64);
    for i in 0..200 {
        let t = commutator_sample(i);
        let n = t.rows();
        let scale = TolerancePolicy::scale(operator_norm(&t).unwrap().powi(2));
        let report = normality_defect(&t).unwrap();
        let trace: Complex64 = report.defect_matrix.trace();
        if trace.norm() > 1e-12 * scale {
            return Err(format!(
                "sample {i}: |trace| {:e} > 1e-12 scale {scale:e}",
                trace.norm()
            ));
        }
        worst_trace = worst_trace.max(trace.norm() / scale);
        if is_hyponormal(&t, &tol).unwrap().holds {
            hyponormal += 1;
            let bound = (n - 1) as f64 * tol.floor(scale);
            if report.norm > bound {
                return Err(format!(
                    "sample {i}: hyponormal with defect {:e} > {bound:e}",
                    report.norm
                ));
            }
        }
    }
    Ok(format!(
        "200 samples ({hyponormal} hyponormal): max |trace| / scale = {worst_trace:.2e}, \
         hyponormal defects within (n-1) t scale"
    ))
}

fn replay() -> Outcome {
    let args = [
        "fuzz", "--class", "normal", "--dims", "2..8", "--trials", "100", "--seed", "42",
    ];
    let (_, mut a): (i32, FuzzReport) = cli(&args)?;
    let (_, mut b): (i32, FuzzReport) = cli(&args)?;
    a.wall_time_ms = 0;
    b.wall_time_ms = 0;
    let (sa, sb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    if sa != sb {
        return Err("reports differ".into());
    }
    Ok(format!("100-trial report identical across runs ({} bytes)", sa.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("counterexample exact for n = 2..16", counterexample_exact),
        ("fuzz selfadjoint, 500 trials", || fuzz_campaign("selfadjoint")),
        ("fuzz normal, 500 trials", || fuzz_campaign("normal")),
        ("fuzz cohypo, 500 trials", || fuzz_campaign("cohypo")),
        ("certificate brackets sampled gap", certifier_sandwich),
        ("proof chain holds step by step", proof_chain),
        ("square root is operator monotone", sqrt_monotone),
        ("Jordan block regression", jordan),
        ("self-commutator trace and hyponormal bound", self_commutator),
        ("fuzz campaigns replay identically", replay),
    ];
    let mut failed = 0;
    for (index, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", index + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", index + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
