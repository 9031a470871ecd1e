//! Seeded campaigns. Trial `i` uses dimension `dims[i % dims.len()]` and seed
//! `mix_seed(seed, i)`, so any trial can be replayed on its own.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use reid_core::certifier::{certify_reid, default_epsilon};
use reid_core::generators::{
    generate_pair, mix_seed, random_unit_vector, GenConfig, GeneratedPair, HypothesisClass, MAX_DIM,
};
use reid_core::predicates::{absolute_value, is_positive, normality_defect};
use reid_core::proof_steps::{check_kittaneh, run_proof_chain};
use reid_core::shift::{
    build_shift_instance, finite_dim_hyponormality_note, shift_counterexample_with, verify_adjoint_identity,
};
use reid_core::spectral::{hermitian_defect, quadratic_form};
use reid_core::{CertStatus, ComplexMatrix, ComplexVector, ReidInstance, TolerancePolicy};

use crate::format::write_matrix;
use crate::report::{
    CertificateJson, ChainRecord, ClassDefects, CounterexampleReport, FuzzReport, JordanRecord, ProofStepsReport,
    StatusCounts, StepRow, ToleranceJson, TrialVerdict, SCHEMA_VERSION,
};

/// Probe-vector stream for the conjugation step, relative to the trial seed.
const PROBE_STREAM: u64 = 7;

pub fn validate_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        bail!("no dimensions given");
    }
    if let Some(&d) = dims.iter().find(|&&d| d == 0 || d > MAX_DIM) {
        bail!("dimension {d} outside 1..={MAX_DIM}");
    }
    Ok(())
}

pub fn trial_config(dims: &[usize], seed: u64, trial: usize) -> Result<GenConfig> {
    Ok(GenConfig::new(dims[trial % dims.len()], mix_seed(seed, trial as u64))?)
}

fn dump_pair(dir: &Path, trial: usize, pair: &GeneratedPair) -> Result<()> {
    write_matrix(&dir.join(format!("trial-{trial:05}-A.json")), &pair.a)?;
    write_matrix(&dir.join(format!("trial-{trial:05}-K.json")), &pair.k)
}

fn prepare_dump(dump: Option<&Path>) -> Result<()> {
    if let Some(dir) = dump {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub class: HypothesisClass,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub epsilon: Option<f64>,
    pub tol: TolerancePolicy,
    pub dump: Option<PathBuf>,
}

pub fn run_trial(cfg: &FuzzConfig, trial: usize) -> Result<(TrialVerdict, GeneratedPair)> {
    let gen = trial_config(&cfg.dims, cfg.seed, trial)?;
    let pair = generate_pair(cfg.class, &gen)?;
    let inst = ReidInstance::new(pair.a.clone(), pair.k.clone(), &cfg.tol)?;
    let epsilon = match cfg.epsilon {
        Some(e) => e,
        None => default_epsilon(inst.product())?,
    };
    let cert = certify_reid(&inst, epsilon, &cfg.tol)?;
    let product = inst.product();
    let verdict = TrialVerdict {
        trial,
        trial_seed: gen.seed,
        dim: gen.dim,
        strategy: pair.strategy.name().into(),
        singular_a: pair.singular_a,
        status: cert.status.as_str().into(),
        gap_upper: cert.gap_upper,
        gap_lower: cert.gap_lower,
        floor: cert.floor,
        lipschitz_bound: cert.lipschitz_bound,
        grid_points: cert.grid_points,
        defects: ClassDefects {
            post_check: pair.class_defect,
            hermitian: hermitian_defect(product),
            normality: normality_defect(product)?.norm,
            a_lambda_min: is_positive(&pair.a, &cfg.tol)?.lambda_min,
        },
    };
    Ok((verdict, pair))
}

pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzReport> {
    if cfg.trials == 0 {
        bail!("--trials must be at least 1");
    }
    validate_dims(&cfg.dims)?;
    if let Some(e) = cfg.epsilon {
        if !(e > 0.0 && e.is_finite()) {
            bail!("--epsilon must be positive");
        }
    }
    prepare_dump(cfg.dump.as_deref())?;
    let start = Instant::now();
    let results: Vec<(TrialVerdict, GeneratedPair)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<_>>()?;
    if let Some(dir) = &cfg.dump {
        for (v, pair) in &results {
            dump_pair(dir, v.trial, pair)?;
        }
    }
    let verdicts: Vec<TrialVerdict> = results.into_iter().map(|(v, _)| v).collect();
    let summary = StatusCounts::tally(verdicts.iter().map(|v| v.status.as_str()));
    Ok(FuzzReport {
        schema_version: SCHEMA_VERSION,
        campaign_name: format!("fuzz-{}", cfg.class.name()),
        class: cfg.class.name().into(),
        class_note: (cfg.class == HypothesisClass::CoHyponormal)
            .then(|| reid_core::generators::COHYPONORMAL_NOTE.to_string()),
        dims: cfg.dims.clone(),
        trials: cfg.trials,
        seed: cfg.seed,
        epsilon: cfg.epsilon,
        tolerance: ToleranceJson::from(&cfg.tol),
        verdicts,
        summary,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Clone, Debug)]
pub struct ProofStepsConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Gates the algebraic steps.
    pub step_tol: TolerancePolicy,
    /// Passed to the two certificates.
    pub cert_tol: TolerancePolicy,
    pub dump: Option<PathBuf>,
}

/// Class of proof-chain trial `i`; cycles through every theorem class.
pub fn chain_class(trial: usize) -> HypothesisClass {
    HypothesisClass::ALL[trial % HypothesisClass::ALL.len()]
}

pub fn run_chain_trial(cfg: &ProofStepsConfig, trial: usize) -> Result<(ChainRecord, GeneratedPair)> {
    let gen = trial_config(&cfg.dims, cfg.seed, trial)?;
    let class = chain_class(trial);
    let pair = generate_pair(class, &gen)?;
    let x = random_unit_vector(&gen.child(PROBE_STREAM))?;
    let report = run_proof_chain(&pair.a, &pair.k, &x, &cfg.step_tol, &cfg.cert_tol)?;
    let record = ChainRecord {
        trial,
        trial_seed: gen.seed,
        dim: gen.dim,
        class: class.name().into(),
        strategy: pair.strategy.name().into(),
        all_hold: report.all_hold(),
        steps: report.steps.iter().map(StepRow::from).collect(),
    };
    Ok((record, pair))
}

/// The Jordan block `[[0, 1], [0, 0]]` is not hyponormal and violates
/// `|⟨Tx,x⟩| <= ⟨|T|x,x⟩`; at `x = (√0.9, √0.1)` the sides are `0.3` and `0.1`.
pub fn jordan_regression(tol: &TolerancePolicy) -> Result<JordanRecord> {
    let t = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0])?;
    let abs = absolute_value(&t, tol)?;
    let x = ComplexVector::from_real(&[0.9f64.sqrt(), 0.1f64.sqrt()])?;
    let lhs = quadratic_form(&t, &x)?.norm();
    let rhs = quadratic_form(&abs, &x)?.re;
    let cert = check_kittaneh(&t, default_epsilon(&t)?, tol)?;
    Ok(JordanRecord {
        lhs,
        rhs,
        violated: cert.status == CertStatus::Violated,
        certificate: CertificateJson::from(&cert),
    })
}

pub fn run_proofsteps(cfg: &ProofStepsConfig) -> Result<ProofStepsReport> {
    if cfg.trials == 0 {
        bail!("--trials must be at least 1");
    }
    validate_dims(&cfg.dims)?;
    prepare_dump(cfg.dump.as_deref())?;
    let start = Instant::now();
    let results: Vec<(ChainRecord, GeneratedPair)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_chain_trial(cfg, i))
        .collect::<Result<_>>()?;
    if let Some(dir) = &cfg.dump {
        for (r, pair) in &results {
            dump_pair(dir, r.trial, pair)?;
        }
    }
    let instances: Vec<ChainRecord> = results.into_iter().map(|(r, _)| r).collect();
    let mut failing_steps = BTreeMap::new();
    for step in instances.iter().flat_map(|i| &i.steps).filter(|s| !s.holds) {
        *failing_steps.entry(step.step_name.clone()).or_insert(0) += 1;
    }
    Ok(ProofStepsReport {
        schema_version: SCHEMA_VERSION,
        campaign_name: "proofsteps".into(),
        dims: cfg.dims.clone(),
        trials: cfg.trials,
        seed: cfg.seed,
        step_tolerance: ToleranceJson::from(&cfg.step_tol),
        failing_instances: instances.iter().filter(|i| !i.all_hold).count(),
        instances,
        jordan: jordan_regression(&cfg.cert_tol)?,
        failing_steps,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn counterexample(n: usize, tol: &TolerancePolicy) -> Result<CounterexampleReport> {
    if n < 2 {
        bail!("--n must be at least 2");
    }
    let report = shift_counterexample_with(n, tol)?;
    let inst = build_shift_instance(n)?;
    let commutator = finite_dim_hyponormality_note(&inst)?;
    Ok(CounterexampleReport::new(
        &report,
        inst.x_witness.clone(),
        verify_adjoint_identity(&inst),
        commutator.lambda_min,
    ))
}
