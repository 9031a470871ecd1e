//! Serializable reports.
//!
//! Every report is deterministic given its inputs except `wall_time_ms`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use reid_core::proof_steps::ProofStepResult;
use reid_core::shift::ViolationReport;
use reid_core::{CertStatus, GapCertificate, TolerancePolicy};
use serde::{Deserialize, Serialize};

use crate::format::VectorJson;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub status: String,
    pub gap_upper: f64,
    pub gap_lower: f64,
    pub theta_star: f64,
    pub witness: VectorJson,
    pub grid_points: usize,
    pub lipschitz_bound: f64,
    pub epsilon: f64,
    pub floor: f64,
    pub deflated_dim: usize,
}

impl From<&GapCertificate> for CertificateJson {
    fn from(c: &GapCertificate) -> Self {
        Self {
            status: c.status.as_str().into(),
            gap_upper: c.gap_upper,
            gap_lower: c.gap_lower,
            theta_star: c.theta_star,
            witness: VectorJson::from(&c.witness),
            grid_points: c.grid_points,
            lipschitz_bound: c.lipschitz_bound,
            epsilon: c.epsilon,
            floor: c.floor,
            deflated_dim: c.deflated_dim,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceJson {
    pub atol: f64,
    pub rtol: f64,
}

impl From<&TolerancePolicy> for ToleranceJson {
    fn from(t: &TolerancePolicy) -> Self {
        Self {
            atol: t.atol,
            rtol: t.rtol,
        }
    }
}

/// Counts per status, keyed by the status string.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StatusCounts(pub BTreeMap<String, usize>);

impl StatusCounts {
    pub fn tally<'a>(statuses: impl IntoIterator<Item = &'a str>) -> Self {
        let mut map: BTreeMap<String, usize> = [
            CertStatus::CertifiedHolds,
            CertStatus::Violated,
            CertStatus::Inconclusive,
        ]
        .iter()
        .map(|s| (s.as_str().to_string(), 0))
        .collect();
        for s in statuses {
            *map.entry(s.to_string()).or_default() += 1;
        }
        Self(map)
    }

    pub fn get(&self, status: CertStatus) -> usize {
        self.0.get(status.as_str()).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

/// Hypothesis-class measurements of `AK` for one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassDefects {
    /// Defect measured by the generator's post-check.
    pub post_check: f64,
    /// `‖AK - (AK)*‖_F`.
    pub hermitian: f64,
    /// `‖(AK)*(AK) - (AK)(AK)*‖`.
    pub normality: f64,
    /// `λ_min(A)`.
    pub a_lambda_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialVerdict {
    pub trial: usize,
    pub trial_seed: u64,
    pub dim: usize,
    pub strategy: String,
    pub singular_a: bool,
    pub status: String,
    pub gap_upper: f64,
    pub gap_lower: f64,
    pub floor: f64,
    /// `‖AK‖`.
    pub lipschitz_bound: f64,
    pub grid_points: usize,
    pub defects: ClassDefects,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub schema_version: u32,
    pub campaign_name: String,
    pub class: String,
    pub class_note: Option<String>,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// `null` means the certifier's default per instance.
    pub epsilon: Option<f64>,
    pub tolerance: ToleranceJson,
    pub verdicts: Vec<TrialVerdict>,
    pub summary: StatusCounts,
    pub wall_time_ms: u64,
}

impl FuzzReport {
    pub fn all_certified(&self) -> bool {
        self.summary.get(CertStatus::CertifiedHolds) == self.trials
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRow {
    pub step_name: String,
    pub holds: bool,
    pub defect: f64,
    pub floor: f64,
    pub detail: String,
}

impl From<&ProofStepResult> for StepRow {
    fn from(s: &ProofStepResult) -> Self {
        Self {
            step_name: s.step_name.clone(),
            holds: s.holds,
            defect: s.defect,
            floor: s.floor,
            detail: s.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub trial: usize,
    pub trial_seed: u64,
    pub dim: usize,
    pub class: String,
    pub strategy: String,
    pub all_hold: bool,
    pub steps: Vec<StepRow>,
}

/// The non-hyponormal Jordan block `[[0, 1], [0, 0]]` at `x = (√0.9, √0.1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JordanRecord {
    pub lhs: f64,
    pub rhs: f64,
    pub certificate: CertificateJson,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofStepsReport {
    pub schema_version: u32,
    pub campaign_name: String,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub step_tolerance: ToleranceJson,
    pub instances: Vec<ChainRecord>,
    pub jordan: JordanRecord,
    pub failing_instances: usize,
    pub failing_steps: BTreeMap<String, usize>,
    pub wall_time_ms: u64,
}

impl ProofStepsReport {
    pub fn passed(&self) -> bool {
        self.failing_instances == 0 && self.jordan.violated
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub schema_version: u32,
    pub n: usize,
    pub x: Vec<i64>,
    pub lhs: i64,
    pub adjoint_image_norm_sq: i64,
    pub k_norm: i64,
    pub rhs: i64,
    pub gap: i64,
    pub ak_equals_s: bool,
    pub adjoint_identity: bool,
    pub self_commutator_lambda_min: f64,
    pub certificate: CertificateJson,
    pub agrees: bool,
}

impl CounterexampleReport {
    pub fn new(r: &ViolationReport, x: Vec<i64>, adjoint_identity: bool, self_commutator_lambda_min: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n: r.n,
            x,
            lhs: r.lhs,
            adjoint_image_norm_sq: r.adjoint_image_norm_sq,
            k_norm: r.k_norm,
            rhs: r.rhs,
            gap: r.gap,
            ak_equals_s: r.ak_equals_s,
            adjoint_identity,
            self_commutator_lambda_min,
            certificate: CertificateJson::from(&r.certificate),
            agrees: r.agrees() && adjoint_identity,
        }
    }
}

pub fn human_certificate(c: &CertificateJson) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "status          {}", c.status);
    let _ = writeln!(s, "gap_upper       {:.6e}", c.gap_upper);
    let _ = writeln!(s, "gap_lower       {:.6e}", c.gap_lower);
    let _ = writeln!(s, "floor           {:.3e}", c.floor);
    let _ = writeln!(s, "theta_star      {:.12}", c.theta_star);
    let _ = writeln!(s, "evaluations     {}", c.grid_points);
    let _ = writeln!(s, "lipschitz       {:.6e}", c.lipschitz_bound);
    let _ = writeln!(s, "epsilon         {:.3e}", c.epsilon);
    if c.deflated_dim > 0 {
        let _ = writeln!(s, "common kernel   {}", c.deflated_dim);
    }
    let w: Vec<String> = c
        .witness
        .data
        .iter()
        .map(|[re, im]| format!("{re:+.6}{im:+.6}i"))
        .collect();
    let _ = writeln!(s, "witness         ({})", w.join(", "));
    s
}

pub fn human_fuzz(r: &FuzzReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}: class {}, {} trials, dims {:?}, seed {}",
        r.campaign_name, r.class, r.trials, r.dims, r.seed
    );
    for v in r
        .verdicts
        .iter()
        .filter(|v| v.status != CertStatus::CertifiedHolds.as_str())
    {
        let _ = writeln!(
            s,
            "  trial {:>5} seed {:#018x} dim {} {:<9} {} gap_upper {:.3e} gap_lower {:.3e}",
            v.trial, v.trial_seed, v.dim, v.strategy, v.status, v.gap_upper, v.gap_lower
        );
    }
    for (status, count) in &r.summary.0 {
        let _ = writeln!(s, "  {status:<16} {count}");
    }
    let worst = r.verdicts.iter().map(|v| v.gap_upper).fold(f64::NEG_INFINITY, f64::max);
    let _ = writeln!(s, "  max gap_upper    {worst:.3e}");
    let _ = writeln!(s, "  wall time        {} ms", r.wall_time_ms);
    s
}

pub fn human_proofsteps(r: &ProofStepsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}: {} instances, dims {:?}, seed {}",
        r.campaign_name, r.trials, r.dims, r.seed
    );
    let mut worst: BTreeMap<&str, f64> = BTreeMap::new();
    for inst in &r.instances {
        for step in &inst.steps {
            let ratio = if step.floor > 0.0 {
                step.defect / step.floor
            } else if step.defect > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            let w = worst.entry(step.step_name.as_str()).or_insert(0.0);
            *w = w.max(ratio);
        }
    }
    let _ = writeln!(s, "  {:<22} {:>8}  {:>12}", "step", "failures", "max defect/floor");
    for (name, ratio) in &worst {
        let failures = r.failing_steps.get(*name).copied().unwrap_or(0);
        let _ = writeln!(s, "  {name:<22} {failures:>8}  {ratio:>12.3e}");
    }
    for inst in r.instances.iter().filter(|i| !i.all_hold) {
        for step in inst.steps.iter().filter(|s| !s.holds) {
            let _ = writeln!(
                s,
                "  FAIL trial {} seed {:#018x} {}: defect {:.3e} > {:.3e} ({})",
                inst.trial, inst.trial_seed, step.step_name, step.defect, step.floor, step.detail
            );
        }
    }
    let _ = writeln!(
        s,
        "  jordan block: |<Tx,x>| = {:.12}, <|T|x,x> = {:.12}, certificate {}",
        r.jordan.lhs, r.jordan.rhs, r.jordan.certificate.status
    );
    let _ = writeln!(s, "  wall time {} ms", r.wall_time_ms);
    s
}

pub fn human_counterexample(r: &CounterexampleReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "truncated shift, n = {}, x = {:?}", r.n, r.x);
    let _ = writeln!(s, "  |<Sx,x>|            {}", r.lhs);
    let _ = writeln!(s, "  ||S*x||^2           {}", r.adjoint_image_norm_sq);
    let _ = writeln!(s, "  ||K||               {}", r.k_norm);
    let _ = writeln!(s, "  ||K|| <Ax,x>        {}", r.rhs);
    let _ = writeln!(s, "  gap                 {}", r.gap);
    let _ = writeln!(s, "  SS*S = S            {}", r.ak_equals_s);
    let _ = writeln!(s, "  S*SS* = S*          {}", r.adjoint_identity);
    let _ = writeln!(s, "  lambda_min(S*S-SS*) {}", r.self_commutator_lambda_min);
    let _ = writeln!(
        s,
        "  certifier           {} (gap_lower {:.9}, gap_upper {:.9})",
        r.certificate.status, r.certificate.gap_lower, r.certificate.gap_upper
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_lists_every_status() {
        let c = StatusCounts::tally(["VIOLATED", "CERTIFIED_HOLDS", "CERTIFIED_HOLDS"]);
        assert_eq!(c.get(CertStatus::CertifiedHolds), 2);
        assert_eq!(c.get(CertStatus::Violated), 1);
        assert_eq!(c.get(CertStatus::Inconclusive), 0);
        assert_eq!(c.total(), 3);
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"CERTIFIED_HOLDS":2,"INCONCLUSIVE":0,"VIOLATED":1}"#
        );
    }
}
