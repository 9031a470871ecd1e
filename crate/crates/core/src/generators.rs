//! Seeded generators for operator pairs `(A, K)` satisfying the hypotheses
//! of each Reid-type theorem.
//!
//! Every generator is a pure function of its [`GenConfig`]: the RNG is a
//! ChaCha8 stream seeded from `cfg.seed`. Independent sub-draws use child
//! seeds from [`mix_seed`].
//!
//! Each product class has two strategies, selected by one seeded bit:
//!
//! * `Inverse`: `A` invertible positive, `K = A⁻¹ X` for a target product `X`
//!   of the class. Cannot produce singular `A`.
//! * `Commuting`: `A = U diag(a) U*`, `K = U diag(k) U*` share an eigenbasis;
//!   `a_1 = 0` with probability 1/2, so singular `A` is covered.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::predicates::{is_cohyponormal, normality_defect};
use crate::spectral::{hermitian_defect, operator_norm};
use crate::tolerance::TolerancePolicy;

pub const MAX_DIM: usize = 64;

/// Relative tolerance of the post-construction class checks.
pub const CLASS_CHECK_RTOL: f64 = 1e-8;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Child seed for sub-draw `index` of a parent seed.
///
/// This is one SplitMix64 step applied to `seed + (index + 1)·γ`, where
/// `γ = 0x9E3779B97F4A7C15`:
///
/// ```text
/// z = seed + (index + 1) * γ            (wrapping)
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// z ^ (z >> 31)
/// ```
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub dim: usize,
    pub seed: u64,
    /// Condition-number cap for invertible `A`.
    pub cond_cap: f64,
    pub spectrum_scale: f64,
}

impl GenConfig {
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            dim,
            seed,
            cond_cap: 1e3,
            spectrum_scale: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.dim) {
            return Err(Error::BadDimension { n: self.dim, min: 1 });
        }
        if !(self.cond_cap > 1.0 && self.cond_cap.is_finite()) {
            return Err(Error::InvalidArgument("cond_cap must be finite and > 1"));
        }
        if !(self.spectrum_scale > 0.0 && self.spectrum_scale.is_finite()) {
            return Err(Error::InvalidArgument("spectrum_scale must be finite and > 0"));
        }
        Ok(())
    }

    /// Same parameters with a derived seed.
    pub fn child(&self, index: u64) -> Self {
        Self {
            seed: mix_seed(self.seed, index),
            ..*self
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisClass {
    /// `AK` self-adjoint.
    SelfAdjoint,
    /// `AK` normal.
    Normal,
    /// `(AK)*` hyponormal.
    CoHyponormal,
}

impl HypothesisClass {
    pub const ALL: [Self; 3] = [Self::SelfAdjoint, Self::Normal, Self::CoHyponormal];

    /// Inverse of [`name`](Self::name).
    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SelfAdjoint => "selfadjoint",
            Self::Normal => "normal",
            Self::CoHyponormal => "cohypo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Inverse,
    Commuting,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Self::Inverse => "inverse",
            Self::Commuting => "commuting",
        }
    }
}

/// Note attached to co-hyponormal pairs.
pub const COHYPONORMAL_NOTE: &str =
    "finite dimension: trace(T*T - TT*) = 0 forces co-hyponormal = normal; pair drawn from the normal-product class";

/// A generated `(A, K)` pair with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedPair {
    pub a: ComplexMatrix,
    pub k: ComplexMatrix,
    pub class: HypothesisClass,
    pub strategy: Strategy,
    pub singular_a: bool,
    /// Class defect of `AK` measured by the post-check (Hermitian or normality defect).
    pub class_defect: f64,
    pub note: Option<&'static str>,
}

impl GeneratedPair {
    pub fn product(&self) -> ComplexMatrix {
        &self.a * &self.k
    }
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    // E|z|^2 = 1
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

fn ginibre_from(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

/// Orthonormalizes the columns of `g` (modified Gram–Schmidt, two passes).
/// The triangular factor's diagonal is real positive by construction, which
/// fixes the phase ambiguity of the QR factorization.
fn unitary_from(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = g.rows();
    let mut cols: Vec<ComplexVector> = (0..g.cols()).map(|j| g.column(j)).collect();
    for j in 0..cols.len() {
        for _pass in 0..2 {
            for i in 0..j {
                let proj = cols[j].inner(&cols[i]);
                let qi = cols[i].clone();
                for k in 0..n {
                    cols[j][k] -= proj * qi[k];
                }
            }
        }
        cols[j] = cols[j]
            .normalized()
            .ok_or(Error::NumericalFailure("rank-deficient Ginibre sample"))?;
    }
    ComplexMatrix::from_columns(&cols)
}

fn unitary_from_rng(rng: &mut ChaCha8Rng, n: usize) -> Result<ComplexMatrix> {
    unitary_from(&ginibre_from(rng, n))
}

/// `U diag(d) U*`.
fn conjugate_diagonal(u: &ComplexMatrix, d: &[Complex64]) -> ComplexMatrix {
    let n = u.rows();
    ComplexMatrix::from_fn(n, n, |i, j| (0..n).map(|k| u[(i, k)] * d[k] * u[(j, k)].conj()).sum())
}

fn real_diag(d: &[f64]) -> Vec<Complex64> {
    d.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Positive spectrum in `[scale/cond_cap, scale]`, with `a_1 = 0` when `singular`.
fn positive_spectrum(rng: &mut ChaCha8Rng, cfg: &GenConfig, singular: bool) -> Vec<f64> {
    let lo = cfg.spectrum_scale / cfg.cond_cap;
    let hi = cfg.spectrum_scale;
    (0..cfg.dim)
        .map(|i| {
            if singular && i == 0 {
                0.0
            } else {
                rng.random_range(lo..=hi)
            }
        })
        .collect()
}

/// Ginibre matrix: i.i.d. complex standard normal entries (`E|z|² = 1`).
pub fn random_ginibre(cfg: &GenConfig) -> Result<ComplexMatrix> {
    cfg.validate()?;
    Ok(ginibre_from(&mut cfg.rng(), cfg.dim))
}

/// Haar-distributed unitary from the QR factorization of a Ginibre sample.
pub fn random_unitary(cfg: &GenConfig) -> Result<ComplexMatrix> {
    cfg.validate()?;
    unitary_from_rng(&mut cfg.rng(), cfg.dim)
}

/// `A = U diag(a) U*` with `a_i ∈ [scale/cond_cap, scale]`; when
/// `allow_singular`, `a_1 = 0` with probability 1/2.
pub fn random_positive(cfg: &GenConfig, allow_singular: bool) -> Result<ComplexMatrix> {
    cfg.validate()?;
    let mut rng = cfg.rng();
    let u = unitary_from_rng(&mut rng, cfg.dim)?;
    let singular = allow_singular && rng.random_bool(0.5);
    let a = positive_spectrum(&mut rng, cfg, singular);
    Ok(conjugate_diagonal(&u, &real_diag(&a)).hermitian_part())
}

/// Random Hermitian `(G + G*)/2 · scale`.
fn random_hermitian(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> ComplexMatrix {
    ginibre_from(rng, cfg.dim).hermitian_part().scale(cfg.spectrum_scale)
}

struct Draw {
    a: ComplexMatrix,
    k: ComplexMatrix,
    strategy: Strategy,
    singular_a: bool,
}

/// `A⁻¹ X` for `A = U diag(a) U*` with all `a_i > 0`.
fn inverse_times(u: &ComplexMatrix, a: &[f64], x: &ComplexMatrix) -> ComplexMatrix {
    let inv: Vec<f64> = a.iter().map(|&v| 1.0 / v).collect();
    &conjugate_diagonal(u, &real_diag(&inv)) * x
}

fn draw_selfadjoint(cfg: &GenConfig) -> Result<Draw> {
    let mut rng = cfg.rng();
    let u = unitary_from_rng(&mut rng, cfg.dim)?;
    if rng.random_bool(0.5) {
        let a = positive_spectrum(&mut rng, cfg, false);
        let s = random_hermitian(&mut rng, cfg);
        Ok(Draw {
            a: conjugate_diagonal(&u, &real_diag(&a)).hermitian_part(),
            k: inverse_times(&u, &a, &s),
            strategy: Strategy::Inverse,
            singular_a: false,
        })
    } else {
        let singular = rng.random_bool(0.5);
        let a = positive_spectrum(&mut rng, cfg, singular);
        let k: Vec<f64> = (0..cfg.dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        Ok(Draw {
            a: conjugate_diagonal(&u, &real_diag(&a)).hermitian_part(),
            k: conjugate_diagonal(&u, &real_diag(&k)).hermitian_part(),
            strategy: Strategy::Commuting,
            singular_a: singular,
        })
    }
}

fn draw_normal(cfg: &GenConfig) -> Result<Draw> {
    let mut rng = cfg.rng();
    let u = unitary_from_rng(&mut rng, cfg.dim)?;
    if rng.random_bool(0.5) {
        let a = positive_spectrum(&mut rng, cfg, false);
        let w = unitary_from_rng(&mut rng, cfg.dim)?;
        let z: Vec<Complex64> = (0..cfg.dim)
            .map(|_| complex_normal(&mut rng) * cfg.spectrum_scale)
            .collect();
        let n = conjugate_diagonal(&w, &z);
        Ok(Draw {
            a: conjugate_diagonal(&u, &real_diag(&a)).hermitian_part(),
            k: inverse_times(&u, &a, &n),
            strategy: Strategy::Inverse,
            singular_a: false,
        })
    } else {
        let singular = rng.random_bool(0.5);
        let a = positive_spectrum(&mut rng, cfg, singular);
        let z: Vec<Complex64> = (0..cfg.dim).map(|_| complex_normal(&mut rng)).collect();
        Ok(Draw {
            a: conjugate_diagonal(&u, &real_diag(&a)).hermitian_part(),
            k: conjugate_diagonal(&u, &z),
            strategy: Strategy::Commuting,
            singular_a: singular,
        })
    }
}

/// Draws with `draw`, post-checks with `defect` against
/// `CLASS_CHECK_RTOL · max(1, ‖AK‖)`, resamples once on failure.
fn checked(
    cfg: &GenConfig,
    class: HypothesisClass,
    draw: fn(&GenConfig) -> Result<Draw>,
    defect: fn(&ComplexMatrix) -> Result<f64>,
) -> Result<GeneratedPair> {
    cfg.validate()?;
    for attempt in [*cfg, cfg.child(0)] {
        let d = draw(&attempt)?;
        let product = &d.a * &d.k;
        let class_defect = defect(&product)?;
        let limit = CLASS_CHECK_RTOL * TolerancePolicy::scale(operator_norm(&product)?);
        if class_defect <= limit {
            return Ok(GeneratedPair {
                a: d.a,
                k: d.k,
                class,
                strategy: d.strategy,
                singular_a: d.singular_a,
                class_defect,
                note: None,
            });
        }
    }
    Err(Error::NumericalFailure(
        "generated pair failed its class post-check twice",
    ))
}

fn selfadjoint_defect(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_defect(m))
}

fn normal_defect(m: &ComplexMatrix) -> Result<f64> {
    Ok(normality_defect(m)?.norm)
}

/// `(A, K)` with `A` positive and `AK` self-adjoint.
pub fn pair_selfadjoint_product(cfg: &GenConfig) -> Result<GeneratedPair> {
    checked(cfg, HypothesisClass::SelfAdjoint, draw_selfadjoint, selfadjoint_defect)
}

/// `(A, K)` with `A` positive and `AK` normal.
pub fn pair_normal_product(cfg: &GenConfig) -> Result<GeneratedPair> {
    checked(cfg, HypothesisClass::Normal, draw_normal, normal_defect)
}

/// `(A, K)` with `A` positive and `(AK)*` hyponormal.
///
/// Delegates to [`pair_normal_product`]; see [`COHYPONORMAL_NOTE`].
pub fn pair_cohyponormal_product(cfg: &GenConfig) -> Result<GeneratedPair> {
    let mut pair = pair_normal_product(cfg)?;
    let product = pair.product();
    let tol = TolerancePolicy::new(0.0, CLASS_CHECK_RTOL)?;
    if !is_cohyponormal(&product, &tol)?.holds {
        return Err(Error::NumericalFailure(
            "normal product failed the co-hyponormality check",
        ));
    }
    pair.class = HypothesisClass::CoHyponormal;
    pair.note = Some(COHYPONORMAL_NOTE);
    Ok(pair)
}

/// `0 <= X <= Y` with `X = random_positive(cfg, true)` and `Y = X + G*G`
/// for an independent Ginibre `G`.
pub fn ordered_positive_pair(cfg: &GenConfig) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let x = random_positive(cfg, true)?;
    let g = random_ginibre(&cfg.child(1))?;
    let y = x.try_add(&g.adjoint().try_mul(&g)?)?.hermitian_part();
    Ok((x, y))
}

/// Uniformly distributed unit vector.
pub fn random_unit_vector(cfg: &GenConfig) -> Result<ComplexVector> {
    cfg.validate()?;
    let mut rng = cfg.rng();
    loop {
        let v = ComplexVector::new((0..cfg.dim).map(|_| complex_normal(&mut rng)).collect())?;
        if let Some(u) = v.normalized() {
            return Ok(u);
        }
    }
}

/// Dispatches on the hypothesis class.
pub fn generate_pair(class: HypothesisClass, cfg: &GenConfig) -> Result<GeneratedPair> {
    match class {
        HypothesisClass::SelfAdjoint => pair_selfadjoint_product(cfg),
        HypothesisClass::Normal => pair_normal_product(cfg),
        HypothesisClass::CoHyponormal => pair_cohyponormal_product(cfg),
    }
}
