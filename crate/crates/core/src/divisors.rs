//! Topological divisors of zero.
//!
//! For a singular matrix z with unit kernel vector v, the constant sequence
//! zₙ = v·wᵀ (w a fixed unit vector) has ‖zₙ‖_F = 1 and z·zₙ = (z·v)·wᵀ ≈ θ.
//! Under the induced norm μ(zₙ, t) = t/(t+1), so zₙ stays outside B(θ, r, t)
//! exactly when t/(t+1) ≤ 1 − r. Witnesses are built from the kernel, never
//! searched for, so near-singular invertible matrices are never reported.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, DirectInverse, ModelKind};
use crate::convergence::{trace_indices, TracePoint};
use crate::error::{Error, Result};
use crate::if_norm::{check_radius, check_time, IFNormModel};
use crate::sampling::{seeded, uniform_element};

/// Relative bound on ‖z·zₙ‖ accepted from the elimination kernel.
pub const KERNEL_TOL: f64 = 1e-10;
/// Distance of the final decay value from (1, 0).
pub const DECAY_TOLERANCE: f64 = 0.01;
pub const REPLAY_TOL: f64 = 1e-12;
pub const DEFAULT_R: f64 = 0.4;
pub const DEFAULT_T: f64 = 1.0;
pub const DEFAULT_HORIZON: usize = 100;

const OUTSIDE_NOTE: &str =
    "outside the ball is taken as mu <= 1 - r or nu >= r, the negation of ball membership";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// z·zₙ → θ.
    Left,
    /// zₙ·z → θ.
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TdzSequenceRule {
    /// zₙ = v·wᵀ for every n.
    KernelOuterProduct { v: Vec<f64>, w: Vec<f64> },
    /// zₙ = value for every n.
    ScalarConstant { value: f64 },
}

impl TdzSequenceRule {
    pub fn term(&self, model: ModelKind, _n: usize) -> Result<AlgebraElement> {
        match self {
            TdzSequenceRule::ScalarConstant { value } => AlgebraElement::scalar(*value),
            TdzSequenceRule::KernelOuterProduct { v, w } => {
                let data = v
                    .iter()
                    .flat_map(|a| w.iter().map(move |b| a * b))
                    .collect();
                AlgebraElement::new(model, data)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TDZWitness {
    pub z: AlgebraElement,
    pub side: Side,
    pub sequence_rule: TdzSequenceRule,
    pub r: f64,
    pub t: f64,
    pub horizon: usize,
    /// (n, μ, ν) of the product z·zₙ or zₙ·z.
    pub decay_trace: Vec<TracePoint>,
    /// (n, μ, ν) of zₙ.
    pub separation_trace: Vec<TracePoint>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TdzOutcome {
    Found(TDZWitness),
    NotFound { reason: String },
}

impl TdzOutcome {
    pub fn witness(&self) -> Option<&TDZWitness> {
        match self {
            TdzOutcome::Found(w) => Some(w),
            TdzOutcome::NotFound { .. } => None,
        }
    }
}

fn not_found(reason: impl Into<String>) -> TdzOutcome {
    TdzOutcome::NotFound {
        reason: reason.into(),
    }
}

fn product(z: &AlgebraElement, zn: &AlgebraElement, side: Side) -> Result<AlgebraElement> {
    match side {
        Side::Left => z.mul(zn),
        Side::Right => zn.mul(z),
    }
}

struct Traces {
    decay: Vec<TracePoint>,
    separation: Vec<TracePoint>,
    max_product_norm: f64,
}

fn traces(
    model: &IFNormModel,
    z: &AlgebraElement,
    side: Side,
    rule: &TdzSequenceRule,
    t: f64,
    horizon: usize,
) -> Result<Traces> {
    let mut decay = Vec::new();
    let mut separation = Vec::new();
    let mut max_product_norm: f64 = 0.0;
    for n in trace_indices(horizon, None) {
        let zn = rule.term(z.model(), n)?;
        let p = product(z, &zn, side)?;
        max_product_norm = max_product_norm.max(p.crisp_norm());
        let d = model.membership(&p, t)?;
        decay.push(TracePoint {
            n,
            mu: d.mu,
            nu: d.nu,
        });
        let s = model.membership(&zn, t)?;
        separation.push(TracePoint {
            n,
            mu: s.mu,
            nu: s.nu,
        });
    }
    Ok(Traces {
        decay,
        separation,
        max_product_norm,
    })
}

fn separated(p: &TracePoint, r: f64) -> bool {
    p.mu <= 1.0 - r || p.nu >= r
}

fn decays(trace: &[TracePoint]) -> bool {
    trace
        .last()
        .is_some_and(|p| 1.0 - p.mu <= DECAY_TOLERANCE && p.nu <= DECAY_TOLERANCE)
}

/// Witness with the left product z·zₙ.
pub fn find_tdz_witness(
    model: &IFNormModel,
    z: &AlgebraElement,
    r: f64,
    t: f64,
    horizon: usize,
) -> Result<TdzOutcome> {
    find_tdz_witness_on(model, z, r, t, horizon, Side::Left)
}

/// Builds a witness from the kernel of z (left side) or of zᵀ (right side).
pub fn find_tdz_witness_on(
    model: &IFNormModel,
    z: &AlgebraElement,
    r: f64,
    t: f64,
    horizon: usize,
    side: Side,
) -> Result<TdzOutcome> {
    check_radius("r", r)?;
    check_time("t", t)?;
    if horizon == 0 {
        return Err(Error::domain("horizon", 0.0, "must be at least 1"));
    }
    model.owns(z)?;
    let rule = match z.model() {
        ModelKind::Scalar => {
            if z.data()[0] != 0.0 {
                return Ok(not_found("z is invertible"));
            }
            TdzSequenceRule::ScalarConstant { value: 1.0 }
        }
        ModelKind::Matrix { n } => {
            if let DirectInverse::Invertible(_) = z.direct_inverse()? {
                return Ok(not_found("z is invertible"));
            }
            let kernel = match side {
                Side::Left => z.kernel_vector(),
                Side::Right => z.transpose().kernel_vector(),
            };
            let Some(k) = kernel else {
                return Ok(not_found("elimination found no kernel vector"));
            };
            let mut fixed = vec![0.0; n];
            fixed[0] = 1.0;
            match side {
                Side::Left => TdzSequenceRule::KernelOuterProduct { v: k, w: fixed },
                Side::Right => TdzSequenceRule::KernelOuterProduct { v: fixed, w: k },
            }
        }
        other => {
            return Err(Error::Unsupported(format!(
                "divisor-of-zero witnesses are built for scalar and matrix models, not {other}"
            )))
        }
    };

    let tr = traces(model, z, side, &rule, t, horizon)?;
    if tr.max_product_norm > KERNEL_TOL * z.crisp_norm().max(f64::MIN_POSITIVE) && !z.is_zero() {
        return Ok(not_found(format!(
            "kernel product norm {:e} exceeds tolerance",
            tr.max_product_norm
        )));
    }
    if !tr.separation.iter().all(|p| separated(p, r)) {
        return Ok(not_found(format!(
            "unit-norm terms lie inside B(theta, {r}, {t}): mu = t/(t+1) > 1 - r"
        )));
    }
    if !decays(&tr.decay) {
        return Ok(not_found("product degrees do not reach (1, 0)"));
    }
    Ok(TdzOutcome::Found(TDZWitness {
        z: z.clone(),
        side,
        sequence_rule: rule,
        r,
        t,
        horizon,
        decay_trace: tr.decay,
        separation_trace: tr.separation,
        note: OUTSIDE_NOTE.into(),
    }))
}

impl TDZWitness {
    /// Recomputes both traces from z and the sequence rule and rechecks the
    /// separation and decay conditions.
    pub fn replay(&self, model: &IFNormModel) -> Result<bool> {
        let tr = traces(
            model,
            &self.z,
            self.side,
            &self.sequence_rule,
            self.t,
            self.horizon,
        )?;
        let close = |a: &[TracePoint], b: &[TracePoint]| {
            a.len() == b.len()
                && a.iter().zip(b).all(|(p, q)| {
                    p.n == q.n
                        && (p.mu - q.mu).abs() <= REPLAY_TOL
                        && (p.nu - q.nu).abs() <= REPLAY_TOL
                })
        };
        Ok(close(&tr.decay, &self.decay_trace)
            && close(&tr.separation, &self.separation_trace)
            && tr.separation.iter().all(|p| separated(p, self.r))
            && decays(&tr.decay))
    }

    /// ‖z·z₁‖ (or ‖z₁·z‖ for the right side).
    pub fn product_norm(&self) -> Result<f64> {
        let z1 = self.sequence_rule.term(self.z.model(), 1)?;
        Ok(product(&self.z, &z1, self.side)?.crisp_norm())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdzPopulationReport {
    pub model: String,
    pub seed: u64,
    pub samples: usize,
    pub r: f64,
    pub t: f64,
    pub dense: usize,
    /// Rank-deficient by construction.
    pub constructed_singular: usize,
    pub witnesses: usize,
    pub non_invertible: usize,
    /// Elements with a witness that the oracle nevertheless inverts.
    pub violations: Vec<AlgebraElement>,
}

impl TdzPopulationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A·D·B with D diagonal and one zero entry.
fn rank_deficient(rng: &mut impl Rng, model: ModelKind, n: usize) -> AlgebraElement {
    let a = uniform_element(rng, model, -1.0, 1.0);
    let b = uniform_element(rng, model, -1.0, 1.0);
    let zero_at = rng.random_range(0..n);
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            if i == zero_at {
                0.0
            } else {
                rng.random_range(0.5..2.0)
            }
        })
        .collect();
    let d = AlgebraElement::diagonal(&diag).expect("finite");
    a.mul(&d).and_then(|ad| ad.mul(&b)).expect("same model")
}

/// Mixed dense and rank-deficient matrices: every element with a witness
/// must be non-invertible.
pub fn verify_tdz_subset_singular(
    model: &IFNormModel,
    sample_count: usize,
    seed: u64,
) -> Result<TdzPopulationReport> {
    verify_tdz_population(model, sample_count, seed, 0.5)
}

/// As [`verify_tdz_subset_singular`], with the fraction of rank-deficient draws.
pub fn verify_tdz_population(
    model: &IFNormModel,
    sample_count: usize,
    seed: u64,
    singular_fraction: f64,
) -> Result<TdzPopulationReport> {
    let ModelKind::Matrix { n } = model.kind() else {
        return Err(Error::Unsupported(format!(
            "population check runs on matrix models, not {}",
            model.kind()
        )));
    };
    if !(0.0..=1.0).contains(&singular_fraction) {
        return Err(Error::domain(
            "singular_fraction",
            singular_fraction,
            "must lie in [0,1]",
        ));
    }
    let kind = model.kind();
    let mut rng = seeded(seed);
    let (mut dense, mut constructed_singular, mut witnesses, mut non_invertible) = (0, 0, 0, 0);
    let mut violations = Vec::new();
    for _ in 0..sample_count {
        let z = if rng.random::<f64>() < singular_fraction {
            constructed_singular += 1;
            rank_deficient(&mut rng, kind, n)
        } else {
            dense += 1;
            uniform_element(&mut rng, kind, -1.0, 1.0)
        };
        let invertible = z.direct_inverse()?.is_invertible();
        if !invertible {
            non_invertible += 1;
        }
        if find_tdz_witness(model, &z, DEFAULT_R, DEFAULT_T, DEFAULT_HORIZON)?
            .witness()
            .is_some()
        {
            witnesses += 1;
            if invertible {
                violations.push(z);
            }
        }
    }
    Ok(TdzPopulationReport {
        model: kind.to_string(),
        seed,
        samples: sample_count,
        r: DEFAULT_R,
        t: DEFAULT_T,
        dense,
        constructed_singular,
        witnesses,
        non_invertible,
        violations,
    })
}
