//! Series inversion and probes of the invertible set.
//!
//! The Neumann series (e − x)⁻¹ = e + x + x² + … is gated by the crisp
//! condition ‖x‖ < 1. Fuzzy-ball membership of x is reported alongside as a
//! certificate but never used to decide convergence, since a ball with large
//! t admits elements of arbitrarily large norm.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, DirectInverse, ModelKind};
use crate::error::{Error, Result};
use crate::if_norm::{
    check_radius, check_time, crisp_ball_radius, BallSpec, FuzzyDegreePair, IFNormModel,
};
use crate::sampling::{log_uniform, seeded, uniform_element, uniform_in_ball, unit_direction};

pub const DEFAULT_MAX_TERMS: usize = 100_000;
/// Consecutive non-decreasing term norms that count as divergence.
pub const DIVERGENCE_WINDOW: usize = 8;
/// Draws allowed when a perturbed sample lands on a non-invertible element.
pub const RESAMPLE_BUDGET: usize = 32;
/// Fraction of the radius bound used by the openness probe.
pub const OPENNESS_SAFETY: f64 = 0.95;
/// Relative crisp distance range of continuity-probe samples.
pub const CONTINUITY_DISTANCE: (f64, f64) = (1e-4, 1.0);
pub const MAX_COUNTEREXAMPLES: usize = 20;
/// Terms generated per sequence by the closed-set check.
pub const CLOSED_CHECK_TERMS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyCertificate {
    pub r: f64,
    pub t: f64,
    pub ball_member: bool,
}

/// `norm_x` is the norm of the series ratio: x for the Neumann series,
/// e − x when inverting x, and x/λ for the resolvent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrispCertificate {
    pub norm_x: f64,
    pub contractive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeumannResult {
    pub approx_inverse: AlgebraElement,
    pub terms_used: usize,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fuzzy_certificate: Option<FuzzyCertificate>,
    pub crisp_certificate: CrispCertificate,
}

fn require_unital(model: &IFNormModel, op: &str) -> Result<()> {
    if model.algebra.is_unital() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{op} needs a unital model, got {}",
            model.kind()
        )))
    }
}

fn check_series_args(tol: f64, max_terms: usize) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain("tol", tol, "must be a positive finite real"));
    }
    if max_terms == 0 {
        return Err(Error::domain("max_terms", 0.0, "must be at least 1"));
    }
    Ok(())
}

/// e + q + q² + … with the tail rule described on [`neumann_inverse`].
fn geometric_sum(
    q: &AlgebraElement,
    tol: f64,
    max_terms: usize,
) -> Result<(AlgebraElement, usize)> {
    let e = AlgebraElement::unit(q.model())?;
    let qn = q.crisp_norm();
    let contractive = qn < 1.0;
    let mut sum = e.clone();
    let mut term = e;
    let mut terms = 1;
    let mut prev = term.crisp_norm();
    let mut trace = vec![prev];
    let mut rising = 0;
    while terms < max_terms {
        let next = term.mul(q)?;
        let nn = next.crisp_norm();
        if !nn.is_finite() {
            return Err(Error::Diverged {
                terms,
                last_norm: nn,
                trace,
            });
        }
        if nn == 0.0 {
            break;
        }
        // For ‖q‖ ≥ 1 the observed ratio stands in for ‖q‖ in the tail bound.
        let ratio = if contractive { qn } else { nn / prev };
        if ratio < 1.0 && nn < tol * (1.0 - ratio) {
            break;
        }
        if nn >= prev {
            rising += 1;
            if !contractive && rising >= DIVERGENCE_WINDOW {
                trace.push(nn);
                return Err(Error::Diverged {
                    terms,
                    last_norm: nn,
                    trace,
                });
            }
        } else {
            rising = 0;
        }
        sum = sum.add(&next)?;
        term = next;
        prev = nn;
        terms += 1;
        trace.push(nn);
    }
    Ok((sum, terms))
}

/// Partial sums e + x + x² + … of (e − x)⁻¹.
///
/// Summation stops once the next term's norm falls below tol·(1 − ‖x‖), which
/// bounds the geometric tail by tol, or when the next term is exactly θ, or at
/// `max_terms`. When ‖x‖ ≥ 1 and term norms fail to decrease for
/// [`DIVERGENCE_WINDOW`] consecutive terms the sum is abandoned.
pub fn neumann_inverse(
    model: &IFNormModel,
    x: &AlgebraElement,
    tol: f64,
    max_terms: usize,
    ball: Option<&BallSpec>,
) -> Result<NeumannResult> {
    require_unital(model, "neumann_inverse")?;
    model.owns(x)?;
    check_series_args(tol, max_terms)?;
    let fuzzy_certificate = match ball {
        Some(b) => Some(FuzzyCertificate {
            r: b.r,
            t: b.t,
            ball_member: model.in_open_ball(b, x)?,
        }),
        None => None,
    };
    let (approx, terms_used) = geometric_sum(x, tol, max_terms)?;
    let e = AlgebraElement::unit(x.model())?;
    let residual = e.sub(x)?.mul(&approx)?.sub(&e)?.crisp_norm();
    let norm_x = x.crisp_norm();
    Ok(NeumannResult {
        approx_inverse: approx,
        terms_used,
        residual,
        fuzzy_certificate,
        crisp_certificate: CrispCertificate {
            norm_x,
            contractive: norm_x < 1.0,
        },
    })
}

/// x⁻¹ = e + Σ (e − x)ⁿ. The residual reported is ‖x·approx − e‖.
pub fn inverse_via_neumann(
    model: &IFNormModel,
    x: &AlgebraElement,
    tol: f64,
    max_terms: usize,
) -> Result<NeumannResult> {
    require_unital(model, "inverse_via_neumann")?;
    model.owns(x)?;
    let e = AlgebraElement::unit(x.model())?;
    let mut out = neumann_inverse(model, &e.sub(x)?, tol, max_terms, None)?;
    out.residual = x.mul(&out.approx_inverse)?.sub(&e)?.crisp_norm();
    Ok(out)
}

/// (λe − x)⁻¹ = Σ_{n≥1} λ⁻ⁿ xⁿ⁻¹ with x⁰ = e, i.e. λ⁻¹ times the Neumann sum of x/λ.
/// The residual reported is ‖(λe − x)·approx − e‖.
pub fn resolvent_inverse(
    model: &IFNormModel,
    x: &AlgebraElement,
    lambda: f64,
    tol: f64,
    max_terms: usize,
) -> Result<NeumannResult> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::domain(
            "lambda",
            lambda,
            "must be a nonzero finite real",
        ));
    }
    require_unital(model, "resolvent_inverse")?;
    model.owns(x)?;
    check_series_args(tol, max_terms)?;
    let q = x.scale(1.0 / lambda);
    let (sum, terms_used) = geometric_sum(&q, tol, max_terms)?;
    let approx = sum.scale(1.0 / lambda);
    let e = AlgebraElement::unit(x.model())?;
    let residual = e.scale(lambda).sub(x)?.mul(&approx)?.sub(&e)?.crisp_norm();
    let norm_q = q.crisp_norm();
    Ok(NeumannResult {
        approx_inverse: approx,
        terms_used,
        residual,
        fuzzy_certificate: None,
        crisp_certificate: CrispCertificate {
            norm_x: norm_q,
            contractive: norm_q < 1.0,
        },
    })
}

fn invertible_centre(x0: &AlgebraElement) -> Result<AlgebraElement> {
    match x0.direct_inverse()? {
        DirectInverse::Invertible(inv) => Ok(inv),
        DirectInverse::NonInvertible => Err(Error::Precondition(format!(
            "centre {x0} is not invertible"
        ))),
    }
}

/// Singular elements obtained from x0 by a rank-one deflation: x0 − (x0·v)vᵀ
/// for standard basis vectors v (matrices), the constant coefficient set to
/// zero (series), and 0 itself (scalars).
fn deflation_candidates(x0: &AlgebraElement) -> Vec<AlgebraElement> {
    match x0.model() {
        ModelKind::Scalar => vec![AlgebraElement::zero(ModelKind::Scalar)],
        ModelKind::TruncatedSeries { .. } => {
            let mut d = x0.data().to_vec();
            d[0] = 0.0;
            vec![AlgebraElement::new(x0.model(), d).expect("finite")]
        }
        ModelKind::Matrix { n } => (0..n)
            .map(|j| {
                let mut d = x0.data().to_vec();
                for i in 0..n {
                    d[i * n + j] = 0.0;
                }
                AlgebraElement::new(x0.model(), d).expect("finite")
            })
            .collect(),
        ModelKind::NullProduct { .. } => Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpennessReport {
    pub x0: AlgebraElement,
    pub t: f64,
    pub seed: u64,
    pub sample_law: String,
    /// min{μ(x0⁻¹, t), 1 − ν(x0⁻¹, t)} clamped into (0, 1).
    pub r_star: f64,
    pub r: f64,
    pub crisp_radius: f64,
    /// The probed radius is not below the bound.
    pub exceeds_bound: bool,
    pub samples: usize,
    pub invertible: usize,
    pub non_invertible: usize,
    /// Singular deflations of x0 that fall inside the ball.
    pub targeted_inside: usize,
    pub counterexamples: Vec<AlgebraElement>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl OpennessReport {
    pub fn holds(&self) -> bool {
        self.non_invertible == 0 && self.targeted_inside == 0
    }
}

/// Samples B(x0, 0.95·r*, t) and checks every draw is invertible.
pub fn invertible_ball_probe(
    model: &IFNormModel,
    x0: &AlgebraElement,
    t: f64,
    sample_count: usize,
    seed: u64,
) -> Result<OpennessReport> {
    invertible_ball_probe_at(model, x0, t, None, sample_count, seed)
}

/// As [`invertible_ball_probe`], with an optional radius overriding 0.95·r*.
pub fn invertible_ball_probe_at(
    model: &IFNormModel,
    x0: &AlgebraElement,
    t: f64,
    r: Option<f64>,
    sample_count: usize,
    seed: u64,
) -> Result<OpennessReport> {
    require_unital(model, "invertible_ball_probe")?;
    model.owns(x0)?;
    check_time("t", t)?;
    if sample_count == 0 {
        return Err(Error::domain("samples", 0.0, "must be at least 1"));
    }
    let inv = invertible_centre(x0)?;
    let d = model.membership(&inv, t)?;
    let r_star =
        d.mu.min(1.0 - d.nu)
            .clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
    let r = match r {
        Some(r) => {
            check_radius("r", r)?;
            r
        }
        None => OPENNESS_SAFETY * r_star,
    };
    let rho = crisp_ball_radius(r, t);
    let mut rng = seeded(seed);
    let mut invertible = 0;
    let mut non_invertible = 0;
    let mut counterexamples = Vec::new();
    for _ in 0..sample_count {
        let y = uniform_in_ball(&mut rng, x0, rho);
        if y.direct_inverse()?.is_invertible() {
            invertible += 1;
        } else {
            non_invertible += 1;
            if counterexamples.len() < MAX_COUNTEREXAMPLES {
                counterexamples.push(y);
            }
        }
    }
    let mut targeted_inside = 0;
    for c in deflation_candidates(x0) {
        if c.sub(x0)?.crisp_norm() < rho && !c.direct_inverse()?.is_invertible() {
            targeted_inside += 1;
            if counterexamples.len() < MAX_COUNTEREXAMPLES {
                counterexamples.push(c);
            }
        }
    }
    let exceeds_bound = r >= r_star;
    let note = if exceeds_bound {
        Some("radius exceeds the bound r*".to_string())
    } else if t > 1.0 {
        Some("for t > 1 the bound r* no longer keeps the crisp radius below 1/‖x0⁻¹‖".to_string())
    } else {
        None
    };
    Ok(OpennessReport {
        x0: x0.clone(),
        t,
        seed,
        sample_law: "uniform in the crisp ball of radius t·r/(1−r) plus rank-one deflations of x0"
            .into(),
        r_star,
        r,
        crisp_radius: rho,
        exceeds_bound,
        samples: sample_count,
        invertible,
        non_invertible,
        targeted_inside,
        counterexamples,
        note,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedSetReport {
    pub model: String,
    pub seed: u64,
    pub sequences: usize,
    pub terms_per_sequence: usize,
    /// Generated terms the oracle found invertible (a generator fault).
    pub generator_faults: usize,
    pub singular_limits: usize,
    pub invertible_limits: Vec<AlgebraElement>,
}

impl ClosedSetReport {
    pub fn holds(&self) -> bool {
        self.generator_faults == 0 && self.invertible_limits.is_empty()
    }
}

/// A singular limit z and a singular perturbation direction p; terms are z + p/n.
fn singular_family(rng: &mut impl Rng, model: ModelKind) -> (AlgebraElement, AlgebraElement) {
    match model {
        ModelKind::Scalar => {
            let z = AlgebraElement::zero(model);
            (z.clone(), z)
        }
        ModelKind::TruncatedSeries { .. } => {
            let mut z = uniform_element(rng, model, -1.0, 1.0).data().to_vec();
            let mut p = uniform_element(rng, model, -1.0, 1.0).data().to_vec();
            z[0] = 0.0;
            p[0] = 0.0;
            (
                AlgebraElement::new(model, z).expect("finite"),
                AlgebraElement::new(model, p).expect("finite"),
            )
        }
        ModelKind::Matrix { n } => {
            // Right-multiplying by a matrix with a zero column j keeps e_j in the kernel.
            let j = rng.random_range(0..n);
            let kill = |m: AlgebraElement| {
                let mut d = m.data().to_vec();
                for i in 0..n {
                    d[i * n + j] = 0.0;
                }
                AlgebraElement::new(model, d).expect("finite")
            };
            let a = uniform_element(rng, model, -1.0, 1.0);
            let b = uniform_element(rng, model, -1.0, 1.0);
            let c = uniform_element(rng, model, -1.0, 1.0);
            let z = a.mul(&kill(c.clone())).expect("same model");
            let p = b.mul(&kill(c)).expect("same model");
            (z, p)
        }
        ModelKind::NullProduct { .. } => unreachable!("rejected as non-unital"),
    }
}

/// Limits of sequences inside the non-invertible set stay non-invertible.
pub fn closed_noninvertible_check(
    model: &IFNormModel,
    sample_count: usize,
    seed: u64,
) -> Result<ClosedSetReport> {
    require_unital(model, "closed_noninvertible_check")?;
    let kind = model.kind();
    let mut rng = seeded(seed);
    let mut generator_faults = 0;
    let mut singular_limits = 0;
    let mut invertible_limits = Vec::new();
    for _ in 0..sample_count {
        let (z, p) = singular_family(&mut rng, kind);
        for n in 1..=CLOSED_CHECK_TERMS {
            let zn = z.add(&p.scale(1.0 / n as f64))?;
            if zn.direct_inverse()?.is_invertible() {
                generator_faults += 1;
            }
        }
        if z.direct_inverse()?.is_invertible() {
            if invertible_limits.len() < MAX_COUNTEREXAMPLES {
                invertible_limits.push(z);
            }
        } else {
            singular_limits += 1;
        }
    }
    Ok(ClosedSetReport {
        model: kind.to_string(),
        seed,
        sequences: sample_count,
        terms_per_sequence: CLOSED_CHECK_TERMS,
        generator_faults,
        singular_limits,
        invertible_limits,
    })
}

/// Both sides of the continuity inequality for one x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityEval {
    /// (μ, ν)(x⁻¹ − x0⁻¹, ε).
    pub lhs_pair: FuzzyDegreePair,
    /// (μ, ν)(x − x0, ε/4).
    pub rhs_pair: FuzzyDegreePair,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityCounterexample {
    pub x: AlgebraElement,
    pub lhs_pair: FuzzyDegreePair,
    pub rhs_pair: FuzzyDegreePair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityProbeReport {
    pub x0: AlgebraElement,
    pub epsilon: f64,
    pub seed: u64,
    pub sample_law: String,
    pub samples: usize,
    pub holds_count: usize,
    pub fails_count: usize,
    /// The inequality at x = x0.
    pub identity_case: ContinuityEval,
    /// First failures in sample order, at most [`MAX_COUNTEREXAMPLES`].
    pub counterexamples: Vec<ContinuityCounterexample>,
}

impl ContinuityProbeReport {
    pub fn satisfaction_rate(&self) -> f64 {
        self.holds_count as f64 / self.samples as f64
    }
}

fn continuity_eval_with(
    model: &IFNormModel,
    x0: &AlgebraElement,
    x0_inv: &AlgebraElement,
    x: &AlgebraElement,
    epsilon: f64,
) -> Result<Option<ContinuityEval>> {
    let Some(x_inv) = x.direct_inverse()?.into_option() else {
        return Ok(None);
    };
    let lhs = model.membership(&x_inv.sub(x0_inv)?, epsilon)?;
    let rhs = model.membership(&x.sub(x0)?, epsilon / 4.0)?;
    Ok(Some(ContinuityEval {
        lhs_pair: lhs,
        rhs_pair: rhs,
        holds: lhs.mu >= rhs.mu && lhs.nu <= rhs.nu,
    }))
}

/// μ(x⁻¹ − x0⁻¹, ε) ≥ μ(x − x0, ε/4) and ν(x⁻¹ − x0⁻¹, ε) ≤ ν(x − x0, ε/4).
pub fn continuity_eval(
    model: &IFNormModel,
    x0: &AlgebraElement,
    x: &AlgebraElement,
    epsilon: f64,
) -> Result<ContinuityEval> {
    require_unital(model, "continuity probe")?;
    model.owns(x0)?;
    model.owns(x)?;
    check_time("epsilon", epsilon)?;
    let x0_inv = invertible_centre(x0)?;
    continuity_eval_with(model, x0, &x0_inv, x, epsilon)?
        .ok_or_else(|| Error::Precondition(format!("{x} is not invertible")))
}

/// Evaluates the continuity inequality at invertible x near x0, with crisp
/// distance log-uniform in [1e−4, 1]·‖x0‖ along a uniform direction.
pub fn inversion_continuity_probe(
    model: &IFNormModel,
    x0: &AlgebraElement,
    epsilon: f64,
    sample_count: usize,
    seed: u64,
) -> Result<ContinuityProbeReport> {
    require_unital(model, "inversion_continuity_probe")?;
    model.owns(x0)?;
    check_time("epsilon", epsilon)?;
    if sample_count == 0 {
        return Err(Error::domain("samples", 0.0, "must be at least 1"));
    }
    let x0_inv = invertible_centre(x0)?;
    let identity_case =
        continuity_eval_with(model, x0, &x0_inv, x0, epsilon)?.expect("x0 is invertible");
    let scale = x0.crisp_norm();
    let (lo, hi) = CONTINUITY_DISTANCE;
    let mut rng = seeded(seed);
    let mut holds_count = 0;
    let mut fails_count = 0;
    let mut counterexamples = Vec::new();
    for _ in 0..sample_count {
        let mut found = None;
        for _ in 0..RESAMPLE_BUDGET {
            let dist = log_uniform(&mut rng, lo, hi) * scale;
            let x = x0.add(&unit_direction(&mut rng, x0.model()).scale(dist))?;
            if let Some(ev) = continuity_eval_with(model, x0, &x0_inv, &x, epsilon)? {
                found = Some((x, ev));
                break;
            }
        }
        let Some((x, ev)) = found else {
            return Err(Error::Structural(format!(
                "no invertible sample near {x0} after {RESAMPLE_BUDGET} draws"
            )));
        };
        if ev.holds {
            holds_count += 1;
        } else {
            fails_count += 1;
            if counterexamples.len() < MAX_COUNTEREXAMPLES {
                counterexamples.push(ContinuityCounterexample {
                    x,
                    lhs_pair: ev.lhs_pair,
                    rhs_pair: ev.rhs_pair,
                });
            }
        }
    }
    Ok(ContinuityProbeReport {
        x0: x0.clone(),
        epsilon,
        seed,
        sample_law: format!(
            "x0 + d·u, u uniform on the unit sphere, d log-uniform in [{lo:e}, {hi:e}]·‖x0‖"
        ),
        samples: sample_count,
        holds_count,
        fails_count,
        identity_case,
        counterexamples,
    })
}
