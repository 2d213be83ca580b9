//! Fuzzy convergence and Cauchy verdicts over a finite horizon.
//!
//! A sequence converges to x at (r, t) when μ(xₙ − x, t) > 1 − r and
//! ν(xₙ − x, t) < r for all n ≥ n₀. Here "all n" means every index from n₀
//! up to the sequence's horizon, so verdicts are falsifiable finite statements.

use std::collections::BTreeSet;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::algebra::{elements_from_csv, AlgebraElement, DirectInverse, ModelKind};
use crate::error::{Error, Result};
use crate::if_norm::{check_radius, check_time, FuzzyDegreePair, IFNormModel};

pub const DEFAULT_P_MAX: usize = 16;
/// Distance to (1, 0) required at the horizon by the limit-formulation check.
pub const LIMIT_TREND_TOLERANCE: f64 = 0.01;
/// Radii at which the limit-formulation check cross-validates verdicts.
pub const CROSS_CHECK_RADII: [f64; 3] = [0.5, 0.1, 0.01];
const MONOTONE_TOL: f64 = 1e-12;

/// Default horizon: 10³ for matrices, 10⁴ otherwise.
pub fn default_horizon(model: ModelKind) -> usize {
    match model {
        ModelKind::Matrix { .. } => 1_000,
        _ => 10_000,
    }
}

/// How the n-th term (n ≥ 1) is generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SequenceRule {
    /// xₙ = x.
    Constant { x: AlgebraElement },
    /// xₙ = base + direction/n.
    Perturbed {
        base: AlgebraElement,
        direction: AlgebraElement,
    },
    /// xₙ = xⁿ.
    Powers { x: AlgebraElement },
    /// xₙ = x + x² + … + xⁿ.
    PartialSums { x: AlgebraElement },
    /// xₙ = (−1)ⁿ x.
    Alternating { x: AlgebraElement },
    /// xₙ = terms[n − 1].
    Explicit { terms: Vec<AlgebraElement> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub rule: SequenceRule,
    pub horizon: usize,
}

impl SequenceSpec {
    pub fn new(rule: SequenceRule, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::domain("horizon", 0.0, "must be at least 1"));
        }
        if let SequenceRule::Perturbed { base, direction } = &rule {
            if base.model() != direction.model() {
                return Err(Error::Structural(
                    "perturbation direction belongs to a different model".into(),
                ));
            }
        }
        if let SequenceRule::Explicit { terms } = &rule {
            if terms.len() < horizon {
                return Err(Error::domain(
                    "horizon",
                    horizon as f64,
                    "exceeds the number of listed terms",
                ));
            }
            if let Some(first) = terms.first() {
                if terms.iter().any(|e| e.model() != first.model()) {
                    return Err(Error::Structural("listed terms mix models".into()));
                }
            } else {
                return Err(Error::Structural("explicit sequence is empty".into()));
            }
        }
        Ok(Self { rule, horizon })
    }

    /// Sequence with the model's default horizon.
    pub fn with_default_horizon(rule: SequenceRule) -> Result<Self> {
        let h = match &rule {
            SequenceRule::Explicit { terms } => terms.len(),
            other => default_horizon(rule_model(other)),
        };
        Self::new(rule, h)
    }

    pub fn constant(x: AlgebraElement) -> Result<Self> {
        Self::with_default_horizon(SequenceRule::Constant { x })
    }

    pub fn perturbed(base: AlgebraElement, direction: AlgebraElement) -> Result<Self> {
        Self::with_default_horizon(SequenceRule::Perturbed { base, direction })
    }

    pub fn powers(x: AlgebraElement) -> Result<Self> {
        Self::with_default_horizon(SequenceRule::Powers { x })
    }

    pub fn partial_sums(x: AlgebraElement) -> Result<Self> {
        Self::with_default_horizon(SequenceRule::PartialSums { x })
    }

    pub fn alternating(x: AlgebraElement) -> Result<Self> {
        Self::with_default_horizon(SequenceRule::Alternating { x })
    }

    pub fn explicit(terms: Vec<AlgebraElement>) -> Result<Self> {
        Self::with_default_horizon(SequenceRule::Explicit { terms })
    }

    /// One element per CSV row (see [`elements_from_csv`]).
    pub fn from_csv<R: Read>(model: ModelKind, r: R) -> Result<Self> {
        Self::explicit(elements_from_csv(model, r)?)
    }

    pub fn with_horizon(mut self, horizon: usize) -> Result<Self> {
        self.horizon = horizon;
        Self::new(self.rule, horizon)
    }

    pub fn model(&self) -> ModelKind {
        rule_model(&self.rule)
    }

    /// x₁, …, x_horizon.
    pub fn terms(&self) -> Result<Vec<AlgebraElement>> {
        let h = self.horizon;
        let mut out = Vec::with_capacity(h);
        match &self.rule {
            SequenceRule::Constant { x } => out.resize(h, x.clone()),
            SequenceRule::Perturbed { base, direction } => {
                for n in 1..=h {
                    out.push(base.add(&direction.scale(1.0 / n as f64))?);
                }
            }
            SequenceRule::Powers { x } => {
                let mut p = x.clone();
                for _ in 0..h {
                    out.push(p.clone());
                    p = p.mul(x)?;
                }
            }
            SequenceRule::PartialSums { x } => {
                let mut p = x.clone();
                let mut s = x.clone();
                for _ in 0..h {
                    out.push(s.clone());
                    p = p.mul(x)?;
                    s = s.add(&p)?;
                }
            }
            SequenceRule::Alternating { x } => {
                let neg = x.neg();
                for n in 1..=h {
                    out.push(if n % 2 == 0 { x.clone() } else { neg.clone() });
                }
            }
            SequenceRule::Explicit { terms } => out.extend_from_slice(&terms[..h]),
        }
        if out.iter().any(|e| e.data().iter().any(|v| !v.is_finite())) {
            return Err(Error::Structural("sequence term overflowed".into()));
        }
        Ok(out)
    }

    /// The analytic limit where the family has one (θ for contractive powers,
    /// (e − x)⁻¹ − e for contractive partial sums).
    pub fn nominal_limit(&self) -> Option<AlgebraElement> {
        match &self.rule {
            SequenceRule::Constant { x } => Some(x.clone()),
            SequenceRule::Perturbed { base, .. } => Some(base.clone()),
            SequenceRule::Powers { x } if x.crisp_norm() < 1.0 => {
                Some(AlgebraElement::zero(x.model()))
            }
            SequenceRule::PartialSums { x } if x.crisp_norm() < 1.0 => {
                let e = AlgebraElement::unit(x.model()).ok()?;
                match e.sub(x).ok()?.direct_inverse().ok()? {
                    DirectInverse::Invertible(inv) => inv.sub(&e).ok(),
                    DirectInverse::NonInvertible => None,
                }
            }
            SequenceRule::Alternating { x } if x.is_zero() => Some(x.clone()),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        let name = match &self.rule {
            SequenceRule::Constant { .. } => "constant",
            SequenceRule::Perturbed { .. } => "perturbed",
            SequenceRule::Powers { .. } => "powers",
            SequenceRule::PartialSums { .. } => "partial_sums",
            SequenceRule::Alternating { .. } => "alternating",
            SequenceRule::Explicit { .. } => "explicit",
        };
        format!("{name} over {} (horizon {})", self.model(), self.horizon)
    }
}

fn rule_model(rule: &SequenceRule) -> ModelKind {
    match rule {
        SequenceRule::Constant { x }
        | SequenceRule::Powers { x }
        | SequenceRule::PartialSums { x }
        | SequenceRule::Alternating { x } => x.model(),
        SequenceRule::Perturbed { base, .. } => base.model(),
        SequenceRule::Explicit { terms } => terms[0].model(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictStatus {
    Converged { n0: usize },
    NotWithinHorizon,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub n: usize,
    pub mu: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub status: VerdictStatus,
    pub r: f64,
    pub t: f64,
    pub horizon: usize,
    /// Set for Cauchy verdicts.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_max: Option<usize>,
    pub trace: Vec<TracePoint>,
}

impl ConvergenceVerdict {
    pub fn converged(&self) -> bool {
        matches!(self.status, VerdictStatus::Converged { .. })
    }

    pub fn n0(&self) -> Option<usize> {
        match self.status {
            VerdictStatus::Converged { n0 } => Some(n0),
            VerdictStatus::NotWithinHorizon => None,
        }
    }
}

fn passes(d: FuzzyDegreePair, r: f64) -> bool {
    d.mu > 1.0 - r && d.nu < r
}

/// Indices 1..10, then roughly geometric, plus the horizon and either side of n₀.
pub(crate) fn trace_indices(last: usize, n0: Option<usize>) -> BTreeSet<usize> {
    let mut idx: BTreeSet<usize> = (1..=last.min(10)).collect();
    let mut k = 10usize;
    while k < last {
        idx.insert(k);
        k = k * 3 / 2;
    }
    idx.insert(last);
    if let Some(n0) = n0 {
        idx.extend(
            [n0.saturating_sub(1).max(1), n0]
                .iter()
                .filter(|&&i| i <= last),
        );
    }
    idx
}

/// Least n₀ such that every degree pair from n₀ to the end passes.
fn scan(degrees: &[FuzzyDegreePair], r: f64) -> Option<usize> {
    let last_fail = degrees.iter().rposition(|&d| !passes(d, r));
    let n0 = last_fail.map_or(1, |i| i + 2);
    (n0 <= degrees.len()).then_some(n0)
}

fn verdict(
    degrees: &[FuzzyDegreePair],
    r: f64,
    t: f64,
    horizon: usize,
    p_max: Option<usize>,
) -> ConvergenceVerdict {
    let n0 = scan(degrees, r);
    let trace = trace_indices(degrees.len(), n0)
        .into_iter()
        .map(|n| TracePoint {
            n,
            mu: degrees[n - 1].mu,
            nu: degrees[n - 1].nu,
        })
        .collect();
    ConvergenceVerdict {
        status: match n0 {
            Some(n0) => VerdictStatus::Converged { n0 },
            None => VerdictStatus::NotWithinHorizon,
        },
        r,
        t,
        horizon,
        p_max,
        trace,
    }
}

fn distance_degrees(
    model: &IFNormModel,
    terms: &[AlgebraElement],
    limit: &AlgebraElement,
    t: f64,
) -> Result<Vec<FuzzyDegreePair>> {
    model.owns(limit)?;
    terms
        .iter()
        .map(|x| model.membership(&x.sub(limit)?, t))
        .collect()
}

/// Least n₀ ≤ horizon with μ(xₙ − limit, t) > 1 − r and ν(xₙ − limit, t) < r
/// for every n in [n₀, horizon].
pub fn fuzzy_converges(
    model: &IFNormModel,
    seq: &SequenceSpec,
    limit: &AlgebraElement,
    r: f64,
    t: f64,
) -> Result<ConvergenceVerdict> {
    check_radius("r", r)?;
    check_time("t", t)?;
    let terms = seq.terms()?;
    let degrees = distance_degrees(model, &terms, limit, t)?;
    Ok(verdict(&degrees, r, t, seq.horizon, None))
}

/// Per-t outcome of [`limit_formulation_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitTrace {
    pub t: f64,
    pub final_mu: f64,
    pub final_nu: f64,
    pub tail_monotone: bool,
    /// Final values within tolerance of (1, 0) and monotone over the tail half.
    pub trend_ok: bool,
    /// (r, converged) for each cross-check radius.
    pub verdicts: Vec<(f64, bool)>,
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCheck {
    /// μ(xₙ − x, t) → 1 and ν(xₙ − x, t) → 0 for every t in the set.
    pub holds: bool,
    /// The trend verdict agrees with the ball-based verdicts at every t.
    pub consistent: bool,
    pub per_t: Vec<LimitTrace>,
}

/// Checks the limit formulation of convergence against the ball formulation.
pub fn limit_formulation_check(
    model: &IFNormModel,
    seq: &SequenceSpec,
    limit: &AlgebraElement,
    t_set: &[f64],
) -> Result<LimitCheck> {
    if t_set.is_empty() {
        return Err(Error::domain("t_set", 0.0, "must be nonempty"));
    }
    let terms = seq.terms()?;
    let mut per_t = Vec::with_capacity(t_set.len());
    for &t in t_set {
        check_time("t", t)?;
        let degrees = distance_degrees(model, &terms, limit, t)?;
        let last = *degrees.last().expect("horizon ≥ 1");
        let tail = &degrees[degrees.len() / 2..];
        let tail_monotone = tail
            .windows(2)
            .all(|w| w[1].mu >= w[0].mu - MONOTONE_TOL && w[1].nu <= w[0].nu + MONOTONE_TOL);
        let trend_ok = tail_monotone
            && 1.0 - last.mu <= LIMIT_TREND_TOLERANCE
            && last.nu <= LIMIT_TREND_TOLERANCE;
        let verdicts = CROSS_CHECK_RADII
            .iter()
            .map(|&r| (r, scan(&degrees, r).is_some()))
            .collect();
        let trace = verdict(&degrees, 0.5, t, seq.horizon, None).trace;
        per_t.push(LimitTrace {
            t,
            final_mu: last.mu,
            final_nu: last.nu,
            tail_monotone,
            trend_ok,
            verdicts,
            trace,
        });
    }
    let holds = per_t.iter().all(|p| p.trend_ok);
    let consistent = per_t
        .iter()
        .all(|p| p.trend_ok == p.verdicts.iter().all(|(_, c)| *c));
    Ok(LimitCheck {
        holds,
        consistent,
        per_t,
    })
}

/// Cauchy surrogate: least n₀ such that μ(x_{n+p} − xₙ, t) > 1 − r and
/// ν(x_{n+p} − xₙ, t) < r for all n in [n₀, horizon − p_max], p in [1, p_max].
pub fn fuzzy_cauchy(
    model: &IFNormModel,
    seq: &SequenceSpec,
    r: f64,
    t: f64,
    p_max: usize,
) -> Result<ConvergenceVerdict> {
    check_radius("r", r)?;
    check_time("t", t)?;
    if p_max == 0 {
        return Err(Error::domain("p_max", 0.0, "must be at least 1"));
    }
    if p_max >= seq.horizon {
        return Err(Error::domain(
            "p_max",
            p_max as f64,
            "must be smaller than the horizon",
        ));
    }
    let terms = seq.terms()?;
    let span = seq.horizon - p_max;
    let mut worst = Vec::with_capacity(span);
    for n in 0..span {
        let mut w = FuzzyDegreePair::CRISP_ZERO;
        for p in 1..=p_max {
            let d = model.membership(&terms[n + p].sub(&terms[n])?, t)?;
            w.mu = w.mu.min(d.mu);
            w.nu = w.nu.max(d.nu);
        }
        worst.push(w);
    }
    Ok(verdict(&worst, r, t, seq.horizon, Some(p_max)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductConvergenceReport {
    pub x_verdict: ConvergenceVerdict,
    pub y_verdict: ConvergenceVerdict,
    pub product_verdict: ConvergenceVerdict,
    pub both_factors_converged: bool,
    /// False only when both factors converge and the product does not.
    pub consistent: bool,
}

/// Runs the three verdicts xₙ → x, yₙ → y and xₙyₙ → xy.
pub fn product_convergence_check(
    model: &IFNormModel,
    seq_x: &SequenceSpec,
    x: &AlgebraElement,
    seq_y: &SequenceSpec,
    y: &AlgebraElement,
    r: f64,
    t: f64,
) -> Result<ProductConvergenceReport> {
    check_radius("r", r)?;
    check_time("t", t)?;
    if !model.algebra.is_unital() {
        return Err(Error::Precondition(format!(
            "product limits need a unital model, got {}",
            model.kind()
        )));
    }
    if seq_x.model() != model.kind() || seq_y.model() != model.kind() {
        return Err(Error::Structural(
            "both sequences must belong to the model".into(),
        ));
    }
    let horizon = seq_x.horizon.min(seq_y.horizon);
    let xs = seq_x.terms()?;
    let ys = seq_y.terms()?;
    let xs = &xs[..horizon];
    let ys = &ys[..horizon];
    let products = xs
        .iter()
        .zip(ys)
        .map(|(a, b)| a.mul(b))
        .collect::<Result<Vec<_>>>()?;
    let xy = x.mul(y)?;

    let vx = verdict(&distance_degrees(model, xs, x, t)?, r, t, horizon, None);
    let vy = verdict(&distance_degrees(model, ys, y, t)?, r, t, horizon, None);
    let vp = verdict(
        &distance_degrees(model, &products, &xy, t)?,
        r,
        t,
        horizon,
        None,
    );
    let both = vx.converged() && vy.converged();
    let consistent = !both || vp.converged();
    Ok(ProductConvergenceReport {
        x_verdict: vx,
        y_verdict: vy,
        product_verdict: vp,
        both_factors_converged: both,
        consistent,
    })
}
