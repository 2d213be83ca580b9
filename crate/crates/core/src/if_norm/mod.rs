//! Induced intuitionistic fuzzy norms and fuzzy open balls.
//!
//! For a crisp norm ‖·‖ the induced pair is
//!
//! ```text
//! μ(x, t) = t / (t + ‖x‖)      ν(x, t) = ‖x‖ / (t + ‖x‖)
//! ```
//!
//! The smaller of the two is computed by division and the larger as its
//! complement, which keeps μ + ν = 1 exact in floating point.

mod axioms;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraModel, ModelKind};
use crate::error::{Error, Result};
use crate::triangular::{TriangularConorm, TriangularNorm};

pub use axioms::{
    check_ifna_axioms, check_ifna_axioms_with, evaluate_axiom, replay_witness, AxiomSampling,
    LIMIT_LADDER, LIMIT_NORM_RANGE, LIMIT_TOLERANCE, TARGETED_CANDIDATES,
};

/// Membership and non-membership degrees of one (element, time) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyDegreePair {
    pub mu: f64,
    pub nu: f64,
}

impl FuzzyDegreePair {
    pub const CRISP_ZERO: FuzzyDegreePair = FuzzyDegreePair { mu: 1.0, nu: 0.0 };

    /// Degrees of an element of crisp norm `norm` at time `t > 0`.
    pub fn induced(norm: f64, t: f64) -> Self {
        if norm == 0.0 {
            return Self::CRISP_ZERO;
        }
        if norm <= t {
            let nu = norm / (t + norm);
            Self { mu: 1.0 - nu, nu }
        } else {
            let mu = t / (t + norm);
            Self { mu, nu: 1.0 - mu }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// μ = t/(t+‖x‖), ν = ‖x‖/(t+‖x‖).
    Induced,
}

/// A carrier algebra with a fuzzy norm and the triangular pair it is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IFNormModel {
    pub algebra: AlgebraModel,
    pub construction: Construction,
    pub tnorm: TriangularNorm,
    pub tconorm: TriangularConorm,
}

pub(crate) fn check_time(field: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(field, t, "must be a positive finite real"))
    }
}

pub(crate) fn check_radius(field: &'static str, r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(field, r, "must lie in (0,1)"))
    }
}

impl IFNormModel {
    pub fn induced(kind: ModelKind, tnorm: TriangularNorm, tconorm: TriangularConorm) -> Self {
        Self {
            algebra: AlgebraModel::new(kind),
            construction: Construction::Induced,
            tnorm,
            tconorm,
        }
    }

    /// Induced model with the idempotent pair (minimum, maximum).
    pub fn induced_min_max(kind: ModelKind) -> Self {
        Self::induced(kind, TriangularNorm::minimum(), TriangularConorm::maximum())
    }

    pub fn kind(&self) -> ModelKind {
        self.algebra.kind
    }

    pub fn describe(&self) -> String {
        format!(
            "induced({}) with tnorm={} tconorm={}",
            self.algebra.kind,
            self.tnorm.kind.name(),
            self.tconorm.kind.name()
        )
    }

    pub(crate) fn owns(&self, x: &AlgebraElement) -> Result<()> {
        if x.model() == self.algebra.kind {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "element of {} used with model {}",
                x.model(),
                self.algebra.kind
            )))
        }
    }

    /// (μ(x,t), ν(x,t)).
    pub fn membership(&self, x: &AlgebraElement, t: f64) -> Result<FuzzyDegreePair> {
        check_time("t", t)?;
        self.owns(x)?;
        Ok(FuzzyDegreePair::induced(x.crisp_norm(), t))
    }

    /// Membership of `y` in B(center, r, t): μ(center − y, t) > 1 − r and ν(center − y, t) < r.
    pub fn in_open_ball(&self, ball: &BallSpec, y: &AlgebraElement) -> Result<bool> {
        self.owns(&ball.center)?;
        self.owns(y)?;
        let d = self.membership(&ball.center.sub(y)?, ball.t)?;
        Ok(d.mu > 1.0 - ball.r && d.nu < ball.r)
    }
}

/// Parameters of the fuzzy open ball B(center, r, t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub center: AlgebraElement,
    pub r: f64,
    pub t: f64,
}

impl BallSpec {
    pub fn new(center: AlgebraElement, r: f64, t: f64) -> Result<Self> {
        check_radius("r", r)?;
        check_time("t", t)?;
        Ok(Self { center, r, t })
    }

    /// Ball centred at θ.
    pub fn at_zero(model: ModelKind, r: f64, t: f64) -> Result<Self> {
        Self::new(AlgebraElement::zero(model), r, t)
    }

    /// Crisp radius ρ = t·r/(1−r): under the induced norm, y lies in the
    /// ball iff ‖y − center‖ < ρ.
    pub fn crisp_radius(&self) -> f64 {
        crisp_ball_radius(self.r, self.t)
    }
}

/// t·r/(1−r).
pub fn crisp_ball_radius(r: f64, t: f64) -> f64 {
    t * r / (1.0 - r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_model() -> IFNormModel {
        IFNormModel::induced_min_max(ModelKind::Scalar)
    }

    #[test]
    fn zero_has_crisp_degrees() {
        let m = IFNormModel::induced_min_max(ModelKind::Matrix { n: 2 });
        for t in [1e-6, 0.3, 1.0, 1e6] {
            let d = m.membership(&AlgebraElement::zero(m.kind()), t).unwrap();
            assert_eq!(d, FuzzyDegreePair { mu: 1.0, nu: 0.0 });
        }
    }

    #[test]
    fn unit_frobenius_norm_at_unit_time() {
        let m = IFNormModel::induced_min_max(ModelKind::Matrix { n: 2 });
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let x = AlgebraElement::diagonal(&[h, h]).unwrap();
        let d = m.membership(&x, 1.0).unwrap();
        // ‖x‖_F = 1 up to rounding, so μ = ν = 1/2
        assert!((d.mu - 0.5).abs() < 1e-15 && (d.nu - 0.5).abs() < 1e-15);
    }

    #[test]
    fn scaling_law_exact_for_two() {
        let m = scalar_model();
        let x = AlgebraElement::scalar(0.37).unwrap();
        assert_eq!(
            m.membership(&x.scale(2.0), 1.0).unwrap(),
            m.membership(&x, 0.5).unwrap()
        );
    }

    #[test]
    fn nonpositive_time_is_domain_error() {
        let m = scalar_model();
        let x = AlgebraElement::scalar(1.0).unwrap();
        for t in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                m.membership(&x, t),
                Err(Error::Domain { field: "t", .. })
            ));
        }
    }

    #[test]
    fn ball_examples() {
        let m = scalar_model();
        let zero = AlgebraElement::scalar(0.0).unwrap();
        let one = AlgebraElement::scalar(1.0).unwrap();
        let b = BallSpec::new(zero.clone(), 0.6, 1.0).unwrap();
        assert!(m.in_open_ball(&b, &zero).unwrap());
        assert!(m.in_open_ball(&b, &one).unwrap());
        let b = BallSpec::new(zero, 0.3, 1.0).unwrap();
        assert!(!m.in_open_ball(&b, &one).unwrap());
    }

    #[test]
    fn ball_rejects_mismatched_element() {
        let m = scalar_model();
        let b = BallSpec::at_zero(ModelKind::Scalar, 0.5, 1.0).unwrap();
        let y = AlgebraElement::zero(ModelKind::Matrix { n: 2 });
        assert!(matches!(m.in_open_ball(&b, &y), Err(Error::Structural(_))));
    }

    #[test]
    fn ball_parameter_validation() {
        for r in [0.0, 1.0, -0.2, 1.5] {
            assert!(BallSpec::at_zero(ModelKind::Scalar, r, 1.0).is_err());
        }
        assert!(BallSpec::at_zero(ModelKind::Scalar, 0.5, 0.0).is_err());
    }

    #[test]
    fn crisp_radius_examples() {
        assert_eq!(crisp_ball_radius(0.5, 1.0), 1.0);
        assert!((crisp_ball_radius(0.4, 1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((crisp_ball_radius(0.01, 1.0) - 1.0 / 99.0).abs() < 1e-15);
    }
}
