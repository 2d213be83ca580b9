//! Axiom records shared by the triangular-operation and fuzzy-norm checkers.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomStatus {
    Pass,
    Fail,
    /// The defining inequality holds trivially on every sample (e.g. all products are θ).
    Vacuous,
}

impl AxiomStatus {
    /// `Pass` and `Vacuous` both count as satisfied.
    pub fn is_satisfied(self) -> bool {
        !matches!(self, AxiomStatus::Fail)
    }
}

/// Concrete evidence for a failed axiom. Replaying the stored arguments
/// reproduces `lhs` and `rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Grid arguments of a triangular operation.
    Grid { args: Vec<f64>, lhs: f64, rhs: f64 },
    /// Elements and times of a fuzzy-norm axiom.
    Elements {
        x: AlgebraElement,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        y: Option<AlgebraElement>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        c: Option<f64>,
        s: f64,
        t: f64,
        lhs: f64,
        rhs: f64,
    },
}

impl Witness {
    pub fn lhs(&self) -> f64 {
        match self {
            Witness::Grid { lhs, .. } | Witness::Elements { lhs, .. } => *lhs,
        }
    }

    pub fn rhs(&self) -> f64 {
        match self {
            Witness::Grid { rhs, .. } | Witness::Elements { rhs, .. } => *rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomRecord {
    pub id: String,
    pub status: AxiomStatus,
    pub samples_used: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub search: Option<SearchSummary>,
}

/// Outcome of a targeted counterexample search run after random sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub family: String,
    pub candidates_tried: usize,
    /// Zero-based index of the first violating candidate.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_hit: Option<usize>,
}

impl AxiomRecord {
    pub fn new(id: impl Into<String>, samples_used: usize, witness: Option<Witness>) -> Self {
        let status = if witness.is_some() {
            AxiomStatus::Fail
        } else {
            AxiomStatus::Pass
        };
        Self {
            id: id.into(),
            status,
            samples_used,
            witness,
            note: None,
            search: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Pass/fail summary for a family of axioms over one model or operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub samples: usize,
    pub axioms: Vec<AxiomRecord>,
    /// Sampling laws, ladders and tolerances used to produce the report.
    pub constants: Vec<(String, String)>,
}

impl AxiomReport {
    pub fn get(&self, id: &str) -> Option<&AxiomRecord> {
        self.axioms.iter().find(|a| a.id == id)
    }

    pub fn all_satisfied(&self) -> bool {
        self.axioms.iter().all(|a| a.status.is_satisfied())
    }
}
