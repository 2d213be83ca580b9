//! Concrete real algebras with crisp norms.
//!
//! Four carriers are provided:
//!
//! | kind | payload | product | norm |
//! |------|---------|---------|------|
//! | `scalar` | one real | multiplication | `|x|` |
//! | `matrix:n` | n×n row-major | matrix product | Frobenius |
//! | `series:d` | d+1 coefficients | Cauchy product truncated at degree d | Σ|aₖ| |
//! | `nullprod:m` | m-vector | always θ | Euclidean |
//!
//! The first three are unital with submultiplicative norms. The null-product
//! space has no unit and is excluded from every inversion routine.

mod io;
pub(crate) mod linalg;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{elements_from_csv, elements_to_csv};

/// Relative pivot threshold below which a matrix is declared singular.
pub const PIVOT_REL_TOL: f64 = 1e-12;
/// Constant-term magnitude below which a truncated series is declared singular.
pub const SERIES_CONST_TOL: f64 = 1e-15;
/// Post-condition bound on ‖x·x⁻¹ − e‖ relative to max(1, ‖x‖·‖x⁻¹‖).
pub const INVERSE_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Scalar,
    Matrix { n: usize },
    TruncatedSeries { degree: usize },
    NullProduct { dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    AbsoluteValue,
    Frobenius,
    CoefficientSum,
    Euclidean,
}

impl ModelKind {
    /// Number of real coordinates in an element's payload.
    pub fn dim(self) -> usize {
        match self {
            ModelKind::Scalar => 1,
            ModelKind::Matrix { n } => n * n,
            ModelKind::TruncatedSeries { degree } => degree + 1,
            ModelKind::NullProduct { dim } => dim,
        }
    }

    pub fn norm_kind(self) -> NormKind {
        match self {
            ModelKind::Scalar => NormKind::AbsoluteValue,
            ModelKind::Matrix { .. } => NormKind::Frobenius,
            ModelKind::TruncatedSeries { .. } => NormKind::CoefficientSum,
            ModelKind::NullProduct { .. } => NormKind::Euclidean,
        }
    }

    pub fn is_unital(self) -> bool {
        !matches!(self, ModelKind::NullProduct { .. })
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Scalar => write!(f, "scalar"),
            ModelKind::Matrix { n } => write!(f, "matrix:n={n}"),
            ModelKind::TruncatedSeries { degree } => write!(f, "series:d={degree}"),
            ModelKind::NullProduct { dim } => write!(f, "nullprod:m={dim}"),
        }
    }
}

/// Parses `kind[:key=value[,key=value]*]`, e.g. `matrix:n=4` or `series:d=8`.
impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (kind, params) = match spec.split_once(':') {
            Some((k, p)) => (k.trim(), p.trim()),
            None => (spec.trim(), ""),
        };
        let mut pairs = Vec::new();
        if !params.is_empty() {
            for item in params.split(',') {
                let (k, v) = item.split_once('=').ok_or_else(|| {
                    Error::Configuration(format!("model parameter {item:?} is not key=value"))
                })?;
                let v: usize = v.trim().parse().map_err(|_| {
                    Error::Configuration(format!("model parameter {k}={v:?} is not an integer"))
                })?;
                pairs.push((k.trim().to_string(), v));
            }
        }
        let take = |names: &[&str], default: Option<usize>| -> Result<usize> {
            let hit = pairs.iter().find(|(k, _)| names.contains(&k.as_str()));
            match (hit, default) {
                (Some((_, v)), _) => Ok(*v),
                (None, Some(d)) => Ok(d),
                (None, None) => Err(Error::Configuration(format!(
                    "model {kind:?} requires parameter {}",
                    names[0]
                ))),
            }
        };
        let allowed: &[&str] = match kind {
            "scalar" => &[],
            "matrix" => &["n"],
            "series" | "truncated_series" => &["d", "degree"],
            "nullprod" | "null_product" => &["m", "dim"],
            other => {
                return Err(Error::Configuration(format!(
                    "unknown model kind {other:?}"
                )));
            }
        };
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::Configuration(format!(
                "unknown parameter {k:?} for model {kind:?}"
            )));
        }
        let model = match kind {
            "scalar" => ModelKind::Scalar,
            "matrix" => ModelKind::Matrix {
                n: take(&["n"], None)?,
            },
            "series" | "truncated_series" => ModelKind::TruncatedSeries {
                degree: take(&["d", "degree"], None)?,
            },
            _ => ModelKind::NullProduct {
                dim: take(&["m", "dim"], None)?,
            },
        };
        if model.dim() == 0 {
            return Err(Error::Configuration(format!(
                "model {spec:?} has no coordinates"
            )));
        }
        Ok(model)
    }
}

/// Result of the exact-method inversion oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum DirectInverse {
    Invertible(AlgebraElement),
    NonInvertible,
}

impl DirectInverse {
    pub fn is_invertible(&self) -> bool {
        matches!(self, DirectInverse::Invertible(_))
    }

    pub fn into_option(self) -> Option<AlgebraElement> {
        match self {
            DirectInverse::Invertible(e) => Some(e),
            DirectInverse::NonInvertible => None,
        }
    }
}

/// An element of one of the concrete models. Coordinates are stored flat
/// (matrices row-major, series by ascending degree).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    model: ModelKind,
    data: Vec<f64>,
}

impl AlgebraElement {
    pub fn new(model: ModelKind, data: Vec<f64>) -> Result<Self> {
        if data.len() != model.dim() {
            return Err(Error::Structural(format!(
                "{model} expects {} coordinates, got {}",
                model.dim(),
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Structural(format!("non-finite coordinate {v}")));
        }
        Ok(Self { model, data })
    }

    pub fn scalar(v: f64) -> Result<Self> {
        Self::new(ModelKind::Scalar, vec![v])
    }

    pub fn matrix(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Structural("matrix rows must form a square".into()));
        }
        Self::new(ModelKind::Matrix { n }, rows.concat())
    }

    pub fn series(coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Structural(
                "series needs at least one coefficient".into(),
            ));
        }
        Self::new(
            ModelKind::TruncatedSeries {
                degree: coeffs.len() - 1,
            },
            coeffs.to_vec(),
        )
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in values.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self::new(ModelKind::Matrix { n }, data)
    }

    /// θ of the given model.
    pub fn zero(model: ModelKind) -> Self {
        Self {
            model,
            data: vec![0.0; model.dim()],
        }
    }

    /// The unit e; unsupported for the null-product space.
    pub fn unit(model: ModelKind) -> Result<Self> {
        let mut data = vec![0.0; model.dim()];
        match model {
            ModelKind::Scalar | ModelKind::TruncatedSeries { .. } => data[0] = 1.0,
            ModelKind::Matrix { n } => (0..n).for_each(|i| data[i * n + i] = 1.0),
            ModelKind::NullProduct { .. } => {
                return Err(Error::Unsupported(format!("{model} has no unit")));
            }
        }
        Ok(Self { model, data })
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// Entry (i, j) of a matrix element.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match self.model {
            ModelKind::Matrix { n } => self.data[i * n + j],
            _ => panic!("entry() on non-matrix element"),
        }
    }

    fn same_model(&self, other: &Self) -> Result<()> {
        if self.model == other.model {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "model mismatch: {} vs {}",
                self.model, other.model
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            model: self.model,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            model: self.model,
            data,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            model: self.model,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            model: self.model,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        let data = match self.model {
            ModelKind::Scalar => vec![self.data[0] * other.data[0]],
            ModelKind::Matrix { n } => linalg::matmul(&self.data, &other.data, n),
            ModelKind::TruncatedSeries { degree } => {
                let (a, b) = (&self.data, &other.data);
                (0..=degree)
                    .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
                    .collect()
            }
            ModelKind::NullProduct { dim } => vec![0.0; dim],
        };
        Ok(Self {
            model: self.model,
            data,
        })
    }

    /// `self^k` for k ≥ 0 (with x⁰ = e).
    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::unit(self.model)?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        match self.model {
            ModelKind::Matrix { n } => {
                let mut data = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        data[j * n + i] = self.data[i * n + j];
                    }
                }
                Self {
                    model: self.model,
                    data,
                }
            }
            _ => self.clone(),
        }
    }

    pub fn crisp_norm(&self) -> f64 {
        match self.model.norm_kind() {
            NormKind::AbsoluteValue => self.data[0].abs(),
            NormKind::CoefficientSum => self.data.iter().map(|v| v.abs()).sum(),
            NormKind::Frobenius | NormKind::Euclidean => {
                self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
            }
        }
    }

    /// Exact-method inverse used as the oracle for every series routine.
    pub fn direct_inverse(&self) -> Result<DirectInverse> {
        let candidate = match self.model {
            ModelKind::NullProduct { .. } => {
                return Err(Error::Unsupported(format!(
                    "{} is not unital; inverses are undefined",
                    self.model
                )));
            }
            ModelKind::Scalar => {
                let r = 1.0 / self.data[0];
                if self.data[0] == 0.0 || !r.is_finite() {
                    None
                } else {
                    Some(vec![r])
                }
            }
            ModelKind::Matrix { n } => linalg::invert(&self.data, n, PIVOT_REL_TOL),
            ModelKind::TruncatedSeries { degree } => {
                let a = &self.data;
                if a[0].abs() < SERIES_CONST_TOL {
                    None
                } else {
                    let mut b = vec![0.0; degree + 1];
                    b[0] = 1.0 / a[0];
                    for k in 1..=degree {
                        let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
                        b[k] = -s / a[0];
                    }
                    Some(b)
                }
            }
        };
        let Some(data) = candidate else {
            return Ok(DirectInverse::NonInvertible);
        };
        if data.iter().any(|v| !v.is_finite()) {
            return Ok(DirectInverse::NonInvertible);
        }
        let inv = Self {
            model: self.model,
            data,
        };
        let residual = self.mul(&inv)?.sub(&Self::unit(self.model)?)?.crisp_norm();
        let scale = (self.crisp_norm() * inv.crisp_norm()).max(1.0);
        if residual <= INVERSE_RESIDUAL_TOL * scale {
            Ok(DirectInverse::Invertible(inv))
        } else {
            Ok(DirectInverse::NonInvertible)
        }
    }

    /// Unit Euclidean vector v with `self·v ≈ 0` for a singular matrix, found
    /// from the same complete-pivoting elimination the inverse uses.
    pub fn kernel_vector(&self) -> Option<Vec<f64>> {
        match self.model {
            ModelKind::Matrix { n } => linalg::null_vector(&self.data, n, PIVOT_REL_TOL),
            _ => None,
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.model)?;
        for (i, v) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// A model descriptor with the crisp norm and unitality it implies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraModel {
    pub kind: ModelKind,
}

impl AlgebraModel {
    pub fn new(kind: ModelKind) -> Self {
        Self { kind }
    }

    pub fn norm_kind(&self) -> NormKind {
        self.kind.norm_kind()
    }

    pub fn is_unital(&self) -> bool {
        self.kind.is_unital()
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(self.kind)
    }

    pub fn unit(&self) -> Result<AlgebraElement> {
        AlgebraElement::unit(self.kind)
    }

    pub fn element(&self, data: Vec<f64>) -> Result<AlgebraElement> {
        AlgebraElement::new(self.kind, data)
    }

    /// Parses a literal: `zero`/`theta`, `unit`/`e`/`identity`, or a list of
    /// numbers separated by commas, semicolons or whitespace (row-major).
    pub fn parse_element(&self, literal: &str) -> Result<AlgebraElement> {
        match literal.trim() {
            "zero" | "theta" => return Ok(self.zero()),
            "unit" | "e" | "identity" => return self.unit(),
            _ => {}
        }
        let data = literal
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::Configuration(format!("cannot parse number {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.element(data)
    }
}

impl fmt::Display for AlgebraModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}
