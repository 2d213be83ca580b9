//! Continuous t-norms and t-conorms on the unit interval.
//!
//! Built-in kinds are the three classical pairs (minimum/maximum,
//! product/probabilistic sum, Łukasiewicz/bounded sum). A tabulated kind
//! evaluates a user grid with bilinear interpolation.
//!
//! Axiom checks are exhaustive over a uniform grid and report, for each
//! failed axiom, the grid tuple with the largest violation.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{AxiomRecord, AxiomReport, Witness};

/// Absolute tolerance for equality in all triangular axiom predicates.
pub const AXIOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TNormKind {
    Minimum,
    Product,
    Lukasiewicz,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TConormKind {
    Maximum,
    ProbabilisticSum,
    BoundedSum,
    Tabulated,
}

impl TNormKind {
    pub fn name(self) -> &'static str {
        match self {
            TNormKind::Minimum => "minimum",
            TNormKind::Product => "product",
            TNormKind::Lukasiewicz => "lukasiewicz",
            TNormKind::Tabulated => "tabulated",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "minimum" | "min" => Some(TNormKind::Minimum),
            "product" | "prod" => Some(TNormKind::Product),
            "lukasiewicz" | "luk" => Some(TNormKind::Lukasiewicz),
            "tabulated" => Some(TNormKind::Tabulated),
            _ => None,
        }
    }
}

impl TConormKind {
    pub fn name(self) -> &'static str {
        match self {
            TConormKind::Maximum => "maximum",
            TConormKind::ProbabilisticSum => "probabilistic_sum",
            TConormKind::BoundedSum => "bounded_sum",
            TConormKind::Tabulated => "tabulated",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "maximum" | "max" => Some(TConormKind::Maximum),
            "probabilistic_sum" | "probsum" => Some(TConormKind::ProbabilisticSum),
            "bounded_sum" | "bsum" => Some(TConormKind::BoundedSum),
            "tabulated" => Some(TConormKind::Tabulated),
            _ => None,
        }
    }
}

/// A rectangular grid of values over [0,1]², evaluated by bilinear interpolation.
///
/// Values are stored as given; they are not required to lie in [0,1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    axis_a: Vec<f64>,
    axis_b: Vec<f64>,
    /// Row-major, `axis_a.len()` rows by `axis_b.len()` columns.
    values: Vec<f64>,
}

impl Table {
    pub fn new(axis_a: Vec<f64>, axis_b: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        validate_axis("row", &axis_a)?;
        validate_axis("column", &axis_b)?;
        if values.len() != axis_a.len() * axis_b.len() {
            return Err(Error::Configuration(format!(
                "table has {} values, expected {}x{}",
                values.len(),
                axis_a.len(),
                axis_b.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Configuration(format!("non-finite table value {v}")));
        }
        Ok(Self {
            axis_a,
            axis_b,
            values,
        })
    }

    /// Tabulates `f` on a uniform grid with `resolution` points per axis.
    pub fn from_fn(resolution: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Configuration(format!(
                "table resolution {resolution} < 2"
            )));
        }
        let axis = uniform_grid(resolution);
        let values = axis
            .iter()
            .flat_map(|&a| axis.iter().map(move |&b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        Self::new(axis.clone(), axis, values)
    }

    /// Parses the CSV layout: the first row holds column coordinates (its
    /// first cell is a free label), each following row starts with its row
    /// coordinate and then the values.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = rdr.records();
        let header = rows
            .next()
            .ok_or_else(|| Error::Configuration("empty table CSV".into()))??;
        let axis_b = header
            .iter()
            .skip(1)
            .map(parse_cell)
            .collect::<Result<Vec<_>>>()?;
        let width = header.len();
        let mut axis_a = Vec::new();
        let mut values = Vec::new();
        for (i, row) in rows.enumerate() {
            let row = row?;
            if row.len() != width {
                return Err(Error::Configuration(format!(
                    "table row {} has {} cells, expected {width}",
                    i + 2,
                    row.len()
                )));
            }
            let mut cells = row.iter().map(parse_cell);
            axis_a.push(cells.next().unwrap()?);
            for c in cells {
                values.push(c?);
            }
        }
        Self::new(axis_a, axis_b, values)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())?;
        Self::from_csv_reader(file)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("a\\b");
        for b in &self.axis_b {
            out.push_str(&format!(",{b:?}"));
        }
        out.push('\n');
        for (i, a) in self.axis_a.iter().enumerate() {
            out.push_str(&format!("{a:?}"));
            for v in &self.values[i * self.axis_b.len()..(i + 1) * self.axis_b.len()] {
                out.push_str(&format!(",{v:?}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn resolution(&self) -> (usize, usize) {
        (self.axis_a.len(), self.axis_b.len())
    }

    fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axis_b.len() + j]
    }

    /// Bilinear interpolation; coordinates outside [0,1] are clamped onto the grid.
    pub fn interpolate(&self, a: f64, b: f64) -> f64 {
        let (i, fa) = locate(&self.axis_a, a);
        let (j, fb) = locate(&self.axis_b, b);
        let i1 = (i + 1).min(self.axis_a.len() - 1);
        let j1 = (j + 1).min(self.axis_b.len() - 1);
        let v00 = self.value(i, j);
        let v01 = self.value(i, j1);
        let v10 = self.value(i1, j);
        let v11 = self.value(i1, j1);
        let top = v00 + (v01 - v00) * fb;
        let bottom = v10 + (v11 - v10) * fb;
        top + (bottom - top) * fa
    }
}

fn parse_cell(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Configuration(format!("cannot parse table cell {s:?}")))
}

fn validate_axis(which: &str, axis: &[f64]) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::Configuration(format!(
            "{which} axis needs at least two coordinates"
        )));
    }
    if axis[0] != 0.0 || *axis.last().unwrap() != 1.0 {
        return Err(Error::Configuration(format!(
            "{which} axis must start at 0 and end at 1"
        )));
    }
    if axis.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Configuration(format!(
            "{which} axis must be strictly increasing"
        )));
    }
    Ok(())
}

/// Index of the cell containing `x` and the fractional offset inside it.
fn locate(axis: &[f64], x: f64) -> (usize, f64) {
    let x = x.clamp(0.0, 1.0);
    let last = axis.len() - 1;
    // partition_point gives the first coordinate > x
    let k = axis.partition_point(|&c| c <= x);
    if k > last {
        return (last, 0.0);
    }
    let i = k.saturating_sub(1);
    let span = axis[i + 1] - axis[i];
    (i, (x - axis[i]) / span)
}

/// The grid {0, 1/(g−1), …, 1}.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    let d = (points - 1) as f64;
    (0..points).map(|i| i as f64 / d).collect()
}

fn check_unit(field: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(field, v, "must lie in [0,1]"))
    }
}

/// Behaviour shared by t-norms and t-conorms.
pub trait TriangularOp {
    /// 1 for t-norms, 0 for t-conorms.
    fn identity(&self) -> f64;

    /// Unchecked evaluation. Tabulated kinds return the interpolated table
    /// value without clipping.
    fn eval_raw(&self, a: f64, b: f64) -> f64;

    fn label(&self) -> String;

    fn is_tabulated(&self) -> bool;

    fn table(&self) -> Option<&Table>;

    /// Checked evaluation: inputs must lie in [0,1]; the result is clipped into [0,1].
    fn eval(&self, a: f64, b: f64) -> Result<f64> {
        check_unit("a", a)?;
        check_unit("b", b)?;
        if self.is_tabulated() && self.table().is_none() {
            return Err(Error::Configuration(format!(
                "{} has no table",
                self.label()
            )));
        }
        Ok(self.eval_raw(a, b).clamp(0.0, 1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangularNorm {
    pub kind: TNormKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Table>,
}

impl TriangularNorm {
    pub const fn builtin(kind: TNormKind) -> Self {
        Self { kind, table: None }
    }

    pub fn minimum() -> Self {
        Self::builtin(TNormKind::Minimum)
    }

    pub fn product() -> Self {
        Self::builtin(TNormKind::Product)
    }

    pub fn lukasiewicz() -> Self {
        Self::builtin(TNormKind::Lukasiewicz)
    }

    pub fn tabulated(table: Table) -> Self {
        Self {
            kind: TNormKind::Tabulated,
            table: Some(table),
        }
    }

    pub fn builtins() -> [Self; 3] {
        [Self::minimum(), Self::product(), Self::lukasiewicz()]
    }
}

impl TriangularOp for TriangularNorm {
    fn identity(&self) -> f64 {
        1.0
    }

    fn eval_raw(&self, a: f64, b: f64) -> f64 {
        match self.kind {
            TNormKind::Minimum => a.min(b),
            TNormKind::Product => a * b,
            // written so that b = 1 returns a exactly
            TNormKind::Lukasiewicz => (a - (1.0 - b)).max(0.0),
            TNormKind::Tabulated => self
                .table
                .as_ref()
                .map_or(f64::NAN, |t| t.interpolate(a, b)),
        }
    }

    fn label(&self) -> String {
        format!("tnorm:{}", self.kind.name())
    }

    fn is_tabulated(&self) -> bool {
        self.kind == TNormKind::Tabulated
    }

    fn table(&self) -> Option<&Table> {
        self.table.as_ref()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangularConorm {
    pub kind: TConormKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Table>,
}

impl TriangularConorm {
    pub const fn builtin(kind: TConormKind) -> Self {
        Self { kind, table: None }
    }

    pub fn maximum() -> Self {
        Self::builtin(TConormKind::Maximum)
    }

    pub fn probabilistic_sum() -> Self {
        Self::builtin(TConormKind::ProbabilisticSum)
    }

    pub fn bounded_sum() -> Self {
        Self::builtin(TConormKind::BoundedSum)
    }

    pub fn tabulated(table: Table) -> Self {
        Self {
            kind: TConormKind::Tabulated,
            table: Some(table),
        }
    }

    pub fn builtins() -> [Self; 3] {
        [
            Self::maximum(),
            Self::probabilistic_sum(),
            Self::bounded_sum(),
        ]
    }
}

impl TriangularOp for TriangularConorm {
    fn identity(&self) -> f64 {
        0.0
    }

    fn eval_raw(&self, a: f64, b: f64) -> f64 {
        match self.kind {
            TConormKind::Maximum => a.max(b),
            TConormKind::ProbabilisticSum => a + b - a * b,
            TConormKind::BoundedSum => (a + b).min(1.0),
            TConormKind::Tabulated => self
                .table
                .as_ref()
                .map_or(f64::NAN, |t| t.interpolate(a, b)),
        }
    }

    fn label(&self) -> String {
        format!("tconorm:{}", self.kind.name())
    }

    fn is_tabulated(&self) -> bool {
        self.kind == TConormKind::Tabulated
    }

    fn table(&self) -> Option<&Table> {
        self.table.as_ref()
    }
}

/// Result of an idempotency scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Idempotency {
    pub holds: bool,
    /// Grid point with the largest |op(a,a) − a|, present only when `holds` is false.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value_at_witness: Option<f64>,
}

/// Tracks the worst violation seen so far; ties keep the earliest tuple.
struct Worst {
    args: Vec<f64>,
    lhs: f64,
    rhs: f64,
    excess: f64,
}

impl Worst {
    fn offer(slot: &mut Option<Worst>, excess: f64, args: &[f64], lhs: f64, rhs: f64) {
        if !(excess > AXIOM_TOL) {
            return;
        }
        if slot.as_ref().is_none_or(|w| excess > w.excess) {
            *slot = Some(Worst {
                args: args.to_vec(),
                lhs,
                rhs,
                excess,
            });
        }
    }

    fn into_witness(slot: Option<Worst>) -> Option<Witness> {
        slot.map(|w| Witness::Grid {
            args: w.args,
            lhs: w.lhs,
            rhs: w.rhs,
        })
    }
}

fn validate_grid(grid_resolution: usize) -> Result<Vec<f64>> {
    if grid_resolution < 3 {
        return Err(Error::domain(
            "grid_resolution",
            grid_resolution as f64,
            "must be at least 3",
        ));
    }
    Ok(uniform_grid(grid_resolution))
}

fn range_excess(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        (v - 1.0).max(0.0) + (-v).max(0.0)
    }
}

/// Exhaustive grid check of commutativity, associativity, the identity
/// (boundary) law and monotonicity.
///
/// The boundary record also counts values escaping [0,1] at `op(a, identity)`.
/// Tabulated operations are checked with raw (unclipped) table values.
pub fn check_triangular_axioms<Op: TriangularOp>(
    op: &Op,
    grid_resolution: usize,
) -> Result<AxiomReport> {
    let grid = validate_grid(grid_resolution)?;
    if op.is_tabulated() && op.table().is_none() {
        return Err(Error::Configuration(format!("{} has no table", op.label())));
    }
    let f = |a: f64, b: f64| op.eval_raw(a, b);
    let g = grid.len();

    let mut comm = None;
    for &a in &grid {
        for &b in &grid {
            let (l, r) = (f(a, b), f(b, a));
            Worst::offer(&mut comm, (l - r).abs(), &[a, b], l, r);
        }
    }

    let mut assoc = None;
    for &a in &grid {
        for &b in &grid {
            let ab = f(a, b);
            for &c in &grid {
                let l = f(ab, c);
                let r = f(a, f(b, c));
                Worst::offer(&mut assoc, (l - r).abs(), &[a, b, c], l, r);
            }
        }
    }

    let id = op.identity();
    let mut boundary = None;
    for &a in &grid {
        let l = f(a, id);
        let excess = (l - a).abs() + range_excess(l);
        Worst::offer(&mut boundary, excess, &[a, id], l, a);
    }

    // a ≤ c and b ≤ d  ⇒  op(a,b) ≤ op(c,d)
    let mut mono = None;
    for (i, &a) in grid.iter().enumerate() {
        for (j, &b) in grid.iter().enumerate() {
            let l = f(a, b);
            for &c in &grid[i..] {
                for &d in &grid[j..] {
                    let r = f(c, d);
                    Worst::offer(&mut mono, l - r, &[a, b, c, d], l, r);
                }
            }
        }
    }

    let continuity = if op.is_tabulated() {
        "not checked numerically; tabulated values are joined by bilinear interpolation"
    } else {
        "analytic: closed-form built-in"
    };
    let pairs = g * g;
    let mono_count = (g * (g + 1) / 2).pow(2);
    let report = AxiomReport {
        model: op.label(),
        seed: None,
        samples: pairs,
        axioms: vec![
            AxiomRecord::new("commutativity", pairs, Worst::into_witness(comm)),
            AxiomRecord::new("associativity", pairs * g, Worst::into_witness(assoc)),
            AxiomRecord::new("boundary", g, Worst::into_witness(boundary)),
            AxiomRecord::new("monotonicity", mono_count, Worst::into_witness(mono)),
        ],
        constants: vec![
            ("grid_resolution".into(), g.to_string()),
            ("tolerance".into(), format!("{AXIOM_TOL:e}")),
            ("continuity".into(), continuity.into()),
            (
                "witness_rule".into(),
                "largest violation, earliest on ties".into(),
            ),
        ],
    };
    Ok(report)
}

/// Scans the grid for `op(a,a) = a` within [`AXIOM_TOL`].
pub fn is_idempotent<Op: TriangularOp>(op: &Op, grid_resolution: usize) -> Result<Idempotency> {
    let grid = validate_grid(grid_resolution)?;
    let mut worst = None;
    for &a in &grid {
        let v = op.eval_raw(a, a);
        Worst::offer(&mut worst, (v - a).abs(), &[a], v, a);
    }
    Ok(match worst {
        None => Idempotency {
            holds: true,
            witness: None,
            value_at_witness: None,
        },
        Some(w) => Idempotency {
            holds: false,
            witness: Some(w.args[0]),
            value_at_witness: Some(w.lhs),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::AxiomStatus;

    #[test]
    fn tnorm_examples() {
        assert_eq!(TriangularNorm::product().eval(0.5, 0.4).unwrap(), 0.2);
        assert_eq!(TriangularNorm::minimum().eval(0.3, 0.7).unwrap(), 0.3);
        assert_eq!(TriangularNorm::lukasiewicz().eval(0.5, 0.4).unwrap(), 0.0);
        for op in TriangularNorm::builtins() {
            assert_eq!(op.eval(0.42, 1.0).unwrap(), 0.42);
        }
    }

    #[test]
    fn tconorm_examples() {
        let p = TriangularConorm::probabilistic_sum()
            .eval(0.5, 0.4)
            .unwrap();
        assert!((p - 0.7).abs() < 1e-15);
        assert_eq!(TriangularConorm::maximum().eval(0.3, 0.7).unwrap(), 0.7);
        for op in TriangularConorm::builtins() {
            assert_eq!(op.eval(0.42, 0.0).unwrap(), 0.42);
        }
    }

    #[test]
    fn out_of_range_inputs_are_domain_errors() {
        let op = TriangularNorm::minimum();
        assert!(matches!(
            op.eval(1.5, 0.2),
            Err(Error::Domain { field: "a", .. })
        ));
        assert!(matches!(
            op.eval(0.2, -0.1),
            Err(Error::Domain { field: "b", .. })
        ));
        assert!(op.eval(f64::NAN, 0.2).is_err());
    }

    #[test]
    fn tabulated_without_table_is_configuration_error() {
        let op = TriangularNorm {
            kind: TNormKind::Tabulated,
            table: None,
        };
        assert!(matches!(op.eval(0.2, 0.3), Err(Error::Configuration(_))));
        assert!(check_triangular_axioms(&op, 5).is_err());
    }

    #[test]
    fn tabulated_min_reproduces_grid_and_interpolates() {
        let table = Table::from_fn(11, f64::min).unwrap();
        let op = TriangularNorm::tabulated(table);
        assert!((op.eval(0.3, 0.7).unwrap() - 0.3).abs() < 1e-15);
        // halfway between grid lines along b: min(0.3, ·) is flat there
        assert!((op.eval(0.3, 0.75).unwrap() - 0.3).abs() < 1e-15);
        let report = check_triangular_axioms(&op, 11).unwrap();
        assert!(report.all_satisfied(), "{report:?}");
    }

    #[test]
    fn unclipped_sum_table_fails_boundary_at_one_one() {
        let table = Table::from_fn(11, |a, b| a + b).unwrap();
        let op = TriangularNorm::tabulated(table);
        // checked evaluation clips
        assert_eq!(op.eval(1.0, 1.0).unwrap(), 1.0);
        let report = check_triangular_axioms(&op, 11).unwrap();
        let boundary = report.get("boundary").unwrap();
        assert_eq!(boundary.status, AxiomStatus::Fail);
        match boundary.witness.as_ref().unwrap() {
            Witness::Grid { args, lhs, .. } => {
                assert_eq!(args, &vec![1.0, 1.0]);
                assert_eq!(*lhs, 2.0);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn grid_resolution_below_three_rejected() {
        assert!(check_triangular_axioms(&TriangularNorm::minimum(), 2).is_err());
        assert!(is_idempotent(&TriangularNorm::minimum(), 1).is_err());
    }

    #[test]
    fn idempotency_examples() {
        assert!(is_idempotent(&TriangularNorm::minimum(), 11).unwrap().holds);
        assert!(
            is_idempotent(&TriangularConorm::maximum(), 11)
                .unwrap()
                .holds
        );
        let prod = is_idempotent(&TriangularNorm::product(), 11).unwrap();
        assert!(!prod.holds);
        assert_eq!(prod.witness, Some(0.5));
        assert_eq!(prod.value_at_witness, Some(0.25));
    }

    #[test]
    fn non_monotone_table_reports_four_tuple() {
        // 1 − min(a,b) is decreasing
        let table = Table::from_fn(5, |a, b| 1.0 - a.min(b)).unwrap();
        let op = TriangularNorm::tabulated(table);
        let report = check_triangular_axioms(&op, 5).unwrap();
        let rec = report.get("monotonicity").unwrap();
        assert_eq!(rec.status, AxiomStatus::Fail);
        let w = rec.witness.as_ref().unwrap();
        assert!(w.lhs() > w.rhs());
        if let Witness::Grid { args, .. } = w {
            assert_eq!(args.len(), 4);
            assert!(args[0] <= args[2] && args[1] <= args[3]);
        }
    }

    #[test]
    fn csv_layout_round_trip_and_shape_errors() {
        let table = Table::from_fn(4, |a, b| a * b).unwrap();
        let text = table.to_csv_string();
        let back = Table::from_csv_reader(text.as_bytes()).unwrap();
        assert_eq!(back, table);

        let ragged = "x,0,1\n0,0,0\n1,0\n";
        assert!(matches!(
            Table::from_csv_reader(ragged.as_bytes()),
            Err(Error::Configuration(_))
        ));
        let bad_axis = "x,0,0.5\n0,0,0\n1,0,1\n";
        assert!(Table::from_csv_reader(bad_axis.as_bytes()).is_err());
        let junk = "x,0,1\n0,0,zero\n1,0,1\n";
        assert!(Table::from_csv_reader(junk.as_bytes()).is_err());
    }
}
