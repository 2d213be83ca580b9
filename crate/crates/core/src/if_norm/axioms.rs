//! Sampling checker for the thirteen normed-algebra axioms plus the
//! idempotency postulate on the triangular pair.
//!
//! Axiom ids are the Roman numerals "i".."xiv":
//!
//! | id | statement |
//! |----|-----------|
//! | i | μ(x,t) + ν(x,t) ≤ 1 |
//! | ii | μ(x,t) > 0 |
//! | iii | μ(x,t) = 1 ⇔ x = θ |
//! | iv | μ(cx,t) = μ(x,t/\|c\|) |
//! | v | μ(x,s) ∗ μ(y,t) ≤ μ(x+y,s+t) |
//! | vi | max{μ(x,s), μ(y,t)} ≤ μ(xy,s+t) |
//! | vii | μ(x,t) → 1 as t → ∞ and → 0 as t → 0 |
//! | viii | ν(x,t) < 1 |
//! | ix | ν(x,t) = 0 ⇔ x = θ |
//! | x | ν(cx,t) = ν(x,t/\|c\|) |
//! | xi | ν(x,s) ⋄ ν(y,t) ≥ ν(x+y,s+t) |
//! | xii | min{ν(x,s), ν(y,t)} ≥ ν(xy,s+t) |
//! | xiii | ν(x,t) → 0 as t → ∞ and → 1 as t → 0 |
//! | xiv | a ∗ a = a and a ⋄ a = a on [0,1] |
//!
//! The witness of a failed axiom is the failing sample with the smallest index.

use rand::Rng;

use super::{FuzzyDegreePair, IFNormModel};
use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::report::{AxiomRecord, AxiomReport, AxiomStatus, SearchSummary, Witness};
use crate::sampling::{log_uniform, substream, uniform_element, unit_direction};
use crate::triangular::{is_idempotent, TriangularOp};

/// Geometric t-ladder standing in for the limits t → 0 and t → ∞.
pub const LIMIT_LADDER: [f64; 13] = [
    1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6,
];
/// Required distance to the limit value at each end of the ladder.
pub const LIMIT_TOLERANCE: f64 = 0.01;
/// Crisp norms for which the ladder can resolve both limits.
pub const LIMIT_NORM_RANGE: (f64, f64) = (1e-4, 1e2);
/// Budget of the unbalanced-pair search for (vi)/(xii).
pub const TARGETED_CANDIDATES: usize = 1000;

const EQ_TOL: f64 = 1e-12;
const IDEMPOTENCY_GRID: usize = 11;
const TARGETED_STREAM: u64 = 0x7a;

/// Sampling laws for the random phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomSampling {
    pub coord_range: (f64, f64),
    pub time_range: (f64, f64),
    pub scale_range: (f64, f64),
}

impl Default for AxiomSampling {
    fn default() -> Self {
        Self {
            coord_range: (-10.0, 10.0),
            time_range: (1e-2, 1e2),
            scale_range: (1e-2, 1e2),
        }
    }
}

const POINTWISE: [&str; 10] = ["i", "ii", "iii", "iv", "v", "vi", "viii", "ix", "x", "xi"];

fn deg(x: &AlgebraElement, t: f64) -> FuzzyDegreePair {
    FuzzyDegreePair::induced(x.crisp_norm(), t)
}

/// Evaluates one axiom at the given arguments: `(lhs, rhs, violated)`.
///
/// `y` is required by (v), (vi), (xi), (xii); `c` by (iv), (x). For the limit
/// axioms (vii)/(xiii), `s < t` selects the monotonicity test between two
/// ladder points and `s == t` selects the end-point test at that ladder end.
pub fn evaluate_axiom(
    model: &IFNormModel,
    id: &str,
    x: &AlgebraElement,
    y: Option<&AlgebraElement>,
    c: Option<f64>,
    s: f64,
    t: f64,
) -> Result<(f64, f64, bool)> {
    model.owns(x)?;
    let need_y =
        || y.ok_or_else(|| Error::Structural(format!("axiom ({id}) needs a second element")));
    let need_c = || c.ok_or_else(|| Error::Structural(format!("axiom ({id}) needs a scalar")));
    let tn = |a: f64, b: f64| model.tnorm.eval(a, b);
    let tc = |a: f64, b: f64| model.tconorm.eval(a, b);
    let out = match id {
        "i" => {
            let d = deg(x, t);
            let l = d.mu + d.nu;
            (l, 1.0, l > 1.0 + EQ_TOL)
        }
        "ii" => {
            let l = deg(x, t).mu;
            (l, 0.0, !(l > 0.0))
        }
        "iii" => {
            let l = deg(x, t).mu;
            let bad = if x.is_zero() { l != 1.0 } else { l >= 1.0 };
            (l, 1.0, bad)
        }
        "iv" | "x" => {
            let c = need_c()?;
            let lhs = deg(&x.scale(c), t);
            let rhs = deg(x, t / c.abs());
            let (l, r) = if id == "iv" {
                (lhs.mu, rhs.mu)
            } else {
                (lhs.nu, rhs.nu)
            };
            (l, r, (l - r).abs() > EQ_TOL)
        }
        "v" => {
            let y = need_y()?;
            let l = tn(deg(x, s).mu, deg(y, t).mu)?;
            let r = deg(&x.add(y)?, s + t).mu;
            (l, r, l > r + EQ_TOL)
        }
        "vi" => {
            let y = need_y()?;
            let l = deg(x, s).mu.max(deg(y, t).mu);
            let r = deg(&x.mul(y)?, s + t).mu;
            (l, r, l > r + EQ_TOL)
        }
        "viii" => {
            let l = deg(x, t).nu;
            (l, 1.0, !(l < 1.0))
        }
        "ix" => {
            let l = deg(x, t).nu;
            let bad = if x.is_zero() { l != 0.0 } else { l <= 0.0 };
            (l, 0.0, bad)
        }
        "xi" => {
            let y = need_y()?;
            let l = tc(deg(x, s).nu, deg(y, t).nu)?;
            let r = deg(&x.add(y)?, s + t).nu;
            (l, r, l < r - EQ_TOL)
        }
        "xii" => {
            let y = need_y()?;
            let l = deg(x, s).nu.min(deg(y, t).nu);
            let r = deg(&x.mul(y)?, s + t).nu;
            (l, r, l < r - EQ_TOL)
        }
        "vii" | "xiii" => limit_sides(id, x, s, t)?,
        other => {
            return Err(Error::Structural(format!(
                "axiom ({other}) has no pointwise form"
            )))
        }
    };
    Ok(out)
}

fn limit_sides(id: &str, x: &AlgebraElement, s: f64, t: f64) -> Result<(f64, f64, bool)> {
    let lo = LIMIT_LADDER[0];
    let hi = LIMIT_LADDER[LIMIT_LADDER.len() - 1];
    let membership = id == "vii";
    let pick = |d: FuzzyDegreePair| if membership { d.mu } else { d.nu };
    if s < t {
        let (l, r) = (pick(deg(x, s)), pick(deg(x, t)));
        // μ non-decreasing, ν non-increasing
        let bad = if membership {
            l > r + EQ_TOL
        } else {
            l < r - EQ_TOL
        };
        return Ok((l, r, bad));
    }
    let v = pick(deg(x, t));
    // distance from the limit value at this end of the ladder
    let dist = match (t == hi, t == lo, membership) {
        (true, _, true) => 1.0 - v,
        (true, _, false) => v,
        (_, true, true) => v,
        (_, true, false) => 1.0 - v,
        _ => {
            return Err(Error::Structural(format!(
                "limit axiom end-point test needs t at a ladder end, got {t}"
            )))
        }
    };
    Ok((dist, LIMIT_TOLERANCE, !(dist < LIMIT_TOLERANCE)))
}

/// Recomputes a stored element witness: `(lhs, rhs, violated)`.
///
/// Returns `None` for grid witnesses, which belong to the triangular pair.
pub fn replay_witness(
    model: &IFNormModel,
    id: &str,
    witness: &Witness,
) -> Result<Option<(f64, f64, bool)>> {
    match witness {
        Witness::Grid { .. } => Ok(None),
        Witness::Elements { x, y, c, s, t, .. } => {
            evaluate_axiom(model, id, x, y.as_ref(), *c, *s, *t).map(Some)
        }
    }
}

struct Sample {
    x: AlgebraElement,
    y: AlgebraElement,
    s: f64,
    t: f64,
    c: f64,
}

fn draw(rng: &mut impl Rng, model: &IFNormModel, law: &AxiomSampling) -> Sample {
    let kind = model.kind();
    let (lo, hi) = law.coord_range;
    let x = uniform_element(rng, kind, lo, hi);
    let y = uniform_element(rng, kind, lo, hi);
    let s = log_uniform(rng, law.time_range.0, law.time_range.1);
    let t = log_uniform(rng, law.time_range.0, law.time_range.1);
    let mag = log_uniform(rng, law.scale_range.0, law.scale_range.1);
    let c = if rng.random::<bool>() { mag } else { -mag };
    Sample { x, y, s, t, c }
}

fn witness(
    x: &AlgebraElement,
    y: Option<&AlgebraElement>,
    c: Option<f64>,
    s: f64,
    t: f64,
    (lhs, rhs): (f64, f64),
) -> Witness {
    Witness::Elements {
        x: x.clone(),
        y: y.cloned(),
        c,
        s,
        t,
        lhs,
        rhs,
    }
}

/// First failure of one axiom across the random phase.
#[derive(Default)]
struct Tally {
    used: usize,
    witness: Option<Witness>,
}

impl Tally {
    fn offer(&mut self, found: Option<Witness>) {
        self.used += 1;
        if self.witness.is_none() {
            self.witness = found;
        }
    }
}

/// Scans the ladder for one element; returns the first violating (s, t, lhs, rhs).
fn ladder_failure(id: &str, x: &AlgebraElement) -> Result<Option<(f64, f64, f64, f64)>> {
    for w in LIMIT_LADDER.windows(2) {
        let (l, r, bad) = limit_sides(id, x, w[0], w[1])?;
        if bad {
            return Ok(Some((w[0], w[1], l, r)));
        }
    }
    for end in [LIMIT_LADDER[0], LIMIT_LADDER[LIMIT_LADDER.len() - 1]] {
        let (l, r, bad) = limit_sides(id, x, end, end)?;
        if bad {
            return Ok(Some((end, end, l, r)));
        }
    }
    Ok(None)
}

/// Deterministic unbalanced pairs (x large, y small): scaled units first,
/// then random directions.
fn targeted_pairs(
    model: &IFNormModel,
    seed: u64,
) -> impl Iterator<Item = (AlgebraElement, AlgebraElement, f64, f64)> + '_ {
    let kind = model.kind();
    let unit = AlgebraElement::unit(kind).ok();
    let structured: Vec<_> = match &unit {
        Some(e) => {
            let mut v = Vec::new();
            for a in 1..=4 {
                for b in 1..=6 {
                    for st in [1.0, 0.1, 10.0] {
                        let alpha = 10f64.powi(a);
                        let beta = 10f64.powi(-b);
                        v.push((e.scale(alpha), e.scale(beta), st, st));
                    }
                }
            }
            v
        }
        None => Vec::new(),
    };
    let mut rng = substream(seed, TARGETED_STREAM);
    let random = std::iter::repeat_with(move || {
        let alpha = log_uniform(&mut rng, 1e1, 1e4);
        let beta = log_uniform(&mut rng, 1e-6, 1e-1);
        let st = log_uniform(&mut rng, 1e-2, 1e2);
        let x = unit_direction(&mut rng, kind).scale(alpha);
        let y = unit_direction(&mut rng, kind).scale(beta);
        (x, y, st, st)
    });
    structured
        .into_iter()
        .chain(random)
        .take(TARGETED_CANDIDATES)
}

fn targeted_search(
    model: &IFNormModel,
    id: &str,
    seed: u64,
) -> Result<(SearchSummary, Option<Witness>)> {
    let mut tried = 0;
    for (k, (x, y, s, t)) in targeted_pairs(model, seed).enumerate() {
        tried += 1;
        let (l, r, bad) = evaluate_axiom(model, id, &x, Some(&y), None, s, t)?;
        if bad {
            let summary = SearchSummary {
                family: "unbalanced pairs: x = 10^a·e, y = 10^-b·e, then random directions".into(),
                candidates_tried: tried,
                first_hit: Some(k),
            };
            return Ok((summary, Some(witness(&x, Some(&y), None, s, t, (l, r)))));
        }
    }
    Ok((
        SearchSummary {
            family: "unbalanced pairs: x = 10^a·e, y = 10^-b·e, then random directions".into(),
            candidates_tried: tried,
            first_hit: None,
        },
        None,
    ))
}

/// Runs every axiom on `sample_count` seeded tuples.
pub fn check_ifna_axioms(
    model: &IFNormModel,
    sample_count: usize,
    seed: u64,
) -> Result<AxiomReport> {
    check_ifna_axioms_with(model, sample_count, seed, &AxiomSampling::default())
}

pub fn check_ifna_axioms_with(
    model: &IFNormModel,
    sample_count: usize,
    seed: u64,
    law: &AxiomSampling,
) -> Result<AxiomReport> {
    if sample_count == 0 {
        return Err(Error::domain("sample_count", 0.0, "must be at least 1"));
    }
    let kind = model.kind();
    let zero = AlgebraElement::zero(kind);
    let mut rng = substream(seed, 0);

    let mut tallies: Vec<(&str, Tally)> = POINTWISE
        .iter()
        .chain(["xii", "vii", "xiii"].iter())
        .map(|id| (*id, Tally::default()))
        .collect();
    let idx = |id: &str| {
        [
            "i", "ii", "iii", "iv", "v", "vi", "viii", "ix", "x", "xi", "xii", "vii", "xiii",
        ]
        .iter()
        .position(|k| *k == id)
        .unwrap()
    };
    let mut all_products_zero = true;
    let mut limit_skipped = 0usize;

    for _ in 0..sample_count {
        let Sample { x, y, s, t, c } = draw(&mut rng, model, law);
        for id in ["i", "ii", "viii"] {
            let (l, r, bad) = evaluate_axiom(model, id, &x, None, None, s, t)?;
            tallies[idx(id)]
                .1
                .offer(bad.then(|| witness(&x, None, None, s, t, (l, r))));
        }
        for id in ["iii", "ix"] {
            // both directions of the equivalence: θ at t, and the sample at t
            let mut found = None;
            for e in [&zero, &x] {
                let (l, r, bad) = evaluate_axiom(model, id, e, None, None, s, t)?;
                if bad {
                    found = Some(witness(e, None, None, s, t, (l, r)));
                    break;
                }
            }
            tallies[idx(id)].1.offer(found);
        }
        for id in ["iv", "x"] {
            let (l, r, bad) = evaluate_axiom(model, id, &x, None, Some(c), s, t)?;
            tallies[idx(id)]
                .1
                .offer(bad.then(|| witness(&x, None, Some(c), s, t, (l, r))));
        }
        for id in ["v", "vi", "xi", "xii"] {
            let (l, r, bad) = evaluate_axiom(model, id, &x, Some(&y), None, s, t)?;
            tallies[idx(id)]
                .1
                .offer(bad.then(|| witness(&x, Some(&y), None, s, t, (l, r))));
        }
        all_products_zero &= x.mul(&y)?.is_zero();

        let n = x.crisp_norm();
        if n < LIMIT_NORM_RANGE.0 || n > LIMIT_NORM_RANGE.1 {
            limit_skipped += 1;
        } else {
            for id in ["vii", "xiii"] {
                let found = ladder_failure(id, &x)?
                    .map(|(s, t, l, r)| witness(&x, None, None, s, t, (l, r)));
                tallies[idx(id)].1.offer(found);
            }
        }
    }

    let mut records = Vec::new();
    let mut take = |id: &str| std::mem::take(&mut tallies[idx(id)].1);
    for id in ["i", "ii", "iii", "iv", "v"] {
        let t = take(id);
        records.push(AxiomRecord::new(id, t.used, t.witness));
    }
    let mut multiplicative = Vec::new();
    for id in ["vi", "xii"] {
        let t = take(id);
        let (summary, targeted) = targeted_search(model, id, seed)?;
        let from_random = t.witness.is_some();
        let mut rec = AxiomRecord::new(id, t.used, t.witness.or(targeted));
        rec.search = Some(summary);
        if rec.witness.is_none() && all_products_zero {
            rec.status = AxiomStatus::Vacuous;
            rec.note = Some("every sampled product xy is θ, so μ(xy,·) = 1 and ν(xy,·) = 0".into());
        } else if rec.witness.is_some() {
            rec.note = Some(if from_random {
                "witness from random sampling".into()
            } else {
                "witness from targeted search".into()
            });
        }
        multiplicative.push(rec);
    }
    let lim_note = format!(
        "ladder {:e}..{:e} ({} points); samples with ‖x‖ outside [{:e}, {:e}] skipped ({} skipped); θ is excluded since μ(θ,t) = 1 for all t",
        LIMIT_LADDER[0],
        LIMIT_LADDER[LIMIT_LADDER.len() - 1],
        LIMIT_LADDER.len(),
        LIMIT_NORM_RANGE.0,
        LIMIT_NORM_RANGE.1,
        limit_skipped
    );
    let vi = multiplicative.remove(0);
    let xii = multiplicative.remove(0);
    records.push(vi);
    let t = take("vii");
    records.push(AxiomRecord::new("vii", t.used, t.witness).with_note(lim_note.clone()));
    for id in ["viii", "ix", "x", "xi"] {
        let t = take(id);
        records.push(AxiomRecord::new(id, t.used, t.witness));
    }
    records.push(xii);
    let t = take("xiii");
    records.push(AxiomRecord::new("xiii", t.used, t.witness).with_note(lim_note));
    records.push(idempotency_record(model)?);

    Ok(AxiomReport {
        model: model.describe(),
        seed: Some(seed),
        samples: sample_count,
        axioms: records,
        constants: constants(law),
    })
}

fn idempotency_record(model: &IFNormModel) -> Result<AxiomRecord> {
    let tn = is_idempotent(&model.tnorm, IDEMPOTENCY_GRID)?;
    let tc = is_idempotent(&model.tconorm, IDEMPOTENCY_GRID)?;
    let (witness, note) = match (tn.witness, tc.witness) {
        (Some(a), _) => (
            Some(Witness::Grid {
                args: vec![a],
                lhs: model.tnorm.eval_raw(a, a),
                rhs: a,
            }),
            Some(format!("{} is not idempotent", model.tnorm.label())),
        ),
        (None, Some(a)) => (
            Some(Witness::Grid {
                args: vec![a],
                lhs: model.tconorm.eval_raw(a, a),
                rhs: a,
            }),
            Some(format!("{} is not idempotent", model.tconorm.label())),
        ),
        (None, None) => (None, None),
    };
    let mut rec = AxiomRecord::new("xiv", 2 * IDEMPOTENCY_GRID, witness);
    rec.note = note;
    Ok(rec)
}

fn constants(law: &AxiomSampling) -> Vec<(String, String)> {
    vec![
        (
            "element_law".into(),
            format!(
                "coordinates uniform in [{}, {}]",
                law.coord_range.0, law.coord_range.1
            ),
        ),
        (
            "time_law".into(),
            format!(
                "log-uniform in [{:e}, {:e}]",
                law.time_range.0, law.time_range.1
            ),
        ),
        (
            "scalar_law".into(),
            format!(
                "random sign, magnitude log-uniform in [{:e}, {:e}]",
                law.scale_range.0, law.scale_range.1
            ),
        ),
        (
            "limit_ladder".into(),
            LIMIT_LADDER
                .iter()
                .map(|t| format!("{t:e}"))
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("limit_tolerance".into(), LIMIT_TOLERANCE.to_string()),
        ("equality_tolerance".into(), format!("{EQ_TOL:e}")),
        (
            "targeted_candidates".into(),
            TARGETED_CANDIDATES.to_string(),
        ),
        (
            "witness_rule".into(),
            "smallest failing sample index; targeted search only when sampling finds none".into(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ModelKind;
    use crate::triangular::{TriangularConorm, TriangularNorm};

    fn matrix2() -> IFNormModel {
        IFNormModel::induced_min_max(ModelKind::Matrix { n: 2 })
    }

    #[test]
    fn diag_ten_and_thousandth_violates_vi_and_xii() {
        let m = matrix2();
        let x = AlgebraElement::diagonal(&[10.0, 10.0]).unwrap();
        let y = AlgebraElement::diagonal(&[0.001, 0.001]).unwrap();
        let (l, r, bad) = evaluate_axiom(&m, "vi", &x, Some(&y), None, 1.0, 1.0).unwrap();
        assert!(bad);
        assert!((l - 0.99859).abs() < 5e-6, "{l}");
        assert!((r - 0.99298).abs() < 5e-6, "{r}");
        let (_, _, bad) = evaluate_axiom(&m, "xii", &x, Some(&y), None, 1.0, 1.0).unwrap();
        assert!(bad);
    }

    #[test]
    fn null_product_multiplicative_axioms_are_vacuous() {
        let m = IFNormModel::induced_min_max(ModelKind::NullProduct { dim: 2 });
        let report = check_ifna_axioms(&m, 500, 1).unwrap();
        for id in ["vi", "xii"] {
            assert_eq!(report.get(id).unwrap().status, AxiomStatus::Vacuous);
        }
    }

    #[test]
    fn product_pair_fails_only_idempotency_postulate() {
        let m = IFNormModel::induced(
            ModelKind::Scalar,
            TriangularNorm::product(),
            TriangularConorm::probabilistic_sum(),
        );
        let report = check_ifna_axioms(&m, 300, 5).unwrap();
        let xiv = report.get("xiv").unwrap();
        assert_eq!(xiv.status, AxiomStatus::Fail);
        assert_eq!(xiv.witness.as_ref().unwrap().lhs(), 0.25);
        for id in ["i", "ii", "iii", "iv", "v", "viii", "ix", "x", "xi"] {
            assert!(report.get(id).unwrap().status.is_satisfied(), "{id}");
        }
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(check_ifna_axioms(&matrix2(), 0, 1).is_err());
    }

    #[test]
    fn ladder_end_test_requires_ladder_end() {
        let m = matrix2();
        let x = AlgebraElement::unit(m.kind()).unwrap();
        assert!(evaluate_axiom(&m, "vii", &x, None, None, 5.0, 5.0).is_err());
        let (_, _, bad) = evaluate_axiom(&m, "vii", &x, None, None, 1e6, 1e6).unwrap();
        assert!(!bad);
        // θ never approaches 0 as t → 0
        let z = AlgebraElement::zero(m.kind());
        let (l, _, bad) = evaluate_axiom(&m, "vii", &z, None, None, 1e-6, 1e-6).unwrap();
        assert!(bad && l == 1.0);
    }
}
