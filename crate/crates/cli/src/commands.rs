use std::fs::File;
use std::path::Path;

use ifba_core::convergence::{
    fuzzy_cauchy, fuzzy_converges, limit_formulation_check, product_convergence_check,
    SequenceRule, SequenceSpec,
};
use ifba_core::divisors::{find_tdz_witness_on, verify_tdz_subset_singular, Side, TdzOutcome};
use ifba_core::if_norm::check_ifna_axioms;
use ifba_core::inversion::{
    closed_noninvertible_check, inverse_via_neumann, inversion_continuity_probe,
    invertible_ball_probe_at, neumann_inverse, resolvent_inverse,
};
use ifba_core::triangular::{
    check_triangular_axioms, is_idempotent, TConormKind, TNormKind, Table,
};
use ifba_core::{
    AlgebraElement, AlgebraModel, BallSpec, Error, IFNormModel, ModelKind, TriangularConorm,
    TriangularNorm, TriangularOp,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};
use crate::{RunOutput, Status, UsageError};

type Outcome = Result<(Status, Value), UsageError>;

fn core(e: Error) -> UsageError {
    match &e {
        Error::Domain { field, .. } => UsageError::new(format!("{field}: {e}")),
        _ => UsageError::new(e.to_string()),
    }
}

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn required<'a, T>(slot: &'a Option<T>, field: &str) -> Result<&'a T, UsageError> {
    slot.as_ref()
        .ok_or_else(|| UsageError::new(format!("{field}: required")))
}

fn model_kind(spec: &str) -> Result<ModelKind, UsageError> {
    spec.parse()
        .map_err(|e: Error| UsageError::new(format!("model: {e}")))
}

fn element(kind: ModelKind, field: &str, literal: &str) -> Result<AlgebraElement, UsageError> {
    let parsed = match literal.strip_prefix('@') {
        Some(path) => File::open(path)
            .map_err(Error::from)
            .and_then(|f| AlgebraElement::from_csv_reader(kind, f)),
        None => AlgebraModel::new(kind).parse_element(literal),
    };
    parsed.map_err(|e| UsageError::new(format!("{field}: {e}")))
}

fn opt_element(
    kind: ModelKind,
    field: &str,
    lit: &Option<String>,
) -> Result<Option<AlgebraElement>, UsageError> {
    lit.as_deref().map(|l| element(kind, field, l)).transpose()
}

fn ifn(c: &RunConfig) -> Result<IFNormModel, UsageError> {
    let kind = model_kind(required(&c.model, "model")?)?;
    Ok(IFNormModel::induced_min_max(kind))
}

/// Names of the element fields that describe one sequence.
struct SeqFields<'a> {
    family: (&'a str, &'a Option<String>),
    base: (&'a str, &'a Option<String>),
    dir: (&'a str, &'a Option<String>),
}

fn sequence(
    kind: ModelKind,
    f: SeqFields<'_>,
    input: Option<&Path>,
    horizon: Option<usize>,
) -> Result<SequenceSpec, UsageError> {
    let family = f.family.1.as_deref();
    let spec = if let Some(path) = input {
        if family.is_some_and(|s| s != "explicit") {
            return Err(UsageError::new(format!(
                "{}: explicit sequences come from input",
                f.family.0
            )));
        }
        let file = File::open(path).map_err(|e| UsageError::new(format!("input: {e}")))?;
        SequenceSpec::from_csv(kind, file).map_err(|e| UsageError::new(format!("input: {e}")))?
    } else {
        let name = family.ok_or_else(|| UsageError::new(format!("{}: required", f.family.0)))?;
        let base = || -> Result<AlgebraElement, UsageError> {
            element(kind, f.base.0, required(f.base.1, f.base.0)?)
        };
        let spec = match name {
            "constant" => SequenceSpec::constant(base()?),
            "powers" => SequenceSpec::powers(base()?),
            "partial-sums" | "partial_sums" => SequenceSpec::partial_sums(base()?),
            "alternating" => SequenceSpec::alternating(base()?),
            "perturbed" => {
                let d = element(kind, f.dir.0, required(f.dir.1, f.dir.0)?)?;
                SequenceSpec::perturbed(base()?, d)
            }
            "explicit" => return Err(UsageError::new("input: required by explicit sequences")),
            other => {
                return Err(UsageError::new(format!(
                    "{}: unknown family {other:?}",
                    f.family.0
                )))
            }
        };
        spec.map_err(core)?
    };
    match horizon {
        Some(h) => spec.with_horizon(h).map_err(core),
        None => Ok(spec),
    }
}

fn limit_of(
    kind: ModelKind,
    field: &str,
    given: &Option<String>,
    seq: &SequenceSpec,
) -> Result<AlgebraElement, UsageError> {
    match opt_element(kind, field, given)? {
        Some(l) => Ok(l),
        None => seq.nominal_limit().ok_or_else(|| {
            UsageError::new(format!(
                "{field}: required, the sequence has no known limit"
            ))
        }),
    }
}

fn check_tnorm(c: &RunConfig) -> Outcome {
    let grid = c.grid.expect("resolved");
    let table = || -> Result<Table, UsageError> {
        let p = required(&c.table, "table")?;
        Table::from_csv_path(p).map_err(|e| UsageError::new(format!("table: {e}")))
    };
    fn run<Op: TriangularOp>(op: &Op, grid: usize) -> Outcome {
        let report = check_triangular_axioms(op, grid).map_err(core)?;
        let idem = is_idempotent(op, grid).map_err(core)?;
        Ok((
            Status::Ok,
            json!({ "operation": op.label(), "report": value(&report), "idempotency": value(&idem) }),
        ))
    }
    match (&c.tnorm, &c.tconorm) {
        (Some(_), Some(_)) => Err(UsageError::new("tconorm: give either tnorm or tconorm")),
        (Some(name), None) => {
            let kind = TNormKind::parse(name)
                .ok_or_else(|| UsageError::new(format!("tnorm: unknown kind {name:?}")))?;
            let op = match kind {
                TNormKind::Tabulated => TriangularNorm::tabulated(table()?),
                k if c.table.is_some() => {
                    return Err(UsageError::new(format!(
                        "table: {} is not tabulated",
                        k.name()
                    )))
                }
                k => TriangularNorm::builtin(k),
            };
            run(&op, grid)
        }
        (None, Some(name)) => {
            let kind = TConormKind::parse(name)
                .ok_or_else(|| UsageError::new(format!("tconorm: unknown kind {name:?}")))?;
            let op = match kind {
                TConormKind::Tabulated => TriangularConorm::tabulated(table()?),
                k if c.table.is_some() => {
                    return Err(UsageError::new(format!(
                        "table: {} is not tabulated",
                        k.name()
                    )))
                }
                k => TriangularConorm::builtin(k),
            };
            run(&op, grid)
        }
        (None, None) => unreachable!("resolve picks a default"),
    }
}

fn check_axioms(c: &RunConfig) -> Outcome {
    let kind = model_kind(required(&c.model, "model")?)?;
    let tn = c.tnorm.as_deref().expect("resolved");
    let tc = c.tconorm.as_deref().expect("resolved");
    let tnorm = match TNormKind::parse(tn) {
        Some(TNormKind::Tabulated) | None => {
            return Err(UsageError::new(format!(
                "tnorm: expected a built-in kind, got {tn:?}"
            )))
        }
        Some(k) => TriangularNorm::builtin(k),
    };
    let tconorm = match TConormKind::parse(tc) {
        Some(TConormKind::Tabulated) | None => {
            return Err(UsageError::new(format!(
                "tconorm: expected a built-in kind, got {tc:?}"
            )))
        }
        Some(k) => TriangularConorm::builtin(k),
    };
    let model = IFNormModel::induced(kind, tnorm, tconorm);
    let report = check_ifna_axioms(&model, c.samples.unwrap(), c.seed.unwrap()).map_err(core)?;
    Ok((
        Status::Ok,
        json!({ "model": model.describe(), "report": value(&report) }),
    ))
}

fn first_sequence(c: &RunConfig, kind: ModelKind) -> Result<SequenceSpec, UsageError> {
    sequence(
        kind,
        SeqFields {
            family: ("sequence", &c.sequence),
            base: ("x", &c.x),
            dir: ("a", &c.a),
        },
        c.input.as_deref(),
        c.horizon,
    )
}

fn describe_rule(seq: &SequenceSpec) -> Value {
    match &seq.rule {
        // long lists are summarized; the rule is reproducible from the input file
        SequenceRule::Explicit { terms } => json!({ "family": "explicit", "terms": terms.len() }),
        rule => value(rule),
    }
}

fn converge(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let seq = first_sequence(c, model.kind())?;
    let limit = limit_of(model.kind(), "limit", &c.limit, &seq)?;
    let (r, t) = (c.r.unwrap(), c.t.unwrap());
    let verdict = fuzzy_converges(&model, &seq, &limit, r, t).map_err(core)?;
    let check = limit_formulation_check(&model, &seq, &limit, &[t]).map_err(core)?;
    Ok((
        Status::Ok,
        json!({
            "sequence": describe_rule(&seq),
            "horizon": seq.horizon,
            "limit": value(&limit),
            "verdict": value(&verdict),
            "limit_check": value(&check),
        }),
    ))
}

fn cauchy(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let seq = first_sequence(c, model.kind())?;
    let verdict =
        fuzzy_cauchy(&model, &seq, c.r.unwrap(), c.t.unwrap(), c.p_max.unwrap()).map_err(core)?;
    Ok((
        Status::Ok,
        json!({ "sequence": describe_rule(&seq), "horizon": seq.horizon, "verdict": value(&verdict) }),
    ))
}

fn product_limit(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let kind = model.kind();
    let sx = sequence(
        kind,
        SeqFields {
            family: ("sequence", &c.sequence),
            base: ("x", &c.x),
            dir: ("a", &c.a),
        },
        None,
        c.horizon,
    )?;
    let sy = sequence(
        kind,
        SeqFields {
            family: ("y_sequence", &c.y_sequence),
            base: ("y", &c.y),
            dir: ("b", &c.b),
        },
        None,
        c.horizon,
    )?;
    let lx = limit_of(kind, "limit", &c.limit, &sx)?;
    let ly = limit_of(kind, "y_limit", &c.y_limit, &sy)?;
    let rep = product_convergence_check(&model, &sx, &lx, &sy, &ly, c.r.unwrap(), c.t.unwrap())
        .map_err(core)?;
    let status = if rep.consistent {
        Status::Ok
    } else {
        Status::AssertionFailed
    };
    Ok((
        status,
        json!({
            "x_sequence": describe_rule(&sx),
            "y_sequence": describe_rule(&sy),
            "x_limit": value(&lx),
            "y_limit": value(&ly),
            "report": value(&rep),
        }),
    ))
}

fn series_outcome(
    res: ifba_core::Result<ifba_core::inversion::NeumannResult>,
    tol: f64,
) -> Outcome {
    match res {
        Ok(r) => {
            // the success contract covers ratios of norm at most 0.9
            let status = if r.crisp_certificate.norm_x <= 0.9 && r.residual > 10.0 * tol {
                Status::AssertionFailed
            } else {
                Status::Ok
            };
            Ok((status, value(&r)))
        }
        Err(Error::Diverged {
            terms,
            last_norm,
            trace,
        }) => Ok((
            Status::Diverged,
            json!({ "terms": terms, "last_norm": last_norm, "trace": trace }),
        )),
        Err(e) => Err(core(e)),
    }
}

fn neumann(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let x = element(model.kind(), "x", required(&c.x, "x")?)?;
    let ball = match (c.r, c.t) {
        (Some(r), Some(t)) => Some(BallSpec::at_zero(model.kind(), r, t).map_err(core)?),
        (None, None) => None,
        (Some(_), None) => return Err(UsageError::new("t: required together with r")),
        (None, Some(_)) => return Err(UsageError::new("r: required together with t")),
    };
    let tol = c.tol.unwrap();
    series_outcome(
        neumann_inverse(&model, &x, tol, c.max_terms.unwrap(), ball.as_ref()),
        tol,
    )
}

fn inverse(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let x = element(model.kind(), "x", required(&c.x, "x")?)?;
    let tol = c.tol.unwrap();
    series_outcome(
        inverse_via_neumann(&model, &x, tol, c.max_terms.unwrap()),
        tol,
    )
}

fn resolvent(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let lambda = *required(&c.lambda, "lambda")?;
    let x = element(model.kind(), "x", required(&c.x, "x")?)?;
    let tol = c.tol.unwrap();
    series_outcome(
        resolvent_inverse(&model, &x, lambda, tol, c.max_terms.unwrap()),
        tol,
    )
}

fn probe_open(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let x0 = element(model.kind(), "x0", c.x0.as_deref().unwrap())?;
    let rep = invertible_ball_probe_at(
        &model,
        &x0,
        c.t.unwrap(),
        c.r,
        c.samples.unwrap(),
        c.seed.unwrap(),
    )
    .map_err(core)?;
    // a failure below the bound contradicts openness; above it, it is expected data
    let status = if !rep.exceeds_bound && !rep.holds() {
        Status::AssertionFailed
    } else {
        Status::Ok
    };
    Ok((status, value(&rep)))
}

fn probe_closed(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let rep =
        closed_noninvertible_check(&model, c.samples.unwrap(), c.seed.unwrap()).map_err(core)?;
    let status = if rep.holds() {
        Status::Ok
    } else {
        Status::AssertionFailed
    };
    Ok((status, value(&rep)))
}

fn probe_continuity(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let x0 = element(model.kind(), "x0", c.x0.as_deref().unwrap())?;
    let rep = inversion_continuity_probe(
        &model,
        &x0,
        c.epsilon.unwrap(),
        c.samples.unwrap(),
        c.seed.unwrap(),
    )
    .map_err(core)?;
    let status = if rep.identity_case.holds {
        Status::Ok
    } else {
        Status::AssertionFailed
    };
    Ok((status, value(&rep)))
}

fn tdz(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let z = element(model.kind(), "z", required(&c.z, "z")?)?;
    let side = match c.side.as_deref().unwrap() {
        "left" => Side::Left,
        "right" => Side::Right,
        other => {
            return Err(UsageError::new(format!(
                "side: expected left or right, got {other:?}"
            )))
        }
    };
    let out = find_tdz_witness_on(
        &model,
        &z,
        c.r.unwrap(),
        c.t.unwrap(),
        c.horizon.unwrap(),
        side,
    )
    .map_err(core)?;
    let mut status = Status::Ok;
    let mut extra = json!({});
    if let TdzOutcome::Found(w) = &out {
        let replays = w.replay(&model).map_err(core)?;
        let invertible = z.direct_inverse().map_err(core)?.is_invertible();
        if !replays || invertible {
            status = Status::AssertionFailed;
        }
        extra = json!({
            "product_norm": w.product_norm().map_err(core)?,
            "replays": replays,
            "oracle_invertible": invertible,
        });
    }
    Ok((status, json!({ "outcome": value(&out), "checks": extra })))
}

fn tdz_population(c: &RunConfig) -> Outcome {
    let model = ifn(c)?;
    let rep =
        verify_tdz_subset_singular(&model, c.samples.unwrap(), c.seed.unwrap()).map_err(core)?;
    let status = if rep.holds() {
        Status::Ok
    } else {
        Status::AssertionFailed
    };
    Ok((status, value(&rep)))
}

/// Dispatches a resolved config.
pub(crate) fn dispatch(c: &RunConfig) -> Result<RunOutput, UsageError> {
    let (status, result) = match c.command {
        Command::CheckTnorm => check_tnorm(c),
        Command::CheckAxioms => check_axioms(c),
        Command::Converge => converge(c),
        Command::Cauchy => cauchy(c),
        Command::ProductLimit => product_limit(c),
        Command::Neumann => neumann(c),
        Command::Inverse => inverse(c),
        Command::Resolvent => resolvent(c),
        Command::ProbeOpen => probe_open(c),
        Command::ProbeClosed => probe_closed(c),
        Command::ProbeContinuity => probe_continuity(c),
        Command::Tdz => tdz(c),
        Command::TdzPopulation => tdz_population(c),
    }?;
    Ok(RunOutput::new(c.clone(), status, result))
}
