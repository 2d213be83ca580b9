//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test -p ifba-cli --test acceptance -- --nocapture` is not needed;
//! the target has its own `main` and always prints.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use ifba_cli::without_timestamp;
use ifba_core::convergence::{
    fuzzy_converges, product_convergence_check, SequenceRule, SequenceSpec,
};
use ifba_core::divisors::{find_tdz_witness, verify_tdz_subset_singular};
use ifba_core::if_norm::{check_ifna_axioms, replay_witness, TARGETED_CANDIDATES};
use ifba_core::inversion::{
    continuity_eval, inverse_via_neumann, inversion_continuity_probe, invertible_ball_probe,
    neumann_inverse, resolvent_inverse, ContinuityProbeReport, DEFAULT_MAX_TERMS,
};
use ifba_core::sampling::{substream, uniform_element};
use ifba_core::triangular::{check_triangular_axioms, is_idempotent, TriangularOp};
use ifba_core::{
    AlgebraElement, AxiomStatus, DirectInverse, IFNormModel, ModelKind, TriangularConorm,
    TriangularNorm, Witness,
};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn induced(kind: ModelKind) -> IFNormModel {
    IFNormModel::induced_min_max(kind)
}

fn scalar(v: f64) -> AlgebraElement {
    AlgebraElement::scalar(v).unwrap()
}

fn invert(x: &AlgebraElement) -> Result<AlgebraElement, String> {
    match ok(x.direct_inverse())? {
        DirectInverse::Invertible(inv) => Ok(inv),
        DirectInverse::NonInvertible => Err("oracle says singular".into()),
    }
}

fn triangular_ops<Op: TriangularOp>(op: &Op, idempotent: bool) -> Result<(), String> {
    let rep = ok(check_triangular_axioms(op, 11))?;
    ensure!(
        rep.all_satisfied(),
        "{} fails an axiom: {:?}",
        op.label(),
        rep.axioms
    );
    let idem = ok(is_idempotent(op, 11))?;
    ensure!(
        idem.holds == idempotent,
        "{} idempotency = {}",
        op.label(),
        idem.holds
    );
    Ok(())
}

fn criterion_1() -> Outcome {
    let [min, prod, luk] = TriangularNorm::builtins();
    let [max, psum, bsum] = TriangularConorm::builtins();
    triangular_ops(&min, true)?;
    triangular_ops(&prod, false)?;
    triangular_ops(&luk, false)?;
    triangular_ops(&max, true)?;
    triangular_ops(&psum, false)?;
    triangular_ops(&bsum, false)?;
    let w = ok(is_idempotent(&TriangularNorm::product(), 11))?;
    ensure!(
        w.witness == Some(0.5) && w.value_at_witness == Some(0.25),
        "product witness {:?} -> {:?}",
        w.witness,
        w.value_at_witness
    );
    Ok("six operations pass on 11 points; product witness 0.5 -> 0.25".into())
}

fn criterion_2() -> Outcome {
    let model = induced(ModelKind::Matrix { n: 2 });
    let rep = ok(check_ifna_axioms(&model, 10_000, 2024))?;
    let ids = [
        "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "xiv",
    ];
    let mut hits = Vec::new();
    for id in ids {
        let rec = rep.get(id).ok_or(format!("no record for ({id})"))?;
        if id == "vi" || id == "xii" {
            ensure!(rec.status == AxiomStatus::Fail, "({id}) did not fail");
            let w = rec
                .witness
                .as_ref()
                .ok_or(format!("({id}) has no witness"))?;
            ensure!(matches!(w, Witness::Elements { .. }), "({id}) witness kind");
            let replay = ok(replay_witness(&model, id, w))?.ok_or("grid witness")?;
            ensure!(
                replay.2 && replay.0 == w.lhs() && replay.1 == w.rhs(),
                "({id}) witness does not replay: {replay:?}"
            );
            let hit = rec
                .search
                .as_ref()
                .and_then(|s| s.first_hit)
                .ok_or(format!("({id}) targeted search found nothing"))?;
            ensure!(hit < TARGETED_CANDIDATES, "({id}) first hit {hit}");
            hits.push(format!("{id}@{hit}"));
        } else {
            ensure!(
                rec.status == AxiomStatus::Pass,
                "({id}) is {:?}",
                rec.status
            );
        }
    }
    let null = induced(ModelKind::NullProduct { dim: 3 });
    let nrep = ok(check_ifna_axioms(&null, 2_000, 2024))?;
    for id in ["vi", "xii"] {
        let st = nrep.get(id).map(|r| r.status);
        ensure!(
            st == Some(AxiomStatus::Vacuous),
            "null product ({id}) is {st:?}"
        );
    }
    Ok(format!(
        "12 pass on 1e4 samples; vi/xii fail and replay; targeted hits {}; null product vacuous",
        hits.join(", ")
    ))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [2usize, 4, 8] {
        let kind = ModelKind::Matrix { n };
        let model = induced(kind);
        let e = ok(AlgebraElement::unit(kind))?;
        let mut rng = substream(3, n as u64);
        for _ in 0..100 {
            let raw = uniform_element(&mut rng, kind, -1.0, 1.0);
            let x = raw.scale(0.5 / raw.crisp_norm());
            let res = ok(neumann_inverse(&model, &x, 1e-8, DEFAULT_MAX_TERMS, None))?;
            let direct = invert(&ok(e.sub(&x))?)?;
            let gap = ok(res.approx_inverse.sub(&direct))?.crisp_norm();
            worst = worst.max(gap);
        }
    }
    ensure!(worst <= 1e-6, "worst gap {worst:e}");

    let s = ok(neumann_inverse(
        &induced(ModelKind::Scalar),
        &scalar(0.5),
        1e-8,
        DEFAULT_MAX_TERMS,
        None,
    ))?;
    let v = s.approx_inverse.data()[0];
    ensure!((v - 2.0).abs() <= 1e-8, "scalar 0.5 gave {v}");

    let kind = ModelKind::Matrix { n: 2 };
    let x = ok(AlgebraElement::matrix(&[&[0.0, 0.5], &[0.0, 0.0]]))?;
    let nil = ok(neumann_inverse(
        &induced(kind),
        &x,
        1e-8,
        DEFAULT_MAX_TERMS,
        None,
    ))?;
    let expected = ok(ok(AlgebraElement::unit(kind))?.add(&x))?;
    ensure!(
        nil.approx_inverse == expected,
        "nilpotent gave {:?}",
        nil.approx_inverse
    );
    ensure!(
        nil.residual <= 1e-12,
        "nilpotent residual {:e}",
        nil.residual
    );
    Ok(format!(
        "300 matrices, worst gap {worst:.2e}; scalar {v}; nilpotent exact"
    ))
}

fn criterion_4() -> Outcome {
    let model = induced(ModelKind::Scalar);
    let inv = ok(inverse_via_neumann(
        &model,
        &scalar(0.8),
        1e-10,
        DEFAULT_MAX_TERMS,
    ))?;
    let v = inv.approx_inverse.data()[0];
    ensure!((v - 1.25).abs() <= 1e-8, "inverse of 0.8 gave {v}");
    let res = ok(resolvent_inverse(
        &model,
        &scalar(0.5),
        2.0,
        1e-10,
        DEFAULT_MAX_TERMS,
    ))?;
    let r = res.approx_inverse.data()[0];
    ensure!((r - 2.0 / 3.0).abs() <= 1e-8, "resolvent gave {r}");

    let mut rng = substream(4, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let lambda = rng.random_range(0.5..5.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let x = rng.random_range(-0.9..=0.9) * lambda;
        let got = ok(resolvent_inverse(
            &model,
            &scalar(x),
            lambda,
            1e-10,
            DEFAULT_MAX_TERMS,
        ))?;
        worst = worst.max((got.approx_inverse.data()[0] - 1.0 / (lambda - x)).abs());
    }
    ensure!(worst <= 1e-8, "grid worst error {worst:e}");
    Ok(format!(
        "1/0.8 = {v}; resolvent {r}; 200-point grid worst {worst:.1e}"
    ))
}

fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    for kind in [
        ModelKind::Matrix { n: 2 },
        ModelKind::Matrix { n: 4 },
        ModelKind::Scalar,
        ModelKind::TruncatedSeries { degree: 8 },
    ] {
        let model = induced(kind);
        let x0 = ok(AlgebraElement::unit(kind))?;
        let rep = ok(invertible_ball_probe(&model, &x0, 1.0, 1_000, 5))?;
        ensure!(!rep.exceeds_bound, "{kind:?} probed above the bound");
        ensure!(
            rep.samples == 1_000,
            "{kind:?} drew {} samples",
            rep.samples
        );
        ensure!(
            rep.holds(),
            "{kind:?}: {} non-invertible draws",
            rep.non_invertible
        );
        if kind == (ModelKind::Matrix { n: 2 }) {
            let expect = 1.0 / (1.0 + 2f64.sqrt());
            ensure!(
                (rep.r_star - expect).abs() <= 1e-12,
                "identity r* {}",
                rep.r_star
            );
            lines.push(format!("r* = {:.12}", rep.r_star));
        }
    }
    Ok(format!(
        "4 models x 1e3 draws all invertible; identity {}",
        lines.join("")
    ))
}

fn family_suite(kind: ModelKind, seed: u64) -> Result<Vec<(SequenceSpec, AlgebraElement)>, String> {
    let mut rng = substream(seed, 0);
    let mut draw = |scale: f64| uniform_element(&mut rng, kind, -1.0, 1.0).scale(scale);
    let horizon = ifba_core::convergence::default_horizon(kind);
    let small = {
        let v = draw(1.0);
        v.scale(0.6 / v.crisp_norm())
    };
    let (listed_base, listed_dir) = (draw(1.0), draw(1.0));
    let listed: Vec<AlgebraElement> = (1..=horizon)
        .map(|n| {
            listed_base
                .add(&listed_dir.scale(1.0 / (n * n) as f64))
                .unwrap()
        })
        .collect();
    let rules = vec![
        SequenceRule::Constant { x: draw(1.0) },
        SequenceRule::Perturbed {
            base: draw(1.0),
            direction: draw(1.0),
        },
        SequenceRule::Powers { x: small.clone() },
        SequenceRule::PartialSums { x: small.clone() },
        SequenceRule::Alternating { x: draw(1.0) },
        SequenceRule::Explicit { terms: listed },
    ];
    rules
        .into_iter()
        .map(|rule| {
            let spec = ok(SequenceSpec::new(rule, horizon))?;
            let limit = match &spec.rule {
                SequenceRule::Explicit { .. } => listed_base.clone(),
                _ => spec
                    .nominal_limit()
                    .unwrap_or_else(|| AlgebraElement::zero(kind)),
            };
            Ok((spec, limit))
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let model = induced(ModelKind::Scalar);
    let harmonic = ok(SequenceSpec::perturbed(scalar(0.0), scalar(1.0)))?;
    let v = ok(fuzzy_converges(&model, &harmonic, &scalar(0.0), 0.1, 1.0))?;
    ensure!(v.n0() == Some(10), "1/n gave {:?}", v.status);

    for kind in [
        ModelKind::Scalar,
        ModelKind::Matrix { n: 3 },
        ModelKind::TruncatedSeries { degree: 4 },
    ] {
        let m = induced(kind);
        let x = uniform_element(&mut substream(6, 1), kind, -5.0, 5.0);
        let c = ok(SequenceSpec::constant(x.clone()))?;
        let v = ok(fuzzy_converges(&m, &c, &x, 0.1, 1.0))?;
        ensure!(
            v.n0() == Some(1),
            "constant in {kind:?} gave {:?}",
            v.status
        );
    }

    let (mut pairs, mut both, mut bad) = (0, 0, 0);
    for (i, kind) in [
        ModelKind::Scalar,
        ModelKind::Matrix { n: 2 },
        ModelKind::TruncatedSeries { degree: 4 },
    ]
    .into_iter()
    .enumerate()
    {
        let m = induced(kind);
        let xs = family_suite(kind, 60 + i as u64)?;
        let ys = family_suite(kind, 70 + i as u64)?;
        for (sx, lx) in &xs {
            for (sy, ly) in &ys {
                let rep = ok(product_convergence_check(&m, sx, lx, sy, ly, 0.1, 1.0))?;
                pairs += 1;
                both += rep.both_factors_converged as usize;
                bad += (!rep.consistent) as usize;
            }
        }
    }
    ensure!(
        bad == 0,
        "{bad} of {pairs} pairs: factors converge, product does not"
    );
    ensure!(both > 0, "no pair had two convergent factors");
    Ok(format!("1/n n0 = 10; constants n0 = 1; {pairs} product pairs, {both} with convergent factors, 0 inconsistent"))
}

fn criterion_7() -> Outcome {
    let model = induced(ModelKind::Scalar);
    let id = ok(continuity_eval(&model, &scalar(1.0), &scalar(1.0), 1.0))?;
    ensure!(
        id.holds && id.lhs_pair.mu == 1.0 && id.lhs_pair.nu == 0.0,
        "identity case {id:?}"
    );
    let pair = ok(continuity_eval(&model, &scalar(1.0), &scalar(1.1), 1.0))?;
    ensure!(pair.holds, "(1, 1.1) should hold");
    ensure!(
        (pair.lhs_pair.mu - 0.91667).abs() <= 1e-5,
        "lhs mu {}",
        pair.lhs_pair.mu
    );
    ensure!(
        (pair.rhs_pair.mu - 0.71429).abs() <= 1e-5,
        "rhs mu {}",
        pair.rhs_pair.mu
    );

    let near = ok(continuity_eval(&model, &scalar(0.01), &scalar(0.02), 1.0))?;
    ensure!(!near.holds, "(0.01, 0.02) not flagged");
    let probe = ok(inversion_continuity_probe(
        &model,
        &scalar(0.01),
        1.0,
        1_000,
        7,
    ))?;
    ensure!(
        !probe.counterexamples.is_empty(),
        "probe recorded no counterexample"
    );
    let text = ok(serde_json::to_string(&probe))?;
    let back: ContinuityProbeReport = ok(serde_json::from_str(&text))?;
    ensure!(back == probe, "report does not round-trip");
    Ok(format!(
        "identity exact; mu {:.5} >= {:.5}; near-singular flagged, probe rate {:.3}; round-trip ok",
        pair.lhs_pair.mu,
        pair.rhs_pair.mu,
        probe.satisfaction_rate()
    ))
}

fn criterion_8() -> Outcome {
    let kind = ModelKind::Matrix { n: 2 };
    let model = induced(kind);
    let z = ok(AlgebraElement::matrix(&[&[1.0, 0.0], &[0.0, 0.0]]))?;
    let out = ok(find_tdz_witness(&model, &z, 0.4, 1.0, 100))?;
    let w = out.witness().ok_or("no witness for [[1,0],[0,0]]")?;
    let pn = ok(w.product_norm())?;
    ensure!(pn <= 1e-10, "product norm {pn:e}");
    let sep = w.separation_trace.first().ok_or("empty separation trace")?;
    ensure!(sep.mu == 0.5, "separation mu {}", sep.mu);
    ensure!(ok(w.replay(&model))?, "witness does not replay");

    let mut summary = Vec::new();
    for n in [2usize, 3, 4] {
        let m = induced(ModelKind::Matrix { n });
        let rep = ok(verify_tdz_subset_singular(&m, 1_000, 8 + n as u64))?;
        ensure!(
            rep.holds(),
            "matrix({n}): {} violations",
            rep.violations.len()
        );
        ensure!(
            rep.witnesses == rep.constructed_singular,
            "matrix({n}): {} witnesses vs {} constructed singular",
            rep.witnesses,
            rep.constructed_singular
        );
        summary.push(format!("n={n}: {}/{}", rep.witnesses, rep.samples));
    }
    Ok(format!(
        "exact annihilation, separation 0.5; populations {}",
        summary.join(", ")
    ))
}

fn criterion_9() -> Outcome {
    for args in common::COMMAND_SUITE {
        let mut texts = Vec::new();
        for _ in 0..2 {
            let out = common::run(args);
            ensure!(
                matches!(out.status.code(), Some(0 | 1)),
                "{args:?} exited {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            );
            texts.push(ok(without_timestamp(&String::from_utf8_lossy(
                &out.stdout,
            )))?);
        }
        ensure!(texts[0] == texts[1], "{} differs between runs", args[0]);
    }
    Ok(format!(
        "{} invocations byte-identical across reruns",
        common::COMMAND_SUITE.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({secs:.1}s) {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({secs:.1}s) {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
