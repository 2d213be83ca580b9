use ifba_core::inversion::{
    closed_noninvertible_check, inversion_continuity_probe, invertible_ball_probe, neumann_inverse,
    resolvent_inverse, ContinuityProbeReport, DEFAULT_MAX_TERMS,
};
use ifba_core::sampling::{seeded, uniform_element};
use ifba_core::{AlgebraElement, FuzzyDegreePair, IFNormModel, ModelKind};
use proptest::prelude::*;

fn m(kind: ModelKind) -> IFNormModel {
    IFNormModel::induced_min_max(kind)
}

fn scaled(seed: u64, kind: ModelKind, norm: f64) -> AlgebraElement {
    let x = uniform_element(&mut seeded(seed), kind, -1.0, 1.0);
    x.scale(norm / x.crisp_norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn neumann_agrees_with_oracle(seed in any::<u64>(), n in 1usize..6, norm in 0.01..0.9f64) {
        let kind = ModelKind::Matrix { n };
        let x = scaled(seed, kind, norm);
        let tol = 1e-10;
        let res = neumann_inverse(&m(kind), &x, tol, DEFAULT_MAX_TERMS, None).unwrap();
        prop_assert!(res.residual <= 10.0 * tol);
        let e = AlgebraElement::unit(kind).unwrap();
        let direct = e.sub(&x).unwrap().direct_inverse().unwrap().into_option().unwrap();
        let gap = res.approx_inverse.sub(&direct).unwrap().crisp_norm();
        prop_assert!(gap <= 100.0 * tol * direct.crisp_norm());
    }

    #[test]
    fn series_model_neumann_agrees_with_oracle(seed in any::<u64>(), norm in 0.01..0.9f64) {
        let kind = ModelKind::TruncatedSeries { degree: 8 };
        let x = scaled(seed, kind, norm);
        let res = neumann_inverse(&m(kind), &x, 1e-10, DEFAULT_MAX_TERMS, None).unwrap();
        let e = AlgebraElement::unit(kind).unwrap();
        let direct = e.sub(&x).unwrap().direct_inverse().unwrap().into_option().unwrap();
        prop_assert!(res.approx_inverse.sub(&direct).unwrap().crisp_norm() <= 1e-8 * direct.crisp_norm());
    }

    #[test]
    fn resolvent_agrees_with_oracle(seed in any::<u64>(), lambda in prop_oneof![-5.0..-0.5f64, 0.5..5.0f64], ratio in 0.0..0.9f64) {
        let kind = ModelKind::Matrix { n: 3 };
        let x = scaled(seed, kind, ratio * lambda.abs());
        let tol = 1e-10;
        let res = resolvent_inverse(&m(kind), &x, lambda, tol, DEFAULT_MAX_TERMS).unwrap();
        prop_assert!(res.residual <= 10.0 * tol);
        let e = AlgebraElement::unit(kind).unwrap();
        let direct = e.scale(lambda).sub(&x).unwrap().direct_inverse().unwrap().into_option().unwrap();
        prop_assert!(res.approx_inverse.sub(&direct).unwrap().crisp_norm() <= 100.0 * tol * direct.crisp_norm());
    }

    #[test]
    fn strictly_upper_triangular_terminates_exactly(seed in any::<u64>(), n in 2usize..7) {
        let kind = ModelKind::Matrix { n };
        let mut d = uniform_element(&mut seeded(seed), kind, -3.0, 3.0).data().to_vec();
        for i in 0..n {
            for j in 0..=i {
                d[i * n + j] = 0.0;
            }
        }
        let x = AlgebraElement::new(kind, d).unwrap();
        let res = neumann_inverse(&m(kind), &x, 1e-8, DEFAULT_MAX_TERMS, None).unwrap();
        prop_assert!(res.terms_used <= n);
        prop_assert!(res.residual <= 1e-12 * x.crisp_norm().powi(n as i32).max(1.0));
    }

    #[test]
    fn continuity_identity_case_is_exact(seed in any::<u64>()) {
        let kind = ModelKind::Matrix { n: 2 };
        let x0 = AlgebraElement::unit(kind).unwrap().add(&scaled(seed, kind, 0.5)).unwrap();
        let rep = inversion_continuity_probe(&m(kind), &x0, 1.0, 5, seed).unwrap();
        prop_assert_eq!(rep.identity_case.lhs_pair, FuzzyDegreePair::CRISP_ZERO);
        prop_assert_eq!(rep.identity_case.rhs_pair, FuzzyDegreePair::CRISP_ZERO);
        prop_assert!(rep.identity_case.holds);
        prop_assert_eq!(rep.holds_count + rep.fails_count, 5);
    }
}

#[test]
fn scalar_closed_forms() {
    let model = m(ModelKind::Scalar);
    for x in [0.1, -0.1, 0.5, -0.5, 0.9] {
        let tol = 1e-9;
        let res = neumann_inverse(
            &model,
            &AlgebraElement::scalar(x).unwrap(),
            tol,
            DEFAULT_MAX_TERMS,
            None,
        )
        .unwrap();
        assert!(
            (res.approx_inverse.data()[0] - 1.0 / (1.0 - x)).abs() <= tol,
            "{x}"
        );
    }
}

#[test]
fn openness_on_all_unital_models() {
    for kind in [
        ModelKind::Scalar,
        ModelKind::Matrix { n: 2 },
        ModelKind::Matrix { n: 4 },
        ModelKind::TruncatedSeries { degree: 8 },
    ] {
        let mut x0 = AlgebraElement::unit(kind).unwrap();
        if kind != ModelKind::Scalar {
            x0 = x0.add(&scaled(9, kind, 0.3)).unwrap();
        }
        let rep = invertible_ball_probe(&m(kind), &x0, 1.0, 300, 17).unwrap();
        assert!(rep.holds(), "{kind}");
    }
}

#[test]
fn closed_set_generator_only_emits_singular_terms() {
    let rep = closed_noninvertible_check(&m(ModelKind::Matrix { n: 3 }), 100, 4).unwrap();
    assert_eq!(rep.generator_faults, 0);
    assert!(rep.holds());
}

#[test]
fn continuity_report_round_trips() {
    let model = m(ModelKind::Scalar);
    let rep =
        inversion_continuity_probe(&model, &AlgebraElement::scalar(0.01).unwrap(), 1.0, 50, 2)
            .unwrap();
    let s = serde_json::to_string(&rep).unwrap();
    let back: ContinuityProbeReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, rep);
}
