use ifba_core::divisors::{
    find_tdz_witness, find_tdz_witness_on, verify_tdz_subset_singular, Side, TDZWitness,
};
use ifba_core::sampling::{seeded, uniform_element};
use ifba_core::{AlgebraElement, IFNormModel, ModelKind};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Zeroing a column and mixing rows gives a singular matrix; its witness must
    // replay, annihilate z, and certify non-invertibility.
    #[test]
    fn witnesses_are_sound(seed in any::<u64>(), n in 2usize..6, col in 0usize..6, right in any::<bool>()) {
        let kind = ModelKind::Matrix { n };
        let model = IFNormModel::induced_min_max(kind);
        let mut rng = seeded(seed);
        let a = uniform_element(&mut rng, kind, -1.0, 1.0);
        let mut b = uniform_element(&mut rng, kind, -1.0, 1.0).data().to_vec();
        for i in 0..n {
            b[i * n + col % n] = 0.0;
        }
        let z = a.mul(&AlgebraElement::new(kind, b).unwrap()).unwrap();
        let side = if right { Side::Right } else { Side::Left };
        let out = find_tdz_witness_on(&model, &z, 0.4, 1.0, 50, side).unwrap();
        let w = out.witness().expect("constructed singular matrix");
        prop_assert!(w.replay(&model).unwrap());
        prop_assert!(w.product_norm().unwrap() <= 1e-10 * z.crisp_norm());
        prop_assert!(!z.direct_inverse().unwrap().is_invertible());
        prop_assert!(w.separation_trace.iter().all(|p| (p.mu - 0.5).abs() < 1e-15));
    }
}

#[test]
fn witness_json_round_trip_and_replay() {
    let z = AlgebraElement::matrix(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
    let model = IFNormModel::induced_min_max(z.model());
    let w = find_tdz_witness(&model, &z, 0.4, 1.0, 20)
        .unwrap()
        .witness()
        .unwrap()
        .clone();
    let back: TDZWitness = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
    assert_eq!(back, w);
    assert!(back.replay(&model).unwrap());
}

#[test]
fn mixed_population_has_no_violations() {
    for n in [2, 3, 5] {
        let model = IFNormModel::induced_min_max(ModelKind::Matrix { n });
        let rep = verify_tdz_subset_singular(&model, 300, n as u64).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.witnesses, rep.constructed_singular, "n = {n}");
        assert_eq!(rep.dense + rep.constructed_singular, 300);
    }
}
