use ifba_core::triangular::{check_triangular_axioms, is_idempotent, Table};
use ifba_core::{AxiomStatus, TriangularConorm, TriangularNorm, TriangularOp};
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

proptest! {
    #[test]
    fn builtins_commute_and_stay_in_range(a in unit(), b in unit()) {
        for op in TriangularNorm::builtins() {
            let ab = op.eval(a, b).unwrap();
            prop_assert!((ab - op.eval(b, a).unwrap()).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert!(ab <= a.min(b) + 1e-15);
        }
        for op in TriangularConorm::builtins() {
            let ab = op.eval(a, b).unwrap();
            prop_assert!((ab - op.eval(b, a).unwrap()).abs() <= 1e-12);
            prop_assert!(ab >= a.max(b) - 1e-15);
        }
    }

    #[test]
    fn builtins_are_monotone(a in unit(), b in unit(), c in unit(), d in unit()) {
        let (a, c) = (a.min(c), a.max(c));
        let (b, d) = (b.min(d), b.max(d));
        for op in TriangularNorm::builtins() {
            prop_assert!(op.eval(a, b).unwrap() <= op.eval(c, d).unwrap() + 1e-12);
        }
        for op in TriangularConorm::builtins() {
            prop_assert!(op.eval(a, b).unwrap() <= op.eval(c, d).unwrap() + 1e-12);
        }
    }

    // De Morgan duality S(a,b) = 1 − T(1−a, 1−b) for the three standard pairs.
    #[test]
    fn standard_pairs_are_dual(a in unit(), b in unit()) {
        let pairs = TriangularNorm::builtins().into_iter().zip(TriangularConorm::builtins());
        for (t, s) in pairs {
            let dual = 1.0 - t.eval(1.0 - a, 1.0 - b).unwrap();
            prop_assert!((s.eval(a, b).unwrap() - dual).abs() <= 1e-12, "{} / {}", t.label(), s.label());
        }
    }

    #[test]
    fn tabulated_product_interpolates_between_nodes(a in unit(), b in unit()) {
        let op = TriangularNorm::tabulated(Table::from_fn(21, |x, y| x * y).unwrap());
        // bilinear interpolation of xy is exact along each axis, within h²/4 inside cells
        prop_assert!((op.eval(a, b).unwrap() - a * b).abs() <= 0.05f64.powi(2) / 4.0 + 1e-12);
    }
}

#[test]
fn builtins_pass_on_eleven_point_grid() {
    for op in TriangularNorm::builtins() {
        let rep = check_triangular_axioms(&op, 11).unwrap();
        assert!(
            rep.axioms.iter().all(|a| a.status == AxiomStatus::Pass),
            "{}",
            op.label()
        );
    }
    for op in TriangularConorm::builtins() {
        let rep = check_triangular_axioms(&op, 11).unwrap();
        assert!(rep.all_satisfied(), "{}", op.label());
    }
}

#[test]
fn idempotency_singles_out_min_and_max() {
    let norms: Vec<bool> = TriangularNorm::builtins()
        .iter()
        .map(|op| is_idempotent(op, 11).unwrap().holds)
        .collect();
    assert_eq!(norms, [true, false, false]);
    let conorms: Vec<bool> = TriangularConorm::builtins()
        .iter()
        .map(|op| is_idempotent(op, 11).unwrap().holds)
        .collect();
    assert_eq!(conorms, [true, false, false]);
}

#[test]
fn tabulated_minimum_round_trips_through_csv() {
    let table = Table::from_fn(6, f64::min).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("min.csv");
    std::fs::write(&path, table.to_csv_string()).unwrap();
    let back = Table::from_csv_path(&path).unwrap();
    assert_eq!(back, table);
    let op = TriangularNorm::tabulated(back);
    assert!(check_triangular_axioms(&op, 6).unwrap().all_satisfied());
    assert!(is_idempotent(&op, 6).unwrap().holds);
}
