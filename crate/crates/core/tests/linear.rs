//! Matrix and multilinear-operation laws on random rational data.

use bihom_core::linear::{basis_vector, solve_linear, LinMap, MultiOp, Vector};
use bihom_core::scalar::{rat, Scalar};
use bihom_core::Error;
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = Scalar> {
    (-3i64..=3).prop_map(Scalar::int)
}

fn matrix(n: usize) -> impl Strategy<Value = LinMap> {
    prop::collection::vec(prop::collection::vec(entry(), n), n).prop_map(|rows| LinMap::from_rows(rows).unwrap())
}

fn vector(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(entry(), n)
}

fn op(n: usize, r: usize) -> impl Strategy<Value = MultiOp> {
    prop::collection::vec(vector(n), n.pow(r as u32)).prop_map(move |vals| {
        let mut it = vals.into_iter();
        MultiOp::from_fn(n, r, |_| Ok(it.next().unwrap())).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composition_is_associative_and_applies_right_to_left(a in matrix(3), b in matrix(3), c in matrix(3), v in vector(3)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&b).apply(&v), a.apply(&b.apply(&v)));
    }

    #[test]
    fn inverse_and_determinant(a in matrix(3), b in matrix(3)) {
        let det = a.compose(&b).determinant();
        prop_assert_eq!(det, &a.determinant() * &b.determinant());
        match a.inverse("a") {
            Ok(inv) => prop_assert!(a.compose(&inv).is_identity() && inv.compose(&a).is_identity()),
            Err(Error::NotInvertible { .. }) => prop_assert!(a.determinant().is_zero()),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn negative_powers_invert(a in matrix(2)) {
        prop_assume!(a.is_invertible());
        prop_assert!(a.power(2, "a").unwrap().compose(&a.power(-2, "a").unwrap()).is_identity());
    }

    #[test]
    fn kronecker_mixed_product(a in matrix(2), b in matrix(2), c in matrix(2), d in matrix(2)) {
        prop_assert_eq!(a.tensor(&b).compose(&c.tensor(&d)), a.compose(&c).tensor(&b.compose(&d)));
    }

    #[test]
    fn twist_is_precomposition(m in op(2, 2), a in matrix(2), b in matrix(2), x in vector(2), y in vector(2)) {
        let t = m.twist(&[&a, &b]).unwrap();
        prop_assert_eq!(t.apply(&[&x, &y]).unwrap(), m.apply(&[&a.apply(&x), &b.apply(&y)]).unwrap());
    }

    #[test]
    fn operations_are_multilinear(m in op(2, 3), x in vector(2), y in vector(2), z in vector(2), w in vector(2), c in entry()) {
        let sum: Vector = x.iter().zip(&w).map(|(p, q)| &(&c * p) + q).collect();
        let lhs = m.apply(&[&y, &sum, &z]).unwrap();
        let a = m.apply(&[&y, &x, &z]).unwrap();
        let b = m.apply(&[&y, &w, &z]).unwrap();
        let rhs: Vector = a.iter().zip(&b).map(|(p, q)| &(&c * p) + q).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn solver_output_satisfies_consistent_systems(a in prop::collection::vec(vector(3), 4), x in vector(3)) {
        let rhs: Vec<Scalar> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        let sol = solve_linear(&a, &rhs, 3).unwrap();
        for (row, b) in a.iter().zip(&rhs) {
            let got: Scalar = row.iter().zip(&sol).map(|(p, q)| p * q).sum();
            prop_assert_eq!(&got, b);
        }
    }
}

#[test]
fn solver_reports_inconsistent_rows() {
    let rows = vec![vec![Scalar::one(), Scalar::one()], vec![Scalar::int(2), Scalar::int(2)]];
    let r = solve_linear(&rows, &[Scalar::one(), Scalar::int(3)], 2);
    assert!(matches!(r, Err(Error::Inconsistent(1))));
    // free unknowns are zero
    let x = solve_linear(&rows[..1], &[Scalar::int(5)], 2).unwrap();
    assert_eq!(x, vec![Scalar::int(5), Scalar::zero()]);
}

#[test]
fn basis_values_and_arity_checks() {
    let mut m = MultiOp::zero(2, 2);
    m.add_constant(&[0, 1], 1, &Scalar::from(rat(7)));
    assert_eq!(m.basis_value(&[0, 1]), vec![Scalar::zero(), Scalar::int(7)]);
    let e0 = basis_vector(2, 0);
    assert!(m.apply(&[&e0]).is_err());
    assert!(m.check_index(&[0, 2]).is_err());
}
