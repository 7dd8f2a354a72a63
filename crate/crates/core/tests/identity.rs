//! Identity engine on random rational bundles: basis sufficiency and order independence.

use bihom_core::identity::{
    check_identity_sampled, check_identity_with, default_grid, parse_identity, Compiled, ExponentTuple,
};
use bihom_core::linear::{axpy, basis_vector, zero_vector, BasisSpace, LinMap, MultiOp, Vector};
use bihom_core::scalar::{rat, Scalar};
use bihom_core::structures::{check_exponent_laws, check_structure, AlgebraBundle, Mode, Registry, Ring};
use proptest::prelude::*;

const LAWS: [&str; 4] = [
    "forall x,y,z: br(a(b(x)), mul(y,z)) - mul(br(b(x),y), b(z)) - mul(b(y), br(a(x),z)) = 0",
    "forall x,y,z: cyc(x,y,z){ br(b^2(x), br(b(y), a(z))) } = 0",
    "forall x,y: br(b(x), a(y)) + br(b(y), a(x)) = 0",
    "forall x,y,z: mul(a(x), mul(y,z)) - mul(mul(x,y), b(z)) = 0",
];

fn entry() -> impl Strategy<Value = Scalar> {
    (-2i64..=2).prop_map(Scalar::int)
}

fn matrix() -> impl Strategy<Value = LinMap> {
    prop::collection::vec(prop::collection::vec(entry(), 2), 2).prop_map(|r| LinMap::from_rows(r).unwrap())
}

fn op() -> impl Strategy<Value = MultiOp> {
    prop::collection::vec(prop::collection::vec(entry(), 2), 4).prop_map(|vals| {
        let mut it = vals.into_iter();
        MultiOp::from_fn(2, 2, |_| Ok(it.next().unwrap())).unwrap()
    })
}

fn bundle() -> impl Strategy<Value = AlgebraBundle> {
    (op(), op(), matrix(), matrix()).prop_map(|(mul, br, a, b)| {
        AlgebraBundle::new("random", BasisSpace::standard(2), Ring::rational())
            .with_op("mul", mul)
            .with_op("br", br)
            .with_map("a", a)
            .with_map("b", b)
    })
}

/// Residual at arbitrary vectors, expanded multilinearly from basis residuals.
fn expanded(c: &Compiled, args: &[Vector]) -> Vector {
    let n = args.len();
    let mut out = zero_vector(2);
    for flat in 0..2usize.pow(n as u32) {
        let tuple: Vec<usize> = (0..n).map(|i| (flat >> (n - 1 - i)) & 1).collect();
        let coeff = tuple.iter().zip(args).fold(Scalar::one(), |acc, (&t, v)| &acc * &v[t]);
        let basis: Vec<Vector> = tuple.iter().map(|&t| basis_vector(2, t)).collect();
        axpy(&mut out, &coeff, &c.eval(&basis).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_tuples_decide_the_identity(b in bundle(), args in prop::collection::vec(prop::collection::vec(entry(), 2), 3)) {
        for text in LAWS {
            let ast = parse_identity(text).unwrap();
            let c = Compiled::new(&ast, &b).unwrap();
            let args = &args[..ast.vars.len()];
            let direct = c.eval(args).unwrap();
            prop_assert_eq!(&direct, &expanded(&c, args));
            if check_identity_with("law", &ast, &b, false).unwrap().is_pass() {
                prop_assert!(direct.iter().all(Scalar::is_zero));
            }
        }
    }

    #[test]
    fn parallel_search_matches_serial(b in bundle()) {
        for text in LAWS {
            let ast = parse_identity(text).unwrap();
            let p = check_identity_with("law", &ast, &b, true).unwrap();
            let s = check_identity_with("law", &ast, &b, false).unwrap();
            prop_assert_eq!(p, s);
        }
    }

    #[test]
    fn registry_reports_do_not_depend_on_thread_count(b in bundle()) {
        let r1 = check_structure("tbp", &b, &Mode::Symbolic).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let r2 = pool.install(|| check_structure("tbp", &b, &Mode::Symbolic).unwrap());
        prop_assert_eq!(r1.verdicts, r2.verdicts);
    }
}

#[test]
fn sampled_counterexample_names_the_point() {
    let b = bihom_core::catalog::entry(1).unwrap().bundle().unwrap();
    let ast = parse_identity("forall x: a(b(x)) - b(a(x)) = 0").unwrap();
    let points = vec![vec![rat(2), rat(2)], vec![rat(1), rat(4)]];
    let v = check_identity_sampled("commute", &ast, &b, &points).unwrap();
    let cx = v.counterexample.unwrap();
    assert_eq!(cx.point, Some(points[1].clone()));
    assert_eq!(cx.tuple, vec![0]);
}

#[test]
fn exponent_grid_on_tbp_entries() {
    let grid = default_grid(31, 8);
    assert_eq!(grid[0], ExponentTuple::default());
    assert_eq!(grid[1], ExponentTuple::regular_instance());
    assert_eq!(grid, default_grid(31, 8));
    assert_ne!(grid, default_grid(32, 8));
    for id in [24, 25, 26] {
        let b = bihom_core::catalog::entry(id).unwrap().bundle().unwrap();
        let r = check_exponent_laws(&b, &grid, &Mode::Symbolic).unwrap();
        // negative exponents are inapplicable when a structure map is singular, never failures
        assert!(r.verdicts.iter().all(|v| !v.is_fail()), "entry {id}");
        let regular = b.map("a").unwrap().is_invertible() && b.map("b").unwrap().is_invertible();
        assert_eq!(r.is_pass(), regular, "entry {id}");
        assert_eq!(r.verdicts.len(), 2 * grid.len() + 1);
    }
}

#[test]
fn every_registry_identity_is_well_formed() {
    let reg = Registry::builtin();
    for name in reg.names() {
        let def = reg.resolve(name).unwrap();
        for id in &def.identities {
            id.ast.validate().unwrap();
        }
    }
}
