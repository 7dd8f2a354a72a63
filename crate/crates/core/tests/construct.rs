//! Constructions on inputs that meet their hypotheses, and the error paths when they don't.

use bihom_core::construct::{
    derivation_tbp, np_commutator, op_from_expr, pre_lie_from_derivation, tensor_bundle, ternary_from_derivation,
    ternary_from_involution, ternary_from_product, yau_twist, Strictness, TensorKind, Truncated, TwistSpec,
};
use bihom_core::linear::{LinMap, MultiOp};
use bihom_core::scalar::{rat, Scalar};
use bihom_core::structures::{check_derivation, check_structure, check_tbp_consequences, AlgebraBundle, Mode};
use bihom_core::Error;

fn scaling(k: u32, c: i64) -> LinMap {
    LinMap::diagonal((0..k).map(|d| Scalar::from(rat(c).pow(d as i32))).collect())
}

fn passes(b: &AlgebraBundle, s: &str) -> bool {
    let r = check_structure(s, b, &Mode::Symbolic).unwrap();
    if !r.is_pass() {
        eprintln!("{}", bihom_core::io::report_text(&r, b));
    }
    r.is_pass()
}

/// Q[t]/(t^k) with `t d/dt` (a derivation, unlike d/dt) and scaling structure maps.
fn euler(k: u32, lam: i64, mu: i64) -> AlgebraBundle {
    let t = Truncated::univariate(k);
    t.bundle().with_map("a", scaling(k, lam)).with_map("b", scaling(k, mu)).with_map("D", t.monomial_partial(&[1], 0))
}

#[test]
fn euler_operator_gives_tbp() {
    for k in 2..=4 {
        for (lam, mu) in [(1, 1), (2, 3), (-1, 2)] {
            let b = derivation_tbp(&euler(k, lam, mu), "D", Strictness::Strict).unwrap();
            assert!(passes(&b, "tbp"), "k={k} a={lam} b={mu}");
            assert!(check_tbp_consequences(&b, &Mode::Symbolic).unwrap().is_pass());
        }
    }
}

#[test]
fn higher_vector_field_gives_tbp() {
    let t = Truncated::univariate(4);
    let b = t.bundle().with_map("D", t.monomial_partial(&[2], 0));
    assert!(passes(&derivation_tbp(&b, "D", Strictness::Strict).unwrap(), "tbp"));
}

#[test]
fn derivation_bracket_constants() {
    // br(x, y) = x D(y) - y D(x) with D = t d/dt: br(t, t^2) = t * 2t^2 - t^2 * t = t^3
    let t = Truncated::univariate(4);
    let b = derivation_tbp(&euler(4, 1, 1), "D", Strictness::Strict).unwrap();
    let v = b.op("br").unwrap().apply(&[&t.basis_vector("t").unwrap(), &t.basis_vector("t^2").unwrap()]).unwrap();
    assert_eq!(v, t.basis_vector("t^3").unwrap());
}

#[test]
fn plain_derivative_is_rejected_in_strict_mode() {
    let t = Truncated::univariate(4);
    let b = t.bundle().with_map("D", t.partial(0));
    assert!(matches!(derivation_tbp(&b, "D", Strictness::Strict), Err(Error::PredicateFailed(_))));
    let relaxed = derivation_tbp(&b, "D", Strictness::Relaxed).unwrap();
    let notes = &relaxed.provenance.as_ref().unwrap().notes;
    assert!(notes.iter().any(|n| n.contains("derivation(D,mul)")), "{notes:?}");
    assert!(!passes(&relaxed, "tbp"));
}

#[test]
fn degree_preserving_vector_fields_are_derivations() {
    let t = Truncated::bivariate(3);
    let fields: [&[(&[u32], usize)]; 5] = [
        &[(&[1, 0], 0)],
        &[(&[0, 1], 1)],
        &[(&[1, 0], 1)],
        &[(&[0, 1], 0)],
        &[(&[1, 0], 0), (&[2, 0], 1), (&[1, 1], 0)],
    ];
    for f in fields {
        let b = t.bundle().with_map("D", t.vector_field(f));
        assert!(check_derivation(&b, "D", &["mul"], false, &Mode::Symbolic).unwrap().is_pass(), "{f:?}");
    }
    let b = t.bundle().with_map("D", t.partial(0));
    assert!(check_derivation(&b, "D", &["mul"], false, &Mode::Symbolic).unwrap().is_fail());
}

#[test]
fn ternary_from_commuting_derivations() {
    let t = Truncated::bivariate(3);
    let base = t.bundle().with_map("D", t.vector_field(&[(&[1, 0], 0)]));
    let tb = derivation_tbp(&base, "D", Strictness::Strict).unwrap();
    // both fields commute with u d/du; tbr(u, v, 1) = E(v) * [1, u] = v * u
    for e in [t.vector_field(&[(&[0, 1], 1)]), t.vector_field(&[(&[1, 0], 0), (&[0, 1], 1)])] {
        let tern = ternary_from_derivation(&tb.clone().with_map("E", e), "E", Strictness::Strict).unwrap();
        let args = ["u", "v", "1"].map(|l| t.basis_vector(l).unwrap());
        let v = tern.op("tbr").unwrap().apply(&[&args[0], &args[1], &args[2]]).unwrap();
        assert_eq!(v, t.basis_vector("u*v").unwrap());
        assert!(passes(&tern, "3-bihom-lie"));
        assert!(passes(&tern, "tbp-3lie"));
    }
}

#[test]
fn novikov_commutator_matches_derivation_bracket() {
    for (lam, mu) in [(1, 1), (2, 1), (3, -2)] {
        let b = euler(4, lam, mu);
        let pl = pre_lie_from_derivation(&b, "D", Strictness::Strict).unwrap();
        assert!(passes(&pl, "bihom-np"));
        assert!(passes(&pl, "pre-lie-poisson"));
        let c = np_commutator(&pl, Strictness::Strict).unwrap();
        assert!(passes(&c, "tbp"));
        if (lam, mu) == (1, 1) {
            let w = derivation_tbp(&b, "D", Strictness::Strict).unwrap();
            assert_eq!(c.op("br").unwrap(), w.op("br").unwrap());
        }
    }
}

#[test]
fn np_commutator_needs_invertible_maps() {
    let mut b = pre_lie_from_derivation(&euler(3, 1, 1), "D", Strictness::Strict).unwrap();
    b.maps.insert("a".into(), LinMap::zero(3));
    assert!(matches!(np_commutator(&b, Strictness::Relaxed), Err(Error::NotInvertible { .. })));
}

#[test]
fn yau_twist_of_a_classical_bracket() {
    let t = Truncated::univariate(4);
    let classical = t.bundle().with_map("D", t.monomial_partial(&[1], 0));
    let classical = derivation_tbp(&classical, "D", Strictness::Strict).unwrap();
    let mut with_maps = classical.clone();
    with_maps.maps.insert("a".into(), scaling(4, 2));
    with_maps.maps.insert("b".into(), scaling(4, -3));
    let twisted =
        yau_twist(&with_maps, &[TwistSpec::binary("mul"), TwistSpec::binary("br")], Strictness::Strict).unwrap();
    assert!(passes(&twisted, "tbp"));
    assert_eq!(classical.id, "derivation-tbp(Q[t]/deg4)");
    let bad = with_maps.clone().with_map("a", LinMap::from_rows(vec![vec![Scalar::one(); 4]; 4]).unwrap());
    assert!(matches!(yau_twist(&bad, &[TwistSpec::binary("mul")], Strictness::Strict), Err(Error::PredicateFailed(_))));
}

#[test]
fn twist_spec_arity_is_checked() {
    let b = euler(3, 1, 1);
    let spec = TwistSpec::nary("mul", 3);
    assert!(matches!(yau_twist(&b, &[spec], Strictness::Relaxed), Err(Error::ArityMismatch { .. })));
}

#[test]
fn tensor_of_pre_lie_poisson_bundles() {
    let a = pre_lie_from_derivation(&euler(2, 2, 1), "D", Strictness::Strict).unwrap();
    let b = pre_lie_from_derivation(&euler(3, 1, 3), "D", Strictness::Strict).unwrap();
    let t = tensor_bundle(&a, &b, TensorKind::PreLiePoisson).unwrap();
    assert_eq!(t.dim(), 6);
    assert!(passes(&t, "pre-lie-poisson"));
}

#[test]
fn tensor_needs_matching_parameters() {
    let e26 = bihom_core::catalog::entry(26).unwrap().bundle().unwrap();
    let plain = derivation_tbp(&euler(2, 1, 1), "D", Strictness::Strict).unwrap();
    assert!(matches!(tensor_bundle(&e26, &plain, TensorKind::BpTbp), Err(Error::RingMismatch(_))));
}

#[test]
fn ternary_from_involution_on_entry_26() {
    let b = bihom_core::catalog::entry(26).unwrap().bundle().unwrap();
    let t =
        ternary_from_involution(&b.clone().with_map("f", LinMap::scalar(2, Scalar::int(-1))), "f", Strictness::Strict)
            .unwrap();
    assert!(passes(&t, "3-bihom-lie"));
    // f = id does not reverse the bracket
    let r = ternary_from_involution(&b.with_map("f", LinMap::identity(2)), "f", Strictness::Strict);
    assert!(matches!(r, Err(Error::PredicateFailed(m)) if m.contains("anti-hom")));
}

#[test]
fn ternary_from_product_with_zero_bracket() {
    let mut b = euler(3, 2, 1);
    b.ops.insert("br".into(), MultiOp::zero(3, 2));
    let t = ternary_from_product(&b, Strictness::Relaxed).unwrap();
    assert!(t.op("tbr").unwrap().is_zero());
    b.maps.insert("b".into(), LinMap::zero(3));
    assert!(matches!(ternary_from_product(&b, Strictness::Relaxed), Err(Error::NotInvertible { .. })));
}

#[test]
fn op_from_expr_reproduces_a_twist() {
    let b = euler(3, 2, 5);
    let direct = op_from_expr(&b, &["x", "y"], "mul(a(x), b(y))").unwrap();
    let twisted = b.op("mul").unwrap().twist(&[b.map("a").unwrap(), b.map("b").unwrap()]).unwrap();
    assert_eq!(direct, twisted);
}

#[test]
fn twist_specs_parse() {
    let t = TwistSpec::parse("br:a^2, b^-1").unwrap();
    assert_eq!(t, TwistSpec::new("br", &[("a", 2), ("b", -1)]));
    assert_eq!(TwistSpec::parse("mul:a,b").unwrap(), TwistSpec::binary("mul"));
    assert!(TwistSpec::parse("mul").is_err());
    assert!(TwistSpec::parse("mul:a^x").is_err());
}
