//! Serialization round trips: bundle files, catalog files and identity text.

use bihom_core::catalog;
use bihom_core::construct::{derivation_tbp, Strictness, Truncated};
use bihom_core::identity::parse_identity;
use bihom_core::io::{bundle_from_str, bundle_to_string, load_bundle, save_bundle};
use bihom_core::linear::{BasisSpace, LinMap, MultiOp};
use bihom_core::scalar::{parse_scalar, Scalar};
use bihom_core::structures::{AlgebraBundle, Registry, Ring};
use proptest::prelude::*;

fn assert_round_trip(b: &AlgebraBundle) {
    let text = bundle_to_string(b);
    let back = bundle_from_str(&text).unwrap();
    assert_eq!(bundle_to_string(&back), text);
    assert_eq!(back.ops, b.ops);
    assert_eq!(back.maps, b.maps);
    assert_eq!(back.ring, b.ring);
}

#[test]
fn shipped_bundles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/bundles");
    let mut n = 0;
    for f in std::fs::read_dir(dir).unwrap() {
        let path = f.unwrap().path();
        let b = load_bundle(&path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), bundle_to_string(&b));
        n += 1;
    }
    assert_eq!(n, 26);
}

#[test]
fn constructed_bundles_keep_labels_and_provenance() {
    let t = Truncated::bivariate(3);
    let base = t.bundle().with_map("D", t.vector_field(&[(&[1, 0], 0)]));
    let b = derivation_tbp(&base, "D", Strictness::Strict).unwrap();
    assert_round_trip(&b);
    let back = bundle_from_str(&bundle_to_string(&b)).unwrap();
    assert_eq!(back.space.labels(), b.space.labels());
    assert_eq!(back.provenance, b.provenance);
}

#[test]
fn save_and_load() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e26.bundle");
    let b = catalog::entry(26).unwrap().bundle().unwrap();
    save_bundle(&b, &path).unwrap();
    assert_round_trip(&load_bundle(&path).unwrap());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), bundle_to_string(&b));
}

#[test]
fn catalog_files() {
    for e in catalog::all_entries().unwrap() {
        let text = catalog::entry_to_string(&e);
        assert_eq!(catalog::parse_entry(&text).unwrap(), e);
    }
    let bad = catalog::entry_to_string(&catalog::entry(1).unwrap()).replace("\"notes\"", "\"extra\": 1,\n  \"notes\"");
    assert!(catalog::parse_entry(&bad).is_err());
}

#[test]
fn registry_identities_print_and_reparse() {
    let reg = Registry::builtin();
    let mut n = 0;
    for name in reg.names() {
        for id in &reg.get(name).unwrap().identities {
            let text = id.ast.to_string();
            assert_eq!(parse_identity(&text).unwrap(), id.ast, "{name}/{}: {text}", id.id);
            n += 1;
        }
    }
    assert!(n > 30);
}

fn coeff() -> impl Strategy<Value = String> {
    prop_oneof![
        (-5i64..=5).prop_map(|c| c.to_string()),
        (-3i64..=3, 1i64..=4).prop_map(|(n, d)| format!("{n}/{d}")),
        (-3i64..=3, -3i64..=3).prop_map(|(a, c)| format!("{a}*k1 + {c}*k2^2")),
        (1i64..=3).prop_map(|c| format!("k1/(k2 + {c})")),
    ]
}

prop_compose! {
    fn random_bundle()(mul in prop::collection::vec(coeff(), 8), a in prop::collection::vec(coeff(), 4)) -> AlgebraBundle {
        let ring = Ring::free(&["k1", "k2"]);
        let s = |t: &str| parse_scalar(t, &ring.params).unwrap();
        let mut it = mul.iter();
        let op = MultiOp::from_fn(2, 2, |_| Ok(vec![s(it.next().unwrap()), s(it.next().unwrap())])).unwrap();
        let rows: Vec<Vec<Scalar>> = a.chunks(2).map(|r| r.iter().map(|t| s(t)).collect()).collect();
        AlgebraBundle::new("random", BasisSpace::standard(2), ring.clone())
            .with_op("mul", op)
            .with_map("a", LinMap::from_rows(rows).unwrap())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_bundles_round_trip(b in random_bundle()) {
        assert_round_trip(&b);
    }
}
