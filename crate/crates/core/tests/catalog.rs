use std::collections::BTreeSet;

use bihom_core::catalog::{self, complete_by_skew, skew_complete, EntryStatus};
use bihom_core::io::{bundle_to_string, load_bundle, to_canonical_string};
use bihom_core::scalar::{format_point, rat, Scalar};
use bihom_core::structures::{check_structure, Mode};
use bihom_core::Error;

fn data(path: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(path)
}

#[test]
fn completion_examples() {
    let br = complete_by_skew(26, &[rat(3), rat(5)]).unwrap();
    assert_eq!(br.basis_value(&[1, 0]), vec![Scalar::zero(), Scalar::int(-1)]);
    assert_eq!(br.basis_value(&[1, 1]), vec![Scalar::zero(); 2]);
    assert_eq!(br.basis_value(&[0, 1]), vec![Scalar::zero(), Scalar::one()]);
    let br = complete_by_skew(24, &[rat(3), rat(5)]).unwrap();
    for slot in [[0, 1], [1, 0], [1, 1]] {
        assert_eq!(br.basis_value(&slot), vec![Scalar::zero(); 2]);
    }
    assert!(matches!(complete_by_skew(27, &[]), Err(Error::UnknownEntry(27))));
}

#[test]
fn fully_listed_bracket_is_unchanged() {
    let e = catalog::entry(3).unwrap();
    let b = e.bundle().unwrap().eval_at(&[rat(2), rat(7)]).unwrap();
    let all: BTreeSet<_> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
    let out = skew_complete(b.op("br").unwrap(), &all, b.map("a").unwrap(), b.map("b").unwrap()).unwrap();
    assert_eq!(&out, b.op("br").unwrap());
}

#[test]
fn stored_completions_rederive() {
    for e in catalog::all_entries().unwrap() {
        match e.derive_completion() {
            Ok(c) => assert_eq!(c, e.completion, "entry {}", e.entry),
            Err(Error::Inconsistent(_)) => {
                assert!(e.completion.is_empty());
                assert!(e.notes.iter().any(|n| n.contains("inconsistent")), "entry {}", e.entry);
                assert_eq!(e.status, EntryStatus::ReportOnly);
            }
            Err(err) => panic!("entry {}: {err}", e.entry),
        }
    }
}

#[test]
fn point_completions_satisfy_skew_and_match_stored_constants() {
    for e in catalog::all_entries().unwrap() {
        if e.completion.is_empty() && e.notes.iter().any(|n| n.contains("inconsistent")) {
            continue;
        }
        let b = e.bundle().unwrap();
        let points = b.sample_points(5, u64::from(e.entry), 10).unwrap();
        let mut seen = Vec::new();
        for p in &points {
            let br = complete_by_skew(e.entry, p).unwrap();
            let at = b.eval_at(p).unwrap();
            let mut solved = at.clone();
            solved.ops.insert("br".into(), br.clone());
            let skew = check_structure("bihom-lie", &solved, &Mode::Symbolic).unwrap();
            assert!(
                skew.verdict("skew").unwrap().is_pass(),
                "entry {} at {}",
                e.entry,
                format_point(&b.ring.params, p)
            );
            // generic points: the stored symbolic completion specializes to the point solution
            assert_eq!(&br, at.op("br").unwrap(), "entry {} at {}", e.entry, format_point(&b.ring.params, p));
            seen.push(br);
        }
        // constant completion entries give the same completed slots at every point
        for (i, j, k, c) in &e.completion {
            if let Ok(n) = c.parse::<i64>() {
                for br in &seen {
                    assert_eq!(br.basis_value(&[*i, *j])[*k], Scalar::int(n), "entry {} slot ({i},{j})", e.entry);
                }
            }
        }
    }
}

#[test]
fn entry_one_commutation_residual() {
    let r = catalog::verify_entry(1, &Mode::Symbolic).unwrap();
    let v = r.verdict("commute(a,b)").unwrap();
    let cx = v.counterexample.as_ref().unwrap();
    assert_eq!(cx.tuple, vec![0]);
    let b = catalog::entry(1).unwrap().bundle().unwrap();
    let k = |i| Scalar::param(&b.ring.params, i);
    assert_eq!(cx.residual, vec![Scalar::zero(), &k(0) - &k(1)]);
}

#[test]
fn asserted_pass_entries_pass_and_also_satisfy_consequences() {
    for e in catalog::all_entries().unwrap() {
        let r = catalog::verify_entry(e.entry, &Mode::Symbolic).unwrap();
        assert_eq!(r.is_pass(), e.status == EntryStatus::AssertedPass, "entry {}", e.entry);
        if r.is_pass() {
            let b = e.bundle().unwrap();
            assert!(bihom_core::structures::check_tbp_consequences(&b, &Mode::Symbolic).unwrap().is_pass());
        }
    }
    let asserted: Vec<u32> = catalog::all_entries()
        .unwrap()
        .iter()
        .filter(|e| e.status == EntryStatus::AssertedPass)
        .map(|e| e.entry)
        .collect();
    assert!([24, 25, 26].iter().all(|id| asserted.contains(id)));
}

#[test]
fn sampled_agrees_with_symbolic_at_each_point() {
    for e in catalog::all_entries().unwrap() {
        if !e.constraints.is_empty() {
            continue;
        }
        let b = e.bundle().unwrap();
        let symbolic = catalog::verify_entry(e.entry, &Mode::Symbolic).unwrap();
        for p in b.sample_points(3, 99, 10).unwrap() {
            let sampled = check_structure("tbp", &b, &Mode::Sampled { points: vec![p.clone()], seed: None }).unwrap();
            let direct = check_structure("tbp", &b.eval_at(&p).unwrap(), &Mode::Symbolic).unwrap();
            for v in &sampled.verdicts {
                assert_eq!(v.status, direct.verdict(&v.id).unwrap().status, "entry {} {}", e.entry, v.id);
                if symbolic.verdict(&v.id).unwrap().is_pass() {
                    assert!(v.is_pass());
                }
            }
        }
    }
}

#[test]
fn shipped_bundle_files_match_catalog() {
    for e in catalog::all_entries().unwrap() {
        let path = data(&format!("bundles/{}.bundle", e.name()));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, bundle_to_string(&e.bundle().unwrap()), "{}", path.display());
        let loaded = load_bundle(&path).unwrap();
        assert_eq!(loaded.id, e.name());
        let file = std::fs::read_to_string(data(&format!("catalog/{}.json", e.name()))).unwrap();
        assert_eq!(file, catalog::entry_to_string(&e));
    }
    let b = load_bundle(data("bundles/entry26.bundle")).unwrap();
    assert_eq!(b.dim(), 2);
    assert_eq!(b.ops.keys().collect::<Vec<_>>(), ["br", "mul"]);
    assert_eq!(b.maps.keys().collect::<Vec<_>>(), ["a", "b"]);
    assert_eq!(&b.ring.params[..], ["k1", "k2"]);
}

#[test]
fn reports_are_stable_and_cover_all_entries() {
    let ids: Vec<u32> = (1..=26).collect();
    let a = catalog::verify_all(&ids, Some((5, 11))).unwrap();
    let b = catalog::verify_all(&ids, Some((5, 11))).unwrap();
    assert_eq!(a.summary_table().lines().count(), 27);
    assert_eq!(to_canonical_string(&a.report_json()), to_canonical_string(&b.report_json()));
    // zero specialization: every coefficient becomes rational
    for e in catalog::all_entries().unwrap() {
        let bundle = e.bundle().unwrap();
        let zero = vec![rat(0); bundle.ring.params.len()];
        if bundle.ring.check_point(&zero).is_err() {
            continue;
        }
        if let Ok(z) = bundle.eval_at(&zero) {
            let r1 = check_structure("tbp", &z, &Mode::Symbolic).unwrap();
            let r2 = check_structure("tbp", &z, &Mode::Symbolic).unwrap();
            assert_eq!(r1.verdicts, r2.verdicts);
        }
    }
}

#[test]
fn branch_entries_are_checked_per_branch() {
    let r = catalog::verify_entry(16, &Mode::Symbolic).unwrap();
    let assoc = r.verdict("comm").unwrap();
    assert!(
        assoc.notes.iter().any(|n| n.contains("branch k1 = 1") && n.contains("branch k2 = 0")),
        "{:?}",
        assoc.notes
    );
}

#[test]
fn ranges() {
    assert_eq!(catalog::parse_range("24-26").unwrap(), [24, 25, 26]);
    assert_eq!(catalog::parse_range("3,1,2-3").unwrap(), [1, 2, 3]);
    assert!(matches!(catalog::parse_range("0"), Err(Error::UnknownEntry(0))));
    assert!(catalog::parse_range("x").is_err());
}
