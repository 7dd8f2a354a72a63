//! Rewrites the catalog files: re-derives each bracket completion, re-runs the symbolic
//! verifier to decide the status, and regenerates the matching bundle files.
//!
//! cargo run -p bihom-core --example regen_catalog

use std::path::Path;

use bihom_core::catalog::{all_entries, entry_to_string, EntryStatus};
use bihom_core::io::save_bundle;
use bihom_core::structures::{check_structure, Mode};
use bihom_core::Error;

const INCONSISTENT: &str = "skew completion inconsistent";
const FAILING: &str = "symbolic verdicts not passing";

fn main() -> bihom_core::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for mut e in all_entries()? {
        e.notes.retain(|n| !n.starts_with(INCONSISTENT) && !n.starts_with(FAILING));
        match e.derive_completion() {
            Ok(c) => e.completion = c,
            Err(Error::Inconsistent(row)) => {
                e.completion.clear();
                e.notes.push(format!("{INCONSISTENT} (equation {row}); unlisted slots left at zero"));
            }
            Err(err) => return Err(err),
        }
        let b = e.bundle()?;
        let r = check_structure("tbp", &b, &Mode::Symbolic)?;
        e.status = if r.is_pass() { EntryStatus::AssertedPass } else { EntryStatus::ReportOnly };
        let failing: Vec<&str> = r.verdicts.iter().filter(|v| !v.is_pass()).map(|v| v.id.as_str()).collect();
        if !failing.is_empty() {
            e.notes.push(format!("{FAILING}: {}", failing.join(", ")));
        }
        println!("{:>2} {:?} completion={:?} failing={failing:?}", e.entry, e.status, e.completion);
        std::fs::write(root.join("catalog").join(format!("{}.json", e.name())), entry_to_string(&e))?;
        save_bundle(&b, root.join("bundles").join(format!("{}.bundle", e.name())))?;
    }
    Ok(())
}
