//! The 26 two-dimensional example algebras, their bracket completions and a per-axiom verifier.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::identity::Status;
use crate::io::{bundle_from_str, report_json, status_name};
use crate::linear::{solve_linear, LinMap, MultiOp};
use crate::scalar::{Rational, Scalar};
use crate::structures::{check_structure, AlgebraBundle, Mode, Report};

pub const ENTRY_COUNT: u32 = 26;

/// Structure checked by default; it includes the commutation and multiplicativity predicates.
pub const DEFAULT_STRUCTURE: &str = "tbp";

const FILES: [&str; 26] = [
    include_str!("../data/catalog/entry01.json"),
    include_str!("../data/catalog/entry02.json"),
    include_str!("../data/catalog/entry03.json"),
    include_str!("../data/catalog/entry04.json"),
    include_str!("../data/catalog/entry05.json"),
    include_str!("../data/catalog/entry06.json"),
    include_str!("../data/catalog/entry07.json"),
    include_str!("../data/catalog/entry08.json"),
    include_str!("../data/catalog/entry09.json"),
    include_str!("../data/catalog/entry10.json"),
    include_str!("../data/catalog/entry11.json"),
    include_str!("../data/catalog/entry12.json"),
    include_str!("../data/catalog/entry13.json"),
    include_str!("../data/catalog/entry14.json"),
    include_str!("../data/catalog/entry15.json"),
    include_str!("../data/catalog/entry16.json"),
    include_str!("../data/catalog/entry17.json"),
    include_str!("../data/catalog/entry18.json"),
    include_str!("../data/catalog/entry19.json"),
    include_str!("../data/catalog/entry20.json"),
    include_str!("../data/catalog/entry21.json"),
    include_str!("../data/catalog/entry22.json"),
    include_str!("../data/catalog/entry23.json"),
    include_str!("../data/catalog/entry24.json"),
    include_str!("../data/catalog/entry25.json"),
    include_str!("../data/catalog/entry26.json"),
];

/// Case I has a zero bracket, case II a zero product, case III neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryStatus {
    AssertedPass,
    ReportOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub param: String,
    pub value: String,
}

/// One catalog entry as stored: the listed constants plus the derived bracket completion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub schema: u32,
    pub entry: u32,
    pub case: Case,
    pub params: Vec<String>,
    pub constraints: Vec<String>,
    pub branches: Vec<BranchSpec>,
    /// `[i, j, k, coeff]`: `e_i · e_j` has `coeff` on `e_k`. Unlisted products are zero.
    pub mul: Vec<(usize, usize, usize, String)>,
    /// Listed bracket constants. In case I the whole bracket is zero.
    pub br: Vec<(usize, usize, usize, String)>,
    pub alpha: Vec<Vec<String>>,
    pub beta: Vec<Vec<String>>,
    /// Bracket constants for the unlisted slots, as solved by [`complete_by_skew`].
    pub completion: Vec<(usize, usize, usize, String)>,
    pub status: EntryStatus,
    #[serde(default)]
    pub notes: Vec<String>,
}

pub fn entry(id: u32) -> Result<CatalogEntry> {
    if id == 0 || id > ENTRY_COUNT {
        return Err(Error::UnknownEntry(id));
    }
    parse_entry(FILES[id as usize - 1])
}

pub fn parse_entry(text: &str) -> Result<CatalogEntry> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn all_entries() -> Result<Vec<CatalogEntry>> {
    (1..=ENTRY_COUNT).map(entry).collect()
}

fn entries_json(v: &[(usize, usize, usize, String)]) -> Value {
    Value::Array(v.iter().map(|(i, j, k, c)| json!([i, j, k, c])).collect())
}

impl CatalogEntry {
    pub fn name(&self) -> String {
        format!("entry{:02}", self.entry)
    }

    /// Slots `(i, j)` whose bracket values the listing fixes.
    pub fn listed_slots(&self) -> BTreeSet<(usize, usize)> {
        match self.case {
            Case::I => (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect(),
            _ => self.br.iter().map(|(i, j, _, _)| (*i, *j)).collect(),
        }
    }

    fn bundle_with(&self, br: &[(usize, usize, usize, String)]) -> Result<AlgebraBundle> {
        let doc = json!({
            "schema": 1,
            "id": self.name(),
            "dim": 2,
            "basis": ["e1", "e2"],
            "ring": {
                "params": self.params,
                "constraints": self.constraints,
                "branches": self.branches.iter().map(|b| json!({"param": b.param, "value": b.value})).collect::<Vec<_>>(),
            },
            "ops": {
                "mul": {"arity": 2, "entries": entries_json(&self.mul)},
                "br": {"arity": 2, "entries": entries_json(br)},
            },
            "maps": {"a": self.alpha, "b": self.beta},
            "provenance": {"construction": "catalog", "parameters": {"entry": self.entry.to_string()}},
        });
        bundle_from_str(&doc.to_string())
    }

    /// Listed constants plus the stored completion.
    pub fn bundle(&self) -> Result<AlgebraBundle> {
        let mut br = self.br.clone();
        br.extend(self.completion.iter().cloned());
        self.bundle_with(&br)
    }

    /// Listed constants only, every unlisted bracket slot left at zero.
    pub fn zero_completed_bundle(&self) -> Result<AlgebraBundle> {
        let mut b = self.bundle_with(&self.br)?;
        b.id = format!("{}-zero-completed", self.name());
        Ok(b)
    }

    /// Derives the completion over the fraction field (on the first branch, if the entry is constrained).
    pub fn derive_completion(&self) -> Result<Vec<(usize, usize, usize, String)>> {
        let mut b = self.zero_completed_bundle()?;
        if let Some(branch) = b.ring.branches.first().cloned() {
            b = b.on_branch(&branch)?;
        }
        let full = skew_complete(b.op("br")?, &self.listed_slots(), b.map("a")?, b.map("b")?)?;
        let mut out = Vec::new();
        for (i, j) in unlisted(&self.listed_slots()) {
            for (k, c) in full.basis_value(&[i, j]).iter().enumerate() {
                if !c.is_zero() {
                    out.push((i, j, k, c.to_string()));
                }
            }
        }
        Ok(out)
    }
}

fn unlisted(listed: &BTreeSet<(usize, usize)>) -> Vec<(usize, usize)> {
    (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).filter(|s| !listed.contains(s)).collect()
}

/// Fills the unlisted slots of `br` so that `br(b(x), a(y)) + br(b(y), a(x)) = 0` on all basis pairs.
///
/// Unknowns are the constants of unlisted slots; free unknowns are set to zero.
pub fn skew_complete(
    br: &MultiOp,
    listed: &BTreeSet<(usize, usize)>,
    alpha: &LinMap,
    beta: &LinMap,
) -> Result<MultiOp> {
    let n = br.dim();
    let slots: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|s| !listed.contains(s)).collect();
    let unknown = |p: usize, q: usize, k: usize| slots.iter().position(|s| *s == (p, q)).map(|u| u * n + k);
    let count = slots.len() * n;
    let (mut rows, mut rhs) = (Vec::new(), Vec::new());
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let mut row = vec![Scalar::zero(); count];
                let mut constant = Scalar::zero();
                for p in 0..n {
                    for q in 0..n {
                        let w = &(beta.entry(p, i) * alpha.entry(q, j)) + &(beta.entry(p, j) * alpha.entry(q, i));
                        if w.is_zero() {
                            continue;
                        }
                        match unknown(p, q, k) {
                            Some(u) => row[u] = &row[u] + &w,
                            None => constant = &constant + &(&w * &br.basis_value(&[p, q])[k]),
                        }
                    }
                }
                rows.push(row);
                rhs.push(-constant);
            }
        }
    }
    let x = solve_linear(&rows, &rhs, count)?;
    let mut out = MultiOp::zero(n, 2);
    for i in 0..n {
        for j in 0..n {
            if listed.contains(&(i, j)) {
                out.set(&[i, j], br.basis_value(&[i, j]));
            }
        }
    }
    for (u, (p, q)) in slots.iter().enumerate() {
        out.set(&[*p, *q], x[u * n..(u + 1) * n].to_vec());
    }
    Ok(out)
}

/// Bracket of entry `id` at a numeric parameter point, completed by exact elimination over ℚ.
pub fn complete_by_skew(id: u32, point: &[Rational]) -> Result<MultiOp> {
    let e = entry(id)?;
    let b = e.zero_completed_bundle()?;
    b.ring.check_point(point)?;
    let b = b.eval_at(point)?;
    skew_complete(b.op("br")?, &e.listed_slots(), b.map("a")?, b.map("b")?)
}

pub fn verify_entry(id: u32, mode: &Mode) -> Result<Report> {
    let e = entry(id)?;
    let b = e.bundle()?;
    check_structure(DEFAULT_STRUCTURE, &b, mode)
}

/// Verifier output for a set of entries.
pub struct CatalogRun {
    pub entries: Vec<CatalogEntry>,
    pub bundles: Vec<AlgebraBundle>,
    pub reports: Vec<Report>,
}

/// Per-entry mode: `None` is symbolic, `Some((points, seed))` sampled.
pub fn verify_all(ids: &[u32], sampled: Option<(usize, u64)>) -> Result<CatalogRun> {
    let entries = ids.iter().map(|&id| entry(id)).collect::<Result<Vec<_>>>()?;
    let bundles = entries.iter().map(|e| e.bundle()).collect::<Result<Vec<_>>>()?;
    let reports = bundles
        .par_iter()
        .map(|b| {
            let mode = match sampled {
                None => Mode::Symbolic,
                Some((n, seed)) => Mode::sampled(b, n, seed)?,
            };
            check_structure(DEFAULT_STRUCTURE, b, &mode)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CatalogRun { entries, bundles, reports })
}

fn cell(s: Option<&Status>) -> &'static str {
    match s {
        Some(Status::Pass) => "pass",
        Some(Status::Fail) => "FAIL",
        Some(Status::Inapplicable(_)) => "n/a",
        None => "-",
    }
}

impl CatalogRun {
    /// Union of verdict ids across all reports, sorted.
    pub fn columns(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.reports.iter().flat_map(|r| r.verdicts.iter().map(|v| v.id.as_str())).collect();
        set.into_iter().map(String::from).collect()
    }

    /// Asserted-pass entries that did not pass.
    pub fn regressions(&self) -> Vec<u32> {
        self.entries
            .iter()
            .zip(&self.reports)
            .filter(|(e, r)| e.status == EntryStatus::AssertedPass && !r.is_pass())
            .map(|(e, _)| e.entry)
            .collect()
    }

    pub fn summary_table(&self) -> String {
        let cols = self.columns();
        let width = |c: &str| c.len().max(4);
        let mut s = String::new();
        let _ = write!(s, "{:<6} {:<5} {:<13} {:<7}", "entry", "case", "status", "overall");
        for c in &cols {
            let _ = write!(s, " {:<w$}", c, w = width(c));
        }
        s.push('\n');
        for (e, r) in self.entries.iter().zip(&self.reports) {
            let status = match e.status {
                EntryStatus::AssertedPass => "asserted-pass",
                EntryStatus::ReportOnly => "report-only",
            };
            let _ =
                write!(s, "{:<6} {:<5} {:<13} {:<7}", e.entry, format!("{:?}", e.case), status, cell(Some(&r.overall)));
            for c in &cols {
                let _ = write!(s, " {:<w$}", cell(r.verdict(c).map(|v| &v.status)), w = width(c));
            }
            s.push('\n');
        }
        s.lines().map(|l| format!("{}\n", l.trim_end())).collect()
    }

    /// Machine-readable report: one object per entry with every verdict and counterexample.
    pub fn report_json(&self) -> Value {
        let rows: Vec<Value> = self
            .entries
            .iter()
            .zip(&self.bundles)
            .zip(&self.reports)
            .map(|((e, b), r)| {
                let mut v = report_json(r, b);
                v["entry"] = json!(e.entry);
                v["case"] = json!(format!("{:?}", e.case));
                v["status"] = json!(match e.status {
                    EntryStatus::AssertedPass => "asserted-pass",
                    EntryStatus::ReportOnly => "report-only",
                });
                v["overall"] = json!(status_name(&r.overall));
                v
            })
            .collect();
        let matrix: BTreeMap<String, BTreeMap<String, &str>> = self
            .entries
            .iter()
            .zip(&self.reports)
            .map(|(e, r)| {
                let row = r.verdicts.iter().map(|v| (v.id.clone(), status_name(&v.status))).collect();
                (format!("{:02}", e.entry), row)
            })
            .collect();
        json!({"tool": crate::io::TOOL_VERSION, "structure": DEFAULT_STRUCTURE, "entries": rows, "matrix": matrix})
    }
}

/// Parses `5`, `24-26` or `1,3,20-22`.
pub fn parse_range(text: &str) -> Result<Vec<u32>> {
    let mut out = BTreeSet::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let num = |s: &str| s.trim().parse::<u32>().map_err(|_| Error::Invalid(format!("bad entry number `{s}`")));
        let (lo, hi) = match part.split_once('-') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(part)?, num(part)?),
        };
        for id in lo..=hi {
            if id == 0 || id > ENTRY_COUNT {
                return Err(Error::UnknownEntry(id));
            }
            out.insert(id);
        }
    }
    if out.is_empty() {
        return Err(Error::Invalid("empty entry range".into()));
    }
    Ok(out.into_iter().collect())
}

/// Pretty JSON for a catalog file, one structure constant per line.
pub fn entry_to_string(e: &CatalogEntry) -> String {
    let list = |v: &[(usize, usize, usize, String)]| -> String {
        if v.is_empty() {
            return "[]".into();
        }
        let lines: Vec<String> = v.iter().map(|(i, j, k, c)| format!("    [{i}, {j}, {k}, {}]", json!(c))).collect();
        format!("[\n{}\n  ]", lines.join(",\n"))
    };
    let compact = |v: Value| serde_json::to_string(&v).expect("json").replace("\",\"", "\", \"").replace("],[", "], [");
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"schema\": {},", e.schema);
    let _ = writeln!(s, "  \"entry\": {},", e.entry);
    let _ = writeln!(s, "  \"case\": \"{:?}\",", e.case);
    let _ = writeln!(s, "  \"params\": {},", compact(json!(e.params)));
    let _ = writeln!(s, "  \"constraints\": {},", compact(json!(e.constraints)));
    let branches: Vec<Value> = e.branches.iter().map(|b| json!({"param": b.param, "value": b.value})).collect();
    let _ = writeln!(s, "  \"branches\": {},", compact(json!(branches)).replace(",\"", ", \"").replace("\":", "\": "));
    let _ = writeln!(s, "  \"mul\": {},", list(&e.mul));
    let _ = writeln!(s, "  \"br\": {},", list(&e.br));
    let _ = writeln!(s, "  \"alpha\": {},", compact(json!(e.alpha)));
    let _ = writeln!(s, "  \"beta\": {},", compact(json!(e.beta)));
    let _ = writeln!(s, "  \"completion\": {},", list(&e.completion));
    let _ = writeln!(s, "  \"status\": {},", json!(e.status));
    let _ = writeln!(s, "  \"notes\": {}", serde_json::to_string_pretty(&e.notes).expect("json").replace("\n", "\n  "));
    s.push_str("}\n");
    s
}
