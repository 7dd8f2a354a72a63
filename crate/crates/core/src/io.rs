//! Bundle files (JSON) and report serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::identity::{Status, Verdict};
use crate::linear::{format_vector, BasisSpace, LinMap, MultiOp};
use crate::scalar::{format_point, params_from, parse_scalar, Scalar};
use crate::structures::{AlgebraBundle, Branch, Mode, Provenance, Report, Ring};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!("bihom ", env!("CARGO_PKG_VERSION"));

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleFile {
    schema: u32,
    #[serde(default)]
    id: String,
    dim: usize,
    #[serde(default)]
    basis: Option<Vec<String>>,
    #[serde(default)]
    ring: RingFile,
    #[serde(default)]
    ops: BTreeMap<String, OpFile>,
    #[serde(default)]
    maps: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    provenance: Option<Provenance>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RingFile {
    #[serde(default)]
    params: Vec<String>,
    #[serde(default)]
    constraints: Vec<String>,
    #[serde(default)]
    branches: Vec<BranchFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchFile {
    param: String,
    value: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OpFile {
    arity: usize,
    #[serde(default)]
    entries: Vec<Vec<Value>>,
}

fn json_error(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => Error::Schema(e.to_string()),
        _ => Error::Parse { line: e.line(), msg: e.to_string() },
    }
}

fn entry_index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::Schema(format!("{what}: expected a nonnegative integer, got {v}")))
}

fn parse_op(name: &str, f: &OpFile, dim: usize, ring: &Ring) -> Result<MultiOp> {
    if f.arity == 0 {
        return Err(Error::Schema(format!("op `{name}` has arity 0")));
    }
    let mut op = MultiOp::zero(dim, f.arity);
    let mut seen = std::collections::BTreeSet::new();
    for e in &f.entries {
        if e.len() != f.arity + 2 {
            return Err(Error::Schema(format!(
                "op `{name}`: entries need {} indices, a target index and a coefficient",
                f.arity
            )));
        }
        let idx: Vec<usize> = e[..f.arity].iter().map(|v| entry_index(v, name)).collect::<Result<_>>()?;
        let k = entry_index(&e[f.arity], name)?;
        op.check_index(&idx)?;
        if k >= dim {
            return Err(Error::IndexOutOfRange(format!("op `{name}`: target index {k} in dimension {dim}")));
        }
        if !seen.insert((idx.clone(), k)) {
            return Err(Error::Schema(format!("op `{name}`: duplicate entry {idx:?} -> {k}")));
        }
        let c = match &e[f.arity + 1] {
            Value::String(s) => parse_scalar(s, &ring.params)?,
            Value::Number(n) if n.is_i64() => Scalar::int(n.as_i64().unwrap()),
            v => return Err(Error::Schema(format!("op `{name}`: coefficient must be a string, got {v}"))),
        };
        op.add_constant(&idx, k, &c);
    }
    Ok(op)
}

/// Parses and validates a bundle from JSON text.
pub fn bundle_from_str(text: &str) -> Result<AlgebraBundle> {
    let f: BundleFile = serde_json::from_str(text).map_err(json_error)?;
    if f.schema != SCHEMA_VERSION {
        return Err(Error::Schema(format!("unsupported schema version {}", f.schema)));
    }
    if f.dim == 0 {
        return Err(Error::Schema("dim must be positive".into()));
    }
    let space = match f.basis {
        Some(labels) if labels.len() != f.dim => {
            return Err(Error::Schema(format!("{} basis labels for dimension {}", labels.len(), f.dim)))
        }
        Some(labels) => BasisSpace::new(labels)?,
        None => BasisSpace::standard(f.dim),
    };
    let mut ring = Ring::free(&f.ring.params);
    if ring.params.iter().enumerate().any(|(i, p)| ring.params[..i].contains(p)) {
        return Err(Error::Schema("parameter names must be distinct".into()));
    }
    for c in &f.ring.constraints {
        ring.constraints.push(parse_scalar(c, &ring.params)?);
    }
    for b in &f.ring.branches {
        let param = ring.param_index(&b.param)?;
        let value = parse_scalar(&b.value, &ring.params)?;
        ring.branches.push(Branch { param, value });
    }
    let mut bundle = AlgebraBundle::new(&f.id, space, ring);
    for (name, op) in &f.ops {
        let op = parse_op(name, op, f.dim, &bundle.ring)?;
        bundle.ops.insert(name.clone(), op);
    }
    for (name, rows) in &f.maps {
        if rows.len() != f.dim || rows.iter().any(|r| r.len() != f.dim) {
            return Err(Error::Schema(format!("map `{name}` must be a {0}x{0} matrix", f.dim)));
        }
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_scalar(s, &bundle.ring.params)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        bundle.maps.insert(name.clone(), LinMap::from_rows(rows)?);
    }
    bundle.provenance = f.provenance;
    bundle.validate()?;
    Ok(bundle)
}

pub fn load_bundle(path: impl AsRef<Path>) -> Result<AlgebraBundle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut b = bundle_from_str(&text)?;
    if b.id.is_empty() {
        b.id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(b)
}

fn q(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

fn str_list<S: AsRef<str>>(v: &[S]) -> String {
    let parts: Vec<String> = v.iter().map(|s| q(s.as_ref())).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical JSON text: ops and maps sorted by name, one structure constant per line.
pub fn bundle_to_string(b: &AlgebraBundle) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{{");
    let _ = writeln!(s, "  \"schema\": {SCHEMA_VERSION},");
    let _ = writeln!(s, "  \"id\": {},", q(&b.id));
    let _ = writeln!(s, "  \"dim\": {},", b.dim());
    let _ = writeln!(s, "  \"basis\": {},", str_list(b.space.labels()));
    let constraints: Vec<String> = b.ring.constraints.iter().map(|c| c.to_string()).collect();
    let branches: Vec<String> = b
        .ring
        .branches
        .iter()
        .map(|br| format!("{{\"param\": {}, \"value\": {}}}", q(&b.ring.params[br.param]), q(&br.value.to_string())))
        .collect();
    let _ = writeln!(
        s,
        "  \"ring\": {{\"params\": {}, \"constraints\": {}, \"branches\": [{}]}},",
        str_list(&b.ring.params),
        str_list(&constraints),
        branches.join(", ")
    );
    let ops: Vec<String> = b
        .ops
        .iter()
        .map(|(name, op)| {
            let mut lines = Vec::new();
            for (idx, v) in op.entries() {
                for (k, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let ids: Vec<String> = idx.iter().map(usize::to_string).collect();
                    lines.push(format!("      [{}, {k}, {}]", ids.join(", "), q(&c.to_string())));
                }
            }
            let body = if lines.is_empty() { "[]".to_string() } else { format!("[\n{}\n    ]", lines.join(",\n")) };
            format!("    {}: {{\"arity\": {}, \"entries\": {body}}}", q(name), op.arity())
        })
        .collect();
    if ops.is_empty() {
        let _ = writeln!(s, "  \"ops\": {{}},");
    } else {
        let _ = writeln!(s, "  \"ops\": {{\n{}\n  }},", ops.join(",\n"));
    }
    let maps: Vec<String> = b
        .maps
        .iter()
        .map(|(name, m)| {
            let rows: Vec<String> =
                m.rows().iter().map(|r| str_list(&r.iter().map(|c| c.to_string()).collect::<Vec<_>>())).collect();
            format!("    {}: [{}]", q(name), rows.join(", "))
        })
        .collect();
    let maps_text = if maps.is_empty() { "{}".to_string() } else { format!("{{\n{}\n  }}", maps.join(",\n")) };
    match &b.provenance {
        Some(p) => {
            let _ = writeln!(s, "  \"maps\": {maps_text},");
            let _ = writeln!(s, "  \"provenance\": {}", serde_json::to_string(p).expect("provenance serializes"));
        }
        None => {
            let _ = writeln!(s, "  \"maps\": {maps_text}");
        }
    }
    s.push_str("}\n");
    s
}

pub fn save_bundle(b: &AlgebraBundle, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, bundle_to_string(b))?;
    Ok(())
}

pub fn status_name(s: &Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Inapplicable(_) => "inapplicable",
    }
}

pub fn verdict_json(v: &Verdict, bundle: &AlgebraBundle) -> Value {
    let labels = bundle.space.labels();
    let mut o = json!({ "id": v.id, "status": status_name(&v.status) });
    if let Status::Inapplicable(reason) = &v.status {
        o["reason"] = json!(reason);
    }
    if let Some(cx) = &v.counterexample {
        let mut c = json!({
            "tuple": cx.tuple,
            "basis": cx.tuple.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
            "residual": format_vector(&cx.residual, labels),
        });
        if let Some(p) = &cx.point {
            c["point"] = json!(format_point(&bundle.ring.params, p));
        }
        o["counterexample"] = c;
    }
    if !v.notes.is_empty() {
        o["notes"] = json!(v.notes);
    }
    o
}

pub fn report_json(r: &Report, bundle: &AlgebraBundle) -> Value {
    let mut o = json!({
        "tool": TOOL_VERSION,
        "bundle": r.bundle_id,
        "structure": r.structure,
        "mode": r.mode.name(),
        "overall": status_name(&r.overall),
        "verdicts": r.verdicts.iter().map(|v| verdict_json(v, bundle)).collect::<Vec<_>>(),
    });
    if let Mode::Sampled { points, seed } = &r.mode {
        o["seed"] = json!(seed);
        o["points"] = json!(points.iter().map(|p| format_point(&bundle.ring.params, p)).collect::<Vec<_>>());
    }
    if !r.notes.is_empty() {
        o["notes"] = json!(r.notes);
    }
    o
}

/// Pretty JSON with sorted keys; identical inputs give identical bytes.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

/// One line per verdict, for terminals.
pub fn report_text(r: &Report, bundle: &AlgebraBundle) -> String {
    let labels = bundle.space.labels();
    let mut s = format!("{} / {} ({}): {}\n", r.bundle_id, r.structure, r.mode.name(), status_name(&r.overall));
    for v in &r.verdicts {
        let _ = write!(s, "  {:<28} {}", v.id, status_name(&v.status));
        if let Status::Inapplicable(reason) = &v.status {
            let _ = write!(s, " ({reason})");
        }
        if let Some(cx) = &v.counterexample {
            let basis: Vec<&str> = cx.tuple.iter().map(|&i| labels[i].as_str()).collect();
            let _ = write!(s, " at ({})", basis.join(", "));
            if let Some(p) = &cx.point {
                let _ = write!(s, " {}", format_point(&bundle.ring.params, p));
            }
            let _ = write!(s, ", residual {}", format_vector(&cx.residual, labels));
        }
        for n in &v.notes {
            let _ = write!(s, " [{n}]");
        }
        s.push('\n');
    }
    for n in &r.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    s
}

/// Renames the parameters of a bundle, e.g. `k1,k2` to `k3,k4` before a tensor product.
pub fn rename_params(b: &AlgebraBundle, names: &[&str]) -> Result<AlgebraBundle> {
    if names.len() != b.ring.params.len() {
        return Err(Error::Invalid(format!("{} new names for {} parameters", names.len(), b.ring.params.len())));
    }
    let target = params_from(names);
    let index: Vec<usize> = (0..names.len()).collect();
    let mut out = b.map_scalars(|s| Ok(s.reindex(&target, &index)))?;
    out.ring = Ring {
        params: target.clone(),
        constraints: b.ring.constraints.iter().map(|c| c.reindex(&target, &index)).collect(),
        branches: b
            .ring
            .branches
            .iter()
            .map(|br| Branch { param: br.param, value: br.value.reindex(&target, &index) })
            .collect(),
    };
    Ok(out)
}

/// Moves both bundles onto the union of their parameter lists (left names first).
pub fn join_params(a: &AlgebraBundle, b: &AlgebraBundle) -> Result<(AlgebraBundle, AlgebraBundle)> {
    let mut names: Vec<&str> = a.ring.params.iter().map(String::as_str).collect();
    for n in b.ring.params.iter() {
        if !names.contains(&n.as_str()) {
            names.push(n);
        }
    }
    let target = params_from(&names);
    let widen = |x: &AlgebraBundle| -> Result<AlgebraBundle> {
        let index: Vec<usize> = x.ring.params.iter().map(|n| names.iter().position(|m| m == n).unwrap()).collect();
        let mut out = x.map_scalars(|s| Ok(s.reindex(&target, &index)))?;
        out.ring = Ring {
            params: target.clone(),
            constraints: x.ring.constraints.iter().map(|c| c.reindex(&target, &index)).collect(),
            branches: x
                .ring
                .branches
                .iter()
                .map(|br| Branch { param: index[br.param], value: br.value.reindex(&target, &index) })
                .collect(),
        };
        Ok(out)
    };
    Ok((widen(a)?, widen(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "schema": 1, "id": "t", "dim": 2,
        "ring": {"params": ["k1"]},
        "ops": {"mul": {"arity": 2, "entries": [[0, 0, 1, "k1"], [0, 1, 1, "1/2"]]}},
        "maps": {"a": [["1", "0"], ["k1", "1"]], "b": [["1", "0"], ["0", "1"]]}
    }"#;

    #[test]
    fn round_trip() {
        let b = bundle_from_str(SMALL).unwrap();
        let text = bundle_to_string(&b);
        let again = bundle_from_str(&text).unwrap();
        assert_eq!(bundle_to_string(&again), text);
        assert_eq!(again.op("mul").unwrap(), b.op("mul").unwrap());
    }

    #[test]
    fn validation_errors() {
        let bad_index = SMALL.replace("[0, 1, 1, \"1/2\"]", "[0, 3, 1, \"1/2\"]");
        assert!(matches!(bundle_from_str(&bad_index), Err(Error::IndexOutOfRange(_))));
        let unknown = SMALL.replace("\"schema\": 1,", "\"schema\": 1, \"colour\": 3,");
        assert!(matches!(bundle_from_str(&unknown), Err(Error::Schema(_))));
        let bad_param = SMALL.replace("[\"k1\", \"1\"]", "[\"k9\", \"1\"]");
        assert!(matches!(bundle_from_str(&bad_param), Err(Error::UnknownParameter(_))));
        assert!(matches!(bundle_from_str("{\n\"schema\": 1,\n"), Err(Error::Parse { line: 3, .. })));
        let trivial = bundle_from_str(r#"{"schema": 1, "dim": 1}"#).unwrap();
        assert_eq!(trivial.dim(), 1);
        assert!(trivial.ops.is_empty() && trivial.maps.is_empty());
    }
}
