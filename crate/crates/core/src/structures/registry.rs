//! Named structures: identity sets plus predicates, read from `.idl` files.
//!
//! ```text
//! file      := stmt*
//! stmt      := "structure" name ";"
//!            | "include" name ";"
//!            | "predicate" ("commute" | "multiplicative") "(" ident "," ident ")" ";"
//!            | "regular" ident ("," ident)* ";"
//!            | "identity" name "=" identity ";"
//! ```
//! `name` may contain hyphens (`3-bihom-lie`). Identities declared after a `regular`
//! statement are only checked when those maps are invertible.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::identity::{nary_compat_text, nary_skew_text, parse_identity, IdentityAst, Parser};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Predicate {
    Commute(String, String),
    Multiplicative(String, String),
}

impl Predicate {
    pub fn id(&self) -> String {
        match self {
            Predicate::Commute(a, b) => format!("commute({a},{b})"),
            Predicate::Multiplicative(m, op) => format!("multiplicative({m},{op})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityDef {
    pub id: String,
    pub ast: IdentityAst,
    /// Maps that must be invertible for this identity to be meaningful.
    pub regular: Vec<String>,
}

impl IdentityDef {
    pub fn new(id: &str, text: &str) -> Result<Self> {
        Ok(IdentityDef { id: id.to_string(), ast: parse_identity(text)?, regular: Vec::new() })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StructureDef {
    pub name: String,
    pub includes: Vec<String>,
    pub predicates: Vec<Predicate>,
    pub identities: Vec<IdentityDef>,
    /// Laws that belong to the structure but are not checked, with the reason.
    pub unchecked: Vec<(String, String)>,
}

impl StructureDef {
    pub fn required_ops(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for d in &self.identities {
            out.extend(d.ast.ops_used());
        }
        for p in &self.predicates {
            if let Predicate::Multiplicative(_, op) = p {
                out.entry(op.clone()).or_insert(0);
            }
        }
        out
    }

    pub fn required_maps(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = BTreeSet::new();
        for d in &self.identities {
            out.extend(d.ast.maps_used().into_iter().map(|(m, _)| m));
            out.extend(d.regular.iter().cloned());
        }
        for p in &self.predicates {
            match p {
                Predicate::Commute(a, b) => {
                    out.insert(a.clone());
                    out.insert(b.clone());
                }
                Predicate::Multiplicative(m, _) => {
                    out.insert(m.clone());
                }
            }
        }
        out
    }
}

fn statement_end(p: &mut Parser) -> Result<()> {
    p.expect(';')
}

/// Parses the statements of one `.idl` text. Declarations before any `structure`
/// statement go to a structure named `default_name`.
pub fn parse_idl(text: &str, default_name: &str) -> Result<Vec<StructureDef>> {
    let mut p = Parser::new(text)?;
    let mut out: Vec<StructureDef> = Vec::new();
    let mut regular: Vec<String> = Vec::new();
    fn current<'a>(out: &'a mut Vec<StructureDef>, default_name: &str) -> &'a mut StructureDef {
        if out.is_empty() {
            out.push(StructureDef { name: default_name.to_string(), ..Default::default() });
        }
        out.last_mut().unwrap()
    }
    while !p.at_end() {
        let pos = p.pos();
        let kw = p.ident()?;
        match kw.as_str() {
            "structure" => {
                let name = p.dashed_name()?;
                statement_end(&mut p)?;
                out.push(StructureDef { name, ..Default::default() });
                regular.clear();
            }
            "include" => {
                let name = p.dashed_name()?;
                statement_end(&mut p)?;
                current(&mut out, default_name).includes.push(name);
            }
            "predicate" => {
                let kind = p.ident()?;
                p.expect('(')?;
                let a = p.ident()?;
                p.expect(',')?;
                let b = p.ident()?;
                p.expect(')')?;
                statement_end(&mut p)?;
                let pred = match kind.as_str() {
                    "commute" => Predicate::Commute(a, b),
                    "multiplicative" => Predicate::Multiplicative(a, b),
                    _ => return Err(Error::syntax(pos, format!("unknown predicate `{kind}`"))),
                };
                current(&mut out, default_name).predicates.push(pred);
            }
            "regular" => {
                regular = p.ident_list()?;
                statement_end(&mut p)?;
            }
            "identity" => {
                let id = p.dashed_name()?;
                p.expect('=')?;
                let ast = p.identity()?;
                statement_end(&mut p)?;
                ast.validate()?;
                let s = current(&mut out, default_name);
                if s.identities.iter().any(|d| d.id == id) {
                    return Err(Error::syntax(pos, format!("identity `{id}` declared twice")));
                }
                s.identities.push(IdentityDef { id, ast, regular: regular.clone() });
            }
            _ => return Err(Error::syntax(pos, format!("unknown statement `{kw}`"))),
        }
    }
    Ok(out)
}

const BUILTIN: &[(&str, &str)] = &[
    ("bihom-assoc", include_str!("../../data/registry/bihom-assoc.idl")),
    ("bihom-comm", include_str!("../../data/registry/bihom-comm.idl")),
    ("bihom-lie", include_str!("../../data/registry/bihom-lie.idl")),
    ("bihom-lie-regular", include_str!("../../data/registry/bihom-lie-regular.idl")),
    ("bp", include_str!("../../data/registry/bp.idl")),
    ("tbp", include_str!("../../data/registry/tbp.idl")),
    ("strong-bp", include_str!("../../data/registry/strong-bp.idl")),
    ("tbp-consequences", include_str!("../../data/registry/tbp-consequences.idl")),
    ("bihom-pre-lie", include_str!("../../data/registry/bihom-pre-lie.idl")),
    ("bihom-novikov", include_str!("../../data/registry/bihom-novikov.idl")),
    ("bihom-np", include_str!("../../data/registry/bihom-np.idl")),
    ("pre-lie-comm", include_str!("../../data/registry/pre-lie-comm.idl")),
    ("diff-np", include_str!("../../data/registry/diff-np.idl")),
    ("pre-lie-poisson", include_str!("../../data/registry/pre-lie-poisson.idl")),
    ("np-shifted", include_str!("../../data/registry/np-shifted.idl")),
    ("3-bihom-lie", include_str!("../../data/registry/3-bihom-lie.idl")),
    ("bp-3lie", include_str!("../../data/registry/bp-3lie.idl")),
    ("strong-bp-3lie", include_str!("../../data/registry/strong-bp-3lie.idl")),
    ("tbp-3lie", include_str!("../../data/registry/tbp-3lie.idl")),
    ("overlap-tbp-bp", include_str!("../../data/registry/overlap-tbp-bp.idl")),
    ("overlap-regular", include_str!("../../data/registry/overlap-regular.idl")),
    ("overlap-3lie", include_str!("../../data/registry/overlap-3lie.idl")),
    ("overlap-3lie-regular", include_str!("../../data/registry/overlap-3lie-regular.idl")),
    ("exponent-laws", include_str!("../../data/registry/exponent-laws.idl")),
    ("involution-ternary-tbp", include_str!("../../data/registry/involution-ternary-tbp.idl")),
];

#[derive(Clone, Debug, Default)]
pub struct Registry {
    defs: BTreeMap<String, StructureDef>,
}

impl Registry {
    /// The shipped structure files.
    pub fn builtin() -> &'static Registry {
        static REG: std::sync::OnceLock<Registry> = std::sync::OnceLock::new();
        REG.get_or_init(|| {
            let mut r = Registry::default();
            for (name, text) in BUILTIN {
                for def in parse_idl(text, name).unwrap_or_else(|e| panic!("registry file {name}: {e}")) {
                    r.insert(def);
                }
            }
            r
        })
    }

    pub fn insert(&mut self, def: StructureDef) {
        self.defs.insert(def.name.clone(), def);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Result<&StructureDef> {
        self.defs.get(name).ok_or_else(|| Error::UnknownStructure(name.to_string()))
    }

    /// The structure with all includes expanded; repeated predicates and identity ids are kept once.
    pub fn resolve(&self, name: &str) -> Result<StructureDef> {
        if let Some(n) = name.strip_prefix("tbp-").and_then(|s| s.strip_suffix("lie")).and_then(|s| s.parse().ok()) {
            if !self.defs.contains_key(name) {
                return self.resolve_def(&nary_structure(n)?, &mut Vec::new());
            }
        }
        if name == "tbp-nlie" {
            return Err(Error::UnknownStructure("tbp-nlie needs an arity, e.g. tbp-4lie".into()));
        }
        let def = self.get(name)?.clone();
        self.resolve_def(&def, &mut Vec::new())
    }

    fn resolve_def(&self, def: &StructureDef, stack: &mut Vec<String>) -> Result<StructureDef> {
        if stack.contains(&def.name) {
            return Err(Error::Invalid(format!("include cycle through `{}`", def.name)));
        }
        stack.push(def.name.clone());
        let mut out = StructureDef { name: def.name.clone(), ..Default::default() };
        for inc in &def.includes {
            let sub = self.resolve_def(self.get(inc)?, stack)?;
            merge(&mut out, sub);
        }
        let own = StructureDef { includes: Vec::new(), ..def.clone() };
        merge(&mut out, own);
        stack.pop();
        Ok(out)
    }
}

fn merge(into: &mut StructureDef, from: StructureDef) {
    for p in from.predicates {
        if !into.predicates.contains(&p) {
            into.predicates.push(p);
        }
    }
    for d in from.identities {
        if !into.identities.iter().any(|e| e.id == d.id) {
            into.identities.push(d);
        }
    }
    for u in from.unchecked {
        if !into.unchecked.contains(&u) {
            into.unchecked.push(u);
        }
    }
}

/// The TBP n-Lie structure on an n-ary op `nbr`: BiHom-commutative product, adjacent-slot
/// skew-symmetry, and the compatibility law. The n-ary Jacobi law is only checked for n = 3.
pub fn nary_structure(n: usize) -> Result<StructureDef> {
    if n < 2 {
        return Err(Error::Invalid(format!("n-ary structures need n >= 2, got {n}")));
    }
    let op = "nbr";
    let mut def = StructureDef {
        name: format!("tbp-{n}lie"),
        includes: vec!["bihom-comm".into()],
        predicates: vec![
            Predicate::Commute("a".into(), "b".into()),
            Predicate::Multiplicative("a".into(), op.into()),
            Predicate::Multiplicative("b".into(), op.into()),
        ],
        ..Default::default()
    };
    for i in 0..n - 1 {
        def.identities.push(IdentityDef::new(&format!("nary-skew-{}{}", i + 1, i + 2), &nary_skew_text(n, i, op))?);
    }
    def.identities.push(IdentityDef::new("nary-compat", &nary_compat_text(n, op))?);
    if n == 3 {
        let jac = Registry::builtin().get("3-bihom-lie")?.identities.iter().find(|d| d.id == "tern-jacobi").cloned();
        let text = jac.expect("shipped ternary Jacobi").ast.to_string().replace("tbr(", "nbr(");
        def.identities.push(IdentityDef::new("nary-jacobi", &text)?);
    } else {
        def.unchecked.push(("nary-jacobi".into(), "not checked (external definition)".into()));
    }
    Ok(def)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::{instantiate_exponent_law, ExponentLaw, ExponentTuple};

    #[test]
    fn builtin_parses_and_resolves() {
        let r = Registry::builtin();
        assert_eq!(r.names().count(), BUILTIN.len());
        let tbp = r.resolve("tbp").unwrap();
        let ids: Vec<&str> = tbp.identities.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["assoc", "comm", "skew", "jacobi", "tbp-compat"]);
        assert_eq!(tbp.predicates.len(), 5);
        assert_eq!(tbp.required_maps().into_iter().collect::<Vec<_>>(), ["a", "b"]);
    }

    #[test]
    fn regular_gating_is_per_identity() {
        let r = Registry::builtin();
        let d = r.resolve("bihom-lie-regular").unwrap();
        assert!(d.identities.iter().all(|i| i.regular == ["a", "b"]));
        let d = r.resolve("tbp").unwrap();
        assert!(d.identities.iter().all(|i| i.regular.is_empty()));
    }

    #[test]
    fn shipped_exponent_members_match_generator() {
        let d = Registry::builtin().get("exponent-laws").unwrap();
        let z = ExponentTuple::default();
        assert_eq!(d.identities[0].ast, instantiate_exponent_law(ExponentLaw::First, z));
        assert_eq!(d.identities[1].ast, instantiate_exponent_law(ExponentLaw::Second, z));
        assert_eq!(d.identities[2].ast, instantiate_exponent_law(ExponentLaw::Regular, z));
    }

    #[test]
    fn nary_structures() {
        let r = Registry::builtin();
        let d = r.resolve("tbp-4lie").unwrap();
        assert_eq!(d.unchecked.len(), 1);
        assert!(d.identities.iter().any(|i| i.id == "nary-skew-34"));
        let d3 = r.resolve("tbp-3lie").unwrap();
        assert!(d3.identities.iter().any(|i| i.id == "tern-jacobi"));
        assert!(r.resolve("tbp-1lie").is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_idl("structure x; bogus y;", "f"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_idl("predicate swap(a, b);", "f"), Err(Error::Syntax { .. })));
        let defs = parse_idl("identity s = forall x, y: br(x, y) + br(y, x) = 0;", "loose").unwrap();
        assert_eq!(defs[0].name, "loose");
    }
}
