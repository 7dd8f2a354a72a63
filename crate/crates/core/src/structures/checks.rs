//! Structure checkers producing reports.

use rayon::prelude::*;

use super::bundle::AlgebraBundle;
use super::registry::{IdentityDef, Predicate, Registry, StructureDef};
use crate::error::{Error, Result};
use crate::identity::{
    check_identity, check_identity_sampled, exponent_law_text, parse_identity, ExponentLaw, ExponentTuple, Status,
    Verdict,
};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    Symbolic,
    Sampled { points: Vec<Vec<Rational>>, seed: Option<u64> },
}

impl Mode {
    /// `n` seeded points admissible for `bundle`, with coordinates in [-10, 10].
    pub fn sampled(bundle: &AlgebraBundle, n: usize, seed: u64) -> Result<Mode> {
        if n == 0 {
            return Err(Error::Invalid("sampled mode needs at least one point".into()));
        }
        Ok(Mode::Sampled { points: bundle.sample_points(n, seed, 10)?, seed: Some(seed) })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Symbolic => "symbolic",
            Mode::Sampled { .. } => "sampled",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub bundle_id: String,
    pub structure: String,
    pub mode: Mode,
    pub verdicts: Vec<Verdict>,
    pub overall: Status,
    pub notes: Vec<String>,
}

impl Report {
    /// Sorts verdicts by id; overall is pass iff every verdict passes, fail if any fails.
    pub fn new(bundle_id: &str, structure: &str, mode: Mode, mut verdicts: Vec<Verdict>) -> Self {
        verdicts.sort_by(|a, b| a.id.cmp(&b.id));
        let overall = overall_status(&verdicts);
        Report { bundle_id: bundle_id.into(), structure: structure.into(), mode, verdicts, overall, notes: Vec::new() }
    }

    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn is_pass(&self) -> bool {
        self.overall == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.overall == Status::Fail
    }

    /// Appends another report's verdicts (ids prefixed are left to the caller) and recomputes.
    pub fn merge(mut self, other: Report) -> Report {
        self.verdicts.extend(other.verdicts);
        self.notes.extend(other.notes);
        let mut r = Report::new(&self.bundle_id, &self.structure, self.mode, self.verdicts);
        r.notes = self.notes;
        r
    }
}

pub fn overall_status(verdicts: &[Verdict]) -> Status {
    if verdicts.iter().any(Verdict::is_fail) {
        Status::Fail
    } else if verdicts.iter().all(Verdict::is_pass) {
        Status::Pass
    } else {
        Status::Inapplicable("some verdicts are inapplicable".into())
    }
}

fn not_invertible(id: &str, e: Error) -> Result<Verdict> {
    match e {
        Error::NotInvertible { map, det } => {
            Ok(Verdict::inapplicable(id, format!("non-invertible map `{map}` (determinant {det})")))
        }
        e => Err(e),
    }
}

fn singular_map(bundle: &AlgebraBundle, names: &[String]) -> Result<Option<String>> {
    for m in names {
        if !bundle.map(m)?.is_invertible() {
            return Ok(Some(m.clone()));
        }
    }
    Ok(None)
}

/// One identity under a mode. Negative powers of singular maps, and `regular` gating,
/// give `inapplicable` instead of an error.
pub fn check_def(def: &IdentityDef, bundle: &AlgebraBundle, mode: &Mode) -> Result<Verdict> {
    let id = def.id.as_str();
    match mode {
        Mode::Symbolic => {
            let instances = match bundle.symbolic_instances() {
                Ok(v) => v,
                Err(Error::Invalid(msg)) => return Ok(Verdict::inapplicable(id, msg)),
                Err(e) => return Err(e),
            };
            let mut notes = Vec::new();
            for (branch, inst) in &instances {
                let label = branch.map(|i| {
                    let b = &bundle.ring.branches[i];
                    format!("branch {} = {}", bundle.ring.params[b.param], b.value)
                });
                if let Some(m) = singular_map(inst, &def.regular)? {
                    return Ok(Verdict::inapplicable(id, format!("regular-only law; map `{m}` is not invertible")));
                }
                let v = match check_identity(id, &def.ast, inst) {
                    Ok(v) => v,
                    Err(e) => return not_invertible(id, e),
                };
                if v.is_fail() {
                    return Ok(match label {
                        Some(l) => v.with_note(l),
                        None => v,
                    });
                }
                if let Some(l) = label {
                    notes.push(l);
                }
            }
            let mut v = Verdict::pass(id);
            if !notes.is_empty() {
                v = v.with_note(format!("checked on {}", notes.join("; ")));
            }
            Ok(v)
        }
        Mode::Sampled { points, .. } => {
            for p in points {
                bundle.ring.check_point(p)?;
                if let Some(m) = singular_map(&bundle.eval_at(p)?, &def.regular)? {
                    return Ok(Verdict::inapplicable(id, format!("regular-only law; map `{m}` is not invertible")));
                }
            }
            check_identity_sampled(id, &def.ast, bundle, points).or_else(|e| not_invertible(id, e))
        }
    }
}

fn var_list(r: usize) -> Vec<String> {
    (1..=r).map(|i| format!("x{i}")).collect()
}

/// The identity behind a structural predicate on this bundle.
pub fn predicate_def(pred: &Predicate, bundle: &AlgebraBundle) -> Result<IdentityDef> {
    let text = match pred {
        Predicate::Commute(a, b) => {
            bundle.map(a)?;
            bundle.map(b)?;
            format!("forall x: {a}({b}(x)) - {b}({a}(x)) = 0")
        }
        Predicate::Multiplicative(m, op) => {
            bundle.map(m)?;
            let xs = var_list(bundle.op(op)?.arity());
            let mapped: Vec<String> = xs.iter().map(|x| format!("{m}({x})")).collect();
            format!("forall {}: {m}({op}({})) - {op}({}) = 0", xs.join(", "), xs.join(", "), mapped.join(", "))
        }
    };
    IdentityDef::new(&pred.id(), &text)
}

fn check_requirements(def: &StructureDef, bundle: &AlgebraBundle) -> Result<()> {
    for (op, arity) in def.required_ops() {
        let o = bundle.op(&op)?;
        if arity != 0 && o.arity() != arity {
            return Err(Error::ArityMismatch { name: op, expected: arity, found: o.arity() });
        }
    }
    for m in def.required_maps() {
        bundle.map(&m)?;
    }
    Ok(())
}

/// Runs every predicate and identity of a resolved structure; nothing short-circuits.
pub fn check_def_set(def: &StructureDef, bundle: &AlgebraBundle, mode: &Mode) -> Result<Report> {
    check_requirements(def, bundle)?;
    let mut defs: Vec<IdentityDef> = def.predicates.iter().map(|p| predicate_def(p, bundle)).collect::<Result<_>>()?;
    defs.extend(def.identities.iter().cloned());
    let verdicts: Vec<Verdict> = defs.par_iter().map(|d| check_def(d, bundle, mode)).collect::<Result<_>>()?;
    let mut r = Report::new(&bundle.id, &def.name, mode.clone(), verdicts);
    for (id, why) in &def.unchecked {
        r.notes.push(format!("{id}: {why}"));
    }
    Ok(r)
}

pub fn check_structure(name: &str, bundle: &AlgebraBundle, mode: &Mode) -> Result<Report> {
    check_def_set(&Registry::builtin().resolve(name)?, bundle, mode)
}

/// The four consequences of the TBP law.
pub fn check_tbp_consequences(bundle: &AlgebraBundle, mode: &Mode) -> Result<Report> {
    check_structure("tbp-consequences", bundle, mode)
}

/// Overlap of the TBP and BP laws; the annihilator form is only checked for invertible maps.
pub fn check_overlap_tbp_bp(bundle: &AlgebraBundle, mode: &Mode) -> Result<Report> {
    let r = check_structure("overlap-tbp-bp", bundle, mode)?;
    Ok(r.merge(check_structure("overlap-regular", bundle, mode)?))
}

/// Ternary overlap laws, with the annihilator form for invertible maps.
pub fn check_overlap_3lie(bundle: &AlgebraBundle, mode: &Mode) -> Result<Report> {
    let r = check_structure("overlap-3lie", bundle, mode)?;
    Ok(r.merge(check_structure("overlap-3lie-regular", bundle, mode)?))
}

/// Leibniz rule of `map` over each op, plus commutation with `a` and `b` when asked.
pub fn check_derivation(
    bundle: &AlgebraBundle,
    map: &str,
    ops: &[&str],
    with_commute: bool,
    mode: &Mode,
) -> Result<Report> {
    bundle.map(map)?;
    let mut def = StructureDef { name: format!("derivation({map})"), ..Default::default() };
    for op in ops {
        let xs = var_list(bundle.op(op)?.arity());
        let mut text = format!("forall {}: {map}({op}({}))", xs.join(", "), xs.join(", "));
        for i in 0..xs.len() {
            let args: Vec<String> =
                xs.iter().enumerate().map(|(j, x)| if i == j { format!("{map}({x})") } else { x.clone() }).collect();
            text.push_str(&format!(" - {op}({})", args.join(", ")));
        }
        text.push_str(" = 0");
        def.identities.push(IdentityDef::new(&format!("derivation({map},{op})"), &text)?);
    }
    if with_commute {
        def.predicates.push(Predicate::Commute(map.into(), "a".into()));
        def.predicates.push(Predicate::Commute(map.into(), "b".into()));
    }
    check_def_set(&def, bundle, mode)
}

/// `f` squares to the identity, reverses the sign of the bracket, and commutes with `a`, `b`.
pub fn check_involution(bundle: &AlgebraBundle, map: &str, mode: &Mode) -> Result<Report> {
    let f = map;
    let def = StructureDef {
        name: format!("involution({f})"),
        predicates: vec![Predicate::Commute(f.into(), "a".into()), Predicate::Commute(f.into(), "b".into())],
        identities: vec![
            IdentityDef::new(&format!("involution({f})"), &format!("forall x: {f}({f}(x)) - x = 0"))?,
            IdentityDef::new(
                &format!("anti-hom({f},br)"),
                &format!("forall x, y: {f}(br(x, y)) + br({f}(x), {f}(y)) = 0"),
            )?,
        ],
        ..Default::default()
    };
    check_def_set(&def, bundle, mode)
}

/// The right compatibility law next to its shifted form, with an agreement verdict.
/// Agreement is only asserted on regular BiHom-commutative bundles.
pub fn check_shifted_agreement(bundle: &AlgebraBundle, mode: &Mode) -> Result<Report> {
    let reg = Registry::builtin();
    let right = reg.resolve("pre-lie-poisson")?;
    let right = right.identities.iter().find(|d| d.id == "np-compat-right").expect("shipped").clone();
    let shifted = reg.resolve("np-shifted")?.identities[0].clone();
    let v1 = check_def(&right, bundle, mode)?;
    let v2 = check_def(&shifted, bundle, mode)?;
    let comm = reg.resolve("bihom-comm")?;
    let comm = comm.identities.iter().find(|d| d.id == "comm").expect("shipped").clone();
    let hyp = check_def(&comm, bundle, mode)?;
    let regular = singular_map(bundle, &["a".into(), "b".into()])?.is_none();
    let agreement = if !regular {
        Verdict::inapplicable("agreement", "structure maps are not invertible")
    } else if !hyp.is_pass() {
        Verdict::inapplicable("agreement", "BiHom-commutativity fails; equivalence hypothesis not met")
    } else if v1.status == v2.status {
        Verdict::pass("agreement")
    } else {
        let cx = v1.counterexample.clone().or_else(|| v2.counterexample.clone()).expect("one side failed");
        Verdict::fail("agreement", cx)
            .with_note(format!("np-compat-right is {:?}, np-compat-shifted is {:?}", v1.status, v2.status))
    };
    let mut r = Report::new(&bundle.id, "equivalence", mode.clone(), vec![v1, v2, agreement]);
    if !hyp.is_pass() {
        r.notes.push("hypothesis failure: product is not BiHom-commutative".into());
    }
    Ok(r)
}

/// Checks a single identity text (for ad hoc use from the CLI and tests).
pub fn check_text(id: &str, text: &str, bundle: &AlgebraBundle, mode: &Mode) -> Result<Verdict> {
    let def = IdentityDef { id: id.into(), ast: parse_identity(text)?, regular: Vec::new() };
    check_def(&def, bundle, mode)
}

/// The two exponent-parametrised laws at every tuple, plus the regular closed form.
pub fn check_exponent_laws(bundle: &AlgebraBundle, tuples: &[ExponentTuple], mode: &Mode) -> Result<Report> {
    let mut defs = Vec::new();
    for t in tuples {
        let tag = t.to_array().iter().map(i32::to_string).collect::<Vec<_>>().join(",");
        defs.push(IdentityDef::new(&format!("exp-first[{tag}]"), &exponent_law_text(ExponentLaw::First, *t))?);
        defs.push(IdentityDef::new(&format!("exp-second[{tag}]"), &exponent_law_text(ExponentLaw::Second, *t))?);
    }
    let laws = Registry::builtin().resolve("exponent-laws")?;
    defs.extend(laws.identities.iter().filter(|d| d.id == "exp-regular").cloned());
    let verdicts: Vec<Verdict> = defs.par_iter().map(|d| check_def(d, bundle, mode)).collect::<Result<_>>()?;
    Ok(Report::new(&bundle.id, "exponent-laws", mode.clone(), verdicts))
}
