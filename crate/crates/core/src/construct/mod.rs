//! Algebra-to-algebra constructions as bundle transformers.
//!
//! Every construction checks its hypotheses first. In strict mode a failed hypothesis is an
//! error; in relaxed mode the output is built anyway and the failures are recorded in the
//! provenance notes. Inputs are never mutated.

mod truncated;

pub use truncated::Truncated;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::identity::{parse_identity, Compiled, Verdict};
use crate::linear::{basis_vector, zero_vector, MultiOp, Vector};
use crate::scalar::Scalar;
use crate::structures::{
    check_derivation, check_involution, check_structure, predicate_def, AlgebraBundle, IdentityDef, Mode, Predicate,
    Provenance, StructureDef,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    Strict,
    Relaxed,
}

/// Which maps (and powers) twist each slot of one op.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    pub op: String,
    pub slots: Vec<(String, i32)>,
}

impl TwistSpec {
    pub fn new(op: &str, slots: &[(&str, i32)]) -> Self {
        TwistSpec { op: op.into(), slots: slots.iter().map(|(m, p)| (m.to_string(), *p)).collect() }
    }

    /// `op ∘ (a ⊗ b)`.
    pub fn binary(op: &str) -> Self {
        TwistSpec::new(op, &[("a", 1), ("b", 1)])
    }

    /// `op ∘ (a ⊗ .. ⊗ a ⊗ b)` for an op of arity `n`.
    pub fn nary(op: &str, n: usize) -> Self {
        let mut slots = vec![("a", 1); n - 1];
        slots.push(("b", 1));
        TwistSpec::new(op, &slots)
    }

    /// Parses `op:m1,m2` with optional powers, e.g. `br:a^2,b^-1`.
    pub fn parse(s: &str) -> Result<Self> {
        let (op, maps) = s.split_once(':').ok_or_else(|| Error::Invalid(format!("twist `{s}`: expected op:m1,m2")))?;
        let mut slots = Vec::new();
        for m in maps.split(',').map(str::trim) {
            let (name, pow) = match m.split_once('^') {
                Some((n, p)) => (n, p.parse::<i32>().map_err(|_| Error::Invalid(format!("bad power in `{m}`")))?),
                None => (m, 1),
            };
            slots.push((name.to_string(), pow));
        }
        Ok(TwistSpec { op: op.trim().to_string(), slots })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorKind {
    BpTbp,
    PreLiePoisson,
}

/// Hypothesis verdicts gathered before building.
struct Hypotheses {
    strictness: Strictness,
    failed: Vec<String>,
}

impl Hypotheses {
    fn new(strictness: Strictness) -> Self {
        Hypotheses { strictness, failed: Vec::new() }
    }

    fn record(&mut self, verdicts: impl IntoIterator<Item = Verdict>) {
        for v in verdicts {
            if !v.is_pass() {
                let detail = match &v.counterexample {
                    Some(cx) => format!("{} fails at basis tuple {:?}", v.id, cx.tuple),
                    None => format!("{} is {:?}", v.id, v.status),
                };
                self.failed.push(detail);
            }
        }
    }

    fn check_set(&mut self, def: &StructureDef, bundle: &AlgebraBundle) -> Result<()> {
        let r = crate::structures::check_def_set(def, bundle, &Mode::Symbolic)?;
        self.record(r.verdicts);
        Ok(())
    }

    fn finish(self) -> Result<Vec<String>> {
        if self.strictness == Strictness::Strict && !self.failed.is_empty() {
            return Err(Error::PredicateFailed(self.failed.join("; ")));
        }
        Ok(self.failed.into_iter().map(|f| format!("hypothesis not met: {f}")).collect())
    }
}

fn provenance(
    construction: &str,
    inputs: &[&AlgebraBundle],
    params: &[(&str, &str)],
    notes: Vec<String>,
) -> Provenance {
    Provenance {
        construction: construction.into(),
        inputs: inputs.iter().map(|b| b.id.clone()).collect(),
        parameters: params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect::<BTreeMap<_, _>>(),
        notes,
    }
}

/// Structure constants of the multilinear expression `expr` in `vars`, written in the identity DSL.
pub fn op_from_expr(bundle: &AlgebraBundle, vars: &[&str], expr: &str) -> Result<MultiOp> {
    let ast = parse_identity(&format!("forall {}: {expr} = 0", vars.join(", ")))?;
    let c = Compiled::new(&ast, bundle)?;
    let n = bundle.dim();
    let basis: Vec<Vector> = (0..n).map(|i| basis_vector(n, i)).collect();
    MultiOp::from_fn(n, vars.len(), |idx| c.eval(&idx.iter().map(|&i| basis[i].clone()).collect::<Vec<_>>()))
}

fn require_invertible(bundle: &AlgebraBundle, names: &[&str]) -> Result<()> {
    for n in names {
        let m = bundle.map(n)?;
        if !m.is_invertible() {
            return Err(Error::NotInvertible { map: n.to_string(), det: m.determinant().to_string() });
        }
    }
    Ok(())
}

fn commutes(pairs: &[(&str, &str)]) -> Vec<Predicate> {
    pairs.iter().map(|(a, b)| Predicate::Commute(a.to_string(), b.to_string())).collect()
}

/// Classical (untwisted) commutativity and associativity of `mul`.
fn classical_comm_assoc() -> Result<Vec<IdentityDef>> {
    Ok(vec![
        IdentityDef::new("classical-comm", "forall x, y: mul(x, y) - mul(y, x) = 0")?,
        IdentityDef::new("classical-assoc", "forall x, y, z: mul(x, mul(y, z)) - mul(mul(x, y), z) = 0")?,
    ])
}

/// Replaces each listed op by `op ∘ (m1^p1 ⊗ .. ⊗ mr^pr)`; the maps must commute pairwise and
/// be multiplicative for each twisted op.
pub fn yau_twist(bundle: &AlgebraBundle, specs: &[TwistSpec], strictness: Strictness) -> Result<AlgebraBundle> {
    let mut hyp = Hypotheses::new(strictness);
    let mut names: Vec<String> = specs.iter().flat_map(|s| s.slots.iter().map(|(m, _)| m.clone())).collect();
    names.sort();
    names.dedup();
    let mut def = StructureDef { name: "twist-hypotheses".into(), ..Default::default() };
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            def.predicates.push(Predicate::Commute(a.clone(), b.clone()));
        }
    }
    for s in specs {
        let op = bundle.op(&s.op)?;
        if op.arity() != s.slots.len() {
            return Err(Error::ArityMismatch { name: s.op.clone(), expected: op.arity(), found: s.slots.len() });
        }
        for m in &names {
            if s.slots.iter().any(|(n, _)| n == m) {
                def.predicates.push(Predicate::Multiplicative(m.clone(), s.op.clone()));
            }
        }
    }
    hyp.check_set(&def, bundle)?;
    let notes = hyp.finish()?;
    let mut out = bundle.clone();
    let mut desc = Vec::new();
    for s in specs {
        let maps = s.slots.iter().map(|(m, p)| bundle.map(m)?.power(*p, m)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&_> = maps.iter().collect();
        out.ops.insert(s.op.clone(), bundle.op(&s.op)?.twist(&refs)?);
        let slots: Vec<String> =
            s.slots.iter().map(|(m, p)| if *p == 1 { m.clone() } else { format!("{m}^{p}") }).collect();
        desc.push(format!("{}∘({})", s.op, slots.join("⊗")));
    }
    out.id = format!("twist({})", bundle.id);
    out.provenance = Some(provenance("yau-twist", &[bundle], &[("ops", &desc.join(", "))], notes));
    Ok(out)
}

fn derivation_hypotheses(bundle: &AlgebraBundle, d: &str, strictness: Strictness) -> Result<Vec<String>> {
    let mut hyp = Hypotheses::new(strictness);
    let mut def = StructureDef {
        name: "derivation-hypotheses".into(),
        predicates: vec![
            Predicate::Multiplicative("a".into(), "mul".into()),
            Predicate::Multiplicative("b".into(), "mul".into()),
        ],
        identities: classical_comm_assoc()?,
        ..Default::default()
    };
    def.predicates.extend(commutes(&[("a", "b"), ("a", d), ("b", d)]));
    hyp.check_set(&def, bundle)?;
    hyp.record(check_derivation(bundle, d, &["mul"], false, &Mode::Symbolic)?.verdicts);
    hyp.finish()
}

/// From a commutative associative `mul` with derivation `d` and commuting algebra maps `a`, `b`:
/// `mul' = mul ∘ (a ⊗ b)` and `br(x, y) = a(x)·d(b(y)) - b(y)·d(a(x))`.
pub fn derivation_tbp(bundle: &AlgebraBundle, d: &str, strictness: Strictness) -> Result<AlgebraBundle> {
    let notes = derivation_hypotheses(bundle, d, strictness)?;
    let br = op_from_expr(bundle, &["x", "y"], &format!("mul(a(x), {d}(b(y))) - mul(b(y), {d}(a(x)))"))?;
    let mul = op_from_expr(bundle, &["x", "y"], "mul(a(x), b(y))")?;
    let mut out = bundle.clone().with_op("mul", mul).with_op("br", br);
    out.id = format!("derivation-tbp({})", bundle.id);
    out.provenance = Some(provenance("derivation-tbp", &[bundle], &[("derivation", d)], notes));
    Ok(out)
}

/// Same hypotheses as [`derivation_tbp`]; `star(x, y) = a(x)·d(b(y))`, `mul' = mul ∘ (a ⊗ b)`.
pub fn pre_lie_from_derivation(bundle: &AlgebraBundle, d: &str, strictness: Strictness) -> Result<AlgebraBundle> {
    let notes = derivation_hypotheses(bundle, d, strictness)?;
    let star = op_from_expr(bundle, &["x", "y"], &format!("mul(a(x), {d}(b(y)))"))?;
    let mul = op_from_expr(bundle, &["x", "y"], "mul(a(x), b(y))")?;
    let mut out = bundle.clone().with_op("mul", mul).with_op("star", star);
    out.id = format!("pre-lie({})", bundle.id);
    out.provenance = Some(provenance("pre-lie-from-derivation", &[bundle], &[("derivation", d)], notes));
    Ok(out)
}

/// `br(x, y) = star(x, y) - star(a⁻¹b(y), ab⁻¹(x))` on a regular bundle passing `pre-lie-poisson`.
pub fn np_commutator(bundle: &AlgebraBundle, strictness: Strictness) -> Result<AlgebraBundle> {
    require_invertible(bundle, &["a", "b"])?;
    let mut hyp = Hypotheses::new(strictness);
    hyp.record(check_structure("pre-lie-poisson", bundle, &Mode::Symbolic)?.verdicts);
    let notes = hyp.finish()?;
    let br = op_from_expr(bundle, &["x", "y"], "star(x, y) - star(a^-1(b(y)), a(b^-1(x)))")?;
    let mut out = bundle.clone().with_op("br", br);
    out.id = format!("np-commutator({})", bundle.id);
    out.provenance = Some(provenance("np-commutator", &[bundle], &[], notes));
    Ok(out)
}

/// Kronecker product of structure constants: `(a ⊗ b, a' ⊗ b') ↦ opA(a, a') ⊗ opB(b, b')`.
fn tensor_op(oa: &MultiOp, ob: &MultiOp) -> Result<MultiOp> {
    if oa.arity() != ob.arity() {
        return Err(Error::ArityMismatch { name: "tensor".into(), expected: oa.arity(), found: ob.arity() });
    }
    let (na, nb) = (oa.dim(), ob.dim());
    MultiOp::from_fn(na * nb, oa.arity(), |idx| {
        let ia: Vec<usize> = idx.iter().map(|i| i / nb).collect();
        let ib: Vec<usize> = idx.iter().map(|i| i % nb).collect();
        let (va, vb) = (oa.basis_value(&ia), ob.basis_value(&ib));
        let mut out = zero_vector(na * nb);
        for (i, x) in va.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in vb.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out[i * nb + j] = x * y;
            }
        }
        Ok(out)
    })
}

fn add_ops(x: &MultiOp, y: &MultiOp) -> MultiOp {
    let mut out = x.clone();
    for (idx, v) in y.entries() {
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.add_constant(&idx, k, c);
            }
        }
    }
    out
}

/// Tensor product of two bundles over one ring. `BpTbp` combines `mul` and `br`,
/// `PreLiePoisson` combines `mul` and `star`; maps are Kronecker products.
pub fn tensor_bundle(a: &AlgebraBundle, b: &AlgebraBundle, kind: TensorKind) -> Result<AlgebraBundle> {
    if a.ring.params != b.ring.params {
        return Err(Error::RingMismatch(format!(
            "parameters [{}] vs [{}]; rename one side first",
            a.ring.params.join(","),
            b.ring.params.join(",")
        )));
    }
    let second = match kind {
        TensorKind::BpTbp => "br",
        TensorKind::PreLiePoisson => "star",
    };
    let mul = tensor_op(a.op("mul")?, b.op("mul")?)?;
    let other = add_ops(&tensor_op(a.op(second)?, b.op("mul")?)?, &tensor_op(a.op("mul")?, b.op(second)?)?);
    let mut notes = Vec::new();
    for (side, bundle) in [("left", a), ("right", b)] {
        for m in ["a", "b"] {
            if !bundle.map(m)?.is_invertible() {
                notes.push(format!("{side} factor map `{m}` is not invertible; structure preservation is not claimed"));
            }
        }
    }
    let mut ring = a.ring.clone();
    ring.constraints.extend(b.ring.constraints.iter().cloned());
    if !a.ring.branches.is_empty() && !b.ring.branches.is_empty() {
        notes.push("both factors are constrained; branches of the left factor only".into());
    }
    if ring.branches.is_empty() {
        ring.branches = b.ring.branches.clone();
    }
    let id = format!("{}⊗{}", a.id, b.id);
    let mut out = AlgebraBundle::new(&id, a.space.tensor(&b.space), ring)
        .with_op("mul", mul)
        .with_op(second, other)
        .with_map("a", a.map("a")?.tensor(b.map("a")?))
        .with_map("b", a.map("b")?.tensor(b.map("b")?));
    let kind_name = match kind {
        TensorKind::BpTbp => "bp-tbp",
        TensorKind::PreLiePoisson => "pre-lie-poisson",
    };
    out.provenance = Some(provenance("tensor", &[a, b], &[("kind", kind_name)], notes));
    Ok(out)
}

/// Renames the ring parameters, e.g. so that two copies of one entry can be tensored.
pub fn rename_params(bundle: &AlgebraBundle, names: &[&str]) -> Result<AlgebraBundle> {
    crate::io::rename_params(bundle, names)
}

/// Extends both bundles to the union of their parameters so they can be tensored.
pub fn join_params(a: &AlgebraBundle, b: &AlgebraBundle) -> Result<(AlgebraBundle, AlgebraBundle)> {
    crate::io::join_params(a, b)
}

const TERNARY_SHAPE: &str = "mul(F(x), br(b^-1(y), b^-1(z))) + mul(F(y), br(a^-1(z), a(b^-2(x)))) \
                             + mul(F(a^-1(b(z))), br(b^-1(x), a(b^-2(y))))";

fn ternary_op(bundle: &AlgebraBundle, f: Option<&str>) -> Result<MultiOp> {
    let expr = match f {
        Some(f) => TERNARY_SHAPE.replace("F(", &format!("{f}(")),
        None => TERNARY_SHAPE
            .replace("mul(F(x)", "mul(x")
            .replace("mul(F(y)", "mul(y")
            .replace("mul(F(a^-1(b(z)))", "mul(a^-1(b(z))"),
    };
    op_from_expr(bundle, &["x", "y", "z"], &expr)
}

/// Ternary bracket on a regular TBP bundle from a derivation `d` of `mul` and `br` commuting with `a` and `b`.
pub fn ternary_from_derivation(bundle: &AlgebraBundle, d: &str, strictness: Strictness) -> Result<AlgebraBundle> {
    require_invertible(bundle, &["a", "b"])?;
    let mut hyp = Hypotheses::new(strictness);
    hyp.record(check_structure("tbp", bundle, &Mode::Symbolic)?.verdicts);
    hyp.record(check_derivation(bundle, d, &["mul", "br"], true, &Mode::Symbolic)?.verdicts);
    let notes = hyp.finish()?;
    let mut out = bundle.clone().with_op("tbr", ternary_op(bundle, Some(d))?);
    out.id = format!("ternary-d({})", bundle.id);
    out.provenance = Some(provenance("ternary-from-derivation", &[bundle], &[("derivation", d)], notes));
    Ok(out)
}

/// Ternary bracket on a regular TBP bundle from an involution `f` reversing the bracket and commuting with `a`, `b`.
pub fn ternary_from_involution(bundle: &AlgebraBundle, f: &str, strictness: Strictness) -> Result<AlgebraBundle> {
    require_invertible(bundle, &["a", "b"])?;
    let mut hyp = Hypotheses::new(strictness);
    hyp.record(check_structure("tbp", bundle, &Mode::Symbolic)?.verdicts);
    hyp.record(check_involution(bundle, f, &Mode::Symbolic)?.verdicts);
    let notes = hyp.finish()?;
    let mut out = bundle.clone().with_op("tbr", ternary_op(bundle, Some(f))?);
    out.id = format!("ternary-f({})", bundle.id);
    out.provenance = Some(provenance("ternary-from-involution", &[bundle], &[("involution", f)], notes));
    Ok(out)
}

/// Ternary bracket built from the product alone; intended for regular strong BP bundles.
pub fn ternary_from_product(bundle: &AlgebraBundle, strictness: Strictness) -> Result<AlgebraBundle> {
    require_invertible(bundle, &["a", "b"])?;
    let mut hyp = Hypotheses::new(strictness);
    hyp.record(check_structure("strong-bp", bundle, &Mode::Symbolic)?.verdicts);
    let notes = hyp.finish()?;
    let mut out = bundle.clone().with_op("tbr", ternary_op(bundle, None)?);
    out.id = format!("ternary-m({})", bundle.id);
    out.provenance = Some(provenance("ternary-from-product", &[bundle], &[], notes));
    Ok(out)
}

/// Verdict of one predicate, for callers that want a single hypothesis.
pub fn predicate_verdict(pred: &Predicate, bundle: &AlgebraBundle) -> Result<Verdict> {
    crate::structures::check_def(&predicate_def(pred, bundle)?, bundle, &Mode::Symbolic)
}

/// `c·id` helper used when building involutions such as `f = -id`.
pub fn scalar_map(bundle: &AlgebraBundle, c: i64) -> crate::linear::LinMap {
    crate::linear::LinMap::scalar(bundle.dim(), Scalar::int(c))
}
