//! Exhaustive basis-tuple evaluation of identities on a bundle.

use rayon::prelude::*;

use super::ast::{cyclic_permutation, Expr, IdentityAst, Node};
use crate::error::{Error, Result};
use crate::linear::{axpy, basis_vector, is_zero_vector, zero_vector, LinMap, MultiOp, Vector};
use crate::scalar::{Rational, Scalar};
use crate::structures::AlgebraBundle;

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Inapplicable(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    /// Basis index assigned to each variable, in declaration order.
    pub tuple: Vec<usize>,
    pub point: Option<Vec<Rational>>,
    pub residual: Vector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub id: String,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn pass(id: &str) -> Self {
        Verdict { id: id.to_string(), status: Status::Pass, counterexample: None, notes: Vec::new() }
    }

    pub fn fail(id: &str, cx: Counterexample) -> Self {
        Verdict { id: id.to_string(), status: Status::Fail, counterexample: Some(cx), notes: Vec::new() }
    }

    pub fn inapplicable(id: &str, reason: impl Into<String>) -> Self {
        Verdict {
            id: id.to_string(),
            status: Status::Inapplicable(reason.into()),
            counterexample: None,
            notes: Vec::new(),
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

enum CNode {
    Var(usize),
    Map(usize, Box<CExpr>),
    Op(usize, Vec<CExpr>),
    Cyc(Vec<Vec<usize>>, Box<CExpr>),
}

struct CExpr(Vec<(Scalar, CNode)>);

/// An identity bound to the maps and ops of one bundle.
pub struct Compiled<'a> {
    nvars: usize,
    dim: usize,
    maps: Vec<LinMap>,
    ops: Vec<&'a MultiOp>,
    expr: CExpr,
}

struct Binder<'a, 'b> {
    bundle: &'a AlgebraBundle,
    vars: &'b [String],
    map_keys: Vec<(String, i32)>,
    maps: Vec<LinMap>,
    op_keys: Vec<String>,
    ops: Vec<&'a MultiOp>,
}

impl<'a> Binder<'a, '_> {
    fn expr(&mut self, e: &Expr) -> Result<CExpr> {
        e.terms.iter().map(|(c, n)| Ok((Scalar::int(*c), self.node(n)?))).collect::<Result<_>>().map(CExpr)
    }

    fn node(&mut self, n: &Node) -> Result<CNode> {
        Ok(match n {
            Node::Var(v) => CNode::Var(self.var(v)?),
            Node::Map { name, power, arg } => {
                let key = (name.clone(), *power);
                let idx = match self.map_keys.iter().position(|k| *k == key) {
                    Some(i) => i,
                    None => {
                        let base = self.bundle.maps.get(name).ok_or_else(|| Error::UnknownName(name.clone()))?;
                        self.maps.push(base.power(*power, name)?);
                        self.map_keys.push(key);
                        self.maps.len() - 1
                    }
                };
                CNode::Map(idx, Box::new(self.expr(arg)?))
            }
            Node::Op { name, args } => {
                let op = self.bundle.ops.get(name).ok_or_else(|| Error::UnknownName(name.clone()))?;
                if op.arity() != args.len() {
                    return Err(Error::ArityMismatch { name: name.clone(), expected: op.arity(), found: args.len() });
                }
                let idx = match self.op_keys.iter().position(|k| k == name) {
                    Some(i) => i,
                    None => {
                        self.op_keys.push(name.clone());
                        self.ops.push(op);
                        self.ops.len() - 1
                    }
                };
                CNode::Op(idx, args.iter().map(|a| self.expr(a)).collect::<Result<_>>()?)
            }
            Node::Cyc { vars, body } => {
                let idx: Vec<usize> = vars.iter().map(|v| self.var(v)).collect::<Result<_>>()?;
                let perms = (0..idx.len()).map(|s| cyclic_permutation(self.vars.len(), &idx, s)).collect();
                CNode::Cyc(perms, Box::new(self.expr(body)?))
            }
        })
    }

    fn var(&self, v: &str) -> Result<usize> {
        self.vars.iter().position(|x| x == v).ok_or_else(|| Error::UnknownName(v.to_string()))
    }
}

impl<'a> Compiled<'a> {
    /// Resolves names and precomputes map powers; negative powers need invertible maps.
    pub fn new(ast: &IdentityAst, bundle: &'a AlgebraBundle) -> Result<Self> {
        let mut b = Binder {
            bundle,
            vars: &ast.vars,
            map_keys: Vec::new(),
            maps: Vec::new(),
            op_keys: Vec::new(),
            ops: Vec::new(),
        };
        let expr = b.expr(&ast.expr)?;
        Ok(Compiled { nvars: ast.vars.len(), dim: bundle.dim(), maps: b.maps, ops: b.ops, expr })
    }

    fn eval_expr(&self, e: &CExpr, args: &[&[Scalar]]) -> Vector {
        let mut out = zero_vector(self.dim);
        for (c, n) in &e.0 {
            let v = self.eval_node(n, args);
            axpy(&mut out, c, &v);
        }
        out
    }

    fn eval_node(&self, n: &CNode, args: &[&[Scalar]]) -> Vector {
        match n {
            CNode::Var(i) => args[*i].to_vec(),
            CNode::Map(m, arg) => self.maps[*m].apply(&self.eval_expr(arg, args)),
            CNode::Op(o, children) => {
                let vals: Vec<Vector> = children.iter().map(|c| self.eval_expr(c, args)).collect();
                let refs: Vec<&[Scalar]> = vals.iter().map(Vec::as_slice).collect();
                self.ops[*o].apply_unchecked(&refs)
            }
            CNode::Cyc(perms, body) => {
                let mut out = zero_vector(self.dim);
                for perm in perms {
                    let permuted: Vec<&[Scalar]> = perm.iter().map(|&p| args[p]).collect();
                    let v = self.eval_expr(body, &permuted);
                    axpy(&mut out, &Scalar::one(), &v);
                }
                out
            }
        }
    }

    /// Value of the identity's left-hand side at arbitrary vectors.
    pub fn eval(&self, args: &[Vector]) -> Result<Vector> {
        if args.len() != self.nvars {
            return Err(Error::ArityMismatch { name: "identity".into(), expected: self.nvars, found: args.len() });
        }
        let refs: Vec<&[Scalar]> = args.iter().map(Vec::as_slice).collect();
        Ok(self.eval_expr(&self.expr, &refs))
    }

    fn decode(&self, mut flat: usize) -> Vec<usize> {
        let mut t = vec![0; self.nvars];
        for slot in t.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
        t
    }

    fn residual_at(&self, tuple: &[usize], basis: &[Vector]) -> Vector {
        let refs: Vec<&[Scalar]> = tuple.iter().map(|&i| basis[i].as_slice()).collect();
        self.eval_expr(&self.expr, &refs)
    }

    /// Lexicographically smallest basis tuple with nonzero residual.
    pub fn first_failure(&self, parallel: bool) -> Option<(Vec<usize>, Vector)> {
        let basis: Vec<Vector> = (0..self.dim).map(|i| basis_vector(self.dim, i)).collect();
        let total = self.dim.pow(self.nvars as u32);
        let probe = |flat: usize| {
            let t = self.decode(flat);
            let r = self.residual_at(&t, &basis);
            (!is_zero_vector(&r)).then_some((t, r))
        };
        if parallel {
            (0..total).into_par_iter().find_map_first(probe)
        } else {
            (0..total).find_map(probe)
        }
    }
}

/// Decides the identity on every basis tuple, symbolically over the bundle's ring.
pub fn check_identity(id: &str, ast: &IdentityAst, bundle: &AlgebraBundle) -> Result<Verdict> {
    check_identity_with(id, ast, bundle, true)
}

pub fn check_identity_with(id: &str, ast: &IdentityAst, bundle: &AlgebraBundle, parallel: bool) -> Result<Verdict> {
    let c = Compiled::new(ast, bundle)?;
    Ok(match c.first_failure(parallel) {
        None => Verdict::pass(id),
        Some((tuple, residual)) => Verdict::fail(id, Counterexample { tuple, point: None, residual }),
    })
}

/// Decides the identity at each parameter point in turn; reports the first failing (point, tuple).
pub fn check_identity_sampled(
    id: &str,
    ast: &IdentityAst,
    bundle: &AlgebraBundle,
    points: &[Vec<Rational>],
) -> Result<Verdict> {
    for p in points {
        bundle.ring.check_point(p)?;
    }
    for p in points {
        let specialized = bundle.eval_at(p)?;
        let v = check_identity(id, ast, &specialized)?;
        if let Some(mut cx) = v.counterexample {
            cx.point = Some(p.clone());
            return Ok(Verdict::fail(id, cx));
        }
    }
    Ok(Verdict::pass(id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::parse_identity;
    use crate::linear::BasisSpace;
    use crate::scalar::{parse_scalar, rat};
    use crate::structures::Ring;

    /// Entry 26 with the bracket completion given explicitly.
    fn entry26(zero_completion: bool) -> AlgebraBundle {
        let ring = Ring::free(&["k1", "k2"]);
        let s = |t: &str| parse_scalar(t, &ring.params).unwrap();
        let mut mul = MultiOp::zero(2, 2);
        mul.set(&[0, 0], vec![s("0"), s("1")]);
        let mut br = MultiOp::zero(2, 2);
        br.set(&[0, 0], vec![s("0"), s("k1 - k2")]);
        br.set(&[0, 1], vec![s("0"), s("1")]);
        if !zero_completion {
            br.set(&[1, 0], vec![s("0"), s("-1")]);
        }
        let a = LinMap::from_rows(vec![vec![s("1"), s("0")], vec![s("k2"), s("1")]]).unwrap();
        let b = LinMap::from_rows(vec![vec![s("1"), s("0")], vec![s("k1"), s("1")]]).unwrap();
        AlgebraBundle::new("entry26", BasisSpace::standard(2), ring)
            .with_op("mul", mul)
            .with_op("br", br)
            .with_map("a", a)
            .with_map("b", b)
    }

    #[test]
    fn skew_on_completed_and_zero_forced() {
        let skew = parse_identity("forall x,y: br(b(x),a(y)) + br(b(y),a(x)) = 0").unwrap();
        assert!(check_identity("skew", &skew, &entry26(false)).unwrap().is_pass());
        let v = check_identity("skew", &skew, &entry26(true)).unwrap();
        let cx = v.counterexample.unwrap();
        assert_eq!(cx.tuple, vec![0, 0]);
        let ps = entry26(true).ring.params;
        assert_eq!(cx.residual, vec![Scalar::zero(), parse_scalar("2*k1", &ps).unwrap()]);
    }

    #[test]
    fn leibniz_sampled_counterexample() {
        let leibniz =
            parse_identity("forall x,y,z: br(a(b(x)), mul(y,z)) - mul(br(b(x),y), b(z)) - mul(b(y), br(a(x),z)) = 0")
                .unwrap();
        let v = check_identity_sampled("leibniz", &leibniz, &entry26(false), &[vec![rat(3), rat(5)]]).unwrap();
        let cx = v.counterexample.unwrap();
        assert_eq!(cx.tuple, vec![0, 0, 0]);
        assert_eq!(cx.residual, vec![Scalar::zero(), Scalar::one()]);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let jac = parse_identity("forall x,y,z: cyc(x,y,z){ br(br(b(x),a(y)), a^2(z)) } = 0").unwrap();
        let b = entry26(true);
        let p = check_identity_with("j", &jac, &b, true).unwrap();
        let s = check_identity_with("j", &jac, &b, false).unwrap();
        assert_eq!(p.status, s.status);
        assert_eq!(p.counterexample.map(|c| c.tuple), s.counterexample.map(|c| c.tuple));
    }

    #[test]
    fn unknown_names_and_singular_maps() {
        let b = entry26(false);
        assert!(matches!(
            check_identity("u", &parse_identity("forall x,y: foo(x,y) = 0").unwrap(), &b),
            Err(Error::UnknownName(_))
        ));
        let mut singular = b.clone();
        singular.maps.insert("a".into(), LinMap::zero(2));
        assert!(matches!(
            check_identity("n", &parse_identity("forall x: a^-1(x) = 0").unwrap(), &singular),
            Err(Error::NotInvertible { .. })
        ));
    }
}
