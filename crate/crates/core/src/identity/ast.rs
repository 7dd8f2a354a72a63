use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Integer-weighted sum of term trees.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: Vec<(i64, Node)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Var(String),
    Map { name: String, power: i32, arg: Box<Expr> },
    Op { name: String, args: Vec<Expr> },
    Cyc { vars: Vec<String>, body: Box<Expr> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityAst {
    pub vars: Vec<String>,
    pub expr: Expr,
}

impl Expr {
    pub fn single(node: Node) -> Self {
        Expr { terms: vec![(1, node)] }
    }

    pub fn scaled(self, c: i64) -> Self {
        Expr { terms: self.terms.into_iter().map(|(k, n)| (k * c, n)).filter(|(k, _)| *k != 0).collect() }
    }

    pub fn extend(&mut self, other: Expr) {
        self.terms.extend(other.terms);
    }

    fn as_single(&self) -> Option<&Node> {
        match self.terms.as_slice() {
            [(1, n)] => Some(n),
            _ => None,
        }
    }

    /// Names of every map used, with the powers that occur.
    pub fn map_uses(&self, out: &mut BTreeSet<(String, i32)>) {
        for (_, n) in &self.terms {
            n.map_uses(out);
        }
    }

    /// Names and arities of every op used.
    pub fn op_uses(&self, out: &mut BTreeSet<(String, usize)>) {
        for (_, n) in &self.terms {
            n.op_uses(out);
        }
    }
}

impl Node {
    /// `name^power(arg)` with zero powers dropped and same-map chains merged.
    pub fn map(name: &str, power: i32, arg: Expr) -> Expr {
        if power == 0 {
            return arg;
        }
        if let Some(Node::Map { name: inner, power: p2, arg: inner_arg }) = arg.as_single() {
            if inner == name {
                return Node::map(name, power + p2, (**inner_arg).clone());
            }
        }
        Expr::single(Node::Map { name: name.to_string(), power, arg: Box::new(arg) })
    }

    fn map_uses(&self, out: &mut BTreeSet<(String, i32)>) {
        match self {
            Node::Var(_) => {}
            Node::Map { name, power, arg } => {
                out.insert((name.clone(), *power));
                arg.map_uses(out);
            }
            Node::Op { args, .. } => args.iter().for_each(|a| a.map_uses(out)),
            Node::Cyc { body, .. } => body.map_uses(out),
        }
    }

    fn op_uses(&self, out: &mut BTreeSet<(String, usize)>) {
        match self {
            Node::Var(_) => {}
            Node::Map { arg, .. } => arg.op_uses(out),
            Node::Op { name, args } => {
                out.insert((name.clone(), args.len()));
                args.iter().for_each(|a| a.op_uses(out));
            }
            Node::Cyc { body, .. } => body.op_uses(out),
        }
    }
}

/// Variable-occurrence counts of each monomial an expression expands to.
type Signature = Vec<u32>;

fn expr_signatures(e: &Expr, vars: &[String]) -> Result<BTreeSet<Signature>> {
    let mut out = BTreeSet::new();
    for (_, n) in &e.terms {
        out.extend(node_signatures(n, vars)?);
    }
    Ok(out)
}

fn node_signatures(n: &Node, vars: &[String]) -> Result<BTreeSet<Signature>> {
    match n {
        Node::Var(v) => {
            let i = vars.iter().position(|x| x == v).ok_or_else(|| Error::UnknownName(v.clone()))?;
            let mut s = vec![0; vars.len()];
            s[i] = 1;
            Ok(BTreeSet::from([s]))
        }
        Node::Map { arg, .. } => expr_signatures(arg, vars),
        Node::Op { args, .. } => {
            let mut acc: BTreeSet<Signature> = BTreeSet::from([vec![0; vars.len()]]);
            for a in args {
                let sigs = expr_signatures(a, vars)?;
                let mut next = BTreeSet::new();
                for x in &acc {
                    for y in &sigs {
                        next.insert(x.iter().zip(y).map(|(p, q)| p + q).collect());
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        Node::Cyc { vars: cv, body } => {
            let idx: Vec<usize> = cv
                .iter()
                .map(|v| vars.iter().position(|x| x == v).ok_or_else(|| Error::UnknownName(v.clone())))
                .collect::<Result<_>>()?;
            let base = expr_signatures(body, vars)?;
            let mut out = BTreeSet::new();
            for shift in 0..idx.len() {
                let perm = cyclic_permutation(vars.len(), &idx, shift);
                for s in &base {
                    // Variable i of the body is replaced by perm[i].
                    let mut t = vec![0; vars.len()];
                    for (i, &c) in s.iter().enumerate() {
                        t[perm[i]] += c;
                    }
                    out.insert(t);
                }
            }
            Ok(out)
        }
    }
}

/// Variable substitution for the `shift`-th cyclic rotation of the subset `idx`:
/// each listed variable moves `shift` places along the list, others stay put.
pub(crate) fn cyclic_permutation(nvars: usize, idx: &[usize], shift: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..nvars).collect();
    let k = idx.len();
    for (pos, &v) in idx.iter().enumerate() {
        perm[v] = idx[(pos + shift) % k];
    }
    perm
}

impl IdentityAst {
    /// Checks that every variable occurs exactly once in each expanded monomial.
    pub fn validate(&self) -> Result<()> {
        for (i, v) in self.vars.iter().enumerate() {
            if self.vars[..i].contains(v) {
                return Err(Error::syntax(0, format!("variable `{v}` declared twice")));
            }
        }
        for (term, (_, n)) in self.expr.terms.iter().enumerate() {
            if let Node::Cyc { vars: cv, .. } = n {
                if let Some(v) = cv.iter().enumerate().find(|(i, v)| cv[..*i].contains(v)).map(|(_, v)| v) {
                    return Err(Error::LinearityViolation { var: v.clone(), term });
                }
            }
            for sig in node_signatures(n, &self.vars)? {
                if let Some(i) = sig.iter().position(|&c| c != 1) {
                    return Err(Error::LinearityViolation { var: self.vars[i].clone(), term });
                }
            }
        }
        Ok(())
    }

    pub fn maps_used(&self) -> BTreeSet<(String, i32)> {
        let mut out = BTreeSet::new();
        self.expr.map_uses(&mut out);
        out
    }

    pub fn ops_used(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.expr.op_uses(&mut out);
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, n)) in self.terms.iter().enumerate() {
            let neg = *c < 0;
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.unsigned_abs();
            if a != 1 {
                write!(f, "{a}*")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Var(v) => f.write_str(v),
            Node::Map { name, power, arg } => {
                if *power == 1 {
                    write!(f, "{name}({arg})")
                } else {
                    write!(f, "{name}^{power}({arg})")
                }
            }
            Node::Op { name, args } => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Node::Cyc { vars, body } => write!(f, "cyc({}){{ {body} }}", vars.join(", ")),
        }
    }
}

impl fmt::Display for IdentityAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "forall {}: {} = 0", self.vars.join(", "), self.expr)
    }
}
