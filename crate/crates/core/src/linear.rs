//! Spaces, linear maps and multilinear operations given by structure constants.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(dim: usize) -> Vector {
    vec![Scalar::zero(); dim]
}

pub fn basis_vector(dim: usize, i: usize) -> Vector {
    let mut v = zero_vector(dim);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_assign(acc: &mut [Scalar], v: &[Scalar]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a = &*a + b;
        }
    }
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a = &*a + &(c * b);
        }
    }
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn eval_vector(v: &[Scalar], point: &[Rational]) -> Result<Vector> {
    v.iter().map(|s| s.eval(point).map(Scalar::Rat)).collect()
}

/// Renders `k1*e2 - e1` style linear combinations over the given labels.
pub fn format_vector(v: &[Scalar], labels: &[String]) -> String {
    let mut parts = Vec::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let term = if c.is_one() {
            l.clone()
        } else if cs == "-1" {
            format!("-{l}")
        } else if cs.contains([' ', '/']) && c.as_rational().is_none() {
            format!("({cs})*{l}")
        } else {
            format!("{cs}*{l}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSpace {
    labels: Vec<String>,
}

impl BasisSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Schema("a space needs at least one basis vector".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Schema(format!("duplicate basis label `{l}`")));
            }
        }
        Ok(BasisSpace { labels })
    }

    /// Basis e1..en.
    pub fn standard(dim: usize) -> Self {
        BasisSpace { labels: (1..=dim).map(|i| format!("e{i}")).collect() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Row-major tensor basis: a_i ⊗ b_j with i outer.
    pub fn tensor(&self, other: &BasisSpace) -> BasisSpace {
        let mut labels = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.labels {
            for b in &other.labels {
                labels.push(format!("{a}⊗{b}"));
            }
        }
        BasisSpace { labels }
    }
}

/// Square matrix; column j holds the image of basis vector j.
#[derive(Clone, PartialEq, Eq)]
pub struct LinMap {
    rows: Vec<Vec<Scalar>>,
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        write!(f, "LinMap({rows:?})")
    }
}

impl LinMap {
    pub fn identity(dim: usize) -> Self {
        Self::diagonal((0..dim).map(|_| Scalar::one()).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LinMap { rows: vec![zero_vector(dim); dim] }
    }

    pub fn diagonal(d: Vec<Scalar>) -> Self {
        let n = d.len();
        let mut m = LinMap::zero(n);
        for (i, s) in d.into_iter().enumerate() {
            m.rows[i][i] = s;
        }
        m
    }

    pub fn scalar(dim: usize, c: Scalar) -> Self {
        Self::diagonal(vec![c; dim])
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Schema("matrix must be square and nonempty".into()));
        }
        Ok(LinMap { rows })
    }

    /// Builds the map from the images of the basis vectors.
    pub fn from_columns(cols: Vec<Vector>) -> Result<Self> {
        let n = cols.len();
        if n == 0 || cols.iter().any(|c| c.len() != n) {
            return Err(Error::Schema("matrix must be square and nonempty".into()));
        }
        let rows = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        Ok(LinMap { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == LinMap::identity(self.dim())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| is_zero_vector(r))
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        let n = self.dim();
        let mut out = zero_vector(n);
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, row) in out.iter_mut().zip(&self.rows) {
                let m = &row[j];
                if !m.is_zero() {
                    *o = &*o + &(m * c);
                }
            }
        }
        out
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &LinMap) -> LinMap {
        let n = self.dim();
        let mut rows = vec![zero_vector(n); n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (k, a) in self.rows[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, slot) in row.iter_mut().enumerate() {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        *slot = &*slot + &(a * b);
                    }
                }
            }
        }
        LinMap { rows }
    }

    pub fn sub(&self, other: &LinMap) -> LinMap {
        let rows =
            self.rows.iter().zip(&other.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        LinMap { rows }
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        let rows =
            self.rows.iter().zip(&other.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        LinMap { rows }
    }

    pub fn scale(&self, c: &Scalar) -> LinMap {
        LinMap { rows: self.rows.iter().map(|r| scale_vector(c, r)).collect() }
    }

    /// Row reduction over the fraction field. Returns (determinant, inverse if nonsingular).
    fn eliminate(&self) -> (Scalar, Option<LinMap>) {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut inv = LinMap::identity(n).rows;
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return (Scalar::zero(), None);
            };
            if p != col {
                a.swap(p, col);
                inv.swap(p, col);
                det = -det;
            }
            let piv = a[col][col].clone();
            det = &det * &piv;
            let pinv = piv.recip().expect("pivot is nonzero");
            a[col] = scale_vector(&pinv, &a[col]);
            inv[col] = scale_vector(&pinv, &inv[col]);
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = -&a[r][col];
                let (pa, pi) = (a[col].clone(), inv[col].clone());
                axpy(&mut a[r], &f, &pa);
                axpy(&mut inv[r], &f, &pi);
            }
        }
        (det, Some(LinMap { rows: inv }))
    }

    pub fn determinant(&self) -> Scalar {
        self.eliminate().0
    }

    /// Inverse over the fraction field; `name` only labels the error.
    pub fn inverse(&self, name: &str) -> Result<LinMap> {
        match self.eliminate() {
            (_, Some(inv)) => Ok(inv),
            (det, None) => Err(Error::NotInvertible { map: name.to_string(), det: det.to_string() }),
        }
    }

    pub fn is_invertible(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn power(&self, k: i32, name: &str) -> Result<LinMap> {
        let base = if k < 0 { self.inverse(name)? } else { self.clone() };
        let mut acc = LinMap::identity(self.dim());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        Ok(acc)
    }

    /// Kronecker product matching [`BasisSpace::tensor`].
    pub fn tensor(&self, other: &LinMap) -> LinMap {
        let (n, m) = (self.dim(), other.dim());
        let mut rows = vec![zero_vector(n * m); n * m];
        for i in 0..n {
            for j in 0..n {
                let a = &self.rows[i][j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        rows[i * m + k][j * m + l] = a * &other.rows[k][l];
                    }
                }
            }
        }
        LinMap { rows }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<LinMap> {
        Ok(LinMap { rows: self.rows.iter().map(|r| eval_vector(r, point)).collect::<Result<_>>()? })
    }

    pub fn map_scalars(&self, f: &impl Fn(&Scalar) -> Result<Scalar>) -> Result<LinMap> {
        let rows = self.rows.iter().map(|r| r.iter().map(f).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        Ok(LinMap { rows })
    }
}

/// Arity-r operation stored as structure constants, one slot per basis tuple in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiOp {
    dim: usize,
    arity: usize,
    consts: Vec<Option<Vector>>,
}

impl fmt::Debug for MultiOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiOp(dim={}, arity={}, nonzero={})", self.dim, self.arity, self.entries().count())
    }
}

impl MultiOp {
    pub fn zero(dim: usize, arity: usize) -> Self {
        MultiOp { dim, arity, consts: vec![None; dim.pow(arity as u32)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    fn unflat(&self, mut f: usize) -> Vec<usize> {
        let mut idx = vec![0; self.arity];
        for slot in idx.iter_mut().rev() {
            *slot = f % self.dim;
            f /= self.dim;
        }
        idx
    }

    pub fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.arity {
            return Err(Error::ArityMismatch { name: "op".into(), expected: self.arity, found: idx.len() });
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dim) {
            return Err(Error::IndexOutOfRange(format!("basis index {bad} in dimension {}", self.dim)));
        }
        Ok(())
    }

    /// Sets the value on a basis tuple; zero vectors are stored as absent.
    pub fn set(&mut self, idx: &[usize], value: Vector) {
        let f = self.flat(idx);
        self.consts[f] = if is_zero_vector(&value) { None } else { Some(value) };
    }

    /// Adds `c * e_k` to the value on a basis tuple.
    pub fn add_constant(&mut self, idx: &[usize], k: usize, c: &Scalar) {
        let f = self.flat(idx);
        let dim = self.dim;
        let slot = self.consts[f].get_or_insert_with(|| zero_vector(dim));
        slot[k] = &slot[k] + c;
        if is_zero_vector(slot) {
            self.consts[f] = None;
        }
    }

    pub fn get(&self, idx: &[usize]) -> Option<&Vector> {
        self.consts[self.flat(idx)].as_ref()
    }

    pub fn basis_value(&self, idx: &[usize]) -> Vector {
        self.get(idx).cloned().unwrap_or_else(|| zero_vector(self.dim))
    }

    /// Nonzero entries in row-major order of the basis tuple.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &Vector)> {
        self.consts.iter().enumerate().filter_map(|(f, v)| v.as_ref().map(|v| (self.unflat(f), v)))
    }

    pub fn is_zero(&self) -> bool {
        self.consts.iter().all(Option::is_none)
    }

    /// Multilinear extension of the structure constants.
    pub fn apply(&self, args: &[&[Scalar]]) -> Result<Vector> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { name: "op".into(), expected: self.arity, found: args.len() });
        }
        if let Some(a) = args.iter().find(|a| a.len() != self.dim) {
            return Err(Error::SpaceMismatch(format!("vector of length {} in dimension {}", a.len(), self.dim)));
        }
        Ok(self.apply_unchecked(args))
    }

    pub(crate) fn apply_unchecked(&self, args: &[&[Scalar]]) -> Vector {
        let support: Vec<Vec<usize>> =
            args.iter().map(|a| (0..self.dim).filter(|&i| !a[i].is_zero()).collect()).collect();
        let mut out = zero_vector(self.dim);
        if support.iter().any(Vec::is_empty) {
            return out;
        }
        let mut pos = vec![0usize; self.arity];
        loop {
            let idx: Vec<usize> = pos.iter().zip(&support).map(|(&p, s)| s[p]).collect();
            if let Some(v) = self.get(&idx) {
                let mut c = Scalar::one();
                for (a, &i) in args.iter().zip(&idx) {
                    c = &c * &a[i];
                }
                axpy(&mut out, &c, v);
            }
            let mut slot = self.arity;
            loop {
                if slot == 0 {
                    return out;
                }
                slot -= 1;
                pos[slot] += 1;
                if pos[slot] < support[slot].len() {
                    break;
                }
                pos[slot] = 0;
            }
        }
    }

    /// Structure constants of `(x1..xr) ↦ op(m1 x1, .., mr xr)`.
    pub fn twist(&self, maps: &[&LinMap]) -> Result<MultiOp> {
        if maps.len() != self.arity {
            return Err(Error::ArityMismatch { name: "twist".into(), expected: self.arity, found: maps.len() });
        }
        if let Some(m) = maps.iter().find(|m| m.dim() != self.dim) {
            return Err(Error::SpaceMismatch(format!("map of dimension {} on op of dimension {}", m.dim(), self.dim)));
        }
        let mut out = MultiOp::zero(self.dim, self.arity);
        for f in 0..out.consts.len() {
            let idx = out.unflat(f);
            let cols: Vec<Vector> = maps.iter().zip(&idx).map(|(m, &j)| m.column(j)).collect();
            let refs: Vec<&[Scalar]> = cols.iter().map(Vec::as_slice).collect();
            out.set(&idx, self.apply_unchecked(&refs));
        }
        Ok(out)
    }

    /// Builds an op by evaluating `f` on every basis tuple.
    pub fn from_fn(dim: usize, arity: usize, mut f: impl FnMut(&[usize]) -> Result<Vector>) -> Result<MultiOp> {
        let mut out = MultiOp::zero(dim, arity);
        for flat in 0..out.consts.len() {
            let idx = out.unflat(flat);
            let v = f(&idx)?;
            out.set(&idx, v);
        }
        Ok(out)
    }

    pub fn map_scalars(&self, f: &impl Fn(&Scalar) -> Result<Scalar>) -> Result<MultiOp> {
        let mut out = MultiOp::zero(self.dim, self.arity);
        for (idx, v) in self.entries() {
            out.set(&idx, v.iter().map(f).collect::<Result<_>>()?);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<MultiOp> {
        self.map_scalars(&|s| s.eval(point).map(Scalar::Rat))
    }
}

/// Solves `rows · x = rhs` by Gauss-Jordan elimination, setting free unknowns to zero.
///
/// Works over the fraction field, so symbolic pivots are taken to be generically nonzero.
/// `Inconsistent(r)` names the first original equation that reduces to `0 = c` with `c ≠ 0`.
pub fn solve_linear(rows: &[Vec<Scalar>], rhs: &[Scalar], unknowns: usize) -> Result<Vector> {
    let mut a: Vec<(usize, Vec<Scalar>, Scalar)> =
        rows.iter().zip(rhs).enumerate().map(|(i, (r, b))| (i, r.clone(), b.clone())).collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..unknowns {
        let Some(p) = (next..a.len()).find(|&r| !a[r].1[col].is_zero()) else { continue };
        a.swap(next, p);
        let pinv = a[next].1[col].recip()?;
        a[next].1 = scale_vector(&pinv, &a[next].1);
        a[next].2 = &a[next].2 * &pinv;
        let (prow, prhs) = (a[next].1.clone(), a[next].2.clone());
        for (r, row) in a.iter_mut().enumerate() {
            if r == next || row.1[col].is_zero() {
                continue;
            }
            let f = -&row.1[col];
            axpy(&mut row.1, &f, &prow);
            row.2 = &row.2 + &(&f * &prhs);
        }
        pivots.push((next, col));
        next += 1;
    }
    if let Some(bad) = a[next..].iter().filter(|r| !r.2.is_zero()).map(|r| r.0).min() {
        return Err(Error::Inconsistent(bad));
    }
    let mut x = zero_vector(unknowns);
    for (r, col) in pivots {
        x[col] = a[r].2.clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{params_from, parse_scalar};

    fn s(t: &str) -> Scalar {
        parse_scalar(t, &params_from(&["k1", "k2"])).unwrap()
    }

    fn m(rows: &[&[&str]]) -> LinMap {
        LinMap::from_rows(rows.iter().map(|r| r.iter().map(|t| s(t)).collect()).collect()).unwrap()
    }

    #[test]
    fn unipotent_inverse() {
        let a = m(&[&["1", "0"], &["k2", "1"]]);
        assert_eq!(a.power(-1, "a").unwrap(), m(&[&["1", "0"], &["-k2", "1"]]));
        assert!(a.power(0, "a").unwrap().is_identity());
        assert_eq!(a.power(2, "a").unwrap().compose(&a.power(-3, "a").unwrap()), a.power(-1, "a").unwrap());
    }

    #[test]
    fn singular_map() {
        let a = m(&[&["0", "0"], &["1", "0"]]);
        assert!(matches!(a.power(-1, "a"), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn symbolic_inverse() {
        let a = m(&[&["k1", "1"], &["0", "k2"]]);
        let inv = a.inverse("a").unwrap();
        assert!(a.compose(&inv).is_identity());
        assert_eq!(a.determinant(), s("k1*k2"));
    }

    #[test]
    fn kronecker_diagonal() {
        let a = LinMap::diagonal(vec![Scalar::int(2), Scalar::int(3)]);
        let b = LinMap::diagonal(vec![Scalar::int(5), Scalar::int(7)]);
        let t = a.tensor(&b);
        assert_eq!(t, LinMap::diagonal([10, 14, 15, 21].map(Scalar::int).to_vec()));
    }

    #[test]
    fn tensor_labels() {
        let sp = BasisSpace::standard(2).tensor(&BasisSpace::new(vec!["f1".into(), "f2".into()]).unwrap());
        assert_eq!(sp.labels(), ["e1⊗f1", "e1⊗f2", "e2⊗f1", "e2⊗f2"]);
    }

    #[test]
    fn apply_and_twist() {
        let mut op = MultiOp::zero(2, 2);
        op.set(&[0, 0], basis_vector(2, 1));
        let a = m(&[&["1", "0"], &["k2", "1"]]);
        let b = m(&[&["1", "0"], &["k1", "1"]]);
        let t = op.twist(&[&a, &b]).unwrap();
        assert_eq!(t.basis_value(&[0, 0]), basis_vector(2, 1));
        let x = vec![s("k1"), s("1")];
        let y = vec![s("2"), s("k2")];
        assert_eq!(op.apply(&[&x, &y]).unwrap(), vec![s("0"), s("2*k1")]);
        assert!(op.apply(&[&x]).is_err());
    }

    #[test]
    fn vector_format() {
        let v = vec![s("-1"), s("k1 - k2")];
        let labels = ["e1".to_string(), "e2".to_string()];
        assert_eq!(format_vector(&v, &labels), "-e1 + (k1 - k2)*e2");
        assert_eq!(format_vector(&[s("0"), s("2*k1")], &labels), "2*k1*e2");
    }
}
