//! Truncated polynomial algebras: ℚ[x1..xn] modulo all monomials of total degree >= d.

use crate::linear::{basis_vector, zero_vector, BasisSpace, LinMap, MultiOp};
use crate::scalar::Scalar;
use crate::structures::{AlgebraBundle, Provenance, Ring};

/// Monomial basis ordered by total degree, then lexicographically (`u` before `v`).
#[derive(Clone, Debug)]
pub struct Truncated {
    vars: Vec<String>,
    degree: u32,
    basis: Vec<Vec<u32>>,
}

impl Truncated {
    /// ℚ[vars] / (monomials of total degree >= degree).
    pub fn new(vars: &[&str], degree: u32) -> Self {
        let n = vars.len();
        let mut basis: Vec<Vec<u32>> = Vec::new();
        for total in 0..degree {
            let mut level = Vec::new();
            exponents_of_degree(n, total, &mut vec![0; n], 0, &mut level);
            level.sort_by(|a, b| b.cmp(a));
            basis.extend(level);
        }
        Truncated { vars: vars.iter().map(|s| s.to_string()).collect(), degree, basis }
    }

    /// ℚ[t]/(t^k).
    pub fn univariate(k: u32) -> Self {
        Truncated::new(&["t"], k)
    }

    /// ℚ[u,v] modulo total degree >= d.
    pub fn bivariate(d: u32) -> Self {
        Truncated::new(&["u", "v"], d)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.basis.iter().position(|e| e == exps)
    }

    /// Basis index of the monomial with this label (`1`, `t`, `u*v`, `t^3`).
    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == label)
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|e| self.label(e)).collect()
    }

    fn label(&self, e: &[u32]) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(e)
            .filter(|(_, &k)| k > 0)
            .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn vector_of(&self, exps: &[u32], c: Scalar) -> Vec<Scalar> {
        let mut v = zero_vector(self.dim());
        if let Some(i) = self.index_of(exps) {
            v[i] = c;
        }
        v
    }

    /// Commutative associative truncated product, with `a = b = id`.
    pub fn bundle(&self) -> AlgebraBundle {
        let n = self.dim();
        let space = BasisSpace::new(self.labels()).expect("monomial labels are distinct");
        let mul = MultiOp::from_fn(n, 2, |idx| {
            let e: Vec<u32> = self.basis[idx[0]].iter().zip(&self.basis[idx[1]]).map(|(a, b)| a + b).collect();
            Ok(self.vector_of(&e, Scalar::one()))
        })
        .expect("product table");
        let id = format!("Q[{}]/deg{}", self.vars.join(","), self.degree);
        let mut b = AlgebraBundle::new(&id, space, Ring::rational())
            .with_op("mul", mul)
            .with_map("a", LinMap::identity(n))
            .with_map("b", LinMap::identity(n));
        b.provenance = Some(Provenance { construction: "truncated-polynomial".into(), ..Default::default() });
        b
    }

    /// `coeff * d/d(var)` as a linear map; `coeff` is a monomial exponent vector.
    pub fn monomial_partial(&self, coeff: &[u32], var: usize) -> LinMap {
        let cols = self
            .basis
            .iter()
            .map(|e| {
                if e[var] == 0 {
                    return zero_vector(self.dim());
                }
                let mut out: Vec<u32> = e.iter().zip(coeff).map(|(a, b)| a + b).collect();
                out[var] -= 1;
                self.vector_of(&out, Scalar::int(e[var] as i64))
            })
            .collect();
        LinMap::from_columns(cols).expect("square")
    }

    /// Plain partial derivative. It descends to the quotient only when d = 1.
    pub fn partial(&self, var: usize) -> LinMap {
        self.monomial_partial(&vec![0; self.vars.len()], var)
    }

    /// Sum of `monomial * d/d(var)` terms.
    pub fn vector_field(&self, terms: &[(&[u32], usize)]) -> LinMap {
        terms.iter().fold(LinMap::zero(self.dim()), |acc, (c, v)| acc.add(&self.monomial_partial(c, *v)))
    }

    pub fn basis_vector(&self, label: &str) -> Option<Vec<Scalar>> {
        self.index_of_label(label).map(|i| basis_vector(self.dim(), i))
    }
}

fn exponents_of_degree(n: usize, left: u32, cur: &mut Vec<u32>, pos: usize, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == n {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        exponents_of_degree(n, left - k, cur, pos + 1, out);
    }
}
