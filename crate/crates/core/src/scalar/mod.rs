//! Exact coefficients: rationals, polynomials in named parameters, and their quotients.

mod parse;
mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use parse::parse_scalar;
pub use poly::{params_from, Monomial, Params, Poly};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a parameter point as `{k1:3, k2:5}`.
pub fn format_point(params: &[String], point: &[Rational]) -> String {
    let body: Vec<String> = params.iter().zip(point).map(|(p, v)| format!("{p}:{}", RatDisplay(v))).collect();
    format!("{{{}}}", body.join(", "))
}

struct RatDisplay<'a>(&'a Rational);

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        poly::fmt_rational(self.0, f)
    }
}

/// A coefficient. Constants are always `Rat`; a `Frac` has a monic denominator and
/// no monomial factor shared between numerator and denominator.
#[derive(Clone)]
pub enum Scalar {
    Rat(Rational),
    Frac(Box<Frac>),
}

#[derive(Clone, Debug)]
pub struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(rat(n))
    }

    pub fn param(params: &Params, idx: usize) -> Self {
        Scalar::from_poly(Poly::var(params, idx))
    }

    pub fn from_poly(p: Poly) -> Self {
        match p.as_constant() {
            Some(c) => Scalar::Rat(c),
            None => {
                let den = Poly::one(p.params());
                Scalar::Frac(Box::new(Frac { num: p, den }))
            }
        }
    }

    /// Normalizing constructor for `num / den`.
    pub fn fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        if let Some(c) = den.as_constant() {
            return Ok(Scalar::from_poly(num.scale(&c.recip())));
        }
        let (num, den) = cancel_monomial_content(num, den);
        if let Some(q) = num.div_exact(&den) {
            return Ok(Scalar::from_poly(q));
        }
        if let Some(c) = den.as_constant() {
            return Ok(Scalar::from_poly(num.scale(&c.recip())));
        }
        let lc = den.leading_coefficient().recip();
        Ok(Scalar::Frac(Box::new(Frac { num: num.scale(&lc), den: den.scale(&lc) })))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Frac(f) => f.num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Frac(_) => None,
        }
    }

    pub fn params(&self) -> Option<&Params> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Frac(f) => Some(f.num.params()),
        }
    }

    /// Numerator and denominator as polynomials over `params`.
    pub fn parts(&self, params: &Params) -> (Poly, Poly) {
        match self {
            Scalar::Rat(r) => (Poly::constant(params, r.clone()), Poly::one(params)),
            Scalar::Frac(f) => (f.num.clone(), f.den.clone()),
        }
    }

    fn combine(&self, other: &Scalar, op: impl Fn(&Poly, &Poly, &Poly, &Poly) -> (Poly, Poly)) -> Scalar {
        let params = self.params().or(other.params()).expect("combine needs a fraction operand").clone();
        let (a, b) = self.parts(&params);
        let (c, d) = other.parts(&params);
        let (n, m) = op(&a, &b, &c, &d);
        Scalar::fraction(n, m).expect("nonzero denominators multiply to a nonzero denominator")
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a / b)),
            _ => Ok(self.combine(other, |a, b, c, d| (a.mul(d), b.mul(c)))),
        }
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(num_traits::pow(r.clone(), e as usize)),
            Scalar::Frac(f) => {
                Scalar::fraction(f.num.pow(e), f.den.pow(e)).expect("nonzero power of nonzero denominator")
            }
        }
    }

    /// Exact value at a point given in parameter order.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        match self {
            Scalar::Rat(r) => Ok(r.clone()),
            Scalar::Frac(f) => {
                let d = f.den.eval(point);
                if d.is_zero() {
                    return Err(Error::DenominatorVanishes(format_point(f.den.params(), point)));
                }
                Ok(f.num.eval(point) / d)
            }
        }
    }

    /// Replaces parameter `i` by `values[i]`.
    pub fn substitute(&self, values: &[Scalar]) -> Result<Scalar> {
        match self {
            Scalar::Rat(_) => Ok(self.clone()),
            Scalar::Frac(f) => {
                let n = substitute_poly(&f.num, values);
                let d = substitute_poly(&f.den, values);
                n.checked_div(&d).map_err(|_| Error::DenominatorVanishes(format!("substitution into ({})", f.den)))
            }
        }
    }

    /// Moves the scalar onto another parameter list.
    pub fn reindex(&self, target: &Params, index_map: &[usize]) -> Scalar {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Frac(f) => Scalar::fraction(f.num.reindex(target, index_map), f.den.reindex(target, index_map))
                .expect("reindexing keeps the denominator nonzero"),
        }
    }
}

fn substitute_poly(p: &Poly, values: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::Rat(c.clone());
        for (v, &e) in values.iter().zip(m.exponents()) {
            if e > 0 {
                t = &t * &v.pow(e);
            }
        }
        acc = &acc + &t;
    }
    acc
}

/// Divides out the largest monomial dividing every term of both polynomials.
fn cancel_monomial_content(num: Poly, den: Poly) -> (Poly, Poly) {
    let mut g: Option<Vec<u32>> = None;
    for (m, _) in num.terms().chain(den.terms()) {
        g = Some(match g {
            None => m.exponents().to_vec(),
            Some(g) => g.iter().zip(m.exponents()).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    match g {
        Some(g) if g.iter().any(|&e| e > 0) => {
            let mono = Poly::from_terms(num.params(), [(g, Rational::one())]);
            (num.div_exact(&mono).unwrap(), den.div_exact(&mono).unwrap())
        }
        _ => (num, den),
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            _ => {
                let params = self.params().or(other.params()).unwrap().clone();
                let (a, b) = self.parts(&params);
                let (c, d) = other.parts(&params);
                a.mul(&d) == c.mul(&b)
            }
        }
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => self.combine(
                rhs,
                |a, b, c, d| {
                    if b == d {
                        (a.add(c), b.clone())
                    } else {
                        (a.mul(d).add(&c.mul(b)), b.mul(d))
                    }
                },
            ),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Frac(f)) | (Scalar::Frac(f), Scalar::Rat(a)) => {
                Scalar::Frac(Box::new(Frac { num: f.num.scale(a), den: f.den.clone() }))
            }
            _ => self.combine(rhs, |a, b, c, d| (a.mul(c), b.mul(d))),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Frac(f) => Scalar::Frac(Box::new(Frac { num: f.num.neg(), den: f.den.clone() })),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| &a + &b)
    }
}

fn is_bare_power(p: &Poly) -> bool {
    if p.nterms() != 1 {
        return false;
    }
    let (m, c) = p.terms().next().unwrap();
    c.is_one() && m.exponents().iter().filter(|&&e| e > 0).count() == 1
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => poly::fmt_rational(r, f),
            Scalar::Frac(fr) if fr.den.is_one() => write!(f, "{}", fr.num),
            Scalar::Frac(fr) => {
                if fr.num.nterms() == 1 {
                    write!(f, "{}", fr.num)?;
                } else {
                    write!(f, "({})", fr.num)?;
                }
                if is_bare_power(&fr.den) {
                    write!(f, "/{}", fr.den)
                } else {
                    write!(f, "/({})", fr.den)
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}
