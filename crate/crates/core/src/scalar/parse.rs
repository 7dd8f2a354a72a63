//! Recursive-descent parser for coefficient expressions.
//!
//! ```text
//! sum   := prod (("+"|"-") prod)*
//! prod  := unary (("*"|"/") unary)*
//! unary := "-" unary | pow
//! pow   := atom ["^" nat]
//! atom  := int | param | "(" sum ")"
//! ```

use num_bigint::BigInt;

use super::{Params, Poly, Rational, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Ident(s)));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::syntax(pos, format!("unexpected character `{c}`")));
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    params: &'a Params,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].1
    }

    fn pos(&self) -> usize {
        self.toks[self.idx].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].1.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Scalar> {
        let mut acc = self.prod()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.prod()?;
            } else if self.eat('-') {
                acc = &acc - &self.prod()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn prod(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if *self.peek() == Tok::Sym('/') {
                let pos = self.pos();
                self.bump();
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs).map_err(|_| Error::syntax(pos, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else {
            self.pow()
        }
    }

    fn pow(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.eat('^') {
            let pos = self.pos();
            match self.bump() {
                Tok::Int(n) => {
                    let e: u32 = n.try_into().map_err(|_| Error::syntax(pos, "exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::syntax(pos, "expected a natural-number exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Scalar> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Scalar::Rat(Rational::from_integer(n))),
            Tok::Ident(name) => match self.params.iter().position(|p| *p == name) {
                Some(i) => Ok(Scalar::from_poly(Poly::var(self.params, i))),
                None => Err(Error::UnknownParameter(name)),
            },
            Tok::Sym('(') => {
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(Error::syntax(self.pos(), "expected `)`"));
                }
                Ok(inner)
            }
            Tok::End => Err(Error::syntax(pos, "unexpected end of input")),
            Tok::Sym(c) => Err(Error::syntax(pos, format!("unexpected `{c}`"))),
        }
    }
}

/// Parses a coefficient over the given parameter list.
pub fn parse_scalar(text: &str, params: &Params) -> Result<Scalar> {
    let mut p = Parser { toks: tokenize(text)?, idx: 0, params };
    let s = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(Error::syntax(p.pos(), "trailing input"));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{params_from, ratio};

    fn ps() -> Params {
        params_from(&["k1", "k2", "k3", "k4"])
    }

    #[test]
    fn grammar_examples() {
        let s = parse_scalar("2*k1^2 - k2/3", &ps()).unwrap();
        assert_eq!(s.to_string(), "2*k1^2 - 1/3*k2");
        let n = parse_scalar("-(k1-k2)", &ps()).unwrap();
        assert_eq!(n.to_string(), "-k1 + k2");
        assert_eq!(parse_scalar("7/2", &ps()).unwrap(), Scalar::Rat(ratio(7, 2)));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let s = parse_scalar("-k1^2", &ps()).unwrap();
        assert_eq!(s.to_string(), "-k1^2");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_scalar("k5", &ps()), Err(Error::UnknownParameter(n)) if n == "k5"));
        assert!(matches!(parse_scalar("k1 +", &ps()), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_scalar("(k1", &ps()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_scalar("k1 $", &ps()), Err(Error::Syntax { pos: 3, .. })));
        assert!(parse_scalar("1/(k1-k1)", &ps()).is_err());
    }

    #[test]
    fn print_parse_fixed_point() {
        for text in ["k1/(k1 - 1)", "(k1^2 + 3*k2)/(k3*k4 - 2)", "-1/3*k2/k3^2", "k1*k2 - 5/7"] {
            let s = parse_scalar(text, &ps()).unwrap();
            let printed = s.to_string();
            let again = parse_scalar(&printed, &ps()).unwrap();
            assert_eq!(again.to_string(), printed, "{text}");
            assert_eq!(again, s);
        }
    }
}
