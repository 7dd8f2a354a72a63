//! Parser for the identity DSL.
//!
//! ```text
//! identity := "forall" ident ("," ident)* ":" expr "=" "0"
//! expr     := ["-"] term (("+"|"-") term)*
//! term     := [nat "*"] factor
//! factor   := "cyc" "(" ident ("," ident)* ")" "{" expr "}"
//!           | ident ["^" sint] "(" expr ("," expr)* ")"
//!           | ident
//!           | "(" expr ")"
//! ```
//!
//! A call with one argument is a map application; two or more arguments make an op.

use super::ast::{Expr, IdentityAst, Node};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
    End,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let n = s.parse().map_err(|_| Error::syntax(pos, "integer too large"))?;
            out.push((pos, Tok::Int(n)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Ident(s)));
        } else if "+-*^(),:={};/".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::syntax(pos, format!("unexpected character `{c}`")));
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Self> {
        Ok(Parser { toks: tokenize(text)?, idx: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.idx].1
    }

    pub(crate) fn pos(&self) -> usize {
        self.toks[self.idx].0
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].1.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::syntax(self.pos(), format!("expected `{c}`")))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            _ => Err(Error::syntax(pos, "expected an identifier")),
        }
    }

    /// A name such as `bihom-lie`, `3-bihom-lie` or `bp-3lie`: words and numbers joined by
    /// hyphens, where a number may run straight into a word.
    pub(crate) fn dashed_name(&mut self) -> Result<String> {
        let mut out = self.name_part()?;
        while *self.peek() == Tok::Sym('-') {
            self.bump();
            out.push('-');
            out.push_str(&self.name_part()?);
        }
        Ok(out)
    }

    fn name_part(&mut self) -> Result<String> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            Tok::Int(n) => {
                let mut s = n.to_string();
                if let Tok::Ident(w) = self.peek().clone() {
                    if self.pos() == pos + s.len() {
                        self.bump();
                        s.push_str(&w);
                    }
                }
                Ok(s)
            }
            _ => Err(Error::syntax(pos, "expected a name")),
        }
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(s) if s == kw => Ok(()),
            _ => Err(Error::syntax(pos, format!("expected `{kw}`"))),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        *self.peek() == Tok::End
    }

    pub(crate) fn ident_list(&mut self) -> Result<Vec<String>> {
        let mut v = vec![self.ident()?];
        while self.eat(',') {
            v.push(self.ident()?);
        }
        Ok(v)
    }

    pub(crate) fn identity(&mut self) -> Result<IdentityAst> {
        self.keyword("forall")?;
        let vars = self.ident_list()?;
        for v in &vars {
            if v == "forall" || v == "cyc" {
                return Err(Error::syntax(self.pos(), format!("`{v}` is reserved")));
            }
        }
        self.expect(':')?;
        let expr = self.expr()?;
        self.expect('=')?;
        let pos = self.pos();
        match self.bump() {
            Tok::Int(0) => {}
            _ => return Err(Error::syntax(pos, "identities must have `0` on the right-hand side")),
        }
        Ok(IdentityAst { vars, expr })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut sign = if self.eat('-') { -1 } else { 1 };
        let mut out = Expr::default();
        loop {
            out.extend(self.term()?.scaled(sign));
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(out);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        if let Tok::Int(n) = *self.peek() {
            self.bump();
            self.expect('*')?;
            return Ok(self.factor()?.scaled(n));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let pos = self.pos();
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let name = self.ident()?;
        if name == "forall" {
            return Err(Error::syntax(pos, "`forall` is reserved"));
        }
        if name == "cyc" {
            self.expect('(')?;
            let vars = self.ident_list()?;
            self.expect(')')?;
            self.expect('{')?;
            let body = self.expr()?;
            self.expect('}')?;
            return Ok(Expr::single(Node::Cyc { vars, body: Box::new(body) }));
        }
        let mut power = None;
        if self.eat('^') {
            let neg = self.eat('-');
            let ppos = self.pos();
            match self.bump() {
                Tok::Int(n) => {
                    let n = i32::try_from(n).map_err(|_| Error::syntax(ppos, "power too large"))?;
                    power = Some(if neg { -n } else { n });
                }
                _ => return Err(Error::syntax(ppos, "expected an integer power")),
            }
            if *self.peek() != Tok::Sym('(') {
                return Err(Error::syntax(self.pos(), "a power must be followed by an argument"));
            }
        }
        if self.eat('(') {
            let mut args = vec![self.expr()?];
            while self.eat(',') {
                args.push(self.expr()?);
            }
            self.expect(')')?;
            if args.len() == 1 {
                let arg = args.pop().unwrap();
                return Ok(Node::map(&name, power.unwrap_or(1), arg));
            }
            if power.is_some() {
                return Err(Error::syntax(pos, "only unary maps take a power"));
            }
            return Ok(Expr::single(Node::Op { name, args }));
        }
        Ok(Expr::single(Node::Var(name)))
    }
}

/// Parses and validates one identity.
pub fn parse_identity(text: &str) -> Result<IdentityAst> {
    let mut p = Parser::new(text)?;
    let ast = p.identity()?;
    if !p.at_end() {
        return Err(Error::syntax(p.pos(), "trailing input"));
    }
    ast.validate()?;
    Ok(ast)
}
