//! Multilinear identity DSL: syntax tree, parser, validator and evaluator.

mod ast;
mod eval;
mod exponents;
mod parse;

pub use ast::{Expr, IdentityAst, Node};
pub use eval::{
    check_identity, check_identity_sampled, check_identity_with, Compiled, Counterexample, Status, Verdict,
};
pub use exponents::{
    default_grid, exponent_law_text, instantiate_exponent_law, nary_compat_text, nary_skew_text, ExponentLaw,
    ExponentTuple,
};
pub use parse::parse_identity;
pub(crate) use parse::Parser;
