//! Exact structure-constant workbench for BiHom-type algebras.

pub mod catalog;
pub mod construct;
pub mod error;
pub mod identity;
pub mod io;
pub mod linear;
pub mod scalar;
pub mod structures;

pub use error::{Error, Result};
