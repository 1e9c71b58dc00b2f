//! A small arithmetic language for entering `G`, `F`, `H` and `γ` as text.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | atom ['^' uint]
//! atom     := rational | ident | '(' expr ')' | ident '(' expr {',' expr} ')'
//! rational := uint ['/' uint]
//! ```
//!
//! Identifiers are `z`, one of the declared w-variables, or a builtin
//! function: `exp`, `log`, `treef(x) = x·e^{-x}` and
//! `sokalF(x, y) = Σ_n x^n/n! · y^{n(n-1)/2}`.

mod ast;
mod elaborate;
mod parser;

pub use ast::Expr;
pub use elaborate::{elaborate, Builtin};
pub use parser::parse;

use crate::error::Result;
use crate::series::{Vars, ZWSeries};

/// Parses and elaborates in one step.
pub fn series(text: &str, vars: &Vars, z_order: u32, w_order: u32) -> Result<ZWSeries> {
    let ast = parse(text, vars.names())?;
    elaborate(&ast, vars, z_order, w_order)
}
