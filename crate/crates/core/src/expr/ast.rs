use std::fmt;

use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Non-negative rational literal; negative values go through `Neg`.
    Rational(Rat),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(String, Vec<Expr>),
}

/// Fully parenthesized; `parse(e.to_string())` gives back `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(r) if r.is_integer() => write!(f, "{r}"),
            Expr::Rational(r) => write!(f, "({r})"),
            Expr::Var(name) => f.write_str(name),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            // `(3) / 2` keeps the parser from fusing `3 / 2` into a literal.
            Expr::Div(a, b) if matches!(**a, Expr::Rational(ref r) if r.is_integer()) => {
                write!(f, "(({a}) / {b})")
            }
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
            Expr::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
