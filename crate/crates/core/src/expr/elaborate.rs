use crate::error::{Error, Result};
use crate::expr::ast::Expr;
use crate::rat::Rat;
use crate::series::{TruncatedRing, Vars, ZWSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Exp,
    Log,
    /// `treef(x) = x·e^{-x}`
    TreeF,
    /// `sokalF(x, y) = Σ_n x^n/n! · y^{n(n-1)/2}`
    SokalF,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Exp, Builtin::Log, Builtin::TreeF, Builtin::SokalF];

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Exp => "exp",
            Builtin::Log => "log",
            Builtin::TreeF => "treef",
            Builtin::SokalF => "sokalF",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::SokalF => 2,
            _ => 1,
        }
    }

    fn apply(self, args: &[ZWSeries]) -> Result<ZWSeries> {
        match self {
            Builtin::Exp => args[0].exp_series(),
            Builtin::Log => args[0].log_series(),
            Builtin::TreeF => {
                let x = &args[0];
                Ok(x * &x.scale(&-Rat::one()).exp_series()?)
            }
            Builtin::SokalF => sokal_f(&args[0], &args[1]),
        }
    }
}

/// Sums `x^n/n! · y^{n(n-1)/2}` until the terms vanish identically at the
/// truncation orders. Finite when `y(0,0) = 0` or `x(0,0) = 0`.
fn sokal_f(x: &ZWSeries, y: &ZWSeries) -> Result<ZWSeries> {
    x.vars().check_same(y.vars())?;
    let y_nil = y.constant_term().is_zero();
    let x_nil = x.constant_term().is_zero();
    if !x_nil && !y_nil {
        return Err(Error::domain(
            "sokalF(x, y) needs x or y to have zero constant term",
        ));
    }
    let mut sum = x.one_like();
    let mut x_pow = x.one_like(); // x^n / n!
    let mut y_step = y.one_like(); // y^{n-1}
    let mut y_pow = y.one_like(); // y^{n(n-1)/2}
    for n in 1u32.. {
        x_pow = x_pow.mul_ref(x).scale(&Rat::new(1, n));
        if n > 1 {
            y_step = y_step.mul_ref(y);
        }
        y_pow = y_pow.mul_ref(&y_step);
        if (y_nil && y_pow.is_zero()) || (x_nil && x_pow.is_zero()) {
            break;
        }
        sum = sum.add_ref(&x_pow.mul_ref(&y_pow));
    }
    Ok(sum)
}

/// Evaluates `ast` exactly as a series truncated at `(z_order, w_order)`.
///
/// A failing series operation is reported together with the printed
/// subexpression where it happened.
pub fn elaborate(ast: &Expr, vars: &Vars, z_order: u32, w_order: u32) -> Result<ZWSeries> {
    Elaborator { vars, z_order, w_order }.eval(ast)
}

struct Elaborator<'a> {
    vars: &'a Vars,
    z_order: u32,
    w_order: u32,
}

impl Elaborator<'_> {
    fn eval(&self, e: &Expr) -> Result<ZWSeries> {
        let (zo, wo) = (self.z_order, self.w_order);
        let at = |r: Result<ZWSeries>| {
            r.map_err(|source| Error::InExpression { expr: e.to_string(), source: Box::new(source) })
        };
        Ok(match e {
            Expr::Rational(r) => ZWSeries::constant(self.vars.clone(), zo, wo, r.clone()),
            Expr::Var(name) if name == "z" => ZWSeries::z(self.vars.clone(), zo, wo),
            Expr::Var(name) => {
                let i = self.vars.position(name).ok_or_else(|| Error::UnknownIdentifier {
                    name: name.clone(),
                    line: 0,
                    column: 0,
                })?;
                ZWSeries::w(self.vars.clone(), zo, wo, i)
            }
            Expr::Add(a, b) => &self.eval(a)? + &self.eval(b)?,
            Expr::Sub(a, b) => &self.eval(a)? - &self.eval(b)?,
            Expr::Neg(a) => -&self.eval(a)?,
            Expr::Mul(a, b) => &self.eval(a)? * &self.eval(b)?,
            Expr::Div(a, b) => {
                let num = self.eval(a)?;
                let den = self.eval(b)?;
                &num * &at(den.reciprocal())?
            }
            Expr::Pow(a, n) => self.eval(a)?.pow(*n),
            Expr::Call(name, args) => {
                let builtin = Builtin::from_name(name).ok_or_else(|| Error::UnknownIdentifier {
                    name: name.clone(),
                    line: 0,
                    column: 0,
                })?;
                if args.len() != builtin.arity() {
                    return Err(Error::Syntax {
                        line: 0,
                        column: 0,
                        message: format!("{name} takes {} argument(s)", builtin.arity()),
                    });
                }
                let vals = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>>>()?;
                at(builtin.apply(&vals))?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, series};
    use crate::series::MultiIndex;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn tree_function_expansion() {
        let s = series("z*exp(-z)", &Vars::w(), 4, 0).unwrap();
        let expected = [r(0, 1), r(1, 1), r(-1, 1), r(1, 2), r(-1, 6)];
        assert_eq!(s.at_w_zero(), expected);
        assert_eq!(series("treef(z)", &Vars::w(), 4, 0).unwrap(), s);
    }

    #[test]
    fn sokal_generating_function() {
        let vars = Vars::w();
        let s = series("sokalF(z,w)", &vars, 3, 3).unwrap();
        let expected = ZWSeries::from_terms(
            vars,
            3,
            3,
            [
                (0, MultiIndex::from([0]), r(1, 1)),
                (1, MultiIndex::from([0]), r(1, 1)),
                (2, MultiIndex::from([1]), r(1, 2)),
                (3, MultiIndex::from([3]), r(1, 6)),
            ],
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn sokal_with_unit_constant_in_x() {
        // x = -1-z has a nonzero constant; w bounds the sum instead.
        let s = series("sokalF(-1-z, w)", &Vars::w(), 2, 1).unwrap();
        // 1 + (-1-z) + (1+z)^2/2 w  truncated
        let expected = series("-z + (1 + 2*z + z^2)/2*w", &Vars::w(), 2, 1).unwrap();
        assert_eq!(s, expected);
        let err = series("sokalF(1+z, 1+w)", &Vars::w(), 2, 2).unwrap_err();
        assert_eq!(err.code(), "domain");
    }

    #[test]
    fn trivial_constant() {
        let s = series("1/1", &Vars::w(), 0, 0).unwrap();
        assert_eq!(s, ZWSeries::one(Vars::w(), 0, 0));
    }

    #[test]
    fn errors_name_the_subexpression() {
        let err = series("w + 1/(z - z)", &Vars::w(), 3, 3).unwrap_err();
        match &err {
            Error::InExpression { expr, source } => {
                assert_eq!(expr, "((1) / (z - z))");
                assert_eq!(source.code(), "domain");
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = series("log(2 + z)", &Vars::w(), 3, 3).unwrap_err();
        assert_eq!(err.code(), "domain");
        assert!(err.to_string().contains("log((2 + z))"), "{err}");
    }

    #[test]
    fn geometric_series_in_two_variables() {
        let vars = Vars::new(["u", "v"]);
        let s = series("1/(1 - u - v)", &vars, 0, 3).unwrap();
        assert_eq!(s.coeff(0, &MultiIndex::from([2, 1])).unwrap(), r(3, 1));
        assert!(parse("x", vars.names()).is_err());
    }
}
