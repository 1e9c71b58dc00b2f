use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::expr::ast::Expr;
use crate::expr::elaborate::Builtin;
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, line, column });
            i += 1;
            column += 1;
            continue;
        }
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let take = |pred: fn(char) -> bool, i: &mut usize, column: &mut usize| {
            let s = *i;
            while *i < chars.len() && pred(chars[*i]) {
                *i += 1;
                *column += 1;
            }
            chars[s..*i].iter().collect::<String>()
        };
        let tok = if c.is_ascii_digit() {
            let digits = take(|c| c.is_ascii_digit(), &mut i, &mut column);
            if i < chars.len() && chars[i] == '.' {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: "floating-point literals are not supported; write a fraction".into(),
                });
            }
            Tok::Int(digits)
        } else if c.is_alphabetic() || c == '_' {
            Tok::Ident(take(|c| c.is_alphanumeric() || c == '_', &mut i, &mut column))
        } else {
            return Err(Error::Syntax {
                line,
                column,
                message: format!("unexpected character {c:?}"),
            });
        };
        out.push(Token { tok, line: start.0, column: start.1 });
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: &'a [String],
}

/// Parses `text` against the declared w-variable names (`z` is implicit).
pub fn parse(text: &str, w_vars: &[String]) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax { line: 1, column: 1, message: "empty expression".into() });
    }
    let mut p = Parser { toks: lex(text)?, pos: 0, vars: w_vars };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(p.error("unexpected token after expression")),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(digits) => {
                let n: u32 = digits
                    .parse()
                    .map_err(|_| self.error("exponent too large"))?;
                self.bump();
                Ok(Expr::Pow(Box::new(base), n))
            }
            _ => Err(self.error("exponent must be a non-negative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => {
                let numer: BigInt = n.parse().expect("lexer yields digits");
                // `a/b` is one literal unless the denominator is raised to a power,
                // so `2/3^2` keeps its usual meaning 2/(3^2).
                if let (Tok::Slash, Tok::Int(d)) = (self.peek(), self.peek_at(1)) {
                    if *self.peek_at(2) != Tok::Caret {
                        let denom: BigInt = d.parse().expect("lexer yields digits");
                        if denom == BigInt::from(0) {
                            return Err(Error::Syntax {
                                line: t.line,
                                column: t.column,
                                message: "zero denominator".into(),
                            });
                        }
                        self.bump();
                        self.bump();
                        return Ok(Expr::Rational(Rat::new(numer, denom)));
                    }
                }
                Ok(Expr::Rational(Rat::from_integer(numer)))
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    let Some(builtin) = Builtin::from_name(&name) else {
                        return Err(Error::UnknownIdentifier { name, line: t.line, column: t.column });
                    };
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen, "`)` after arguments")?;
                    if args.len() != builtin.arity() {
                        return Err(Error::Syntax {
                            line: t.line,
                            column: t.column,
                            message: format!(
                                "{name} takes {} argument(s), got {}",
                                builtin.arity(),
                                args.len()
                            ),
                        });
                    }
                    Ok(Expr::Call(name, args))
                } else if name == "z" || self.vars.contains(&name) {
                    Ok(Expr::Var(name))
                } else {
                    Err(Error::UnknownIdentifier { name, line: t.line, column: t.column })
                }
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::End => Err(Error::Syntax {
                line: t.line,
                column: t.column,
                message: "unexpected end of input".into(),
            }),
            other => Err(Error::Syntax {
                line: t.line,
                column: t.column,
                message: format!("unexpected {}", describe(&other)),
            }),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Caret => "`^`",
        Tok::RParen => "`)`",
        Tok::Comma => "`,`",
        Tok::LParen => "`(`",
        Tok::Int(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::End => "end of input",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Vec<String> {
        vec!["w".to_string()]
    }

    fn var(s: &str) -> Box<Expr> {
        Box::new(Expr::Var(s.into()))
    }

    #[test]
    fn tree_function() {
        let e = parse("z*exp(-z)", &w()).unwrap();
        assert_eq!(
            e,
            Expr::Mul(var("z"), Box::new(Expr::Call("exp".into(), vec![Expr::Neg(var("z"))])))
        );
    }

    #[test]
    fn division_node() {
        let e = parse("w/(1-z)", &w()).unwrap();
        let one = Box::new(Expr::Rational(Rat::one()));
        assert_eq!(e, Expr::Div(var("w"), Box::new(Expr::Sub(one, var("z")))));
    }

    #[test]
    fn negative_exponent_rejected() {
        let err = parse("z^(-1)", &w()).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, column: 3, .. }), "{err:?}");
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse("3/4", &w()).unwrap(), Expr::Rational(Rat::new(3, 4)));
        assert_eq!(
            parse("2/3^2", &w()).unwrap(),
            Expr::Div(
                Box::new(Expr::Rational(Rat::from(2))),
                Box::new(Expr::Pow(Box::new(Expr::Rational(Rat::from(3))), 2))
            )
        );
        assert!(parse("1/0", &w()).is_err());
        assert!(parse("0.5*z", &w()).is_err());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(
            parse("-z^2", &w()).unwrap(),
            Expr::Neg(Box::new(Expr::Pow(var("z"), 2)))
        );
    }

    #[test]
    fn unknown_names_report_position() {
        let err = parse("z +\n  q", &w()).unwrap_err();
        assert_eq!(err, Error::UnknownIdentifier { name: "q".into(), line: 2, column: 3 });
        let err = parse("foo(z)", &w()).unwrap_err();
        assert!(matches!(err, Error::UnknownIdentifier { .. }));
    }

    #[test]
    fn arity_and_structure_errors() {
        assert!(parse("exp(z, w)", &w()).is_err());
        assert!(parse("sokalF(z)", &w()).is_err());
        assert!(parse("(z + w", &w()).is_err());
        assert!(parse("z w", &w()).is_err());
        assert!(parse("   ", &w()).is_err());
        assert!(parse("z $ w", &w()).is_err());
    }
}
