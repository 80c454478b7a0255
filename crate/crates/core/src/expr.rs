//! Integrand expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := unary ('^' factor)?          right-associative
//! unary   := '-' unary | primary
//! primary := number | 'x' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds tighter than `^`, so `-x^2` is `(-x)^2`. Functions are
//! `exp`, `log`, `sin`, `cos`, `sqrt` and `abs`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Value of a subtree that does not mention `x`.
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            Expr::Var => None,
            Expr::Neg(e) => e.constant_value().map(|v| -v),
            Expr::Add(l, r) => Some(l.constant_value()? + r.constant_value()?),
            Expr::Sub(l, r) => Some(l.constant_value()? - r.constant_value()?),
            Expr::Mul(l, r) => Some(l.constant_value()? * r.constant_value()?),
            Expr::Div(l, r) => Some(l.constant_value()? / r.constant_value()?),
            Expr::Pow(_, _) | Expr::Call(_, _) => {
                if self.mentions_var() {
                    None
                } else {
                    self.eval(0.0).ok()
                }
            }
        }
    }

    pub fn mentions_var(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.mentions_var(),
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) | Expr::Div(l, r) | Expr::Pow(l, r) => {
                l.mentions_var() || r.mentions_var()
            }
        }
    }

    /// The exponent as a machine integer when it is a constant integer.
    pub(crate) fn integer_exponent(exponent: &Expr) -> Option<i32> {
        let v = exponent.constant_value()?;
        (v.fract() == 0.0 && v.abs() <= i32::MAX as f64).then_some(v as i32)
    }

    /// Plain binary64 evaluation at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Add(l, r) => l.eval(x)? + r.eval(x)?,
            Expr::Sub(l, r) => l.eval(x)? - r.eval(x)?,
            Expr::Mul(l, r) => l.eval(x)? * r.eval(x)?,
            Expr::Div(l, r) => {
                let den = r.eval(x)?;
                if den == 0.0 {
                    return Err(Error::Domain { op: "division", at: x });
                }
                l.eval(x)? / den
            }
            Expr::Pow(base, exponent) => {
                let b = base.eval(x)?;
                match Expr::integer_exponent(exponent) {
                    Some(k) => {
                        if b == 0.0 && k < 0 {
                            return Err(Error::Domain { op: "division", at: x });
                        }
                        b.powi(k)
                    }
                    None => {
                        if !(b > 0.0) {
                            return Err(Error::Domain { op: "pow", at: x });
                        }
                        b.powf(exponent.eval(x)?)
                    }
                }
            }
            Expr::Call(f, arg) => {
                let v = arg.eval(x)?;
                match f {
                    Func::Exp => v.exp(),
                    Func::Log => {
                        if !(v > 0.0) {
                            return Err(Error::Domain { op: "log", at: x });
                        }
                        v.ln()
                    }
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Sqrt => {
                        if v < 0.0 {
                            return Err(Error::Domain { op: "sqrt", at: x });
                        }
                        v.sqrt()
                    }
                    Func::Abs => v.abs(),
                }
            }
        })
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized rendering; parsing it yields the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var => f.write_str("x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(l, r) => write!(f, "({l} + {r})"),
            Expr::Sub(l, r) => write!(f, "({l} - {r})"),
            Expr::Mul(l, r) => write!(f, "({l} * {r})"),
            Expr::Div(l, r) => write!(f, "({l} / {r})"),
            Expr::Pow(l, r) => write!(f, "({l} ^ {r})"),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Result<(Token, usize)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((Token::End, start));
        };
        if c.is_ascii_digit() || c == b'.' {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                end += 1;
            }
            if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut exp_end = end + 1;
                if exp_end < bytes.len() && (bytes[exp_end] == b'+' || bytes[exp_end] == b'-') {
                    exp_end += 1;
                }
                let digits_start = exp_end;
                while exp_end < bytes.len() && bytes[exp_end].is_ascii_digit() {
                    exp_end += 1;
                }
                if exp_end > digits_start {
                    end = exp_end;
                }
            }
            let text = &self.src[start..end];
            let value: f64 = text.parse().map_err(|_| Error::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            })?;
            if !value.is_finite() {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("number `{text}` out of range"),
                });
            }
            self.pos = end;
            return Ok((Token::Num(value), start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            self.pos = end;
            return Ok((Token::Ident(self.src[start..end].to_owned()), start));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((Token::Sym(c as char), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(Error::Syntax {
            offset: start,
            message: format!("unexpected character `{ch}`"),
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Token,
    offset: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lexer = Lexer { src, pos: 0 };
        let (current, offset) = lexer.next_token()?;
        Ok(Self { lexer, current, offset })
    }

    fn bump(&mut self) -> Result<()> {
        let (tok, off) = self.lexer.next_token()?;
        self.current = tok;
        self.offset = off;
        Ok(())
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset,
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.current == Token::Sym(c) {
            self.bump()
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.current {
                Token::Sym('+') => {
                    self.bump()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Sym('-') => {
                    self.bump()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.current {
                Token::Sym('*') => {
                    self.bump()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Token::Sym('/') => {
                    self.bump()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if self.current == Token::Sym('^') {
            self.bump()?;
            let exponent = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.current == Token::Sym('-') {
            self.bump()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.current.clone() {
            Token::Num(v) => {
                self.bump()?;
                Ok(Expr::Num(v))
            }
            Token::Ident(name) => {
                let offset = self.offset;
                if name == "x" {
                    self.bump()?;
                    return Ok(Expr::Var);
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(Error::UnknownIdentifier { name, offset });
                };
                self.bump()?;
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Token::Sym('(') => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Token::End => self.error("unexpected end of input"),
            Token::Sym(c) => self.error(format!("unexpected `{c}`")),
        }
    }
}

/// Parses an integrand in the variable `x`.
pub fn parse(source: &str) -> Result<Expr> {
    let mut parser = Parser::new(source)?;
    let e = parser.expr()?;
    if parser.current != Token::End {
        return parser.error("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num(v: f64) -> Box<Expr> {
        Box::new(Expr::Num(v))
    }

    fn var() -> Box<Expr> {
        Box::new(Expr::Var)
    }

    #[test]
    fn parses_power() {
        assert_eq!(parse("x^2").unwrap(), Expr::Pow(var(), num(2.0)));
    }

    #[test]
    fn parses_product_of_calls() {
        assert_eq!(
            parse("exp(x)*sin(x)").unwrap(),
            Expr::Mul(
                Box::new(Expr::Call(Func::Exp, var())),
                Box::new(Expr::Call(Func::Sin, var()))
            )
        );
    }

    #[test]
    fn parses_rational_function() {
        assert_eq!(
            parse("1/(1+x^2)").unwrap(),
            Expr::Div(
                num(1.0),
                Box::new(Expr::Add(num(1.0), Box::new(Expr::Pow(var(), num(2.0)))))
            )
        );
    }

    #[test]
    fn power_is_right_associative_and_unary_binds_tighter() {
        assert_eq!(
            parse("x^2^3").unwrap(),
            Expr::Pow(var(), Box::new(Expr::Pow(num(2.0), num(3.0))))
        );
        assert_eq!(parse("-x^2").unwrap(), Expr::Pow(Box::new(Expr::Neg(var())), num(2.0)));
        assert_eq!(parse("x^-1").unwrap(), Expr::Pow(var(), Box::new(Expr::Neg(num(1.0)))));
    }

    #[test]
    fn numbers_with_exponents_and_whitespace() {
        assert_eq!(parse("  2.5e-3 ").unwrap(), Expr::Num(2.5e-3));
        assert_eq!(parse(".5").unwrap(), Expr::Num(0.5));
        assert_eq!(parse("1E2").unwrap(), Expr::Num(100.0));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(
            parse("1 + * x").unwrap_err(),
            Error::Syntax {
                offset: 4,
                message: "unexpected `*`".into()
            }
        );
        assert!(matches!(parse("sin(x"), Err(Error::Syntax { offset: 5, .. })));
        assert!(matches!(parse("x x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("2 $ 3"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("1e999"), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("1..2"), Err(Error::Syntax { offset: 0, .. })));
    }

    #[test]
    fn unknown_identifiers() {
        assert_eq!(
            parse("2*tan(x)").unwrap_err(),
            Error::UnknownIdentifier {
                name: "tan".into(),
                offset: 2
            }
        );
        assert!(matches!(
            parse("y + 1"),
            Err(Error::UnknownIdentifier { offset: 0, .. })
        ));
    }

    #[test]
    fn evaluation() {
        assert_eq!(parse("sin(x)").unwrap().eval(0.0).unwrap(), 0.0);
        assert_eq!(parse("exp(x)").unwrap().eval(1.0).unwrap(), std::f64::consts::E);
        assert!((parse("1/(1+x^2)").unwrap().eval(2.0).unwrap() - 0.2).abs() < 1e-16);
        assert_eq!(parse("(-2)^3").unwrap().eval(0.0).unwrap(), -8.0);
        assert_eq!(parse("x^0.5").unwrap().eval(4.0).unwrap(), 2.0);
    }

    #[test]
    fn evaluation_domain_errors() {
        let at = |src: &str, x: f64| parse(src).unwrap().eval(x).unwrap_err();
        assert_eq!(at("log(x)", 0.0), Error::Domain { op: "log", at: 0.0 });
        assert_eq!(at("sqrt(x)", -1.0), Error::Domain { op: "sqrt", at: -1.0 });
        assert_eq!(
            at("1/x", 0.0),
            Error::Domain {
                op: "division",
                at: 0.0
            }
        );
        assert_eq!(at("x^0.5", -1.0), Error::Domain { op: "pow", at: -1.0 });
        assert_eq!(
            at("x^-2", 0.0),
            Error::Domain {
                op: "division",
                at: 0.0
            }
        );
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..1000).prop_map(|k| Expr::Num(k as f64 / 8.0)),
            (0.0f64..1e6).prop_map(Expr::Num),
            Just(Expr::Var),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            let func = prop_oneof![
                Just(Func::Exp),
                Just(Func::Log),
                Just(Func::Sin),
                Just(Func::Cos),
                Just(Func::Sqrt),
                Just(Func::Abs),
            ];
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Add(Box::new(l), Box::new(r))),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Sub(Box::new(l), Box::new(r))),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Mul(Box::new(l), Box::new(r))),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Div(Box::new(l), Box::new(r))),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Pow(Box::new(l), Box::new(r))),
                (func, inner).prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(parse(&printed).unwrap(), e);
        }
    }
}
