//! Arithmetic expressions over `x, y` (Cartesian) or `t, r` (polar).
//!
//! Precedence from tightest: `^` (right associative), unary `-`, `* /`,
//! `+ -`. A zero denominator yields zero.

use std::f64::consts::PI;
use std::fmt;

/// Coordinate convention an expression is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coords {
    Cartesian,
    Polar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Theta,
    Rho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sinh,
    Sqrt,
    Abs,
    Max0,
}

/// Built-in test functions of `(theta, rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    /// `exp(-(cos(11 rho sin t) + sin(rho cos t))^2)`
    Phi1,
    /// Wendland-type bump `(1-w)_+^6 (35 w^2 + 18 w + 3)`, `w = |(x,y) - (0.2,0.2)|`.
    Phi2,
    /// `cos(3 pi rho) + sin(2 rho sin t - 0.4)`
    Wave,
    /// Rank-16 forcing used for the Poisson example.
    Forcing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Var(Var),
    Named(Named),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
}

/// A parse failure at a byte offset of the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at offset {}: {msg}", self.offset),
            ParseErrorKind::UnknownIdentifier(name) => {
                write!(f, "unknown identifier `{name}` at offset {}", self.offset)
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| ParseError {
                offset: start,
                kind: ParseErrorKind::Syntax(format!("malformed number `{text}`")),
            })?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' | ',' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    let ch = src[i..].chars().next().unwrap_or(c);
                    return Err(ParseError {
                        offset: i,
                        kind: ParseErrorKind::Syntax(format!("unexpected character `{ch}`")),
                    });
                }
            };
            out.push((tok, i));
            i += 1;
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    coords: Coords,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Syntax(msg.into()),
        })
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            self.error("expected `)`")
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.sum()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(&name, at),
            Tok::End => {
                self.pos = self.toks.len() - 1;
                self.error("unexpected end of input")
            }
            t => {
                self.pos -= 1;
                self.error(format!("unexpected {}", describe(&t)))
            }
        }
    }

    fn identifier(&mut self, name: &str, at: usize) -> Result<Expr, ParseError> {
        let func = match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sinh" => Some(Func::Sinh),
            "sqrt" => Some(Func::Sqrt),
            "abs" => Some(Func::Abs),
            "max0" => Some(Func::Max0),
            _ => None,
        };
        if let Some(func) = func {
            if *self.peek() != Tok::LParen {
                return self.error(format!("expected `(` after `{name}`"));
            }
            self.bump();
            let arg = self.sum()?;
            self.expect_rparen()?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        let var = match (name, self.coords) {
            ("x", Coords::Cartesian) => Some(Var::X),
            ("y", Coords::Cartesian) => Some(Var::Y),
            ("t", Coords::Polar) => Some(Var::Theta),
            ("r", Coords::Polar) => Some(Var::Rho),
            _ => None,
        };
        if let Some(v) = var {
            return Ok(Expr::Var(v));
        }
        let named = match name {
            "pi" => return Ok(Expr::Pi),
            "phi1" => Named::Phi1,
            "phi2" => Named::Phi2,
            "wave" => Named::Wave,
            "forcing" => Named::Forcing,
            _ => {
                return Err(ParseError {
                    offset: at,
                    kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
                })
            }
        };
        Ok(Expr::Named(named))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parse `src` with the variables of `coords`.
pub fn parse(src: &str, coords: Coords) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        coords,
    };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        let t = p.peek().clone();
        return p.error(format!("unexpected {}", describe(&t)));
    }
    Ok(e)
}

impl Named {
    pub fn eval(self, theta: f64, rho: f64) -> f64 {
        match self {
            Named::Phi1 => (-((11.0 * rho * theta.sin()).cos() + (rho * theta.cos()).sin()).powi(2)).exp(),
            Named::Phi2 => {
                let w = ((rho * theta.cos() - 0.2).powi(2) + (rho * theta.sin() - 0.2).powi(2)).sqrt();
                (1.0 - w).max(0.0).powi(6) * (35.0 * w * w + 18.0 * w + 3.0)
            }
            Named::Wave => (3.0 * PI * rho).cos() + (2.0 * rho * theta.sin() - 0.4).sin(),
            Named::Forcing => {
                (-40.0 * (rho * rho - 1.0).powi(4)).exp()
                    * (5.0 - 5.0 * rho.powi(11) * (11.0 * theta - 11.0 / 2f64.sqrt()).cos()).sinh()
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            Named::Phi1 => "phi1",
            Named::Phi2 => "phi2",
            Named::Wave => "wave",
            Named::Forcing => "forcing",
        }
    }
}

impl Expr {
    /// Value at the polar point `(theta, rho)`.
    pub fn eval(&self, theta: f64, rho: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Pi => PI,
            Expr::Var(Var::X) => rho * theta.cos(),
            Expr::Var(Var::Y) => rho * theta.sin(),
            Expr::Var(Var::Theta) => theta,
            Expr::Var(Var::Rho) => rho,
            Expr::Named(n) => n.eval(theta, rho),
            Expr::Neg(a) => -a.eval(theta, rho),
            Expr::Call(f, a) => {
                let v = a.eval(theta, rho);
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Sinh => v.sinh(),
                    Func::Sqrt => v.sqrt(),
                    Func::Abs => v.abs(),
                    Func::Max0 => v.max(0.0),
                }
            }
            Expr::Bin(op, a, b) => {
                let (u, v) = (a.eval(theta, rho), b.eval(theta, rho));
                match op {
                    BinOp::Add => u + v,
                    BinOp::Sub => u - v,
                    BinOp::Mul => u * v,
                    BinOp::Div => {
                        if v == 0.0 {
                            0.0
                        } else {
                            u / v
                        }
                    }
                    BinOp::Pow => pow(u, v),
                }
            }
        }
    }
}

fn pow(u: f64, v: f64) -> f64 {
    if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 {
        u.powi(v as i32)
    } else {
        u.powf(v)
    }
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sinh => "sinh",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Max0 => "max0",
        }
    }
}

/// Fully parenthesized; numbers use the shortest round-trip form.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Pi => write!(f, "pi"),
            Expr::Var(v) => write!(
                f,
                "{}",
                match v {
                    Var::X => "x",
                    Var::Y => "y",
                    Var::Theta => "t",
                    Var::Rho => "r",
                }
            ),
            Expr::Named(n) => write!(f, "{}", n.name()),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {s} {b})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cart(s: &str) -> Expr {
        parse(s, Coords::Cartesian).unwrap()
    }

    fn at_xy(e: &Expr, x: f64, y: f64) -> f64 {
        e.eval(y.atan2(x), x.hypot(y))
    }

    #[test]
    fn variables_and_precedence() {
        assert!((at_xy(&cart("x"), 0.3, 0.4) - 0.3).abs() < 1e-15);
        assert_eq!(at_xy(&cart("-2^2"), 0.0, 0.0), -4.0);
        assert_eq!(at_xy(&cart("2^3^2"), 0.0, 0.0), 512.0);
        assert_eq!(at_xy(&cart("1-2-3"), 0.0, 0.0), -4.0);
        assert_eq!(at_xy(&cart("8/4/2"), 0.0, 0.0), 1.0);
        assert_eq!(at_xy(&cart("2*3+4*5"), 0.0, 0.0), 26.0);
        assert_eq!(at_xy(&cart("2^-1"), 0.0, 0.0), 0.5);
        assert_eq!(at_xy(&cart("1/(x-x)"), 0.2, 0.1), 0.0);
        assert!((at_xy(&cart("x*y"), 0.5, 0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn polar_listing_expression() {
        let e = parse("cos(3*pi*r)+sin(2*r*sin(t)-.4)", Coords::Polar).unwrap();
        for &(t, r) in &[(0.3, 0.5), (-2.0, 0.9), (1.0, 0.0)] {
            let want = (3.0 * PI * r).cos() + (2.0 * r * f64::sin(t) - 0.4).sin();
            assert!((e.eval(t, r) - want).abs() < 1e-15);
            assert!((e.eval(t, r) - Named::Wave.eval(t, r)).abs() < 1e-15);
        }
    }

    #[test]
    fn error_offsets() {
        let e = parse("1/(x", Coords::Cartesian).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        let e = parse("x + foo(1)", Coords::Cartesian).unwrap_err();
        assert_eq!(e, ParseError { offset: 4, kind: ParseErrorKind::UnknownIdentifier("foo".into()) });
        let e = parse("r", Coords::Cartesian).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnknownIdentifier(_)));
        assert_eq!(parse("x $ 1", Coords::Cartesian).unwrap_err().offset, 2);
        assert_eq!(parse("(x))", Coords::Cartesian).unwrap_err().offset, 3);
        assert_eq!(parse("", Coords::Cartesian).unwrap_err().offset, 0);
        assert_eq!(parse("sin x", Coords::Cartesian).unwrap_err().offset, 4);
    }

    #[test]
    fn named_functions() {
        let e = parse("phi1 + 0*t", Coords::Polar).unwrap();
        assert!((e.eval(0.4, 0.7) - Named::Phi1.eval(0.4, 0.7)).abs() < 1e-15);
        assert!((Named::Phi2.eval(PI / 4.0, 2f64.sqrt() * 0.2) - 3.0).abs() < 1e-12);
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0f64..100.0).prop_map(Expr::Num),
            Just(Expr::Pi),
            Just(Expr::Var(Var::X)),
            Just(Expr::Var(Var::Y)),
            Just(Expr::Named(Named::Phi1)),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            let ops = prop_oneof![
                Just(BinOp::Add),
                Just(BinOp::Sub),
                Just(BinOp::Mul),
                Just(BinOp::Div),
                Just(BinOp::Pow)
            ];
            let funcs = prop_oneof![
                Just(Func::Sin),
                Just(Func::Cos),
                Just(Func::Exp),
                Just(Func::Sinh),
                Just(Func::Sqrt),
                Just(Func::Abs),
                Just(Func::Max0)
            ];
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (funcs, inner.clone()).prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
                (ops, inner.clone(), inner).prop_map(|(o, a, b)| Expr::Bin(o, Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse(&text, Coords::Cartesian).unwrap(), e);
        }
    }
}
