//! A small expression language for declaring symbols in config files.
//!
//! Variables `x1..x9` (alias `x` for `x1`) are the coordinates of the
//! evaluation point, `r` is its Euclidean norm. Constants `pi` and `i` are
//! built in. Operators `+ - * / ^` plus functions `sin cos exp sqrt abs ln
//! re im conj pow min max` and the smooth truncation primitive
//! `cutoff(r0, r1)` (equal to 1 for `|xi| <= r0`, 0 for `|xi| >= r1`,
//! smooth in between). `min`/`max` compare real parts.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum Expr {
    Const(Complex64),
    Var(usize),
    Norm,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
    Ln,
    Re,
    Im,
    Conj,
    Pow,
    Min,
    Max,
    Cutoff,
}

impl Func {
    fn from_name(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "sin" => (Func::Sin, 1),
            "cos" => (Func::Cos, 1),
            "exp" => (Func::Exp, 1),
            "sqrt" => (Func::Sqrt, 1),
            "abs" => (Func::Abs, 1),
            "ln" => (Func::Ln, 1),
            "re" => (Func::Re, 1),
            "im" => (Func::Im, 1),
            "conj" => (Func::Conj, 1),
            "pow" => (Func::Pow, 2),
            "min" => (Func::Min, 2),
            "max" => (Func::Max, 2),
            "cutoff" => (Func::Cutoff, 2),
            _ => return None,
        })
    }
}

/// `C^infinity` step: 0 for `t <= 0`, 1 for `t >= 1`.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Smooth radial cutoff: 1 inside `r0`, 0 outside `r1`.
pub fn smooth_cutoff(r: f64, r0: f64, r1: f64) -> f64 {
    if r1 <= r0 {
        return if r <= r0 { 1.0 } else { 0.0 };
    }
    1.0 - smoothstep((r - r0) / (r1 - r0))
}

impl Expr {
    /// Parses `src`; `max_vars` bounds the coordinate variables accepted.
    pub fn parse(src: &str, max_vars: usize) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0, max_vars };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Expr(format!("unexpected trailing input at token {}", p.pos)));
        }
        Ok(e)
    }

    /// Evaluates at the point `xi`.
    pub fn eval(&self, xi: &[f64]) -> Result<Complex64> {
        let norm = || xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(k) => {
                if *k >= xi.len() {
                    return Err(Error::Expr(format!(
                        "variable x{} out of range for a {}-dimensional point",
                        k + 1,
                        xi.len()
                    )));
                }
                Complex64::new(xi[*k], 0.0)
            }
            Expr::Norm => Complex64::new(norm(), 0.0),
            Expr::Neg(e) => -e.eval(xi)?,
            Expr::Add(a, b) => a.eval(xi)? + b.eval(xi)?,
            Expr::Sub(a, b) => a.eval(xi)? - b.eval(xi)?,
            Expr::Mul(a, b) => a.eval(xi)? * b.eval(xi)?,
            Expr::Div(a, b) => a.eval(xi)? / b.eval(xi)?,
            Expr::Pow(a, b) => a.eval(xi)?.powc(b.eval(xi)?),
            Expr::Call(f, args) => {
                let vals: Vec<Complex64> = args
                    .iter()
                    .map(|a| a.eval(xi))
                    .collect::<Result<Vec<_>>>()?;
                match f {
                    Func::Sin => vals[0].sin(),
                    Func::Cos => vals[0].cos(),
                    Func::Exp => vals[0].exp(),
                    Func::Sqrt => vals[0].sqrt(),
                    Func::Abs => Complex64::new(vals[0].norm(), 0.0),
                    Func::Ln => vals[0].ln(),
                    Func::Re => Complex64::new(vals[0].re, 0.0),
                    Func::Im => Complex64::new(vals[0].im, 0.0),
                    Func::Conj => vals[0].conj(),
                    Func::Pow => vals[0].powc(vals[1]),
                    Func::Min => {
                        if vals[0].re <= vals[1].re {
                            vals[0]
                        } else {
                            vals[1]
                        }
                    }
                    Func::Max => {
                        if vals[0].re >= vals[1].re {
                            vals[0]
                        } else {
                            vals[1]
                        }
                    }
                    Func::Cutoff => {
                        Complex64::new(smooth_cutoff(norm(), vals[0].re, vals[1].re), 0.0)
                    }
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || chars[i] == '.'
                        || chars[i] == 'e'
                        || chars[i] == 'E'
                        || ((chars[i] == '+' || chars[i] == '-')
                            && i > start
                            && (chars[i - 1] == 'e' || chars[i - 1] == 'E')))
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v = text
                    .parse::<f64>()
                    .map_err(|_| Error::Expr(format!("bad number literal '{text}'")))?;
                out.push(Tok::Num(v));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Expr(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
    max_vars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.bump() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::Expr(format!("expected {t:?}, got {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let exp = self.unary()?; // right associative
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Const(Complex64::new(v, 0.0))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if matches!(self.peek(), Some(Tok::LParen)) {
                    let Some((f, arity)) = Func::from_name(&name) else {
                        return Err(Error::Expr(format!("unknown function '{name}'")));
                    };
                    self.bump();
                    let mut args = Vec::new();
                    if !matches!(self.peek(), Some(Tok::RParen)) {
                        loop {
                            args.push(self.expr()?);
                            if matches!(self.peek(), Some(Tok::Comma)) {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen)?;
                    if args.len() != arity {
                        return Err(Error::Expr(format!(
                            "function '{name}' takes {arity} argument(s), got {}",
                            args.len()
                        )));
                    }
                    return Ok(Expr::Call(f, args));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Const(Complex64::new(std::f64::consts::PI, 0.0))),
                    "i" => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
                    "r" => Ok(Expr::Norm),
                    "x" => Ok(Expr::Var(0)),
                    n if n.starts_with('x') => {
                        let k: usize = n[1..]
                            .parse()
                            .map_err(|_| Error::Expr(format!("unknown identifier '{n}'")))?;
                        if k == 0 || k > self.max_vars {
                            return Err(Error::Expr(format!(
                                "variable '{n}' outside 1..={}",
                                self.max_vars
                            )));
                        }
                        Ok(Expr::Var(k - 1))
                    }
                    other => Err(Error::Expr(format!("unknown identifier '{other}'"))),
                }
            }
            got => Err(Error::Expr(format!("unexpected token {got:?}"))),
        }
    }
}
