//! Surface definition language: arithmetic expressions in `u`, `v` and the
//! `key = value` surface file that bundles them into a chart.
//!
//! Precedence, tightest first: `^` (constant exponent), unary minus, `*` `/`,
//! `+` `-`. Binary operators associate to the left, so `-u^2` is `-(u^2)`
//! and `u/v/2` is `(u/v)/2`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::jets::{Jet3, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl UnaryOp {
    fn function(name: &str) -> Option<UnaryOp> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "tan" => UnaryOp::Tan,
            "exp" => UnaryOp::Exp,
            "log" | "ln" => UnaryOp::Log,
            "sqrt" => UnaryOp::Sqrt,
            "sinh" => UnaryOp::Sinh,
            "cosh" => UnaryOp::Cosh,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tan => "tan",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Sinh => "sinh",
            UnaryOp::Cosh => "cosh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Expression tree node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Base raised to a constant real exponent.
    Pow(Box<Expr>, f64),
}

impl Expr {
    pub fn eval_jet(&self, u: &Jet3, v: &Jet3) -> Result<Jet3> {
        Ok(match self {
            Expr::Const(c) => Jet3::constant(*c),
            Expr::Var(Var::U) => *u,
            Expr::Var(Var::V) => *v,
            Expr::Unary(op, a) => {
                let a = a.eval_jet(u, v)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                    UnaryOp::Tan => a.tan()?,
                    UnaryOp::Exp => a.exp(),
                    UnaryOp::Log => a.ln()?,
                    UnaryOp::Sqrt => a.sqrt()?,
                    UnaryOp::Sinh => a.sinh(),
                    UnaryOp::Cosh => a.cosh(),
                }
            }
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval_jet(u, v)?, b.eval_jet(u, v)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.try_div(&b)?,
                }
            }
            Expr::Pow(a, p) => a.eval_jet(u, v)?.powf(*p)?,
        })
    }

    /// Plain floating-point evaluation, independent of the jet machinery.
    pub fn eval(&self, u: f64, v: f64) -> Result<f64> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::U) => u,
            Expr::Var(Var::V) => v,
            Expr::Unary(op, a) => {
                let x = a.eval(u, v)?;
                let dom = |ok: bool, function| {
                    if ok {
                        Ok(())
                    } else {
                        Err(Error::DomainError { function, value: x })
                    }
                };
                match op {
                    UnaryOp::Neg => -x,
                    UnaryOp::Sin => libm::sin(x),
                    UnaryOp::Cos => libm::cos(x),
                    UnaryOp::Tan => libm::tan(x),
                    UnaryOp::Exp => libm::exp(x),
                    UnaryOp::Log => {
                        dom(x > 0.0, "log")?;
                        libm::log(x)
                    }
                    UnaryOp::Sqrt => {
                        dom(x >= 0.0, "sqrt")?;
                        libm::sqrt(x)
                    }
                    UnaryOp::Sinh => libm::sinh(x),
                    UnaryOp::Cosh => libm::cosh(x),
                }
            }
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval(u, v)?, b.eval(u, v)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(Error::DivisionByZeroValue);
                        }
                        x / y
                    }
                }
            }
            Expr::Pow(a, p) => {
                let x = a.eval(u, v)?;
                if *p == libm::trunc(*p) {
                    if x == 0.0 && *p < 0.0 {
                        return Err(Error::DivisionByZeroValue);
                    }
                    libm::pow(x, *p)
                } else {
                    if !(x > 0.0) {
                        return Err(Error::DomainError {
                            function: "pow",
                            value: x,
                        });
                    }
                    libm::pow(x, *p)
                }
            }
        })
    }

    pub fn has_vars(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(_) => true,
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.has_vars(),
            Expr::Binary(_, a, b) => a.has_vars() || b.has_vars(),
        }
    }

    /// Replaces `u` and `v` by the given expressions.
    pub fn substitute(&self, u: &Expr, v: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(Var::U) => u.clone(),
            Expr::Var(Var::V) => v.clone(),
            Expr::Unary(op, a) => Expr::Unary(*op, Box::new(a.substitute(u, v))),
            Expr::Binary(op, a, b) => Expr::Binary(
                *op,
                Box::new(a.substitute(u, v)),
                Box::new(b.substitute(u, v)),
            ),
            Expr::Pow(a, p) => Expr::Pow(Box::new(a.substitute(u, v)), *p),
        }
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }
}

fn fmt_const(c: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
        write!(f, "(-{})", -c)
    } else {
        write!(f, "{c}")
    }
}

/// Fully parenthesized form; re-parses to an identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => fmt_const(*c, f),
            Expr::Var(Var::U) => f.write_str("u"),
            Expr::Var(Var::V) => f.write_str("v"),
            Expr::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {sym} {b})")
            }
            Expr::Pow(a, p) => {
                write!(f, "({a}^")?;
                fmt_const(*p, f)?;
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer {
            src,
            toks: Vec::new(),
        };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let ch = bytes[i] as char;
            if ch.is_ascii_whitespace() {
                i += 1;
            } else if ch.is_ascii_digit() || ch == '.' {
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
                let text = &lx.src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::ParseError {
                    line,
                    column: col0 + start,
                    message: format!("malformed number `{text}`"),
                })?;
                lx.toks.push((Tok::Num(value), start));
            } else if ch.is_ascii_alphabetic() || ch == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                lx.toks
                    .push((Tok::Ident(lx.src[start..i].to_string()), start));
            } else {
                let tok = match ch {
                    '+' | '-' | '*' | '/' | '^' => Tok::Op(ch),
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => {
                        // report the full (possibly multi-byte) character
                        let c = src[i..].chars().next().unwrap_or(ch);
                        return Err(Error::ParseError {
                            line,
                            column: col0 + i,
                            message: format!("unexpected character `{c}`"),
                        });
                    }
                };
                lx.toks.push((tok, i));
                i += 1;
            }
        }
        lx.toks.push((Tok::End, src.len()));
        Ok(lx.toks)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.col0 + self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::ParseError {
            line: self.line,
            column: self.column(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Expr::Unary(UnaryOp::Neg, Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Op('^') {
            self.bump();
            let col = self.column();
            let negate = if *self.peek() == Tok::Op('-') {
                self.bump();
                true
            } else {
                false
            };
            let e = self.primary()?;
            if e.has_vars() {
                return Err(Error::ParseError {
                    line: self.line,
                    column: col,
                    message: "exponent must be a constant".into(),
                });
            }
            let mut p = e.eval(0.0, 0.0)?;
            if negate {
                p = -p;
            }
            if !p.is_finite() {
                return Err(Error::ParseError {
                    line: self.line,
                    column: col,
                    message: "exponent is not finite".into(),
                });
            }
            base = Expr::Pow(Box::new(base), p);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let col = self.column();
        match self.bump() {
            Tok::Num(x) => Ok(Expr::Const(x)),
            Tok::LParen => {
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "u" => Ok(Expr::Var(Var::U)),
                "v" => Ok(Expr::Var(Var::V)),
                "pi" => Ok(Expr::Const(core::f64::consts::PI)),
                "e" => Ok(Expr::Const(core::f64::consts::E)),
                _ => match UnaryOp::function(&name) {
                    Some(op) => {
                        if *self.peek() != Tok::LParen {
                            return self.error(format!("expected `(` after `{name}`"));
                        }
                        self.bump();
                        let arg = self.expr()?;
                        if *self.peek() != Tok::RParen {
                            return self.error("expected `)`");
                        }
                        self.bump();
                        Ok(Expr::Unary(op, Box::new(arg)))
                    }
                    None => Err(Error::UnknownIdentifier {
                        name,
                        line: self.line,
                        column: col,
                    }),
                },
            },
            Tok::End => Err(Error::ParseError {
                line: self.line,
                column: col,
                message: "unexpected end of expression".into(),
            }),
            t => Err(Error::ParseError {
                line: self.line,
                column: col,
                message: format!("unexpected token {t:?}"),
            }),
        }
    }
}

fn parse_expr_at(src: &str, line: usize, col0: usize) -> Result<Expr> {
    let toks = Lexer::tokenize(src, line, col0)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        col0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

/// Parses a single expression. Errors report line 1 and 1-based columns.
pub fn parse_expr(src: &str) -> Result<Expr> {
    parse_expr_at(src, 1, 1)
}

/// Parameter rectangle of a chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Domain {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Self {
        Domain {
            u_min: u.0,
            u_max: u.1,
            v_min: v.0,
            v_max: v.1,
        }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u_min && u <= self.u_max && v >= self.v_min && v <= self.v_max
    }
}

/// A parametrized surface `X: [u_min,u_max]×[v_min,v_max] → R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceChart {
    pub name: String,
    pub ambient_dim: usize,
    pub components: Vec<Expr>,
    pub domain: Domain,
}

impl SurfaceChart {
    /// Builds a chart from component source strings.
    pub fn from_strs(name: &str, components: &[&str], domain: Domain) -> Result<Self> {
        let components = components
            .iter()
            .map(|c| parse_expr(c))
            .collect::<Result<Vec<_>>>()?;
        SurfaceChart::new(name, components, domain)
    }

    pub fn new(name: &str, components: Vec<Expr>, domain: Domain) -> Result<Self> {
        let n = components.len();
        if !(3..=5).contains(&n) {
            return Err(Error::DimensionError {
                expected: "3, 4 or 5 components".into(),
                found: n,
            });
        }
        Ok(SurfaceChart {
            name: name.to_string(),
            ambient_dim: n,
            components,
            domain,
        })
    }

    /// Third-order jets of every component at `(u0, v0)`.
    ///
    /// Points outside the domain are evaluated anyway; callers that care use
    /// [`Domain::contains`].
    pub fn eval_chart(&self, u0: f64, v0: f64) -> Result<Vec<Jet3>> {
        let u = Jet3::variable(Var::U, u0);
        let v = Jet3::variable(Var::V, v0);
        self.components.iter().map(|c| c.eval_jet(&u, &v)).collect()
    }

    /// Position only, by plain evaluation.
    pub fn eval_point(&self, u: f64, v: f64) -> Result<crate::Vector> {
        let mut x = crate::Vector::zeros(self.ambient_dim);
        for (k, c) in self.components.iter().enumerate() {
            x[k] = c.eval(u, v)?;
        }
        Ok(x)
    }

    /// Chart precomposed with the parameter rotation `(u,v) ↦ R(angle)(u,v)`
    /// about `(cu, cv)`.
    pub fn precompose_rotation(&self, angle: f64, cu: f64, cv: f64) -> SurfaceChart {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        let du = Expr::binary(BinOp::Sub, Expr::Var(Var::U), Expr::Const(cu));
        let dv = Expr::binary(BinOp::Sub, Expr::Var(Var::V), Expr::Const(cv));
        let lin = |a: f64, b: f64, off: f64| {
            Expr::binary(
                BinOp::Add,
                Expr::Const(off),
                Expr::binary(
                    BinOp::Add,
                    Expr::binary(BinOp::Mul, Expr::Const(a), du.clone()),
                    Expr::binary(BinOp::Mul, Expr::Const(b), dv.clone()),
                ),
            )
        };
        let nu = lin(c, -s, cu);
        let nv = lin(s, c, cv);
        SurfaceChart {
            name: self.name.clone(),
            ambient_dim: self.ambient_dim,
            components: self
                .components
                .iter()
                .map(|e| e.substitute(&nu, &nv))
                .collect(),
            domain: self.domain,
        }
    }

    /// Chart followed by the linear map `x ↦ M x` (row-major `n×n`).
    pub fn transform_ambient(&self, m: &[f64]) -> SurfaceChart {
        let n = self.ambient_dim;
        assert_eq!(m.len(), n * n);
        let components = (0..n)
            .map(|i| {
                let mut acc = Expr::Const(0.0);
                for j in 0..n {
                    acc = Expr::binary(
                        BinOp::Add,
                        acc,
                        Expr::binary(BinOp::Mul, Expr::Const(m[i * n + j]), self.components[j].clone()),
                    );
                }
                acc
            })
            .collect();
        SurfaceChart {
            name: self.name.clone(),
            ambient_dim: n,
            components,
            domain: self.domain,
        }
    }
}

/// Parses a surface file (`key = value` lines, `#` comments).
///
/// ```text
/// name        = "example-r5"
/// ambient_dim = 5
/// component   = "u^2*v^2"
/// ...
/// u_range     = -1.5 1.5
/// v_range     = -1.5 1.5
/// ```
pub fn parse_surface(text: &str) -> Result<SurfaceChart> {
    let mut name: Option<String> = None;
    let mut dim: Option<(usize, usize)> = None;
    let mut comps: Vec<Expr> = Vec::new();
    let mut u_range: Option<(f64, f64)> = None;
    let mut v_range: Option<(f64, f64)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw);
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(Error::ParseError {
                line,
                column: leading_ws(content) + 1,
                message: "expected `key = value`".into(),
            });
        };
        let key = content[..eq].trim();
        let value_start = eq + 1 + leading_ws(&content[eq + 1..]);
        let value = content[value_start..].trim_end();
        let perr = |col: usize, message: String| Error::ParseError {
            line,
            column: col + 1,
            message,
        };
        let once = |set: bool| -> Result<()> {
            if set {
                Err(perr(leading_ws(content), format!("duplicate key `{key}`")))
            } else {
                Ok(())
            }
        };
        match key {
            "name" => {
                once(name.is_some())?;
                name = Some(unquote(value).map_err(|m| perr(value_start, m))?.0.to_string());
            }
            "ambient_dim" => {
                once(dim.is_some())?;
                let n: usize = value
                    .parse()
                    .map_err(|_| perr(value_start, format!("invalid ambient_dim `{value}`")))?;
                if !(3..=5).contains(&n) {
                    return Err(Error::DimensionError {
                        expected: "ambient_dim in {3, 4, 5}".into(),
                        found: n,
                    });
                }
                dim = Some((n, line));
            }
            "component" => {
                let (src, off) = unquote(value).map_err(|m| perr(value_start, m))?;
                comps.push(parse_expr_at(src, line, value_start + off + 1)?);
            }
            "u_range" | "v_range" => {
                let slot = if key == "u_range" {
                    &mut u_range
                } else {
                    &mut v_range
                };
                once(slot.is_some())?;
                *slot = Some(parse_range(value, line, value_start)?);
            }
            _ => {
                return Err(perr(
                    leading_ws(content),
                    format!("unknown key `{key}`"),
                ))
            }
        }
    }

    let end = text.lines().count().max(1);
    let missing = |what: &str| Error::ParseError {
        line: end,
        column: 1,
        message: format!("missing `{what}`"),
    };
    let (n, _) = dim.ok_or_else(|| missing("ambient_dim"))?;
    if comps.len() != n {
        return Err(Error::DimensionError {
            expected: format!("{n} components (ambient_dim)"),
            found: comps.len(),
        });
    }
    let u = u_range.ok_or_else(|| missing("u_range"))?;
    let v = v_range.ok_or_else(|| missing("v_range"))?;
    SurfaceChart::new(
        name.as_deref().unwrap_or("unnamed"),
        comps,
        Domain::new(u, v),
    )
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Returns the text between double quotes and its byte offset in `value`.
fn unquote(value: &str) -> core::result::Result<(&str, usize), String> {
    let v = value.trim_end();
    if v.len() >= 2 && v.starts_with('"') && v.ends_with('"') {
        Ok((&v[1..v.len() - 1], 1))
    } else {
        Err("expected a double-quoted string".into())
    }
}

fn parse_range(value: &str, line: usize, col: usize) -> Result<(f64, f64)> {
    let mut parts = Vec::new();
    let mut offset = 0;
    for tok in value.split_whitespace() {
        let at = value[offset..].find(tok).unwrap() + offset;
        offset = at + tok.len();
        let e = parse_expr_at(tok, line, col + at + 1)?;
        if e.has_vars() {
            return Err(Error::ParseError {
                line,
                column: col + at + 1,
                message: "range bounds must be constants".into(),
            });
        }
        parts.push(e.eval(0.0, 0.0)?);
    }
    match parts.as_slice() {
        [a, b] if a < b => Ok((*a, *b)),
        _ => Err(Error::ParseError {
            line,
            column: col + 1,
            message: "range needs two increasing bounds".into(),
        }),
    }
}
