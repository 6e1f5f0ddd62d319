//! Scalar expression parsing, printing, and pointwise evaluation.
//!
//! The grammar covers closed-form metric and contact-form components on a
//! three-dimensional chart:
//!
//! * variables `x`, `y`, `z`
//! * binary operators `+  -  *  /  ^` and unary `-`
//! * functions `sin cos tan exp log sqrt abs`
//!
//! `^` binds tightest and associates to the right, then unary minus, then
//! `*` and `/`, then `+` and `-`.  Parse errors carry the byte offset of the
//! offending token in the source string.

use crate::error::{Error, Result};

/// Coordinate variable on the chart.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    /// Axis index of the variable: `x -> 0`, `y -> 1`, `z -> 2`.
    #[inline]
    pub fn axis(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    /// Source name of the variable.
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

/// Built-in unary function.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    /// Source name of the function.
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// Binary operator.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Literal number (always non-negative as parsed; negation is a node).
    Num(f64),
    /// Coordinate variable.
    Var(Var),
    /// Unary negation.
    Neg(Box<Expr>),
    /// Binary operation.
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// Function application.
    Call(Func, Box<Expr>),
}

// ---------------------------------------------------------------------------
// lexer

#[derive(Clone, Debug, PartialEq)]
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

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // exponent part: e / E followed by an optional sign and digits
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                toks.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character `{}`", src[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Pratt parser
//
// Binding powers: + - => (10, 11); * / => (20, 21); unary - => 25 (prefix);
// ^ => (30, 29) for right associativity.

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn offset(&self) -> usize {
        self.peek().map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn expr_bp(&mut self, min_bp: u8) -> Result<Expr> {
        let (tok, offset) = self.next().ok_or_else(|| Error::Syntax {
            offset: self.end,
            message: "unexpected end of input".into(),
        })?;
        let mut lhs = match tok {
            Tok::Num(v) => Expr::Num(v),
            Tok::Ident(name) => match name.as_str() {
                "x" => Expr::Var(Var::X),
                "y" => Expr::Var(Var::Y),
                "z" => Expr::Var(Var::Z),
                _ => {
                    if let Some(f) = Func::from_name(&name) {
                        self.call(f, &name, offset)?
                    } else {
                        return Err(Error::UnknownIdentifier { name, offset });
                    }
                }
            },
            Tok::Minus => {
                let operand = self.expr_bp(25)?;
                Expr::Neg(Box::new(operand))
            }
            Tok::LParen => {
                let inner = self.expr_bp(0)?;
                match self.next() {
                    Some((Tok::RParen, _)) => inner,
                    Some((_, o)) => {
                        return Err(Error::Syntax {
                            offset: o,
                            message: "expected `)`".into(),
                        })
                    }
                    None => {
                        return Err(Error::Syntax {
                            offset: self.end,
                            message: "unclosed `(`".into(),
                        })
                    }
                }
            }
            other => {
                return Err(Error::Syntax {
                    offset,
                    message: format!("unexpected token `{}`", tok_name(&other)),
                })
            }
        };

        loop {
            let (lbp, rbp, op) = match self.peek() {
                Some((Tok::Plus, _)) => (10, 11, BinOp::Add),
                Some((Tok::Minus, _)) => (10, 11, BinOp::Sub),
                Some((Tok::Star, _)) => (20, 21, BinOp::Mul),
                Some((Tok::Slash, _)) => (20, 21, BinOp::Div),
                Some((Tok::Caret, _)) => (30, 29, BinOp::Pow),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.next();
            let rhs = self.expr_bp(rbp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn call(&mut self, f: Func, name: &str, offset: usize) -> Result<Expr> {
        match self.next() {
            Some((Tok::LParen, _)) => {}
            _ => {
                return Err(Error::Syntax {
                    offset: self.offset().min(self.end),
                    message: format!("expected `(` after function `{name}`"),
                })
            }
        }
        if matches!(self.peek(), Some((Tok::RParen, _))) {
            let (_, o) = self.next().unwrap();
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                offset: o,
                expected: 1,
                found: 0,
            });
        }
        let arg = self.expr_bp(0)?;
        let mut found = 1;
        while matches!(self.peek(), Some((Tok::Comma, _))) {
            self.next();
            self.expr_bp(0)?;
            found += 1;
        }
        match self.next() {
            Some((Tok::RParen, _)) if found == 1 => Ok(Expr::Call(f, Box::new(arg))),
            Some((Tok::RParen, _)) => Err(Error::ArityMismatch {
                name: name.to_string(),
                offset,
                expected: 1,
                found,
            }),
            Some((_, o)) => Err(Error::Syntax {
                offset: o,
                message: "expected `)` to close the argument list".into(),
            }),
            None => Err(Error::Syntax {
                offset: self.end,
                message: "unclosed argument list".into(),
            }),
        }
    }
}

fn tok_name(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("{v}"),
        Tok::Ident(s) => s.clone(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Slash => "/".into(),
        Tok::Caret => "^".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Comma => ",".into(),
    }
}

/// Parse an expression source string into a tree.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr_bp(0)?;
    if let Some((t, o)) = p.peek() {
        return Err(Error::Syntax {
            offset: *o,
            message: format!("trailing input starting at `{}`", tok_name(t)),
        });
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// printing

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

fn write_expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Num(v) => {
            out.push_str(&format!("{v}"));
        }
        Expr::Var(v) => out.push_str(v.name()),
        Expr::Neg(inner) => {
            out.push('-');
            if prec(inner) < 3 {
                out.push('(');
                write_expr(inner, out);
                out.push(')');
            } else {
                write_expr(inner, out);
            }
        }
        Expr::Bin(op, a, b) => {
            let (p, sym, left_needs, right_needs): (u8, &str, bool, bool) = match op {
                BinOp::Add => (1, " + ", prec(a) < 1, prec(b) <= 1),
                BinOp::Sub => (1, " - ", prec(a) < 1, prec(b) <= 1),
                BinOp::Mul => (2, "*", prec(a) < 2, prec(b) <= 2),
                BinOp::Div => (2, "/", prec(a) < 2, prec(b) <= 2),
                BinOp::Pow => (4, "^", prec(a) <= 4, prec(b) < 4),
            };
            let _ = p;
            if left_needs {
                out.push('(');
                write_expr(a, out);
                out.push(')');
            } else {
                write_expr(a, out);
            }
            out.push_str(sym);
            if right_needs {
                out.push('(');
                write_expr(b, out);
                out.push(')');
            } else {
                write_expr(b, out);
            }
        }
        Expr::Call(f, arg) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(arg, out);
            out.push(')');
        }
    }
}

/// Render the tree back to source form with minimal parentheses.  The result
/// reparses to a structurally identical tree.
pub fn unparse(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(e, &mut s);
    s
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&unparse(self))
    }
}

// ---------------------------------------------------------------------------
// pointwise evaluation

/// If the exponent is a literal (possibly negated) constant, return it.
pub(crate) fn literal_exponent(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(v) => Some(*v),
        Expr::Neg(inner) => literal_exponent(inner).map(|v| -v),
        _ => None,
    }
}

fn domain_err(e: &Expr, message: &str) -> Error {
    Error::Domain {
        subexpr: unparse(e),
        message: message.into(),
    }
}

/// Evaluate the expression at a chart point.
pub fn eval(e: &Expr, p: [f64; 3]) -> Result<f64> {
    Ok(match e {
        Expr::Num(v) => *v,
        Expr::Var(v) => p[v.axis()],
        Expr::Neg(inner) => -eval(inner, p)?,
        Expr::Bin(op, a, b) => {
            let va = eval(a, p)?;
            match op {
                BinOp::Add => va + eval(b, p)?,
                BinOp::Sub => va - eval(b, p)?,
                BinOp::Mul => va * eval(b, p)?,
                BinOp::Div => {
                    let vb = eval(b, p)?;
                    if vb == 0.0 {
                        return Err(domain_err(e, "division by zero"));
                    }
                    va / vb
                }
                BinOp::Pow => {
                    let vb = eval(b, p)?;
                    if let Some(n) = exact_int(vb) {
                        powi(va, n).ok_or_else(|| domain_err(e, "zero base with negative exponent"))?
                    } else {
                        if va < 0.0 {
                            return Err(domain_err(
                                e,
                                "negative base with non-integer exponent",
                            ));
                        }
                        if va == 0.0 && vb < 0.0 {
                            return Err(domain_err(e, "zero base with negative exponent"));
                        }
                        va.powf(vb)
                    }
                }
            }
        }
        Expr::Call(f, arg) => {
            let u = eval(arg, p)?;
            match f {
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Tan => {
                    let c = u.cos();
                    if c == 0.0 {
                        return Err(domain_err(e, "tangent pole"));
                    }
                    u.tan()
                }
                Func::Exp => u.exp(),
                Func::Log => {
                    if u <= 0.0 {
                        return Err(domain_err(e, "log of a non-positive value"));
                    }
                    u.ln()
                }
                Func::Sqrt => {
                    if u < 0.0 {
                        return Err(domain_err(e, "square root of a negative value"));
                    }
                    u.sqrt()
                }
                Func::Abs => u.abs(),
            }
        }
    })
}

/// Integer value of `v` when it is exactly representable as a small integer.
pub(crate) fn exact_int(v: f64) -> Option<i32> {
    if v.fract() == 0.0 && v.abs() <= 64.0 {
        Some(v as i32)
    } else {
        None
    }
}

/// Integer power with the IEEE corner cases made explicit; `None` marks
/// `0^n` for negative `n`.
pub(crate) fn powi(base: f64, n: i32) -> Option<f64> {
    if base == 0.0 && n < 0 {
        return None;
    }
    Some(base.powi(n))
}

/// All variables appearing in the expression, as a fixed-order triple of
/// flags `[x, y, z]`.
pub fn variables(e: &Expr) -> [bool; 3] {
    fn walk(e: &Expr, used: &mut [bool; 3]) {
        match e {
            Expr::Num(_) => {}
            Expr::Var(v) => used[v.axis()] = true,
            Expr::Neg(a) => walk(a, used),
            Expr::Bin(_, a, b) => {
                walk(a, used);
                walk(b, used);
            }
            Expr::Call(_, a) => walk(a, used),
        }
    }
    let mut used = [false; 3];
    walk(e, &mut used);
    used
}
