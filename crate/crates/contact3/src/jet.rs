//! Truncated multivariate Taylor arithmetic (degree-3 jets in three
//! variables).
//!
//! A [`Jet3`] stores the 20 Taylor coefficients of a scalar field at a chart
//! point, ordered by graded lexicographic multi-index.  Arithmetic and
//! function lifts are exact through total degree 3, which is enough to carry
//! second derivatives of the metric and contact form through the curvature
//! pipeline, including the inverse metric, without finite differencing.

use crate::error::{Error, Result};
use crate::expr::{eval, exact_int, literal_exponent, unparse, BinOp, Expr, Func};

/// Number of monomials of total degree at most 3 in three variables.
pub const N_COEFFS: usize = 20;

/// Truncation degree.
pub const DEGREE: usize = 3;

/// Multi-indices `(i, j, k)` in graded lexicographic order.  The coefficient
/// at position `n` multiplies `dx^i dy^j dz^k` in the Taylor polynomial.
pub const MULTI_INDEX: [[usize; 3]; N_COEFFS] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

/// Position of multi-index `(i, j, k)` in [`MULTI_INDEX`]; valid only for
/// `i + j + k <= 3`.
#[inline]
pub fn coeff_index(i: usize, j: usize, k: usize) -> usize {
    const TABLE: [[[i8; 4]; 4]; 4] = build_table();
    let idx = TABLE[i][j][k];
    debug_assert!(idx >= 0, "multi-index ({i},{j},{k}) exceeds degree 3");
    idx as usize
}

const fn build_table() -> [[[i8; 4]; 4]; 4] {
    let mut t = [[[-1i8; 4]; 4]; 4];
    let mut n = 0;
    while n < N_COEFFS {
        let m = MULTI_INDEX[n];
        t[m[0]][m[1]][m[2]] = n as i8;
        n += 1;
    }
    t
}

/// Degree-3 jet of a scalar field at a point.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Jet3 {
    /// Taylor coefficients in [`MULTI_INDEX`] order.
    pub c: [f64; N_COEFFS],
}

impl Jet3 {
    /// Jet of a constant field.
    #[inline]
    pub fn constant(v: f64) -> Jet3 {
        let mut c = [0.0; N_COEFFS];
        c[0] = v;
        Jet3 { c }
    }

    /// Jet of the coordinate function along `axis` evaluated at `value`.
    #[inline]
    pub fn variable(axis: usize, value: f64) -> Jet3 {
        let mut c = [0.0; N_COEFFS];
        c[0] = value;
        c[1 + axis] = 1.0;
        Jet3 { c }
    }

    /// Value of the field at the expansion point.
    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Gradient of the field at the expansion point.
    #[inline]
    pub fn gradient(&self) -> [f64; 3] {
        [self.c[1], self.c[2], self.c[3]]
    }

    /// Partial derivative `d^|alpha| f / dx^a dy^b dz^c` at the expansion
    /// point (the stored coefficient rescaled by the multinomial factor).
    pub fn partial(&self, alpha: [usize; 3]) -> Result<f64> {
        let order = alpha[0] + alpha[1] + alpha[2];
        if order > DEGREE {
            return Err(Error::OrderInsufficient {
                requested: order,
                available: DEGREE,
            });
        }
        let fact = |n: usize| -> f64 { (1..=n).product::<usize>().max(1) as f64 };
        Ok(self.c[coeff_index(alpha[0], alpha[1], alpha[2])]
            * fact(alpha[0])
            * fact(alpha[1])
            * fact(alpha[2]))
    }

    /// Jet of the partial derivative along `axis`, exact through degree 2.
    pub fn derivative(&self, axis: usize) -> Jet3 {
        let mut out = [0.0; N_COEFFS];
        for (n, m) in MULTI_INDEX.iter().enumerate() {
            if m[0] + m[1] + m[2] >= DEGREE {
                continue;
            }
            let mut up = *m;
            up[axis] += 1;
            out[n] = self.c[coeff_index(up[0], up[1], up[2])] * up[axis] as f64;
        }
        Jet3 { c: out }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Jet3) -> Jet3 {
        let mut out = [0.0; N_COEFFS];
        for (na, ma) in MULTI_INDEX.iter().enumerate() {
            let va = self.c[na];
            if va == 0.0 {
                continue;
            }
            let da = ma[0] + ma[1] + ma[2];
            for (nb, mb) in MULTI_INDEX.iter().enumerate() {
                if da + mb[0] + mb[1] + mb[2] > DEGREE {
                    continue;
                }
                let vb = other.c[nb];
                if vb == 0.0 {
                    continue;
                }
                out[coeff_index(ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])] += va * vb;
            }
        }
        Jet3 { c: out }
    }

    /// Univariate series composition `a0 + a1 s + a2 s^2 + a3 s^3` where `s`
    /// is this jet with its constant part removed.  The `series` entries are
    /// the Taylor coefficients `f^(n)(u0)/n!` of the outer function.
    pub fn compose(&self, series: [f64; 4]) -> Jet3 {
        let mut s = *self;
        s.c[0] = 0.0;
        let s2 = s.mul(&s);
        let s3 = s2.mul(&s);
        let mut out = Jet3::constant(series[0]);
        for n in 0..N_COEFFS {
            out.c[n] += series[1] * s.c[n] + series[2] * s2.c[n] + series[3] * s3.c[n];
        }
        out
    }

    /// Reciprocal, or `None` when the value vanishes.
    pub fn recip_checked(&self) -> Option<Jet3> {
        let u = self.value();
        if u == 0.0 {
            return None;
        }
        let iu = 1.0 / u;
        Some(self.compose([iu, -iu * iu, iu * iu * iu, -iu * iu * iu * iu]))
    }

    /// Reciprocal; errors when the value vanishes.
    pub fn recip(&self, ctx: &Expr) -> Result<Jet3> {
        self.recip_checked()
            .ok_or_else(|| domain(ctx, "division by zero"))
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, n: i32, ctx: &Expr) -> Result<Jet3> {
        if n < 0 {
            return self.powi(-n, ctx)?.recip(ctx);
        }
        let mut acc = Jet3::constant(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Real power; requires a strictly positive value.
    pub fn powf(&self, r: f64, ctx: &Expr) -> Result<Jet3> {
        let u = self.value();
        if u <= 0.0 {
            return Err(domain(ctx, "non-positive base with non-integer exponent"));
        }
        let a0 = u.powf(r);
        let a1 = r * u.powf(r - 1.0);
        let a2 = r * (r - 1.0) * u.powf(r - 2.0) / 2.0;
        let a3 = r * (r - 1.0) * (r - 2.0) * u.powf(r - 3.0) / 6.0;
        Ok(self.compose([a0, a1, a2, a3]))
    }
}

impl std::ops::Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        let mut c = self.c;
        for n in 0..N_COEFFS {
            c[n] += rhs.c[n];
        }
        Jet3 { c }
    }
}

impl std::ops::Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        let mut c = self.c;
        for n in 0..N_COEFFS {
            c[n] -= rhs.c[n];
        }
        Jet3 { c }
    }
}

impl std::ops::Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        let mut c = self.c;
        for v in &mut c {
            *v = -*v;
        }
        Jet3 { c }
    }
}

impl std::ops::Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        Jet3::mul(&self, &rhs)
    }
}

impl std::ops::Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: f64) -> Jet3 {
        let mut c = self.c;
        for v in &mut c {
            *v *= rhs;
        }
        Jet3 { c }
    }
}

fn domain(ctx: &Expr, message: &str) -> Error {
    Error::Domain {
        subexpr: unparse(ctx),
        message: message.into(),
    }
}

/// Evaluate an expression to its degree-3 jet at a chart point.
pub fn eval_jet(e: &Expr, p: [f64; 3]) -> Result<Jet3> {
    Ok(match e {
        Expr::Num(v) => Jet3::constant(*v),
        Expr::Var(v) => Jet3::variable(v.axis(), p[v.axis()]),
        Expr::Neg(inner) => -eval_jet(inner, p)?,
        Expr::Bin(op, a, b) => {
            let ja = eval_jet(a, p)?;
            match op {
                BinOp::Add => ja + eval_jet(b, p)?,
                BinOp::Sub => ja - eval_jet(b, p)?,
                BinOp::Mul => ja * eval_jet(b, p)?,
                BinOp::Div => {
                    let jb = eval_jet(b, p)?;
                    ja * jb.recip(e)?
                }
                BinOp::Pow => {
                    if let Some(v) = literal_exponent(b) {
                        if let Some(n) = exact_int(v) {
                            ja.powi(n, e)?
                        } else {
                            ja.powf(v, e)?
                        }
                    } else {
                        // general exponent: exp(b * log(a))
                        let jb = eval_jet(b, p)?;
                        let la = lift(Func::Log, &ja, e)?;
                        lift(Func::Exp, &(jb * la), e)?
                    }
                }
            }
        }
        Expr::Call(f, arg) => {
            let ja = eval_jet(arg, p)?;
            lift(*f, &ja, e)?
        }
    })
}

/// Lift a unary function to jets via its degree-3 Taylor series at the value.
fn lift(f: Func, u: &Jet3, ctx: &Expr) -> Result<Jet3> {
    let u0 = u.value();
    let series: [f64; 4] = match f {
        Func::Sin => {
            let (s, c) = u0.sin_cos();
            [s, c, -s / 2.0, -c / 6.0]
        }
        Func::Cos => {
            let (s, c) = u0.sin_cos();
            [c, -s, -c / 2.0, s / 6.0]
        }
        Func::Tan => {
            let c = u0.cos();
            if c == 0.0 {
                return Err(domain(ctx, "tangent pole"));
            }
            let t = u0.tan();
            let t2 = 1.0 + t * t;
            [t, t2, t * t2, t2 * (1.0 + 3.0 * t * t) / 3.0]
        }
        Func::Exp => {
            let e0 = u0.exp();
            [e0, e0, e0 / 2.0, e0 / 6.0]
        }
        Func::Log => {
            if u0 <= 0.0 {
                return Err(domain(ctx, "log of a non-positive value"));
            }
            let iu = 1.0 / u0;
            [u0.ln(), iu, -iu * iu / 2.0, iu * iu * iu / 3.0]
        }
        Func::Sqrt => {
            if u0 <= 0.0 {
                return Err(domain(
                    ctx,
                    "square root requires a positive value for derivatives",
                ));
            }
            let s = u0.sqrt();
            [
                s,
                0.5 / s,
                -1.0 / (8.0 * s * u0),
                1.0 / (16.0 * s * u0 * u0),
            ]
        }
        Func::Abs => {
            if u0 == 0.0 {
                return Err(domain(ctx, "abs is not differentiable at zero"));
            }
            let sign = u0.signum();
            return Ok(*u * sign);
        }
    };
    Ok(u.compose(series))
}

/// Evaluate only the value of an expression, sharing domain semantics with
/// [`eval_jet`]; thin wrapper over [`crate::expr::eval`].
pub fn eval_value(e: &Expr, p: [f64; 3]) -> Result<f64> {
    eval(e, p)
}
