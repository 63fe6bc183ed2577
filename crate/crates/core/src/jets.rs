//! Third-order bivariate Taylor jets.
//!
//! A [`Jet3`] holds every partial derivative `∂^{i+j} f / ∂u^i ∂v^j` with
//! `i + j <= 3` of a scalar function at a fixed expansion point. The
//! coefficients are the raw partials, *not* Taylor coefficients: the Taylor
//! coefficient of `u^i v^j` is `coeff(i, j) / (i! j!)`.
//!
//! Arithmetic truncates exactly: products never alias terms of total order
//! above three into lower orders.

use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Division guard: only values this close to zero are rejected.
pub const EPS_DIV: f64 = 1e-300;

/// Number of stored coefficients (all multi-indices of total order <= 3).
pub const JET_LEN: usize = 10;

/// Position of multi-index `(i, j)` in the coefficient array.
///
/// Coefficients are ordered by total degree, then by increasing `j`:
/// `(0,0) (1,0) (0,1) (2,0) (1,1) (0,2) (3,0) (2,1) (1,2) (0,3)`.
#[inline]
pub const fn index(i: usize, j: usize) -> usize {
    let k = i + j;
    k * (k + 1) / 2 + j
}

/// Multi-index stored at position `p`.
pub const MULTI_INDEX: [(usize, usize); JET_LEN] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

const BINOM: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

/// Which parameter a coordinate jet tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    V,
}

/// Binary jet operations, see [`jet_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// Elementary functions lifted to jets, see [`jet_elem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElemFn {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    PowConst(f64),
}

#[derive(Clone, Copy, PartialEq, Default)]
pub struct Jet3 {
    c: [f64; JET_LEN],
}

impl core::fmt::Debug for Jet3 {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_tuple("Jet3").field(&self.c).finish()
    }
}

impl Jet3 {
    pub const ZERO: Jet3 = Jet3 { c: [0.0; JET_LEN] };

    pub fn constant(value: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = value;
        Jet3 { c }
    }

    /// Coordinate jet: value `value`, unit first derivative along `which`.
    pub fn variable(which: Var, value: f64) -> Self {
        let mut j = Jet3::constant(value);
        match which {
            Var::U => j.c[index(1, 0)] = 1.0,
            Var::V => j.c[index(0, 1)] = 1.0,
        }
        j
    }

    pub fn from_coeffs(c: [f64; JET_LEN]) -> Self {
        Jet3 { c }
    }

    pub fn coeffs(&self) -> &[f64; JET_LEN] {
        &self.c
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `∂^{i+j} f / ∂u^i ∂v^j`; zero for `i + j > 3`.
    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > 3 {
            0.0
        } else {
            self.c[index(i, j)]
        }
    }

    pub fn scale(&self, s: f64) -> Jet3 {
        let mut out = *self;
        out.c.iter_mut().for_each(|x| *x *= s);
        out
    }

    /// Partial derivative in `u`, as a jet.
    ///
    /// Only the coefficients through total order 2 are meaningful; the order-3
    /// slots of the result are set to zero.
    pub fn partial(&self, which: Var) -> Jet3 {
        let mut out = Jet3::ZERO;
        for (p, &(i, j)) in MULTI_INDEX.iter().enumerate().take(6) {
            out.c[p] = match which {
                Var::U => self.c[index(i + 1, j)],
                Var::V => self.c[index(i, j + 1)],
            };
        }
        out
    }

    /// Directional derivative `du ∂_u + dv ∂_v` of the first-order part,
    /// i.e. the value of the derivative at the expansion point.
    pub fn directional(&self, du: f64, dv: f64) -> f64 {
        du * self.c[index(1, 0)] + dv * self.c[index(0, 1)]
    }

    /// Evaluates the Taylor polynomial at offset `(du, dv)` from the expansion point.
    pub fn taylor_eval(&self, du: f64, dv: f64) -> f64 {
        const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];
        let mut s = 0.0;
        for (p, &(i, j)) in MULTI_INDEX.iter().enumerate() {
            s += self.c[p] * powi(du, i) * powi(dv, j) / (FACT[i] * FACT[j]);
        }
        s
    }

    pub fn try_div(&self, rhs: &Jet3) -> Result<Jet3> {
        Ok(*self * rhs.recip()?)
    }

    pub fn recip(&self) -> Result<Jet3> {
        let x = self.value();
        if x.abs() <= EPS_DIV {
            return Err(Error::DivisionByZeroValue);
        }
        let r = 1.0 / x;
        Ok(self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]))
    }

    /// `f ∘ self`, given `f` and its first three derivatives at `self.value()`.
    pub fn compose(&self, f: [f64; 4]) -> Jet3 {
        let mut delta = *self;
        delta.c[0] = 0.0;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let mut out = delta.scale(f[1]) + d2.scale(f[2] / 2.0) + d3.scale(f[3] / 6.0);
        out.c[0] = f[0];
        out
    }

    pub fn sin(&self) -> Jet3 {
        let (s, c) = (libm::sin(self.value()), libm::cos(self.value()));
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet3 {
        let (s, c) = (libm::sin(self.value()), libm::cos(self.value()));
        self.compose([c, -s, -c, s])
    }

    pub fn tan(&self) -> Result<Jet3> {
        let x = self.value();
        if libm::cos(x) == 0.0 {
            return Err(Error::DomainError {
                function: "tan",
                value: x,
            });
        }
        let t = libm::tan(x);
        let sec2 = 1.0 + t * t;
        Ok(self.compose([t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t)]))
    }

    pub fn exp(&self) -> Jet3 {
        let e = libm::exp(self.value());
        self.compose([e; 4])
    }

    pub fn sinh(&self) -> Jet3 {
        let (s, c) = (libm::sinh(self.value()), libm::cosh(self.value()));
        self.compose([s, c, s, c])
    }

    pub fn cosh(&self) -> Jet3 {
        let (s, c) = (libm::sinh(self.value()), libm::cosh(self.value()));
        self.compose([c, s, c, s])
    }

    pub fn ln(&self) -> Result<Jet3> {
        let x = self.value();
        if !(x > 0.0) {
            return Err(Error::DomainError {
                function: "log",
                value: x,
            });
        }
        let r = 1.0 / x;
        Ok(self.compose([libm::log(x), r, -r * r, 2.0 * r * r * r]))
    }

    pub fn sqrt(&self) -> Result<Jet3> {
        let x = self.value();
        if !(x > 0.0) {
            return Err(Error::DomainError {
                function: "sqrt",
                value: x,
            });
        }
        let s = libm::sqrt(x);
        let d1 = 0.5 / s;
        let d2 = -0.5 * d1 / x;
        let d3 = -1.5 * d2 / x;
        Ok(self.compose([s, d1, d2, d3]))
    }

    /// `self^p` for a constant exponent.
    ///
    /// Integral exponents use repeated multiplication and are valid at any
    /// nonzero value (and at zero for `p >= 0`); other exponents need a
    /// positive value.
    pub fn powf(&self, p: f64) -> Result<Jet3> {
        let x = self.value();
        if p == libm::trunc(p) && p.abs() <= 64.0 {
            let n = p.abs() as u32;
            let base = if p < 0.0 { self.recip()? } else { *self };
            return Ok(base.powi(n));
        }
        if !(x > 0.0) {
            return Err(Error::DomainError {
                function: "pow",
                value: x,
            });
        }
        let f0 = libm::pow(x, p);
        let d1 = p * f0 / x;
        let d2 = (p - 1.0) * d1 / x;
        let d3 = (p - 2.0) * d2 / x;
        Ok(self.compose([f0, d1, d2, d3]))
    }

    pub fn powi(&self, mut n: u32) -> Jet3 {
        let mut acc = Jet3::constant(1.0);
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            n >>= 1;
            if n > 0 {
                base = base * base;
            }
        }
        acc
    }
}

fn powi(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, _| acc * x)
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(mut self, rhs: Jet3) -> Jet3 {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(mut self, rhs: Jet3) -> Jet3 {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a -= b;
        }
        self
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    /// Leibniz rule, truncated at total order 3.
    fn mul(self, rhs: Jet3) -> Jet3 {
        let mut out = [0.0; JET_LEN];
        for (p, &(i, j)) in MULTI_INDEX.iter().enumerate() {
            let mut s = 0.0;
            for a in 0..=i {
                for b in 0..=j {
                    s += BINOM[i][a]
                        * BINOM[j][b]
                        * self.c[index(a, b)]
                        * rhs.c[index(i - a, j - b)];
                }
            }
            out[p] = s;
        }
        Jet3 { c: out }
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, s: f64) -> Jet3 {
        self.scale(s)
    }
}

/// Binary jet arithmetic. `Neg` ignores `b`.
pub fn jet_arith(op: JetOp, a: &Jet3, b: &Jet3) -> Result<Jet3> {
    Ok(match op {
        JetOp::Add => *a + *b,
        JetOp::Sub => *a - *b,
        JetOp::Mul => *a * *b,
        JetOp::Div => a.try_div(b)?,
        JetOp::Neg => -*a,
    })
}

/// Elementary function applied to a jet.
pub fn jet_elem(f: ElemFn, a: &Jet3) -> Result<Jet3> {
    match f {
        ElemFn::Sin => Ok(a.sin()),
        ElemFn::Cos => Ok(a.cos()),
        ElemFn::Tan => a.tan(),
        ElemFn::Exp => Ok(a.exp()),
        ElemFn::Log => a.ln(),
        ElemFn::Sqrt => a.sqrt(),
        ElemFn::Sinh => Ok(a.sinh()),
        ElemFn::Cosh => Ok(a.cosh()),
        ElemFn::PowConst(p) => a.powf(p),
    }
}

/// Convenience alias for [`Jet3::variable`].
pub fn jet_variable(which: Var, value: f64) -> Jet3 {
    Jet3::variable(which, value)
}
