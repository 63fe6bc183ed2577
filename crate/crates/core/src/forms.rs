//! Homogeneous binary forms in `(cos θ, sin θ)` and their roots on `[0, π)`.
//!
//! A form of degree `d` is `Σ_k a_k cos^{d-k}θ sin^kθ`. Every direction
//! equation in the crate (extremal deviation, strong principal, asymptotic)
//! is built as such a form; dividing by `cos^d θ` turns it into a polynomial
//! in `p = tan θ`, whose roots come from [`crate::linalg::polynomial_roots`].
//! The direction `θ = π/2` (where `cos θ = 0`) is a root exactly when the
//! coefficient of `sin^d θ` vanishes and is tested separately.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::ops::{Add, Mul, Sub};

use crate::linalg::polynomial_roots;

pub const MAX_DEGREE: usize = 7;

#[derive(Clone, Copy, PartialEq)]
pub struct Form {
    degree: usize,
    a: [f64; MAX_DEGREE + 1],
}

impl core::fmt::Debug for Form {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_tuple("Form").field(&self.coeffs()).finish()
    }
}

impl Form {
    pub fn new(coeffs: &[f64]) -> Form {
        assert!(!coeffs.is_empty() && coeffs.len() <= MAX_DEGREE + 1);
        let mut a = [0.0; MAX_DEGREE + 1];
        a[..coeffs.len()].copy_from_slice(coeffs);
        Form {
            degree: coeffs.len() - 1,
            a,
        }
    }

    pub fn zero(degree: usize) -> Form {
        Form {
            degree,
            a: [0.0; MAX_DEGREE + 1],
        }
    }

    /// `cos²θ + sin²θ`, used to homogenize mixed-degree expressions.
    pub fn one2() -> Form {
        Form::new(&[1.0, 0.0, 1.0])
    }

    pub fn cos() -> Form {
        Form::new(&[1.0, 0.0])
    }

    pub fn sin() -> Form {
        Form::new(&[0.0, 1.0])
    }

    /// `cos 2θ = cos²θ − sin²θ`
    pub fn cos2() -> Form {
        Form::new(&[1.0, 0.0, -1.0])
    }

    /// `sin 2θ = 2 cosθ sinθ`
    pub fn sin2() -> Form {
        Form::new(&[0.0, 2.0, 0.0])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.a[..=self.degree]
    }

    pub fn scale(&self, s: f64) -> Form {
        let mut out = *self;
        out.a.iter_mut().for_each(|x| *x *= s);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        self.eval_cs(c, s)
    }

    pub fn eval_cs(&self, c: f64, s: f64) -> f64 {
        let d = self.degree;
        let mut acc = 0.0;
        for k in 0..=d {
            acc += self.a[k] * powi(c, d - k) * powi(s, k);
        }
        acc
    }

    /// `d/dθ` of the form, again a form of the same degree.
    pub fn derivative(&self) -> Form {
        let d = self.degree;
        let mut out = Form::zero(d);
        for k in 0..=d {
            let a = self.a[k];
            // d/dθ c^{d-k} s^k = -(d-k) c^{d-k-1} s^{k+1} + k c^{d-k+1} s^{k-1}
            if k < d {
                out.a[k + 1] -= (d - k) as f64 * a;
            }
            if k > 0 {
                out.a[k - 1] += k as f64 * a;
            }
        }
        out
    }
}

fn powi(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, _| acc * x)
}

impl Add for Form {
    type Output = Form;
    fn add(mut self, rhs: Form) -> Form {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        for k in 0..=self.degree {
            self.a[k] += rhs.a[k];
        }
        self
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        self + rhs.scale(-1.0)
    }
}

impl Mul for Form {
    type Output = Form;
    fn mul(self, rhs: Form) -> Form {
        let d = self.degree + rhs.degree;
        assert!(d <= MAX_DEGREE);
        let mut out = Form::zero(d);
        for i in 0..=self.degree {
            for j in 0..=rhs.degree {
                out.a[i + j] += self.a[i] * rhs.a[j];
            }
        }
        out
    }
}

/// A form with vector coefficients, stored as one scalar form per component
/// (components are coordinates in some fixed orthonormal basis).
#[derive(Clone, Debug, PartialEq)]
pub struct VecForm {
    pub comps: Vec<Form>,
}

impl VecForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        VecForm {
            comps: alloc::vec![Form::zero(degree); dim],
        }
    }

    /// `Σ_k basis_form_k * vector_k`, where `terms` pairs a scalar form with
    /// vector coefficients.
    pub fn from_terms(dim: usize, degree: usize, terms: &[(Form, &[f64])]) -> Self {
        let mut out = VecForm::zero(dim, degree);
        for (f, v) in terms {
            for (comp, x) in out.comps.iter_mut().zip(v.iter()) {
                *comp = *comp + f.scale(*x);
            }
        }
        out
    }

    pub fn dot(&self, other: &VecForm) -> Form {
        let mut it = self.comps.iter().zip(&other.comps).map(|(a, b)| *a * *b);
        let first = it.next().expect("empty vector form");
        it.fold(first, |acc, f| acc + f)
    }
}

/// Roots found by [`solve_form`].
#[derive(Clone, Debug, PartialEq)]
pub struct FormRoots {
    pub identically_zero: bool,
    /// `(θ, multiplicity, relative residual)`, θ sorted in `[0, π)`.
    pub roots: Vec<FormRoot>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormRoot {
    pub theta: f64,
    pub multiplicity: usize,
    /// `|f(θ)| / max_k |a_k|`
    pub residual: f64,
    /// The form changes sign across the root (odd multiplicity).
    pub crossing: bool,
}

/// Options for [`solve_form`].
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// The form is identically zero when every coefficient is below this.
    pub zero_threshold: f64,
    /// Accept a polished root when `|f(θ)| <= tol * max_k |a_k|`.
    pub tol: f64,
    /// Roots closer than this (mod π) are merged.
    pub merge: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            zero_threshold: 0.0,
            tol: 1e-9,
            merge: 1e-7,
        }
    }
}

/// Normalizes an angle to `[0, π)`.
pub fn wrap_pi(theta: f64) -> f64 {
    let mut t = libm::fmod(theta, PI);
    if t < 0.0 {
        t += PI;
    }
    if t >= PI {
        t -= PI;
    }
    t
}

/// Distance between two undirected angles (mod π).
pub fn angle_dist_pi(a: f64, b: f64) -> f64 {
    let d = wrap_pi(a - b);
    d.min(PI - d)
}

/// All roots of a binary form on `[0, π)`.
pub fn solve_form(form: &Form, opts: &SolveOptions) -> FormRoots {
    let scale = form.max_abs();
    if scale <= opts.zero_threshold || scale == 0.0 {
        return FormRoots {
            identically_zero: true,
            roots: Vec::new(),
        };
    }
    let d = form.degree();
    let a = form.coeffs();
    let deriv = form.derivative();
    let mut cands: Vec<(f64, usize)> = Vec::new();

    // θ = π/2: the coefficient of sin^d must vanish. Its multiplicity is the
    // number of vanishing top coefficients.
    let lead_tol = opts.tol * scale;
    let top_zero = a.iter().rev().take_while(|x| x.abs() <= lead_tol).count();
    if top_zero > 0 {
        cands.push((FRAC_PI_2, top_zero));
    }

    // Drop top coefficients that are negligible relative to the rest; the
    // corresponding roots sit at θ ≈ π/2 and are covered above.
    let mut eff = d + 1;
    while eff > 1 && a[eff - 1].abs() <= 1e-14 * scale {
        eff -= 1;
    }
    if let Some(eigs) = polynomial_roots(&a[..eff]) {
        for z in eigs {
            if z.im.abs() <= 1e-4 * (1.0 + libm::hypot(z.re, z.im)) {
                cands.push((wrap_pi(libm::atan(z.re)), 1));
            }
        }
    } else {
        // QR failed: fall back to sign changes on a fine grid.
        const N: usize = 4096;
        let mut prev = form.eval(0.0);
        for i in 1..=N {
            let t = PI * i as f64 / N as f64;
            let cur = form.eval(t);
            if prev == 0.0 || prev.signum() != cur.signum() {
                cands.push((t - 0.5 * PI / N as f64, 1));
            }
            prev = cur;
        }
    }

    let mut accepted: Vec<FormRoot> = Vec::new();
    for (t0, mult) in cands {
        let t = newton_polish(form, &deriv, t0);
        let res = form.eval(t).abs() / scale;
        if res <= opts.tol {
            accepted.push(FormRoot {
                theta: wrap_pi(t),
                multiplicity: mult,
                residual: res,
                crossing: false,
            });
        }
    }
    accepted.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    let mut roots = merge_roots(accepted, opts.merge, |a, b| {
        // a multiple root polishes to a small cluster; the form stays at the
        // noise floor across it
        let mid = a + 0.5 * wrap_signed(b - a);
        angle_dist_pi(a, b) <= 1e-3 && form.eval(mid).abs() <= opts.tol * scale
    });
    mark_crossings(form, &mut roots);
    FormRoots {
        identically_zero: false,
        roots,
    }
}

/// `x` reduced to `(-π/2, π/2]`.
fn wrap_signed(x: f64) -> f64 {
    let t = wrap_pi(x);
    if t > FRAC_PI_2 {
        t - PI
    } else {
        t
    }
}

fn mark_crossings(form: &Form, roots: &mut [FormRoot]) {
    let n = roots.len();
    for i in 0..n {
        let t = roots[i].theta;
        let mut delta: f64 = 1e-5;
        if n > 1 {
            let prev = roots[(i + n - 1) % n].theta;
            let next = roots[(i + 1) % n].theta;
            delta = delta
                .min(0.5 * angle_dist_pi(t, prev))
                .min(0.5 * angle_dist_pi(t, next));
        }
        let (lo, hi) = (form.eval(t - delta), form.eval(t + delta));
        roots[i].crossing = lo.signum() != hi.signum() && lo != 0.0 && hi != 0.0;
    }
}

fn merge_roots(
    sorted: Vec<FormRoot>,
    merge: f64,
    same_cluster: impl Fn(f64, f64) -> bool,
) -> Vec<FormRoot> {
    let mut out: Vec<FormRoot> = Vec::new();
    for r in sorted {
        match out.last_mut() {
            Some(last)
                if angle_dist_pi(last.theta, r.theta) <= merge
                    || same_cluster(last.theta, r.theta) =>
            {
                last.multiplicity += r.multiplicity;
                if r.residual < last.residual {
                    last.theta = r.theta;
                    last.residual = r.residual;
                }
            }
            _ => out.push(r),
        }
    }
    // wrap-around: a root just below π and one at 0 are the same direction
    if out.len() >= 2 {
        let (first, last) = (out[0], out[out.len() - 1]);
        if angle_dist_pi(first.theta, last.theta) <= merge
            || same_cluster(last.theta, first.theta)
        {
            let keep = if last.residual < first.residual { last } else { first };
            let merged = FormRoot {
                multiplicity: first.multiplicity + last.multiplicity,
                crossing: false,
                ..keep
            };
            if keep.theta > FRAC_PI_2 {
                out.remove(0);
                let k = out.len() - 1;
                out[k] = merged;
            } else {
                out[0] = merged;
                out.pop();
            }
        }
    }
    out
}

/// Newton iteration on the trigonometric form with backtracking: every step
/// decreases `|f|` and stays within `0.05` of the start.
pub fn newton_polish(form: &Form, deriv: &Form, t0: f64) -> f64 {
    let mut t = t0;
    let mut ft = form.eval(t0).abs();
    'outer: for _ in 0..60 {
        let f = form.eval(t);
        let df = deriv.eval(t);
        if f == 0.0 || df == 0.0 || !df.is_finite() {
            break;
        }
        // backtrack until |f| decreases, so a multiple root cannot hand the
        // iterate over to a neighbouring simple root
        let mut step = f / df;
        loop {
            let tn = t - step;
            let fn_ = form.eval(tn).abs();
            if fn_ < ft && (tn - t0).abs() <= 0.05 {
                t = tn;
                ft = fn_;
                break;
            }
            step *= 0.5;
            if step.abs() < 1e-16 * (1.0 + t.abs()) {
                break 'outer;
            }
        }
        if step.abs() < 1e-16 * (1.0 + t.abs()) {
            break;
        }
    }
    t
}
