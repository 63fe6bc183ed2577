//! Orthonormal frames, second fundamental form and its first covariant
//! derivative at a point of a parametrized surface.
//!
//! Everything is derived from the order-3 jet of the chart. The tangent frame
//! `t1 ∝ X_u`, `t2` = Gram–Schmidt of `X_v`, is carried as a field of jets so
//! that its variation (and the variation of the `b` fields built from it) is
//! available without Christoffel symbols.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jets::{Jet3, Var};
use crate::linalg::{determinant, Mat};
use crate::surface::SurfaceChart;
use crate::vector::{Vector, MAX_DIM};

/// Jet-valued ambient vector.
#[derive(Clone, Copy)]
struct JetVec {
    dim: usize,
    c: [Jet3; MAX_DIM],
}

impl JetVec {
    fn new(xs: &[Jet3]) -> Self {
        let mut c = [Jet3::ZERO; MAX_DIM];
        c[..xs.len()].copy_from_slice(xs);
        JetVec { dim: xs.len(), c }
    }

    fn map(&self, f: impl Fn(&Jet3) -> Jet3) -> JetVec {
        let mut out = *self;
        for k in 0..self.dim {
            out.c[k] = f(&self.c[k]);
        }
        out
    }

    fn dot(&self, o: &JetVec) -> Jet3 {
        (0..self.dim).fold(Jet3::ZERO, |acc, k| acc + self.c[k] * o.c[k])
    }

    fn scale(&self, s: &Jet3) -> JetVec {
        self.map(|x| *x * *s)
    }

    fn sub(&self, o: &JetVec) -> JetVec {
        let mut out = *self;
        for k in 0..self.dim {
            out.c[k] = self.c[k] - o.c[k];
        }
        out
    }

    fn add(&self, o: &JetVec) -> JetVec {
        let mut out = *self;
        for k in 0..self.dim {
            out.c[k] = self.c[k] + o.c[k];
        }
        out
    }

    fn partial(&self, which: Var) -> JetVec {
        self.map(|x| x.partial(which))
    }

    fn value(&self) -> Vector {
        let mut v = Vector::zeros(self.dim);
        for k in 0..self.dim {
            v[k] = self.c[k].value();
        }
        v
    }

    /// First derivative along the parameter direction `(du, dv)`.
    fn derivative(&self, du: f64, dv: f64) -> Vector {
        let mut v = Vector::zeros(self.dim);
        for k in 0..self.dim {
            v[k] = self.c[k].directional(du, dv);
        }
        v
    }
}

/// Geometry of the surface at one point, expressed in the deterministic frame.
#[derive(Clone, Debug, PartialEq)]
pub struct PointGeometry {
    pub u: f64,
    pub v: f64,
    pub m: Vector,
    pub t1: Vector,
    pub t2: Vector,
    /// Orthonormal, with `det(t1, t2, ν_1, …, ν_{n-2}) > 0`.
    pub normal_basis: Vec<Vector>,
    /// `α(t1,t1)`, `α(t2,t2)`, `α(t1,t2)`.
    pub b1: Vector,
    pub b2: Vector,
    pub b3: Vector,
    pub h: Vector,
    pub b: Vector,
    pub c: Vector,
    /// `t2·D_{t1}t1`
    pub q: f64,
    /// `t2·D_{t2}t1`
    pub r: f64,
    /// `D_{t1}b1, D_{t2}b1, D_{t1}b2, D_{t2}b2, D_{t1}b3, D_{t2}b3` (ambient,
    /// not projected).
    pub db: [Vector; 6],
    /// `(a11, a21, a22)` with `t1 = a11 X_u`, `t2 = a21 X_u + a22 X_v`.
    pub param_frame: [f64; 3],
}

impl PointGeometry {
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// `t(θ) = t1 cosθ + t2 sinθ`
    pub fn tangent(&self, theta: f64) -> Vector {
        self.t1 * libm::cos(theta) + self.t2 * libm::sin(theta)
    }

    /// Parameter-space velocity `(u', v')` of a curve with unit velocity `t(θ)`.
    pub fn param_velocity(&self, theta: f64) -> (f64, f64) {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        let [a11, a21, a22] = self.param_frame;
        (a11 * c + a21 * s, a22 * s)
    }

    /// Frame angle of a parameter-space direction `(du, dv)`.
    pub fn angle_of_param(&self, du: f64, dv: f64) -> f64 {
        let [a11, a21, a22] = self.param_frame;
        // invert (du, dv) = (a11 c + a21 s, a22 s)
        let s = dv / a22;
        let c = (du - a21 * s) / a11;
        libm::atan2(s, c)
    }

    /// `η(θ) = H + B cos2θ + C sin2θ`
    pub fn eta(&self, theta: f64) -> Vector {
        self.h + self.b * libm::cos(2.0 * theta) + self.c * libm::sin(2.0 * theta)
    }

    /// `α(x, y)` for tangent vectors given in `(t1, t2)` coordinates.
    pub fn alpha_pair(&self, x: [f64; 2], y: [f64; 2]) -> Vector {
        self.b1 * (x[0] * y[0]) + self.b2 * (x[1] * y[1]) + self.b3 * (x[0] * y[1] + x[1] * y[0])
    }

    /// `α(Jv, v) = -B sin2θ + C cos2θ`, half the θ-derivative of `η`.
    pub fn alpha_jv_v(&self, theta: f64) -> Vector {
        -(self.b * libm::sin(2.0 * theta)) + self.c * libm::cos(2.0 * theta)
    }

    /// Normal projection of an ambient vector.
    pub fn normal_part(&self, x: &Vector) -> Vector {
        *x - self.t1 * x.dot(&self.t1) - self.t2 * x.dot(&self.t2)
    }

    /// Coefficients of `(∇_xα)(x,x)` for `x = t(θ)`, as the cubic
    /// `k0 c³ + k1 c²s + k2 cs² + k3 s³`, already projected to the normal space.
    pub fn nabla_alpha_cubic(&self) -> [Vector; 4] {
        let [d1b1, d2b1, d1b2, d2b2, d1b3, d2b3] = self.db;
        let (q, r) = (self.q, self.r);
        let (b, c) = (self.b, self.c);
        let raw = [
            d1b1 - c * (2.0 * q),
            d2b1 + d1b3 * 2.0 + b * (4.0 * q) - c * (2.0 * r),
            d1b2 + d2b3 * 2.0 + b * (4.0 * r) + c * (2.0 * q),
            d2b2 + c * (2.0 * r),
        ];
        raw.map(|k| self.normal_part(&k))
    }

    /// `(∇_xα)(x,x)` with `x = t(θ)`.
    pub fn nabla_alpha(&self, theta: f64) -> Vector {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        let k = self.nabla_alpha_cubic();
        k[0] * (c * c * c) + k[1] * (c * c * s) + k[2] * (c * s * s) + k[3] * (s * s * s)
    }

    /// `|H| + |B| + |C|`, the natural size of the second fundamental form.
    pub fn alpha_scale(&self) -> f64 {
        self.h.norm() + self.b.norm() + self.c.norm()
    }

    /// Coordinates of a normal vector in `normal_basis`.
    pub fn normal_coords(&self, x: &Vector) -> Vec<f64> {
        self.normal_basis.iter().map(|nu| nu.dot(x)).collect()
    }

    /// Rotation by +90° in the oriented normal plane (`ν1 ↦ ν2`, `ν2 ↦ -ν1`).
    /// Only meaningful in R⁴.
    pub fn j_normal(&self, x: &Vector) -> Vector {
        debug_assert_eq!(self.normal_basis.len(), 2);
        let (n1, n2) = (self.normal_basis[0], self.normal_basis[1]);
        n2 * x.dot(&n1) - n1 * x.dot(&n2)
    }
}

/// Builds the frame and all second- and third-order data at `(u0, v0)`.
pub fn build_point_geometry(chart: &SurfaceChart, u0: f64, v0: f64) -> Result<PointGeometry> {
    let x = JetVec::new(&chart.eval_chart(u0, v0)?);
    let xu = x.partial(Var::U);
    let xv = x.partial(Var::V);
    let xuu = xu.partial(Var::U);
    let xuv = xu.partial(Var::V);
    let xvv = xv.partial(Var::V);

    let e = xu.dot(&xu);
    let f = xu.dot(&xv);
    let g = xv.dot(&xv);
    let gram = e.value() * g.value() - f.value() * f.value();
    let scale = e.value() + g.value();
    if !(gram > 1e-12 * scale * scale) || !gram.is_finite() {
        return Err(Error::SingularPointError { u: u0, v: v0, gram });
    }

    // a11 = 1/√E, a22 = √(E/(EG−F²)), a21 = −(F/E) a22
    let det = e * g - f * f;
    let a11 = e.sqrt()?.recip()?;
    let a22 = e.try_div(&det)?.sqrt()?;
    let a21 = -(f.try_div(&e)? * a22);

    let t1 = xu.scale(&a11);
    let t2 = xu.scale(&a21).add(&xv.scale(&a22));
    let proj = |w: &JetVec| w.sub(&t1.scale(&w.dot(&t1))).sub(&t2.scale(&w.dot(&t2)));

    let b1f = proj(&xuu.scale(&(a11 * a11)));
    let b3f = proj(&xuu.scale(&(a11 * a21)).add(&xuv.scale(&(a11 * a22))));
    let b2f = proj(
        &xuu.scale(&(a21 * a21))
            .add(&xuv.scale(&(a21 * a22 * 2.0)))
            .add(&xvv.scale(&(a22 * a22))),
    );

    let (p11, p21, p22) = (a11.value(), a21.value(), a22.value());
    let d1 = |w: &JetVec| w.derivative(p11, 0.0);
    let d2 = |w: &JetVec| w.derivative(p21, p22);

    let t1v = t1.value();
    let t2v = t2.value();
    let q = t2v.dot(&d1(&t1));
    let r = t2v.dot(&d2(&t1));

    let (b1, b2, b3) = (b1f.value(), b2f.value(), b3f.value());
    let normal_basis = normal_basis(&t1v, &t2v);
    Ok(PointGeometry {
        u: u0,
        v: v0,
        m: x.value(),
        t1: t1v,
        t2: t2v,
        normal_basis,
        b1,
        b2,
        b3,
        h: (b1 + b2) * 0.5,
        b: (b1 - b2) * 0.5,
        c: b3,
        q,
        r,
        db: [d1(&b1f), d2(&b1f), d1(&b2f), d2(&b2f), d1(&b3f), d2(&b3f)],
        param_frame: [p11, p21, p22],
    })
}

/// Normal basis seeded by the coordinate axes least aligned with the tangent
/// plane, then oriented so that `det(t1, t2, ν…) > 0`.
fn normal_basis(t1: &Vector, t2: &Vector) -> Vec<Vector> {
    let n = t1.dim();
    let mut axes: Vec<(f64, usize)> = (0..n)
        .map(|k| (t1[k] * t1[k] + t2[k] * t2[k], k))
        .collect();
    axes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut basis: Vec<Vector> = Vec::with_capacity(n - 2);
    for &(_, k) in &axes {
        if basis.len() == n - 2 {
            break;
        }
        let mut w = Vector::axis(n, k);
        // two passes of Gram–Schmidt for stability
        for _ in 0..2 {
            for e in [t1, t2].into_iter().chain(basis.iter()) {
                w -= *e * w.dot(e);
            }
        }
        let len = w.norm();
        if len > 1e-3 {
            basis.push(w * (1.0 / len));
        }
    }
    debug_assert_eq!(basis.len(), n - 2);

    let mut m = Mat::zeros(n, n);
    for (j, col) in [*t1, *t2].iter().chain(basis.iter()).enumerate() {
        for i in 0..n {
            m.a[i][j] = col[i];
        }
    }
    if determinant(&m) < 0.0 {
        let last = basis.len() - 1;
        basis[last] = -basis[last];
    }
    basis
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointTag {
    Generic,
    Semiumbilic,
    Inflection,
    Umbilic,
    Flat,
}

impl PointTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PointTag::Generic => "generic",
            PointTag::Semiumbilic => "semiumbilic",
            PointTag::Inflection => "inflection",
            PointTag::Umbilic => "umbilic",
            PointTag::Flat => "flat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointClass {
    pub tag: PointTag,
    /// Frame rotation `φ ∈ (-π/4, π/4]` after which `B'·C' = 0`, `|B'| ≥ |C'|`.
    pub aligned_frame_angle: f64,
    /// `B` and `C` in the aligned frame.
    pub b_aligned: Vector,
    pub c_aligned: Vector,
}

/// Default relative tolerance for [`classify_point`].
pub const CLASSIFY_TOL: f64 = 1e-8;

/// Classifies the point by the shape of its curvature ellipse.
///
/// `tol` is relative to `|H|+|B|+|C|`, except for flatness where that scale
/// itself is compared to `tol`.
pub fn classify_point(pg: &PointGeometry, tol: f64) -> PointClass {
    let (b, c, h) = (pg.b, pg.c, pg.h);
    let (bb, cc, bc) = (b.norm_sq(), c.norm_sq(), b.dot(&c));
    let phi = libm::atan2(2.0 * bc, bb - cc) / 4.0;
    let (s2, c2) = (libm::sin(2.0 * phi), libm::cos(2.0 * phi));
    let b_al = b * c2 + c * s2;
    let c_al = c * c2 - b * s2;

    let scale = pg.alpha_scale();
    let tag = if scale <= tol {
        PointTag::Flat
    } else if b_al.norm() <= tol * scale {
        PointTag::Umbilic
    } else if c_al.norm() <= tol * scale {
        let hb = h.dot(&b_al);
        let wedge = (h.norm_sq() * b_al.norm_sq() - hb * hb).max(0.0);
        if libm::sqrt(wedge) <= tol * scale * scale {
            PointTag::Inflection
        } else {
            PointTag::Semiumbilic
        }
    } else {
        PointTag::Generic
    };
    PointClass {
        tag,
        aligned_frame_angle: phi,
        b_aligned: b_al,
        c_aligned: c_al,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{Domain, SurfaceChart};
    use core::f64::consts::{FRAC_1_SQRT_2, PI};
    use proptest::prelude::*;

    fn dom() -> Domain {
        Domain::new((-3.0, 3.0), (-3.0, 3.0))
    }

    fn sphere() -> SurfaceChart {
        SurfaceChart::from_strs("sphere", &["cos(u)*cos(v)", "sin(u)*cos(v)", "sin(v)"], dom())
            .unwrap()
    }

    fn example_r5() -> SurfaceChart {
        SurfaceChart::from_strs(
            "r5",
            &["u^2*v^2", "u+v", "u-v", "(u^2+v^2)/2", "(u^2-v^2)/2"],
            dom(),
        )
        .unwrap()
    }

    fn clifford(a: f64, b: f64) -> SurfaceChart {
        let comps = [
            alloc::format!("{a}*cos(u)"),
            alloc::format!("{a}*sin(u)"),
            alloc::format!("{b}*cos(v)"),
            alloc::format!("{b}*sin(v)"),
        ];
        let refs: Vec<&str> = comps.iter().map(|s| s.as_str()).collect();
        SurfaceChart::from_strs("torus", &refs, dom()).unwrap()
    }

    fn monge4() -> SurfaceChart {
        SurfaceChart::from_strs(
            "monge",
            &["u", "v", "u^2 + 0.3*u*v^2 - v^3/2", "u*v + 0.2*u^3 + v^2/4"],
            dom(),
        )
        .unwrap()
    }

    fn close(a: &Vector, b: &[f64], tol: f64) {
        let d = (*a - Vector::from_slice(b)).max_abs();
        assert!(d < tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn sphere_at_origin() {
        let pg = build_point_geometry(&sphere(), 0.0, 0.0).unwrap();
        close(&pg.m, &[1.0, 0.0, 0.0], 1e-15);
        close(&pg.t1, &[0.0, 1.0, 0.0], 1e-15);
        close(&pg.t2, &[0.0, 0.0, 1.0], 1e-15);
        close(&pg.b1, &[-1.0, 0.0, 0.0], 1e-14);
        close(&pg.b2, &[-1.0, 0.0, 0.0], 1e-14);
        close(&pg.b3, &[0.0; 3], 1e-14);
        close(&pg.h, &[-1.0, 0.0, 0.0], 1e-14);
        assert!(pg.q.abs() < 1e-14 && pg.r.abs() < 1e-14);
        for th in [0.0, 0.4, 1.3, 2.9] {
            assert!(pg.nabla_alpha(th).max_abs() < 1e-12);
        }
        assert_eq!(classify_point(&pg, CLASSIFY_TOL).tag, PointTag::Umbilic);
    }

    #[test]
    fn sphere_nabla_alpha_vanishes_on_grid() {
        let s = sphere();
        for i in 0..7 {
            for j in 0..7 {
                let (u, v) = (-2.5 + 0.8 * i as f64, -1.2 + 0.4 * j as f64);
                let pg = build_point_geometry(&s, u, v).unwrap();
                for th in [0.1, 0.9, 2.2] {
                    assert!(pg.nabla_alpha(th).max_abs() < 1e-9, "({u},{v})");
                }
            }
        }
    }

    #[test]
    fn example_r5_origin() {
        let pg = build_point_geometry(&example_r5(), 0.0, 0.0).unwrap();
        let s = FRAC_1_SQRT_2;
        close(&pg.t1, &[0.0, s, s, 0.0, 0.0], 1e-15);
        close(&pg.t2, &[0.0, s, -s, 0.0, 0.0], 1e-15);
        // t1 = X_u/√2, so b1 = X_uu/2 and b2 = X_vv/2
        close(&pg.b1, &[0.0, 0.0, 0.0, 0.5, 0.5], 1e-14);
        close(&pg.b2, &[0.0, 0.0, 0.0, 0.5, -0.5], 1e-14);
        close(&pg.b3, &[0.0; 5], 1e-14);
        close(&pg.h, &[0.0, 0.0, 0.0, 0.5, 0.0], 1e-14);
        close(&pg.b, &[0.0, 0.0, 0.0, 0.0, 0.5], 1e-14);
        close(&pg.c, &[0.0; 5], 1e-14);
        close(&pg.eta(PI / 4.0), &[0.0, 0.0, 0.0, 0.5, 0.0], 1e-14);
        close(&pg.eta(0.0), &[0.0, 0.0, 0.0, 0.5, 0.5], 1e-14);
        close(&pg.alpha_pair([1.0, 0.0], [1.0, 0.0]), &[0.0, 0.0, 0.0, 0.5, 0.5], 1e-14);
        assert_eq!(pg.alpha_pair([0.0, 0.0], [0.3, 0.1]).max_abs(), 0.0);
    }

    #[test]
    fn clifford_torus_grid() {
        let (a, b) = (1.3, 0.7);
        let chart = clifford(a, b);
        for i in 0..10 {
            for j in 0..10 {
                let (u, v) = (-3.0 + 0.6 * i as f64, -3.0 + 0.6 * j as f64);
                let pg = build_point_geometry(&chart, u, v).unwrap();
                close(&pg.b3, &[0.0; 4], 1e-12);
                close(&pg.b1, &[-u.cos() / a, -u.sin() / a, 0.0, 0.0], 1e-12);
                close(&pg.b2, &[0.0, 0.0, -v.cos() / b, -v.sin() / b], 1e-12);
                for th in [0.2, 1.1, 2.7] {
                    assert!(pg.nabla_alpha(th).max_abs() < 1e-9);
                }
                let cls = classify_point(&pg, CLASSIFY_TOL);
                assert_eq!(cls.tag, PointTag::Semiumbilic, "({u},{v})");
            }
        }
    }

    #[test]
    fn plane_is_flat() {
        let chart = SurfaceChart::from_strs("plane", &["u", "v", "0"], dom()).unwrap();
        let pg = build_point_geometry(&chart, 0.3, -0.2).unwrap();
        assert_eq!(classify_point(&pg, CLASSIFY_TOL).tag, PointTag::Flat);
    }

    #[test]
    fn surfaces_in_r3_are_inflection_unless_umbilic() {
        let chart = SurfaceChart::from_strs("cyl", &["cos(u)", "sin(u)", "v"], dom()).unwrap();
        let pg = build_point_geometry(&chart, 0.4, 0.1).unwrap();
        assert_eq!(classify_point(&pg, CLASSIFY_TOL).tag, PointTag::Inflection);
    }

    #[test]
    fn singular_point_rejected() {
        let chart = SurfaceChart::from_strs("cone", &["u^3", "v", "0"], dom()).unwrap();
        assert!(matches!(
            build_point_geometry(&chart, 0.0, 0.0),
            Err(Error::SingularPointError { .. })
        ));
    }

    #[test]
    fn normal_basis_oriented() {
        for chart in [sphere(), example_r5(), clifford(1.0, 2.0), monge4()] {
            let pg = build_point_geometry(&chart, 0.3, 0.45).unwrap();
            let n = pg.dim();
            let mut m = Mat::zeros(n, n);
            let cols: Vec<Vector> = [pg.t1, pg.t2].into_iter().chain(pg.normal_basis.clone()).collect();
            for (j, col) in cols.iter().enumerate() {
                for (k, other) in cols.iter().enumerate() {
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((col.dot(other) - want).abs() < 1e-12);
                }
                for i in 0..n {
                    m.a[i][j] = col[i];
                }
            }
            assert!(determinant(&m) > 0.0);
        }
    }

    /// `D_{t_i} b_j` against central differences of the b fields.
    #[test]
    fn frame_derivatives_match_finite_differences() {
        let chart = monge4();
        let (u, v) = (0.2, -0.3);
        let pg = build_point_geometry(&chart, u, v).unwrap();
        let h = 1e-5;
        let at = |du: f64, dv: f64| build_point_geometry(&chart, u + du, v + dv).unwrap();
        let [a11, a21, a22] = pg.param_frame;
        for (i, (du, dv)) in [(a11, 0.0), (a21, a22)].into_iter().enumerate() {
            let p = at(h * du, h * dv);
            let m = at(-h * du, -h * dv);
            let fd = |f: fn(&PointGeometry) -> Vector| (f(&p) - f(&m)) * (0.5 / h);
            let got = [pg.db[i], pg.db[2 + i], pg.db[4 + i]];
            let want = [fd(|g| g.b1), fd(|g| g.b2), fd(|g| g.b3)];
            for (g, w) in got.iter().zip(want.iter()) {
                assert!((*g - *w).max_abs() < 1e-7, "{g:?} vs {w:?}");
            }
            let dt1 = fd(|g| g.t1);
            let qr = if i == 0 { pg.q } else { pg.r };
            assert!((pg.t2.dot(&dt1) - qr).abs() < 1e-8);
        }
    }

    /// The third-order cubic against the normal part of the derivative of
    /// `α(t(θ), t(θ))` along `t(θ)`, with the frame transported by the
    /// chart (not parallel transport), which equals `(D_xα)(x,x)` plus terms
    /// the formula already accounts for through q and r.
    #[test]
    fn nabla_alpha_matches_finite_difference_of_alpha() {
        let chart = monge4();
        let (u, v) = (0.15, 0.25);
        let pg = build_point_geometry(&chart, u, v).unwrap();
        for th in [0.3, 1.2, 2.5] {
            // x(s) = tangent field with constant parameter-space coefficients
            // matching t(θ) at s = 0; (∇_xα)(x,x) = (D_x[α(X,X)])^⊥ − 2α(∇_x X, x)
            let (du, dv) = pg.param_velocity(th);
            let h = 1e-5;
            let alpha_xx = |s: f64| {
                let g = build_point_geometry(&chart, u + s * du, v + s * dv).unwrap();
                // t(θ) field in parameter coordinates: du X_u + dv X_v, so
                // coordinates in the local (t1, t2) frame are:
                let [a11, a21, a22] = g.param_frame;
                let y2 = dv / a22;
                let y1 = (du - a21 * y2) / a11;
                (g.alpha_pair([y1, y2], [y1, y2]), [y1, y2])
            };
            let (ap, _) = alpha_xx(h);
            let (am, _) = alpha_xx(-h);
            let d_alpha = pg.normal_part(&((ap - am) * (0.5 / h)));
            // ∇_x X for X = du X_u + dv X_v with constant coefficients:
            // D_x X = du² X_uu + 2 du dv X_uv + dv² X_vv, tangential part is
            // what enters; compute via FD of the tangent position.
            let xp = |s: f64| {
                let j = chart.eval_chart(u + s * du, v + s * dv).unwrap();
                let mut w = Vector::zeros(pg.dim());
                for (k, jk) in j.iter().enumerate() {
                    w[k] = jk.coeff(1, 0) * du + jk.coeff(0, 1) * dv;
                }
                w
            };
            let dx = (xp(h) - xp(-h)) * (0.5 / h);
            let nab_x = [dx.dot(&pg.t1), dx.dot(&pg.t2)];
            let c = [th.cos(), th.sin()];
            let want = d_alpha - pg.alpha_pair(nab_x, c) * 2.0;
            let got = pg.nabla_alpha(th);
            assert!((got - want).max_abs() < 1e-6, "{got:?} vs {want:?}");
        }
    }

    proptest! {
        #[test]
        fn alpha_jv_v_is_half_eta_derivative(th in 0.0..PI, u in -1.0..1.0f64, v in -1.0..1.0f64) {
            let pg = build_point_geometry(&monge4(), u, v).unwrap();
            let x = [th.cos(), th.sin()];
            let jx = [-th.sin(), th.cos()];
            let lhs = pg.alpha_pair(jx, x);
            prop_assert!((lhs - pg.alpha_jv_v(th)).max_abs() < 1e-10);
        }

        #[test]
        fn eta_matches_alpha_pair_and_has_period_pi(th in -4.0..4.0f64, u in -1.0..1.0f64, v in -1.0..1.0f64) {
            let pg = build_point_geometry(&example_r5(), u, v).unwrap();
            let x = [th.cos(), th.sin()];
            prop_assert!((pg.eta(th) - pg.alpha_pair(x, x)).max_abs() < 1e-12);
            prop_assert!((pg.eta(th) - pg.eta(th + PI)).max_abs() < 1e-12);
            prop_assert!((pg.nabla_alpha(th) + pg.nabla_alpha(th + PI)).max_abs() < 1e-9);
        }

        #[test]
        fn frame_is_orthonormal_and_b_normal(u in -1.0..1.0f64, v in -1.0..1.0f64) {
            for chart in [monge4(), example_r5(), sphere()] {
                let pg = build_point_geometry(&chart, u, v).unwrap();
                prop_assert!((pg.t1.norm() - 1.0).abs() < 1e-10);
                prop_assert!((pg.t2.norm() - 1.0).abs() < 1e-10);
                prop_assert!(pg.t1.dot(&pg.t2).abs() < 1e-10);
                for b in [pg.b1, pg.b2, pg.b3] {
                    let tol = 1e-9 * (1.0 + b.norm());
                    prop_assert!(b.dot(&pg.t1).abs() < tol && b.dot(&pg.t2).abs() < tol);
                }
                prop_assert_eq!(pg.h, (pg.b1 + pg.b2) * 0.5);
            }
        }

        #[test]
        fn parameter_rotation_invariance(angle in 0.0..(2.0 * PI), u in -0.8..0.8f64, v in -0.8..0.8f64) {
            let chart = monge4();
            let rot = chart.precompose_rotation(angle, u, v);
            let a = build_point_geometry(&chart, u, v).unwrap();
            let b = build_point_geometry(&rot, u, v).unwrap();
            prop_assert!((a.h - b.h).max_abs() < 1e-8);
            let na = a.b.norm_sq() + a.c.norm_sq();
            let nb = b.b.norm_sq() + b.c.norm_sq();
            prop_assert!((na - nb).abs() < 1e-8);
        }
    }
}
