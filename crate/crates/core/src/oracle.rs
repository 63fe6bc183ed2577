//! Slow, independent reference computations used to cross-check the closed
//! forms: a geodesic ODE integrator, dense θ sampling, numerically extracted
//! normal sections and a finite-difference check of chart jets.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forms::{angle_dist_pi, wrap_pi};
use crate::deviation::lateral;
use crate::fields::FieldKind;
use crate::frames::{build_point_geometry, PointGeometry};
use crate::linalg::{determinant, Mat};
use crate::jets::Jet3;
use crate::surface::SurfaceChart;
use crate::vector::Vector;
use core::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct GeodesicSolution {
    pub times: Vec<f64>,
    pub params: Vec<(f64, f64)>,
    pub points: Vec<Vector>,
    /// Ambient speed `|γ'(t)|` at each sample.
    pub speeds: Vec<f64>,
}

struct Metric {
    xu: Vector,
    xv: Vector,
    xuu: Vector,
    xuv: Vector,
    xvv: Vector,
}

fn metric_at(chart: &SurfaceChart, u: f64, v: f64) -> Result<Metric> {
    let jets = chart.eval_chart(u, v)?;
    let col = |i: usize, j: usize| {
        let mut w = Vector::zeros(jets.len());
        for (k, jet) in jets.iter().enumerate() {
            w[k] = jet.coeff(i, j);
        }
        w
    };
    Ok(Metric {
        xu: col(1, 0),
        xv: col(0, 1),
        xuu: col(2, 0),
        xuv: col(1, 1),
        xvv: col(0, 2),
    })
}

/// `(u'', v'') = −Γ(w, w)` with Christoffel symbols `Γ^k_ij = g^{kl} X_l·X_ij`.
fn geodesic_accel(chart: &SurfaceChart, s: [f64; 4]) -> Result<[f64; 4]> {
    let m = metric_at(chart, s[0], s[1])?;
    let (e, f, g) = (m.xu.dot(&m.xu), m.xu.dot(&m.xv), m.xv.dot(&m.xv));
    let det = e * g - f * f;
    if !(det > 0.0) {
        return Err(Error::SingularPointError {
            u: s[0],
            v: s[1],
            gram: det,
        });
    }
    let (du, dv) = (s[2], s[3]);
    let xww = m.xuu * (du * du) + m.xuv * (2.0 * du * dv) + m.xvv * (dv * dv);
    let (pu, pv) = (m.xu.dot(&xww), m.xv.dot(&xww));
    let au = (g * pu - f * pv) / det;
    let av = (-f * pu + e * pv) / det;
    Ok([du, dv, -au, -av])
}

/// RK4 integration of the unit-speed geodesic leaving `(u0, v0)` in the
/// direction `t(θ)` of the point frame, up to time `t_max`.
pub fn integrate_geodesic(
    chart: &SurfaceChart,
    u0: f64,
    v0: f64,
    theta: f64,
    t_max: f64,
    steps: usize,
) -> Result<GeodesicSolution> {
    let pg = build_point_geometry(chart, u0, v0)?;
    let (du, dv) = pg.param_velocity(theta);
    let mut s = [u0, v0, du, dv];
    let h = t_max / steps as f64;
    let mut out = GeodesicSolution {
        times: Vec::with_capacity(steps + 1),
        params: Vec::with_capacity(steps + 1),
        points: Vec::with_capacity(steps + 1),
        speeds: Vec::with_capacity(steps + 1),
    };
    let mut record = |t: f64, s: &[f64; 4]| -> Result<()> {
        let m = metric_at(chart, s[0], s[1])?;
        out.times.push(t);
        out.params.push((s[0], s[1]));
        out.points.push(chart.eval_point(s[0], s[1])?);
        out.speeds.push((m.xu * s[2] + m.xv * s[3]).norm());
        Ok(())
    };
    record(0.0, &s)?;
    let add = |a: &[f64; 4], k: &[f64; 4], c: f64| core::array::from_fn(|i| a[i] + c * k[i]);
    for n in 0..steps {
        let k1 = geodesic_accel(chart, s)?;
        let k2 = geodesic_accel(chart, add(&s, &k1, h / 2.0))?;
        let k3 = geodesic_accel(chart, add(&s, &k2, h / 2.0))?;
        let k4 = geodesic_accel(chart, add(&s, &k3, h))?;
        for i in 0..4 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        record(h * (n + 1) as f64, &s)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Zeros,
    Extrema,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseSearch {
    /// Sorted, in `[0, π)`.
    pub angles: Vec<f64>,
    /// The function is constant to within the tolerance on `[0, π]`.
    pub constant: bool,
}

/// Brute-force zeros or extrema of a π-periodic (or π-antiperiodic) function.
///
/// `const_tol` is absolute: variation below it counts as constant, and in
/// zero mode a local minimum of `|f|` that refines below it is a touching
/// zero. Angles closer than `1e-7` (mod π) are reported once.
pub fn dense_theta_search(
    f: impl Fn(f64) -> f64,
    mode: SearchMode,
    samples: usize,
    const_tol: f64,
) -> DenseSearch {
    let n = samples.max(8);
    let ts: Vec<f64> = (0..=n).map(|i| PI * i as f64 / n as f64).collect();
    let ys: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let (lo, hi) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));
    let floor = const_tol;
    if hi - lo <= floor {
        return DenseSearch {
            angles: Vec::new(),
            constant: true,
        };
    }

    let mut found = Vec::new();
    match mode {
        SearchMode::Zeros => {
            // overhang both ends so a root at 0 ≡ π is bracketed away from
            // the endpoint samples, whose values may be pure rounding noise
            let h = PI / n as f64;
            let ts: Vec<f64> = (-2..=n as isize + 2).map(|i| h * i as f64).collect();
            let ys: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
            let last = ts.len() - 1;
            for i in 0..last {
                let (a, b) = (ys[i], ys[i + 1]);
                if a == 0.0 {
                    found.push(ts[i]);
                } else if a.signum() != b.signum() && b != 0.0 {
                    found.push(bisect(&f, ts[i], ts[i + 1], a));
                }
            }
            // touching zeros: local minima of |f| that refine to the noise floor
            for i in 1..last {
                let (a, y, b) = (ys[i - 1].abs(), ys[i].abs(), ys[i + 1].abs());
                if y <= a && y <= b && y != 0.0 && ys[i - 1].signum() == ys[i + 1].signum() {
                    let t = golden(&|t| f(t).abs(), ts[i - 1], ts[i + 1]);
                    if f(t).abs() <= floor {
                        found.push(t);
                    }
                }
            }
        }
        SearchMode::Extrema => {
            // periodic: index n coincides with 0
            let m = n;
            let at = |i: isize| ys[i.rem_euclid(m as isize) as usize];
            for i in 0..m as isize {
                let (a, y, b) = (at(i - 1), at(i), at(i + 1));
                let is_max = y > a && y >= b;
                let is_min = y < a && y <= b;
                if is_max || is_min {
                    let sign = if is_max { -1.0 } else { 1.0 };
                    let h = PI / n as f64;
                    let t0 = ts[i as usize];
                    found.push(golden(&|t| sign * f(t), t0 - h, t0 + h));
                }
            }
        }
    }
    let mut angles: Vec<f64> = found.into_iter().map(wrap_pi).collect();
    angles.sort_by(f64::total_cmp);
    const MERGE: f64 = 1e-7;
    let mut merged: Vec<f64> = Vec::new();
    for t in angles {
        if merged.last().is_none_or(|&l| angle_dist_pi(l, t) > MERGE) {
            merged.push(t);
        }
    }
    if merged.len() >= 2 && angle_dist_pi(merged[0], *merged.last().unwrap()) <= MERGE {
        merged.pop();
    }
    DenseSearch {
        angles: merged,
        constant: false,
    }
}

/// `det[α(x,t1) α(x,t2) ∇α(x,x)]` in normal coordinates, evaluated directly
/// from the frame vectors (R⁵).
pub fn r5_rank_determinant(pg: &PointGeometry, theta: f64) -> f64 {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let cols = [pg.b1 * c + pg.b3 * s, pg.b3 * c + pg.b2 * s, pg.nabla_alpha(theta)];
    let mut m = Mat::zeros(3, 3);
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in pg.normal_coords(col).iter().enumerate() {
            m.a[i][j] = *x;
        }
    }
    determinant(&m)
}

/// Brute-force direction set of a field: the defining scalar is sampled from
/// frame vectors, bypassing the closed-form polynomials. `constant` marks an
/// identically satisfied equation (every direction belongs to the field).
pub fn dense_field_directions(pg: &PointGeometry, kind: FieldKind, samples: usize) -> DenseSearch {
    let nu = pg.normal_basis[0];
    let (mode, degree, f): (SearchMode, i32, alloc::boxed::Box<dyn Fn(f64) -> f64 + '_>) =
        match kind {
            FieldKind::ExtremalFrontal => {
                (SearchMode::Extrema, 2, alloc::boxed::Box::new(|t| pg.eta(t).norm_sq()))
            }
            FieldKind::ExtremalLateral => {
                (SearchMode::Extrema, 2, alloc::boxed::Box::new(|t| lateral(pg, t)))
            }
            FieldKind::Principal => {
                (SearchMode::Extrema, 1, alloc::boxed::Box::new(move |t| pg.eta(t).dot(&nu)))
            }
            FieldKind::Asymptotic => {
                (SearchMode::Zeros, 1, alloc::boxed::Box::new(move |t| pg.eta(t).dot(&nu)))
            }
            FieldKind::StrongPrincipal => (
                SearchMode::Zeros,
                3,
                alloc::boxed::Box::new(|t| {
                    let a = pg.normal_coords(&pg.alpha_jv_v(t));
                    let d = pg.normal_coords(&pg.nabla_alpha(t));
                    a[0] * d[1] - a[1] * d[0]
                }),
            ),
            FieldKind::AsymptoticR5 => {
                (SearchMode::Zeros, 4, alloc::boxed::Box::new(|t| r5_rank_determinant(pg, t)))
            }
        };
    let tol = 1e-9 * libm::pow(pg.alpha_scale(), degree as f64);
    let res = dense_theta_search(&f, mode, samples, tol);
    if res.constant && mode == SearchMode::Zeros && f(0.0).abs() > tol {
        // a nonzero constant has no zeros
        return DenseSearch {
            angles: Vec::new(),
            constant: false,
        };
    }
    res
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimization on `[a, b]`.
fn golden(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-12 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Samples of the normal section through `(u0, v0)` in direction `θ`, i.e.
/// the curve `{X : (X − m)·Jv = 0}` with `Jv = t(θ + π/2)`.
///
/// The curve is parametrized by `s = (X − m)·v`, which is regular near `m`;
/// `arc` holds the signed arc length, accumulated from chords.
#[derive(Clone, Debug)]
pub struct NormalSection {
    pub s: Vec<f64>,
    pub arc: Vec<f64>,
    pub params: Vec<(f64, f64)>,
    pub points: Vec<Vector>,
}

struct SectionSolver<'a> {
    chart: &'a SurfaceChart,
    m: Vector,
    v: Vector,
    jv: Vector,
}

impl SectionSolver<'_> {
    /// Newton on `((X−m)·v − s, (X−m)·Jv) = 0` from the guess `(u, v)`.
    fn solve(&self, s: f64, mut p: (f64, f64), step: usize) -> Result<(f64, f64)> {
        for _ in 0..50 {
            let jets = self.chart.eval_chart(p.0, p.1)?;
            let val = |f: fn(&Jet3) -> f64| {
                let mut w = Vector::zeros(jets.len());
                for (k, j) in jets.iter().enumerate() {
                    w[k] = f(j);
                }
                w
            };
            let d = val(|j| j.value()) - self.m;
            let (xu, xv) = (val(|j| j.coeff(1, 0)), val(|j| j.coeff(0, 1)));
            let r = [d.dot(&self.v) - s, d.dot(&self.jv)];
            if libm::hypot(r[0], r[1]) <= 1e-15 * (1.0 + s.abs()) {
                return Ok(p);
            }
            let a = [[xu.dot(&self.v), xv.dot(&self.v)], [xu.dot(&self.jv), xv.dot(&self.jv)]];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det.abs() < 1e-14 {
                break;
            }
            let du = (r[0] * a[1][1] - r[1] * a[0][1]) / det;
            let dv = (a[0][0] * r[1] - a[1][0] * r[0]) / det;
            p = (p.0 - du, p.1 - dv);
            if libm::hypot(du, dv) <= 1e-16 * (1.0 + libm::hypot(p.0, p.1)) {
                return Ok(p);
            }
        }
        Err(Error::ContinuationFailure { step })
    }
}

/// Traces the normal section for `s ∈ [−half_len, half_len]` in `2·steps`
/// equal increments.
pub fn normal_section(
    chart: &SurfaceChart,
    u0: f64,
    v0: f64,
    theta: f64,
    half_len: f64,
    steps: usize,
) -> Result<NormalSection> {
    let pg = build_point_geometry(chart, u0, v0)?;
    let solver = SectionSolver {
        chart,
        m: pg.m,
        v: pg.tangent(theta),
        jv: pg.tangent(theta + PI / 2.0),
    };
    let (pu, pv) = pg.param_velocity(theta);
    let h = half_len / steps as f64;
    let branch = |sign: f64| -> Result<Vec<(f64, (f64, f64))>> {
        let mut out = alloc::vec![(0.0, (u0, v0))];
        let mut prev = (u0, v0);
        let mut vel = (pu * sign * h, pv * sign * h);
        for k in 1..=steps {
            let s = sign * h * k as f64;
            let guess = (prev.0 + vel.0, prev.1 + vel.1);
            let p = solver.solve(s, guess, k)?;
            vel = (p.0 - prev.0, p.1 - prev.1);
            prev = p;
            out.push((s, p));
        }
        Ok(out)
    };
    let back = branch(-1.0)?;
    let fwd = branch(1.0)?;
    let ordered: Vec<(f64, (f64, f64))> =
        back.into_iter().rev().chain(fwd.into_iter().skip(1)).collect();

    let mut sec = NormalSection {
        s: Vec::new(),
        arc: Vec::new(),
        params: Vec::new(),
        points: Vec::new(),
    };
    for (s, p) in &ordered {
        sec.s.push(*s);
        sec.params.push(*p);
        sec.points.push(chart.eval_point(p.0, p.1)?);
    }
    let mut arc = alloc::vec![0.0; sec.points.len()];
    let mid = steps;
    for i in mid + 1..arc.len() {
        arc[i] = arc[i - 1] + (sec.points[i] - sec.points[i - 1]).norm();
    }
    for i in (0..mid).rev() {
        arc[i] = arc[i + 1] - (sec.points[i + 1] - sec.points[i]).norm();
    }
    sec.arc = arc;
    Ok(sec)
}

/// Curvature and torsion at `m` of the normal section in R⁴.
///
/// Derivatives in `s` use seven-point central stencils with spacing `h`.
/// Torsion is computed in the oriented 3-space basis `(v, ν1, ν2)`.
pub fn section_frenet(
    chart: &SurfaceChart,
    u0: f64,
    v0: f64,
    theta: f64,
    h: f64,
) -> Result<(f64, f64)> {
    if chart.ambient_dim != 4 {
        return Err(Error::DimensionError {
            expected: "ambient dimension 4".into(),
            found: chart.ambient_dim,
        });
    }
    let pg = build_point_geometry(chart, u0, v0)?;
    let sec = normal_section(chart, u0, v0, theta, 3.0 * h, 3)?;
    let v = pg.tangent(theta);
    let basis = [v, pg.normal_basis[0], pg.normal_basis[1]];
    let coords: Vec<[f64; 3]> = sec
        .points
        .iter()
        .map(|p| {
            let d = *p - pg.m;
            [d.dot(&basis[0]), d.dot(&basis[1]), d.dot(&basis[2])]
        })
        .collect();
    let f = |k: usize, w: &[f64; 7]| -> f64 { (0..7).map(|i| w[i] * coords[i][k]).sum() };
    const D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
    const D2: [f64; 7] = [1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0];
    const D3: [f64; 7] = [1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0];
    let d1: [f64; 3] = core::array::from_fn(|k| f(k, &D1) / h);
    let d2: [f64; 3] = core::array::from_fn(|k| f(k, &D2) / (h * h));
    let d3: [f64; 3] = core::array::from_fn(|k| f(k, &D3) / (h * h * h));
    let cross = [
        d1[1] * d2[2] - d1[2] * d2[1],
        d1[2] * d2[0] - d1[0] * d2[2],
        d1[0] * d2[1] - d1[1] * d2[0],
    ];
    let cn2: f64 = cross.iter().map(|x| x * x).sum();
    let speed = libm::sqrt(d1.iter().map(|x| x * x).sum::<f64>());
    let kappa = libm::sqrt(cn2) / (speed * speed * speed);
    let tau = (cross[0] * d3[0] + cross[1] * d3[1] + cross[2] * d3[2]) / cn2;
    Ok((kappa, tau))
}

/// Worst relative error per derivative order between chart jets and
/// central finite differences of plain evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct FdReport {
    /// Index `k` holds the worst error over all order-`k` coefficients.
    pub max_rel_err: [f64; 4],
    /// The same, per chart component.
    pub per_component: Vec<[f64; 4]>,
}

/// Finite-difference check of `eval_chart` at `(u0, v0)`.
///
/// Each mixed derivative is a tensor product of second-order central
/// stencils, improved by one Richardson step between `h` and `h/2`.
pub fn fd_jet_check(chart: &SurfaceChart, u0: f64, v0: f64, h: f64) -> Result<FdReport> {
    const S0: &[(f64, f64)] = &[(0.0, 1.0)];
    const S1: &[(f64, f64)] = &[(-1.0, -0.5), (1.0, 0.5)];
    const S2: &[(f64, f64)] = &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)];
    const S3: &[(f64, f64)] = &[(-2.0, -0.5), (-1.0, 1.0), (1.0, -1.0), (2.0, 0.5)];
    let stencil = |k: usize| [S0, S1, S2, S3][k];

    let jets = chart.eval_chart(u0, v0)?;
    let mut worst = [0.0f64; 4];
    let mut per_component = Vec::with_capacity(jets.len());
    for (comp, jet) in chart.components.iter().zip(&jets) {
        let mut mine = [0.0f64; 4];
        for (idx, &(i, j)) in crate::jets::MULTI_INDEX.iter().enumerate() {
            let fd_at = |h: f64| -> Result<f64> {
                let mut acc = 0.0;
                for &(a, wa) in stencil(i) {
                    for &(b, wb) in stencil(j) {
                        acc += wa * wb * comp.eval(u0 + a * h, v0 + b * h)?;
                    }
                }
                Ok(acc / libm::pow(h, (i + j) as f64))
            };
            let fd = if i + j == 0 {
                fd_at(h)?
            } else {
                (4.0 * fd_at(h / 2.0)? - fd_at(h)?) / 3.0
            };
            let exact = jet.coeffs()[idx];
            let err = (exact - fd).abs() / exact.abs().max(1.0);
            mine[i + j] = mine[i + j].max(err);
        }
        for k in 0..4 {
            worst[k] = worst[k].max(mine[k]);
        }
        per_component.push(mine);
    }
    Ok(FdReport {
        max_rel_err: worst,
        per_component,
    })
}
