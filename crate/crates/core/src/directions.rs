//! Distinguished tangent directions at a point, found as roots of binary
//! forms in `(cos θ, sin θ)`.
//!
//! | set               | equation                                   | degree |
//! |-------------------|--------------------------------------------|--------|
//! | extremal frontal  | `η·η' = 0`                                 | 4      |
//! | extremal lateral  | `d/dθ [α(Jv,v)·η] = 0`                     | 4      |
//! | principal (R³)    | `α(Jv,v) = 0`                              | 2      |
//! | asymptotic (R³)   | `η = 0`                                    | 2      |
//! | strong principal  | `det(α(x,Jx), ∇α(x,x)) = 0` (R⁴)           | 5      |
//! | asymptotic (R⁵)   | `det(α(x,t1), α(x,t2), ∇α(x,x)) = 0`       | 5      |

use alloc::vec::Vec;

use crate::deviation::deviation_report;
use crate::error::{Error, Result};
use crate::forms::{solve_form, Form, FormRoots, SolveOptions};
use crate::frames::{classify_point, PointGeometry, PointTag};
use crate::linalg::{singular_values, Mat};
use crate::vector::Vector;

/// Default relative residual accepted for a polished root.
pub const ROOT_TOL: f64 = 1e-9;

/// Coefficient threshold, relative to `(|H|+|B|+|C|)^k`, below which a form
/// is treated as identically zero.
const ZERO_REL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionTag {
    ExtremalFrontal,
    ExtremalLateral,
    Principal,
    Asymptotic,
    StrongPrincipal,
    AsymptoticR5,
}

impl DirectionTag {
    pub fn as_str(self) -> &'static str {
        match self {
            DirectionTag::ExtremalFrontal => "extremal_frontal",
            DirectionTag::ExtremalLateral => "extremal_lateral",
            DirectionTag::Principal => "principal",
            DirectionTag::Asymptotic => "asymptotic",
            DirectionTag::StrongPrincipal => "strong_principal",
            DirectionTag::AsymptoticR5 => "asymptotic_r5",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    /// Strictly increasing, in `[0, π)`.
    pub angles: Vec<f64>,
    pub tags: Vec<DirectionTag>,
    pub residuals: Vec<f64>,
    /// Every direction solves the equation; `angles` is then empty.
    pub identically_zero: bool,
}

impl DirectionSet {
    fn from_roots(roots: FormRoots, tag: DirectionTag, extrema_only: bool) -> Self {
        let kept: Vec<_> = roots
            .roots
            .into_iter()
            .filter(|r| !extrema_only || r.crossing)
            .collect();
        DirectionSet {
            angles: kept.iter().map(|r| r.theta).collect(),
            tags: alloc::vec![tag; kept.len()],
            residuals: kept.iter().map(|r| r.residual).collect(),
            identically_zero: roots.identically_zero,
        }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

fn options(pg: &PointGeometry, power: i32, tol: f64) -> SolveOptions {
    SolveOptions {
        zero_threshold: ZERO_REL * libm::pow(pg.alpha_scale(), power as f64),
        tol,
        ..SolveOptions::default()
    }
}

fn need_dim(pg: &PointGeometry, n: usize) -> Result<()> {
    if pg.dim() == n {
        Ok(())
    } else {
        Err(Error::DimensionError {
            expected: alloc::format!("ambient dimension {n}"),
            found: pg.dim(),
        })
    }
}

/// `η(θ)·α(Jv,v)` as a quartic form, i.e. a quarter of `d|η|²/dθ`.
///
/// In `p = tanθ` its coefficients are
/// `hc+bc, −2hb+2cc−2bb, −6bc, −2hb−2cc+2bb, −hc+bc`.
pub fn extremal_frontal_form(pg: &PointGeometry) -> Form {
    let (h, b, c) = (pg.h, pg.b, pg.c);
    let (hb, hc, bb, cc, bc) = (h.dot(&b), h.dot(&c), b.dot(&b), c.dot(&c), b.dot(&c));
    let (c2, s2, one) = (Form::cos2(), Form::sin2(), Form::one2());
    (s2 * one).scale(-hb)
        + (c2 * one).scale(hc)
        + (s2 * c2).scale(cc - bb)
        + (c2 * c2 - s2 * s2).scale(bc)
}

/// Half the θ-derivative of `α(Jv,v)·η`:
/// `−hb cos2θ − hc sin2θ + (cc−bb) cos4θ − 2bc sin4θ`.
pub fn extremal_lateral_form(pg: &PointGeometry) -> Form {
    let (h, b, c) = (pg.h, pg.b, pg.c);
    let (hb, hc, bb, cc, bc) = (h.dot(&b), h.dot(&c), b.dot(&b), c.dot(&c), b.dot(&c));
    let (c2, s2, one) = (Form::cos2(), Form::sin2(), Form::one2());
    let c4 = c2 * c2 - s2 * s2;
    let s4 = (s2 * c2).scale(2.0);
    (c2 * one).scale(-hb) + (s2 * one).scale(-hc) + c4.scale(cc - bb) + s4.scale(-2.0 * bc)
}

pub fn extremal_frontal_directions(pg: &PointGeometry, tol: f64) -> DirectionSet {
    let roots = solve_form(&extremal_frontal_form(pg), &options(pg, 2, tol));
    DirectionSet::from_roots(roots, DirectionTag::ExtremalFrontal, true)
}

pub fn extremal_lateral_directions(pg: &PointGeometry, tol: f64) -> DirectionSet {
    let roots = solve_form(&extremal_lateral_form(pg), &options(pg, 2, tol));
    DirectionSet::from_roots(roots, DirectionTag::ExtremalLateral, true)
}

/// Principal and asymptotic directions of a surface in R³.
#[derive(Debug, Clone, PartialEq)]
pub struct R3Directions {
    pub principal: DirectionSet,
    pub asymptotic: DirectionSet,
}

/// `(−b sin2θ + c cos2θ, h + b cos2θ + c sin2θ)` with `h = H·N` etc.
pub fn r3_forms(pg: &PointGeometry) -> Result<(Form, Form)> {
    need_dim(pg, 3)?;
    let nu = pg.normal_basis[0];
    let (h, b, c) = (pg.h.dot(&nu), pg.b.dot(&nu), pg.c.dot(&nu));
    let (c2, s2) = (Form::cos2(), Form::sin2());
    Ok((
        s2.scale(-b) + c2.scale(c),
        Form::one2().scale(h) + c2.scale(b) + s2.scale(c),
    ))
}

pub fn r3_special_directions(pg: &PointGeometry, tol: f64) -> Result<R3Directions> {
    let (principal, asymptotic) = r3_forms(pg)?;
    let opts = options(pg, 1, tol);
    Ok(R3Directions {
        principal: DirectionSet::from_roots(
            solve_form(&principal, &opts),
            DirectionTag::Principal,
            false,
        ),
        asymptotic: DirectionSet::from_roots(
            solve_form(&asymptotic, &opts),
            DirectionTag::Asymptotic,
            false,
        ),
    })
}

/// Scalar forms of the components of `α(Jv,v)` and `∇α(v,v)` in the normal
/// basis.
fn normal_forms(pg: &PointGeometry) -> (Vec<Form>, Vec<Form>) {
    let (c2, s2) = (Form::cos2(), Form::sin2());
    let k = pg.nabla_alpha_cubic();
    pg.normal_basis
        .iter()
        .map(|nu| {
            let a = s2.scale(-pg.b.dot(nu)) + c2.scale(pg.c.dot(nu));
            let d = Form::new(&[k[0].dot(nu), k[1].dot(nu), k[2].dot(nu), k[3].dot(nu)]);
            (a, d)
        })
        .unzip()
}

/// `det(α(x,Jx), ∇α(x,x))` in the oriented normal plane (R⁴).
pub fn strong_principal_form(pg: &PointGeometry) -> Result<Form> {
    need_dim(pg, 4)?;
    let (a, d) = normal_forms(pg);
    Ok(a[0] * d[1] - a[1] * d[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RibCase {
    /// `Jb·c ≠ 0`
    Generic,
    /// `∇α(x,x) = 0`
    CZero,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RibStatus {
    Accepted,
    Rejected(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RibResiduals {
    /// `max |u·t_i|`
    pub tangential: f64,
    /// `|x·x − u·α(x,x)|`
    pub contact: f64,
    /// `|u·α(x,Jx)|`
    pub cross: f64,
    /// `|d_{3,u}(x)|`
    pub d3: f64,
}

impl RibResiduals {
    pub fn max(&self) -> f64 {
        self.tangential.max(self.contact).max(self.cross).max(self.d3)
    }
}

/// A strong principal direction with the center `m + u` of the focal
/// hypersphere it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RibResult {
    pub theta: f64,
    pub u: Option<Vector>,
    pub case: RibCase,
    pub status: RibStatus,
    pub residuals: RibResiduals,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrongPrincipalSet {
    pub directions: DirectionSet,
    /// One entry per angle of `directions`, including rejected roots.
    pub ribs: Vec<RibResult>,
}

/// Relative tolerance for the degeneracy tests of the rib construction.
const RIB_DEGEN: f64 = 1e-8;

pub fn strong_principal_directions(pg: &PointGeometry, tol: f64) -> Result<StrongPrincipalSet> {
    let form = strong_principal_form(pg)?;
    let roots = solve_form(&form, &options(pg, 3, tol));
    let directions = DirectionSet::from_roots(roots, DirectionTag::StrongPrincipal, false);
    let ribs = directions
        .angles
        .iter()
        .map(|&th| rib_center(pg, th))
        .collect();
    Ok(StrongPrincipalSet { directions, ribs })
}

/// Focal center offset `u` for the direction `θ` (R⁴).
pub fn rib_center(pg: &PointGeometry, theta: f64) -> RibResult {
    let s1 = pg.alpha_scale();
    let b = pg.eta(theta);
    let c = pg.nabla_alpha(theta);
    let n = pg.alpha_jv_v(theta);
    let jb = pg.j_normal(&b);
    let bb = b.norm_sq();
    let reject = |case, why| RibResult {
        theta,
        u: None,
        case,
        status: RibStatus::Rejected(why),
        residuals: RibResiduals::default(),
    };
    if libm::sqrt(bb) <= RIB_DEGEN * s1 {
        return reject(RibCase::None, "condition 1 violated: α(x,x)=0");
    }
    let jbc = jb.dot(&c);
    let (u, case) = if c.norm() <= RIB_DEGEN * s1 * s1 {
        let bn = b.dot(&n);
        let jbn = jb.dot(&n);
        if bn.abs() <= RIB_DEGEN * libm::sqrt(bb) * n.norm() {
            (b * (1.0 / bb), RibCase::CZero)
        } else if jbn.abs() > RIB_DEGEN * libm::sqrt(bb) * n.norm() {
            let r = -bn / (bb * jbn);
            (b * (1.0 / bb) + jb * r, RibCase::CZero)
        } else {
            return reject(RibCase::CZero, "condition 2 violated: α(x,Jx) ∥ α(x,x)");
        }
    } else if jbc.abs() > RIB_DEGEN * libm::sqrt(bb) * c.norm() {
        let u = b * (1.0 / bb) - jb * (b.dot(&c) / (bb * jbc));
        (u, RibCase::Generic)
    } else {
        return reject(RibCase::None, "condition 2 violated: ∇α(x,x) ∥ α(x,x)");
    };
    RibResult {
        theta,
        u: Some(u),
        case,
        status: RibStatus::Accepted,
        residuals: rib_residuals(pg, &u, theta),
    }
}

pub fn rib_residuals(pg: &PointGeometry, u: &Vector, theta: f64) -> RibResiduals {
    RibResiduals {
        tangential: u.dot(&pg.t1).abs().max(u.dot(&pg.t2).abs()),
        contact: (1.0 - u.dot(&pg.eta(theta))).abs(),
        cross: u.dot(&pg.alpha_jv_v(theta)).abs(),
        d3: d3_contact_value(pg, u, theta, ContactMode::SquaredDistance).abs(),
    }
}

/// The same center written through normal curvature and torsion:
/// `u = b/κ² − κ'/(κ³τ) Jb`. `None` where `τ` is zero or undefined.
pub fn rib_center_curvature_form(pg: &PointGeometry, theta: f64) -> Option<Vector> {
    let rep = deviation_report(pg, theta);
    let tau = rep.tau?;
    if tau.abs() <= RIB_DEGEN * pg.alpha_scale() {
        return None;
    }
    let b = pg.eta(theta);
    let k = rep.kappa;
    Some(b * (1.0 / (k * k)) - pg.j_normal(&b) * (rep.kappa_prime / (k * k * k * tau)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UmbilicFocus {
    Point(Vector),
    /// Umbilic point: every `u` with `u·b = 1` is a focus.
    AffineLine { b: Vector },
    None(&'static str),
}

/// Residuals `1 − u·b1`, `1 − u·b2`, `u·b3` of the corank-2 conditions.
pub fn umbilic_focus_residuals(pg: &PointGeometry, u: &Vector) -> [f64; 3] {
    [1.0 - u.dot(&pg.b1), 1.0 - u.dot(&pg.b2), u.dot(&pg.b3)]
}

/// Center offset of the focal hypersphere with corank-2 contact (R⁴).
pub fn umbilic_focus(pg: &PointGeometry, tol: f64) -> Result<UmbilicFocus> {
    need_dim(pg, 4)?;
    let cls = classify_point(pg, tol);
    Ok(match cls.tag {
        PointTag::Flat => UmbilicFocus::None("flat"),
        PointTag::Umbilic => UmbilicFocus::AffineLine { b: pg.h },
        PointTag::Inflection => UmbilicFocus::None("inflection"),
        PointTag::Generic => UmbilicFocus::None("not semiumbilic"),
        PointTag::Semiumbilic => {
            let jb = pg.j_normal(&cls.b_aligned);
            UmbilicFocus::Point(jb * (1.0 / pg.h.dot(&jb)))
        }
    })
}

/// `α(x,t1)`, `α(x,t2)` and `∇α(x,x)` components in the normal basis (R⁵).
pub fn asymptotic_r5_form(pg: &PointGeometry) -> Result<Form> {
    need_dim(pg, 5)?;
    let (cs, sn) = (Form::cos(), Form::sin());
    let k = pg.nabla_alpha_cubic();
    let mut cols: [[Form; 3]; 3] = [[Form::zero(0); 3]; 3];
    for (i, nu) in pg.normal_basis.iter().enumerate() {
        let (b1, b2, b3) = (pg.b1.dot(nu), pg.b2.dot(nu), pg.b3.dot(nu));
        cols[0][i] = cs.scale(b1) + sn.scale(b3);
        cols[1][i] = cs.scale(b3) + sn.scale(b2);
        cols[2][i] = Form::new(&[k[0].dot(nu), k[1].dot(nu), k[2].dot(nu), k[3].dot(nu)]);
    }
    let m = |r: usize, c: usize| cols[c][r];
    Ok(m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)))
}

/// `σ_min/σ_max` of the 3×3 matrix `[α(x,t1) α(x,t2) ∇α(x,x)]` (R⁵).
pub fn asymptotic_r5_rank_ratio(pg: &PointGeometry, theta: f64) -> f64 {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let cols = [
        pg.b1 * c + pg.b3 * s,
        pg.b3 * c + pg.b2 * s,
        pg.nabla_alpha(theta),
    ];
    let mut m = Mat::zeros(3, 3);
    for (j, col) in cols.iter().enumerate() {
        for (i, nu) in pg.normal_basis.iter().enumerate() {
            m.a[i][j] = col.dot(nu);
        }
    }
    let sv = singular_values(&m);
    if sv[0] == 0.0 {
        0.0
    } else {
        sv[2] / sv[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticR5Set {
    pub directions: DirectionSet,
    /// `σ_min/σ_max` per angle.
    pub rank_ratios: Vec<f64>,
}

pub fn asymptotic_directions_r5(pg: &PointGeometry, tol: f64) -> Result<AsymptoticR5Set> {
    let form = asymptotic_r5_form(pg)?;
    let roots = solve_form(&form, &options(pg, 4, tol));
    let directions = DirectionSet::from_roots(roots, DirectionTag::AsymptoticR5, false);
    let rank_ratios = directions
        .angles
        .iter()
        .map(|&t| asymptotic_r5_rank_ratio(pg, t))
        .collect();
    Ok(AsymptoticR5Set {
        directions,
        rank_ratios,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactMode {
    /// `d_{3,u}`: third-order squared-distance function to `m + u`.
    SquaredDistance,
    /// `f_{3,u}`: third-order height function along `u`.
    Height,
}

/// Third-order contact function at `x = t(θ)`.
pub fn d3_contact_value(pg: &PointGeometry, u: &Vector, theta: f64, mode: ContactMode) -> f64 {
    let x = pg.tangent(theta);
    let xc = [libm::cos(theta), libm::sin(theta)];
    let a = pg.eta(theta);
    let ut = [u.dot(&pg.t1), u.dot(&pg.t2)];
    let un = pg.normal_part(u);
    let cubic = pg.alpha_pair(ut, xc).dot(&a);
    let nab = un.dot(&pg.nabla_alpha(theta));
    match mode {
        ContactMode::SquaredDistance => {
            -2.0 * u.dot(&x) + x.dot(&x) - u.dot(&a) + cubic / 3.0 - nab / 3.0
        }
        ContactMode::Height => u.dot(&x) + 0.5 * u.dot(&a) - cubic / 6.0 + nab / 6.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::build_point_geometry;
    use crate::surface::{Domain, SurfaceChart};
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
    use proptest::prelude::*;

    fn chart(comps: &[&str]) -> SurfaceChart {
        SurfaceChart::from_strs("t", comps, Domain::new((-3.0, 3.0), (-3.0, 3.0))).unwrap()
    }

    fn pg(comps: &[&str], u: f64, v: f64) -> PointGeometry {
        build_point_geometry(&chart(comps), u, v).unwrap()
    }

    const SPHERE: [&str; 3] = ["cos(u)*cos(v)", "sin(u)*cos(v)", "sin(v)"];
    const CYL: [&str; 3] = ["cos(u)", "sin(u)", "v"];
    const R5: [&str; 5] = ["u^2*v^2", "u+v", "u-v", "(u^2+v^2)/2", "(u^2-v^2)/2"];
    const MONGE: [&str; 4] = ["u", "v", "u^2 + 0.3*u*v^2 - v^3/2", "u*v + 0.2*u^3 + v^2/4"];

    fn assert_angles(set: &DirectionSet, want: &[f64], tol: f64) {
        assert_eq!(set.len(), want.len(), "{:?}", set.angles);
        for (g, w) in set.angles.iter().zip(want) {
            assert!((g - w).abs() < tol, "{:?} vs {want:?}", set.angles);
        }
    }

    #[test]
    fn frontal_form_matches_printed_quartic() {
        let p = pg(&MONGE, 0.3, -0.2);
        let f = extremal_frontal_form(&p);
        let (h, b, c) = (p.h, p.b, p.c);
        let (hb, hc, bb, cc, bc) = (h.dot(&b), h.dot(&c), b.dot(&b), c.dot(&c), b.dot(&c));
        let want = [
            hc + bc,
            -2.0 * hb + 2.0 * cc - 2.0 * bb,
            -2.0 * bc - 4.0 * bc,
            -2.0 * cc + 2.0 * bb - 2.0 * hb,
            -hc + bc,
        ];
        for (g, w) in f.coeffs().iter().zip(want) {
            assert!((g - w).abs() < 1e-14);
        }
        for th in [0.1, 1.0, 2.2] {
            assert!((f.eval(th) - p.eta(th).dot(&p.alpha_jv_v(th))).abs() < 1e-13);
        }
    }

    #[test]
    fn frontal_sets() {
        assert!(extremal_frontal_directions(&pg(&SPHERE, 0.2, 0.1), ROOT_TOL).identically_zero);
        let r5 = extremal_frontal_directions(&pg(&R5, 0.0, 0.0), ROOT_TOL);
        assert_angles(&r5, &[0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4], 1e-12);
        let cyl = extremal_frontal_directions(&pg(&CYL, 0.5, 0.0), ROOT_TOL);
        assert_angles(&cyl, &[0.0, FRAC_PI_2], 1e-12);
    }

    #[test]
    fn cylinder_lateral() {
        let cyl = extremal_lateral_directions(&pg(&CYL, 0.5, 0.0), ROOT_TOL);
        let a = libm::atan(1.0 / libm::sqrt(3.0));
        assert_angles(&cyl, &[a, PI - a], 1e-10);
        assert!(extremal_lateral_directions(&pg(&SPHERE, 0.5, 0.3), ROOT_TOL).identically_zero);
    }

    #[test]
    fn r3_split() {
        let cyl = r3_special_directions(&pg(&CYL, 0.5, 0.0), ROOT_TOL).unwrap();
        assert_angles(&cyl.principal, &[0.0, FRAC_PI_2], 1e-12);
        assert_angles(&cyl.asymptotic, &[FRAC_PI_2], 1e-12);
        let sph = r3_special_directions(&pg(&SPHERE, 0.5, 0.0), ROOT_TOL).unwrap();
        assert!(sph.principal.identically_zero && sph.asymptotic.is_empty());
        let saddle = r3_special_directions(&pg(&["u", "v", "(u^2-v^2)/2"], 0.0, 0.0), ROOT_TOL)
            .unwrap();
        assert_angles(&saddle.principal, &[0.0, FRAC_PI_2], 1e-12);
        assert_angles(&saddle.asymptotic, &[FRAC_PI_4, 3.0 * FRAC_PI_4], 1e-12);
        assert!(r3_special_directions(&pg(&MONGE, 0.0, 0.0), ROOT_TOL).is_err());
    }

    #[test]
    fn clifford_torus_strong_principal_and_focus() {
        let p = pg(&["cos(u)", "sin(u)", "cos(v)", "sin(v)"], 0.4, -1.1);
        let sp = strong_principal_directions(&p, ROOT_TOL).unwrap();
        assert!(sp.directions.identically_zero);
        assert!(sp.ribs.is_empty());

        let p = pg(&["1.5*cos(u)", "1.5*sin(u)", "0.8*cos(v)", "0.8*sin(v)"], 0.4, -1.1);
        match umbilic_focus(&p, crate::frames::CLASSIFY_TOL).unwrap() {
            UmbilicFocus::Point(u) => {
                assert!((p.m + u).max_abs() < 1e-12, "{u:?}");
                for r in umbilic_focus_residuals(&p, &u) {
                    assert!(r.abs() < 1e-12);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn focus_none_and_line() {
        let g = pg(&MONGE, 0.3, 0.2);
        assert_eq!(umbilic_focus(&g, crate::frames::CLASSIFY_TOL).unwrap(), UmbilicFocus::None("not semiumbilic"));
        // sphere of R³ sitting in R⁴ is umbilic
        let s = pg(&["cos(u)*cos(v)", "sin(u)*cos(v)", "sin(v)", "0"], 0.2, 0.1);
        assert!(matches!(umbilic_focus(&s, crate::frames::CLASSIFY_TOL).unwrap(), UmbilicFocus::AffineLine { .. }));
        // a cylinder over a plane curve is an inflection point everywhere
        let i = pg(&["u", "v", "u^2", "0"], 0.3, 0.1);
        assert_eq!(umbilic_focus(&i, crate::frames::CLASSIFY_TOL).unwrap(), UmbilicFocus::None("inflection"));
    }

    #[test]
    fn monge_ribs_verify() {
        for (u, v) in [(0.0, 0.0), (0.3, -0.4), (-0.7, 0.2)] {
            let p = pg(&MONGE, u, v);
            let sp = strong_principal_directions(&p, ROOT_TOL).unwrap();
            assert!(!sp.directions.is_empty() && sp.directions.len() <= 5);
            for rib in &sp.ribs {
                assert_eq!(rib.status, RibStatus::Accepted);
                assert!(rib.residuals.max() < 1e-8, "{rib:?}");
                let alt = rib_center_curvature_form(&p, rib.theta).unwrap();
                assert!((alt - rib.u.unwrap()).max_abs() < 1e-8 * (1.0 + alt.norm()));
            }
        }
    }

    #[test]
    fn graph_in_monge_form() {
        let p = pg(&["u", "v", "u^2/2", "u*v"], 0.0, 0.0);
        let sp = strong_principal_directions(&p, ROOT_TOL).unwrap();
        for rib in &sp.ribs {
            if rib.status == RibStatus::Accepted {
                assert!(rib.residuals.max() < 1e-8);
            }
        }
    }

    #[test]
    fn rejects_when_alpha_vanishes() {
        // X_uu ≡ 0, so α(t1,t1) and ∇α(t1,t1) vanish and θ=0 solves the quintic
        let p = pg(&["u", "v", "v^2 + v^3", "u*v"], 0.0, 0.0);
        let sp = strong_principal_directions(&p, ROOT_TOL).unwrap();
        let r0 = sp.ribs.iter().find(|r| r.theta.abs() < 1e-9).expect("θ=0 root");
        assert_eq!(r0.status, RibStatus::Rejected("condition 1 violated: α(x,x)=0"));
    }

    #[test]
    fn contact_function_examples() {
        let p = pg(&MONGE, 0.1, 0.2);
        let zero = Vector::zeros(4);
        assert!((d3_contact_value(&p, &zero, 0.7, ContactMode::SquaredDistance) - 1.0).abs() < 1e-15);
        let s = pg(&SPHERE, 0.3, 0.2);
        let u = -s.m;
        for th in [0.0, 1.0, 2.0] {
            assert!(d3_contact_value(&s, &u, th, ContactMode::SquaredDistance).abs() < 1e-12);
        }
    }

    #[test]
    fn r5_rank_check() {
        let p = pg(&R5, 0.3, 0.7);
        let set = asymptotic_directions_r5(&p, ROOT_TOL).unwrap();
        assert!(!set.directions.is_empty() && set.directions.len() <= 5);
        for r in &set.rank_ratios {
            assert!(*r < 1e-8, "{r}");
        }
        let plane = pg(&["u", "v", "0", "0", "0"], 0.0, 0.0);
        assert!(asymptotic_directions_r5(&plane, ROOT_TOL).unwrap().directions.identically_zero);
    }

    #[test]
    fn dimension_errors() {
        let p = pg(&SPHERE, 0.1, 0.1);
        assert!(matches!(strong_principal_directions(&p, ROOT_TOL), Err(Error::DimensionError { .. })));
        assert!(matches!(asymptotic_directions_r5(&p, ROOT_TOL), Err(Error::DimensionError { .. })));
        assert!(matches!(umbilic_focus(&p, ROOT_TOL), Err(Error::DimensionError { .. })));
    }

    /// Normal curvatures at the lateral-extremal directions of a quadric
    /// `z = (k1 u² + k2 v²)/2` against the closed radical form.
    #[test]
    fn lateral_normal_curvatures_radical_form() {
        let (k1, k2) = (2.0, 1.0);
        let z = alloc::format!("({k1}*u^2 + {k2}*v^2)/2");
        let p = pg(&["u", "v", &z], 0.0, 0.0);
        let set = extremal_lateral_directions(&p, ROOT_TOL);
        let disc = libm::sqrt(9.0 * (k2 * k2 + k1 * k1) - 14.0 * k1 * k2);
        let mut want: Vec<f64> = [1.0, -1.0]
            .iter()
            .map(|sg| (k2 * k1 - 3.0 * k2 * k2 + sg * k2 * disc) / (3.0 * k1 - 5.0 * k2 + sg * disc))
            .collect();
        want.sort_by(f64::total_cmp);
        let nu = p.normal_basis[0];
        for th in &set.angles {
            let kn = p.eta(*th).dot(&nu).abs();
            assert!(want.iter().any(|w| (w.abs() - kn).abs() < 1e-8), "{kn} vs {want:?}");
        }
        // −k2 p⁴ + 3(k2−k1) p² + k1 = 0 has one positive root in p² here
        assert_eq!(set.len(), 2);
    }

    proptest! {
        #[test]
        fn frontal_extrema_are_lateral_zeros(u in -1.0..1.0f64, v in -1.0..1.0f64) {
            let p = pg(&MONGE, u, v);
            let set = extremal_frontal_directions(&p, ROOT_TOL);
            prop_assert!(set.len() >= 2 && set.len() <= 4);
            for th in &set.angles {
                prop_assert!(crate::deviation::lateral(&p, *th).abs() < 1e-9 * p.alpha_scale().powi(2));
            }
            for w in set.angles.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
        }

        #[test]
        fn rotation_equivariance(angle in 0.0..(2.0 * PI), u in -0.6..0.6f64, v in -0.6..0.6f64) {
            let c = chart(&MONGE);
            let (s, co) = (angle.sin(), angle.cos());
            // rotate in the (x1,x3) and (x2,x4) planes
            let m = [co, 0.0, -s, 0.0, 0.0, co, 0.0, -s, s, 0.0, co, 0.0, 0.0, s, 0.0, co];
            let rc = c.transform_ambient(&m);
            let a = build_point_geometry(&c, u, v).unwrap();
            let b = build_point_geometry(&rc, u, v).unwrap();
            let sa = strong_principal_directions(&a, ROOT_TOL).unwrap();
            let sb = strong_principal_directions(&b, ROOT_TOL).unwrap();
            prop_assert_eq!(sa.directions.len(), sb.directions.len());
            for (ra, rb) in sa.ribs.iter().zip(&sb.ribs) {
                prop_assert!((ra.theta - rb.theta).abs() < 1e-8);
                if let (Some(ua), Some(ub)) = (ra.u, rb.u) {
                    let mut rot = Vector::zeros(4);
                    for i in 0..4 {
                        for j in 0..4 {
                            rot[i] += m[i * 4 + j] * ua[j];
                        }
                    }
                    prop_assert!((rot - ub).max_abs() < 1e-8 * (1.0 + ua.norm()));
                }
            }
        }
    }
}
