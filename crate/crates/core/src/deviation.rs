//! Taylor expansion of geodesics and the scalar deviation quantities built
//! from it: frontal and lateral deviation, normal curvature and its
//! derivative, projected-curve torsion and normal torsion.

use crate::error::{Error, Result};
use crate::frames::PointGeometry;
use crate::vector::Vector;

/// `γ_v(t) ≈ c0 + c1 t + c2 t² + c3 t³` for the unit-speed geodesic with
/// `γ(0) = m`, `γ'(0) = v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicTaylor {
    pub c0: Vector,
    pub c1: Vector,
    pub c2: Vector,
    pub c3: Vector,
}

impl GeodesicTaylor {
    pub fn eval(&self, t: f64) -> Vector {
        self.c0 + self.c1 * t + self.c2 * (t * t) + self.c3 * (t * t * t)
    }
}

/// Below this normal curvature, κ' and the torsions are reported as degenerate.
pub const EPS_KAPPA: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviationReport {
    pub frontal: f64,
    pub lateral: f64,
    pub kappa: f64,
    /// Zero when `kappa_degenerate`.
    pub kappa_prime: f64,
    pub kappa_degenerate: bool,
    /// Normal torsion, only in R⁴ with `kappa > EPS_KAPPA`.
    pub tau: Option<f64>,
    pub proj_curvature: f64,
    pub proj_torsion: Option<f64>,
}

pub fn geodesic_taylor(pg: &PointGeometry, theta: f64) -> GeodesicTaylor {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let eta = pg.eta(theta);
    // α♯(v)·α(v,v) = Σ_i (α(t_i, v)·α(v,v)) t_i
    let a1 = pg.b1 * c + pg.b3 * s;
    let a2 = pg.b3 * c + pg.b2 * s;
    let sharp = pg.t1 * a1.dot(&eta) + pg.t2 * a2.dot(&eta);
    GeodesicTaylor {
        c0: pg.m,
        c1: pg.tangent(theta),
        c2: eta * 0.5,
        c3: (pg.nabla_alpha(theta) - sharp) * (1.0 / 6.0),
    }
}

/// `-(1/6)|η(θ)|²`
pub fn frontal(pg: &PointGeometry, theta: f64) -> f64 {
    -pg.eta(theta).norm_sq() / 6.0
}

/// `-(1/6) α(Jv,v)·α(v,v)`
pub fn lateral(pg: &PointGeometry, theta: f64) -> f64 {
    -pg.alpha_jv_v(theta).dot(&pg.eta(theta)) / 6.0
}

/// Normal torsion `J_N η · ∇α / κ²` of the normal section in R⁴.
///
/// The sign follows the orientation of `pg.normal_basis`; reversing the
/// surface orientation flips it.
pub fn normal_torsion(pg: &PointGeometry, theta: f64) -> Result<f64> {
    if pg.dim() != 4 {
        return Err(Error::TorsionUndefined {
            reason: "normal torsion needs ambient dimension 4",
        });
    }
    let eta = pg.eta(theta);
    let k2 = eta.norm_sq();
    if libm::sqrt(k2) <= EPS_KAPPA {
        return Err(Error::TorsionUndefined {
            reason: "normal curvature vanishes",
        });
    }
    Ok(pg.j_normal(&eta).dot(&pg.nabla_alpha(theta)) / k2)
}

pub fn deviation_report(pg: &PointGeometry, theta: f64) -> DeviationReport {
    let eta = pg.eta(theta);
    let jv = pg.alpha_jv_v(theta);
    let kappa = eta.norm();
    let degenerate = kappa <= EPS_KAPPA;
    let (kappa_prime, proj_torsion) = if degenerate {
        (0.0, None)
    } else {
        (
            eta.dot(&pg.nabla_alpha(theta)) / kappa,
            Some(-jv.dot(&eta) / kappa),
        )
    };
    DeviationReport {
        frontal: -eta.norm_sq() / 6.0,
        lateral: -jv.dot(&eta) / 6.0,
        kappa,
        kappa_prime,
        kappa_degenerate: degenerate,
        tau: normal_torsion(pg, theta).ok(),
        proj_curvature: kappa,
        proj_torsion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::build_point_geometry;
    use crate::surface::{Domain, SurfaceChart};
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn chart(comps: &[&str]) -> SurfaceChart {
        SurfaceChart::from_strs("t", comps, Domain::new((-3.0, 3.0), (-3.0, 3.0))).unwrap()
    }

    fn monge4() -> SurfaceChart {
        chart(&["u", "v", "u^2 + 0.3*u*v^2 - v^3/2", "u*v + 0.2*u^3 + v^2/4"])
    }

    #[test]
    fn sphere_values() {
        let s = chart(&["cos(u)*cos(v)", "sin(u)*cos(v)", "sin(v)"]);
        let pg = build_point_geometry(&s, 0.0, 0.0).unwrap();
        let g = geodesic_taylor(&pg, 0.0);
        assert!((g.c2 + pg.m * 0.5).max_abs() < 1e-14);
        assert!((g.c3 + g.c1 * (1.0 / 6.0)).max_abs() < 1e-14);
        for th in [0.0, 0.7, 2.0] {
            let r = deviation_report(&pg, th);
            assert!((r.frontal + 1.0 / 6.0).abs() < 1e-14);
            assert!(r.lateral.abs() < 1e-14);
            assert!((r.kappa - 1.0).abs() < 1e-14);
            assert!(r.kappa_prime.abs() < 1e-12);
            assert_eq!(r.tau, None);
        }
    }

    #[test]
    fn plane_geodesics_are_straight() {
        let pg = build_point_geometry(&chart(&["u", "v", "0"]), 0.1, 0.2).unwrap();
        let g = geodesic_taylor(&pg, 1.0);
        assert_eq!(g.c2.max_abs(), 0.0);
        assert_eq!(g.c3.max_abs(), 0.0);
        let r = deviation_report(&pg, 1.0);
        assert!(r.kappa_degenerate && r.kappa_prime == 0.0 && r.proj_torsion.is_none());
    }

    #[test]
    fn example_r5_lateral() {
        let c = chart(&["u^2*v^2", "u+v", "u-v", "(u^2+v^2)/2", "(u^2-v^2)/2"]);
        let pg = build_point_geometry(&c, 0.0, 0.0).unwrap();
        // H=(0,0,0,½,0), B=(0,0,0,0,½), C=0: lateral(π/8) = (1/6)·(½)·(¼)
        let r = deviation_report(&pg, PI / 8.0);
        assert!((r.lateral - 1.0 / 48.0).abs() < 1e-15, "{}", r.lateral);
    }

    #[test]
    fn clifford_torus_has_zero_torsion() {
        let c = chart(&["cos(u)", "sin(u)", "2*cos(v)", "2*sin(v)"]);
        for (u, v) in [(0.0, 0.0), (1.0, -2.0), (2.5, 0.3)] {
            let pg = build_point_geometry(&c, u, v).unwrap();
            for th in [0.3, 1.0, 2.0] {
                assert!(normal_torsion(&pg, th).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn torsion_errors() {
        let s = chart(&["cos(u)*cos(v)", "sin(u)*cos(v)", "sin(v)"]);
        let pg = build_point_geometry(&s, 0.0, 0.0).unwrap();
        assert!(matches!(normal_torsion(&pg, 0.0), Err(Error::TorsionUndefined { .. })));
        let flat = build_point_geometry(&chart(&["u", "v", "0", "0"]), 0.0, 0.0).unwrap();
        assert!(matches!(normal_torsion(&flat, 0.0), Err(Error::TorsionUndefined { .. })));
    }

    /// Flipping the last ambient axis reverses the orientation convention
    /// and therefore the sign of τ.
    #[test]
    fn torsion_sign_follows_orientation() {
        let c = monge4();
        let flipped = c.transform_ambient(&[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, -1.0,
        ]);
        let a = build_point_geometry(&c, 0.2, 0.1).unwrap();
        let b = build_point_geometry(&flipped, 0.2, 0.1).unwrap();
        for th in [0.4, 1.7] {
            let (ta, tb) = (normal_torsion(&a, th).unwrap(), normal_torsion(&b, th).unwrap());
            assert!(ta.abs() > 1e-3);
            assert!((ta + tb).abs() < 1e-10, "{ta} {tb}");
        }
    }

    proptest! {
        #[test]
        fn report_invariants(th in 0.0..PI, u in -1.0..1.0f64, v in -1.0..1.0f64) {
            let pg = build_point_geometry(&monge4(), u, v).unwrap();
            let r = deviation_report(&pg, th);
            let g = geodesic_taylor(&pg, th);
            prop_assert!((r.frontal + r.kappa * r.kappa / 6.0).abs() < 1e-12);
            if let Some(pt) = r.proj_torsion {
                prop_assert!((r.lateral - r.proj_curvature * pt / 6.0).abs() < 1e-12);
            }
            prop_assert!((g.c1.dot(&g.c3) + pg.eta(th).norm_sq() / 6.0).abs() < 1e-12);
            prop_assert!(g.c2.dot(&pg.t1).abs() < 1e-12 && g.c2.dot(&pg.t2).abs() < 1e-12);
            let kk = pg.eta(th).dot(&pg.nabla_alpha(th));
            prop_assert!((r.kappa * r.kappa_prime - kk).abs() < 1e-10);
        }

        #[test]
        fn lateral_is_quarter_derivative_of_frontal(th in 0.0..PI, u in -1.0..1.0f64, v in -1.0..1.0f64) {
            let pg = build_point_geometry(&monge4(), u, v).unwrap();
            let h = 1e-5;
            let d = (pg.eta(th + h).norm_sq() - pg.eta(th - h).norm_sq()) / (2.0 * h);
            prop_assert!((6.0 * lateral(&pg, th) + d / 4.0).abs() < 1e-6);
        }
    }
}
