//! Serializable point reports and their construction from the core results.

use geodev_core::deviation::{deviation_report, geodesic_taylor};
use geodev_core::directions::{
    asymptotic_directions_r5, extremal_frontal_directions, extremal_lateral_directions,
    r3_special_directions, strong_principal_directions, umbilic_focus, umbilic_focus_residuals,
    DirectionSet, RibCase, RibResult, RibStatus, UmbilicFocus,
};
use geodev_core::fields::FieldKind;
use geodev_core::frames::{build_point_geometry, classify_point, PointGeometry, CLASSIFY_TOL};
use geodev_core::surface::SurfaceChart;
use geodev_core::{Result, Vector};
use serde::{Deserialize, Serialize};

use crate::verify::{verify_point, VerifyOptions, VerifyReport};

pub const POINT_SCHEMA: &str = "geodev.point/1";

fn vec(v: &Vector) -> Vec<f64> {
    v.as_slice().to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionsReport {
    pub angles: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Every direction solves the equation.
    pub all_directions: bool,
}

impl From<&DirectionSet> for DirectionsReport {
    fn from(s: &DirectionSet) -> Self {
        DirectionsReport {
            angles: s.angles.clone(),
            residuals: s.residuals.clone(),
            all_directions: s.identically_zero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    pub c0: Vec<f64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub c3: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationEntry {
    pub theta: f64,
    pub frontal: f64,
    pub lateral: f64,
    pub kappa: f64,
    pub kappa_prime: f64,
    pub kappa_degenerate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub proj_curvature: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proj_torsion: Option<f64>,
    pub geodesic_taylor: TaylorReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RibReport {
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_offset: Option<Vec<f64>>,
    pub case: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub residual_tangential: f64,
    pub residual_contact: f64,
    pub residual_cross: f64,
    pub residual_d3: f64,
}

impl From<&RibResult> for RibReport {
    fn from(r: &RibResult) -> Self {
        let (status, reason) = match r.status {
            RibStatus::Accepted => ("accepted", None),
            RibStatus::Rejected(why) => ("rejected", Some(why.to_string())),
        };
        RibReport {
            theta: r.theta,
            center_offset: r.u.as_ref().map(vec),
            case: match r.case {
                RibCase::Generic => "generic",
                RibCase::CZero => "c_zero",
                RibCase::None => "none",
            }
            .into(),
            status: status.into(),
            reason,
            residual_tangential: r.residuals.tangential,
            residual_contact: r.residuals.contact,
            residual_cross: r.residuals.cross,
            residual_d3: r.residuals.d3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongPrincipalReport {
    pub directions: DirectionsReport,
    pub ribs: Vec<RibReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocusReport {
    /// `point`, `affine_line` or `none`.
    pub kind: String,
    /// Offset `u` of the focus `m + u`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Vec<f64>>,
    /// For an umbilic point, the foci are `{u : u·b = 1}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_normal: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticR5Report {
    pub directions: DirectionsReport,
    pub rank_ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub schema_version: String,
    pub surface: String,
    pub ambient_dim: usize,
    pub u: f64,
    pub v: f64,
    pub m: Vec<f64>,
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
    pub normal_basis: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub b2: Vec<f64>,
    pub b3: Vec<f64>,
    pub h: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub q: f64,
    pub r: f64,
    /// `(a11, a21, a22)`: `t1 = a11 X_u`, `t2 = a21 X_u + a22 X_v`.
    pub param_frame: Vec<f64>,
    pub class: String,
    pub aligned_frame_angle: f64,
    /// Present when `|η(θ)|` does not depend on θ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontal_deviation_const: Option<f64>,
    pub extremal_frontal_angles: Vec<f64>,
    pub extremal_frontal: DirectionsReport,
    pub extremal_lateral: DirectionsReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<DirectionsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymptotic: Option<DirectionsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strong_principal: Option<StrongPrincipalReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub umbilic_focus: Option<FocusReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymptotic_r5: Option<AsymptoticR5Report>,
    /// Sorted by θ.
    pub deviations: Vec<DeviationEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
}

#[derive(Debug, Clone, Copy)]
pub struct PointOptions {
    pub tol_root: f64,
    /// Run the oracle cross-checks and attach their residuals.
    pub verify: Option<VerifyOptions>,
}

fn focus_report(pg: &PointGeometry, f: UmbilicFocus) -> FocusReport {
    let empty = FocusReport {
        kind: String::new(),
        offset: None,
        line_normal: None,
        reason: None,
        residuals: None,
    };
    match f {
        UmbilicFocus::Point(u) => FocusReport {
            kind: "point".into(),
            offset: Some(vec(&u)),
            residuals: Some(umbilic_focus_residuals(pg, &u).to_vec()),
            ..empty
        },
        UmbilicFocus::AffineLine { b } => FocusReport {
            kind: "affine_line".into(),
            line_normal: Some(vec(&b)),
            ..empty
        },
        UmbilicFocus::None(why) => FocusReport {
            kind: "none".into(),
            reason: Some(why.into()),
            ..empty
        },
    }
}

pub fn deviation_entry(pg: &PointGeometry, theta: f64) -> DeviationEntry {
    let d = deviation_report(pg, theta);
    let g = geodesic_taylor(pg, theta);
    DeviationEntry {
        theta,
        frontal: d.frontal,
        lateral: d.lateral,
        kappa: d.kappa,
        kappa_prime: d.kappa_prime,
        kappa_degenerate: d.kappa_degenerate,
        tau: d.tau,
        proj_curvature: d.proj_curvature,
        proj_torsion: d.proj_torsion,
        geodesic_taylor: TaylorReport {
            c0: vec(&g.c0),
            c1: vec(&g.c1),
            c2: vec(&g.c2),
            c3: vec(&g.c3),
        },
    }
}

pub fn point_report(
    chart: &SurfaceChart,
    u: f64,
    v: f64,
    thetas: &[f64],
    opts: &PointOptions,
) -> Result<PointReport> {
    let pg = build_point_geometry(chart, u, v)?;
    let class = classify_point(&pg, CLASSIFY_TOL);
    let frontal = extremal_frontal_directions(&pg, opts.tol_root);
    let lateral = extremal_lateral_directions(&pg, opts.tol_root);
    let dim = pg.dim();

    let (principal, asymptotic) = if dim == 3 {
        let r3 = r3_special_directions(&pg, opts.tol_root)?;
        (Some((&r3.principal).into()), Some((&r3.asymptotic).into()))
    } else {
        (None, None)
    };
    let (strong_principal, focus) = if dim == 4 {
        let sp = strong_principal_directions(&pg, opts.tol_root)?;
        let report = StrongPrincipalReport {
            directions: (&sp.directions).into(),
            ribs: sp.ribs.iter().map(RibReport::from).collect(),
        };
        let f = umbilic_focus(&pg, CLASSIFY_TOL)?;
        (Some(report), Some(focus_report(&pg, f)))
    } else {
        (None, None)
    };
    let asymptotic_r5 = if dim == 5 {
        let a = asymptotic_directions_r5(&pg, opts.tol_root)?;
        Some(AsymptoticR5Report {
            directions: (&a.directions).into(),
            rank_ratios: a.rank_ratios,
        })
    } else {
        None
    };

    let mut thetas = thetas.to_vec();
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();
    let deviations = thetas.iter().map(|&t| deviation_entry(&pg, t)).collect();

    let verify = match &opts.verify {
        Some(vo) => Some(verify_point(chart, u, v, &thetas, vo)?),
        None => None,
    };

    Ok(PointReport {
        schema_version: POINT_SCHEMA.into(),
        surface: chart.name.clone(),
        ambient_dim: dim,
        u,
        v,
        m: vec(&pg.m),
        t1: vec(&pg.t1),
        t2: vec(&pg.t2),
        normal_basis: pg.normal_basis.iter().map(vec).collect(),
        b1: vec(&pg.b1),
        b2: vec(&pg.b2),
        b3: vec(&pg.b3),
        h: vec(&pg.h),
        b: vec(&pg.b),
        c: vec(&pg.c),
        q: pg.q,
        r: pg.r,
        param_frame: pg.param_frame.to_vec(),
        class: class.tag.as_str().into(),
        aligned_frame_angle: class.aligned_frame_angle,
        frontal_deviation_const: frontal
            .identically_zero
            .then(|| geodev_core::deviation::frontal(&pg, 0.0)),
        extremal_frontal_angles: frontal.angles.clone(),
        extremal_frontal: (&frontal).into(),
        extremal_lateral: (&lateral).into(),
        principal,
        asymptotic,
        strong_principal,
        umbilic_focus: focus,
        asymptotic_r5,
        deviations,
        verify,
    })
}

/// Kinds whose direction set appears in a point report of this dimension.
pub fn applicable_kinds(dim: usize) -> Vec<FieldKind> {
    FieldKind::ALL.into_iter().filter(|k| k.valid_for(dim)).collect()
}
