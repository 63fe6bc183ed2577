//! Oracle cross-checks at a point: finite-difference jets, the geodesic
//! remainder rate, dense-θ direction sets, normal torsion, rib residuals and
//! the R⁵ rank condition.

use geodev_core::deviation::{geodesic_taylor, normal_torsion};
use geodev_core::directions::{
    asymptotic_directions_r5, strong_principal_directions, RibStatus,
};
use geodev_core::fields::field_directions;
use geodev_core::forms::angle_dist_pi;
use geodev_core::frames::build_point_geometry;
use geodev_core::oracle::{
    dense_field_directions, fd_jet_check, integrate_geodesic, section_frenet,
};
use geodev_core::surface::SurfaceChart;
use geodev_core::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::report::applicable_kinds;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tol_root: f64,
    /// Largest accepted angle mismatch against the dense-θ oracle.
    pub tol_verify: f64,
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol_root: geodev_core::directions::ROOT_TOL,
            tol_verify: 1e-6,
            samples: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Upper bound on `value`, or lower bound for rate checks.
    pub limit: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn at_most(name: String, value: f64, limit: f64) -> Check {
    Check {
        name,
        value: Some(value),
        limit,
        passed: value <= limit,
        detail: None,
    }
}

/// Worst pairing distance mod π, or `None` when the sizes differ.
fn set_distance(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut left = b.to_vec();
    let mut worst = 0.0f64;
    for &x in a {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, &y)| (k, angle_dist_pi(x, y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        worst = worst.max(d);
        left.swap_remove(k);
    }
    Some(worst)
}

/// Remainders under this are rounding noise for O(1) coordinates.
const NOISE_FLOOR: f64 = 1e-13;

fn remainder_slope(chart: &SurfaceChart, u: f64, v: f64, theta: f64) -> Result<Option<f64>> {
    let pg = build_point_geometry(chart, u, v)?;
    let taylor = geodesic_taylor(&pg, theta);
    let sol = integrate_geodesic(chart, u, v, theta, 0.1, 1000)?;
    let mut pts = Vec::new();
    for k in [10, 20, 50, 100, 200, 500, 1000] {
        let e = (sol.points[k] - taylor.eval(sol.times[k])).norm();
        if e >= NOISE_FLOOR {
            pts.push((sol.times[k].ln(), e.ln()));
        }
    }
    if pts.len() < 3 {
        return Ok(None);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(Some(sxy / sxx))
}

pub fn verify_point(
    chart: &SurfaceChart,
    u: f64,
    v: f64,
    thetas: &[f64],
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    let pg = build_point_geometry(chart, u, v)?;
    let mut checks = Vec::new();

    let fd = fd_jet_check(chart, u, v, 1e-3)?;
    checks.push(at_most("jet_fd_orders_1_2".into(), fd.max_rel_err[1].max(fd.max_rel_err[2]), 1e-5));
    checks.push(at_most("jet_fd_order_3".into(), fd.max_rel_err[3], 1e-3));

    for &th in thetas {
        let name = format!("geodesic_remainder_rate theta={th}");
        checks.push(match remainder_slope(chart, u, v, th)? {
            Some(s) => Check {
                name,
                value: Some(s),
                limit: 3.8,
                passed: s >= 3.8,
                detail: None,
            },
            None => Check {
                name,
                value: None,
                limit: 3.8,
                passed: true,
                detail: Some("remainder below the rounding floor".into()),
            },
        });
    }

    for kind in applicable_kinds(pg.dim()) {
        let set = field_directions(&pg, kind, opts.tol_root)?;
        let dense = dense_field_directions(&pg, kind, opts.samples);
        let name = format!("dense_theta {}", kind.name());
        checks.push(if set.identically_zero || dense.constant {
            let same = set.identically_zero == dense.constant;
            Check {
                name,
                value: None,
                limit: opts.tol_verify,
                passed: same,
                detail: Some(if same {
                    "all directions".into()
                } else {
                    "identically-zero flags differ".into()
                }),
            }
        } else {
            match set_distance(&set.angles, &dense.angles) {
                Some(d) => at_most(name, d, opts.tol_verify),
                None => Check {
                    name,
                    value: None,
                    limit: opts.tol_verify,
                    passed: false,
                    detail: Some(format!(
                        "{} solver angles vs {} dense angles",
                        set.len(),
                        dense.angles.len()
                    )),
                },
            }
        });
    }

    if pg.dim() == 4 {
        for &th in thetas {
            let Ok(tau) = normal_torsion(&pg, th) else { continue };
            let name = format!("normal_torsion theta={th}");
            match section_frenet(chart, u, v, th, 0.01) {
                Ok((_, t)) => checks.push(at_most(name, (tau - t).abs(), 1e-3)),
                Err(Error::ContinuationFailure { .. }) => checks.push(Check {
                    name,
                    value: None,
                    limit: 1e-3,
                    passed: true,
                    detail: Some("normal section continuation failed; skipped".into()),
                }),
                Err(e) => return Err(e),
            }
        }
        let sp = strong_principal_directions(&pg, opts.tol_root)?;
        let worst = sp
            .ribs
            .iter()
            .filter(|r| r.status == RibStatus::Accepted)
            .map(|r| r.residuals.max())
            .fold(0.0, f64::max);
        checks.push(at_most("rib_residuals".into(), worst, 1e-8));
    }
    if pg.dim() == 5 {
        let a = asymptotic_directions_r5(&pg, opts.tol_root)?;
        let worst = a.rank_ratios.iter().cloned().fold(0.0, f64::max);
        checks.push(at_most("asymptotic_r5_rank_ratio".into(), worst, 1e-8));
    }

    Ok(VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
