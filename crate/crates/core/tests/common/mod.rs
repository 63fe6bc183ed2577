//! Test surfaces and helpers shared by the integration tests.
#![allow(dead_code)]

use geodev_core::forms::angle_dist_pi;
use geodev_core::surface::{parse_surface, Domain, SurfaceChart};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub struct TestSurface {
    pub chart: SurfaceChart,
    /// Region random points are drawn from.
    pub sample: Domain,
    pub polynomial: bool,
}

pub fn load(file: &str) -> SurfaceChart {
    let path = format!("{}/../../surfaces/{file}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_surface(&text).unwrap()
}

fn inner(d: &Domain, margin: f64) -> Domain {
    Domain::new(
        (d.u_min + margin, d.u_max - margin),
        (d.v_min + margin, d.v_max - margin),
    )
}

fn surface(file: &str, margin: f64, polynomial: bool) -> TestSurface {
    let chart = load(file);
    let sample = inner(&chart.domain, margin);
    TestSurface { chart, sample, polynomial }
}

pub fn sphere() -> TestSurface {
    surface("sphere.srf", 0.1, false)
}
pub fn cylinder() -> TestSurface {
    surface("cylinder.srf", 0.1, false)
}
pub fn torus3() -> TestSurface {
    surface("torus3.srf", 0.1, false)
}
pub fn monge4() -> TestSurface {
    surface("monge4.srf", 0.2, true)
}
pub fn clifford4() -> TestSurface {
    surface("clifford4.srf", 0.1, false)
}
pub fn example5() -> TestSurface {
    surface("example5.srf", 0.1, true)
}

/// Three graphs `(u, v, f, g)` with generic third-order terms.
pub fn monge_family() -> Vec<TestSurface> {
    let dom = Domain::new((-1.0, 1.0), (-1.0, 1.0));
    let sample = Domain::new((-0.6, 0.6), (-0.6, 0.6));
    let extra = [
        ["u", "v", "u^2 - v^2 + u^3/3 + 0.2*u*v^2", "u*v + v^3/5 - 0.3*u^2*v"],
        ["u", "v", "u^2 + v^2/2 + u^2*v", "u*v - u^3/6 + 0.4*v^3"],
    ];
    let mut out = vec![monge4()];
    for (k, comps) in extra.iter().enumerate() {
        let chart = SurfaceChart::from_strs(&format!("monge4-{k}"), comps, dom).unwrap();
        out.push(TestSurface { chart, sample, polynomial: true });
    }
    out
}

pub fn all_surfaces() -> Vec<TestSurface> {
    let mut v = vec![sphere(), cylinder(), torus3()];
    v.extend(monge_family());
    v.push(clifford4());
    v.push(example5());
    v
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn sample_point(rng: &mut StdRng, d: &Domain) -> (f64, f64) {
    (rng.gen_range(d.u_min..d.u_max), rng.gen_range(d.v_min..d.v_max))
}

/// Pairs up two angle sets mod π; both must have the same size and every
/// pair must be within `tol`.
pub fn sets_match(a: &[f64], b: &[f64], tol: f64) -> Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("sizes differ: {a:?} vs {b:?}"));
    }
    let mut left: Vec<f64> = b.to_vec();
    for &x in a {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, &y)| (k, angle_dist_pi(x, y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        if d > tol {
            return Err(format!("{x} unmatched (off by {d:.3e}): {a:?} vs {b:?}"));
        }
        left.swap_remove(k);
    }
    Ok(())
}
