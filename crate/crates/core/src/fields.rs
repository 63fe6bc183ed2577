//! Direction fields over the parameter domain: grid scans, integral lines and
//! the discriminant curve separating two- and four-direction regions of the
//! extremal frontal field.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::directions::{
    asymptotic_directions_r5, extremal_frontal_directions, extremal_frontal_form,
    extremal_lateral_directions, extremal_lateral_form, r3_forms, r3_special_directions,
    strong_principal_directions, strong_principal_form, asymptotic_r5_form, DirectionSet,
    ROOT_TOL,
};
use crate::error::{Error, Result};
use crate::forms::{angle_dist_pi, Form};
use crate::frames::{build_point_geometry, classify_point, PointGeometry, PointTag, CLASSIFY_TOL};
use crate::surface::{Domain, SurfaceChart};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FieldKind {
    ExtremalFrontal,
    ExtremalLateral,
    Principal,
    Asymptotic,
    StrongPrincipal,
    AsymptoticR5,
}

impl FieldKind {
    pub const ALL: [FieldKind; 6] = [
        FieldKind::ExtremalFrontal,
        FieldKind::ExtremalLateral,
        FieldKind::Principal,
        FieldKind::Asymptotic,
        FieldKind::StrongPrincipal,
        FieldKind::AsymptoticR5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::ExtremalFrontal => "extremal-frontal",
            FieldKind::ExtremalLateral => "extremal-lateral",
            FieldKind::Principal => "principal",
            FieldKind::Asymptotic => "asymptotic",
            FieldKind::StrongPrincipal => "strong-principal",
            FieldKind::AsymptoticR5 => "asymptotic-r5",
        }
    }

    pub fn from_name(s: &str) -> Option<FieldKind> {
        FieldKind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn valid_for(self, dim: usize) -> bool {
        match self {
            FieldKind::ExtremalFrontal | FieldKind::ExtremalLateral => true,
            FieldKind::Principal | FieldKind::Asymptotic => dim == 3,
            FieldKind::StrongPrincipal => dim == 4,
            FieldKind::AsymptoticR5 => dim == 5,
        }
    }

    fn check(self, dim: usize) -> Result<()> {
        if self.valid_for(dim) {
            Ok(())
        } else {
            Err(Error::DimensionError {
                expected: alloc::format!("an ambient dimension valid for {}", self.name()),
                found: dim,
            })
        }
    }
}

/// Directions of the given field at a point.
pub fn field_directions(pg: &PointGeometry, kind: FieldKind, tol: f64) -> Result<DirectionSet> {
    Ok(match kind {
        FieldKind::ExtremalFrontal => extremal_frontal_directions(pg, tol),
        FieldKind::ExtremalLateral => extremal_lateral_directions(pg, tol),
        FieldKind::Principal => r3_special_directions(pg, tol)?.principal,
        FieldKind::Asymptotic => r3_special_directions(pg, tol)?.asymptotic,
        FieldKind::StrongPrincipal => strong_principal_directions(pg, tol)?.directions,
        FieldKind::AsymptoticR5 => asymptotic_directions_r5(pg, tol)?.directions,
    })
}

/// The binary form whose roots define the field.
pub fn field_form(pg: &PointGeometry, kind: FieldKind) -> Result<Form> {
    Ok(match kind {
        FieldKind::ExtremalFrontal => extremal_frontal_form(pg),
        FieldKind::ExtremalLateral => extremal_lateral_form(pg),
        FieldKind::Principal => r3_forms(pg)?.0,
        FieldKind::Asymptotic => r3_forms(pg)?.1,
        FieldKind::StrongPrincipal => strong_principal_form(pg)?,
        FieldKind::AsymptoticR5 => asymptotic_r5_form(pg)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootCount {
    Finite(usize),
    /// Every direction belongs to the field.
    Infinite,
    /// The chart is singular at the node.
    Singular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub u: f64,
    pub v: f64,
    pub count: RootCount,
    pub angles: Vec<f64>,
    pub class: Option<PointTag>,
}

/// Nodes of an `nu × nv` grid covering the domain including its boundary,
/// stored row by row (`v` outer, `u` inner).
#[derive(Debug, Clone, PartialEq)]
pub struct GridScan {
    pub kind: FieldKind,
    pub nu: usize,
    pub nv: usize,
    pub domain: Domain,
    pub cells: Vec<GridCell>,
}

impl GridScan {
    pub fn cell(&self, i: usize, j: usize) -> &GridCell {
        &self.cells[j * self.nu + i]
    }
}

pub fn grid_node(domain: &Domain, nu: usize, nv: usize, i: usize, j: usize) -> (f64, f64) {
    let fu = i as f64 / (nu - 1) as f64;
    let fv = j as f64 / (nv - 1) as f64;
    (
        domain.u_min + fu * (domain.u_max - domain.u_min),
        domain.v_min + fv * (domain.v_max - domain.v_min),
    )
}

pub fn scan_node(chart: &SurfaceChart, kind: FieldKind, u: f64, v: f64, tol: f64) -> GridCell {
    let mut cell = GridCell {
        u,
        v,
        count: RootCount::Singular,
        angles: Vec::new(),
        class: None,
    };
    let Ok(pg) = build_point_geometry(chart, u, v) else {
        return cell;
    };
    cell.class = Some(classify_point(&pg, CLASSIFY_TOL).tag);
    if let Ok(set) = field_directions(&pg, kind, tol) {
        cell.count = if set.identically_zero {
            RootCount::Infinite
        } else {
            RootCount::Finite(set.len())
        };
        cell.angles = set.angles;
    }
    cell
}

pub fn scan_grid(chart: &SurfaceChart, kind: FieldKind, nu: usize, nv: usize) -> Result<GridScan> {
    kind.check(chart.ambient_dim)?;
    if nu < 2 || nv < 2 {
        return Err(Error::DimensionError {
            expected: "a grid of at least 2×2".into(),
            found: nu.min(nv),
        });
    }
    let mut cells = Vec::with_capacity(nu * nv);
    for j in 0..nv {
        for i in 0..nu {
            let (u, v) = grid_node(&chart.domain, nu, nv, i, j);
            cells.push(scan_node(chart, kind, u, v, ROOT_TOL));
        }
    }
    Ok(GridScan {
        kind,
        nu,
        nv,
        domain: chart.domain,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Boundary,
    SingularPoint,
    StepLimit,
    RootCollision,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Boundary => "boundary",
            Termination::SingularPoint => "singular_point",
            Termination::StepLimit => "step_limit",
            Termination::RootCollision => "root_collision",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldTrace {
    pub kind: FieldKind,
    pub seed: (f64, f64),
    pub points: Vec<(f64, f64)>,
    /// Frame angle of the followed direction at each point.
    pub angles: Vec<f64>,
    /// Relative residual of the field equation at each point.
    pub residuals: Vec<f64>,
    /// Per segment: travelled against the direction `param_velocity(θ)`.
    pub reversed: Vec<bool>,
    pub termination: Termination,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Step length in parameter units.
    pub step: f64,
    /// Maximum parameter-space length.
    pub max_len: f64,
    pub max_steps: usize,
    /// Largest accepted turn of the direction within one step (radians).
    pub max_turn: f64,
    /// Step halvings allowed before declaring a root collision.
    pub max_halvings: u32,
    pub tol: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 0.01,
            max_len: 10.0,
            max_steps: 100_000,
            max_turn: 0.2,
            max_halvings: 8,
            tol: ROOT_TOL,
        }
    }
}

struct Sample {
    dir: (f64, f64),
    theta: f64,
    residual: f64,
    reversed: bool,
    /// Another root is nearly parallel to the chosen one.
    crowded: bool,
}

enum Probe {
    Ok(Sample),
    Singular,
}

fn unit(w: (f64, f64)) -> (f64, f64) {
    let n = libm::hypot(w.0, w.1);
    (w.0 / n, w.1 / n)
}

/// Field direction at `p` closest (as an unoriented line) to `prev`,
/// oriented along `prev`.
fn probe(chart: &SurfaceChart, kind: FieldKind, p: (f64, f64), prev: (f64, f64), tol: f64) -> Probe {
    let Ok(pg) = build_point_geometry(chart, p.0, p.1) else {
        return Probe::Singular;
    };
    let Ok(set) = field_directions(&pg, kind, tol) else {
        return Probe::Singular;
    };
    if set.identically_zero || set.is_empty() {
        return Probe::Singular;
    }
    let mut best: Option<(f64, usize, (f64, f64))> = None;
    for (k, &th) in set.angles.iter().enumerate() {
        let w = unit(pg.param_velocity(th));
        let d = w.0 * prev.0 + w.1 * prev.1;
        if best.is_none_or(|b| d.abs() > b.0) {
            best = Some((d.abs(), k, w));
        }
    }
    let (_, k, w) = best.unwrap();
    let th = set.angles[k];
    let reversed = w.0 * prev.0 + w.1 * prev.1 < 0.0;
    let dir = if reversed { (-w.0, -w.1) } else { w };
    let crowded = set
        .angles
        .iter()
        .enumerate()
        .any(|(j, &o)| j != k && angle_dist_pi(o, th) < 5e-7);
    let residual = field_form(&pg, kind)
        .map(|f| f.eval(th).abs() / f.max_abs().max(f64::MIN_POSITIVE))
        .unwrap_or(f64::NAN);
    Probe::Ok(Sample {
        dir,
        theta: th,
        residual,
        reversed,
        crowded,
    })
}

/// Traces the integral line of branch `branch` (index into the sorted angle
/// set at the seed).
pub fn trace_line(
    chart: &SurfaceChart,
    kind: FieldKind,
    seed: (f64, f64),
    branch: usize,
    opts: &TraceOptions,
) -> Result<FieldTrace> {
    kind.check(chart.ambient_dim)?;
    let pg = build_point_geometry(chart, seed.0, seed.1)?;
    let set = field_directions(&pg, kind, opts.tol)?;
    if set.identically_zero || branch >= set.len() {
        return Err(Error::SeedError {
            branch,
            available: set.len(),
        });
    }
    let w = unit(pg.param_velocity(set.angles[branch]));
    trace_from(chart, kind, seed, w, opts)
}

/// Traces the field line through `seed` whose direction is closest to the
/// parameter-space direction `initial`, travelling along `initial`.
pub fn trace_from(
    chart: &SurfaceChart,
    kind: FieldKind,
    seed: (f64, f64),
    initial: (f64, f64),
    opts: &TraceOptions,
) -> Result<FieldTrace> {
    kind.check(chart.ambient_dim)?;
    let start = match probe(chart, kind, seed, unit(initial), opts.tol) {
        Probe::Ok(s) => s,
        Probe::Singular => {
            return Err(Error::SeedError {
                branch: 0,
                available: 0,
            })
        }
    };
    let mut tr = FieldTrace {
        kind,
        seed,
        points: alloc::vec![seed],
        angles: alloc::vec![start.theta],
        residuals: alloc::vec![start.residual],
        reversed: Vec::new(),
        termination: Termination::StepLimit,
    };
    let dom = chart.domain;
    let mut p = seed;
    let mut dir = start.dir;
    let mut travelled = 0.0;
    let cos_turn = libm::cos(opts.max_turn);

    'outer: for _ in 0..opts.max_steps {
        if travelled >= opts.max_len {
            tr.termination = Termination::StepLimit;
            break;
        }
        let mut h = opts.step.min(opts.max_len - travelled);
        let mut halvings = 0;
        loop {
            match rk4_step(chart, kind, p, dir, h, opts.tol, cos_turn) {
                Step::Accept(np, sample) => {
                    if !dom.contains(np.0, np.1) {
                        tr.termination = Termination::Boundary;
                        break 'outer;
                    }
                    travelled += libm::hypot(np.0 - p.0, np.1 - p.1);
                    tr.reversed.push(sample.reversed);
                    tr.points.push(np);
                    tr.angles.push(sample.theta);
                    tr.residuals.push(sample.residual);
                    p = np;
                    dir = sample.dir;
                    break;
                }
                Step::Singular => {
                    if halvings >= opts.max_halvings {
                        tr.termination = Termination::SingularPoint;
                        break 'outer;
                    }
                }
                Step::Turn => {
                    if halvings >= opts.max_halvings {
                        tr.termination = Termination::RootCollision;
                        break 'outer;
                    }
                }
            }
            h *= 0.5;
            halvings += 1;
        }
    }
    Ok(tr)
}

enum Step {
    Accept((f64, f64), Sample),
    Singular,
    Turn,
}

fn rk4_step(
    chart: &SurfaceChart,
    kind: FieldKind,
    p: (f64, f64),
    dir: (f64, f64),
    h: f64,
    tol: f64,
    cos_turn: f64,
) -> Step {
    let mut ks = [(0.0, 0.0); 4];
    let offsets = [0.0, 0.5, 0.5, 1.0];
    let mut prev = dir;
    for i in 0..4 {
        let base = if i == 0 { (0.0, 0.0) } else { ks[i - 1] };
        let q = (p.0 + offsets[i] * h * base.0, p.1 + offsets[i] * h * base.1);
        match probe(chart, kind, q, dir, tol) {
            Probe::Singular => return Step::Singular,
            Probe::Ok(s) => {
                if s.crowded || s.dir.0 * prev.0 + s.dir.1 * prev.1 < cos_turn {
                    return Step::Turn;
                }
                ks[i] = s.dir;
                prev = s.dir;
            }
        }
    }
    let step = (
        (ks[0].0 + 2.0 * ks[1].0 + 2.0 * ks[2].0 + ks[3].0) / 6.0,
        (ks[0].1 + 2.0 * ks[1].1 + 2.0 * ks[2].1 + ks[3].1) / 6.0,
    );
    let np = (p.0 + h * step.0, p.1 + h * step.1);
    match probe(chart, kind, np, ks[3], tol) {
        Probe::Singular => Step::Singular,
        Probe::Ok(s) => {
            if s.crowded || s.dir.0 * dir.0 + s.dir.1 * dir.1 < cos_turn {
                Step::Turn
            } else {
                Step::Accept(np, s)
            }
        }
    }
}

/// Discriminant of `a p⁴ + b p³ + c p² + d p + e` (equivalently of the binary
/// quartic with those coefficients).
pub fn quartic_discriminant(a: f64, b: f64, c: f64, d: f64, e: f64) -> f64 {
    256.0 * a * a * a * e * e * e - 192.0 * a * a * b * d * e * e - 128.0 * a * a * c * c * e * e
        + 144.0 * a * a * c * d * d * e
        - 27.0 * a * a * d * d * d * d
        + 144.0 * a * b * b * c * e * e
        - 6.0 * a * b * b * d * d * e
        - 80.0 * a * b * c * c * d * e
        + 18.0 * a * b * c * d * d * d
        + 16.0 * a * c * c * c * c * e
        - 4.0 * a * c * c * c * d * d
        - 27.0 * b * b * b * b * e * e
        + 18.0 * b * b * b * c * d * e
        - 4.0 * b * b * b * d * d * d
        - 4.0 * b * b * c * c * c * e
        + b * b * c * c * d * d
}

/// Discriminant of the extremal frontal quartic at a point, computed from
/// coefficients normalized to unit max-norm; `None` if the form vanishes.
/// Positive means four distinct real directions, negative two.
pub fn frontal_discriminant(pg: &PointGeometry) -> Option<f64> {
    let f = extremal_frontal_form(pg);
    let s = f.max_abs();
    if s <= 1e-10 * pg.alpha_scale() * pg.alpha_scale() || s == 0.0 {
        return None;
    }
    let a = f.coeffs();
    let n = |k: usize| a[k] / s;
    Some(quartic_discriminant(n(4), n(3), n(2), n(1), n(0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discriminant {
    pub nu: usize,
    pub nv: usize,
    /// Node values, row by row; `NaN` where undefined.
    pub values: Vec<f64>,
    pub polylines: Vec<Vec<(f64, f64)>>,
    /// The quartic vanishes identically at every node.
    pub degenerate: bool,
}

pub fn discriminant_curve(chart: &SurfaceChart, nu: usize, nv: usize) -> Result<Discriminant> {
    if nu < 2 || nv < 2 {
        return Err(Error::DimensionError {
            expected: "a grid of at least 2×2".into(),
            found: nu.min(nv),
        });
    }
    let mut values = Vec::with_capacity(nu * nv);
    for j in 0..nv {
        for i in 0..nu {
            let (u, v) = grid_node(&chart.domain, nu, nv, i, j);
            let val = build_point_geometry(chart, u, v)
                .ok()
                .and_then(|pg| frontal_discriminant(&pg))
                .unwrap_or(f64::NAN);
            values.push(val);
        }
    }
    let degenerate = values.iter().all(|x| x.is_nan());
    let polylines = marching_squares(&values, nu, nv, &chart.domain);
    Ok(Discriminant {
        nu,
        nv,
        values,
        polylines,
        degenerate,
    })
}

/// Edge identifier: `(0, i, j)` joins nodes `(i,j)`–`(i+1,j)`, `(1, i, j)`
/// joins `(i,j)`–`(i,j+1)`.
type EdgeKey = (u8, usize, usize);

/// Zero level set of a node-valued grid, joined into polylines.
pub fn marching_squares(
    values: &[f64],
    nu: usize,
    nv: usize,
    domain: &Domain,
) -> Vec<Vec<(f64, f64)>> {
    let at = |i: usize, j: usize| values[j * nu + i];
    let point = |k: EdgeKey| -> (f64, f64) {
        let (i0, j0) = (k.1, k.2);
        let (i1, j1) = if k.0 == 0 { (i0 + 1, j0) } else { (i0, j0 + 1) };
        let (a, b) = (at(i0, j0), at(i1, j1));
        let t = a / (a - b);
        let p0 = grid_node(domain, nu, nv, i0, j0);
        let p1 = grid_node(domain, nu, nv, i1, j1);
        (p0.0 + t * (p1.0 - p0.0), p0.1 + t * (p1.1 - p0.1))
    };

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..nv - 1 {
        for i in 0..nu - 1 {
            let c = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if c.iter().any(|x| x.is_nan()) {
                continue;
            }
            let idx = (c[0] > 0.0) as u8
                | ((c[1] > 0.0) as u8) << 1
                | ((c[2] > 0.0) as u8) << 2
                | ((c[3] > 0.0) as u8) << 3;
            let bottom = (0, i, j);
            let right = (1, i + 1, j);
            let top = (0, i, j + 1);
            let left = (1, i, j);
            let center_pos = (c[0] + c[1] + c[2] + c[3]) > 0.0;
            match idx {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 => {
                    // corners 0 and 2 positive
                    if center_pos {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                10 => {
                    // corners 1 and 3 positive
                    if center_pos {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // join segments that share an edge crossing
    let mut by_edge: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        by_edge.entry(*a).or_default().push(s);
        by_edge.entry(*b).or_default().push(s);
    }
    let mut used = alloc::vec![false; segments.len()];
    let mut lines = Vec::new();
    for s0 in 0..segments.len() {
        if used[s0] {
            continue;
        }
        used[s0] = true;
        let mut chain: Vec<EdgeKey> = alloc::vec![segments[s0].0, segments[s0].1];
        // extend forward, then backward
        for _ in 0..2 {
            loop {
                let end = *chain.last().unwrap();
                let next = by_edge[&end].iter().copied().find(|&s| !used[s]);
                let Some(s) = next else { break };
                used[s] = true;
                let (a, b) = segments[s];
                chain.push(if a == end { b } else { a });
            }
            chain.reverse();
        }
        lines.push(chain.into_iter().map(point).collect());
    }
    lines
}
