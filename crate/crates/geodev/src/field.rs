//! Field plots: parallel grid scans, seeded field lines and the discriminant.

use std::thread;

use geodev_core::fields::{
    discriminant_curve, grid_node, scan_node, trace_from, trace_line, Discriminant, FieldKind,
    GridCell, GridScan, RootCount, Termination, TraceOptions,
};
use geodev_core::frames::build_point_geometry;
use geodev_core::surface::SurfaceChart;
use geodev_core::{Error, Result};

fn workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

/// Same result as `geodev_core::fields::scan_grid`, with rows split across
/// threads and reassembled in (row, col) order.
pub fn parallel_scan(
    chart: &SurfaceChart,
    kind: FieldKind,
    nu: usize,
    nv: usize,
    tol: f64,
) -> Result<GridScan> {
    if !kind.valid_for(chart.ambient_dim) {
        return Err(Error::DimensionError {
            expected: format!("an ambient dimension valid for {}", kind.name()),
            found: chart.ambient_dim,
        });
    }
    if nu < 2 || nv < 2 {
        return Err(Error::DimensionError {
            expected: "a grid of at least 2×2".into(),
            found: nu.min(nv),
        });
    }
    let band = nv.div_ceil(workers());
    let rows: Vec<Vec<GridCell>> = thread::scope(|s| {
        let handles: Vec<_> = (0..nv)
            .step_by(band)
            .map(|j0| {
                s.spawn(move || {
                    let mut out = Vec::with_capacity(band * nu);
                    for j in j0..(j0 + band).min(nv) {
                        for i in 0..nu {
                            let (u, v) = grid_node(&chart.domain, nu, nv, i, j);
                            out.push(scan_node(chart, kind, u, v, tol));
                        }
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    Ok(GridScan {
        kind,
        nu,
        nv,
        domain: chart.domain,
        cells: rows.into_iter().flatten().collect(),
    })
}

/// One field line through a seed, traced both ways from it.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldLine {
    pub seed: (f64, f64),
    pub branch: usize,
    pub points: Vec<(f64, f64)>,
    /// How the backward and forward halves ended.
    pub ends: [Termination; 2],
}

fn line_through(
    chart: &SurfaceChart,
    kind: FieldKind,
    seed: (f64, f64),
    branch: usize,
    opts: &TraceOptions,
) -> Option<FieldLine> {
    let fwd = trace_line(chart, kind, seed, branch, opts).ok()?;
    let dir = fwd.points.get(1).map(|p| (seed.0 - p.0, seed.1 - p.1))?;
    let back = trace_from(chart, kind, seed, dir, opts).ok()?;
    let mut points: Vec<(f64, f64)> = back.points.iter().rev().copied().collect();
    points.extend(fwd.points.iter().skip(1));
    Some(FieldLine {
        seed,
        branch,
        points,
        ends: [back.termination, fwd.termination],
    })
}

/// Lines through the centers of an `su × sv` seed grid, one per branch.
pub fn seeded_lines(
    chart: &SurfaceChart,
    kind: FieldKind,
    su: usize,
    sv: usize,
    opts: &TraceOptions,
) -> Vec<FieldLine> {
    let d = chart.domain;
    let seeds: Vec<(f64, f64)> = (0..sv)
        .flat_map(|j| {
            (0..su).map(move |i| {
                (
                    d.u_min + (i as f64 + 0.5) / su as f64 * (d.u_max - d.u_min),
                    d.v_min + (j as f64 + 0.5) / sv as f64 * (d.v_max - d.v_min),
                )
            })
        })
        .collect();
    let chunk = seeds.len().div_ceil(workers()).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut out = Vec::new();
                    for &seed in part {
                        let Ok(pg) = build_point_geometry(chart, seed.0, seed.1) else { continue };
                        let Ok(set) = geodev_core::fields::field_directions(&pg, kind, opts.tol)
                        else {
                            continue;
                        };
                        if set.identically_zero {
                            continue;
                        }
                        for b in 0..set.len() {
                            out.extend(line_through(chart, kind, seed, b, opts));
                        }
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("trace worker panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldPlot {
    pub surface: String,
    pub kind: FieldKind,
    pub scan: GridScan,
    /// Only for the extremal frontal field.
    pub discriminant: Option<Discriminant>,
    pub lines: Vec<FieldLine>,
    /// Every grid node satisfies the field equation in all directions.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct FieldOptions {
    pub grid: (usize, usize),
    pub seed_grid: (usize, usize),
    pub trace: TraceOptions,
}

pub fn field_plot(chart: &SurfaceChart, kind: FieldKind, opts: &FieldOptions) -> Result<FieldPlot> {
    let (nu, nv) = opts.grid;
    let scan = parallel_scan(chart, kind, nu, nv, opts.trace.tol)?;
    let degenerate = scan
        .cells
        .iter()
        .all(|c| matches!(c.count, RootCount::Infinite | RootCount::Singular));
    let discriminant = if kind == FieldKind::ExtremalFrontal {
        Some(discriminant_curve(chart, nu, nv)?)
    } else {
        None
    };
    let lines = if degenerate {
        Vec::new()
    } else {
        seeded_lines(chart, kind, opts.seed_grid.0, opts.seed_grid.1, &opts.trace)
    };
    Ok(FieldPlot {
        surface: chart.name.clone(),
        kind,
        scan,
        discriminant,
        lines,
        degenerate,
    })
}
