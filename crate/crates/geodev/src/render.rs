//! SVG and CSV output for field plots. Both are deterministic for fixed
//! inputs.

use std::fmt::Write;

use geodev_core::fields::{GridScan, RootCount};

use crate::field::FieldPlot;

pub const SVG_SCHEMA: &str = "geodev.field-svg/1";
pub const CSV_SCHEMA: &str = "geodev.grid-csv/1";

/// Fixed precision keeps the SVG compact; `-0` is normalized away.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn path_data(points: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (k, p) in points.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if k == 0 { "M" } else { " L" }, num(p.0), num(p.1));
    }
    d
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn field_svg(plot: &FieldPlot) -> String {
    let d = plot.scan.domain;
    let (w, h) = (d.u_max - d.u_min, d.v_max - d.v_min);
    let px_w = 800.0;
    let px_h = (px_w * h / w).round();
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, "<!-- schema: {SVG_SCHEMA} -->");
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}" data-schema="{SVG_SCHEMA}" data-surface="{}" data-kind="{}">"#,
        num(px_w),
        num(px_h),
        num(d.u_min),
        num(d.v_min),
        num(w),
        num(h),
        escape(&plot.surface),
        plot.kind.name()
    );
    let _ = writeln!(
        s,
        "<style>.frame{{fill:#fff;stroke:#999;stroke-width:1;vector-effect:non-scaling-stroke}} \
         .field-line{{fill:none;stroke:#1f4e99;stroke-width:0.8;vector-effect:non-scaling-stroke}} \
         .discriminant{{fill:none;stroke:#c0392b;stroke-width:3;vector-effect:non-scaling-stroke}} \
         .annotation{{font-family:sans-serif;fill:#333}}</style>"
    );
    // flip v so it increases upwards
    let _ = writeln!(s, r#"<g transform="matrix(1 0 0 -1 0 {})">"#, num(d.v_min + d.v_max));
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{}" y="{}" width="{}" height="{}"/>"#,
        num(d.u_min),
        num(d.v_min),
        num(w),
        num(h)
    );
    for line in &plot.lines {
        if line.points.len() < 2 {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<path class="field-line" data-branch="{}" d="{}"/>"#,
            line.branch,
            path_data(&line.points)
        );
    }
    if let Some(disc) = &plot.discriminant {
        for poly in &disc.polylines {
            let _ = writeln!(s, r#"<path class="discriminant" d="{}"/>"#, path_data(poly));
        }
    }
    let _ = writeln!(s, "</g>");
    if plot.degenerate {
        let _ = writeln!(
            s,
            r#"<text class="annotation" x="{}" y="{}" font-size="{}">degenerate: all directions</text>"#,
            num(d.u_min + 0.05 * w),
            num(d.v_min + 0.1 * h),
            num(0.05 * w.min(h))
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

fn count_str(c: RootCount) -> String {
    match c {
        RootCount::Finite(n) => n.to_string(),
        RootCount::Infinite => "inf".into(),
        RootCount::Singular => "singular".into(),
    }
}

/// One row per grid node: indices, parameters, root count, point class and
/// `;`-separated angles. Floats use the shortest round-trip form.
pub fn grid_csv(surface: &str, scan: &GridScan) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# schema: {CSV_SCHEMA}");
    let _ = writeln!(
        s,
        "# surface: {surface}; kind: {}; grid: {}x{}",
        scan.kind.name(),
        scan.nu,
        scan.nv
    );
    let _ = writeln!(s, "i,j,u,v,count,class,angles");
    for j in 0..scan.nv {
        for i in 0..scan.nu {
            let c = scan.cell(i, j);
            let class = c.class.map_or("singular", |t| t.as_str());
            let angles: Vec<String> = c.angles.iter().map(|a| format!("{a:?}")).collect();
            let _ = writeln!(
                s,
                "{i},{j},{:?},{:?},{},{class},{}",
                c.u,
                c.v,
                count_str(c.count),
                angles.join(";")
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_are_compact() {
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(-0.0000001), "0");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(-1.25), "-1.25");
    }
}
