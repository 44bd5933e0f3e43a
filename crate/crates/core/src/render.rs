//! SVG route maps for coordinate-mode instances.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId, Point};
use crate::route::Schedule;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 40.0;
const LEGEND_ROW: f64 = 18.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

/// Colour for sensor `i`: the fixed palette first, then evenly spread hues.
fn colour(i: usize) -> String {
    match PALETTE.get(i) {
        Some(c) => c.to_string(),
        None => format!("hsl({},70%,45%)", (i * 137) % 360),
    }
}

/// Draws chargers as squares, targets as circles (filled when covered) and
/// one coloured route per sensor, with a legend below the map.
pub fn render_svg(inst: &Instance, schedule: &Schedule) -> Result<String> {
    let coords = inst.coords().ok_or_else(|| Error::Input("rendering requires coordinates".into()))?;
    let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in coords {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let scale = (WIDTH - 2.0 * MARGIN) / span;
    // SVG y grows downwards; flip so the map reads like a plot.
    let at = |node: NodeId| {
        let p = inst.point(node).expect("coordinate mode");
        (MARGIN + (p.x - lo.x) * scale, MARGIN + (hi.y - p.y) * scale)
    };
    let map_height = 2.0 * MARGIN + (hi.y - lo.y) * scale;
    let height = map_height + LEGEND_ROW * (schedule.itineraries.len() as f64 + 1.0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for (i, it) in schedule.itineraries.iter().enumerate() {
        let mut points = Vec::new();
        for seg in it.route.segments() {
            points.push(at(NodeId::Charger(seg.start)));
            points.extend(seg.via.iter().map(|&t| at(NodeId::Target(t))));
        }
        if let Some(&first) = points.first() {
            points.push(first);
        }
        let path: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        // Offset sensors sharing a loop slightly so every colour stays visible.
        let shift = i as f64 * 1.5;
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2" stroke-opacity="0.8" transform="translate({shift:.1},{shift:.1})"/>"#,
            path.join(" "),
            colour(i)
        );
    }

    for t in 0..inst.n_targets() {
        let (x, y) = at(NodeId::Target(t));
        let fill = if schedule.covered.contains(&t) { "black" } else { "white" };
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}" stroke="black"/>"#);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="10">t{t}</text>"#, x + 6.0, y - 6.0);
    }
    for c in 0..inst.n_chargers() {
        let (x, y) = at(NodeId::Charger(c));
        let _ = writeln!(svg, r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="gold" stroke="black"/>"#, x - 5.0, y - 5.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="10">c{c}</text>"#, x + 7.0, y - 7.0);
    }

    let mut y = map_height;
    let _ = writeln!(
        svg,
        r#"<text x="{MARGIN:.0}" y="{y:.0}" font-size="12">{}: {} of {} targets covered</text>"#,
        schedule.variant,
        schedule.covered.len(),
        inst.n_targets()
    );
    for (i, it) in schedule.itineraries.iter().enumerate() {
        y += LEGEND_ROW;
        let _ = writeln!(
            svg,
            r#"<line x1="{MARGIN:.0}" y1="{:.0}" x2="{:.0}" y2="{:.0}" stroke="{}" stroke-width="3"/>"#,
            y - 4.0,
            MARGIN + 20.0,
            y - 4.0,
            colour(i)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.0}" y="{y:.0}" font-size="12">sensor {} ({} segments, length {:.3})</text>"#,
            MARGIN + 26.0,
            it.sensor,
            it.route.segments().len(),
            it.route.total_length()
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Fleet;
    use crate::kernel::KernelConfig;
    use crate::rcsc::solve_rcsc_tc_ge_tt;
    use crate::route::Variant;

    fn instance(sensors: usize) -> Instance {
        let targets = [Point::new(1.0, 0.0), Point::new(0.0, 1.0), Point::new(-1.0, 0.0)];
        let fleet = Fleet { sensors, speed: 1.0, sweep_period: 3.0, charge_period: 6.0 };
        Instance::euclidean(&targets, &[Point::new(0.0, 0.0)], fleet)
    }

    #[test]
    fn empty_schedule_draws_nodes() {
        let svg = render_svg(&instance(1), &Schedule::empty(Variant::RcscTcGeTt)).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<polyline").count(), 0);
    }

    #[test]
    fn two_sensors_two_colours() {
        let inst = instance(2);
        let (schedule, _) = solve_rcsc_tc_ge_tt(&inst, &KernelConfig::exact()).unwrap();
        assert_eq!(schedule.itineraries.len(), 2);
        let svg = render_svg(&inst, &schedule).unwrap();
        assert!(svg.contains(PALETTE[0]) && svg.contains(PALETTE[1]));
        assert_eq!(svg, render_svg(&inst, &schedule).unwrap());
    }

    #[test]
    fn matrix_mode_is_rejected() {
        let fleet = Fleet { sensors: 1, speed: 1.0, sweep_period: 1.0, charge_period: 1.0 };
        let inst = Instance::with_matrix(1, 1, vec![0.0, 1.0, 1.0, 0.0], fleet).unwrap();
        let err = render_svg(&inst, &Schedule::empty(Variant::RcscTcGeTt)).unwrap_err();
        assert!(err.to_string().contains("rendering requires coordinates"));
    }
}
