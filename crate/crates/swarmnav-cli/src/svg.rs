//! Self-contained SVG rendering of a scene plus recorded traces: obstacles
//! filled, start/target markers, one colored polyline per group, and
//! distinct glyphs for hit/leave/meet/split events.

use std::collections::HashMap;
use std::fmt::Write as _;

use swarmnav::scene::Scene;

use crate::trace::TraceLine;

/// Per-group polyline point cap; beyond it samples are thinned evenly.
/// Event glyphs are never dropped.
const MAX_POINTS_PER_GROUP: usize = 10_000;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#e377c2", "#8c564b",
    "#bcbd22", "#636363",
];

struct Group {
    name: String,
    samples: Vec<[f64; 2]>,
    events: Vec<(String, [f64; 2], Option<usize>, f64)>,
}

pub fn render(scene: &Scene, lines: &[TraceLine]) -> String {
    // Groups in first-appearance order, so colors are stable across reruns.
    let mut order: Vec<Group> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for line in lines {
        let gi = *index.entry(line.group.as_str()).or_insert_with(|| {
            order.push(Group {
                name: line.group.clone(),
                samples: Vec::new(),
                events: Vec::new(),
            });
            order.len() - 1
        });
        match &line.event {
            None => order[gi].samples.push(line.pos),
            Some(e) => order[gi]
                .events
                .push((e.clone(), line.pos, line.obstacle, line.t)),
        }
    }

    // World bounding box over everything that gets drawn.
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    let mut grow = |x: f64, y: f64| {
        min[0] = min[0].min(x);
        min[1] = min[1].min(y);
        max[0] = max[0].max(x);
        max[1] = max[1].max(y);
    };
    grow(scene.start.x, scene.start.y);
    grow(scene.target.x, scene.target.y);
    for poly in &scene.obstacles {
        for v in poly.vertices() {
            grow(v.x, v.y);
        }
    }
    for line in lines {
        grow(line.pos[0], line.pos[1]);
    }
    let span = ((max[0] - min[0]).max(max[1] - min[1])).max(1e-9);
    let margin = 0.05 * span;
    min[0] -= margin;
    min[1] -= margin;
    max[0] += margin;
    max[1] += margin;

    let world_w = max[0] - min[0];
    let world_h = max[1] - min[1];
    let width = 900.0;
    let scale = width / world_w;
    let height = world_h * scale;
    // SVG's y axis points down; the scene's points up.
    let tx = |x: f64| (x - min[0]) * scale;
    let ty = |y: f64| (max[1] - y) * scale;
    let fmt = |v: f64| format!("{v:.2}");

    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = fmt(width),
        h = fmt(height)
    )
    .unwrap();
    writeln!(
        s,
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        fmt(width),
        fmt(height)
    )
    .unwrap();

    // Obstacles.
    for (i, poly) in scene.obstacles.iter().enumerate() {
        let pts: Vec<String> = poly
            .vertices()
            .iter()
            .map(|v| format!("{},{}", fmt(tx(v.x)), fmt(ty(v.y))))
            .collect();
        writeln!(
            s,
            "  <polygon points=\"{}\" fill=\"#cfd8dc\" stroke=\"#455a64\" stroke-width=\"1\"><title>obstacle {i}</title></polygon>",
            pts.join(" ")
        )
        .unwrap();
    }

    // Start-target line for context.
    writeln!(
        s,
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#90a4ae\" stroke-width=\"0.8\" stroke-dasharray=\"6,4\"/>",
        fmt(tx(scene.start.x)),
        fmt(ty(scene.start.y)),
        fmt(tx(scene.target.x)),
        fmt(ty(scene.target.y))
    )
    .unwrap();

    // Group paths.
    for (gi, group) in order.iter().enumerate() {
        let color = PALETTE[gi % PALETTE.len()];
        let n = group.samples.len();
        if n >= 2 {
            let stride = n.div_ceil(MAX_POINTS_PER_GROUP).max(1);
            let mut pts: Vec<String> = group
                .samples
                .iter()
                .step_by(stride)
                .map(|p| format!("{},{}", fmt(tx(p[0])), fmt(ty(p[1]))))
                .collect();
            if (n - 1) % stride != 0 {
                let p = group.samples[n - 1];
                pts.push(format!("{},{}", fmt(tx(p[0])), fmt(ty(p[1]))));
            }
            writeln!(
                s,
                "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.4\" stroke-opacity=\"0.85\"><title>group {}</title></polyline>",
                pts.join(" "),
                group.name
            )
            .unwrap();
        }
    }

    // Event glyphs on top of the paths.
    for (gi, group) in order.iter().enumerate() {
        let color = PALETTE[gi % PALETTE.len()];
        for (event, pos, obstacle, t) in &group.events {
            let (x, y) = (tx(pos[0]), ty(pos[1]));
            let title = match obstacle {
                Some(o) => format!("{event} group {} t={t} obstacle {o}", group.name),
                None => format!("{event} group {} t={t}", group.name),
            };
            match event.as_str() {
                "hit" => writeln!(
                    s,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{color}\" stroke=\"#263238\" stroke-width=\"0.7\"><title>{title}</title></circle>",
                    fmt(x), fmt(y)
                )
                .unwrap(),
                "leave" => writeln!(
                    s,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#ffffff\" stroke=\"{color}\" stroke-width=\"1.5\"><title>{title}</title></circle>",
                    fmt(x), fmt(y)
                )
                .unwrap(),
                "meet" => writeln!(
                    s,
                    "  <path d=\"M {} {} L {} {} L {} {} L {} {} Z\" fill=\"{color}\" stroke=\"#263238\" stroke-width=\"0.5\"><title>{title}</title></path>",
                    fmt(x), fmt(y - 4.0), fmt(x + 4.0), fmt(y), fmt(x), fmt(y + 4.0), fmt(x - 4.0), fmt(y)
                )
                .unwrap(),
                "split" => writeln!(
                    s,
                    "  <path d=\"M {} {} L {} {} M {} {} L {} {}\" stroke=\"{color}\" stroke-width=\"1.6\" fill=\"none\"><title>{title}</title></path>",
                    fmt(x - 3.0), fmt(y - 3.0), fmt(x + 3.0), fmt(y + 3.0),
                    fmt(x - 3.0), fmt(y + 3.0), fmt(x + 3.0), fmt(y - 3.0)
                )
                .unwrap(),
                // Arrivals coincide with the target marker.
                _ => {}
            }
        }
    }

    // Start and target markers.
    for (p, fill, label) in [
        (scene.start, "#2e7d32", "S"),
        (scene.target, "#c62828", "T"),
    ] {
        writeln!(
            s,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{fill}\" stroke=\"#ffffff\" stroke-width=\"1\"/>",
            fmt(tx(p.x)),
            fmt(ty(p.y))
        )
        .unwrap();
        writeln!(
            s,
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{fill}\">{label}</text>",
            fmt(tx(p.x) + 6.0),
            fmt(ty(p.y) - 6.0)
        )
        .unwrap();
    }

    s.push_str("</svg>\n");
    s
}
