//! Static line charts for [`PlotBundle`]s.
//!
//! The output depends only on the bundle; the second line is a comment with
//! the toolkit version.

use std::fmt::Write;

use loadshape_core::report::{PlotBundle, PlotRole, PlotSeries};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A 1/2/5 x 10^n step giving roughly `target` intervals over `span`.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let magnitude = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * magnitude).find(|s| *s >= raw).unwrap_or(10.0 * magnitude)
}

fn ticks(lo: f64, hi: f64, target: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, target);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| Some(acc.map_or((v, v), |(lo, hi): (f64, f64)| (lo.min(v), hi.max(v)))))
}

fn style(series: &PlotSeries, index: usize, shared_role: bool) -> (String, &'static str) {
    let color = if shared_role { PALETTE[index % PALETTE.len()] } else { PALETTE[0] };
    match series.role() {
        PlotRole::Member => ("stroke=\"#9a9a9a\" stroke-width=\"1\" stroke-opacity=\"0.7\"".into(), "#9a9a9a"),
        PlotRole::Centroid => (format!("stroke=\"{color}\" stroke-width=\"2.5\""), color),
        PlotRole::Reference => {
            let color = if shared_role { color } else { PALETTE[1] };
            (format!("stroke=\"{color}\" stroke-width=\"2\" stroke-dasharray=\"6 4\""), color)
        }
        PlotRole::Curve => ("stroke=\"#000000\" stroke-width=\"2\"".into(), "#000000"),
        PlotRole::Marker => (format!("stroke=\"{}\" stroke-width=\"2\"", PALETTE[0]), PALETTE[0]),
    }
}

pub fn render_svg(bundle: &PlotBundle) -> String {
    let top = 40.0 + 16.0 * bundle.annotations.len() as f64;
    let (plot_w, plot_h) = (WIDTH - LEFT - RIGHT, HEIGHT - top - BOTTOM);
    let (mut x0, mut x1) = range(bundle.series.iter().flat_map(|s| s.x().iter().copied())).unwrap_or((0.0, 1.0));
    let (y_lo, mut y1) = range(bundle.series.iter().flat_map(|s| s.y().iter().copied())).unwrap_or((0.0, 1.0));
    let mut y0 = y_lo.min(0.0);
    if x1 <= x0 {
        (x0, x1) = (x0 - 1.0, x1 + 1.0);
    }
    if y1 <= y0 {
        (y0, y1) = (y0 - 1.0, y1 + 1.0);
    }
    y1 += (y1 - y0) * 0.05;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| top + (1.0 - (y - y0) / (y1 - y0)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(svg, "<!-- loadshape {} -->", crate::TOOLKIT_VERSION);
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>");
    let _ = writeln!(svg, "<text x=\"{}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{}</text>", LEFT + plot_w / 2.0, escape(&bundle.title));
    for (i, note) in bundle.annotations.iter().enumerate() {
        let _ = writeln!(svg, "<text x=\"{LEFT}\" y=\"{}\" fill=\"#555555\">{}</text>", 40.0 + 16.0 * i as f64, escape(note));
    }

    // Axes, grid and tick labels.
    let _ = writeln!(svg, "<g stroke=\"#dddddd\" stroke-width=\"1\">");
    let x_ticks = ticks(x0, x1, 12.0);
    let y_ticks = ticks(y0, y1, 6.0);
    for &t in &y_ticks {
        let _ = writeln!(svg, "<line x1=\"{LEFT}\" y1=\"{0:.2}\" x2=\"{1:.2}\" y2=\"{0:.2}\"/>", py(t), LEFT + plot_w);
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        "<path d=\"M{LEFT} {top:.2} V{0:.2} H{1:.2}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>",
        top + plot_h,
        LEFT + plot_w
    );
    for &t in &x_ticks {
        let _ = writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", px(t), top + plot_h + 16.0, tick_label(t));
    }
    for &t in &y_ticks {
        let _ = writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>", LEFT - 6.0, py(t) + 4.0, tick_label(t));
    }
    let _ = writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", LEFT + plot_w / 2.0, HEIGHT - 12.0, escape(&bundle.x_label));
    let _ = writeln!(
        svg,
        "<text transform=\"translate(16 {:.2}) rotate(-90)\" text-anchor=\"middle\">{}</text>",
        top + plot_h / 2.0,
        escape(&bundle.y_label)
    );

    // Members first so the highlighted series are drawn on top.
    let mut order: Vec<&PlotSeries> = bundle.series.iter().filter(|s| s.role() == PlotRole::Member).collect();
    order.extend(bundle.series.iter().filter(|s| s.role() != PlotRole::Member));
    let mut legend = Vec::new();
    let mut role_index = std::collections::BTreeMap::new();
    for s in order {
        let shared = bundle.series_with_role(s.role()).count() > 1;
        let index = role_index.entry(s.role()).or_insert(0usize);
        let (attrs, color) = style(s, *index, shared);
        *index += 1;
        if s.role() == PlotRole::Marker {
            for (x, y) in s.points() {
                let _ = writeln!(svg, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"6\" fill=\"none\" {attrs}/>", px(x), py(y));
            }
        } else {
            let points: Vec<String> = s.points().map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(svg, "<polyline fill=\"none\" {attrs} points=\"{}\"/>", points.join(" "));
            if s.role() == PlotRole::Curve {
                for (x, y) in s.points() {
                    let _ = writeln!(svg, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>", px(x), py(y));
                }
            }
        }
        if s.role() != PlotRole::Member {
            legend.push((s.name().to_string(), color));
        }
    }
    if bundle.series.iter().any(|s| s.role() == PlotRole::Member) {
        legend.insert(0, ("members".to_string(), "#9a9a9a"));
    }
    for (i, (name, color)) in legend.iter().enumerate() {
        let y = top + 10.0 + 18.0 * i as f64;
        let x = LEFT + plot_w + 14.0;
        let _ = writeln!(svg, "<line x1=\"{x}\" y1=\"{y:.2}\" x2=\"{}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"3\"/>", x + 18.0);
        let _ = writeln!(svg, "<text x=\"{}\" y=\"{:.2}\">{}</text>", x + 24.0, y + 4.0, escape(name));
    }
    svg.push_str("</svg>\n");
    svg
}
