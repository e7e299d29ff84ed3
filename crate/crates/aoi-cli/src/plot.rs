//! SVG rendering of sweep tables: log-scale violation curves with bound
//! overlays. Pure string assembly, so identical tables produce identical
//! bytes.

use anyhow::{bail, Result};

use crate::runner::Row;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 600.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 390.0;

struct Series {
    label: &'static str,
    color: &'static str,
    points: Vec<(f64, f64)>,
}

type ColumnGetter = fn(&Row) -> Option<f64>;

fn collect_series(rows: &[Row]) -> Vec<Series> {
    let defs: [(&'static str, &'static str, ColumnGetter); 4] = [
        ("simulated", "#1f77b4", |r| r.sim_p),
        ("analytic", "#2ca02c", |r| r.analytic_p),
        ("upper bound", "#d62728", |r| r.phi),
        ("lower bound", "#9467bd", |r| r.lower_bound),
    ];
    defs.iter()
        .map(|(label, color, get)| Series {
            label,
            color,
            points: rows
                .iter()
                .filter_map(|r| get(r).map(|v| (r.sweep, v)))
                .filter(|&(_, v)| v > 0.0)
                .collect(),
        })
        .filter(|s| !s.points.is_empty())
        .collect()
}

/// Renders the table as an SVG chart (log-scale y axis).
pub fn render_svg(rows: &[Row], x_label: &str) -> Result<String> {
    if rows.is_empty() {
        bail!("nothing to plot: the table is empty");
    }
    let series = collect_series(rows);
    if series.is_empty() {
        bail!("nothing to plot: no positive values in the table");
    }

    let xs: Vec<f64> = rows.iter().map(|r| r.sweep).collect();
    let (mut x_lo, mut x_hi) = (xs[0], xs[xs.len() - 1]);
    if x_lo == x_hi {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for s in &series {
        for &(_, v) in &s.points {
            y_lo = y_lo.min(v);
            y_hi = y_hi.max(v);
        }
    }
    let dec_lo = y_lo.log10().floor();
    let dec_hi = (y_hi.log10().ceil()).max(dec_lo + 1.0);

    let x_of = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * (RIGHT - LEFT);
    let y_of = |v: f64| {
        let t = (v.log10() - dec_lo) / (dec_hi - dec_lo);
        BOTTOM - t * (BOTTOM - TOP)
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" \
         stroke=\"#333333\" stroke-width=\"1\"/>\n",
        RIGHT - LEFT,
        BOTTOM - TOP
    ));

    // y gridlines and labels at each decade
    let mut dec = dec_lo as i64;
    while dec <= dec_hi as i64 {
        let y = y_of(10f64.powi(dec as i32));
        svg.push_str(&format!(
            "<line x1=\"{LEFT}\" y1=\"{y:.2}\" x2=\"{RIGHT}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\" \
             font-family=\"sans-serif\">1e{dec}</text>\n",
            LEFT - 6.0,
            y + 4.0
        ));
        dec += 1;
    }

    // x ticks at the sweep points (or endpoints when dense)
    let ticks: Vec<f64> = if xs.len() <= 12 {
        xs.clone()
    } else {
        vec![xs[0], xs[xs.len() / 2], xs[xs.len() - 1]]
    };
    for &x in &ticks {
        let px = x_of(x);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{BOTTOM}\" x2=\"{px:.2}\" y2=\"{:.2}\" \
             stroke=\"#333333\" stroke-width=\"1\"/>\n",
            BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">{x}</text>\n",
            BOTTOM + 18.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" \
         font-family=\"sans-serif\">{x_label}</text>\n",
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 6.0
    ));

    // series
    for s in &series {
        let coords: Vec<String> = s
            .points
            .iter()
            .map(|&(x, v)| format!("{:.2},{:.2}", x_of(x), y_of(v)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
            s.color,
            coords.join(" ")
        ));
        for &(x, v) in &s.points {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.6\" fill=\"{}\"/>\n",
                x_of(x),
                y_of(v),
                s.color
            ));
        }
    }

    // legend
    for (i, s) in series.iter().enumerate() {
        let y = TOP + 14.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{}\" \
             stroke-width=\"1.8\"/>\n",
            RIGHT - 150.0,
            RIGHT - 124.0,
            s.color
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\">{}</text>\n",
            RIGHT - 118.0,
            y + 4.0,
            s.label
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
