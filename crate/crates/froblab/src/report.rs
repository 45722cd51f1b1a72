//! CSV, JSON, and SVG emission for batches and tail estimates.
//!
//! CSV output is UTF-8 with LF line endings, `.` decimal separator, and
//! a header row. Floats render in shortest round-trip form, so repeated
//! runs produce byte-identical files.

use serde::Serialize;

use crate::sampler::SampleBatch;
use crate::stats::TailEstimate;

/// One vector per row, columns `a1..an`.
pub fn batch_csv(batch: &SampleBatch) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = (1..=batch.spec.n).map(|i| format!("a{i}")).collect();
    w.write_record(&header).expect("csv write");
    for v in &batch.vectors {
        w.write_record(v.entries().iter().map(|e| e.to_string()))
            .expect("csv write");
    }
    finish(w)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("json serialization");
    out.push('\n');
    out
}

pub fn batch_json(batch: &SampleBatch) -> String {
    to_json_pretty(batch)
}

/// Columns `threshold,survival` plus an optional named third column
/// (a Markov bound, a scaled tail, ...).
pub fn tail_csv(tail: &TailEstimate, extra: Option<(&str, &[f64])>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    match extra {
        Some((name, values)) => {
            assert_eq!(values.len(), tail.thresholds.len());
            w.write_record(["threshold", "survival", name]).expect("csv write");
            for ((thr, surv), v) in tail.thresholds.iter().zip(&tail.survival).zip(values) {
                w.write_record([thr.to_string(), surv.to_string(), v.to_string()])
                    .expect("csv write");
            }
        }
        None => {
            w.write_record(["threshold", "survival"]).expect("csv write");
            for (thr, surv) in tail.thresholds.iter().zip(&tail.survival) {
                w.write_record([thr.to_string(), surv.to_string()])
                    .expect("csv write");
            }
        }
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv output is utf-8")
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 56.0;

/// Self-contained log-log survival plot: the empirical series plus a
/// dashed guide line of the given slope anchored at the first positive
/// point.
pub fn svg_tail_plot(tail: &TailEstimate, reference_slope: f64, title: &str) -> String {
    let points: Vec<(f64, f64)> = tail
        .thresholds
        .iter()
        .zip(&tail.survival)
        .filter(|&(_, &s)| s > 0.0)
        .map(|(&t, &s)| (t.log10(), s.log10()))
        .collect();

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{title}</text>\n",
        WIDTH / 2.0
    ));

    if points.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
             text-anchor=\"middle\">no positive survival values</text>\n",
            WIDTH / 2.0,
            HEIGHT / 2.0
        ));
        svg.push_str("</svg>\n");
        return svg;
    }

    let mut x_min = tail.thresholds.first().expect("non-empty grid").log10();
    let mut x_max = tail.thresholds.last().expect("non-empty grid").log10();
    if x_max - x_min < 1e-9 {
        x_min -= 0.5;
        x_max += 0.5;
    }
    let y_max = 0.0;
    let y_min = points
        .iter()
        .map(|p| p.1)
        .fold(f64::INFINITY, f64::min)
        .floor()
        .min(-1.0);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    svg.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"black\"/>\n"
    ));

    // y ticks at decades
    let mut decade = 0i64;
    while (decade as f64) >= y_min {
        let y = py(decade as f64);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#cccccc\"/>\n",
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">1e{decade}</text>\n",
            MARGIN_LEFT - 6.0,
            y + 4.0
        ));
        decade -= 1;
    }

    // x ticks at the grid thresholds
    for &thr in &tail.thresholds {
        let x = px(thr.log10());
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#cccccc\"/>\n",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{thr}</text>\n",
            MARGIN_TOP + plot_h + 16.0
        ));
    }

    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">threshold</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 16.0
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">survival</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    // dashed guide through the first point with the reference slope
    let (x0, y0) = points[0];
    let mut x_end = x_max;
    let mut y_end = y0 + reference_slope * (x_end - x0);
    if y_end < y_min && reference_slope < 0.0 {
        x_end = x0 + (y_min - y0) / reference_slope;
        y_end = y_min;
    }
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888888\" \
         stroke-dasharray=\"6 4\"/>\n",
        px(x0),
        py(y0),
        px(x_end),
        py(y_end)
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
         fill=\"#555555\">guide slope {reference_slope:.4}</text>\n",
        MARGIN_LEFT + 8.0,
        MARGIN_TOP + 16.0
    ));

    let poly: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
        .collect();
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n",
        poly.join(" ")
    ));
    for &(x, y) in &points {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#1f77b4\"/>\n",
            px(x),
            py(y)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{self, SampleSpec};
    use crate::stats::{self, Variable};

    #[test]
    fn batch_csv_has_header_and_lf_rows() {
        let batch = sampler::enumerate_all(2, 2).unwrap();
        let csv = batch_csv(&batch);
        assert_eq!(csv, "a1,a2\n1,1\n1,2\n2,1\n");
    }

    #[test]
    fn batch_json_round_trips() {
        let batch = sampler::sample_uniform(&SampleSpec::monte_carlo(5, 2, 3, 10)).unwrap();
        let json = batch_json(&batch);
        let back: sampler::SampleBatch = serde_json::from_str(&json).unwrap();
        assert_eq!(back, batch);
    }

    #[test]
    fn tail_csv_columns() {
        let batch = sampler::enumerate_all(3, 2).unwrap();
        let series = stats::eval_series(&batch, Variable::AgmRatio, 1).unwrap();
        let tail = stats::estimate_tail(&series, &[1.0, 1.1]).unwrap();
        let plain = tail_csv(&tail, None);
        assert!(plain.starts_with("threshold,survival\n"));
        let scaled: Vec<f64> = tail
            .thresholds
            .iter()
            .zip(&tail.survival)
            .map(|(t, s)| t * s)
            .collect();
        let with_extra = tail_csv(&tail, Some(("scaled", &scaled)));
        assert!(with_extra.starts_with("threshold,survival,scaled\n"));
        assert_eq!(with_extra.lines().count(), 3);
    }

    #[test]
    fn svg_is_self_contained_and_deterministic() {
        let batch = sampler::sample_uniform(&SampleSpec::monte_carlo(50, 3, 9, 2000)).unwrap();
        let series = stats::eval_series(&batch, Variable::AgmRatio, 1).unwrap();
        let tail = stats::estimate_tail(&series, &[1.25, 1.5, 2.0, 3.0]).unwrap();
        let a = svg_tail_plot(&tail, -2.0, "agm ratio tail");
        let b = svg_tail_plot(&tail, -2.0, "agm ratio tail");
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert!(!a.contains("href"), "no external assets");
    }
}
