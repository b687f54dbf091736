//! SVG plot of a point cloud with its minimizing ball.
//!
//! 1D clouds are drawn on a horizontal line. The viewport is the bounding
//! box of the cloud padded by `d_tilde`; dot area is proportional to weight.

use std::fmt::Write as _;

use chm_core::{DensityRecord, PointCloud};

use crate::CliError;

const WIDTH: f64 = 800.0;
const MAX_DOT: f64 = 4.0;

pub fn render(cloud: &PointCloud<'_>, record: &DensityRecord) -> Result<String, CliError> {
    let n = cloud.dim();
    if n > 2 {
        return Err(CliError::Usage(format!("SVG output supports 1D and 2D systems only; this system lives in R^{n}")));
    }
    let xy = |c: &[f64]| (c[0], if n == 2 { c[1] } else { 0.0 });

    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in cloud.iter() {
        let (x, y) = xy(p.coords);
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let pad = record.d_tilde;
    let (x0, y0) = (lo.0 - pad, lo.1 - pad);
    let span_x = hi.0 - lo.0 + 2.0 * pad;
    let span_y = hi.1 - lo.1 + 2.0 * pad;
    let scale = WIDTH / span_x.max(span_y);
    let (w, h) = (span_x * scale, span_y * scale);
    // SVG's y axis points down
    let px = |(x, y): (f64, f64)| ((x - x0) * scale, h - (y - y0) * scale);

    let w_max = cloud.weights().iter().cloned().fold(0.0, f64::max);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<g fill="black">"#);
    for p in cloud.iter() {
        let (cx, cy) = px(xy(p.coords));
        let r = MAX_DOT * (p.weight / w_max).sqrt();
        let _ = writeln!(out, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let (cx, cy) = px(xy(&record.center.coords));
    let (wx, wy) = px(xy(&record.witness.coords));
    let _ = writeln!(
        out,
        r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
        record.d_tilde * scale
    );
    let _ = writeln!(
        out,
        r#"<line x1="{cx:.3}" y1="{cy:.3}" x2="{wx:.3}" y2="{wy:.3}" stroke="gray" stroke-dasharray="4 3"/>"#
    );
    let _ = writeln!(
        out,
        r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.1}" fill="crimson"><title>center {}</title></circle>"#,
        MAX_DOT + 2.0,
        record.center.code
    );
    let _ = writeln!(
        out,
        r#"<circle cx="{wx:.3}" cy="{wy:.3}" r="{:.1}" fill="darkorange"><title>witness {}</title></circle>"#,
        MAX_DOT + 2.0,
        record.witness.code
    );
    out.push_str("</svg>\n");
    Ok(out)
}
