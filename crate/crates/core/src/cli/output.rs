//! CSV and SVG writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::verify::TimeSeries;
use crate::waveforms::ClosedFormWaveform;

use super::CliError;

/// One sample; `None` marks a point inside a singular window.
pub type Row = (f64, Option<(f64, f64)>);

pub fn sample(w: &ClosedFormWaveform, t0: f64, t1: f64, samples: usize) -> Vec<Row> {
    crate::verify::uniform_grid(t0, t1, samples)
        .into_iter()
        .map(|t| (t, w.state(t).ok().map(|s| (s.x, s.xdot))))
        .collect()
}

/// `t,x,xdot` with 17 significant digits; a single blank line per singular gap.
pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from("t,x,xdot\n");
    let mut in_gap = false;
    for (t, v) in rows {
        match v {
            Some((x, xd)) => {
                in_gap = false;
                let _ = writeln!(out, "{t:.16e},{x:.16e},{xd:.16e}");
            }
            None if !in_gap => {
                in_gap = true;
                out.push('\n');
            }
            None => {}
        }
    }
    out
}

pub fn read_csv(text: &str) -> Result<TimeSeries, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "t,x,xdot" => {}
        _ => return Err(CliError::Input("CSV must start with the header t,x,xdot".into())),
    }
    let mut ts = TimeSeries::default();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Input(format!("CSV line {}: bad number", n + 2)))?;
        let [t, x, xd] = vals[..] else {
            return Err(CliError::Input(format!("CSV line {}: expected 3 columns", n + 2)));
        };
        ts.push(t, x, xd);
    }
    Ok(ts)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;

/// Line plot of the given polylines (each a run of points without gaps).
pub fn svg_plot(segments: &[Vec<(f64, f64)>], x_label: &str, y_label: &str, title: &str) -> String {
    let pts = segments.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(s, r#"<line x1="{PAD}" y1="{z:.2}" x2="{}" y2="{z:.2}" stroke="gray" stroke-dasharray="4"/>"#, W - PAD, z = sy(0.0));
    }
    if x0 < 0.0 && x1 > 0.0 {
        let _ = writeln!(s, r#"<line x1="{z:.2}" y1="{PAD}" x2="{z:.2}" y2="{}" stroke="gray" stroke-dasharray="4"/>"#, H - PAD, z = sx(0.0));
    }
    for seg in segments.iter().filter(|s| s.len() > 1) {
        let mut d = String::new();
        for &(x, y) in seg {
            let _ = write!(d, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#, d.trim_end());
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{title}</text>"#, W / 2.0, PAD / 2.0 + 4.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{x_label}</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{y_label}</text>"#,
        H / 2.0,
        H / 2.0
    );
    for (v, x, anchor) in [(x0, PAD, "start"), (x1, W - PAD, "end")] {
        let _ = writeln!(s, r#"<text x="{x}" y="{}" font-size="10" text-anchor="{anchor}">{v:.3}</text>"#, H - PAD + 14.0);
    }
    for (v, y) in [(y0, H - PAD), (y1, PAD + 10.0)] {
        let _ = writeln!(s, r#"<text x="{}" y="{y}" font-size="10" text-anchor="end">{v:.3}</text>"#, PAD - 4.0);
    }
    s.push_str("</svg>\n");
    s
}

/// Splits samples into gap-free runs, also breaking where `|x|` exceeds `clip`
/// so poles render as breaks.
pub fn segments(rows: &[Row], pick: impl Fn(f64, f64, f64) -> (f64, f64), clip: f64) -> Vec<Vec<(f64, f64)>> {
    let mut out = vec![Vec::new()];
    for &(t, v) in rows {
        match v {
            Some((x, xd)) if x.abs() <= clip && xd.is_finite() => out.last_mut().unwrap().push(pick(t, x, xd)),
            _ => {
                if !out.last().unwrap().is_empty() {
                    out.push(Vec::new());
                }
            }
        }
    }
    out.retain(|s| !s.is_empty());
    out
}
