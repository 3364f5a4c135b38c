//! Static SVG line chart: power in dBm against bits per channel use.

use std::fmt::Write;

use anyhow::bail;

use crate::curve::BoundCurve;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Round step near `span / target` from {1, 2, 5}·10^k.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}

fn label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    format!("{v:.decimals$}")
}

fn ticks(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

pub fn render(curve: &BoundCurve) -> anyhow::Result<String> {
    if curve.rows.is_empty() {
        bail!("refusing to plot an empty curve");
    }
    let x_lo = curve.rows.first().map(|r| r.power_dbm).unwrap_or(0.0);
    let mut x_hi = curve.rows.last().map(|r| r.power_dbm).unwrap_or(1.0);
    if x_hi <= x_lo {
        x_hi = x_lo + 1.0;
    }
    let y_max = curve
        .rows
        .iter()
        .flat_map(|r| r.values.iter().copied())
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let y_step = tick_step(y_max.max(1e-3), 8.0);
    let y_hi = (y_max / y_step).ceil().max(1.0) * y_step;

    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * pw;
    let sy = |y: f64| TOP + ph - y / y_hi * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(
        s,
        r#"<path d="M{LEFT} {TOP}H{:.1}V{:.1}H{LEFT}Z" fill="none" stroke="black"/>"#,
        LEFT + pw,
        TOP + ph
    )?;

    let x_step = tick_step(x_hi - x_lo, 10.0);
    for x in ticks(x_lo, x_hi, x_step) {
        let px = sx(x);
        writeln!(
            s,
            r##"<line x1="{px:.1}" y1="{TOP}" x2="{px:.1}" y2="{:.1}" stroke="#dddddd"/>"##,
            TOP + ph
        )?;
        writeln!(
            s,
            r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + ph + 16.0,
            label(x, x_step)
        )?;
    }
    for y in ticks(0.0, y_hi, y_step) {
        let py = sy(y);
        writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#dddddd"/>"##,
            LEFT + pw
        )?;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py + 4.0,
            label(y, y_step)
        )?;
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">power (dBm)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 16.0
    )?;
    writeln!(
        s,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">bits per channel use</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    )?;

    for (j, &model) in curve.models.iter().enumerate() {
        let color = PALETTE[j % PALETTE.len()];
        let points: Vec<String> = curve
            .rows
            .iter()
            .filter(|r| r.values[j].is_finite() && !curve.is_flagged(r, model))
            .map(|r| format!("{:.2},{:.2}", sx(r.power_dbm), sy(r.values[j])))
            .collect();
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.join(" ")
        )?;
        let ly = TOP + 16.0 + 16.0 * j as f64;
        writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="1.5"/>"#,
            LEFT + 10.0,
            LEFT + 34.0
        )?;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            LEFT + 40.0,
            ly + 4.0,
            escape(&model.to_string())
        )?;
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_steps_are_round() {
        assert_eq!(tick_step(85.0, 10.0), 10.0);
        assert_eq!(tick_step(12.0, 8.0), 2.0);
        assert_eq!(tick_step(0.3, 8.0), 0.05);
        assert_eq!(label(0.15000000000000002, 0.05), "0.15");
        assert_eq!(label(-30.0, 10.0), "-30");
        assert_eq!(
            ticks(-35.0, 50.0, 10.0),
            vec![-30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0, 40.0, 50.0]
        );
    }
}
