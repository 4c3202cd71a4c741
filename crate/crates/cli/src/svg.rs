//! Static SVG views of datasets. No computation happens here.

use std::fmt::Write as _;

use bosonic_metrology::report::{Dataset, Role};

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f",
];

/// Line plot of every numeric column against the first axis column, log-log
/// when all plotted values are positive; a plain table otherwise.
pub fn render(data: &Dataset) -> String {
    match data.columns.iter().position(|c| c.role == Role::Axis) {
        Some(x) if data.rows.len() >= 2 => plot(data, x),
        _ => table(data),
    }
}

fn positive(v: &[Option<f64>]) -> impl Iterator<Item = f64> + '_ {
    v.iter().flatten().copied().filter(|x| x.is_finite() && *x > 0.0)
}

fn plot(data: &Dataset, xi: usize) -> String {
    let xs: Vec<Option<f64>> = data.rows.iter().map(|r| r[xi]).collect();
    let series: Vec<(usize, Vec<Option<f64>>)> = data
        .columns
        .iter()
        .enumerate()
        .filter(|(j, c)| *j != xi && matches!(c.role, Role::Bound | Role::Strategy { .. }))
        .map(|(j, _)| (j, data.rows.iter().map(|r| r[j]).collect()))
        .collect();
    let all_y: Vec<f64> = series.iter().flat_map(|(_, v)| positive(v).collect::<Vec<_>>()).collect();
    let (x_lo, x_hi) = span(positive(&xs));
    let (y_lo, y_hi) = span(all_y.into_iter());
    let (lx0, lx1) = (x_lo.log10(), x_hi.log10());
    let (ly0, ly1) = (y_lo.log10(), y_hi.log10());
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x.log10() - lx0) / (lx1 - lx0).max(1e-12) * pw;
    let py = |y: f64| TOP + ph - (y.log10() - ly0) / (ly1 - ly0).max(1e-12) * ph;

    let mut s = header();
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for d in (lx0.floor() as i32)..=(lx1.ceil() as i32) {
        let x = 10f64.powi(d);
        if x < x_lo * 0.999 || x > x_hi * 1.001 {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">1e{d}</text>"#,
            px(x),
            TOP + ph + 16.0
        );
    }
    for d in (ly0.floor() as i32)..=(ly1.ceil() as i32) {
        let y = 10f64.powi(d);
        if y < y_lo * 0.999 || y > y_hi * 1.001 {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">1e{d}</text>"#,
            LEFT - 6.0,
            py(y) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 16.0,
        escape(&data.columns[xi].header())
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&data.name)
    );
    for (k, (j, ys)) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let col = &data.columns[*j];
        let dashed = if col.role == Role::Bound { r#" stroke-dasharray="6 4""# } else { "" };
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter_map(|(x, y)| match (x, y) {
                (Some(x), Some(y)) if *x > 0.0 && *y > 0.0 && y.is_finite() => {
                    Some(format!("{:.2},{:.2}", px(*x), py(*y)))
                }
                _ => None,
            })
            .collect();
        if pts.len() >= 2 {
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5"{dashed} points="{}"/>"#,
                pts.join(" ")
            );
        } else if let Some(p) = pts.first() {
            let (x, y) = p.split_once(',').unwrap();
            let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3" fill="{colour}"/>"#);
        }
        let ly = TOP + 14.0 + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="2"{dashed}/>"#,
            W - RIGHT + 12.0,
            W - RIGHT + 36.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            W - RIGHT + 42.0,
            ly + 4.0,
            escape(&col.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn table(data: &Dataset) -> String {
    let headers = data.headers();
    let rows = data.rows.len() + 1;
    let height = 40.0 + 20.0 * rows as f64;
    let cw = 130.0;
    let width = cw * headers.len() as f64 + 20.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace">"#
    );
    let _ = writeln!(s, r#"<text x="10" y="20" font-size="14">{}</text>"#, escape(&data.name));
    for (j, h) in headers.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="44" font-size="12" font-weight="bold">{}</text>"#,
            10.0 + cw * j as f64,
            escape(h)
        );
    }
    for (i, row) in data.rows.iter().enumerate() {
        let y = 64.0 + 20.0 * i as f64;
        let mut cells: Vec<String> = Vec::new();
        if data.label.is_some() {
            cells.push(data.labels[i].clone());
        }
        cells.extend(row.iter().map(|v| match v {
            Some(x) if x.is_finite() => format!("{x:.5}"),
            Some(x) => format!("{x}"),
            None => "-".into(),
        }));
        for (j, c) in cells.iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{y:.1}" font-size="12">{}</text>"#,
                10.0 + cw * j as f64,
                escape(c)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\">\n"
    )
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (1.0, 10.0);
    }
    if hi <= lo {
        (lo / 2.0, lo * 2.0)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
