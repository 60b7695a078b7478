//! Text, CSV and SVG rendering. Everything here formats numbers produced
//! by the library; nothing is computed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use frackw_core::critical::{SweepResult, SweepRow};
use frackw_core::linalg::Matrix;

/// Significant digits written to CSV.
pub const CSV_DIGITS: usize = 12;

pub const CSV_HEADER: &str = "c,s,lambda_star,bracket_width,status";

/// `%g`-style formatting with `digits` significant digits and trailing
/// zeros removed.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects the printed mantissa (9.99.. -> 1e1).
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_row(out: &mut String, r: &SweepRow) {
    let _ = writeln!(
        out,
        "{},{},{},{},{}",
        fmt_sig(r.c, CSV_DIGITS),
        fmt_sig(r.s, CSV_DIGITS),
        fmt_sig(r.lambda_star, CSV_DIGITS),
        fmt_sig(r.bracket_width, CSV_DIGITS),
        r.status
    );
}

/// CSV text in row order of the result (s outer, c inner), LF endings.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * (result.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &result.rows {
        csv_row(&mut out, r);
    }
    out
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> std::io::Result<()> {
    fs::write(path, sweep_csv(result))
}

const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"];
const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 640.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 530.0;
const TICKS: usize = 5;

/// Vertical axis: a fixed `[0, y_max]` when given and not exceeded by the
/// data, otherwise autoscaled.
pub fn svg_y_max(result: &SweepResult, fixed: Option<f64>) -> f64 {
    let data_max = result
        .rows
        .iter()
        .map(|r| r.lambda_star)
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    match fixed {
        Some(y) if data_max <= y => y,
        _ if data_max > 0.0 => data_max * 1.05,
        _ => 1.0,
    }
}

/// Line plot of `Λ*` against `c`, one polyline per `s`.
pub fn sweep_svg(result: &SweepResult, fixed_y_max: Option<f64>) -> String {
    let grid = &result.grid;
    let (mut x_lo, mut x_hi) = (grid.c_min, grid.c_max);
    if x_hi - x_lo <= 0.0 {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    let y_hi = svg_y_max(result, fixed_y_max);
    let px = |c: f64| LEFT + (c - x_lo) / (x_hi - x_lo) * (RIGHT - LEFT);
    let py = |l: f64| BOTTOM - l / y_hi * (BOTTOM - TOP);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<path d="M{LEFT} {TOP} V{BOTTOM} H{RIGHT}" fill="none" stroke="black"/>"#
    );

    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let c = x_lo + f * (x_hi - x_lo);
        let x = px(c);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{BOTTOM}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            BOTTOM + 5.0,
            BOTTOM + 20.0,
            fmt_sig(c, 4)
        );
        let l = f * y_hi;
        let y = py(l);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            fmt_sig(l, 4)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">c</text>"#,
        0.5 * (LEFT + RIGHT),
        HEIGHT - 20.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">&#923;*</text>"#,
        0.5 * (TOP + BOTTOM),
        0.5 * (TOP + BOTTOM)
    );

    for (k, &s) in grid.s_list.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<(f64, f64)> = result
            .series(s)
            .iter()
            .filter(|r| r.lambda_star.is_finite())
            .map(|r| (px(r.c), py(r.lambda_star)))
            .collect();
        if points.len() == 1 {
            let (x, y) = points[0];
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}"/>"#
            );
        } else if !points.is_empty() {
            let coords: Vec<String> = points
                .iter()
                .map(|(x, y)| format!("{x:.2},{y:.2}"))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                coords.join(" ")
            );
        }
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">s = {}</text>"#,
            RIGHT + 20.0,
            RIGHT + 45.0,
            RIGHT + 52.0,
            ly + 4.0,
            fmt_sig(s, 6)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_svg(
    result: &SweepResult,
    fixed_y_max: Option<f64>,
    path: &Path,
) -> std::io::Result<()> {
    fs::write(path, sweep_svg(result, fixed_y_max))
}

/// Right-aligned fixed-point columns.
pub fn matrix_table(m: &Matrix, decimals: usize) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| format!("{:.*}", decimals, m[(i, j)]))
                .collect()
        })
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str("  ");
        out.push_str(&line.join("  "));
        out.push('\n');
    }
    out
}

pub fn vector_line(v: &[f64], decimals: usize) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{:.*}", decimals, x)).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use frackw_core::critical::{SearchStatus, SweepGrid};

    fn result(rows: Vec<(f64, f64, f64)>, s_list: Vec<f64>) -> SweepResult {
        SweepResult {
            rows: rows
                .into_iter()
                .map(|(c, s, l)| SweepRow {
                    c,
                    s,
                    lambda_star: l,
                    bracket_width: 5e-5,
                    status: SearchStatus::Ok,
                })
                .collect(),
            grid: SweepGrid {
                c_min: -1.0,
                c_max: -0.5,
                c_step: 0.5,
                s_list,
            },
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(-5.0, 12), "-5");
        assert_eq!(fmt_sig(-0.010000000000001563, 12), "-0.01");
        assert_eq!(fmt_sig(0.123456789012345, 12), "0.123456789012");
        assert_eq!(fmt_sig(8.25e-11, 12), "8.25e-11");
        assert_eq!(fmt_sig(9.9999999999999e-3, 12), "0.01");
        assert_eq!(fmt_sig(1234.5, 3), "1.23e+03");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(f64::NAN, 12), "nan");
    }

    #[test]
    fn empty_grid_is_header_only() {
        let r = result(vec![], vec![]);
        assert_eq!(sweep_csv(&r), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn csv_rows_and_line_endings() {
        let r = result(vec![(-1.0, 0.5, 0.01), (-0.5, 0.5, 0.02)], vec![0.5]);
        let csv = sweep_csv(&r);
        assert!(!csv.contains('\r'));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "-1,0.5,0.01,0.00005,ok");
    }

    #[test]
    fn svg_has_one_polyline_per_s() {
        let r = result(
            vec![
                (-1.0, 0.3, 0.01),
                (-0.5, 0.3, 0.02),
                (-1.0, 0.7, 0.03),
                (-0.5, 0.7, 0.04),
            ],
            vec![0.3, 0.7],
        );
        let svg = sweep_svg(&r, Some(0.15));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
        assert!(svg.contains("s = 0.3"));
        assert_eq!(svg_y_max(&r, Some(0.15)), 0.15);
        assert!((svg_y_max(&r, Some(0.01)) - 0.042).abs() < 1e-12);
    }

    #[test]
    fn svg_single_point_uses_markers() {
        let mut r = result(vec![(-1.0, 0.3, 0.01), (-1.0, 0.7, 0.02)], vec![0.3, 0.7]);
        r.grid.c_max = -1.0;
        let svg = sweep_svg(&r, None);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 0);
    }

    #[test]
    fn table_alignment() {
        let m = Matrix::from_rows(&[vec![1.0, -2.5], vec![10.0, 0.0]]);
        let t = matrix_table(&m, 2);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0].len(), lines[1].len());
        assert_eq!(vector_line(&[1.0, -0.5], 3), "(1.000, -0.500)");
    }
}
