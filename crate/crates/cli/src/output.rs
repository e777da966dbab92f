//! CSV tables, JSON reports and SVG line plots.

use serde::Serialize;
use std::fmt::Write as _;

/// Column-major numeric table; the first column is the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

/// 17 significant digits; `nan` for masked or undefined entries.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        // `+ 0.0` folds negative zero into zero.
        format!("{:.16e}", x + 0.0)
    }
}

impl Table {
    pub fn new(header: Vec<String>, columns: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(header.len(), columns.len());
        Self { header, columns }
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        // Writing into a Vec cannot fail.
        w.write_record(&self.header).expect("in-memory write");
        for r in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| format_number(c[r])))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// Line chart of every column against the first.
    pub fn to_svg(&self, title: &str, log_y: bool) -> String {
        const W: f64 = 800.0;
        const H: f64 = 500.0;
        const M: f64 = 60.0;
        const COLORS: [&str; 8] = [
            "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
        ];
        let ty = |y: f64| -> Option<f64> {
            let v = if log_y {
                (y.abs() > 0.0).then(|| y.abs().log10())?
            } else {
                y
            };
            v.is_finite().then_some(v)
        };
        let x = &self.columns[0];
        let mut xr = (f64::INFINITY, f64::NEG_INFINITY);
        let mut yr = (f64::INFINITY, f64::NEG_INFINITY);
        for c in &self.columns[1..] {
            for (xi, yi) in x.iter().zip(c) {
                if let (true, Some(v)) = (xi.is_finite(), ty(*yi)) {
                    xr = (xr.0.min(*xi), xr.1.max(*xi));
                    yr = (yr.0.min(v), yr.1.max(v));
                }
            }
        }
        if !(xr.0 < xr.1) {
            xr = (xr.0.min(0.0), xr.0.max(0.0) + 1.0);
        }
        if !(yr.0 < yr.1) {
            let c = if yr.0.is_finite() { yr.0 } else { 0.0 };
            yr = (c - 1.0, c + 1.0);
        }
        let px = |v: f64| M + (v - xr.0) / (xr.1 - xr.0) * (W - 2.0 * M);
        let py = |v: f64| H - M - (v - yr.0) / (yr.1 - yr.0) * (H - 2.0 * M);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
            W / 2.0,
            escape(title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * M,
            H - 2.0 * M
        );
        let ylab = |v: f64| {
            if log_y {
                format!("1e{v:.1}")
            } else {
                format!("{v:.3e}")
            }
        };
        let _ = writeln!(
            s,
            r#"<text x="{M}" y="{}" font-family="sans-serif" font-size="11">{:.3}</text>"#,
            H - M + 16.0,
            xr.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{:.3}</text>"#,
            W - M,
            H - M + 16.0,
            xr.1
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            M - 4.0,
            H - M,
            ylab(yr.0)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            M - 4.0,
            M + 10.0,
            ylab(yr.1)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            W / 2.0,
            H - 20.0,
            escape(&self.header[0])
        );

        for (k, c) in self.columns[1..].iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            // Break the line wherever a value is missing.
            let mut run: Vec<String> = Vec::new();
            let flush = |run: &mut Vec<String>, s: &mut String| {
                if run.len() > 1 {
                    let _ = writeln!(
                        s,
                        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                        run.join(" ")
                    );
                }
                run.clear();
            };
            for (xi, yi) in x.iter().zip(c) {
                match ty(*yi) {
                    Some(v) if xi.is_finite() => run.push(format!("{:.2},{:.2}", px(*xi), py(v))),
                    _ => flush(&mut run, &mut s),
                }
            }
            flush(&mut run, &mut s);
            let ly = M + 16.0 * (k as f64 + 1.0);
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
                W - M - 100.0,
                escape(&self.header[k + 1])
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= threshold` (NaN fails).
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value >= threshold,
        }
    }

    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value < threshold,
        }
    }

    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value > threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub elapsed_seconds: f64,
}

impl Report {
    pub fn new(
        command: &str,
        config: serde_json::Value,
        checks: Vec<Check>,
        elapsed_seconds: f64,
    ) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            command: command.into(),
            config,
            checks,
            pass,
            elapsed_seconds,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is plain data");
        s.push('\n');
        s
    }

    pub fn checks_table_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["name", "value", "threshold", "pass"])
            .expect("in-memory write");
        for c in &self.checks {
            w.write_record([
                c.name.clone(),
                format_number(c.value),
                format_number(c.threshold),
                c.pass.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let t = Table::new(
            vec!["t".into(), "y".into()],
            vec![vec![0.0, 0.5], vec![f64::NAN, -1.0 / 3.0]],
        );
        assert_eq!(
            t.to_csv(),
            "t,y\n0.0000000000000000e0,nan\n5.0000000000000000e-1,-3.3333333333333331e-1\n"
        );
    }

    #[test]
    fn numbers_round_trip() {
        for x in [
            -0.0,
            0.1,
            -1.0 / 3.0,
            1e-300,
            6.02214076e23,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_number(-0.0), "0.0000000000000000e0");
    }

    #[test]
    fn svg_skips_missing_values() {
        let t = Table::new(
            vec!["t".into(), "e".into()],
            vec![vec![0.0, 1.0, 2.0, 3.0], vec![f64::NAN, 1e-3, 1e-4, 0.0]],
        );
        let s = t.to_svg("err", true);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert_eq!(s.matches("<polyline").count(), 1);
    }

    #[test]
    fn report_pass_is_conjunction() {
        let r = Report::new(
            "x",
            serde_json::json!({}),
            vec![
                Check::at_most("a", 1.0, 2.0),
                Check::at_most("b", f64::NAN, 2.0),
            ],
            0.0,
        );
        assert!(!r.pass);
        assert!(r.to_json().contains("\"value\": null"));
    }
}
