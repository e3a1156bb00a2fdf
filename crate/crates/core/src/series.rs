//! Tabulated curves and their CSV / JSON / SVG renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One or more curves sharing an abscissa, plus free-form metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureSeries {
    pub id: String,
    pub x_label: String,
    pub x: Vec<f64>,
    /// `(name, values)` pairs, each with `x.len()` entries.
    pub series: Vec<(String, Vec<f64>)>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

/// Formats a double with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl FigureSeries {
    pub fn new(id: impl Into<String>, x_label: impl Into<String>) -> Self {
        FigureSeries {
            id: id.into(),
            x_label: x_label.into(),
            x: Vec::new(),
            series: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn push_series(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.series.push((name.into(), values));
    }

    pub fn meta(&mut self, key: &str, value: f64) {
        self.metadata.insert(key.to_string(), serde_json::json!(value));
    }

    pub fn meta_str(&mut self, key: &str, value: &str) {
        self.metadata.insert(key.to_string(), serde_json::json!(value));
    }

    /// Column `name`, if present.
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    /// `true` when every abscissa and value is finite.
    pub fn all_finite(&self) -> bool {
        self.x.iter().all(|v| v.is_finite()) && self.series.iter().all(|(_, v)| v.iter().all(|y| y.is_finite()))
    }

    /// Header `x_label,name...`, then one row per abscissa.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.x_label);
        for (name, _) in &self.series {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, x) in self.x.iter().enumerate() {
            out.push_str(&fmt_f64(*x));
            for (_, v) in &self.series {
                out.push(',');
                out.push_str(&fmt_f64(v[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Polyline plot. With `log_y`, magnitudes are plotted and zeros dropped.
    pub fn to_svg(&self, log_y: bool) -> String {
        const W: f64 = 720.0;
        const H: f64 = 480.0;
        const M: f64 = 60.0;
        let ty = |y: f64| if log_y { y.abs().log10() } else { y };
        let pts: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|(_, v)| {
                self.x
                    .iter()
                    .zip(v)
                    .filter(|(x, y)| x.is_finite() && y.is_finite() && (!log_y || **y != 0.0))
                    .map(|(&x, &y)| (x, ty(y)))
                    .collect()
            })
            .collect();
        let all = pts.iter().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in all {
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
            y0 -= 0.5;
            y1 += 0.5;
        }
        let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
        let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#, W / 2.0, self.id);
        let _ = writeln!(
            s,
            r#"<path d="M{M} {top} L{M} {bot} L{right} {bot}" stroke="black" fill="none"/>"#,
            top = M,
            bot = H - M,
            right = W - M
        );
        for k in 0..=4 {
            let fx = x0 + (x1 - x0) * k as f64 / 4.0;
            let fy = y0 + (y1 - y0) * k as f64 / 4.0;
            let label_y = if log_y { format!("1e{fy:.1}") } else { format!("{fy:.3e}") };
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{fx:.3}</text>"#, px(fx), H - M + 16.0);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{label_y}</text>"#, M - 4.0, py(fy) + 4.0);
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#, W / 2.0, H - 16.0, self.x_label);
        let n = pts.len().max(1);
        for (i, line) in pts.iter().enumerate() {
            // Lighter to darker blue.
            let shade = 0.85 - 0.7 * i as f64 / (n.max(2) - 1) as f64;
            let (r, g) = ((shade * 200.0) as u8, (shade * 220.0) as u8);
            let mut d = String::new();
            for (j, &(x, y)) in line.iter().enumerate() {
                let _ = write!(d, "{}{:.2},{:.2}", if j == 0 { "" } else { " " }, px(x), py(y));
            }
            let _ = writeln!(s, r#"<polyline points="{d}" fill="none" stroke="rgb({r},{g},255)" stroke-width="2"/>"#);
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="rgb({r},{g},255)">{}</text>"#,
                W - M + 4.0,
                M + 14.0 * i as f64,
                self.series[i].0
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Writes `contents` to `path` via a temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
