//! CSV, console table and SVG output for a [`Report`].

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::protocol::{DescriptorReport, Report};
use super::RocCurve;

/// Fixed six-decimal formatting used by every numeric output column.
pub fn format_rate(v: f64) -> String {
    format!("{v:.6}")
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Renders ROC curves as an SVG line plot (FAR on x, recognition rate on y).
pub fn render_roc_svg(curves: &[(&str, &RocCurve)]) -> String {
    let (w, h, pad) = (520.0, 400.0, 50.0);
    let (pw, ph) = (w - 2.0 * pad, h - 2.0 * pad);
    let x = |far: f64| pad + far * pw;
    let y = |rate: f64| h - pad - rate * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{pad}" y="{pad}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=10 {
        let t = i as f64 / 10.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{t:.1}</text>"#,
            x(t),
            h - pad + 14.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{t:.1}</text>"#,
            pad - 4.0,
            y(t) + 3.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">False accept rate</text>"#,
        w / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.1})">Recognition rate</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (i, (label, curve)) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = format!("{:.2},{:.2}", x(0.0), y(0.0));
        for p in &curve.points {
            let _ = write!(pts, " {:.2},{:.2}", x(p.far), y(p.recognition_rate));
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>"#
        );
        let ly = pad + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            w - pad - 110.0,
            w - pad - 90.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="11">{label}</text>"#,
            w - pad - 84.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

impl DescriptorReport {
    pub fn rate(&self, classifier: &str) -> Option<f64> {
        self.split_rates
            .iter()
            .find(|(n, _)| n == classifier)
            .map(|&(_, r)| r)
    }
}

impl Report {
    /// `descriptor,classifier,rate` for the first-half split.
    pub fn rates_csv(&self) -> String {
        let mut out = String::from("descriptor,classifier,rate\n");
        for d in &self.descriptors {
            for (name, rate) in &d.split_rates {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    d.descriptor.name(),
                    name,
                    format_rate(*rate)
                );
            }
        }
        out
    }

    /// `descriptor,fold,rate`, folds numbered from 1.
    pub fn kfold_csv(&self) -> String {
        let mut out = String::from("descriptor,fold,rate\n");
        for d in &self.descriptors {
            for (i, rate) in d.kfold.rates.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    d.descriptor.name(),
                    i + 1,
                    format_rate(*rate)
                );
            }
        }
        out
    }

    pub fn roc_csv(curve: &RocCurve) -> String {
        let mut out = String::from("threshold,far,recognition_rate\n");
        for p in &curve.points {
            let _ = writeln!(
                out,
                "{},{},{}",
                format_rate(p.threshold),
                format_rate(p.far),
                format_rate(p.recognition_rate)
            );
        }
        out
    }

    /// Recognition-rate table: one row per descriptor, SVM columns per degree
    /// followed by the k-fold MIN/MAX/AVG, then a second table with the
    /// k-NN rate and the ROC readout.
    pub fn summary_table(&self) -> String {
        let mut header = vec!["Descriptor".to_string()];
        header.extend(self.config.degrees.iter().map(|d| format!("SVM Poly{d}")));
        header.extend(["MIN", "MAX", "AVG"].map(String::from));
        let rows: Vec<Vec<String>> = self
            .descriptors
            .iter()
            .map(|d| {
                let mut row = vec![d.descriptor.label().to_string()];
                row.extend(self.config.degrees.iter().map(|deg| {
                    d.rate(&format!("svm_poly{deg}"))
                        .map_or("-".into(), |r| format!("{r:.2}"))
                }));
                row.extend([d.kfold.min, d.kfold.max, d.kfold.avg].map(|v| format!("{v:.2}")));
                row
            })
            .collect();
        let mut out = String::from("Recognition rate (%), first-half split and K-fold results\n");
        out.push_str(&render_table(&header, &rows));

        let header = vec![
            "Descriptor".to_string(),
            format!("k-NN (k={})", self.config.knn_k),
            "RR @ FAR 0.1".to_string(),
        ];
        let rows: Vec<Vec<String>> = self
            .descriptors
            .iter()
            .map(|d| {
                vec![
                    d.descriptor.label().to_string(),
                    d.rate("knn").map_or("-".into(), |r| format!("{r:.2}")),
                    format!("{:.2}", 100.0 * d.rate_at_far),
                ]
            })
            .collect();
        out.push_str("\nk-NN recognition rate (%) and ROC readout\n");
        out.push_str(&render_table(&header, &rows));
        out
    }

    /// Writes `rates.csv`, `kfold.csv`, `roc_<descriptor>.csv`, `roc.svg` and
    /// `summary.txt` under `dir`, returning the written paths.
    pub fn write_to(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut files: Vec<(PathBuf, String)> = vec![
            (dir.join("rates.csv"), self.rates_csv()),
            (dir.join("kfold.csv"), self.kfold_csv()),
        ];
        for d in &self.descriptors {
            files.push((
                dir.join(format!("roc_{}.csv", d.descriptor.name())),
                Self::roc_csv(&d.roc),
            ));
        }
        let curves: Vec<(&str, &RocCurve)> = self
            .descriptors
            .iter()
            .map(|d| (d.descriptor.label(), &d.roc))
            .collect();
        files.push((dir.join("roc.svg"), render_roc_svg(&curves)));
        files.push((dir.join("summary.txt"), self.summary_table()));
        for (path, content) in &files {
            fs::write(path, content)?;
        }
        Ok(files.into_iter().map(|(p, _)| p).collect())
    }
}

fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let rule: String = widths
        .iter()
        .map(|w| format!("+{}", "-".repeat(w + 2)))
        .collect::<String>()
        + "+\n";
    let line = |cells: &[String]| -> String {
        cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| {
                if i == 0 {
                    format!("| {c:<w$} ")
                } else {
                    format!("| {c:>w$} ")
                }
            })
            .collect::<String>()
            + "|\n"
    };
    let mut out = rule.clone();
    out.push_str(&line(header));
    out.push_str(&rule);
    for r in rows {
        out.push_str(&line(r));
    }
    out.push_str(&rule);
    out
}
