//! CSV and SVG writers for run records.

use std::io::Write;

use crate::error::Result;

/// One evaluation point of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub iteration: u64,
    pub nashconv: f64,
    pub exploitability: Vec<f64>,
    pub residual: f64,
    pub drift: f64,
    pub ms: u64,
}

pub fn csv_header(players: usize) -> Vec<String> {
    let mut h = vec!["iter".to_string(), "nashconv".to_string()];
    h.extend((1..=players).map(|p| format!("expl_p{p}")));
    h.extend(["residual", "drift", "ms"].map(String::from));
    h
}

/// 12 significant digits, independent of locale.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub struct CsvSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(out: W, players: usize) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(csv_header(players)).map_err(csv_err)?;
        writer.flush()?;
        Ok(Self { writer })
    }

    /// Writes and flushes one row, so a partial file is always valid.
    pub fn write(&mut self, r: &RunRecord) -> Result<()> {
        let mut row = vec![r.iteration.to_string(), fmt_float(r.nashconv)];
        row.extend(r.exploitability.iter().map(|&e| fmt_float(e)));
        row.extend([fmt_float(r.residual), fmt_float(r.drift), r.ms.to_string()]);
        self.writer.write_record(&row).map_err(csv_err)?;
        self.writer.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => crate::error::Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Log-scale NashConv curves, one polyline per series.
pub fn svg_chart(title: &str, series: &[(String, Vec<(u64, f64)>)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 50.0;
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
    let pts = series.iter().flat_map(|(_, s)| s.iter()).filter(|p| p.1 > 0.0 && p.1.is_finite());
    let (mut xmax, mut ymin, mut ymax) = (1u64, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        xmax = xmax.max(x);
        ymin = ymin.min(y.log10());
        ymax = ymax.max(y.log10());
    }
    if !ymin.is_finite() {
        (ymin, ymax) = (-1.0, 0.0);
    }
    let (ymin, ymax) = (ymin.floor(), ymax.ceil().max(ymin.floor() + 1.0));
    let sx = |x: u64| M + (W - 2.0 * M) * x as f64 / xmax as f64;
    let sy = |y: f64| H - M - (H - 2.0 * M) * (y.log10() - ymin) / (ymax - ymin);

    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"11\">\n"
    );
    s += &format!("<text x=\"{M}\" y=\"20\" font-size=\"13\">{}</text>\n", escape(title));
    s += &format!(
        "<rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
        W - 2.0 * M,
        H - 2.0 * M
    );
    for e in ymin as i32..=ymax as i32 {
        let y = sy(10f64.powi(e));
        s += &format!("<text x=\"4\" y=\"{:.1}\">1e{e}</text>\n", y + 4.0);
        s += &format!("<line x1=\"{M}\" x2=\"{}\" y1=\"{y:.1}\" y2=\"{y:.1}\" stroke=\"#eee\"/>\n", W - M);
    }
    s += &format!("<text x=\"{}\" y=\"{}\">iteration (max {xmax})</text>\n", W / 2.0 - 40.0, H - 15.0);
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|p| p.1 > 0.0 && p.1.is_finite())
            .map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y)))
            .collect();
        s += &format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            path.join(" ")
        );
        s += &format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{}</text>\n",
            W - M - 150.0,
            M + 15.0 + 14.0 * i as f64,
            escape(name)
        );
    }
    s += "</svg>\n";
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
