//! Tabular and SVG exporters.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which parses back
//! to the same `f64`. CSV uses `,` and `\n`; JSON mirrors every CSV schema as
//! `{"schema", "version", "rows"}` with one object per row.

use std::fmt::Write as _;
use std::io::{self, Read, Write};

use bergman_core::curves::ZeroCurve;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Value {
    fn to_csv(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Real(x) => format_real(*x),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => json!(i),
            Value::Real(x) if x.is_finite() => json!(x),
            Value::Real(x) => json!(format_real(*x)),
            Value::Bool(b) => json!(b),
            Value::Text(s) => json!(s),
            Value::Missing => Json::Null,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<u32> for Value {
    fn from(i: u32) -> Self {
        Value::Int(i as i64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(schema: &'static str, columns: &[&'static str]) -> Self {
        Self {
            schema,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Value::to_csv))?;
        }
        out.flush()
    }

    pub fn to_json(&self) -> Json {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    obj.insert(c.to_string(), v.to_json());
                }
                Json::Object(obj)
            })
            .collect();
        json!({ "schema": self.schema, "version": SCHEMA_VERSION, "rows": rows })
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.to_json())?;
        w.write_all(b"\n")
    }
}

/// One `(α, β, k)` sample of a zero curve or point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub alpha: u32,
    pub beta: f64,
    pub k: usize,
    pub re: f64,
    pub im: f64,
}

/// Rows sorted by `α`, then `β` ascending, then `k` ascending.
pub fn curve_rows(curves: &[ZeroCurve]) -> Vec<CurveRow> {
    let mut rows: Vec<CurveRow> = curves
        .iter()
        .flat_map(|c| {
            c.samples.iter().map(move |&(beta, z)| CurveRow {
                alpha: c.alpha,
                beta,
                k: c.k,
                re: z.re,
                im: z.im,
            })
        })
        .collect();
    rows.sort_by(|a, b| {
        a.alpha
            .cmp(&b.alpha)
            .then(a.beta.total_cmp(&b.beta))
            .then(a.k.cmp(&b.k))
    });
    rows
}

pub fn curve_table(rows: &[CurveRow]) -> Table {
    let mut t = Table::new("zero_curves", &["alpha", "beta", "k", "re", "im"]);
    for r in rows {
        t.push(vec![r.alpha.into(), r.beta.into(), r.k.into(), r.re.into(), r.im.into()]);
    }
    t
}

/// Curve CSV with header `alpha,beta,k,re,im`.
pub fn export_curves<W: Write>(curves: &[ZeroCurve], w: W) -> io::Result<()> {
    curve_table(&curve_rows(curves)).write_csv(w)
}

pub fn parse_curves_csv<R: Read>(r: R) -> csv::Result<Vec<CurveRow>> {
    csv::Reader::from_reader(r).deserialize().collect()
}

/// Rows of a JSON document written by [`Table::write_json`] for the curve schema.
pub fn parse_curves_json<R: Read>(r: R) -> serde_json::Result<Vec<CurveRow>> {
    #[derive(Deserialize)]
    struct Doc {
        rows: Vec<CurveRow>,
    }
    Ok(serde_json::from_reader::<_, Doc>(r)?.rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Plot window `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    /// Bounding box of all points, padded by 5%, or `[-1, 1]²` without points.
    pub fn fit(series: &[SvgSeries]) -> Self {
        let pts = series.iter().flat_map(|s| &s.points).filter(|p| p.0.is_finite() && p.1.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return Self { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
        }
        let pad = |a: f64, b: f64| {
            let w = if b > a { b - a } else { a.abs().max(1.0) };
            (a - 0.05 * w, b + 0.05 * w)
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        Self { x0, x1, y0, y1 }
    }
}

pub const SVG_SIZE: f64 = 800.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/// Standalone 800×800 scatter plot. Points outside `window` are dropped; axes
/// are drawn through the origin when it is in view, along the frame otherwise.
pub fn export_svg_scatter<W: Write>(series: &[SvgSeries], window: Window, title: &str, mut w: W) -> io::Result<()> {
    let span = SVG_SIZE - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - window.x0) / (window.x1 - window.x0) * span;
    let sy = |y: f64| SVG_SIZE - MARGIN - (y - window.y0) / (window.y1 - window.y0) * span;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(s, r#"<rect width="800" height="800" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="400" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#, escape(title));
    let _ = writeln!(
        s,
        r##"<rect x="{m:.2}" y="{m:.2}" width="{span:.2}" height="{span:.2}" fill="none" stroke="#bbbbbb"/>"##,
        m = MARGIN
    );
    let ax = if window.x0 <= 0.0 && 0.0 <= window.x1 { sx(0.0) } else { MARGIN };
    let ay = if window.y0 <= 0.0 && 0.0 <= window.y1 { sy(0.0) } else { SVG_SIZE - MARGIN };
    let _ = writeln!(
        s,
        r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{:.2}" y1="{ay:.2}" x2="{:.2}" y2="{ay:.2}"/><line x1="{ax:.2}" y1="{:.2}" x2="{ax:.2}" y2="{:.2}"/></g>"#,
        MARGIN,
        SVG_SIZE - MARGIN,
        MARGIN,
        SVG_SIZE - MARGIN
    );
    let label = |v: f64| format!("{v:.4e}");
    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="11"><text x="{:.2}" y="{:.2}">{}</text><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text></g>"#,
        MARGIN,
        SVG_SIZE - MARGIN + 18.0,
        label(window.x0),
        SVG_SIZE - MARGIN,
        SVG_SIZE - MARGIN + 18.0,
        label(window.x1),
        MARGIN - 6.0,
        SVG_SIZE - MARGIN,
        label(window.y0),
        MARGIN - 6.0,
        MARGIN + 4.0,
        label(window.y1)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, r#"<g class="series" data-label="{}" fill="{color}">"#, escape(&ser.label));
        for &(x, y) in &ser.points {
            if !(x >= window.x0 && x <= window.x1 && y >= window.y0 && y <= window.y1) {
                continue;
            }
            let _ = writeln!(s, r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="2.5"/>"#, sx(x), sy(y));
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</svg>");
    w.write_all(s.as_bytes())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
