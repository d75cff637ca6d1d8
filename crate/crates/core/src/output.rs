//! Report emission: CSV and JSON tables with stable number formatting, and
//! SVG grouped bar charts of normalized scores.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::global::ImportanceReport;
use crate::inference::PosteriorInterval;
use crate::local::PosteriorActionTable;
use crate::voi::{normalize_by_max, rank_descending, Metric, VoIReport};

/// Significant digits kept in every emitted number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] and returns the shortest decimal that
/// reads back as the rounded value.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_significant(x);
    if r == 0.0 {
        return "0".into();
    }
    let plain = format!("{r}");
    if plain.len() <= 24 {
        plain
    } else {
        format!("{r:e}")
    }
}

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

fn number_value(x: f64) -> Value {
    serde_json::Number::from_f64(round_significant(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// A report: scalar summary fields plus a table of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub kind: String,
    pub summary: Vec<(String, Cell)>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    fn new(kind: &str, headers: &[&str]) -> Self {
        Self {
            kind: kind.into(),
            summary: Vec::new(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn summary(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.summary.push((key.into(), value.into()));
        self
    }

    /// Table rows as CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    /// `{"kind", "summary": {...}, "rows": [{...}]}`. Infinite numbers become
    /// `null` with a sibling `<field>_infinite: true`.
    pub fn to_json(&self) -> String {
        let object = |pairs: &mut dyn Iterator<Item = (&String, &Cell)>| {
            let mut map = Map::new();
            for (k, c) in pairs {
                match c {
                    Cell::Text(s) => {
                        map.insert(k.clone(), Value::String(s.clone()));
                    }
                    Cell::Int(i) => {
                        map.insert(k.clone(), json!(i));
                    }
                    Cell::Num(x) => {
                        map.insert(k.clone(), number_value(*x));
                        if x.is_infinite() {
                            map.insert(format!("{k}_infinite"), Value::Bool(true));
                        }
                    }
                }
            }
            Value::Object(map)
        };
        let summary = object(&mut self.summary.iter().map(|(k, c)| (k, c)));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| object(&mut self.headers.iter().zip(r)))
            .collect();
        let doc = json!({ "kind": self.kind, "summary": summary, "rows": rows });
        let mut text = serde_json::to_string_pretty(&doc).expect("json values serialize");
        text.push('\n');
        text
    }
}

pub fn reliability_report(names: &[String], p_u: f64) -> Report {
    let mut r = Report::new("reliability", &["components", "p_fail_system"]).summary("p_fail_system", p_u);
    r.rows.push(vec![names.len().into(), p_u.into()]);
    r
}

pub fn intervals_report(names: &[String], intervals: &[PosteriorInterval]) -> Report {
    let prior = intervals.first().map_or(0.0, |iv| iv.prior);
    let mut r = Report::new(
        "intervals",
        &["component", "p_silence", "p_alarm", "width", "alarm_prob"],
    )
    .summary("prior", prior);
    for (name, iv) in names.iter().zip(intervals) {
        r.rows.push(vec![
            name.as_str().into(),
            iv.lo.into(),
            iv.hi.into(),
            iv.width().into(),
            iv.alarm_prob.into(),
        ]);
    }
    r
}

/// Rows in ranking order.
pub fn voi_report(report: &VoIReport) -> Report {
    let mut headers = vec!["rank", "component", "voi", "normalized", "posterior_loss"];
    if report.regret.is_some() {
        headers.push("posterior_regret");
    }
    if report.plans.is_some() {
        headers.extend(["plan_silence", "plan_alarm"]);
    }
    let mut r = Report::new(report.metric.as_str(), &headers)
        .summary("metric", report.metric.as_str())
        .summary("prior_loss", report.prior_loss)
        .summary("best", report.names[report.best].as_str());
    if let Some(reg) = &report.regret {
        r = r
            .summary("prior_regret", reg.prior)
            .summary("perfect_info_loss", reg.perfect_info_loss);
    }
    if let Some(plans) = &report.plans {
        r = r.summary("prior_plan", plans.prior.describe(&report.names));
    }
    for (rank, i) in report.ranking().into_iter().enumerate() {
        let mut row: Vec<Cell> = vec![
            (rank + 1).into(),
            report.names[i].as_str().into(),
            report.voi[i].into(),
            report.normalized[i].into(),
            report.posterior_loss[i].into(),
        ];
        if let Some(reg) = &report.regret {
            row.push(reg.posterior[i].into());
        }
        if let Some(plans) = &report.plans {
            let [s, a] = plans.posterior[i];
            row.push(s.describe(&report.names).into());
            row.push(a.describe(&report.names).into());
        }
        r.rows.push(row);
    }
    r
}

pub fn importance_report(report: &ImportanceReport, metric: Metric) -> Report {
    let values = report.values(metric).expect("importance metric");
    let normalized = normalize_finite(values);
    let mut r = Report::new(metric.as_str(), &["rank", "component", "value", "normalized"])
        .summary("metric", metric.as_str())
        .summary("prior", report.prior);
    for (rank, i) in rank_descending(values).into_iter().enumerate() {
        r.rows.push(vec![
            (rank + 1).into(),
            report.names[i].as_str().into(),
            values[i].into(),
            normalized[i].into(),
        ]);
    }
    r
}

/// Normalization by the largest value; infinite entries map to 1 and the
/// finite ones are scaled by the largest finite value.
pub fn normalize_finite(values: &[f64]) -> Vec<f64> {
    if values.iter().any(|v| v.is_infinite() && *v > 0.0) {
        let finite: Vec<f64> = values.iter().map(|v| if v.is_finite() { *v } else { 0.0 }).collect();
        let scaled = normalize_by_max(&finite);
        values
            .iter()
            .zip(scaled)
            .map(|(v, s)| if v.is_infinite() { 1.0 } else { s })
            .collect()
    } else {
        normalize_by_max(values)
    }
}

pub fn actions_report(table: &PosteriorActionTable, label: &str) -> Report {
    let mut r = Report::new(
        "actions",
        &["component", "outcome", "plan", "loss", "probability"],
    )
    .summary("policy", label)
    .summary("prior_plan", table.prior_plan.describe(&table.names))
    .summary("prior_loss", table.prior_loss);
    for (i, name) in table.names.iter().enumerate() {
        for (outcome, entry) in ["silence", "alarm"].iter().zip(&table.entries[i]) {
            r.rows.push(vec![
                name.as_str().into(),
                (*outcome).into(),
                entry.plan.describe(&table.names).into(),
                entry.loss.into(),
                entry.probability.into(),
            ]);
        }
    }
    r
}

/// One bar series of a grouped chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// One value per component, expected in `[0, 1]`.
    pub values: Vec<f64>,
}

const PALETTE: [&str; 7] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Static SVG with one group of bars per component and one bar per series.
pub fn grouped_bar_chart(title: &str, categories: &[String], series: &[Series]) -> String {
    let (left, right, top, bottom) = (60.0, 20.0, 40.0, 70.0);
    let plot_h = 260.0;
    let group_w = (18.0 * series.len().max(1) as f64 + 16.0).max(40.0);
    let width = left + right + group_w * categories.len().max(1) as f64;
    let height = top + plot_h + bottom;
    let bar_w = (group_w - 16.0) / series.len().max(1) as f64;
    let y_of = |v: f64| top + plot_h * (1.0 - v.clamp(0.0, 1.0));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let y = y_of(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{left}" y1="{y}" x2="{}" y2="{y}" stroke="#dddddd"/><text x="{}" y="{}" text-anchor="end">{v}</text>"##,
            width - right,
            left - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{}" stroke="black"/>"#,
        top + plot_h
    );
    for (c, name) in categories.iter().enumerate() {
        let x0 = left + group_w * c as f64 + 8.0;
        for (s, ser) in series.iter().enumerate() {
            let v = ser.values.get(c).copied().unwrap_or(0.0);
            let y = y_of(v);
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{y:.2}" width="{bar_w:.2}" height="{:.2}" fill="{}"><title>{}: {}</title></rect>"#,
                x0 + bar_w * s as f64,
                top + plot_h - y,
                PALETTE[s % PALETTE.len()],
                escape(&ser.label),
                format_number(v)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            x0 + (group_w - 16.0) / 2.0,
            top + plot_h + 16.0,
            escape(name)
        );
    }
    for (s, ser) in series.iter().enumerate() {
        let x = left + 110.0 * s as f64;
        let y = top + plot_h + 40.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x}" y="{y}" width="12" height="12" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            PALETTE[s % PALETTE.len()],
            x + 16.0,
            y + 10.0,
            escape(&ser.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(0.1 + 0.2), "0.3");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1e-30), "1e-30");
        assert_eq!(format_number(123456789012345.0), "123456789012000");
    }

    #[test]
    fn csv_and_json_agree() {
        let mut r = Report::new("t", &["name", "x"]);
        r.rows.push(vec!["a".into(), (2.0_f64 / 3.0).into()]);
        r.rows.push(vec!["b".into(), f64::INFINITY.into()]);
        let csv = r.to_csv();
        assert_eq!(csv, "name,x\na,0.666666666667\nb,inf\n");
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["rows"][0]["x"].as_f64().unwrap(), 0.666666666667);
        assert!(json["rows"][1]["x"].is_null());
        assert_eq!(json["rows"][1]["x_infinite"], Value::Bool(true));
    }

    #[test]
    fn svg_has_one_bar_per_value() {
        let svg = grouped_bar_chart(
            "t",
            &["c1".into(), "c2".into()],
            &[
                Series { label: "local".into(), values: vec![1.0, 0.5] },
                Series { label: "bm".into(), values: vec![0.2, 1.0] },
            ],
        );
        assert_eq!(svg.matches("<title>").count(), 4);
        assert!(svg.starts_with("<svg"));
    }
}
