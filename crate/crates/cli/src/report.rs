use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// evaluation finished; nothing was being tested
    Ok,
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A finished command: verdict, JSON report and its flat table.
pub struct Outcome {
    pub verdict: Verdict,
    pub report: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Meta<'a> {
    pub command: &'a str,
    pub config: Value,
    pub timestamp: Option<u64>,
}

pub fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_json(out: &mut dyn Write, meta: &Meta, o: &Outcome) -> anyhow::Result<()> {
    let mut doc = json!({
        "tool": "dunklkit",
        "version": env!("CARGO_PKG_VERSION"),
        "command": meta.command,
        "config": meta.config,
        "verdict": o.verdict,
        "report": o.report,
    });
    if let Some(t) = meta.timestamp {
        doc["generated_unix"] = json!(t);
    }
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

/// CSV table preceded by `#` comment lines carrying the tool version and the config.
pub fn write_csv(out: &mut dyn Write, meta: &Meta, o: &Outcome) -> anyhow::Result<()> {
    write!(out, "# dunklkit {}\r\n", env!("CARGO_PKG_VERSION"))?;
    write!(out, "# command: {}\r\n", meta.command)?;
    write!(out, "# config: {}\r\n", serde_json::to_string(&meta.config)?)?;
    write!(out, "# verdict: {}\r\n", serde_json::to_value(o.verdict)?.as_str().unwrap_or(""))?;
    if let Some(t) = meta.timestamp {
        write!(out, "# generated_unix: {t}\r\n")?;
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
    w.write_record(&o.header)?;
    for r in &o.rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}
