//! Experiment reports: a manifest, named numeric series and verdicts.

use std::fs;
use std::io::Write;
use std::path::Path;

use lampharm::Result;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub seed: u64,
    /// Every option the command ran with, enough to rerun it.
    pub config: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Series {
    pub name: String,
    pub parameter: String,
    pub value: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub threshold: String,
    pub observed: String,
    pub interpretation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub manifest: Manifest,
    pub series: Vec<Series>,
    pub verdicts: Vec<Verdict>,
    /// Command-specific payload (solutions, lines, tables).
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl ExperimentReport {
    pub fn new(command: &str, seed: u64, config: serde_json::Value) -> Self {
        ExperimentReport {
            manifest: Manifest {
                tool: env!("CARGO_PKG_NAME"),
                tool_version: env!("CARGO_PKG_VERSION"),
                command: command.to_string(),
                seed,
                config,
            },
            series: Vec::new(),
            verdicts: Vec::new(),
            details: serde_json::Value::Null,
        }
    }

    pub fn series(&mut self, name: &str, parameter: &str, value: &str, points: Vec<(f64, f64)>) {
        self.series.push(Series {
            name: name.into(),
            parameter: parameter.into(),
            value: value.into(),
            points,
        });
    }

    pub fn verdict(&mut self, name: &str, passed: bool, threshold: &str, observed: String, interpretation: &str) {
        self.verdicts.push(Verdict {
            name: name.into(),
            passed,
            threshold: threshold.into(),
            observed,
            interpretation: interpretation.into(),
        });
    }

    pub fn detail(&mut self, key: &str, value: serde_json::Value) {
        if self.details.is_null() {
            self.details = serde_json::json!({});
        }
        self.details[key] = value;
    }

    pub fn merge(&mut self, other: ExperimentReport) {
        self.series.extend(other.series);
        self.verdicts.extend(other.verdicts);
        if !other.details.is_null() {
            self.detail(&other.manifest.command, other.details);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    /// One row per series point: `series,parameter,x,value,y`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["series", "parameter", "x", "value", "y"])?;
        for s in &self.series {
            for (x, y) in &s.points {
                w.write_record([&s.name, &s.parameter, &x.to_string(), &s.value, &y.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        self.write_json(fs::File::create(dir.join("report.json"))?)?;
        self.write_csv(fs::File::create(dir.join("report.csv"))?)?;
        Ok(())
    }
}
