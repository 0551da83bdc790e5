//! Report assembly and rendering.
//!
//! Every command produces one [`Report`]: group-structure rows, check
//! outcome rows, and wall-clock timings. The JSON and CSV renderings
//! are deterministic functions of the computed content, so runs with
//! different parallelism or cache temperature emit identical bytes;
//! timings appear only in the text rendering, which is for humans.
//! The JSON layout is pinned by the schema shipped in the repository
//! root, and the CSV carries the same rows in flat form.

use crate::zlinalg::AbelianStructure;
use serde::Serialize;
use std::path::PathBuf;
use std::time::Duration;

/// Bumped whenever the serialized report layout changes.
pub const REPORT_FORMAT_VERSION: u32 = 1;

/// Output rendering selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "text" => Some(Format::Text),
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

/// One requested job: which degrees to visit and what to do there.
/// Parallelism and cache location never influence report content, so
/// they are not echoed into the serialized output.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub n: u32,
    /// Inclusive degree interval.
    pub k_range: (u32, u32),
    /// Named checks, conjectures, or group objects to run.
    pub checks: Vec<String>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub jobs: usize,
    /// Refuse any computation whose free cover is estimated to exceed
    /// this many generators.
    pub generator_limit: u128,
}

/// A group structure in both machine and human form.
#[derive(Clone, Debug, Serialize)]
pub struct StructureInfo {
    pub rank: usize,
    /// Invariant factors in divisibility order, as decimal strings.
    pub factors: Vec<String>,
    pub display: String,
}

impl From<&AbelianStructure> for StructureInfo {
    fn from(s: &AbelianStructure) -> StructureInfo {
        StructureInfo {
            rank: s.free_rank(),
            factors: s.torsion().iter().map(|d| d.to_string()).collect(),
            display: s.to_string(),
        }
    }
}

/// One group-structure row; `structure` is absent when the row was
/// skipped, with the reason in `note`.
#[derive(Clone, Debug, Serialize)]
pub struct GroupRow {
    pub object: String,
    pub n: u32,
    pub k: u32,
    pub structure: Option<StructureInfo>,
    pub note: Option<String>,
}

/// Outcome of one named check or conjecture scan at one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// A verification passed.
    Pass,
    /// A verification failed; this is the only gating status.
    Fail,
    /// A conjecture scan found no counterexample at this degree.
    Holds,
    /// A conjecture scan found a counterexample; informational.
    Fails,
    /// Not run, with the reason in the witness field.
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub n: u32,
    pub k: u32,
    pub status: Status,
    /// Failure witness or skip reason.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub n: u32,
    pub k_range: [u32; 2],
    pub requested: Vec<String>,
    pub groups: Vec<GroupRow>,
    pub checks: Vec<CheckRow>,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl Report {
    pub fn new(command: &str, spec: &JobSpec) -> Report {
        Report {
            version: REPORT_FORMAT_VERSION,
            command: command.to_string(),
            n: spec.n,
            k_range: [spec.k_range.0, spec.k_range.1],
            requested: spec.checks.clone(),
            groups: Vec::new(),
            checks: Vec::new(),
            timings: Vec::new(),
        }
    }

    /// True when some verification failed. Conjecture counterexamples
    /// and skipped rows do not count.
    pub fn any_check_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text_string(),
            Format::Json => self.to_json_string(),
            Format::Csv => self.to_csv_string(),
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// The same rows as the JSON content, one record per line:
    /// `section,name,n,k,value,witness`.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["section", "name", "n", "k", "value", "witness"])
            .expect("csv header");
        for g in &self.groups {
            let value = g
                .structure
                .as_ref()
                .map(|s| s.display.clone())
                .unwrap_or_else(|| "skipped".to_string());
            w.write_record([
                "group",
                &g.object,
                &g.n.to_string(),
                &g.k.to_string(),
                &value,
                g.note.as_deref().unwrap_or(""),
            ])
            .expect("csv row");
        }
        for c in &self.checks {
            w.write_record([
                "check",
                &c.name,
                &c.n.to_string(),
                &c.k.to_string(),
                status_str(c.status),
                c.witness.as_deref().unwrap_or(""),
            ])
            .expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv buffer")).expect("csv utf8")
    }

    pub fn to_text_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} (n = {}, k = {}..={})\n",
            self.command, self.n, self.k_range[0], self.k_range[1]
        ));
        if !self.groups.is_empty() {
            out.push('\n');
            let width = self.groups.iter().map(|g| g.object.len()).max().unwrap_or(0);
            for g in &self.groups {
                let value = g
                    .structure
                    .as_ref()
                    .map(|s| s.display.clone())
                    .unwrap_or_else(|| "skipped".to_string());
                out.push_str(&format!(
                    "  {:width$}  n={} k={}  {}",
                    g.object,
                    g.n,
                    g.k,
                    value,
                    width = width
                ));
                if let Some(note) = &g.note {
                    out.push_str(&format!("  ({note})"));
                }
                out.push('\n');
            }
        }
        if !self.checks.is_empty() {
            out.push('\n');
            for c in &self.checks {
                out.push_str(&format!(
                    "  {}  n={} k={}  {}",
                    c.name,
                    c.n,
                    c.k,
                    status_str(c.status)
                ));
                if let Some(w) = &c.witness {
                    out.push_str(&format!("  [{w}]"));
                }
                out.push('\n');
            }
        }
        if !self.timings.is_empty() {
            out.push('\n');
            for (label, d) in &self.timings {
                out.push_str(&format!("  {label}: {:.3}s\n", d.as_secs_f64()));
            }
        }
        out
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Skipped => "skipped",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_spec() -> JobSpec {
        JobSpec {
            n: 2,
            k_range: (1, 2),
            checks: vec!["cor-dd".to_string()],
            format: Format::Json,
            cache_dir: None,
            jobs: 4,
            generator_limit: 50_000,
        }
    }

    fn sample_report() -> Report {
        let mut r = Report::new("verify", &sample_spec());
        r.groups.push(GroupRow {
            object: "K".to_string(),
            n: 2,
            k: 2,
            structure: Some(StructureInfo {
                rank: 0,
                factors: vec!["2".to_string(), "2".to_string()],
                display: "Z/2 + Z/2".to_string(),
            }),
            note: None,
        });
        r.checks.push(CheckRow {
            name: "cor-dd".to_string(),
            n: 2,
            k: 1,
            status: Status::Pass,
            witness: None,
        });
        r.timings.push(("cor-dd n=2 k=1".to_string(), Duration::from_millis(12)));
        r
    }

    #[test]
    fn json_is_deterministic_and_echoes_no_environment() {
        let a = sample_report().to_json_string();
        let mut other = sample_report();
        other.timings.clear();
        // Timings never reach the serialized form.
        assert_eq!(a, other.to_json_string());
        assert!(a.contains("\"version\": 1"));
        assert!(!a.contains("jobs"));
        assert!(!a.contains("cache"));
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn csv_carries_the_json_rows() {
        let r = sample_report();
        let csv_text = r.to_csv_string();
        let mut rd = csv::Reader::from_reader(csv_text.as_bytes());
        let rows: Vec<csv::StringRecord> = rd.records().map(|x| x.unwrap()).collect();
        assert_eq!(rows.len(), r.groups.len() + r.checks.len());
        assert_eq!(&rows[0][0], "group");
        assert_eq!(&rows[0][1], "K");
        assert_eq!(&rows[0][4], "Z/2 + Z/2");
        assert_eq!(&rows[1][0], "check");
        assert_eq!(&rows[1][4], "pass");

        let v: serde_json::Value = serde_json::from_str(&r.to_json_string()).unwrap();
        assert_eq!(v["groups"][0]["structure"]["display"], "Z/2 + Z/2");
        assert_eq!(v["checks"][0]["status"], "pass");
    }

    #[test]
    fn text_includes_timings() {
        let text = sample_report().to_text_string();
        assert!(text.contains("cor-dd"));
        assert!(text.contains("0.012s"));
    }

    #[test]
    fn only_fail_status_gates() {
        let mut r = sample_report();
        assert!(!r.any_check_failed());
        r.checks.push(CheckRow {
            name: "eta-iso".to_string(),
            n: 2,
            k: 2,
            status: Status::Fails,
            witness: Some("kernel Z/2".to_string()),
        });
        assert!(!r.any_check_failed(), "conjecture evidence must not gate");
        r.checks.push(CheckRow {
            name: "tau".to_string(),
            n: 2,
            k: 2,
            status: Status::Fail,
            witness: None,
        });
        assert!(r.any_check_failed());
    }
}
