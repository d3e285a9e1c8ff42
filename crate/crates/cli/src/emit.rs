use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use mfg_core::agentsim::{SimConfig, SwitchEvent, Trajectory};
use mfg_core::output::{to_csv, trajectories_csv, CsvRecord};
use mfg_core::validation::ValidationReport;
use mfg_core::Error;
use serde::Serialize;

use crate::args::Format;

/// Everything that ends a run early.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

impl Failure {
    /// Writes the JSON error record to stderr and picks the exit status.
    pub fn report(&self) -> ExitCode {
        let (code, message, status) = match self {
            Failure::Core(e @ Error::Config(_)) => (e.code(), e.to_string(), 2),
            Failure::Core(e) => (e.code(), e.to_string(), 1),
            Failure::Io(msg) => ("io", msg.clone(), 1),
        };
        let record = ErrorRecord { error: code, message };
        eprintln!("{}", serde_json::to_string(&record).expect("error record serializes"));
        ExitCode::from(status)
    }
}

/// One simulated replica for output.
pub struct Replica<'a> {
    pub trajectory: &'a Trajectory,
    /// Present for myopic runs.
    pub switches: Option<&'a [SwitchEvent]>,
    pub unresolved: Option<u64>,
}

#[derive(Serialize)]
struct SampleRecord {
    t: f64,
    #[serde(rename = "x_DI")]
    x_di: f64,
    #[serde(rename = "x_DS")]
    x_ds: f64,
    #[serde(rename = "x_UI")]
    x_ui: f64,
    #[serde(rename = "x_US")]
    x_us: f64,
    case: Option<&'static str>,
}

#[derive(Serialize)]
struct ReplicaRecord<'a> {
    replica: u64,
    seed: u64,
    events: u64,
    samples: Vec<SampleRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    switches: Option<&'a [SwitchEvent]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unresolved: Option<u64>,
}

pub struct Emitter {
    format: Format,
    out: Option<PathBuf>,
}

impl Emitter {
    pub fn new(format: Format, out: Option<PathBuf>) -> Self {
        Self { format, out }
    }

    pub fn records<T: CsvRecord + Serialize>(&self, records: &[T]) -> Result<(), Failure> {
        match self.format {
            Format::Csv => self.write(&to_csv(records)),
            Format::Json => self.json(&records),
        }
    }

    /// Like [`Emitter::records`] for a single record; JSON gets an object
    /// rather than a one-element array.
    pub fn record<T: CsvRecord + Serialize>(&self, record: T) -> Result<(), Failure> {
        match self.format {
            Format::Csv => self.write(&to_csv(&[record])),
            Format::Json => self.json(&record),
        }
    }

    pub fn validation(&self, report: &ValidationReport) -> Result<(), Failure> {
        match self.format {
            Format::Csv => {
                let mut text = String::from("check,passed,failed,skipped\n");
                for c in &report.checks {
                    text.push_str(&format!("{},{},{},{}\n", c.name, c.passed, c.failed, c.skipped));
                }
                self.write(&text)
            }
            Format::Json => self.json(report),
        }
    }

    pub fn trajectories(
        &self,
        cfg: &SimConfig,
        replicas: &[Replica],
        switch_log: Option<&Path>,
    ) -> Result<(), Failure> {
        match self.format {
            Format::Csv => {
                let runs: Vec<Trajectory> = replicas.iter().map(|r| r.trajectory.clone()).collect();
                self.write(&trajectories_csv(&runs))?;
                if let Some(path) = switch_log {
                    write_file(path, &switch_csv(replicas))?;
                }
                Ok(())
            }
            Format::Json => {
                let records: Vec<ReplicaRecord> = replicas
                    .iter()
                    .enumerate()
                    .map(|(i, r)| ReplicaRecord {
                        replica: i as u64,
                        seed: cfg.seed.wrapping_add(i as u64),
                        events: r.trajectory.events,
                        samples: r
                            .trajectory
                            .samples
                            .iter()
                            .map(|s| {
                                let [x_di, x_ds, x_ui, x_us] = s.x().as_array();
                                SampleRecord { t: s.t, x_di, x_ds, x_ui, x_us, case: s.case.map(|c| c.label()) }
                            })
                            .collect(),
                        switches: r.switches,
                        unresolved: r.unresolved,
                    })
                    .collect();
                self.json(&records)
            }
        }
    }

    fn json<T: Serialize + ?Sized>(&self, value: &T) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
        text.push('\n');
        self.write(&text)
    }

    fn write(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => write_file(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

/// Switch log `t,old_case,new_case,mu`, with a leading replica column when
/// there is more than one replica.
fn switch_csv(replicas: &[Replica]) -> String {
    let tagged = replicas.len() > 1;
    let mut text = String::new();
    if tagged {
        text.push_str("replica,");
    }
    text.push_str(SwitchEvent::csv_header());
    text.push('\n');
    for (i, r) in replicas.iter().enumerate() {
        for s in r.switches.unwrap_or_default() {
            if tagged {
                text.push_str(&format!("{i},"));
            }
            text.push_str(&s.csv_row());
            text.push('\n');
        }
    }
    text
}
