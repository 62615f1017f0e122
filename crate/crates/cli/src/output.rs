use std::fmt;
use std::fs;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Format, RunConfig};

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, malformed input files or parameters outside their range.
    Usage(String),
    /// The mathematics declined: a precondition failed or a verdict is undecidable.
    Refused(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Refused(m) => write!(f, "refused: {m}"),
        }
    }
}

impl From<opspectra::Error> for Failure {
    fn from(e: opspectra::Error) -> Self {
        match e {
            opspectra::Error::BadParameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Refused(other.to_string()),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Refused(_) => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Badge {
    Exact,
    Numeric,
    Mixed,
}

impl fmt::Display for Badge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Badge::Exact => "exact",
            Badge::Numeric => "numeric",
            Badge::Mixed => "exact+numeric",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// What a subcommand produced.
#[derive(Clone, Debug)]
pub struct Artifact {
    pub command: String,
    pub badge: Badge,
    pub refused: bool,
    pub result: Value,
    pub table: Option<Table>,
    pub human: String,
}

/// On-disk form of an artifact, read back by `report`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope {
    pub command: String,
    pub badge: Badge,
    pub status: String,
    pub result: Value,
}

impl Artifact {
    pub fn new(command: &str, badge: Badge, result: Value, human: String) -> Self {
        Artifact { command: command.into(), badge, refused: false, result, table: None, human }
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn refused(mut self, yes: bool) -> Self {
        self.refused = yes;
        self
    }

    pub fn envelope(&self) -> Envelope {
        Envelope {
            command: self.command.clone(),
            badge: self.badge,
            status: if self.refused { "refused" } else { "ok" }.into(),
            result: self.result.clone(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.refused {
            2
        } else {
            0
        }
    }

    pub fn emit(&self, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
        let io = |e: std::io::Error| Failure::Usage(e.to_string());
        let body = match (cfg.format, &self.table) {
            (Format::Csv, Some(t)) => t.to_csv(),
            (Format::Human, _) => format!("{}\n", self.human.trim_end()),
            _ => format!("{}\n", serde_json::to_string_pretty(&self.result).expect("serializable")),
        };
        out.write_all(body.as_bytes()).map_err(io)?;
        if let Some(dir) = &cfg.output_dir {
            fs::create_dir_all(dir).map_err(io)?;
            let env = serde_json::to_string_pretty(&self.envelope()).expect("serializable");
            fs::write(dir.join(format!("{}.json", self.command)), env + "\n").map_err(io)?;
            if let Some(t) = &self.table {
                fs::write(dir.join(format!("{}.csv", self.command)), t.to_csv()).map_err(io)?;
            }
        }
        Ok(())
    }
}
