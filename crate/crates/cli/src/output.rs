use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{commands, Cli};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Jsonl,
    Svg,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] vantage::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use vantage::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::Parse(_) | E::Domain(_) | E::DimensionMismatch { .. } | E::Degenerate(_) | E::Guard(_) => 2,
                E::Indeterminate(_) => 3,
                E::Tie { .. }
                | E::NotProtrusive
                | E::NotApplicable(_)
                | E::Stabilization(_)
                | E::Verification(_) => 1,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A command's result in every format it supports.
#[derive(Debug, Default)]
pub struct Output {
    pub json: Value,
    pub jsonl: Option<String>,
    pub csv: Option<String>,
    pub svg: Option<String>,
    pub code: u8,
    pub inputs: Vec<PathBuf>,
}

impl Output {
    pub fn json(value: impl Serialize) -> Self {
        Output {
            json: serde_json::to_value(value).expect("serialisable"),
            ..Default::default()
        }
    }

    pub fn code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }

    pub fn inputs(mut self, inputs: &[&Path]) -> Self {
        self.inputs = inputs.iter().map(|p| p.to_path_buf()).collect();
        self
    }

    fn render(&self, format: Format) -> CliResult<String> {
        let missing = |f: &str| CliError::Usage(format!("this command has no {f} output"));
        match format {
            Format::Json if self.json.is_null() => self.svg.clone().ok_or_else(|| missing("json")),
            Format::Json => Ok(serde_json::to_string_pretty(&self.json).expect("serialisable") + "\n"),
            Format::Jsonl => self.jsonl.clone().ok_or_else(|| missing("jsonl")),
            Format::Csv => self.csv.clone().ok_or_else(|| missing("csv")),
            Format::Svg => self.svg.clone().ok_or_else(|| missing("svg")),
        }
    }
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

/// Provenance for one run: what went in, what came out, how long it took.
#[derive(Serialize)]
struct ExperimentReport {
    command: Vec<String>,
    version: &'static str,
    seed: u64,
    inputs: Vec<InputDigest>,
    output_sha256: String,
    exit_code: u8,
    wall_time_ms: u128,
    results: Value,
}

pub fn run(cli: &Cli) -> CliResult<u8> {
    let start = Instant::now();
    let out = commands::dispatch(cli)?;
    let text = out.render(cli.global.format)?;
    match &cli.global.out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &cli.global.report {
        let inputs = out
            .inputs
            .iter()
            .map(|p| {
                Ok(InputDigest {
                    path: p.display().to_string(),
                    sha256: sha256(read(p)?.as_bytes()),
                })
            })
            .collect::<CliResult<_>>()?;
        let report = ExperimentReport {
            command: std::env::args().collect(),
            version: env!("CARGO_PKG_VERSION"),
            seed: cli.global.seed,
            inputs,
            output_sha256: sha256(text.as_bytes()),
            exit_code: out.code,
            wall_time_ms: start.elapsed().as_millis(),
            results: out.json.clone(),
        };
        write(path, &(serde_json::to_string_pretty(&report).expect("serialisable") + "\n"))?;
    }
    Ok(out.code)
}
