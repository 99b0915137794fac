//! Tree and position files, and solve records.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use edgegame::tree::{parse_position, parse_tree, ParseError};
use edgegame::Tree;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ToolError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{}:{}: {}", .source.line, .source.column, .source.reason)]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}:{line}: malformed record: {source}")]
    Record {
        path: PathBuf,
        line: usize,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{0}")]
    Invalid(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ToolError + '_ {
    move |source| ToolError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_tree(path: &Path) -> Result<Tree, ToolError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_tree(&text).map_err(|source| ToolError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a position file; returns the tree and per-edge colors.
pub fn read_position(path: &Path) -> Result<(Tree, Vec<u8>), ToolError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_position(&text).map_err(|source| ToolError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Position text: the tree followed by one `c e x` line per colored edge.
pub fn position_text(tree: &Tree, colors: &[u8]) -> String {
    let mut out = tree.to_text();
    for (e, &c) in colors.iter().enumerate() {
        if c != 0 {
            out.push_str(&format!("c {e} {c}\n"));
        }
    }
    out
}

/// One solved (tree, k, variant) triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub n: usize,
    pub canonical_id: String,
    pub delta: usize,
    pub d4_shape: String,
    pub k: u8,
    pub variant: String,
    /// `AliceWins`, `BobWins`, or `Budget` when the search was cut off.
    pub winner: String,
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub edges: Vec<(usize, usize)>,
    /// Game chromatic index, when it was computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u8>,
}

impl SolveRecord {
    pub fn key(&self) -> (String, u8, String) {
        (self.canonical_id.clone(), self.k, self.variant.clone())
    }
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    n: usize,
    canonical_id: &'a str,
    delta: usize,
    d4_shape: &'a str,
    k: u8,
    variant: &'a str,
    winner: &'a str,
    nodes: u64,
    elapsed_ms: u64,
}

/// Reads line-delimited records; a missing file reads as empty.
pub fn read_records(path: &Path) -> Result<Vec<SolveRecord>, ToolError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(path)(e)),
    };
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|source| ToolError::Record {
            path: path.to_path_buf(),
            line: i + 1,
            source,
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Appends records, one JSON object per line.
pub fn append_records(path: &Path, records: &[SolveRecord]) -> Result<(), ToolError> {
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| io_err(path)(e.into()))?;
        w.write_all(b"\n").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes the CSV summary of `records`, replacing any existing file.
pub fn write_summary(path: &Path, records: &[SolveRecord]) -> Result<(), ToolError> {
    let csv_err = |source| ToolError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in records {
        w.serialize(SummaryRow {
            n: r.n,
            canonical_id: &r.canonical_id,
            delta: r.delta,
            d4_shape: &r.d4_shape,
            k: r.k,
            variant: &r.variant,
            winner: &r.winner,
            nodes: r.nodes,
            elapsed_ms: r.elapsed_ms,
        })
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// The summary path that goes with a record file: same stem, `.csv`.
pub fn summary_path(records: &Path) -> PathBuf {
    records.with_extension("csv")
}
