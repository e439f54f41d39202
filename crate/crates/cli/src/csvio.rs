//! CSV tables with a provenance preamble.
//!
//! Each file starts with `#`-comment lines carrying the config hash, master
//! seed and code version, followed by a header row. Floats are written in
//! shortest round-trip form, so reading a table back recovers every value
//! bit for bit.

use crate::error::{CliError, CliResult};

/// Provenance written at the top of every output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stamp {
    pub config_hash: String,
    pub master_seed: u64,
    pub version: String,
}

impl Stamp {
    pub fn new(config_hash: String, master_seed: u64) -> Self {
        Self { config_hash, master_seed, version: env!("CARGO_PKG_VERSION").to_string() }
    }

    fn preamble(&self) -> String {
        format!(
            "# config_hash={}\n# master_seed={}\n# version={}\n",
            self.config_hash, self.master_seed, self.version
        )
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// An in-memory table of already formatted cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, stamp: &Stamp) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells");
        stamp.preamble() + &body
    }

    /// Parses a rendered table, skipping the comment preamble.
    pub fn parse(name: &str, text: &str) -> CliResult<Self> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header = r
            .headers()
            .map_err(|e| CliError::Input(format!("{name}: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| CliError::Input(format!("{name}: {e}")))?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn expect_header(&self, name: &str, expected: &[&str]) -> CliResult<()> {
        if self.header.iter().map(String::as_str).ne(expected.iter().copied()) {
            return Err(CliError::Input(format!(
                "{name}: header {:?}, expected {:?}",
                self.header, expected
            )));
        }
        Ok(())
    }
}

pub fn parse_f64(name: &str, row: usize, cell: &str) -> CliResult<f64> {
    cell.parse::<f64>()
        .map_err(|_| CliError::Input(format!("{name}: row {row}: `{cell}` is not a number")))
}

pub fn parse_usize(name: &str, row: usize, cell: &str) -> CliResult<usize> {
    cell.parse::<usize>()
        .map_err(|_| CliError::Input(format!("{name}: row {row}: `{cell}` is not an index")))
}

/// Reads the `key=value` preamble lines of a rendered table.
pub fn read_stamp(text: &str) -> Option<Stamp> {
    let mut hash = None;
    let mut seed = None;
    let mut version = None;
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        let body = line.trim_start_matches('#').trim();
        if let Some((k, v)) = body.split_once('=') {
            match k {
                "config_hash" => hash = Some(v.to_string()),
                "master_seed" => seed = v.parse().ok(),
                "version" => version = Some(v.to_string()),
                _ => {}
            }
        }
    }
    Some(Stamp { config_hash: hash?, master_seed: seed?, version: version? })
}
