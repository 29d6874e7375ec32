//! Deterministic delimited tables.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), lines end in
//! `\n`, and row order follows the sweep grid.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::Format;
use crate::CliError;

pub const SPECTRUM_HEADER: &[&str] = &["delta", "re_r", "im_r", "re_t", "im_t", "R", "T", "loss"];
pub const ETA_HEADER: &[&str] = &["theta", "s", "eta"];
pub const CAVITY_HEADER: &[&str] = &["delta_probe", "re_t", "im_t", "T"];
pub const ORACLE_HEADER: &[&str] = &["case", "max_abs_dr", "max_abs_dt"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Index(usize),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Index(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self, format: Format) -> String {
        let sep = format.delimiter().to_string();
        let mut out = self.header.join(&sep);
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str(&sep);
                }
                match cell {
                    Cell::Index(v) => write!(out, "{v}"),
                    Cell::Float(v) => write!(out, "{v:.16e}"),
                }
                .expect("writing to a String cannot fail");
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<(), CliError> {
        std::fs::write(path, self.render(format)).map_err(|source| CliError::Io {
            context: format!("cannot write {}", path.display()),
            source,
        })
    }
}
