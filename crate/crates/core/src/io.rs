//! External formats: JSON tree-description files and CSV tables.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::error::Error;
use crate::num::Real;
use crate::tree::DecisionTree;

/// Failure while loading a tree description, split by category so callers
/// can map I/O, syntax, and model-invariant problems to distinct exits.
#[derive(Debug, Error)]
pub enum TreeFileError {
    #[error("cannot read tree file: {0}")]
    Io(#[from] std::io::Error),

    #[error("tree file is not valid JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid tree at {path}: {message}")]
    Invalid { path: String, message: String },
}

/// One node of the on-disk format: `outcome` for a leaf or `children` for a
/// branch, `p` on every non-root node, `label` free for documentation.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDocument {
    #[allow(dead_code)]
    label: Option<String>,
    p: Option<f64>,
    outcome: Option<f64>,
    children: Option<Vec<TreeDocument>>,
}

fn invalid(path: &str, message: impl fmt::Display) -> TreeFileError {
    TreeFileError::Invalid { path: path.to_string(), message: message.to_string() }
}

fn child_path(parent: &str, index: usize) -> String {
    if parent == "root" {
        format!("children[{index}]")
    } else {
        format!("{parent}.children[{index}]")
    }
}

fn build_node<S: Real>(doc: &TreeDocument, path: &str) -> Result<DecisionTree<S>, TreeFileError> {
    match (&doc.outcome, &doc.children) {
        (Some(_), Some(_)) => Err(invalid(path, "node has both an outcome and children")),
        (None, None) => Err(invalid(path, "node needs either an outcome or children")),
        (Some(x), None) => Ok(DecisionTree::leaf(S::of(*x))),
        (None, Some(children)) => {
            let mut pairs = Vec::with_capacity(children.len());
            for (index, child) in children.iter().enumerate() {
                let here = child_path(path, index);
                let p = child.p.ok_or_else(|| invalid(&here, "child node needs a probability"))?;
                crate::lottery::check_probability(S::of(p)).map_err(|e| invalid(&here, e))?;
                pairs.push((S::of(p), build_node(child, &here)?));
            }
            DecisionTree::branch(pairs).map_err(|e| invalid(path, e))
        }
    }
}

/// Reads and validates a JSON tree description.
pub fn parse_tree_file<S: Real>(path: &Path) -> Result<DecisionTree<S>, TreeFileError> {
    let text = std::fs::read_to_string(path)?;
    let doc: TreeDocument = serde_json::from_str(&text).map_err(|e| TreeFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.p.is_some() {
        return Err(invalid("root", "root node must not carry a probability"));
    }
    build_node(&doc, "root")
}

/// One CSV cell; numbers get the full-precision decimal rendering.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Str(String),
}

/// Renders a binary64 value so parsing it back recovers the exact bits.
pub fn full_precision(value: f64) -> String {
    format!("{value:.16e}")
}

/// A rectangular table with unique headers, rendered deterministically.
#[derive(Debug, Clone)]
pub struct CsvTable {
    headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new<T: Into<String>>(headers: Vec<T>) -> Result<Self, Error> {
        let headers: Vec<String> = headers.into_iter().map(Into::into).collect();
        if headers.is_empty() {
            return Err(Error::CsvShape { reason: "no columns".into() });
        }
        let mut seen = headers.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != headers.len() {
            return Err(Error::CsvShape { reason: "duplicate column name".into() });
        }
        for header in &headers {
            check_text(header)?;
        }
        Ok(CsvTable { headers, rows: Vec::new() })
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<(), Error> {
        if row.len() != self.headers.len() {
            return Err(Error::CsvShape {
                reason: format!(
                    "row has {} cells, table has {} columns",
                    row.len(),
                    self.headers.len()
                ),
            });
        }
        for cell in &row {
            if let Cell::Str(text) = cell {
                check_text(text)?;
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// The exact bytes emit_csv writes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Cell::Num(v) => full_precision(*v),
                    Cell::Str(s) => s.clone(),
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

fn check_text(text: &str) -> Result<(), Error> {
    if text.is_empty() || text.contains([',', '\n', '\r', '"']) {
        return Err(Error::CsvShape { reason: format!("cell text {text:?} needs quoting") });
    }
    Ok(())
}

/// Writes the table; identical tables produce byte-identical files.
pub fn emit_csv(table: &CsvTable, path: &Path) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(table.render().as_bytes())
}
