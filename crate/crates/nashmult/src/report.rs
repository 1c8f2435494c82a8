//! Report assembly and emission. Every command produces a [`Report`]: a list
//! of labelled items whose cells carry a value plus the provenance of that
//! value (closed formula, blow-up oracle, brute-force enumeration, or echoed
//! input). Table and JSON emission render the same cells, so the two modes
//! always carry identical values.

use std::fmt;

use crate::field::Rational;
use crate::order::{ArcOrder, OrderValue, ReesOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Formula,
    Oracle,
    BruteForce,
    Input,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Formula => "formula",
            Provenance::Oracle => "oracle",
            Provenance::BruteForce => "brute-force",
            Provenance::Input => "input",
        }
    }
}

/// A single report value.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Rational(Rational),
    Infinity,
    /// Truncation-limited lower bound: the true value is >= this, unknown.
    Inconclusive(Rational),
    Bool(bool),
    Text(String),
}

fn rational_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Rational(r) => write!(f, "{}", rational_str(r)),
            Cell::Infinity => write!(f, "inf"),
            Cell::Inconclusive(b) => write!(f, "≥{}?", rational_str(b)),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(s) => write!(f, "{s}"),
        }
    }
}

impl Cell {
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Cell::Int(n) => json!(n),
            Cell::Rational(r) if r.is_integer() => json!(*r.numer()),
            Cell::Rational(r) => json!(rational_str(r)),
            Cell::Infinity => json!("inf"),
            Cell::Inconclusive(b) if b.is_integer() => json!({ "inconclusive": *b.numer() }),
            Cell::Inconclusive(b) => json!({ "inconclusive": rational_str(b) }),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }

    pub fn from_order(v: &OrderValue) -> Cell {
        match v {
            OrderValue::Finite(n) => Cell::Int(*n as i64),
            OrderValue::Infinity => Cell::Infinity,
            OrderValue::Inconclusive(n) => Cell::Inconclusive(Rational::new(*n as i64, 1)),
        }
    }

    pub fn from_rees_order(v: &ReesOrder) -> Cell {
        match v {
            ReesOrder::Finite(r) => Cell::Rational(*r),
            ReesOrder::Infinity => Cell::Infinity,
        }
    }

    pub fn from_arc_order(v: &ArcOrder) -> Cell {
        match v {
            ArcOrder::Finite(r) => Cell::Rational(*r),
            ArcOrder::Inconclusive { bound } => Cell::Inconclusive(*bound),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Item {
    pub label: String,
    pub fields: Vec<(String, Cell, Provenance)>,
}

impl Item {
    pub fn new(label: impl Into<String>) -> Item {
        Item { label: label.into(), fields: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, cell: Cell, provenance: Provenance) {
        self.fields.push((name.into(), cell, provenance));
    }
}

/// Process exit codes: success, mathematical mismatch, usage error,
/// inconclusive-precision outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    Mismatch,
    Usage,
    Inconclusive,
}

impl ExitStatus {
    pub fn code(&self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Mismatch => 1,
            ExitStatus::Usage => 2,
            ExitStatus::Inconclusive => 3,
        }
    }

    /// Keeps the most severe status, where mismatch beats inconclusive.
    pub fn combine(self, other: ExitStatus) -> ExitStatus {
        use ExitStatus::*;
        match (self, other) {
            (Usage, _) | (_, Usage) => Usage,
            (Mismatch, _) | (_, Mismatch) => Mismatch,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (Success, Success) => Success,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Table,
    Json,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub items: Vec<Item>,
    pub exit: ExitStatus,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report { command: command.into(), items: Vec::new(), exit: ExitStatus::Success }
    }

    pub fn emit(&self, mode: OutputMode) -> String {
        match mode {
            OutputMode::Table => self.emit_table(),
            OutputMode::Json => self.emit_json(),
        }
    }

    fn emit_table(&self) -> String {
        // column order: first appearance across items
        let mut columns: Vec<String> = vec!["item".to_string()];
        for item in &self.items {
            for (name, _, _) in &item.fields {
                if !columns.contains(name) {
                    columns.push(name.clone());
                }
            }
        }
        let mut rows: Vec<Vec<String>> = vec![columns.clone()];
        for item in &self.items {
            let mut row = vec![item.label.clone()];
            for col in &columns[1..] {
                match item.fields.iter().find(|(n, _, _)| n == col) {
                    Some((_, cell, prov)) => row.push(format!("{cell} [{}]", prov.as_str())),
                    None => row.push("-".to_string()),
                }
            }
            rows.push(row);
        }
        let widths: Vec<usize> = (0..columns.len())
            .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = format!("# {}\n", self.command);
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, cell)| {
                    let pad = widths[i] - cell.chars().count();
                    format!("{cell}{}", " ".repeat(pad))
                })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    fn emit_json(&self) -> String {
        use serde_json::{json, Map, Value};
        let mut out = String::new();
        for item in &self.items {
            let mut obj = Map::new();
            obj.insert("command".into(), json!(self.command));
            obj.insert("item".into(), json!(item.label));
            let mut fields = Map::new();
            for (name, cell, prov) in &item.fields {
                fields.insert(
                    name.clone(),
                    json!({ "value": cell.to_json(), "provenance": prov.as_str() }),
                );
            }
            obj.insert("fields".into(), Value::Object(fields));
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }
}
