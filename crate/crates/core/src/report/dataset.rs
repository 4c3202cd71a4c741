use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// What a column holds, for the dominance audit and the plots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Role {
    Axis,
    /// A bound on the information of the strategies that name it.
    Bound,
    /// Information reached by a strategy; checked against `bounded_by`.
    Strategy { bounded_by: Vec<String> },
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
    pub role: Role,
}

impl Column {
    pub fn new(name: &str, unit: &str, role: Role) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
            role,
        }
    }

    pub fn axis(name: &str, unit: &str) -> Self {
        Self::new(name, unit, Role::Axis)
    }

    pub fn bound(name: &str, unit: &str) -> Self {
        Self::new(name, unit, Role::Bound)
    }

    pub fn info(name: &str, unit: &str) -> Self {
        Self::new(name, unit, Role::Info)
    }

    pub fn strategy(name: &str, unit: &str, bounded_by: &[&str]) -> Self {
        Self::new(
            name,
            unit,
            Role::Strategy {
                bounded_by: bounded_by.iter().map(|s| s.to_string()).collect(),
            },
        )
    }

    /// `name[unit]`, or the bare name for unitless labels.
    pub fn header(&self) -> String {
        if self.unit.is_empty() {
            self.name.clone()
        } else {
            format!("{}[{}]", self.name, self.unit)
        }
    }
}

/// A table of numbers with an optional leading text column. Missing cells
/// are `None` and render as `-`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    /// Header of the text column, when there is one.
    pub label: Option<String>,
    pub labels: Vec<String>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub notes: BTreeMap<String, String>,
}

impl Dataset {
    pub fn new(name: &str, columns: Vec<Column>) -> Self {
        Self {
            name: name.into(),
            label: None,
            labels: Vec::new(),
            columns,
            rows: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn push_labeled(&mut self, label: &str, row: Vec<Option<f64>>) {
        self.labels.push(label.into());
        self.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.insert(key.into(), value.to_string());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn headers(&self) -> Vec<String> {
        self.label
            .iter()
            .cloned()
            .chain(self.columns.iter().map(Column::header))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers().join(","));
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = Vec::with_capacity(row.len() + 1);
            if self.label.is_some() {
                cells.push(self.labels[i].clone());
            }
            cells.extend(row.iter().map(|v| cell_text(*v)));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Same keys as the CSV header; non-finite values become strings.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut cells: Vec<Value> = Vec::with_capacity(row.len() + 1);
                if self.label.is_some() {
                    cells.push(Value::String(self.labels[i].clone()));
                }
                cells.extend(row.iter().map(|v| match v {
                    None => Value::Null,
                    Some(x) if x.is_finite() => json!(x),
                    Some(x) => Value::String(cell_text(Some(*x))),
                }));
                Value::Array(cells)
            })
            .collect();
        let doc = json!({
            "name": self.name,
            "columns": self.headers(),
            "rows": rows,
            "notes": self.notes,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("dataset serialises");
        s.push('\n');
        s
    }

    /// Human-readable rendering for the terminal.
    pub fn to_text(&self) -> String {
        let headers = self.headers();
        let mut cells: Vec<Vec<String>> = vec![headers];
        for (i, row) in self.rows.iter().enumerate() {
            let mut line = Vec::new();
            if self.label.is_some() {
                line.push(self.labels[i].clone());
            }
            line.extend(row.iter().map(|v| match v {
                Some(x) if x.is_finite() => format!("{x:.6}"),
                other => cell_text(*other),
            }));
            cells.push(line);
        }
        let widths: Vec<usize> = (0..cells[0].len())
            .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in &cells {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}", w = *w))
                .collect();
            let _ = writeln!(out, "{}", line.join("  "));
        }
        for (k, v) in &self.notes {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out
    }
}

fn cell_text(v: Option<f64>) -> String {
    match v {
        None => "-".into(),
        Some(x) if x.is_nan() => "nan".into(),
        Some(x) if x.is_infinite() => if x > 0.0 { "inf" } else { "-inf" }.into(),
        Some(x) => format!("{x:e}"),
    }
}

/// Finite values only; everything else becomes a missing cell.
pub fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub row: usize,
    pub strategy: String,
    pub bound: String,
    pub value: f64,
    pub limit: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Absolute slack of the dominance audit.
pub const AUDIT_TOL: f64 = 1e-6;

/// Checks every strategy cell against each bound it names in the same row.
/// Missing cells on either side are skipped.
pub fn audit(data: &Dataset) -> Audit {
    let mut out = Audit::default();
    for (j, col) in data.columns.iter().enumerate() {
        let Role::Strategy { bounded_by } = &col.role else {
            continue;
        };
        let bounds: Vec<(usize, &String)> = bounded_by
            .iter()
            .filter_map(|b| data.column_index(b).map(|k| (k, b)))
            .collect();
        for (i, row) in data.rows.iter().enumerate() {
            let Some(v) = row[j] else { continue };
            for &(k, name) in &bounds {
                let Some(limit) = row[k] else { continue };
                out.checked += 1;
                if !(v <= limit + AUDIT_TOL) {
                    out.violations.push(Violation {
                        row: i,
                        strategy: col.name.clone(),
                        bound: name.clone(),
                        value: v,
                        limit,
                    });
                }
            }
        }
    }
    out
}
