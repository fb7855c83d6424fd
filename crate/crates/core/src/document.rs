//! Serialized forms of a structure table: the JSON `TableDocument`, CSV and
//! a LaTeX tabular.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Rational;
use crate::table::StructureTable;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Error, Debug)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn schema(msg: impl Into<String>) -> DocumentError {
    DocumentError::Schema(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    pub coefficients: BTreeMap<String, String>,
}

/// JSON form of a table. Pairs that are absent have zero bracket.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDocument {
    pub schema_version: String,
    pub dim: usize,
    pub names: Vec<String>,
    pub brackets: Vec<BracketRecord>,
}

/// `p/q` in lowest terms, always with an explicit positive denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Inverse of [`format_rational`]; rejects anything not in that exact form.
pub fn parse_rational(s: &str) -> Result<Rational, DocumentError> {
    let bad = || {
        schema(format!(
            "rational {s:?} is not of the form p/q in lowest terms"
        ))
    };
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let p_digits = p.strip_prefix('-').unwrap_or(p);
    if !digits(p_digits) || !digits(q) {
        return Err(bad());
    }
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if !q.is_positive() {
        return Err(bad());
    }
    let r = Rational::new(p.clone(), q.clone());
    if r.numer() != &p || r.denom() != &q {
        return Err(bad());
    }
    Ok(r)
}

impl TableDocument {
    pub fn from_table(t: &StructureTable) -> Self {
        let names = t.names().to_vec();
        let brackets = t
            .stored_brackets()
            .iter()
            .map(|(&(i, j), e)| BracketRecord {
                i,
                j,
                coefficients: e
                    .iter()
                    .map(|(&k, c)| (names[k].clone(), format_rational(c)))
                    .collect(),
            })
            .collect();
        TableDocument {
            schema_version: SCHEMA_VERSION.into(),
            dim: t.dim(),
            names,
            brackets,
        }
    }

    pub fn to_table(&self) -> Result<StructureTable, DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(format!(
                "unsupported schema_version {:?}",
                self.schema_version
            )));
        }
        if self.dim != self.names.len() {
            return Err(schema(format!(
                "dim {} but {} names",
                self.dim,
                self.names.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for n in &self.names {
            if n.is_empty() || !seen.insert(n.as_str()) {
                return Err(schema(format!("empty or repeated basis name {n:?}")));
            }
        }
        let mut t = StructureTable::new(self.names.clone());
        let mut pairs = BTreeSet::new();
        for b in &self.brackets {
            if b.i >= b.j || b.j >= self.dim {
                return Err(schema(format!(
                    "bracket record ({}, {}) needs i < j < dim",
                    b.i, b.j
                )));
            }
            if !pairs.insert((b.i, b.j)) {
                return Err(schema(format!("bracket ({}, {}) listed twice", b.i, b.j)));
            }
            for (name, value) in &b.coefficients {
                let k = t
                    .index_of(name)
                    .ok_or_else(|| schema(format!("unknown basis name {name:?}")))?;
                let c = parse_rational(value)?;
                if c.is_zero() {
                    return Err(schema(format!(
                        "explicit zero coefficient in ({}, {})",
                        b.i, b.j
                    )));
                }
                t.set_constant(b.i, b.j, k, c);
            }
        }
        Ok(t)
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

pub fn table_from_json(text: &str) -> Result<StructureTable, DocumentError> {
    TableDocument::from_json(text)?.to_table()
}

pub fn table_to_json(t: &StructureTable) -> String {
    TableDocument::from_table(t).to_json()
}

/// Header `i,j,<names>`, then one row per pair `i < j` (zero pairs included)
/// with every coefficient as `p/q`.
pub fn table_to_csv(t: &StructureTable) -> Result<String, DocumentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["i".to_string(), "j".to_string()];
    header.extend(t.names().iter().cloned());
    w.write_record(&header)?;
    for i in 0..t.dim() {
        for j in i + 1..t.dim() {
            let mut row = vec![t.names()[i].clone(), t.names()[j].clone()];
            row.extend(t.basis_bracket(i, j).iter().map(format_rational));
            w.write_record(&row)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| schema(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// `h1` → `h_1`, `a12` → `a_{12}`; other names pass through.
pub fn latex_name(name: &str) -> String {
    let split = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (stem, digits) = name.split_at(split);
    let plain = !stem.is_empty() && stem.chars().all(|c| c.is_ascii_alphabetic());
    match digits.len() {
        _ if !plain => name.to_string(),
        0 => name.to_string(),
        1 => format!("{stem}_{digits}"),
        _ => format!("{stem}_{{{digits}}}"),
    }
}

fn latex_combination(t: &StructureTable, v: &[Rational]) -> String {
    let mut s = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        let a = c.abs();
        if a.is_integer() {
            if !a.is_one() {
                s.push_str(&a.numer().to_string());
            }
        } else {
            s.push_str(&format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom()));
        }
        s.push_str(&latex_name(&t.names()[k]));
    }
    s
}

/// Upper-triangular tabular: row `b_i`, column `b_j` holds `[b_i, b_j]` for
/// `i ≤ j`; cells below the diagonal are blank.
pub fn table_to_latex(t: &StructureTable) -> String {
    let n = t.dim();
    let mut s = String::new();
    s.push_str("\\begin{tabular}{c||");
    s.push_str(&"c|".repeat(n));
    s.push_str("}\n$[\\cdot,\\cdot]$");
    for name in t.names() {
        s.push_str(&format!(" & ${}$", latex_name(name)));
    }
    s.push_str(" \\\\ \\hline\\hline\n");
    for i in 0..n {
        s.push_str(&format!("${}$", latex_name(&t.names()[i])));
        for j in 0..n {
            s.push_str(" & ");
            if j < i {
                continue;
            }
            let v = t.basis_bracket(i, j);
            if v.iter().all(Zero::is_zero) {
                s.push('0');
            } else {
                s.push_str(&format!("${}$", latex_combination(t, &v)));
            }
        }
        s.push_str(" \\\\ \\hline\n");
    }
    s.push_str("\\end{tabular}\n");
    s
}
