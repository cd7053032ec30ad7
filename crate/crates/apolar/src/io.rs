//! File formats: forms, points, matrices and representations.
//!
//! Forms travel as JSON objects
//!
//! ```json
//! {
//!   "space": "V",
//!   "nvars": 2,
//!   "degree": 4,
//!   "terms": [ { "exp": [4, 0], "coef": "2" }, ... ]
//! }
//! ```
//!
//! with `"space"` either `"V"` or `"V*"`, exponent rows summing to the
//! declared degree and coefficients as reduced rational strings (`"p"` or
//! `"p/q"`). Canonical output lists terms graded-lex descending with no
//! zero coefficients, so serializing a parsed canonical file is the
//! identity byte for byte.
//!
//! Points are comma-separated rational literals (`1,-2/3,0`), one point per
//! line. Matrices are plain text: a `rows cols` header line, then row-major
//! entries. Representation files are JSON with entries
//! `{ "H": [...], "alpha": ... }` where rational strings mean exact values
//! and JSON numbers mean floats; the two kinds cannot be mixed.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::form::{Form, MultiIndex, PointVec, Role, Space};
use crate::matrix::{parse_rational, rational_to_string, RatMatrix};
use crate::numeric::{NumericEntry, NumericRepresentation};
use crate::powersum::Representation;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct FormFile {
    space: String,
    nvars: usize,
    degree: u32,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    exp: Vec<u32>,
    coef: String,
}

/// Canonical textual serialization of a form.
pub fn serialize_form(f: &Form) -> String {
    let file = FormFile {
        space: f.space().to_string(),
        nvars: f.nvars(),
        degree: f.degree(),
        terms: f
            .terms()
            .rev()
            .map(|(idx, coef)| TermFile {
                exp: idx.exponents().to_vec(),
                coef: rational_to_string(coef),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("forms always serialize");
    text.push('\n');
    text
}

/// Parse the textual form format, enforcing the degree invariant on every
/// exponent row.
pub fn parse_form(text: &str) -> Result<Form> {
    let file: FormFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("form file: {e}")))?;
    let space = match file.space.as_str() {
        "V" => Space::OnV,
        "V*" => Space::OnDual,
        other => return Err(Error::Parse(format!("unknown space tag {other:?}"))),
    };
    if file.nvars == 0 {
        return Err(Error::Parse("nvars must be at least 1".into()));
    }
    let mut terms = Vec::with_capacity(file.terms.len());
    for term in &file.terms {
        if term.exp.len() != file.nvars {
            return Err(Error::Parse(format!(
                "exponent row {:?} has {} entries, expected {}",
                term.exp,
                term.exp.len(),
                file.nvars
            )));
        }
        let row_degree: u32 = term.exp.iter().sum();
        if row_degree != file.degree {
            return Err(Error::Parse(format!(
                "exponent row {:?} has degree {}, declared degree is {}",
                term.exp, row_degree, file.degree
            )));
        }
        terms.push((MultiIndex::new(term.exp.clone()), parse_rational(&term.coef)?));
    }
    Form::from_terms(space, file.nvars, file.degree, terms)
}

/// Parse a single point: comma-separated rational literals.
pub fn parse_point(text: &str, role: Role) -> Result<PointVec> {
    let coords = text
        .trim()
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>>>()?;
    if coords.is_empty() {
        return Err(Error::Parse("empty point".into()));
    }
    Ok(PointVec::new(role, coords))
}

/// Parse one point per non-empty line.
pub fn parse_points(text: &str, role: Role) -> Result<Vec<PointVec>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_point(l, role))
        .collect()
}

pub fn serialize_points(points: &[PointVec]) -> String {
    let mut out = String::new();
    for p in points {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

/// Matrix text: `rows cols` header, then row-major rational entries.
pub fn serialize_matrix(m: &RatMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(rational_to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse(format!("matrix header {header:?} is not 'rows cols'")));
    }
    let rows: usize = dims[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad row count {:?}", dims[0])))?;
    let cols: usize = dims[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad column count {:?}", dims[1])))?;
    let mut data = Vec::with_capacity(rows * cols);
    for line in lines {
        for token in line.split_whitespace() {
            data.push(parse_rational(token)?);
        }
    }
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "matrix body has {} entries, expected {}",
            data.len(),
            rows * cols
        )));
    }
    let mut m = RatMatrix::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, data[r * cols + c].clone());
        }
    }
    Ok(m)
}

#[derive(Serialize, Deserialize)]
struct RepFile {
    m: u32,
    entries: Vec<RepEntryFile>,
}

#[derive(Serialize, Deserialize)]
struct RepEntryFile {
    #[serde(rename = "H")]
    h: Vec<serde_json::Value>,
    alpha: serde_json::Value,
}

/// A parsed representation file: exact when every value is a rational
/// string or integer, numeric when every value is a JSON float.
pub enum ParsedRepresentation {
    Exact(Representation),
    Numeric(NumericRepresentation),
}

fn value_as_rational(v: &serde_json::Value) -> Option<BigRational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s).ok(),
        serde_json::Value::Number(n) if n.is_i64() => {
            Some(BigRational::from_integer(n.as_i64()?.into()))
        }
        _ => None,
    }
}

fn value_as_float(v: &serde_json::Value) -> Option<f64> {
    match v {
        serde_json::Value::Number(n) => n.as_f64(),
        serde_json::Value::String(s) => parse_rational(s).ok().and_then(|r| r.to_f64()),
        _ => None,
    }
}

/// Parse a representation file, deciding between exact and numeric mode.
/// Exact mode requires every coordinate and coefficient to be an integer or
/// rational string; otherwise everything is read as floats.
pub fn parse_representation(text: &str) -> Result<ParsedRepresentation> {
    let file: RepFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("representation file: {e}")))?;
    if file.entries.is_empty() {
        return Err(Error::Parse("representation has no entries".into()));
    }
    let nvars = file.entries[0].h.len();
    for e in &file.entries {
        if e.h.len() != nvars {
            return Err(Error::Parse("entries have inconsistent lengths".into()));
        }
    }
    let all_exact = file
        .entries
        .iter()
        .all(|e| e.h.iter().all(|v| value_as_rational(v).is_some()) && value_as_rational(&e.alpha).is_some());
    if all_exact {
        let entries = file
            .entries
            .iter()
            .map(|e| {
                let coords: Vec<BigRational> =
                    e.h.iter().map(|v| value_as_rational(v).unwrap()).collect();
                (PointVec::new(Role::InDual, coords), value_as_rational(&e.alpha).unwrap())
            })
            .collect();
        return Ok(ParsedRepresentation::Exact(Representation::new(file.m, entries)?));
    }
    let entries = file
        .entries
        .iter()
        .map(|e| {
            let coords = e
                .h
                .iter()
                .map(|v| value_as_float(v).ok_or_else(|| Error::Parse(format!("bad coordinate {v}"))))
                .collect::<Result<Vec<f64>>>()?;
            let alpha =
                value_as_float(&e.alpha).ok_or_else(|| Error::Parse(format!("bad alpha {}", e.alpha)))?;
            Ok(NumericEntry { coords, alpha })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParsedRepresentation::Numeric(NumericRepresentation {
        m: file.m,
        nvars,
        entries,
        residual: f64::NAN,
    }))
}

/// Canonical serialization of an exact representation.
pub fn serialize_representation(rep: &Representation) -> String {
    let file = RepFile {
        m: rep.m(),
        entries: rep
            .entries()
            .iter()
            .map(|e| RepEntryFile {
                h: e.point
                    .coords()
                    .iter()
                    .map(|c| serde_json::Value::String(rational_to_string(c)))
                    .collect(),
                alpha: serde_json::Value::String(rational_to_string(&e.alpha)),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("representations always serialize");
    text.push('\n');
    text
}

/// Serialization of a float representation.
pub fn serialize_numeric_representation(rep: &NumericRepresentation) -> String {
    let to_number = |x: f64| {
        serde_json::Number::from_f64(x)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    };
    let file = RepFile {
        m: rep.m,
        entries: rep
            .entries
            .iter()
            .map(|e| RepEntryFile {
                h: e.coords.iter().map(|&c| to_number(c)).collect(),
                alpha: to_number(e.alpha),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("representations always serialize");
    text.push('\n');
    text
}
