//! JSON wire formats for elements and structures, and decimal-exact float
//! serialization shared with the CSV writers.
//!
//! Elements travel as `{"n": int, "terms": [{"k": [int × 2n], "re": float,
//! "im": float}]}` and structures as `{"n": int, "theta": [[float]],
//! "g": [[float]], "J": [[float]]}`. Every float is written with 17
//! significant digits, so parsing the output reproduces the original
//! doubles bit for bit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{FourierElement, LatticeVector};
use crate::symplectic::SymplecticStructure;

/// One Fourier mode on the wire.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct TermJson {
    pub k: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

/// A Fourier element on the wire.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ElementJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

/// A symplectic structure on the wire.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct StructureJson {
    pub n: usize,
    pub theta: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<f64>>,
}

/// Parses an element from JSON text. Malformed JSON or wrong shapes are
/// schema errors; a mode vector of the wrong length for the declared `n`
/// is a dimension error.
pub fn parse_element(text: &str) -> Result<FourierElement> {
    let raw: ElementJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    element_from_json(&raw)
}

/// Converts the wire form into a validated element.
pub fn element_from_json(raw: &ElementJson) -> Result<FourierElement> {
    if raw.n == 0 {
        return Err(Error::Schema("element needs n >= 1".into()));
    }
    let mut terms = Vec::with_capacity(raw.terms.len());
    for term in &raw.terms {
        if term.k.len() != 2 * raw.n {
            return Err(Error::dim(2 * raw.n, term.k.len()));
        }
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::Schema("coefficients must be finite".into()));
        }
        terms.push((
            LatticeVector::new(term.k.clone())?,
            Complex64::new(term.re, term.im),
        ));
    }
    FourierElement::from_terms(raw.n, terms)
}

/// Converts an element to its wire form, modes in the element's canonical
/// (lexicographic) order so equal elements serialize identically.
pub fn element_to_json(a: &FourierElement) -> ElementJson {
    ElementJson {
        n: a.dim_n(),
        terms: a
            .terms()
            .map(|(k, c)| TermJson {
                k: k.components().to_vec(),
                re: c.re,
                im: c.im,
            })
            .collect(),
    }
}

/// Serializes an element to JSON text with decimal-exact floats.
pub fn element_to_string(a: &FourierElement) -> Result<String> {
    to_json_string(&element_to_json(a))
}

/// Parses a symplectic structure from JSON text; the structural axioms
/// (antisymmetry, positivity, J² = −1, g = θJ) are validated on the way in.
pub fn parse_structure(text: &str) -> Result<SymplecticStructure> {
    let raw: StructureJson =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if raw.n == 0 {
        return Err(Error::Schema("structure needs n >= 1".into()));
    }
    let dim = 2 * raw.n;
    let theta = matrix_from_rows(&raw.theta, dim)?;
    let g = matrix_from_rows(&raw.g, dim)?;
    let j = matrix_from_rows(&raw.j, dim)?;
    SymplecticStructure::new(theta, g, j)
}

/// Converts a structure to its wire form.
pub fn structure_to_json(s: &SymplecticStructure) -> StructureJson {
    StructureJson {
        n: s.dim_n(),
        theta: matrix_rows(s.theta()),
        g: matrix_rows(s.metric_g()),
        j: matrix_rows(s.complex_j()),
    }
}

/// Serializes a structure to JSON text with decimal-exact floats.
pub fn structure_to_string(s: &SymplecticStructure) -> Result<String> {
    to_json_string(&structure_to_json(s))
}

fn matrix_from_rows(rows: &[Vec<f64>], dim: usize) -> Result<DMatrix<f64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::dim(dim, rows.first().map_or(rows.len(), |r| r.len())));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Schema("matrix entries must be finite".into()));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Formats a float with 17 significant digits (scientific), enough for the
/// decimal text to round-trip to the identical double.
pub fn fmt_f64_17(x: f64) -> String {
    format!("{x:.16e}")
}

/// serde_json formatter that writes every float with 17 significant digits.
struct Exact17Formatter;

impl serde_json::ser::Formatter for Exact17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if !value.is_finite() {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                "non-finite float in JSON output",
            ));
        }
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any serde value to JSON text with 17-significant-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Exact17Formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Schema(e.to_string()))?;
    String::from_utf8(out).map_err(|e| Error::Schema(e.to_string()))
}
