//! JSON and CSV file formats. Field elements are stored as integers
//! `sum c_i p^i` over their polynomial-basis coefficients.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::construct::{ConstructionTrace, VectorSequence};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::spread::{Plane, Spread, Vec4};

/// Provenance attached to every file the CLI writes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

/// Parameters a matrix file claims for its code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredParams {
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub r: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<DeclaredParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunConfig>,
}

fn field_from(p: u32, e: u32, modulus: &[u32]) -> Result<Field> {
    Field::new(p, e, if e > 1 { Some(modulus) } else { None })
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        let f = m.field();
        MatrixFile {
            p: f.characteristic(),
            e: f.degree(),
            modulus: f.modulus().to_vec(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows(),
            params: None,
            run: None,
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        let field = field_from(self.p, self.e, &self.modulus)?;
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Format(format!("declared shape {}x{} does not match entries", self.rows, self.cols)));
        }
        Matrix::from_rows(&field, &self.entries)
    }

    /// Rows as CSV, one record per matrix row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for row in &self.entries {
            w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    /// Reads entries back from [`MatrixFile::to_csv`] output.
    pub fn from_csv(field: &Field, text: &str) -> Result<Matrix> {
        let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
        let rows = r
            .deserialize::<Vec<u32>>()
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Format(e.to_string()))?;
        Matrix::from_rows(field, &rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadFile {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    pub planes: Vec<[Vec4; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunConfig>,
}

impl SpreadFile {
    pub fn from_spread(s: &Spread) -> Self {
        let f = s.field();
        SpreadFile {
            p: f.characteristic(),
            e: f.degree(),
            modulus: f.modulus().to_vec(),
            planes: s.planes().iter().map(|pl| pl.basis).collect(),
            run: None,
        }
    }

    pub fn to_spread(&self) -> Result<Spread> {
        let field = field_from(self.p, self.e, &self.modulus)?;
        let planes = self.planes.iter().enumerate().map(|(id, basis)| Plane { id, basis: *basis }).collect();
        Spread::from_planes(&field, planes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    /// `(u1, u2)` per round.
    pub pairs: Vec<(Vec4, Vec4)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunConfig>,
}

impl SequenceFile {
    pub fn from_sequence(seq: &VectorSequence) -> Self {
        let f = seq.field();
        SequenceFile {
            q: f.order(),
            p: f.characteristic(),
            e: f.degree(),
            modulus: f.modulus().to_vec(),
            pairs: seq.pairs().to_vec(),
            run: None,
        }
    }

    pub fn to_sequence(&self) -> Result<VectorSequence> {
        let field = field_from(self.p, self.e, &self.modulus)?;
        if field.order() != self.q {
            return Err(Error::Format(format!("q = {} but p^e = {}", self.q, field.order())));
        }
        VectorSequence::new(&field, self.pairs.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    pub trace: ConstructionTrace,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunConfig>,
}

impl TraceFile {
    pub fn field(&self) -> Result<Field> {
        field_from(self.p, self.e, &self.modulus)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// A `[9, 2, 7]` code over GF(4) with locality 2.
pub const H1_JSON: &str = include_str!("../fixtures/h1.json");
/// An `[18, 8, 7]` code over GF(7) with locality 2.
pub const H2_JSON: &str = include_str!("../fixtures/h2.json");

pub fn h1() -> MatrixFile {
    serde_json::from_str(H1_JSON).expect("bundled fixture parses")
}

pub fn h2() -> MatrixFile {
    serde_json::from_str(H2_JSON).expect("bundled fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{run_algorithm1, Policy};

    #[test]
    fn fixtures_have_declared_shape() {
        let m1 = h1().to_matrix().unwrap();
        assert_eq!((m1.rows(), m1.cols(), m1.field().order()), (7, 9, 4));
        let m2 = h2().to_matrix().unwrap();
        assert_eq!((m2.rows(), m2.cols(), m2.field().order()), (10, 18, 7));
    }

    #[test]
    fn csv_round_trip() {
        let mf = h2();
        let csv = mf.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 10);
        let back = MatrixFile::from_csv(&Field::prime(7).unwrap(), &csv).unwrap();
        assert_eq!(back, mf.to_matrix().unwrap());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let mut mf = h1();
        mf.rows = 8;
        assert!(matches!(mf.to_matrix(), Err(Error::Format(_))));
    }

    #[test]
    fn json_round_trips() {
        let f = Field::with_order(4).unwrap();
        let c = run_algorithm1(&f, Policy::Seeded(3));
        let sf = SequenceFile::from_sequence(&c.sequence);
        let text = serde_json::to_string(&sf).unwrap();
        let back: SequenceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_sequence().unwrap().pairs(), c.sequence.pairs());

        let spread = Spread::build(&f);
        let text = serde_json::to_string(&SpreadFile::from_spread(&spread)).unwrap();
        let back: SpreadFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_spread().unwrap().planes(), spread.planes());

        let tf = TraceFile { p: 2, e: 2, modulus: f.modulus().to_vec(), trace: c.trace.clone(), run: None };
        let text = serde_json::to_string(&tf).unwrap();
        let back: TraceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.trace, c.trace);
    }
}
