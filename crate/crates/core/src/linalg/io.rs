//! Matrix file format: `{"n": <int>, "rows": [[[re, im], ...], ...]}`.
//!
//! Floats are written in shortest round-trip form, so `parse(serialize(A))`
//! reproduces `A` bit-exactly.

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, ComplexScalar};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    n: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

pub fn parse_matrix(text: &[u8]) -> Result<ComplexMatrix> {
    let file: MatrixFile =
        serde_json::from_slice(text).map_err(|e| Error::Syntax(e.to_string()))?;
    if file.rows.len() != file.n {
        return Err(Error::Dimension(format!(
            "\"n\" is {} but {} rows were given",
            file.n,
            file.rows.len()
        )));
    }
    let rows = file
        .rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|[re, im]| ComplexScalar::new(re, im))
                .collect()
        })
        .collect();
    ComplexMatrix::from_rows(rows)
}

pub fn serialize_matrix(a: &ComplexMatrix) -> String {
    let n = a.n();
    let file = MatrixFile {
        n,
        rows: (0..n)
            .map(|i| a.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    serde_json::to_string(&file).expect("finite floats always serialize")
}
