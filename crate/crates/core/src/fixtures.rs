//! Matrices bundled with the crate (also shipped as JSON under `fixtures/`).

use crate::linalg::{parse_matrix, ComplexMatrix};

pub const EXAMPLE31_JSON: &str = include_str!("../fixtures/example31.json");
pub const FLIP2_JSON: &str = include_str!("../fixtures/flip2.json");
pub const IDENTITY_JSON: &str = include_str!("../fixtures/identity.json");
pub const DIAGONAL_JSON: &str = include_str!("../fixtures/diagonal.json");
pub const SINGULAR_DIAG_JSON: &str = include_str!("../fixtures/singular_diag.json");

/// The 4×4 complex test matrix
///
/// ```text
/// [ 14        0.01i   0       18 - 2i ]
/// [ 0         9       4 + i   0       ]
/// [ 0.01 + i  2 + i   11      0       ]
/// [ 19 + i    0       0.1 + i 10      ]
/// ```
pub fn example31() -> ComplexMatrix {
    parse_matrix(EXAMPLE31_JSON.as_bytes()).expect("bundled fixture parses")
}

/// `[[0, 1], [1, 0]]`
pub fn flip2() -> ComplexMatrix {
    parse_matrix(FLIP2_JSON.as_bytes()).expect("bundled fixture parses")
}
