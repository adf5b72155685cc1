//! Ground-truth spectra for small matrices.
//!
//! Eigenvalues come from the characteristic polynomial (Faddeev–LeVerrier)
//! and simultaneous root iteration (Durand–Kerner). Nothing here touches the
//! region predicates, so the oracle stays independent of what it checks.

mod charpoly;
mod known;
mod lu;
mod roots;

pub use charpoly::{char_poly, CharPoly, ORACLE_LIMIT};
pub use known::{known_spectrum_matrix, match_within};
pub use lu::{determinant, Lu};
pub use roots::{
    clusters, roots, sort_lexicographic, Cluster, SpectrumResult, CLUSTERED_RESIDUAL_TOL,
    CLUSTER_DISTANCE, MAX_ITERATIONS, RESIDUAL_TOL,
};

use crate::error::Result;
use crate::linalg::ComplexMatrix;

/// `roots(char_poly(a))`.
pub fn spectrum(a: &ComplexMatrix) -> Result<SpectrumResult> {
    roots(&char_poly(a)?)
}
