//! Complex scalars and matrices, row-sum quantities, matrix I/O, and the
//! seeded generator used by the ensembles.

mod io;
mod matrix;
mod prng;

pub use io::{parse_matrix, serialize_matrix};
pub use matrix::{modulus, ComplexMatrix, ComplexScalar};
pub use prng::{prng_next, prng_uniform, substream_seed, PrngState};
