use num_complex::Complex64;

use crate::error::{Error, Result};

/// A complex scalar; matrix entries and query points alike.
pub type ComplexScalar = Complex64;

/// Modulus used everywhere in the crate, so every module agrees bit-for-bit.
#[inline]
pub fn modulus(z: ComplexScalar) -> f64 {
    z.norm()
}

/// Dense square complex matrix, immutable after construction.
///
/// Construction validates finiteness and caches the entry moduli and the
/// off-diagonal row sums `r_i = Σ_{k≠i} |a_ik|`, accumulated in ascending `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<ComplexScalar>,
    moduli: Vec<f64>,
    row_sums: Vec<f64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(n: usize, entries: Vec<ComplexScalar>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("order must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(pos) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        let moduli: Vec<f64> = entries.iter().map(|&z| modulus(z)).collect();
        let row_sums = (0..n)
            .map(|i| fresh_row_sum(&moduli[i * n..(i + 1) * n], i))
            .collect();
        Ok(Self {
            n,
            entries,
            moduli,
            row_sums,
        })
    }

    pub fn from_rows(rows: Vec<Vec<ComplexScalar>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ComplexScalar) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| {
            if i == j {
                ComplexScalar::new(1.0, 0.0)
            } else {
                ComplexScalar::new(0.0, 0.0)
            }
        })
    }

    pub fn diagonal(diag: &[ComplexScalar]) -> Result<Self> {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                diag[i]
            } else {
                ComplexScalar::new(0.0, 0.0)
            }
        })
    }

    /// Order of the matrix.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ComplexScalar {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn diag(&self, i: usize) -> ComplexScalar {
        self.entries[i * (self.n + 1)]
    }

    /// `|a_ij|`, cached.
    #[inline]
    pub fn abs(&self, i: usize, j: usize) -> f64 {
        self.moduli[i * self.n + j]
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[ComplexScalar] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.moduli.iter().copied().fold(0.0, f64::max)
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..self.n).map(|i| self.diag(i)).sum()
    }

    /// Cached off-diagonal row sum `r_i(A)`.
    pub fn row_sum(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        Ok(self.row_sums[i])
    }

    /// `r_t^k(A) = r_t(A) - |a_tk|`, defined only for `k != t`.
    pub fn deleted_row_sum(&self, t: usize, k: usize) -> Result<f64> {
        self.check_index(t)?;
        self.check_index(k)?;
        if t == k {
            return Err(Error::RepeatedIndex(t));
        }
        Ok(self.r_del(t, k))
    }

    /// Row sum recomputed from scratch, for checking the cache.
    pub fn recompute_row_sum(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        Ok(fresh_row_sum(&self.moduli[i * self.n..(i + 1) * self.n], i))
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    #[inline]
    pub(crate) fn r(&self, i: usize) -> f64 {
        self.row_sums[i]
    }

    #[inline]
    pub(crate) fn r_del(&self, t: usize, k: usize) -> f64 {
        self.row_sums[t] - self.abs(t, k)
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        }
    }

    pub(crate) fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            Err(Error::RepeatedIndex(i))
        } else {
            Ok(())
        }
    }
}

// Ascending k, skipping the diagonal. Kept as the single summation routine.
fn fresh_row_sum(row_moduli: &[f64], i: usize) -> f64 {
    row_moduli
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .fold(0.0, |acc, (_, &m)| acc + m)
}
