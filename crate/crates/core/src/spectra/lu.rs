use crate::linalg::{modulus, ComplexMatrix, ComplexScalar};

/// LU factorisation with partial pivoting, `P A = L U`, stored packed.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    packed: Vec<ComplexScalar>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Self {
        Self::from_entries(a.n(), a.entries().to_vec())
    }

    pub fn from_entries(n: usize, mut m: Vec<ComplexScalar>) -> Self {
        assert_eq!(m.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for col in 0..n {
            let (pivot_row, pivot_abs) =
                (col..n)
                    .map(|r| (r, modulus(m[r * n + col])))
                    .fold(
                        (col, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot_abs == 0.0 {
                // Column already zero below the diagonal; the determinant is 0.
                continue;
            }
            if pivot_row != col {
                for k in 0..n {
                    m.swap(col * n + k, pivot_row * n + k);
                }
                perm.swap(col, pivot_row);
                swaps += 1;
            }
            let pivot = m[col * n + col];
            for r in col + 1..n {
                let factor = m[r * n + col] / pivot;
                m[r * n + col] = factor;
                for k in col + 1..n {
                    let u = m[col * n + k];
                    m[r * n + k] -= factor * u;
                }
            }
        }
        Self {
            n,
            packed: m,
            perm,
            swaps,
        }
    }

    pub fn determinant(&self) -> ComplexScalar {
        let product: ComplexScalar = (0..self.n).map(|i| self.packed[i * self.n + i]).product();
        if self.swaps % 2 == 1 {
            -product
        } else {
            product
        }
    }

    /// Smallest pivot modulus.
    pub fn min_pivot(&self) -> f64 {
        (0..self.n)
            .map(|i| modulus(self.packed[i * self.n + i]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves `A x = b`. Only meaningful when every pivot is nonzero.
    pub fn solve(&self, b: &[ComplexScalar]) -> Vec<ComplexScalar> {
        let n = self.n;
        let mut x: Vec<ComplexScalar> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.packed[i * n + k];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.packed[i * n + k];
                let xk = x[k];
                x[i] -= u * xk;
            }
            x[i] /= self.packed[i * n + i];
        }
        x
    }

    /// Row-major inverse, column by column.
    pub fn inverse(&self) -> Vec<ComplexScalar> {
        let n = self.n;
        let mut inv = vec![ComplexScalar::new(0.0, 0.0); n * n];
        let mut e = vec![ComplexScalar::new(0.0, 0.0); n];
        for col in 0..n {
            e.iter_mut().for_each(|v| *v = ComplexScalar::new(0.0, 0.0));
            e[col] = ComplexScalar::new(1.0, 0.0);
            for (row, v) in self.solve(&e).into_iter().enumerate() {
                inv[row * n + col] = v;
            }
        }
        inv
    }
}

/// Determinant via LU with partial pivoting. Exactly zero only when a pivot
/// column is exactly zero.
pub fn determinant(a: &ComplexMatrix) -> ComplexScalar {
    Lu::new(a).determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn identity_and_flip() {
        for n in [1, 2, 5, 64] {
            assert_eq!(determinant(&ComplexMatrix::identity(n).unwrap()), c(1., 0.));
        }
        let flip =
            ComplexMatrix::from_rows(vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]])
                .unwrap();
        assert_eq!(determinant(&flip), c(-1., 0.));
    }

    #[test]
    fn zero_column_gives_exact_zero() {
        let a = ComplexMatrix::diagonal(&[c(0., 0.), c(1., 0.), c(2., 0.)]).unwrap();
        assert_eq!(determinant(&a), c(0., 0.));
    }

    // Cofactor expansion as an independent reference.
    fn cofactor_det(n: usize, m: &[ComplexScalar]) -> ComplexScalar {
        if n == 1 {
            return m[0];
        }
        let mut total = c(0., 0.);
        for col in 0..n {
            let minor: Vec<_> = (1..n)
                .flat_map(|r| (0..n).filter(move |&k| k != col).map(move |k| (r, k)))
                .map(|(r, k)| m[r * n + k])
                .collect();
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            total += m[col] * cofactor_det(n - 1, &minor) * sign;
        }
        total
    }

    #[test]
    fn matches_cofactor_expansion_and_solves() {
        let mut rng = crate::linalg::PrngState::new(5);
        for n in 1..=6 {
            let a = ComplexMatrix::from_fn(n, |_, _| c(rng.uniform(), rng.uniform())).unwrap();
            let lu = Lu::new(&a);
            let want = cofactor_det(n, a.entries());
            assert!((lu.determinant() - want).norm() <= 1e-12 * (1.0 + want.norm()));
            let inv = lu.inverse();
            for i in 0..n {
                for j in 0..n {
                    let s: ComplexScalar = (0..n).map(|k| a.get(i, k) * inv[k * n + j]).sum();
                    let id = if i == j { c(1., 0.) } else { c(0., 0.) };
                    assert!((s - id).norm() < 1e-10);
                }
            }
        }
    }
}
