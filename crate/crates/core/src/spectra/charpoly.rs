use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexScalar};

/// Largest order the polynomial oracle accepts.
pub const ORACLE_LIMIT: usize = 16;

/// Monic polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    coefficients: Vec<ComplexScalar>,
}

impl CharPoly {
    /// Builds a polynomial from ascending coefficients, normalising by the
    /// leading one. Returns `None` for an empty slice or a zero leading term.
    pub fn monic(coefficients: &[ComplexScalar]) -> Option<Self> {
        let lead = *coefficients.last()?;
        if lead == ComplexScalar::new(0.0, 0.0) {
            return None;
        }
        let mut c: Vec<_> = coefficients.iter().map(|&x| x / lead).collect();
        *c.last_mut().unwrap() = ComplexScalar::new(1.0, 0.0);
        Some(Self { coefficients: c })
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[ComplexScalar]) -> Self {
        let mut c = vec![ComplexScalar::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![ComplexScalar::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * r;
            }
            c = next;
        }
        Self { coefficients: c }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[ComplexScalar] {
        &self.coefficients
    }

    pub fn constant_term(&self) -> ComplexScalar {
        self.coefficients[0]
    }

    /// Horner evaluation of `(p(z), p'(z))`.
    pub fn eval_with_derivative(&self, z: ComplexScalar) -> (ComplexScalar, ComplexScalar) {
        let mut p = ComplexScalar::new(0.0, 0.0);
        let mut dp = ComplexScalar::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn eval(&self, z: ComplexScalar) -> ComplexScalar {
        self.eval_with_derivative(z).0
    }
}

/// `det(λI - A)` by the Faddeev–LeVerrier recursion
/// `M_k = A M_{k-1} + c_{n-k+1} I`, `c_{n-k} = -tr(A M_k) / k`.
pub fn char_poly(a: &ComplexMatrix) -> Result<CharPoly> {
    let n = a.n();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleLimit {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    let zero = ComplexScalar::new(0.0, 0.0);
    let mut c = vec![zero; n + 1];
    c[n] = ComplexScalar::new(1.0, 0.0);
    let mut m = vec![zero; n * n];
    let mut am = vec![zero; n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I, where A M_{k-1} is left in `am`.
        for (idx, slot) in m.iter_mut().enumerate() {
            *slot = am[idx];
        }
        for i in 0..n {
            m[i * n + i] += c[n - k + 1];
        }
        for i in 0..n {
            for j in 0..n {
                let mut s = zero;
                for l in 0..n {
                    s += a.get(i, l) * m[l * n + j];
                }
                am[i * n + j] = s;
            }
        }
        let trace: ComplexScalar = (0..n).map(|i| am[i * n + i]).sum();
        c[n - k] = -trace / k as f64;
    }
    Ok(CharPoly { coefficients: c })
}
