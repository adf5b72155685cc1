use super::lu::Lu;
use super::spectrum;
use crate::error::{Error, Result};
use crate::linalg::{modulus, ComplexMatrix, ComplexScalar, PrngState};

pub const MAX_DRAWS: usize = 100;
pub const MIN_PIVOT: f64 = 1e-3;
pub const SPECTRUM_TOL: f64 = 1e-6;

/// Random matrix `P diag(eigs) P^{-1}` with `P = I + 0.5 R`, `R` drawn
/// entrywise (real and imaginary parts) from the uniform stream.
///
/// A draw is rejected when some LU pivot of `P` is at most `1e-3` in modulus
/// or when the oracle spectrum of the product misses a requested eigenvalue
/// by more than `1e-6`.
pub fn known_spectrum_matrix(
    eigs: &[ComplexScalar],
    mut rng: PrngState,
) -> Result<(ComplexMatrix, PrngState)> {
    let k = eigs.len();
    if k == 0 {
        return Err(Error::Dimension("empty spectrum".into()));
    }
    if k > super::ORACLE_LIMIT {
        return Err(Error::OracleLimit {
            n: k,
            limit: super::ORACLE_LIMIT,
        });
    }
    if k == 1 {
        return Ok((ComplexMatrix::new(1, vec![eigs[0]])?, rng));
    }
    for _ in 0..MAX_DRAWS {
        let mut p = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let re = rng.uniform();
                let im = rng.uniform();
                let id = if i == j { 1.0 } else { 0.0 };
                p.push(ComplexScalar::new(id + 0.5 * re, 0.5 * im));
            }
        }
        let lu = Lu::from_entries(k, p.clone());
        if lu.min_pivot() <= MIN_PIVOT {
            continue;
        }
        let inv = lu.inverse();
        let a = ComplexMatrix::from_fn(k, |i, j| {
            (0..k)
                .map(|l| p[i * k + l] * eigs[l] * inv[l * k + j])
                .sum()
        })?;
        if matches_spectrum(&a, eigs) {
            return Ok((a, rng));
        }
    }
    Err(Error::IllConditioned {
        attempts: MAX_DRAWS,
    })
}

fn matches_spectrum(a: &ComplexMatrix, eigs: &[ComplexScalar]) -> bool {
    match spectrum(a) {
        Ok(s) if s.converged => match_within(&s.eigenvalues, eigs, SPECTRUM_TOL),
        _ => false,
    }
}

/// Pairs every wanted value with a distinct computed one within `tol`, taking
/// the nearest unused value in turn. Greedy pairing is used instead of sorted
/// order so values with equal real parts cannot swap places.
pub fn match_within(computed: &[ComplexScalar], wanted: &[ComplexScalar], tol: f64) -> bool {
    if computed.len() != wanted.len() {
        return false;
    }
    let mut used = vec![false; computed.len()];
    wanted.iter().all(|&w| {
        let best = computed
            .iter()
            .enumerate()
            .filter(|(idx, _)| !used[*idx])
            .map(|(idx, &c)| (idx, modulus(c - w)))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((idx, d)) if d <= tol => {
                used[idx] = true;
                true
            }
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn scalar_case() {
        let (a, _) = known_spectrum_matrix(&[c(5., 0.)], PrngState::new(3)).unwrap();
        assert_eq!(a.n(), 1);
        assert_eq!(a.get(0, 0), c(5., 0.));
    }

    #[test]
    fn reproduces_requested_spectra() {
        for (eigs, seed) in [
            (vec![c(1., 0.), c(-1., 0.)], 7),
            (vec![c(2., 1.), c(2., -1.), c(3., 0.)], 11),
        ] {
            let (a, _) = known_spectrum_matrix(&eigs, PrngState::new(seed)).unwrap();
            let s = spectrum(&a).unwrap();
            assert!(s.converged);
            assert!(match_within(&s.eigenvalues, &eigs, 1e-6));
            // Not diagonal: the similarity actually mixed rows.
            assert!(a.row_sums().iter().any(|&r| r > 1e-3));
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let eigs = [c(0.5, 0.), c(0., 0.5), c(-1., -1.)];
        let (a, s1) = known_spectrum_matrix(&eigs, PrngState::new(42)).unwrap();
        let (b, s2) = known_spectrum_matrix(&eigs, PrngState::new(42)).unwrap();
        assert_eq!(a, b);
        assert_eq!(s1, s2);
    }

    #[test]
    fn empty_spectrum_rejected() {
        assert!(known_spectrum_matrix(&[], PrngState::new(0)).is_err());
    }

    #[test]
    fn greedy_matching() {
        let got = [c(2., -1.), c(2. + 1e-12, 1.), c(3., 0.)];
        assert!(match_within(
            &got,
            &[c(2., 1.), c(2., -1.), c(3., 0.)],
            1e-6
        ));
        assert!(!match_within(
            &got,
            &[c(2., 1.), c(2., 1.), c(3., 0.)],
            1e-6
        ));
    }
}
