use std::cmp::Ordering;

use serde::Serialize;

use super::charpoly::CharPoly;
use crate::error::{Error, Result};
use crate::linalg::{modulus, ComplexScalar};

pub const MAX_ITERATIONS: usize = 1000;
/// Residual bound for isolated roots.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Residual bound for roots within [`CLUSTER_DISTANCE`] of another root.
pub const CLUSTERED_RESIDUAL_TOL: f64 = 1e-6;
pub const CLUSTER_DISTANCE: f64 = 1e-4;

/// Eigenvalues with per-root residuals `|p(λ)| / max(1, |p'(λ)|)`, sorted by
/// `(re, im)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<ComplexScalar>,
    pub residuals: Vec<f64>,
    /// Every residual is under its bound (isolated or clustered).
    pub converged: bool,
    pub iterations: usize,
}

impl SpectrumResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn lexicographic(a: &ComplexScalar, b: &ComplexScalar) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Sorts complex numbers by `(re, im)`.
pub fn sort_lexicographic(values: &mut [ComplexScalar]) {
    values.sort_by(lexicographic);
}

/// The group of roots linked to one root by chains of gaps under
/// [`CLUSTER_DISTANCE`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cluster {
    pub size: usize,
    pub centroid: ComplexScalar,
    /// Largest distance from the centroid to a member.
    pub radius: f64,
}

/// Cluster of every root, in input order. An isolated root is its own
/// cluster of size 1 and radius 0. Members of an m-fold cluster are only
/// good to about `eps^(1/m)`; the exact root lies near the centroid, within
/// about the radius.
pub fn clusters(values: &[ComplexScalar]) -> Vec<Cluster> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    // Single linkage by repeated relabelling; n is at most the oracle limit.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if label[j] < label[i] && modulus(values[i] - values[j]) < CLUSTER_DISTANCE {
                    label[i] = label[j];
                    changed = true;
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            let members: Vec<ComplexScalar> = (0..n)
                .filter(|&j| label[j] == label[i])
                .map(|j| values[j])
                .collect();
            let centroid = members.iter().sum::<ComplexScalar>() / members.len() as f64;
            Cluster {
                size: members.len(),
                centroid,
                radius: members
                    .iter()
                    .map(|&m| modulus(m - centroid))
                    .fold(0.0, f64::max),
            }
        })
        .collect()
}

/// All roots of a monic polynomial by Durand–Kerner iteration from the
/// starting points `(0.4 + 0.9i)^k`, then one Newton step per root.
pub fn roots(p: &CharPoly) -> Result<SpectrumResult> {
    let degree = p.degree();
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let seed = ComplexScalar::new(0.4, 0.9);
    let mut z: Vec<ComplexScalar> = (0..degree).map(|k| seed.powu(k as u32)).collect();

    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut max_step = 0.0f64;
        for k in 0..degree {
            let mut denom = ComplexScalar::new(1.0, 0.0);
            for j in (0..degree).filter(|&j| j != k) {
                denom *= z[k] - z[j];
            }
            if denom == ComplexScalar::new(0.0, 0.0) {
                // Coincident iterates; nudge apart deterministically.
                z[k] += ComplexScalar::new(1e-8, 1e-8);
                max_step = f64::INFINITY;
                continue;
            }
            let step = p.eval(z[k]) / denom;
            z[k] -= step;
            max_step = max_step.max(modulus(step));
        }
        let scale = z.iter().map(|&r| modulus(r)).fold(0.0, f64::max);
        if !max_step.is_finite() && z.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
            break;
        }
        if max_step < 1e-13 * (1.0 + scale) {
            break;
        }
    }

    for r in z.iter_mut() {
        let (value, slope) = p.eval_with_derivative(*r);
        if slope != ComplexScalar::new(0.0, 0.0) {
            let polished = *r - value / slope;
            if modulus(p.eval(polished)) <= modulus(value) {
                *r = polished;
            }
        }
    }

    sort_lexicographic(&mut z);
    let residuals: Vec<f64> = z
        .iter()
        .map(|&r| {
            let (value, slope) = p.eval_with_derivative(r);
            modulus(value) / modulus(slope).max(1.0)
        })
        .collect();
    let converged = clusters(&z).iter().zip(&residuals).all(|(cluster, &res)| {
        let bound = if cluster.size > 1 {
            CLUSTERED_RESIDUAL_TOL
        } else {
            RESIDUAL_TOL
        };
        res < bound
    });
    Ok(SpectrumResult {
        eigenvalues: z,
        residuals,
        converged,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn clusters_link_chains() {
        let v = [c(0., 0.), c(5e-5, 0.), c(1e-4, 0.), c(1., 0.)];
        let cl = clusters(&v);
        assert_eq!(
            cl.iter().map(|k| k.size).collect::<Vec<_>>(),
            vec![3, 3, 3, 1]
        );
        assert!((cl[0].centroid - c(5e-5, 0.)).norm() < 1e-18);
        assert!((cl[0].radius - 5e-5).abs() < 1e-18);
        assert_eq!(cl[3].centroid, c(1., 0.));
        assert_eq!(cl[3].radius, 0.0);
    }

    #[test]
    fn triple_root_lies_within_cluster_radius() {
        let p = CharPoly::from_roots(&[c(1., 0.); 3]);
        let s = roots(&p).unwrap();
        assert!(s.converged);
        let cl = clusters(&s.eigenvalues);
        assert_eq!(cl[0].size, 3);
        // Members miss the root by far more than the dilation 1e-8 (1 + |λ|).
        assert!(s.eigenvalues.iter().any(|&e| (e - c(1., 0.)).norm() > 2e-8));
        assert!((cl[0].centroid - c(1., 0.)).norm() <= cl[0].radius);
        assert!(cl[0].radius < 1e-6);
    }

    #[test]
    fn simple_quadratics() {
        let p = CharPoly::monic(&[c(-1., 0.), c(0., 0.), c(1., 0.)]).unwrap();
        let s = roots(&p).unwrap();
        assert!(s.converged);
        assert!((s.eigenvalues[0] - c(-1., 0.)).norm() < 1e-14);
        assert!((s.eigenvalues[1] - c(1., 0.)).norm() < 1e-14);
        assert!(s.residuals.iter().all(|&r| r < 1e-14));

        let double = CharPoly::monic(&[c(1., 0.), c(-2., 0.), c(1., 0.)]).unwrap();
        let s = roots(&double).unwrap();
        assert!(s.converged);
        for e in &s.eigenvalues {
            assert!((e - c(1., 0.)).norm() < 1e-6, "{e}");
        }
        assert!(s.residuals.iter().all(|&r| r < 1e-6));
    }

    #[test]
    fn constant_polynomial_rejected() {
        let p = CharPoly::monic(&[c(1., 0.)]).unwrap();
        assert!(matches!(roots(&p), Err(Error::ConstantPolynomial)));
    }

    #[test]
    fn linear() {
        let p = CharPoly::monic(&[c(-3., 2.), c(1., 0.)]).unwrap();
        let s = roots(&p).unwrap();
        assert_eq!(s.eigenvalues.len(), 1);
        assert!((s.eigenvalues[0] - c(3., -2.)).norm() < 1e-15);
    }

    #[test]
    fn recovers_prescribed_roots() {
        let want = [
            c(30., -0.5),
            c(-6.7, 0.5),
            c(7., -1.),
            c(13., 1.),
            c(0., 0.),
            c(0.25, 3.),
        ];
        let s = roots(&CharPoly::from_roots(&want)).unwrap();
        assert!(s.converged);
        let mut sorted = want.to_vec();
        sort_lexicographic(&mut sorted);
        for (got, w) in s.eigenvalues.iter().zip(&sorted) {
            assert!((got - w).norm() < 1e-9 * (1.0 + w.norm()), "{got} vs {w}");
        }
    }

    #[test]
    fn sorted_output() {
        let s = roots(&CharPoly::from_roots(&[c(1., 1.), c(1., -1.), c(-2., 0.)])).unwrap();
        assert!(s
            .eigenvalues
            .windows(2)
            .all(|w| lexicographic(&w[0], &w[1]) != Ordering::Greater));
    }
}
