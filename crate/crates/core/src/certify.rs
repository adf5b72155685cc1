//! Nonsingularity certificates obtained by showing the origin lies outside
//! Φ(A) (first test) or Θ(A) (second test).
//!
//! Both tests walk the ordered pairs `(i, j)`, `i != j`, lexicographically.
//! A pair passes through the product branch `|a_ii||a_jj| > r_i r_j`, or
//! failing that through an exclusion branch:
//!
//! * first test: some `s != i` with
//!   `|a_ss|(|a_ii| + r_i^s) < (|a_si| - r_s^i)|a_is|` (smallest such `s` is
//!   reported);
//! * second test: `(|a_ii| + r_i^j)(|a_jj| + r_j^i) < |a_ij||a_ji|`.
//!
//! The matrix is certified when every pair passes. For `n = 1` the matrix is
//! certified iff `a_11 != 0`.

use serde::Serialize;

use crate::linalg::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertMethod {
    /// Origin outside Φ.
    C1,
    /// Origin outside Θ.
    C2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Branch {
    Product,
    Exclusion {
        s: usize,
    },
    /// Second test's symmetric exclusion; carries no extra index.
    ExclusionPair,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    #[serde(flatten)]
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertReport {
    pub certified: bool,
    pub method: CertMethod,
    pub witnesses: Vec<PairWitness>,
    pub failing_pair: Option<(usize, usize)>,
}

fn product_branch(a: &ComplexMatrix, i: usize, j: usize) -> bool {
    a.abs(i, i) * a.abs(j, j) > a.r(i) * a.r(j)
}

fn certify_with(
    a: &ComplexMatrix,
    method: CertMethod,
    exclusion: impl Fn(usize, usize) -> Branch,
) -> CertReport {
    let n = a.n();
    if n == 1 {
        let certified = a.abs(0, 0) != 0.0;
        return CertReport {
            certified,
            method,
            witnesses: Vec::new(),
            failing_pair: None,
        };
    }
    let mut witnesses = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let branch = if product_branch(a, i, j) {
                Branch::Product
            } else {
                exclusion(i, j)
            };
            witnesses.push(PairWitness { i, j, branch });
        }
    }
    let failing_pair = witnesses
        .iter()
        .find(|w| w.branch == Branch::None)
        .map(|w| (w.i, w.j));
    CertReport {
        certified: failing_pair.is_none(),
        method,
        witnesses,
        failing_pair,
    }
}

pub fn cert_corollary1(a: &ComplexMatrix) -> CertReport {
    let n = a.n();
    certify_with(a, CertMethod::C1, |i, _j| {
        (0..n)
            .filter(|&s| s != i)
            .find(|&s| {
                a.abs(s, s) * (a.abs(i, i) + a.r_del(i, s))
                    < (a.abs(s, i) - a.r_del(s, i)) * a.abs(i, s)
            })
            .map_or(Branch::None, |s| Branch::Exclusion { s })
    })
}

pub fn cert_corollary2(a: &ComplexMatrix) -> CertReport {
    certify_with(a, CertMethod::C2, |i, j| {
        if (a.abs(i, i) + a.r_del(i, j)) * (a.abs(j, j) + a.r_del(j, i)) < a.abs(i, j) * a.abs(j, i)
        {
            Branch::ExclusionPair
        } else {
            Branch::None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::ComplexScalar;
    use crate::regions::{phi_contains, theta_contains};

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn identity_certified_by_products() {
        let id = ComplexMatrix::identity(4).unwrap();
        for report in [cert_corollary1(&id), cert_corollary2(&id)] {
            assert!(report.certified);
            assert_eq!(report.witnesses.len(), 12);
            assert!(report.witnesses.iter().all(|w| w.branch == Branch::Product));
        }
    }

    #[test]
    fn flip_matrix_certified_through_exclusion() {
        // 0·0 > 1 fails, but |a_ss|(...) = 0 < 1·1 holds for s = j.
        let f = fixtures::flip2();
        let r1 = cert_corollary1(&f);
        assert!(r1.certified);
        assert_eq!(
            r1.witnesses[0],
            PairWitness {
                i: 0,
                j: 1,
                branch: Branch::Exclusion { s: 1 }
            }
        );
        assert_eq!(
            r1.witnesses[1],
            PairWitness {
                i: 1,
                j: 0,
                branch: Branch::Exclusion { s: 0 }
            }
        );
        assert!(cert_corollary2(&f).certified);
        assert_eq!(crate::spectra::determinant(&f), c(-1., 0.));
    }

    #[test]
    fn zero_diagonal_entry_blocks_certification() {
        let d = ComplexMatrix::diagonal(&[c(0., 0.), c(1., 0.), c(2., 0.)]).unwrap();
        for report in [cert_corollary1(&d), cert_corollary2(&d)] {
            assert!(!report.certified);
            assert_eq!(report.failing_pair, Some((0, 1)));
        }
    }

    fn real(rows: [[f64; 3]; 3]) -> ComplexMatrix {
        ComplexMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| c(x, 0.)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn tests_are_incomparable() {
        // Found by random search with a separate implementation; det = 10.
        let only_c2 = real([[2., 0., 0.], [2., 1., 2.], [0., -2., 1.]]);
        assert!(!cert_corollary1(&only_c2).certified);
        assert!(cert_corollary2(&only_c2).certified);
        // det = -10.
        let only_c1 = real([[0., -2., 3.], [-2., 0., 1.], [-1., 2., 0.]]);
        assert!(cert_corollary1(&only_c1).certified);
        assert!(!cert_corollary2(&only_c1).certified);
    }

    #[test]
    fn order_one() {
        let z = ComplexMatrix::new(1, vec![c(0., 0.)]).unwrap();
        let nz = ComplexMatrix::new(1, vec![c(0., 1e-300)]).unwrap();
        assert!(!cert_corollary1(&z).certified);
        assert!(cert_corollary2(&nz).certified);
    }

    #[test]
    fn agrees_with_origin_membership_on_fixtures() {
        let zero = c(0., 0.);
        for a in [
            fixtures::example31(),
            fixtures::flip2(),
            ComplexMatrix::identity(3).unwrap(),
        ] {
            assert_eq!(cert_corollary1(&a).certified, !phi_contains(&a, zero));
            assert_eq!(cert_corollary2(&a).certified, !theta_contains(&a, zero));
        }
    }

    #[test]
    fn report_serializes() {
        let r = cert_corollary1(&fixtures::flip2());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["method"], "c1");
        assert_eq!(v["witnesses"][0]["branch"], "exclusion");
        assert_eq!(v["witnesses"][0]["s"], 1);
        assert!(v["failing_pair"].is_null());
    }
}
