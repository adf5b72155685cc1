//! Point-membership predicates for the eigenvalue inclusion sets and the
//! exclusion sets carved out of them.
//!
//! Inclusion sets are closed (`<=`), exclusion sets are open (`<`), and every
//! comparison is an exact floating-point comparison. Tolerance belongs to the
//! caller: [`contains_eigenvalue`] is the one place where an eigenvalue is
//! allowed to sit a hair outside a set boundary.
//!
//! | set | definition |
//! |-----|------------|
//! | Γ_i | `|z - a_ii| <= r_i` |
//! | 𝒦_ij | `|z - a_ii| |z - a_jj| <= r_i r_j` |
//! | Δ_ij | `|z - a_jj| < 2|a_ji| - r_j` |
//! | ℒ_si | `|z - a_ss| (|z - a_ii| + r_i^s) < (|a_si| - r_s^i) |a_is|` |
//! | Λ_ij | `(|z - a_ii| + r_i^j)(|z - a_jj| + r_j^i) < |a_ij| |a_ji|` |
//!
//! Ω = ∪_i Γ_i \ ∪_{j≠i} Δ_ij, Φ = ∪_{(i,j)} 𝒦_ij \ ∪_{s≠i} ℒ_si over ordered
//! pairs, Θ = ∪_{(i,j)} 𝒦_ij \ Λ_ij.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::linalg::{modulus, ComplexMatrix, ComplexScalar};
use crate::spectra::Cluster;

/// Which set a membership query is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionKind {
    /// Γ(A)
    Gersh,
    /// 𝒦(A)
    Brauer,
    /// Ω(A)
    Omega,
    /// Φ(A)
    Phi,
    /// Θ(A)
    Theta,
    /// Δ_ij(A)
    ExclDelta(usize, usize),
    /// ℒ_si(A)
    ExclL(usize, usize),
    /// Λ_ij(A)
    ExclLambda(usize, usize),
    /// Γ_i(A)
    GershDisk(usize),
    /// 𝒦_ij(A)
    BrauerOval(usize, usize),
    /// Φ_ij(A)
    PhiPair(usize, usize),
    /// Θ_ij(A)
    ThetaPair(usize, usize),
}

impl RegionKind {
    /// The five inclusion sets, outermost first.
    pub const INCLUSION_SETS: [RegionKind; 5] = [
        RegionKind::Gersh,
        RegionKind::Brauer,
        RegionKind::Omega,
        RegionKind::Phi,
        RegionKind::Theta,
    ];

    pub fn validate(&self, a: &ComplexMatrix) -> Result<()> {
        use RegionKind::*;
        match *self {
            Gersh | Brauer | Omega | Phi | Theta => Ok(()),
            GershDisk(i) => a.check_index(i),
            ExclDelta(i, j)
            | ExclL(i, j)
            | ExclLambda(i, j)
            | BrauerOval(i, j)
            | PhiPair(i, j)
            | ThetaPair(i, j) => a.check_pair(i, j),
        }
    }

    pub fn name(&self) -> String {
        use RegionKind::*;
        match *self {
            Gersh => "gersh".into(),
            Brauer => "brauer".into(),
            Omega => "omega".into(),
            Phi => "phi".into(),
            Theta => "theta".into(),
            ExclDelta(i, j) => format!("delta({i},{j})"),
            ExclL(s, i) => format!("l({s},{i})"),
            ExclLambda(i, j) => format!("lambda({i},{j})"),
            GershDisk(i) => format!("gersh_disk({i})"),
            BrauerOval(i, j) => format!("brauer_oval({i},{j})"),
            PhiPair(i, j) => format!("phi_pair({i},{j})"),
            ThetaPair(i, j) => format!("theta_pair({i},{j})"),
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for RegionKind {
    type Err = String;

    /// Parses the names of the five inclusion sets.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gersh" | "gershgorin" => Ok(RegionKind::Gersh),
            "brauer" => Ok(RegionKind::Brauer),
            "omega" | "melman" => Ok(RegionKind::Omega),
            "phi" => Ok(RegionKind::Phi),
            "theta" => Ok(RegionKind::Theta),
            other => Err(format!(
                "unknown set {other:?}; expected gersh, brauer, omega, phi or theta"
            )),
        }
    }
}

/// One elementary inequality evaluated during a membership query.
///
/// Cassini ovals and Λ are symmetric in their indices and are reported with
/// the smaller index first, so distinct pieces are distinct sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    Disk(usize),
    Delta(usize, usize),
    Cassini(usize, usize),
    Exclusion(usize, usize),
    Lambda(usize, usize),
}

impl Piece {
    /// Whether the piece is one of the Cassini-type ovals (𝒦, ℒ or Λ).
    pub fn is_oval(&self) -> bool {
        matches!(
            self,
            Piece::Cassini(..) | Piece::Exclusion(..) | Piece::Lambda(..)
        )
    }
}

/// Observer of the pieces a predicate evaluates.
pub trait Probe {
    fn touch(&mut self, piece: Piece);
}

/// Probe that records nothing.
pub struct Silent;

impl Probe for Silent {
    #[inline(always)]
    fn touch(&mut self, _: Piece) {}
}

impl<T: Probe + ?Sized> Probe for &mut T {
    fn touch(&mut self, piece: Piece) {
        (**self).touch(piece);
    }
}

impl Probe for Vec<Piece> {
    fn touch(&mut self, piece: Piece) {
        self.push(piece);
    }
}

impl Probe for HashSet<Piece> {
    fn touch(&mut self, piece: Piece) {
        self.insert(piece);
    }
}

/// Number of Cassini ovals needed to describe a set built from them, or
/// `None` for the disk-based sets.
pub fn oval_count(n: usize, kind: RegionKind) -> Option<usize> {
    let pairs = n * n.saturating_sub(1);
    match kind {
        RegionKind::Brauer => Some(pairs / 2),
        RegionKind::Phi => Some(3 * pairs / 2),
        RegionKind::Theta => Some(pairs),
        _ => None,
    }
}

/// Evaluates one query point against a matrix. `slack` widens every distance
/// `|z - a_kk|` to the interval `[d - slack, d + slack]`; inclusion tests use
/// the low end and exclusion tests the high end, so a positive slack gives a
/// superset of every set. With `slack == 0` the arithmetic is exact.
struct Eval<'a, P> {
    a: &'a ComplexMatrix,
    z: ComplexScalar,
    slack: f64,
    probe: P,
}

impl<P: Probe> Eval<'_, P> {
    #[inline]
    fn near(&self, k: usize) -> f64 {
        (modulus(self.z - self.a.diag(k)) - self.slack).max(0.0)
    }

    #[inline]
    fn far(&self, k: usize) -> f64 {
        modulus(self.z - self.a.diag(k)) + self.slack
    }

    fn in_point(&self) -> bool {
        self.near(0) <= 0.0
    }

    fn in_disk(&mut self, i: usize) -> bool {
        self.probe.touch(Piece::Disk(i));
        self.near(i) <= self.a.r(i)
    }

    fn in_cassini(&mut self, i: usize, j: usize) -> bool {
        self.probe.touch(Piece::Cassini(i.min(j), i.max(j)));
        self.near(i) * self.near(j) <= self.a.r(i) * self.a.r(j)
    }

    fn in_delta(&mut self, i: usize, j: usize) -> bool {
        self.probe.touch(Piece::Delta(i, j));
        self.far(j) < 2.0 * self.a.abs(j, i) - self.a.r(j)
    }

    fn in_exclusion(&mut self, s: usize, i: usize) -> bool {
        self.probe.touch(Piece::Exclusion(s, i));
        let a = self.a;
        self.far(s) * (self.far(i) + a.r_del(i, s)) < (a.abs(s, i) - a.r_del(s, i)) * a.abs(i, s)
    }

    fn in_lambda(&mut self, i: usize, j: usize) -> bool {
        self.probe.touch(Piece::Lambda(i.min(j), i.max(j)));
        let a = self.a;
        (self.far(i) + a.r_del(i, j)) * (self.far(j) + a.r_del(j, i)) < a.abs(i, j) * a.abs(j, i)
    }

    /// z ∈ ℒ_i
    fn in_exclusion_union(&mut self, i: usize) -> bool {
        (0..self.a.n()).any(|s| s != i && self.in_exclusion(s, i))
    }

    fn in_omega_part(&mut self, i: usize) -> bool {
        self.in_disk(i) && (0..self.a.n()).all(|j| j == i || !self.in_delta(i, j))
    }

    fn in_phi_pair(&mut self, i: usize, j: usize) -> bool {
        self.in_cassini(i, j) && !self.in_exclusion_union(i)
    }

    fn in_theta_pair(&mut self, i: usize, j: usize) -> bool {
        self.in_cassini(i, j) && !self.in_lambda(i, j)
    }

    fn gersh(&mut self) -> bool {
        (0..self.a.n()).any(|i| self.in_disk(i))
    }

    fn brauer(&mut self) -> bool {
        let n = self.a.n();
        if n == 1 {
            return self.in_point();
        }
        (0..n).any(|i| (i + 1..n).any(|j| self.in_cassini(i, j)))
    }

    fn omega(&mut self) -> bool {
        (0..self.a.n()).any(|i| self.in_omega_part(i))
    }

    fn phi_witness(&mut self) -> Option<(usize, usize)> {
        let n = self.a.n();
        for i in 0..n {
            // ℒ_i does not depend on j: evaluate once per first index.
            let mut excluded = None;
            for j in (0..n).filter(|&j| j != i) {
                if self.in_cassini(i, j) {
                    let ex = match excluded {
                        Some(ex) => ex,
                        None => *excluded.insert(self.in_exclusion_union(i)),
                    };
                    if ex {
                        break;
                    }
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn theta_witness(&mut self) -> Option<(usize, usize)> {
        let n = self.a.n();
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                if self.in_theta_pair(i, j) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn kind(&mut self, kind: RegionKind) -> bool {
        use RegionKind::*;
        match kind {
            Gersh => self.gersh(),
            Brauer => self.brauer(),
            Omega => self.omega(),
            Phi if self.a.n() == 1 => self.in_point(),
            Theta if self.a.n() == 1 => self.in_point(),
            Phi => self.phi_witness().is_some(),
            Theta => self.theta_witness().is_some(),
            ExclDelta(i, j) => self.in_delta(i, j),
            ExclL(s, i) => self.in_exclusion(s, i),
            ExclLambda(i, j) => self.in_lambda(i, j),
            GershDisk(i) => self.in_disk(i),
            BrauerOval(i, j) => self.in_cassini(i, j),
            PhiPair(i, j) => self.in_phi_pair(i, j),
            ThetaPair(i, j) => self.in_theta_pair(i, j),
        }
    }
}

/// Membership with indices already validated. Used by the rasterizer.
pub(crate) fn eval_validated(
    a: &ComplexMatrix,
    kind: RegionKind,
    z: ComplexScalar,
    slack: f64,
) -> bool {
    Eval {
        a,
        z,
        slack,
        probe: Silent,
    }
    .kind(kind)
}

fn exact(a: &ComplexMatrix, z: ComplexScalar) -> Eval<'_, Silent> {
    Eval {
        a,
        z,
        slack: 0.0,
        probe: Silent,
    }
}

/// z ∈ Γ_i(A)
pub fn gersh_disk_contains(a: &ComplexMatrix, i: usize, z: ComplexScalar) -> Result<bool> {
    a.check_index(i)?;
    Ok(exact(a, z).in_disk(i))
}

/// z ∈ Γ(A)
pub fn gersh_contains(a: &ComplexMatrix, z: ComplexScalar) -> bool {
    exact(a, z).gersh()
}

/// z ∈ 𝒦_ij(A)
pub fn brauer_oval_contains(
    a: &ComplexMatrix,
    i: usize,
    j: usize,
    z: ComplexScalar,
) -> Result<bool> {
    a.check_pair(i, j)?;
    Ok(exact(a, z).in_cassini(i, j))
}

/// z ∈ 𝒦(A). For `n == 1` the set is the single point `a_11`.
pub fn brauer_contains(a: &ComplexMatrix, z: ComplexScalar) -> bool {
    exact(a, z).brauer()
}

/// z ∈ Δ_ij(A) (open disk about `a_jj`, empty when `2|a_ji| <= r_j`).
pub fn melman_delta_contains(
    a: &ComplexMatrix,
    i: usize,
    j: usize,
    z: ComplexScalar,
) -> Result<bool> {
    a.check_pair(i, j)?;
    Ok(exact(a, z).in_delta(i, j))
}

/// z ∈ Ω(A)
pub fn omega_contains(a: &ComplexMatrix, z: ComplexScalar) -> bool {
    exact(a, z).omega()
}

/// z ∈ ℒ_si(A)
pub fn lsi_contains(a: &ComplexMatrix, s: usize, i: usize, z: ComplexScalar) -> Result<bool> {
    a.check_pair(s, i)?;
    Ok(exact(a, z).in_exclusion(s, i))
}

/// z ∈ Φ_ij(A) = 𝒦_ij(A) \ ℒ_i(A)
pub fn phi_pair_contains(a: &ComplexMatrix, i: usize, j: usize, z: ComplexScalar) -> Result<bool> {
    a.check_pair(i, j)?;
    Ok(exact(a, z).in_phi_pair(i, j))
}

/// z ∈ Φ(A)
pub fn phi_contains(a: &ComplexMatrix, z: ComplexScalar) -> bool {
    exact(a, z).kind(RegionKind::Phi)
}

/// First ordered pair `(i, j)` in lexicographic order with z ∈ Φ_ij(A).
/// Always `None` for `n == 1`, where no pair exists.
pub fn phi_witness(a: &ComplexMatrix, z: ComplexScalar) -> Option<(usize, usize)> {
    exact(a, z).phi_witness()
}

/// z ∈ Λ_ij(A)
pub fn lambda_contains(a: &ComplexMatrix, i: usize, j: usize, z: ComplexScalar) -> Result<bool> {
    a.check_pair(i, j)?;
    Ok(exact(a, z).in_lambda(i, j))
}

/// z ∈ Θ_ij(A) = 𝒦_ij(A) \ Λ_ij(A)
pub fn theta_pair_contains(
    a: &ComplexMatrix,
    i: usize,
    j: usize,
    z: ComplexScalar,
) -> Result<bool> {
    a.check_pair(i, j)?;
    Ok(exact(a, z).in_theta_pair(i, j))
}

/// z ∈ Θ(A)
pub fn theta_contains(a: &ComplexMatrix, z: ComplexScalar) -> bool {
    exact(a, z).kind(RegionKind::Theta)
}

/// First ordered pair `(i, j)` with z ∈ Θ_ij(A).
pub fn theta_witness(a: &ComplexMatrix, z: ComplexScalar) -> Option<(usize, usize)> {
    exact(a, z).theta_witness()
}

/// Dispatches to the predicate selected by `kind`.
pub fn region_contains(a: &ComplexMatrix, kind: RegionKind, z: ComplexScalar) -> Result<bool> {
    region_contains_traced(a, kind, z, &mut Silent)
}

/// Like [`region_contains`], reporting every elementary inequality evaluated.
pub fn region_contains_traced<P: Probe>(
    a: &ComplexMatrix,
    kind: RegionKind,
    z: ComplexScalar,
    probe: &mut P,
) -> Result<bool> {
    kind.validate(a)?;
    Ok(Eval {
        a,
        z,
        slack: 0.0,
        probe,
    }
    .kind(kind))
}

/// Membership after widening every center distance by `slack` (see module docs).
/// Monotone in `slack` and equal to [`region_contains`] at zero.
pub fn region_contains_within(
    a: &ComplexMatrix,
    kind: RegionKind,
    z: ComplexScalar,
    slack: f64,
) -> Result<bool> {
    kind.validate(a)?;
    Ok(eval_validated(a, kind, z, slack.max(0.0)))
}

/// Dilation radius used for eigenvalue membership: `1e-8 (1 + |λ|)`.
pub fn eigen_dilation(lambda: ComplexScalar) -> f64 {
    1e-8 * (1.0 + modulus(lambda))
}

/// Membership test for a numerically computed eigenvalue.
///
/// Accepts if the exact predicate holds at λ or at one of the eight points
/// `λ + ρ e^{iπk/4}`, and otherwise falls back to the widened predicate with
/// slack ρ. The fallback matters for sets that collapse to curves (for `n = 2`,
/// Φ and Θ are the boundary of a Cassini oval), where a rounded eigenvalue and
/// its neighbours almost surely miss the curve itself.
pub fn contains_eigenvalue(
    a: &ComplexMatrix,
    kind: RegionKind,
    lambda: ComplexScalar,
) -> Result<bool> {
    contains_dilated(a, kind, lambda, eigen_dilation(lambda))
}

fn contains_dilated(
    a: &ComplexMatrix,
    kind: RegionKind,
    lambda: ComplexScalar,
    rho: f64,
) -> Result<bool> {
    kind.validate(a)?;
    if eval_validated(a, kind, lambda, 0.0) {
        return Ok(true);
    }
    let hit = (0..8).any(|k| {
        let step = ComplexScalar::from_polar(rho, std::f64::consts::FRAC_PI_4 * k as f64);
        eval_validated(a, kind, lambda + step, 0.0)
    });
    Ok(hit || eval_validated(a, kind, lambda, rho))
}

/// [`contains_eigenvalue`] for a root that may belong to a cluster of nearly
/// equal roots. Members of an m-fold cluster carry errors near `eps^(1/m)`,
/// far beyond ρ, so a clustered root also passes if the test succeeds at the
/// cluster centroid with ρ widened to the cluster radius.
pub fn contains_clustered_eigenvalue(
    a: &ComplexMatrix,
    kind: RegionKind,
    lambda: ComplexScalar,
    cluster: &Cluster,
) -> Result<bool> {
    if contains_eigenvalue(a, kind, lambda)? {
        return Ok(true);
    }
    if cluster.size < 2 {
        return Ok(false);
    }
    let rho = eigen_dilation(cluster.centroid).max(cluster.radius);
    contains_dilated(a, kind, cluster.centroid, rho)
}
