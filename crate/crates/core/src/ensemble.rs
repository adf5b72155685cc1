//! Seeded random matrix ensembles.
//!
//! Trial `t` of a run with seed `S` draws from its own splitmix64 substream
//! seeded by `splitmix64(S ^ t)`, so trials can run in any order.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{modulus, substream_seed, ComplexMatrix, ComplexScalar, PrngState};
use crate::spectra::known_spectrum_matrix;

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// Real and imaginary parts of every entry uniform in `[-1, 1)`.
    UniformGinibre,
    /// `P diag(λ) P^{-1}` with each λ uniform in the square `[-1, 1)^2`.
    KnownSpectrum,
    /// Uniform entries, then each diagonal modulus grown by `r_i + 1` along
    /// its phase (along the positive real axis if the entry is zero).
    DiagDominant,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 3] = [
        EnsembleKind::UniformGinibre,
        EnsembleKind::KnownSpectrum,
        EnsembleKind::DiagDominant,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EnsembleKind::UniformGinibre => "uniform-ginibre",
            EnsembleKind::KnownSpectrum => "known-spectrum",
            EnsembleKind::DiagDominant => "diag-dominant",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnsembleKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!("unknown ensemble {s:?}; expected uniform-ginibre, known-spectrum or diag-dominant")
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnsembleConfig {
    pub kind: EnsembleKind,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn new(kind: EnsembleKind, n: usize, trials: usize, seed: u64) -> Result<Self> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&n) {
            return Err(Error::Dimension(format!(
                "ensemble order must be in {MIN_ORDER}..={MAX_ORDER}, got {n}"
            )));
        }
        if trials == 0 {
            return Err(Error::Dimension("at least one trial is required".into()));
        }
        Ok(Self {
            kind,
            n,
            trials,
            seed,
        })
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        substream_seed(self.seed, trial as u64)
    }

    pub fn trial_matrix(&self, trial: usize) -> Result<ComplexMatrix> {
        draw(self.kind, self.n, PrngState::new(self.trial_seed(trial)))
    }
}

fn uniform_scalar(rng: &mut PrngState) -> ComplexScalar {
    let re = rng.uniform();
    let im = rng.uniform();
    ComplexScalar::new(re, im)
}

pub fn uniform_ginibre(n: usize, rng: &mut PrngState) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(n, |_, _| uniform_scalar(rng))
}

pub fn diag_dominant(n: usize, rng: &mut PrngState) -> Result<ComplexMatrix> {
    let base = uniform_ginibre(n, rng)?;
    ComplexMatrix::from_fn(n, |i, j| {
        let entry = base.get(i, j);
        if i != j {
            return entry;
        }
        grow_along_phase(entry, base.row_sums()[i] + 1.0)
    })
}

fn grow_along_phase(entry: ComplexScalar, grow: f64) -> ComplexScalar {
    let m = modulus(entry);
    if m == 0.0 {
        entry + grow
    } else {
        entry * ((m + grow) / m)
    }
}

/// One matrix from the ensemble, consuming `rng`.
pub fn draw(kind: EnsembleKind, n: usize, mut rng: PrngState) -> Result<ComplexMatrix> {
    match kind {
        EnsembleKind::UniformGinibre => uniform_ginibre(n, &mut rng),
        EnsembleKind::DiagDominant => diag_dominant(n, &mut rng),
        EnsembleKind::KnownSpectrum => {
            let eigs: Vec<ComplexScalar> = (0..n).map(|_| uniform_scalar(&mut rng)).collect();
            known_spectrum_matrix(&eigs, rng).map(|(a, _)| a)
        }
    }
}
