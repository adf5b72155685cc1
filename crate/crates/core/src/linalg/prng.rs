//! splitmix64, passed around by value so streams stay reproducible.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_2: u64 = 0x94D0_49BB_1331_11EB;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrngState {
    pub state: u64,
}

impl PrngState {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Advances the state and returns the next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        let (next, value) = prng_next(*self);
        *self = next;
        value
    }

    /// Uniform draw in `[-1, 1)`.
    pub fn uniform(&mut self) -> f64 {
        let (next, value) = prng_uniform(*self);
        *self = next;
        value
    }
}

pub fn prng_next(s: PrngState) -> (PrngState, u64) {
    let state = s.state.wrapping_add(GOLDEN_GAMMA);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(MIX_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_2);
    (PrngState { state }, z ^ (z >> 31))
}

/// Top 53 bits of the raw draw scaled to `[0, 1)`, then mapped to `[-1, 1)`.
pub fn prng_uniform(s: PrngState) -> (PrngState, f64) {
    let (next, raw) = prng_next(s);
    let unit = (raw >> 11) as f64 / (1u64 << 53) as f64;
    (next, 2.0 * unit - 1.0)
}

/// Seed of an independent substream, e.g. one ensemble trial.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    prng_next(PrngState::new(seed ^ index)).1
}
