//! Deterministic, independently seekable random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the master seed; the stream
//! index selects one of 2^64 non-overlapping sequences of that key, so path
//! `i` of a batch draws the same numbers regardless of scheduling.

use rand::{Error as RandError, Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            inner,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform<T: Real>(&mut self) -> T {
        T::lit(self.inner.gen::<f64>())
    }

    /// Uniform on `(0, 1]`, safe to raise to negative powers.
    #[inline]
    pub fn uniform_open_closed<T: Real>(&mut self) -> T {
        T::lit(1.0 - self.inner.gen::<f64>())
    }

    /// `+1` or `-1` with equal probability.
    #[inline]
    pub fn sign<T: Real>(&mut self) -> T {
        if self.inner.gen::<bool>() {
            T::one()
        } else {
            -T::one()
        }
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RandError> {
        self.inner.try_fill_bytes(dest)
    }
}
