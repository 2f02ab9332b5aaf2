//! Splittable seeded randomness and Haar-measure sampling.

use nalgebra::linalg::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::qcore::linalg::{cr, C64, CMat, CVec};
use crate::qcore::state::{DensityMatrix, StateVector};

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// A counter-based random stream. Substreams derived from the same parent
/// with distinct indices are statistically independent, so parallel callers
/// each take their own substream and results do not depend on scheduling.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    path: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        Self::derive(seed, 0)
    }

    fn derive(seed: u64, path: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(path);
        Self { seed, path, rng }
    }

    /// Child stream `index` of this stream. Derivation depends only on the
    /// parent's identity, not on how much the parent has been consumed.
    pub fn substream(&self, index: u64) -> RngStream {
        let path = splitmix64(self.path ^ splitmix64(index.wrapping_add(1)));
        Self::derive(self.seed, path)
    }

    pub fn rng(&mut self) -> &mut ChaCha12Rng {
        &mut self.rng
    }

    fn std_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    fn gaussian_c64(&mut self) -> C64 {
        C64::new(self.std_normal(), self.std_normal())
    }

    /// Haar-random pure state of the given dimension.
    pub fn haar_state(&mut self, dim: usize) -> Result<StateVector> {
        if dim == 0 {
            return Err(Error::InvalidArgument("zero dimension".into()));
        }
        let mut v = CVec::from_fn(dim, |_, _| self.gaussian_c64());
        let n = v.norm();
        v /= cr(n);
        StateVector::from_amps(v.iter().copied().collect())
    }

    /// Haar-random unitary via QR of a Ginibre matrix with the phase fix
    /// that makes the distribution exactly Haar.
    pub fn haar_unitary(&mut self, dim: usize) -> Result<CMat> {
        if dim == 0 {
            return Err(Error::InvalidArgument("zero dimension".into()));
        }
        let g = CMat::from_fn(dim, dim, |_, _| self.gaussian_c64());
        let qr = QR::new(g);
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..dim {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 { d / cr(d.norm()) } else { cr(1.0) };
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
        Ok(q)
    }

    /// Random density matrix of the given rank: `GG†/Tr(GG†)` with `G` a
    /// `dim × rank` Ginibre matrix.
    pub fn density(&mut self, dim: usize, rank: usize) -> Result<DensityMatrix> {
        if rank == 0 || rank > dim {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} invalid for dimension {dim}"
            )));
        }
        let g = CMat::from_fn(dim, rank, |_, _| self.gaussian_c64());
        let m = &g * g.adjoint();
        let tr = m.trace().re;
        Ok(DensityMatrix::from_parts_unchecked(m.map(|z| z / cr(tr))))
    }

    pub fn uniform_index(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn uniform_f64(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}
