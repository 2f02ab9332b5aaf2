use nalgebra::linalg::SVD;

use crate::error::{Error, Result, SCHMIDT_CUTOFF};
use crate::qcore::linalg::{CMat, CVec};
use crate::qcore::state::StateVector;

/// Schmidt decomposition `Σ α_i |A_i⟩ ⊗ |B_i⟩` of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// Nonincreasing nonnegative coefficients; `Σ α_i² = 1`.
    pub coeffs: Vec<f64>,
    /// Orthonormal vectors on the A side, matching `coeffs`.
    pub left_vecs: Vec<CVec>,
    /// Orthonormal vectors on the B side, matching `coeffs`.
    pub right_vecs: Vec<CVec>,
    /// Count of coefficients above the numerical cutoff.
    pub rank: usize,
}

impl SchmidtData {
    /// `Σ α_i |A_i⟩⊗|B_i⟩` as a flat vector (A most significant).
    pub fn reconstruct(&self) -> CVec {
        let dim_a = self.left_vecs[0].len();
        let dim_b = self.right_vecs[0].len();
        let mut out = CVec::zeros(dim_a * dim_b);
        for ((&c, a), b) in self.coeffs.iter().zip(&self.left_vecs).zip(&self.right_vecs) {
            for i in 0..dim_a {
                for j in 0..dim_b {
                    out[i * dim_b + j] += a[i] * b[j] * c;
                }
            }
        }
        out
    }
}

/// Schmidt-decompose a state across the cut after the first `cut` registers.
///
/// The coefficients are the singular values of the `dimA × dimB` coefficient
/// matrix, sorted nonincreasing.
pub fn schmidt_decompose(state: &StateVector, cut: usize) -> Result<SchmidtData> {
    state.require_normalized()?;
    let nregs = state.shape().len();
    if cut == 0 || cut >= nregs {
        return Err(Error::BadRegisterSet(format!(
            "cut {cut} does not split {nregs} registers into two nonempty sides"
        )));
    }
    let dim_a: usize = state.shape().dims()[..cut].iter().product();
    let dim_b: usize = state.shape().dims()[cut..].iter().product();
    // Big-endian flattening makes the A index the row: amps[a*dim_b + b].
    let m = CMat::from_fn(dim_a, dim_b, |a, b| state.amps()[a * dim_b + b]);

    let svd = SVD::new(m, true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let k = svd.singular_values.len();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());

    let mut coeffs = Vec::with_capacity(k);
    let mut left_vecs = Vec::with_capacity(k);
    let mut right_vecs = Vec::with_capacity(k);
    for &i in &order {
        coeffs.push(svd.singular_values[i]);
        left_vecs.push(u.column(i).into_owned());
        right_vecs.push(v_t.row(i).transpose().map(|z| z.conj()));
    }
    let rank = coeffs.iter().filter(|&&c| c > SCHMIDT_CUTOFF).count();
    Ok(SchmidtData { coeffs, left_vecs, right_vecs, rank })
}
