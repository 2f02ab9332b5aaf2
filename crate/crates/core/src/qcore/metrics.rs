//! Distance and fidelity metrics on density matrices.
//!
//! Conventions: `fidelity` is the squared fidelity `F = (Tr|√ρ√σ|)²`, so for
//! a pure target `τ` it is the overlap probability `⟨τ|σ|τ⟩`. The Holevo
//! fidelity is `F_H = Tr(√ρ√σ)`. Trace distance is `½‖ρ−σ‖₁`.

use crate::error::{Error, Result, PSD_HARD_FLOOR, TOL_ALGEBRAIC};
use crate::qcore::linalg::{cr, herm_eig, hermitize, CMat, CVec};
use crate::qcore::state::DensityMatrix;

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch { left: rho.dim(), right: sigma.dim() });
    }
    Ok(())
}

/// `½‖ρ−σ‖₁` via the eigenvalues of the Hermitian difference.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let diff = rho.mat() - sigma.mat();
    let vals = crate::qcore::linalg::herm_eigvals(&diff);
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

/// PSD square root. Eigenvalues in `[-1e-9, 0)` are clamped to zero;
/// anything below `-1e-6` is rejected as genuinely non-PSD input.
pub fn psd_sqrt(rho: &DensityMatrix) -> Result<CMat> {
    psd_sqrt_mat(rho.mat())
}

/// PSD square root of a raw Hermitian matrix (same clamping policy).
pub fn psd_sqrt_mat(mat: &CMat) -> Result<CMat> {
    let (vals, vecs) = herm_eig(mat);
    let mut roots = Vec::with_capacity(vals.len());
    for &v in &vals {
        if v < PSD_HARD_FLOOR {
            return Err(Error::NotPsd(v));
        }
        roots.push(if v < 0.0 { 0.0 } else { v.sqrt() });
    }
    let d = CMat::from_diagonal(&CVec::from_iterator(roots.len(), roots.iter().map(|&r| cr(r))));
    Ok(hermitize(&(&vecs * d * vecs.adjoint())))
}

/// Squared (Uhlmann) fidelity `F = (Tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(root_fidelity(rho, sigma)?.powi(2))
}

/// Root fidelity `√F = Tr|√ρ√σ| = Tr √(√ρ σ √ρ)`.
pub fn root_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let s = psd_sqrt(rho)?;
    let inner = hermitize(&(&s * sigma.mat() * &s));
    let (vals, _) = herm_eig(&inner);
    let mut acc = 0.0;
    for &v in &vals {
        if v < PSD_HARD_FLOOR {
            return Err(Error::NotPsd(v));
        }
        if v > 0.0 {
            acc += v.sqrt();
        }
    }
    Ok(acc.min(1.0 + TOL_ALGEBRAIC))
}

/// Holevo fidelity `F_H(ρ,σ) = Tr(√ρ√σ)`.
pub fn holevo_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let a = psd_sqrt(rho)?;
    let b = psd_sqrt(sigma)?;
    Ok((&a * &b).trace().re)
}

/// The normalized Jordan–Hahn split of `ρ₀ − ρ₁`.
#[derive(Debug, Clone)]
pub struct JordanHahnParts {
    /// Equals `TD(ρ₀, ρ₁)`.
    pub weight: f64,
    /// Normalized positive part `P₊` (PSD, trace 1).
    pub plus: DensityMatrix,
    /// Normalized negative part `P₋` (PSD, trace 1).
    pub minus: DensityMatrix,
}

/// Result of [`jordan_hahn`]: either the inputs coincide (weight 0, no
/// parts) or a proper split `ρ₀ − ρ₁ = weight · (P₊ − P₋)`.
#[derive(Debug, Clone)]
pub enum JordanHahn {
    ZeroDifference,
    Split(JordanHahnParts),
}

impl JordanHahn {
    pub fn weight(&self) -> f64 {
        match self {
            JordanHahn::ZeroDifference => 0.0,
            JordanHahn::Split(parts) => parts.weight,
        }
    }
}

/// Splits `ρ₀ − ρ₁` into orthogonal positive and negative parts, normalized
/// so each part is a density matrix. Identical inputs (weight below 1e-12)
/// yield the distinguished zero-difference result.
pub fn jordan_hahn(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<JordanHahn> {
    check_dims(rho0, rho1)?;
    let diff = rho0.mat() - rho1.mat();
    let (vals, vecs) = herm_eig(&diff);
    let n = vals.len();
    let mut plus = CMat::zeros(n, n);
    let mut minus = CMat::zeros(n, n);
    let mut tr_plus = 0.0;
    let mut tr_minus = 0.0;
    for (i, &v) in vals.iter().enumerate() {
        let col = vecs.column(i);
        let proj = col * col.adjoint();
        if v > 0.0 {
            plus += proj.map(|z| z * v);
            tr_plus += v;
        } else if v < 0.0 {
            minus += proj.map(|z| z * (-v));
            tr_minus += -v;
        }
    }
    let weight = 0.5 * (tr_plus + tr_minus);
    if weight <= 1e-12 {
        return Ok(JordanHahn::ZeroDifference);
    }
    let plus = DensityMatrix::from_parts_unchecked(plus.map(|z| z / cr(tr_plus)));
    let minus = DensityMatrix::from_parts_unchecked(minus.map(|z| z / cr(tr_minus)));
    Ok(JordanHahn::Split(JordanHahnParts { weight, plus, minus }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{frobenius_norm, hs_inner, identity, C_ZERO};
    use crate::qcore::state::StateVector;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn proj0() -> DensityMatrix {
        DensityMatrix::from_distribution(&[1.0, 0.0]).unwrap()
    }

    fn proj1() -> DensityMatrix {
        DensityMatrix::from_distribution(&[0.0, 1.0]).unwrap()
    }

    fn proj_plus() -> DensityMatrix {
        StateVector::from_amps(vec![cr(FRAC_1_SQRT_2), cr(FRAC_1_SQRT_2)])
            .unwrap()
            .to_density()
            .unwrap()
    }

    #[test]
    fn trace_distance_orthogonal_pure() {
        assert!((trace_distance(&proj0(), &proj1()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_self_is_zero() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-12);
    }

    #[test]
    fn trace_distance_zero_plus() {
        // Eigenvalues of the 2x2 difference are ±1/√2.
        let td = trace_distance(&proj0(), &proj_plus()).unwrap();
        assert!((td - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn fidelity_values() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
        assert!((fidelity(&proj0(), &proj_plus()).unwrap() - 0.5).abs() < 1e-10);
        assert!(fidelity(&proj0(), &proj1()).unwrap() < 1e-12);
    }

    #[test]
    fn holevo_values() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!((holevo_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
        assert!(holevo_fidelity(&proj0(), &proj1()).unwrap().abs() < 1e-12);
        // F_H(I/2, |0><0|) = Tr(diag(1/√2) |0><0|) = 1/√2.
        let got = holevo_fidelity(&rho, &proj0()).unwrap();
        assert!((got - FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn psd_sqrt_cases() {
        let rho = DensityMatrix::maximally_mixed(4);
        let s = psd_sqrt(&rho).unwrap();
        let expect = identity(4).map(|z| z * 0.5);
        assert!(frobenius_norm(&(&s - expect)) < 1e-12);

        let rho = DensityMatrix::from_distribution(&[0.64, 0.36]).unwrap();
        let s = psd_sqrt(&rho).unwrap();
        assert!((s[(0, 0)].re - 0.8).abs() < 1e-12);
        assert!((s[(1, 1)].re - 0.6).abs() < 1e-12);

        // Rank-1 projector is its own square root.
        let p = proj_plus();
        let s = psd_sqrt(&p).unwrap();
        assert!(frobenius_norm(&(&s - p.mat())) < 1e-10);

        // Squares back to the input.
        let sq = &s * &s;
        assert!(frobenius_norm(&(sq - p.mat())) < 1e-8);
    }

    #[test]
    fn psd_sqrt_rejects_truly_negative() {
        let m = CMat::from_row_slice(2, 2, &[cr(1.1), C_ZERO, C_ZERO, cr(-0.1)]);
        assert!(matches!(psd_sqrt_mat(&m), Err(Error::NotPsd(_))));
        // Tiny negative drift is clamped instead.
        let m = CMat::from_row_slice(2, 2, &[cr(1.0), C_ZERO, C_ZERO, cr(-1e-10)]);
        let s = psd_sqrt_mat(&m).unwrap();
        assert!(s[(1, 1)].re.abs() < 1e-12);
    }

    #[test]
    fn jordan_hahn_orthogonal_pair() {
        match jordan_hahn(&proj0(), &proj1()).unwrap() {
            JordanHahn::Split(parts) => {
                assert!((parts.weight - 1.0).abs() < 1e-12);
                assert!(frobenius_norm(&(parts.plus.mat() - proj0().mat())) < 1e-12);
                assert!(frobenius_norm(&(parts.minus.mat() - proj1().mat())) < 1e-12);
            }
            JordanHahn::ZeroDifference => panic!("expected a split"),
        }
    }

    #[test]
    fn jordan_hahn_identical_inputs() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(jordan_hahn(&rho, &rho).unwrap(), JordanHahn::ZeroDifference));
    }

    #[test]
    fn jordan_hahn_zero_plus_pair() {
        let rho0 = proj0();
        let rho1 = proj_plus();
        match jordan_hahn(&rho0, &rho1).unwrap() {
            JordanHahn::Split(parts) => {
                assert!((parts.weight - FRAC_1_SQRT_2).abs() < 1e-12);
                // Reconstruction and orthogonality.
                let recon = (parts.plus.mat() - parts.minus.mat()).map(|z| z * parts.weight);
                let diff = rho0.mat() - rho1.mat();
                assert!(frobenius_norm(&(recon - diff)) < 1e-8);
                let cross = hs_inner(parts.plus.mat(), parts.minus.mat()).norm();
                assert!(cross < 1e-9);
                assert!((parts.plus.trace() - 1.0).abs() < 1e-10);
                assert!((parts.minus.trace() - 1.0).abs() < 1e-10);
            }
            JordanHahn::ZeroDifference => panic!("expected a split"),
        }
    }

    #[test]
    fn jordan_weight_equals_trace_distance() {
        let rho0 = proj_plus();
        let rho1 = DensityMatrix::maximally_mixed(2);
        let jh = jordan_hahn(&rho0, &rho1).unwrap();
        let td = trace_distance(&rho0, &rho1).unwrap();
        assert!((jh.weight() - td).abs() < 1e-12);
    }

    #[test]
    fn dim_mismatch_rejected() {
        let a = DensityMatrix::maximally_mixed(2);
        let b = DensityMatrix::maximally_mixed(3);
        assert!(trace_distance(&a, &b).is_err());
        assert!(fidelity(&a, &b).is_err());
        assert!(holevo_fidelity(&a, &b).is_err());
        assert!(jordan_hahn(&a, &b).is_err());
    }

    #[test]
    fn fidelity_is_pure_overlap() {
        let psi = StateVector::from_amps(vec![cr(0.6), cr(0.8)]).unwrap();
        let tau = psi.to_density().unwrap();
        let sigma = proj0();
        // ⟨ψ|σ|ψ⟩ = 0.36
        assert!((fidelity(&tau, &sigma).unwrap() - 0.36).abs() < 1e-10);
    }
}
