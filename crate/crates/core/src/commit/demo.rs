//! The fixed-basis failure: committing to a bipartite state by measuring
//! one side in a single fixed basis can produce identical commitment
//! branches, so the opener flips the bit without touching anything.
//!
//! The commitment here measures register A (bit 0) or B (bit 1) of a
//! bipartite state in a keyed basis and copies the outcome (and key) to the
//! commitment side. Opening registers are listed (K, unmeasured, measured),
//! which is the order the receiver's verification uses; converting an
//! opening between branches is then literally the identity map.

use crate::bases::{BasisFamily, FamilyKind};
use crate::error::{Error, Result};
use crate::qcore::linalg::{cr, CVec};
use crate::qcore::{fidelity, trace_distance, RegisterShape, StateVector};

use super::family_unitaries;

/// Registers of the measured commitment: C = (K′, X), D = (K, R₁, R₂).
const REG_KC: usize = 0;
const REG_X: usize = 1;
const REG_K: usize = 2;
const REG_R1: usize = 3;
const REG_R2: usize = 4;

/// Build both branches of the measured commitment of a bipartite state.
///
/// `state` lives on two registers of equal dimension. The returned branch
/// states share the register list `(K′, X, K, unmeasured, measured)`.
pub fn measure_commitment(
    state: &StateVector,
    family: &BasisFamily,
) -> Result<(StateVector, StateVector)> {
    if state.shape().len() != 2 {
        return Err(Error::BadRegisterSet("measured commitment needs a bipartite state".into()));
    }
    let d = state.shape().dims()[0];
    if state.shape().dims()[1] != d {
        return Err(Error::DimMismatch { left: d, right: state.shape().dims()[1] });
    }
    if family.dim() != d {
        return Err(Error::DimMismatch { left: family.dim(), right: d });
    }
    let keys = family.enumerate_keys()?;
    let unitaries = family_unitaries(family, &keys)?;
    let kc = keys.len();

    let zero = |dim: usize| StateVector::basis_state(RegisterShape::single(dim).unwrap(), &[0]);
    let plus_k = StateVector::new(
        RegisterShape::single(kc)?,
        CVec::from_element(kc, cr((kc as f64).sqrt().recip())),
    )?;
    let start = zero(kc)?.tensor(&zero(d)?)?.tensor(&plus_k)?.tensor(state)?;

    let build = |measured: usize| -> Result<StateVector> {
        let s = start.apply_controlled(REG_K, &[measured], |k| unitaries[k].clone())?;
        let s = s.map_basis(|multi| {
            let mut out = multi.to_vec();
            out[REG_X] = (out[REG_X] + out[measured]) % d;
            out[REG_KC] = (out[REG_KC] + out[REG_K]) % kc;
            out
        })?;
        Ok(s)
    };
    let com0 = build(REG_R1)?;
    let com1 = build(REG_R2)?;
    // Canonical opening order (K, unmeasured, measured): branch 0 measured
    // R₁, so its registers R₁ and R₂ swap places.
    let com0 = com0.map_basis(|multi| {
        let mut out = multi.to_vec();
        out.swap(REG_R1, REG_R2);
        out
    })?;
    Ok((com0, com1))
}

/// The `Σ_x |x⟩ ⊗ H|x⟩` state on `n + n` qubits, as two dim-2ⁿ registers.
pub fn hadamard_pair_state(n: usize) -> Result<StateVector> {
    let d = 1usize << n;
    let shape = RegisterShape::new(vec![d, d])?;
    let scale = 1.0 / d as f64;
    let amps = CVec::from_fn(d * d, |idx, _| {
        let x = idx / d;
        let y = idx % d;
        let sign = if (x & y).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        cr(sign * scale)
    });
    StateVector::new(shape, amps)
}

#[derive(Debug, Clone)]
pub struct FixedBasisDemo {
    pub n: usize,
    /// `‖|com₀⟩ − |com₁⟩‖` under the fixed computational basis.
    pub state_diff_norm: f64,
    /// `|⟨com₀|com₁⟩|`.
    pub overlap: f64,
    /// Binding advantage of the do-nothing adversary.
    pub identity_advantage: f64,
    /// Contrast: the same construction under the maximal MUB family.
    pub contrast_family: String,
    pub contrast_hiding_td: f64,
    /// The do-nothing adversary's advantage under the MUB family.
    pub contrast_identity_advantage: f64,
    /// Uhlmann ceiling under the MUB family. The demo state is maximally
    /// entangled, so both branch reductions are maximally mixed and this is
    /// 1 for every family: randomizing the basis defeats the identity
    /// opener but cannot make this construction binding.
    pub contrast_optimal_binding: f64,
}

/// Build the `Σ_x|x⟩⊗H|x⟩` commitment with the fixed computational basis,
/// exhibit the identical branches, and contrast with the maximal MUB
/// family.
pub fn fixed_basis_failure_demo(n: usize) -> Result<FixedBasisDemo> {
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("demo qubit count {n}")));
    }
    let d = 1usize << n;
    let state = hadamard_pair_state(n)?;

    let fixed = BasisFamily::build(FamilyKind::Computational { dim: d }, None)?;
    let (com0, com1) = measure_commitment(&state, &fixed)?;
    let diff = (com0.amps() - com1.amps()).norm();
    let overlap = com0.overlap(&com1)?.norm();
    // The identity adversary hands over the opening registers unchanged;
    // its advantage is the squared branch overlap.
    let identity_advantage = overlap * overlap;

    let contrast_family = if n == 1 {
        BasisFamily::build(FamilyKind::MubPrime { p: 2 }, None)?
    } else {
        BasisFamily::build(FamilyKind::MubQubits { n }, None)?
    };
    let (mub0, mub1) = measure_commitment(&state, &contrast_family)?;
    let rho0 = mub0.reduced_density(&[REG_KC, REG_X])?;
    let rho1 = mub1.reduced_density(&[REG_KC, REG_X])?;
    let contrast_hiding_td = trace_distance(&rho0, &rho1)?;
    let contrast_identity_advantage = mub0.overlap(&mub1)?.norm_sqr();
    let contrast_optimal_binding = fidelity(&rho0, &rho1)?;

    Ok(FixedBasisDemo {
        n,
        state_diff_norm: diff,
        overlap,
        identity_advantage,
        contrast_family: contrast_family.kind().label(),
        contrast_hiding_td,
        contrast_identity_advantage,
        contrast_optimal_binding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_coincide_under_fixed_basis() {
        for n in 1..=2usize {
            let demo = fixed_basis_failure_demo(n).unwrap();
            assert!(demo.state_diff_norm < 1e-9, "n={n}: {demo:?}");
            assert!((demo.overlap - 1.0).abs() < 1e-9);
            assert!((demo.identity_advantage - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn mub_contrast_hides_and_binds() {
        let demo = fixed_basis_failure_demo(1).unwrap();
        assert!(
            demo.contrast_hiding_td <= std::f64::consts::FRAC_1_SQRT_2 + 1e-9,
            "{demo:?}"
        );
        assert!(demo.contrast_optimal_binding < 1.0 - 1e-3, "{demo:?}");
    }

    #[test]
    fn hadamard_pair_state_is_normalized_and_symmetric() {
        let psi = hadamard_pair_state(2).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        // Amplitude matrix is symmetric: amp(x,y) = amp(y,x).
        let d = 4;
        for x in 0..d {
            for y in 0..d {
                assert_eq!(psi.amps()[x * d + y], psi.amps()[y * d + x]);
            }
        }
    }

    #[test]
    fn measured_commitment_rejects_mismatched_shapes() {
        let psi = hadamard_pair_state(1).unwrap();
        let family = BasisFamily::build(FamilyKind::Computational { dim: 4 }, None).unwrap();
        assert!(measure_commitment(&psi, &family).is_err());
    }
}
