//! The binding→extrapolation reduction, simulated verbatim.
//!
//! The challenger holds the purified state on (S, M, S′) and hands over S′.
//! The reduction initializes K to the uniform superposition and M′, M₁ to
//! zeros, applies the keyed rotation to M′, copies (K, S′, M′) into its own
//! check register, runs the binding adversary on (A, K, S′, M′, M₁),
//! coherently verifies (K, S′, M₁) against the copy (uncompute and project
//! onto zero), and returns M′. Its success probability is measured against
//! the adversary's binding advantage on the same instance.

use crate::bases::BasisFamily;
use crate::error::{Error, Result};
use crate::qcore::linalg::{cr, kron_vec, CVec};
use crate::qcore::{RegisterShape, StateVector};

use super::{
    binding_advantage, build_commitment, clone_unitary, family_unitaries, Adversary,
    CommitmentLayout, GenInstance, Representation,
};

/// Reduction registers (A = adversary aux, then challenger and reduction
/// registers).
const R_A: usize = 0;
const R_S: usize = 1;
const R_M: usize = 2;
const R_SP: usize = 3;
const R_K: usize = 4;
const R_MP: usize = 5;
const R_M1: usize = 6;
const R_CRK: usize = 7;
const R_CRS: usize = 8;
const R_CRX: usize = 9;

/// Largest global dimension the reduction simulation will materialize.
const REDUCTION_LIMIT: usize = 1 << 16;

/// The probability tables of the reduction analysis.
#[derive(Debug, Clone)]
pub struct ReductionTables {
    /// `Pr[s] = β_s²`.
    pub challenge_probs: Vec<f64>,
    /// `p[k][s][x] = |⟨x|Rand_k|ψ_s⟩|²`.
    pub p: Vec<Vec<Vec<f64>>>,
    /// `q[k][x] = |⟨x|Rand_k|0⟩|²`.
    pub q: Vec<Vec<f64>>,
    /// `w[k][s][x]`: squared norm of the adversary's residual on the target
    /// after the compliance projection.
    pub w: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    /// Success of the verbatim reduction simulation.
    pub reduction_success: f64,
    /// `E_{k,s}[Σ_x q_k(x) w(k,s,x)]`, the closed form of the same number.
    pub closed_form_success: f64,
    /// The adversary's definitional binding advantage on this instance.
    pub binding_advantage: f64,
    pub tables: ReductionTables,
}

impl ReductionReport {
    /// `reductionSuccess ≥ bindingAdvantage − 1e-9`.
    pub fn dominance_holds(&self) -> bool {
        self.reduction_success >= self.binding_advantage - 1e-9
    }
}

/// Run the reduction for one adversary.
pub fn binding_reduction(
    gen: &GenInstance,
    family: &BasisFamily,
    adv: &Adversary,
) -> Result<ReductionReport> {
    let layout = CommitmentLayout::new(gen, family)?;
    let keys = family.enumerate_keys()?;
    let unitaries = family_unitaries(family, &keys)?;
    let kc = layout.key_count;
    let sd = layout.s_dim;
    let md = layout.msg_dim();
    let a_dim = adv.aux.dim();
    if adv.unitary.nrows() != a_dim * layout.d_dim() {
        return Err(Error::DimMismatch {
            left: adv.unitary.nrows(),
            right: a_dim * layout.d_dim(),
        });
    }
    let total = a_dim * sd * md * sd * kc * md * md * kc * sd * md;
    if total > REDUCTION_LIMIT {
        return Err(Error::LayoutTooLarge { total, limit: REDUCTION_LIMIT });
    }

    // Global state: aux ⊗ (S, M, S′ purification) ⊗ |+⟩_K ⊗ |0⟩ M′, M₁,
    // CrK, CrS, CrX.
    let chi = gen.purified_challenge_state()?;
    let plus_k = StateVector::new(
        RegisterShape::single(kc)?,
        CVec::from_element(kc, cr((kc as f64).sqrt().recip())),
    )?;
    let zeros = |d: usize| StateVector::basis_state(RegisterShape::single(d).unwrap(), &[0]);
    let state = adv
        .aux
        .tensor(&chi)?
        .tensor(&plus_k)?
        .tensor(&zeros(md)?)?
        .tensor(&zeros(md)?)?
        .tensor(&zeros(kc)?)?
        .tensor(&zeros(sd)?)?
        .tensor(&zeros(md)?)?;

    // Keyed rotation into M′.
    let state = state.apply_controlled(R_K, &[R_MP], |k| unitaries[k].clone())?;
    // Copy (K, S′, M′) into (CrK, CrS, CrX).
    let state = state.map_basis(|multi| {
        let mut out = multi.to_vec();
        out[R_CRK] = (out[R_CRK] + out[R_K]) % kc;
        out[R_CRX] = (out[R_CRX] + out[R_MP]) % md;
        out
    })?;
    let clone_v = clone_unitary(gen);
    let state = state.apply_to_registers(&[R_SP, R_CRS], &clone_v)?;

    // Binding adversary on (A, K, S′, M′, M₁) — the D-register order of the
    // commitment game.
    let state = state.apply_to_registers(&[R_A, R_K, R_SP, R_MP, R_M1], &adv.unitary)?;

    // Coherent check: uncompute the copy against (K, S′, M₁), then project
    // the check registers onto zero (keep the sub-normalized pass branch).
    let state = state.apply_to_registers(&[R_SP, R_CRS], &clone_v.adjoint())?;
    let state = state.map_basis(|multi| {
        let mut out = multi.to_vec();
        out[R_CRK] = (out[R_CRK] + kc - out[R_K]) % kc;
        out[R_CRX] = (out[R_CRX] + md - out[R_M1]) % md;
        out
    })?;
    let state = project_zero(&state, &[R_CRK, R_CRS, R_CRX])?;

    // Challenger verification: S must agree with chal_s and the returned M′
    // must pass the projection onto |ψ_s⟩.
    let mut reduction_success = 0.0;
    for c in gen.challenges() {
        let covec = kron_vec(&c.vector, c.target.amps());
        let residual = state.contract_joint(&[R_S, R_MP], &covec)?;
        reduction_success += residual.amps().norm_squared();
    }

    // Probability tables.
    let probs: Vec<f64> = gen.challenges().iter().map(|c| c.weight * c.weight).collect();
    let mut p = vec![vec![vec![0.0; md]; gen.challenges().len()]; kc];
    let mut q = vec![vec![0.0; md]; kc];
    let mut w = vec![vec![vec![0.0; md]; gen.challenges().len()]; kc];
    for (k, u) in unitaries.iter().enumerate() {
        for x in 0..md {
            q[k][x] = u[(x, 0)].norm_sqr();
        }
        for (s, c) in gen.challenges().iter().enumerate() {
            let rotated = u * c.target.amps();
            for x in 0..md {
                p[k][s][x] = rotated[x].norm_sqr();
            }
            for x in 0..md {
                w[k][s][x] = adversary_target_weight(gen, adv, &layout, k, s, x)?;
            }
        }
    }
    let mut closed_form = 0.0;
    for (s, prob) in probs.iter().enumerate() {
        for k in 0..kc {
            let inner: f64 = (0..md).map(|x| q[k][x] * w[k][s][x]).sum();
            closed_form += prob * inner / kc as f64;
        }
    }

    // Binding advantage of the same adversary against the dense pair.
    let pair = build_commitment(gen, family, Representation::Dense)?;
    let advantage = binding_advantage(&pair, adv)?;

    Ok(ReductionReport {
        reduction_success,
        closed_form_success: closed_form,
        binding_advantage: advantage,
        tables: ReductionTables { challenge_probs: probs, p, q, w },
    })
}

/// `w(k, s, x)`: feed the adversary the opening-register basis state
/// `(k, chal_s, x, 0)`, project the output onto the compliant pattern
/// `(k, chal_s, ·, x)` with `|ψ_s⟩` in the message slot, and return the
/// squared norm of the surviving auxiliary vector.
fn adversary_target_weight(
    gen: &GenInstance,
    adv: &Adversary,
    layout: &CommitmentLayout,
    k: usize,
    s: usize,
    x: usize,
) -> Result<f64> {
    let kc = layout.key_count;
    let sd = layout.s_dim;
    let md = layout.msg_dim();
    let challenge = &gen.challenges()[s];
    let chal_state = StateVector::new(RegisterShape::single(sd)?, challenge.vector.clone())?;
    let k_state = StateVector::basis_state(RegisterShape::single(kc)?, &[k])?;
    let x_state = StateVector::basis_state(RegisterShape::single(md)?, &[x])?;
    let zero_state = StateVector::basis_state(RegisterShape::single(md)?, &[0])?;
    // (A, K, S, M₀, M₁) with the D registers in game order.
    let input = adv
        .aux
        .tensor(&k_state)?
        .tensor(&chal_state)?
        .tensor(&x_state)?
        .tensor(&zero_state)?;
    let output = input.apply_to_registers(&[0, 1, 2, 3, 4], &adv.unitary)?;
    // Contract ⟨k| ⟨chal_s| ⟨ψ_s| ⟨x| on (K, S, M₀, M₁).
    let mut covec = kron_vec(&basis_vec(kc, k), &challenge.vector);
    covec = kron_vec(&covec, challenge.target.amps());
    covec = kron_vec(&covec, &basis_vec(md, x));
    let residual = output.contract_joint(&[1, 2, 3, 4], &covec)?;
    Ok(residual.amps().norm_squared())
}

fn basis_vec(dim: usize, idx: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[idx] = crate::qcore::linalg::C_ONE;
    v
}

/// Zero out every amplitude where any of the listed registers is nonzero.
fn project_zero(state: &StateVector, regs: &[usize]) -> Result<StateVector> {
    let shape = state.shape().clone();
    shape.check_register_set(regs)?;
    let strides = shape.strides();
    let mut amps = state.amps().clone();
    for idx in 0..amps.len() {
        for &r in regs {
            let digit = idx / strides[r] % shape.dims()[r];
            if digit != 0 {
                amps[idx] = crate::qcore::linalg::C_ZERO;
                break;
            }
        }
    }
    StateVector::unnormalized(shape, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::FamilyKind;
    use crate::commit::{bb84_instance, degenerate_instance, excited_instance};
    use crate::qcore::RngStream;

    fn zx_family() -> BasisFamily {
        BasisFamily::build(FamilyKind::MubPrime { p: 2 }, None)
            .unwrap()
            .restrict_bases(2)
            .unwrap()
    }

    #[test]
    fn identity_adversary_dominance() {
        let gen = excited_instance().unwrap();
        let family = zx_family();
        let layout = CommitmentLayout::new(&gen, &family).unwrap();
        let adv = Adversary::identity(1, layout.d_dim()).unwrap();
        let report = binding_reduction(&gen, &family, &adv).unwrap();
        assert!(report.dominance_holds(), "{report:?}");
        assert!(
            (report.reduction_success - report.closed_form_success).abs() < 1e-9,
            "simulation {} vs closed form {}",
            report.reduction_success,
            report.closed_form_success
        );
    }

    #[test]
    fn swap_adversary_on_degenerate_instance_wins_everywhere() {
        let gen = degenerate_instance(1).unwrap();
        let family = zx_family();
        let layout = CommitmentLayout::new(&gen, &family).unwrap();
        let adv = Adversary::swap_messages(&layout).unwrap();
        let report = binding_reduction(&gen, &family, &adv).unwrap();
        assert!((report.binding_advantage - 1.0).abs() < 1e-9, "{report:?}");
        assert!((report.reduction_success - 1.0).abs() < 1e-9, "{report:?}");
        assert!(report.dominance_holds());
    }

    #[test]
    fn random_adversaries_respect_dominance() {
        let gen = excited_instance().unwrap();
        let family = zx_family();
        let layout = CommitmentLayout::new(&gen, &family).unwrap();
        let mut stream = RngStream::from_seed(2024);
        for i in 0..40 {
            let adv = Adversary::random(2, layout.d_dim(), &mut stream.substream(i)).unwrap();
            let report = binding_reduction(&gen, &family, &adv).unwrap();
            assert!(
                report.dominance_holds(),
                "trial {i}: success {} < advantage {}",
                report.reduction_success,
                report.binding_advantage
            );
            assert!((report.reduction_success - report.closed_form_success).abs() < 1e-9);
        }
    }

    #[test]
    fn reduction_works_on_bb84_and_full_mub_triple() {
        let gen = bb84_instance().unwrap();
        let family = BasisFamily::build(FamilyKind::MubPrime { p: 2 }, None).unwrap();
        let layout = CommitmentLayout::new(&gen, &family).unwrap();
        let mut stream = RngStream::from_seed(77);
        for i in 0..5 {
            let adv = Adversary::random(2, layout.d_dim(), &mut stream.substream(i)).unwrap();
            let report = binding_reduction(&gen, &family, &adv).unwrap();
            assert!(report.dominance_holds(), "trial {i}: {report:?}");
        }
    }

    #[test]
    fn tables_are_probability_distributions() {
        let gen = bb84_instance().unwrap();
        let family = zx_family();
        let layout = CommitmentLayout::new(&gen, &family).unwrap();
        let adv = Adversary::identity(1, layout.d_dim()).unwrap();
        let report = binding_reduction(&gen, &family, &adv).unwrap();
        for k in 0..layout.key_count {
            let qs: f64 = report.tables.q[k].iter().sum();
            assert!((qs - 1.0).abs() < 1e-10);
            for s in 0..gen.challenges().len() {
                let ps: f64 = report.tables.p[k][s].iter().sum();
                assert!((ps - 1.0).abs() < 1e-10);
                for &wv in &report.tables.w[k][s] {
                    assert!((-1e-10..=1.0 + 1e-10).contains(&wv));
                }
            }
        }
    }
}
