//! The random-measurement bit commitment: construction, hiding and binding
//! games, XOR amplification, the binding→extrapolation reduction, and the
//! fixed-basis failure demonstration.
//!
//! Committing to `b` randomizes the message register `M_b` with a keyed
//! basis rotation, copies the key and outcome into the commitment register
//! `C₀`, and clones the challenge into `C₁`. Register order is
//! `(C₀, C₁, K, S, M₀, M₁)`, with `C = (C₀, C₁)` sent to the receiver and
//! `D = (K, S, M₀, M₁)` kept for opening.

mod demo;
mod instance;
mod reduction;
mod xor;

pub use demo::{fixed_basis_failure_demo, measure_commitment, FixedBasisDemo};
pub use instance::{
    bb84_instance, cloneable_fourier_instance, degenerate_instance, excited_instance,
    haar_classical_instance, Challenge, ChallengeBasis, GenInstance,
};
pub use reduction::{binding_reduction, ReductionReport, ReductionTables};
pub use xor::{xor_amplify, XorReport};

use rayon::prelude::*;

use crate::bases::{BasisFamily, BasisKey};
use crate::error::{Error, Result};
use crate::qcore::linalg::{cr, kron, unitary_with_first_column, CMat, CVec, C_ONE};
use crate::qcore::{fidelity, trace_distance, DensityMatrix, RegisterShape, RngStream, StateVector};

/// Register indices in the commitment layout.
pub const REG_C0: usize = 0;
pub const REG_C1: usize = 1;
pub const REG_K: usize = 2;
pub const REG_S: usize = 3;
pub const REG_M0: usize = 4;
pub const REG_M1: usize = 5;

/// Largest total dimension the dense representation will materialize.
pub const DENSE_LIMIT: usize = 1 << 14;

/// Register dimensions of a commitment instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitmentLayout {
    pub key_count: usize,
    pub s_dim: usize,
    pub msg_qubits: usize,
}

impl CommitmentLayout {
    pub fn new(gen: &GenInstance, family: &BasisFamily) -> Result<Self> {
        if family.dim() != gen.msg_dim() {
            return Err(Error::DimMismatch { left: family.dim(), right: gen.msg_dim() });
        }
        let key_count = family.key_count();
        if key_count > 1 << 20 {
            return Err(Error::LayoutTooLarge { total: usize::MAX, limit: 1 << 20 });
        }
        Ok(Self { key_count: key_count as usize, s_dim: gen.s_dim(), msg_qubits: gen.msg_qubits() })
    }

    pub fn msg_dim(&self) -> usize {
        1 << self.msg_qubits
    }

    /// `(C₀, C₁, K, S, M₀, M₁)` with `dim C₀ = |K|·2^m` and `dim C₁ = sDim`.
    pub fn shape(&self) -> Result<RegisterShape> {
        let m = self.msg_dim();
        RegisterShape::new(vec![self.key_count * m, self.s_dim, self.key_count, self.s_dim, m, m])
    }

    pub fn total(&self) -> Result<usize> {
        Ok(self.shape()?.total())
    }

    pub fn c_dim(&self) -> usize {
        self.key_count * self.msg_dim() * self.s_dim
    }

    pub fn d_dim(&self) -> usize {
        self.key_count * self.s_dim * self.msg_dim() * self.msg_dim()
    }
}

/// Dense purification of both commitment branches.
#[derive(Debug, Clone)]
pub struct DenseCommitment {
    pub com0: StateVector,
    pub com1: StateVector,
    /// Leading registers that form the commitment side C.
    pub c_registers: usize,
    /// Present when built from an instance and family.
    pub layout: Option<CommitmentLayout>,
}

impl DenseCommitment {
    pub fn d_registers(&self) -> Vec<usize> {
        (self.c_registers..self.com0.shape().len()).collect()
    }

    pub fn d_dim(&self) -> usize {
        self.d_registers().iter().map(|&r| self.com0.shape().dims()[r]).product()
    }

    pub fn reduced_c(&self, bit: u8) -> Result<DensityMatrix> {
        let regs: Vec<usize> = (0..self.c_registers).collect();
        let state = if bit == 0 { &self.com0 } else { &self.com1 };
        state.reduced_density(&regs)
    }
}

/// Block form of both branches: per-key amplitude tables over the outcome
/// register, exploiting the block-diagonal structure over `(s, k)`.
#[derive(Debug, Clone)]
pub struct StructuredTables {
    pub weights: Vec<f64>,
    pub keys: Vec<BasisKey>,
    /// `amp_targets[k][s][x] = ⟨x|Rand_k|ψ_s⟩`
    pub amp_targets: Vec<Vec<CVec>>,
    /// `amp_zero[k][x] = ⟨x|Rand_k|0…0⟩`
    pub amp_zero: Vec<CVec>,
}

impl StructuredTables {
    /// `p_{k,s}(x) = |α_{k,s,x}|²`.
    pub fn p(&self, k: usize, s: usize) -> Vec<f64> {
        self.amp_targets[k][s].iter().map(|a| a.norm_sqr()).collect()
    }

    /// `q_k(x) = |α_{k,x}|²`.
    pub fn q(&self, k: usize) -> Vec<f64> {
        self.amp_zero[k].iter().map(|a| a.norm_sqr()).collect()
    }

    /// Exact hiding distance `Σ_s β_s² E_k TD(p_{k,s}, q_k)`: the reduced
    /// commitment states are block diagonal over `(s, k)`, so the blockwise
    /// total-variation average is the exact trace distance.
    pub fn hiding_td(&self) -> f64 {
        let key_count = self.keys.len() as f64;
        let mut acc = 0.0;
        for (s, beta) in self.weights.iter().enumerate() {
            let mut key_acc = 0.0;
            for k in 0..self.keys.len() {
                let tv: f64 = self.amp_targets[k][s]
                    .iter()
                    .zip(self.amp_zero[k].iter())
                    .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
                    .sum();
                key_acc += 0.5 * tv;
            }
            acc += beta * beta * key_acc / key_count;
        }
        acc
    }

    /// Root fidelity of the reduced commitment states via the blockwise
    /// Bhattacharyya overlap.
    pub fn root_fidelity(&self) -> f64 {
        let key_count = self.keys.len() as f64;
        let mut acc = 0.0;
        for (s, beta) in self.weights.iter().enumerate() {
            let mut key_acc = 0.0;
            for k in 0..self.keys.len() {
                let bc: f64 = self.amp_targets[k][s]
                    .iter()
                    .zip(self.amp_zero[k].iter())
                    .map(|(a, b)| (a.norm_sqr() * b.norm_sqr()).sqrt())
                    .sum();
                key_acc += bc;
            }
            acc += beta * beta * key_acc / key_count;
        }
        acc
    }
}

/// Which representations to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Dense,
    Structured,
    Both,
}

/// A commitment pair in one or both representations.
#[derive(Debug, Clone)]
pub struct CommitmentPair {
    pub family_label: String,
    pub dense: Option<DenseCommitment>,
    pub structured: Option<StructuredTables>,
}

impl CommitmentPair {
    /// Wrap externally built branch states (used for synthetic pairs). The
    /// first `c_registers` registers form the commitment side.
    pub fn from_dense_states(
        com0: StateVector,
        com1: StateVector,
        c_registers: usize,
    ) -> Result<Self> {
        com0.require_normalized()?;
        com1.require_normalized()?;
        if com0.shape() != com1.shape() {
            return Err(Error::DimMismatch { left: com0.dim(), right: com1.dim() });
        }
        if c_registers == 0 || c_registers >= com0.shape().len() {
            return Err(Error::BadRegisterSet(format!(
                "c_registers {c_registers} must split {} registers",
                com0.shape().len()
            )));
        }
        Ok(Self {
            family_label: "synthetic".into(),
            dense: Some(DenseCommitment { com0, com1, c_registers, layout: None }),
            structured: None,
        })
    }

    pub fn dense(&self) -> Result<&DenseCommitment> {
        self.dense.as_ref().ok_or_else(|| {
            Error::InvalidArgument("operation requires the dense representation".into())
        })
    }

    pub fn structured(&self) -> Result<&StructuredTables> {
        self.structured.as_ref().ok_or_else(|| {
            Error::InvalidArgument("operation requires the structured representation".into())
        })
    }
}

/// The unitary completion of the clone map on `(S, C₁)`: conjugates a
/// modular-addition copy by the instance's basis completion, so a basis
/// challenge `|chal_s⟩|0⟩` maps to `|chal_s⟩|chal_s⟩`.
fn clone_unitary(gen: &GenInstance) -> CMat {
    let d = gen.s_dim();
    let mut add = CMat::zeros(d * d, d * d);
    for s in 0..d {
        for c in 0..d {
            add[(s * d + (c + s) % d, s * d + c)] = C_ONE;
        }
    }
    let w = gen.clone_completion();
    let id = CMat::identity(d, d);
    kron(&w, &w) * add * kron(&w.adjoint(), &id)
}

fn uniform_superposition(dim: usize) -> Result<StateVector> {
    let amp = cr((dim as f64).sqrt().recip());
    StateVector::new(RegisterShape::single(dim)?, CVec::from_element(dim, amp))
}

/// `|init⟩ = |0⟩_{C₀}|0⟩_{C₁}|+⟩_K (Σ_s β_s|chal_s⟩|ψ_s⟩)_{S,M₀} |0⟩_{M₁}`.
fn prepare_init(gen: &GenInstance, layout: &CommitmentLayout) -> Result<StateVector> {
    let m = layout.msg_dim();
    let c0 = StateVector::basis_state(RegisterShape::single(layout.key_count * m)?, &[0])?;
    let c1 = StateVector::basis_state(RegisterShape::single(layout.s_dim)?, &[0])?;
    let k = uniform_superposition(layout.key_count)?;
    let gen_sm = gen.gen_state()?;
    let m1 = StateVector::basis_state(RegisterShape::single(m)?, &[0])?;
    c0.tensor(&c1)?.tensor(&k)?.tensor(&gen_sm)?.tensor(&m1)
}

/// Apply the commitment steps for bit `b`:
/// `Clone_{S→(S,C₁)} · CNOT_{(K,M_b)→C₀} · CRand_{K→M_b}`.
fn apply_commit_steps(
    state: &StateVector,
    gen: &GenInstance,
    unitaries: &[CMat],
    layout: &CommitmentLayout,
    bit: u8,
) -> Result<StateVector> {
    let m_reg = if bit == 0 { REG_M0 } else { REG_M1 };
    let msg_dim = layout.msg_dim();
    let c0_dim = layout.key_count * msg_dim;
    let state = state.apply_controlled(REG_K, &[m_reg], |k| unitaries[k].clone())?;
    let state = state.map_basis(|multi| {
        let mut out = multi.to_vec();
        out[REG_C0] = (out[REG_C0] + out[REG_K] * msg_dim + out[m_reg]) % c0_dim;
        out
    })?;
    state.apply_to_registers(&[REG_S, REG_C1], &clone_unitary(gen))
}

fn undo_commit_steps(
    state: &StateVector,
    gen: &GenInstance,
    unitaries: &[CMat],
    layout: &CommitmentLayout,
    bit: u8,
) -> Result<StateVector> {
    let m_reg = if bit == 0 { REG_M0 } else { REG_M1 };
    let msg_dim = layout.msg_dim();
    let c0_dim = layout.key_count * msg_dim;
    let state = state.apply_to_registers(&[REG_S, REG_C1], &clone_unitary(gen).adjoint())?;
    let state = state.map_basis(|multi| {
        let mut out = multi.to_vec();
        let shift = (out[REG_K] * msg_dim + out[m_reg]) % c0_dim;
        out[REG_C0] = (out[REG_C0] + c0_dim - shift) % c0_dim;
        out
    })?;
    state.apply_controlled(REG_K, &[m_reg], |k| unitaries[k].adjoint())
}

fn family_unitaries(family: &BasisFamily, keys: &[BasisKey]) -> Result<Vec<CMat>> {
    keys.par_iter().map(|key| family.basis_unitary(key)).collect()
}

/// Build the commitment pair for an instance under a basis family.
pub fn build_commitment(
    gen: &GenInstance,
    family: &BasisFamily,
    repr: Representation,
) -> Result<CommitmentPair> {
    let layout = CommitmentLayout::new(gen, family)?;
    let keys = family.enumerate_keys()?;
    let dense = match repr {
        Representation::Dense | Representation::Both => {
            let total = layout.total()?;
            if total > DENSE_LIMIT {
                return Err(Error::LayoutTooLarge { total, limit: DENSE_LIMIT });
            }
            let unitaries = family_unitaries(family, &keys)?;
            let init = prepare_init(gen, &layout)?;
            let com0 = apply_commit_steps(&init, gen, &unitaries, &layout, 0)?;
            let com1 = apply_commit_steps(&init, gen, &unitaries, &layout, 1)?;
            Some(DenseCommitment { com0, com1, c_registers: 2, layout: Some(layout.clone()) })
        }
        Representation::Structured => None,
    };
    let structured = match repr {
        Representation::Structured | Representation::Both => {
            let weights: Vec<f64> = gen.challenges().iter().map(|c| c.weight).collect();
            let tables: Vec<(Vec<CVec>, CVec)> = keys
                .par_iter()
                .map(|key| {
                    let u = family.basis_unitary(key)?;
                    let targets: Vec<CVec> =
                        gen.challenges().iter().map(|c| &u * c.target.amps()).collect();
                    let zero = u.column(0).into_owned();
                    Ok((targets, zero))
                })
                .collect::<Result<_>>()?;
            let (amp_targets, amp_zero) = tables.into_iter().unzip();
            Some(StructuredTables { weights, keys, amp_targets, amp_zero })
        }
        Representation::Dense => None,
    };
    Ok(CommitmentPair { family_label: family.kind().label(), dense, structured })
}

/// Hiding distance `TD(Tr_D|com₀⟩⟨com₀|, Tr_D|com₁⟩⟨com₁|)`, computed from
/// the structured form when available (exact blockwise formula), else from
/// the dense reduced states.
pub fn hiding_distance(pair: &CommitmentPair) -> Result<f64> {
    if let Some(tables) = &pair.structured {
        return Ok(tables.hiding_td());
    }
    hiding_distance_dense(pair)
}

pub fn hiding_distance_dense(pair: &CommitmentPair) -> Result<f64> {
    let dense = pair.dense()?;
    trace_distance(&dense.reduced_c(0)?, &dense.reduced_c(1)?)
}

pub fn hiding_distance_structured(pair: &CommitmentPair) -> Result<f64> {
    Ok(pair.structured()?.hiding_td())
}

/// A binding adversary: an auxiliary state on register A and a unitary on
/// `(A, D)` with A most significant.
#[derive(Debug, Clone)]
pub struct Adversary {
    pub aux: StateVector,
    pub unitary: CMat,
}

impl Adversary {
    pub fn identity(aux_dim: usize, d_dim: usize) -> Result<Self> {
        let aux = StateVector::basis_state(RegisterShape::single(aux_dim)?, &[0])?;
        Ok(Self { aux, unitary: CMat::identity(aux_dim * d_dim, aux_dim * d_dim) })
    }

    /// Swap the contents of M₀ and M₁ (the honest attack on degenerate
    /// instances).
    pub fn swap_messages(layout: &CommitmentLayout) -> Result<Self> {
        let m = layout.msg_dim();
        let d_dims = [layout.key_count, layout.s_dim, m, m];
        let d_dim: usize = d_dims.iter().product();
        let mut u = CMat::zeros(d_dim, d_dim);
        for k in 0..layout.key_count {
            for s in 0..layout.s_dim {
                for x0 in 0..m {
                    for x1 in 0..m {
                        let col = ((k * layout.s_dim + s) * m + x0) * m + x1;
                        let row = ((k * layout.s_dim + s) * m + x1) * m + x0;
                        u[(row, col)] = C_ONE;
                    }
                }
            }
        }
        let aux = StateVector::basis_state(RegisterShape::single(1)?, &[0])?;
        Ok(Self { aux, unitary: u })
    }

    /// Haar-random unitary on `(A, D)` with a Haar-random auxiliary state.
    pub fn random(aux_dim: usize, d_dim: usize, stream: &mut RngStream) -> Result<Self> {
        let aux = stream.haar_state(aux_dim)?;
        Ok(Self { aux, unitary: stream.haar_unitary(aux_dim * d_dim)? })
    }
}

/// The definitional binding advantage
/// `Tr[(I_A ⊗ |com₁⟩⟨com₁|) U (|aux⟩⟨aux| ⊗ |com₀⟩⟨com₀|) U†]`.
pub fn binding_advantage(pair: &CommitmentPair, adv: &Adversary) -> Result<f64> {
    let dense = pair.dense()?;
    let d_dim = dense.d_dim();
    let expect = adv.aux.dim() * d_dim;
    if adv.unitary.nrows() != expect {
        return Err(Error::DimMismatch { left: adv.unitary.nrows(), right: expect });
    }
    let global = adv.aux.tensor(&dense.com0)?;
    // Registers: [A] ++ the opening registers shifted by one.
    let mut regs = vec![0usize];
    regs.extend(dense.d_registers().iter().map(|r| r + 1));
    let evolved = global.apply_to_registers(&regs, &adv.unitary)?;
    let com_regs: Vec<usize> = (1..=dense.com1.shape().len()).collect();
    let residual = evolved.contract_joint(&com_regs, dense.com1.amps())?;
    Ok(residual.amps().norm_squared())
}

/// The Uhlmann ceiling on any adversary's advantage:
/// `F(Tr_D com₀, Tr_D com₁)` in the squared-fidelity convention.
pub fn optimal_binding(pair: &CommitmentPair) -> Result<f64> {
    if let Some(tables) = &pair.structured {
        let root = tables.root_fidelity();
        return Ok(root * root);
    }
    let dense = pair.dense()?;
    fidelity(&dense.reduced_c(0)?, &dense.reduced_c(1)?)
}

/// Probability that the canonical receiver accepts `state` as an opening of
/// bit `bit`: uncompute the commitment and project onto `|0⋯0⟩`.
pub fn opening_acceptance(
    gen: &GenInstance,
    family: &BasisFamily,
    state: &StateVector,
    bit: u8,
) -> Result<f64> {
    let layout = CommitmentLayout::new(gen, family)?;
    let keys = family.enumerate_keys()?;
    let unitaries = family_unitaries(family, &keys)?;
    let undone = undo_commit_steps(state, gen, &unitaries, &layout, bit)?;
    // Uncompute the preparation of |init⟩: K register and (S, M₀) block.
    let k_prep = unitary_with_first_column(&CVec::from_element(
        layout.key_count,
        cr((layout.key_count as f64).sqrt().recip()),
    ));
    let gen_prep = unitary_with_first_column(gen.gen_state()?.amps());
    let undone = undone.apply_to_registers(&[REG_K], &k_prep.adjoint())?;
    let undone = undone.apply_to_registers(&[REG_S, REG_M0], &gen_prep.adjoint())?;
    Ok(undone.amps()[0].norm_sqr())
}
