use crate::error::{Error, Result, TOL_ALGEBRAIC};
use crate::qcore::linalg::{
    self, cr, herm_eigvals, hermiticity_defect, kron, kron_vec, C64, CMat, CVec, C_ONE, C_ZERO,
};
use crate::qcore::register::RegisterShape;

/// Whether a state is a normalized physical state or an explicitly flagged
/// unnormalized vector (the maximally entangled `Σ|i⟩|i⟩` used to build
/// canonical purifications is the only such citizen).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Normalized,
    Unnormalized,
}

/// A pure state over an ordered list of registers.
#[derive(Debug, Clone)]
pub struct StateVector {
    shape: RegisterShape,
    amps: CVec,
    kind: StateKind,
}

impl StateVector {
    /// A normalized state; rejects vectors whose L2 norm strays more than
    /// `1e-9` from 1.
    pub fn new(shape: RegisterShape, amps: CVec) -> Result<Self> {
        Self::with_tol(shape, amps, TOL_ALGEBRAIC)
    }

    pub fn with_tol(shape: RegisterShape, amps: CVec, tol: f64) -> Result<Self> {
        if amps.len() != shape.total() {
            return Err(Error::DimMismatch { left: amps.len(), right: shape.total() });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm, tol });
        }
        Ok(Self { shape, amps, kind: StateKind::Normalized })
    }

    /// An explicitly flagged unnormalized vector.
    pub fn unnormalized(shape: RegisterShape, amps: CVec) -> Result<Self> {
        if amps.len() != shape.total() {
            return Err(Error::DimMismatch { left: amps.len(), right: shape.total() });
        }
        Ok(Self { shape, amps, kind: StateKind::Unnormalized })
    }

    /// The unnormalized maximally entangled vector `Σ_i |i⟩|i⟩` on two
    /// `dim`-dimensional registers.
    pub fn max_entangled_unnormalized(dim: usize) -> Result<Self> {
        let shape = RegisterShape::new(vec![dim, dim])?;
        let mut amps = CVec::zeros(dim * dim);
        for i in 0..dim {
            amps[i * dim + i] = C_ONE;
        }
        Self::unnormalized(shape, amps)
    }

    /// Computational basis state `|multi⟩`.
    pub fn basis_state(shape: RegisterShape, multi: &[usize]) -> Result<Self> {
        if multi.len() != shape.len() {
            return Err(Error::BadRegisterSet(format!(
                "basis label has {} entries for {} registers",
                multi.len(),
                shape.len()
            )));
        }
        for (r, (&m, &d)) in multi.iter().zip(shape.dims()).enumerate() {
            if m >= d {
                return Err(Error::InvalidArgument(format!(
                    "basis index {m} out of range for register {r} of dimension {d}"
                )));
            }
        }
        let mut amps = CVec::zeros(shape.total());
        amps[shape.flatten(multi)] = C_ONE;
        Ok(Self { shape, amps, kind: StateKind::Normalized })
    }

    /// Single-register state from raw amplitudes.
    pub fn from_amps(amps: Vec<C64>) -> Result<Self> {
        let shape = RegisterShape::single(amps.len())?;
        Self::new(shape, CVec::from_vec(amps))
    }

    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    pub fn amps(&self) -> &CVec {
        &self.amps
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.shape.total()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn require_normalized(&self) -> Result<()> {
        match self.kind {
            StateKind::Normalized => Ok(()),
            StateKind::Unnormalized => Err(Error::UnnormalizedInput),
        }
    }

    /// Reinterpret the same amplitudes over a different register split.
    pub fn reshaped(&self, shape: RegisterShape) -> Result<Self> {
        if shape.total() != self.shape.total() {
            return Err(Error::DimMismatch { left: shape.total(), right: self.shape.total() });
        }
        Ok(Self { shape, amps: self.amps.clone(), kind: self.kind })
    }

    /// Kronecker product; shapes concatenate, norms multiply.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let shape = self.shape.concat(&other.shape)?;
        let amps = kron_vec(&self.amps, &other.amps);
        let kind = match (self.kind, other.kind) {
            (StateKind::Normalized, StateKind::Normalized) => StateKind::Normalized,
            _ => StateKind::Unnormalized,
        };
        Ok(StateVector { shape, amps, kind })
    }

    /// Entry-wise complex conjugate.
    pub fn conjugate(&self) -> StateVector {
        StateVector {
            shape: self.shape.clone(),
            amps: linalg::conjugate_vec(&self.amps),
            kind: self.kind,
        }
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        self.require_normalized()?;
        let mat = &self.amps * self.amps.adjoint();
        Ok(DensityMatrix::from_parts_unchecked(mat))
    }

    /// Reduced density matrix on the kept registers (in the order given),
    /// tracing out the rest.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.require_normalized()?;
        self.shape.check_register_set(keep)?;
        let keep_shape = self.shape.select(keep)?;
        let rest: Vec<usize> =
            (0..self.shape.len()).filter(|r| !keep.contains(r)).collect();
        let strides = self.shape.strides();
        let kdim = keep_shape.total();

        let mut rho = CMat::zeros(kdim, kdim);
        let rest_dims: Vec<usize> = rest.iter().map(|&r| self.shape.dims()[r]).collect();
        let rest_total: usize = rest_dims.iter().product::<usize>().max(1);
        let keep_strides: Vec<usize> = keep.iter().map(|&r| strides[r]).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&r| self.shape.dims()[r]).collect();

        let mut keep_offsets = vec![0usize; kdim];
        for (flat, off) in keep_offsets.iter_mut().enumerate() {
            let mut rem = flat;
            let mut acc = 0usize;
            for pos in (0..keep_dims.len()).rev() {
                let digit = rem % keep_dims[pos];
                rem /= keep_dims[pos];
                acc += digit * keep_strides[pos];
            }
            *off = acc;
        }

        for rflat in 0..rest_total {
            let mut rem = rflat;
            let mut base = 0usize;
            for pos in (0..rest.len()).rev() {
                let digit = rem % rest_dims[pos];
                rem /= rest_dims[pos];
                base += digit * strides[rest[pos]];
            }
            for a in 0..kdim {
                let va = self.amps[base + keep_offsets[a]];
                if va == C_ZERO {
                    continue;
                }
                for b in 0..kdim {
                    let vb = self.amps[base + keep_offsets[b]];
                    rho[(a, b)] += va * vb.conj();
                }
            }
        }
        Ok(DensityMatrix::from_parts_unchecked(rho))
    }

    /// Apply a matrix to the listed registers (acting on their big-endian
    /// concatenation, in the order given), leaving the rest untouched.
    pub fn apply_to_registers(&self, regs: &[usize], m: &CMat) -> Result<StateVector> {
        self.shape.check_register_set(regs)?;
        let sub_shape = self.shape.select(regs)?;
        let sub_dim = sub_shape.total();
        if m.nrows() != sub_dim || m.ncols() != sub_dim {
            return Err(Error::DimMismatch { left: m.nrows(), right: sub_dim });
        }
        let strides = self.shape.strides();
        let sub_strides: Vec<usize> = regs.iter().map(|&r| strides[r]).collect();
        let sub_dims: Vec<usize> = regs.iter().map(|&r| self.shape.dims()[r]).collect();
        let rest: Vec<usize> = (0..self.shape.len()).filter(|r| !regs.contains(r)).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&r| self.shape.dims()[r]).collect();
        let rest_total: usize = rest_dims.iter().product::<usize>().max(1);

        let mut sub_offsets = vec![0usize; sub_dim];
        for (flat, off) in sub_offsets.iter_mut().enumerate() {
            let mut rem = flat;
            let mut acc = 0usize;
            for pos in (0..sub_dims.len()).rev() {
                let digit = rem % sub_dims[pos];
                rem /= sub_dims[pos];
                acc += digit * sub_strides[pos];
            }
            *off = acc;
        }

        let mut out = self.amps.clone();
        let mut x = CVec::zeros(sub_dim);
        for rflat in 0..rest_total {
            let mut rem = rflat;
            let mut base = 0usize;
            for pos in (0..rest.len()).rev() {
                let digit = rem % rest_dims[pos];
                rem /= rest_dims[pos];
                base += digit * strides[rest[pos]];
            }
            for s in 0..sub_dim {
                x[s] = self.amps[base + sub_offsets[s]];
            }
            let y = m * &x;
            for s in 0..sub_dim {
                out[base + sub_offsets[s]] = y[s];
            }
        }
        Ok(StateVector { shape: self.shape.clone(), amps: out, kind: self.kind })
    }

    /// Apply `op(k)` to the target registers on the branch where the control
    /// register holds `k`.
    pub fn apply_controlled(
        &self,
        control: usize,
        targets: &[usize],
        op: impl Fn(usize) -> CMat,
    ) -> Result<StateVector> {
        let mut regs = vec![control];
        regs.extend_from_slice(targets);
        self.shape.check_register_set(&regs)?;
        let kdim = self.shape.dims()[control];
        let tshape = self.shape.select(targets)?;
        let tdim = tshape.total();
        // Assemble the block-diagonal controlled unitary over (control, targets).
        let mut big = CMat::zeros(kdim * tdim, kdim * tdim);
        for k in 0..kdim {
            let m = op(k);
            if m.nrows() != tdim || m.ncols() != tdim {
                return Err(Error::DimMismatch { left: m.nrows(), right: tdim });
            }
            for i in 0..tdim {
                for j in 0..tdim {
                    big[(k * tdim + i, k * tdim + j)] = m[(i, j)];
                }
            }
        }
        self.apply_to_registers(&regs, &big)
    }

    /// Partial inner product: contract `⟨covec|` against the listed
    /// registers (big-endian in the order given), leaving an unnormalized
    /// vector on the remaining registers.
    pub fn contract_joint(&self, regs: &[usize], covec: &CVec) -> Result<StateVector> {
        self.shape.check_register_set(regs)?;
        let sub_shape = self.shape.select(regs)?;
        if covec.len() != sub_shape.total() {
            return Err(Error::DimMismatch { left: covec.len(), right: sub_shape.total() });
        }
        let rest: Vec<usize> = (0..self.shape.len()).filter(|r| !regs.contains(r)).collect();
        if rest.is_empty() {
            return Err(Error::BadRegisterSet(
                "contraction must leave at least one register".into(),
            ));
        }
        let strides = self.shape.strides();
        let sub_dims: Vec<usize> = regs.iter().map(|&r| self.shape.dims()[r]).collect();
        let sub_strides: Vec<usize> = regs.iter().map(|&r| strides[r]).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&r| self.shape.dims()[r]).collect();
        let rest_total: usize = rest_dims.iter().product();

        let sub_dim = sub_shape.total();
        let mut sub_offsets = vec![0usize; sub_dim];
        for (flat, off) in sub_offsets.iter_mut().enumerate() {
            let mut rem = flat;
            let mut acc = 0usize;
            for pos in (0..sub_dims.len()).rev() {
                let digit = rem % sub_dims[pos];
                rem /= sub_dims[pos];
                acc += digit * sub_strides[pos];
            }
            *off = acc;
        }

        let mut out = CVec::zeros(rest_total);
        for rflat in 0..rest_total {
            let mut rem = rflat;
            let mut base = 0usize;
            for pos in (0..rest.len()).rev() {
                let digit = rem % rest_dims[pos];
                rem /= rest_dims[pos];
                base += digit * strides[rest[pos]];
            }
            let mut acc = C_ZERO;
            for s in 0..sub_dim {
                acc += covec[s].conj() * self.amps[base + sub_offsets[s]];
            }
            out[rflat] = acc;
        }
        let rest_shape = RegisterShape::new(rest_dims)?;
        StateVector::unnormalized(rest_shape, out)
    }

    /// Relabel computational basis states by a bijection on multi-indices.
    pub fn map_basis(&self, f: impl Fn(&[usize]) -> Vec<usize>) -> Result<StateVector> {
        let mut out = CVec::zeros(self.dim());
        let mut hit = vec![false; self.dim()];
        for idx in 0..self.dim() {
            let multi = self.shape.unflatten(idx);
            let image = f(&multi);
            if image.len() != multi.len() {
                return Err(Error::InvalidArgument(
                    "basis map changed the number of registers".into(),
                ));
            }
            let target = self.shape.flatten(&image);
            if hit[target] {
                return Err(Error::InvalidArgument("basis map is not a bijection".into()));
            }
            hit[target] = true;
            out[target] = self.amps[idx];
        }
        Ok(StateVector { shape: self.shape.clone(), amps: out, kind: self.kind })
    }
}

/// A Hermitian, PSD, trace-1 operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    mat: CMat,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positivity (within `1e-9`).
    pub fn new(mat: CMat) -> Result<Self> {
        Self::with_tol(mat, TOL_ALGEBRAIC)
    }

    pub fn with_tol(mat: CMat, tol: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimMismatch { left: mat.nrows(), right: mat.ncols() });
        }
        let defect = hermiticity_defect(&mat);
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::BadTrace(tr.re));
        }
        let min_eig = herm_eigvals(&mat).first().copied().unwrap_or(0.0);
        if min_eig < -tol {
            return Err(Error::NotPsd(min_eig));
        }
        Ok(Self { dim: mat.nrows(), mat })
    }

    /// Constructor for matrices valid by construction (pure projectors,
    /// pinchings, partial traces of valid inputs).
    pub(crate) fn from_parts_unchecked(mat: CMat) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { dim: mat.nrows(), mat }
    }

    pub fn pure(state: &StateVector) -> Result<Self> {
        state.to_density()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_parts_unchecked(CMat::identity(dim, dim).map(|z| z / cr(dim as f64)))
    }

    /// Diagonal density matrix from a probability vector.
    pub fn from_distribution(probs: &[f64]) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TOL_ALGEBRAIC || probs.iter().any(|&p| p < -TOL_ALGEBRAIC) {
            return Err(Error::InvalidArgument(format!(
                "not a probability vector (sum {total})"
            )));
        }
        let diag = CVec::from_iterator(probs.len(), probs.iter().map(|&p| cr(p.max(0.0))));
        Ok(Self::from_parts_unchecked(CMat::from_diagonal(&diag)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn purity(&self) -> f64 {
        linalg::hs_inner(&self.mat, &self.mat).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eigvals(&self.mat)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked(kron(&self.mat, &other.mat))
    }

    pub fn conjugate(&self) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked(linalg::conjugate_mat(&self.mat))
    }

    /// `u ρ u†`.
    pub fn evolve(&self, u: &CMat) -> Result<DensityMatrix> {
        if u.ncols() != self.dim {
            return Err(Error::DimMismatch { left: u.ncols(), right: self.dim });
        }
        Ok(DensityMatrix::from_parts_unchecked(u * &self.mat * u.adjoint()))
    }

    /// Partial trace: keep the listed registers of `shape` (in the order
    /// given), trace out the rest. Trace is preserved.
    pub fn partial_trace(&self, shape: &RegisterShape, keep: &[usize]) -> Result<DensityMatrix> {
        if shape.total() != self.dim {
            return Err(Error::DimMismatch { left: shape.total(), right: self.dim });
        }
        shape.check_register_set(keep)?;
        let keep_shape = shape.select(keep)?;
        let kdim = keep_shape.total();
        let strides = shape.strides();
        let keep_strides: Vec<usize> = keep.iter().map(|&r| strides[r]).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&r| shape.dims()[r]).collect();
        let rest: Vec<usize> = (0..shape.len()).filter(|r| !keep.contains(r)).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&r| shape.dims()[r]).collect();
        let rest_total: usize = rest_dims.iter().product::<usize>().max(1);

        let mut keep_offsets = vec![0usize; kdim];
        for (flat, off) in keep_offsets.iter_mut().enumerate() {
            let mut rem = flat;
            let mut acc = 0usize;
            for pos in (0..keep_dims.len()).rev() {
                let digit = rem % keep_dims[pos];
                rem /= keep_dims[pos];
                acc += digit * keep_strides[pos];
            }
            *off = acc;
        }

        let mut out = CMat::zeros(kdim, kdim);
        for rflat in 0..rest_total {
            let mut rem = rflat;
            let mut base = 0usize;
            for pos in (0..rest.len()).rev() {
                let digit = rem % rest_dims[pos];
                rem /= rest_dims[pos];
                base += digit * strides[rest[pos]];
            }
            for a in 0..kdim {
                for b in 0..kdim {
                    out[(a, b)] += self.mat[(base + keep_offsets[a], base + keep_offsets[b])];
                }
            }
        }
        Ok(DensityMatrix::from_parts_unchecked(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> StateVector {
        let shape = RegisterShape::new(vec![2, 2]).unwrap();
        let amps = CVec::from_vec(vec![
            cr(FRAC_1_SQRT_2),
            C_ZERO,
            C_ZERO,
            cr(FRAC_1_SQRT_2),
        ]);
        StateVector::new(shape, amps).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = StateVector::from_amps(vec![C_ONE, C_ZERO]).unwrap();
        let one = StateVector::from_amps(vec![C_ZERO, C_ONE]).unwrap();
        let prod = zero.tensor(&one).unwrap();
        assert_eq!(prod.dim(), 4);
        assert_eq!(prod.amps()[1], C_ONE);
        assert_eq!(prod.amps()[0], C_ZERO);
    }

    #[test]
    fn tensor_trace_multiplicative() {
        let rho = DensityMatrix::from_distribution(&[0.25, 0.75]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(3);
        let joint = rho.tensor(&mixed);
        assert!((joint.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_reductions_are_maximally_mixed() {
        let rho_a = bell().reduced_density(&[0]).unwrap();
        let expect = DensityMatrix::maximally_mixed(2);
        assert!(linalg::frobenius_norm(&(rho_a.mat() - expect.mat())) < 1e-12);
        let rho_b = bell().reduced_density(&[1]).unwrap();
        assert!(linalg::frobenius_norm(&(rho_b.mat() - expect.mat())) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho_a = DensityMatrix::from_distribution(&[0.3, 0.7]).unwrap();
        let sigma_b = DensityMatrix::from_distribution(&[0.5, 0.25, 0.25]).unwrap();
        let joint = rho_a.tensor(&sigma_b);
        let shape = RegisterShape::new(vec![2, 3]).unwrap();
        let back = joint.partial_trace(&shape, &[0]).unwrap();
        assert!(linalg::frobenius_norm(&(back.mat() - rho_a.mat())) < 1e-12);
        assert!((back.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_register_sets() {
        let rho = DensityMatrix::maximally_mixed(4);
        let shape = RegisterShape::new(vec![2, 2]).unwrap();
        assert!(rho.partial_trace(&shape, &[]).is_err());
        assert!(rho.partial_trace(&shape, &[2]).is_err());
        assert!(rho.partial_trace(&shape, &[0, 0]).is_err());
    }

    #[test]
    fn apply_to_registers_matches_kron() {
        let shape = RegisterShape::new(vec![2, 3, 2]).unwrap();
        let mut amps = CVec::zeros(12);
        for i in 0..12 {
            amps[i] = C64::new((i as f64 + 1.0).sin(), (i as f64).cos());
        }
        amps /= cr(amps.norm());
        let psi = StateVector::new(shape, amps.clone()).unwrap();

        let h = CMat::from_row_slice(
            2,
            2,
            &[cr(FRAC_1_SQRT_2), cr(FRAC_1_SQRT_2), cr(FRAC_1_SQRT_2), cr(-FRAC_1_SQRT_2)],
        );
        let got = psi.apply_to_registers(&[2], &h).unwrap();
        let full = kron(&kron(&linalg::identity(2), &linalg::identity(3)), &h);
        let want = &full * &amps;
        assert!((got.amps() - want).norm() < 1e-12);

        // A middle register too.
        let u3 = linalg::unitary_with_first_column(&CVec::from_vec(vec![
            cr(0.6),
            C64::new(0.0, 0.8),
            C_ZERO,
        ]));
        let got = psi.apply_to_registers(&[1], &u3).unwrap();
        let full = kron(&kron(&linalg::identity(2), &u3), &linalg::identity(2));
        let want = &full * &amps;
        assert!((got.amps() - want).norm() < 1e-12);
    }

    #[test]
    fn apply_to_register_pair_in_given_order() {
        // Applying SWAP-like structure across non-adjacent registers.
        let shape = RegisterShape::new(vec![2, 2, 2]).unwrap();
        let psi = StateVector::basis_state(shape, &[1, 0, 0]).unwrap();
        // CNOT with control = register 0, target = register 2.
        let mut cnot = CMat::zeros(4, 4);
        cnot[(0, 0)] = C_ONE;
        cnot[(1, 1)] = C_ONE;
        cnot[(2, 3)] = C_ONE;
        cnot[(3, 2)] = C_ONE;
        let got = psi.apply_to_registers(&[0, 2], &cnot).unwrap();
        let expect = StateVector::basis_state(RegisterShape::new(vec![2, 2, 2]).unwrap(), &[1, 0, 1])
            .unwrap();
        assert!((got.amps() - expect.amps()).norm() < 1e-12);
    }

    #[test]
    fn unnormalized_states_are_fenced() {
        let phi = StateVector::max_entangled_unnormalized(3).unwrap();
        assert_eq!(phi.kind(), StateKind::Unnormalized);
        assert!(phi.to_density().is_err());
        assert!(phi.reduced_density(&[0]).is_err());
    }

    #[test]
    fn conjugate_involution() {
        let psi = StateVector::from_amps(vec![
            cr(FRAC_1_SQRT_2),
            C64::new(0.0, FRAC_1_SQRT_2),
        ])
        .unwrap();
        let back = psi.conjugate().conjugate();
        assert!((back.amps() - psi.amps()).norm() < 1e-15);
        assert_eq!(psi.conjugate().amps()[1], C64::new(0.0, -FRAC_1_SQRT_2));
    }

    #[test]
    fn density_validation() {
        // Non-Hermitian rejected.
        let m = CMat::from_row_slice(2, 2, &[cr(0.5), cr(0.3), cr(0.1), cr(0.5)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
        // Negative eigenvalue rejected.
        let m = CMat::from_row_slice(2, 2, &[cr(1.2), C_ZERO, C_ZERO, cr(-0.2)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPsd(_))));
        // Wrong trace rejected.
        let m = CMat::from_row_slice(2, 2, &[cr(0.9), C_ZERO, C_ZERO, cr(0.3)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::BadTrace(_))));
    }
}
