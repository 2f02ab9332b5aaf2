//! Bit-level signed Pauli strings and the dense gates used to synthesize
//! Clifford unitaries.
//!
//! Convention: a string is `(−1)^sign · ⊗_j w(x_j, z_j)` with
//! `w(0,0)=I, w(1,0)=X, w(0,1)=Z, w(1,1)=Y`, so every string is Hermitian
//! and two strings commute exactly when their symplectic product is 0.
//! Qubit 0 is the most significant register; internally bit `j` of the
//! masks refers to qubit `j`.

use crate::qcore::linalg::{cr, C64, CMat, CVec, C_ONE};

/// A signed n-qubit Pauli string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliString {
    pub n: usize,
    pub x: u64,
    pub z: u64,
    pub sign: bool,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0, sign: false }
    }

    pub fn from_bits(n: usize, x: u64, z: u64, sign: bool) -> Self {
        debug_assert!(n <= 64);
        Self { n, x, z, sign }
    }

    /// Symplectic product mod 2; 1 means the strings anticommute.
    pub fn symplectic(&self, other: &PauliString) -> u32 {
        (((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2) as u32
    }

    pub fn anticommutes(&self, other: &PauliString) -> bool {
        self.symplectic(other) == 1
    }

    pub fn is_identity_on(&self, mask: u64) -> bool {
        (self.x & mask) == 0 && (self.z & mask) == 0
    }

    fn bit(v: u64, j: usize) -> bool {
        v >> j & 1 == 1
    }

    /// Conjugate by H on qubit `j`: swap X and Z, Y flips sign.
    pub fn conj_h(&mut self, j: usize) {
        let xb = Self::bit(self.x, j);
        let zb = Self::bit(self.z, j);
        self.sign ^= xb && zb;
        let m = 1u64 << j;
        let x_new = (self.x & !m) | if zb { m } else { 0 };
        let z_new = (self.z & !m) | if xb { m } else { 0 };
        self.x = x_new;
        self.z = z_new;
    }

    /// Conjugate by S = diag(1, i) on qubit `j`: X → Y → −X.
    pub fn conj_s(&mut self, j: usize) {
        let xb = Self::bit(self.x, j);
        let zb = Self::bit(self.z, j);
        self.sign ^= xb && zb;
        if xb {
            self.z ^= 1u64 << j;
        }
    }

    /// Conjugate by CNOT with control `c`, target `t`.
    pub fn conj_cnot(&mut self, c: usize, t: usize) {
        let xc = Self::bit(self.x, c);
        let zt = Self::bit(self.z, t);
        let xt = Self::bit(self.x, t);
        let zc = Self::bit(self.z, c);
        self.sign ^= xc && zt && (xt == zc);
        if xc {
            self.x ^= 1u64 << t;
        }
        if zt {
            self.z ^= 1u64 << c;
        }
    }

    pub fn conj_swap(&mut self, a: usize, b: usize) {
        let xa = Self::bit(self.x, a);
        let xb = Self::bit(self.x, b);
        let za = Self::bit(self.z, a);
        let zb = Self::bit(self.z, b);
        let ma = 1u64 << a;
        let mb = 1u64 << b;
        self.x = (self.x & !(ma | mb)) | if xb { ma } else { 0 } | if xa { mb } else { 0 };
        self.z = (self.z & !(ma | mb)) | if zb { ma } else { 0 } | if za { mb } else { 0 };
    }

    /// Conjugate by the Pauli gate X/Y/Z on qubit `j`.
    pub fn conj_x(&mut self, j: usize) {
        self.sign ^= Self::bit(self.z, j);
    }

    pub fn conj_z(&mut self, j: usize) {
        self.sign ^= Self::bit(self.x, j);
    }

    pub fn conj_y(&mut self, j: usize) {
        self.sign ^= Self::bit(self.x, j) ^ Self::bit(self.z, j);
    }

    pub fn conj_gate(&mut self, g: Gate) {
        match g {
            Gate::H(j) => self.conj_h(j),
            Gate::S(j) | Gate::SInv(j) => {
                // S and S† act identically up to the sign of the Y image;
                // S†: X → −Y → X. Handle separately.
                if matches!(g, Gate::S(_)) {
                    self.conj_s(j);
                } else {
                    // S† = Z · S · Z up to phase; conjugation: X → −Y, Y → X.
                    let xb = Self::bit(self.x, j);
                    let zb = Self::bit(self.z, j);
                    self.sign ^= xb && !zb;
                    if xb {
                        self.z ^= 1u64 << j;
                    }
                }
            }
            Gate::Cnot(c, t) => self.conj_cnot(c, t),
            Gate::Swap(a, b) => self.conj_swap(a, b),
            Gate::X(j) => self.conj_x(j),
            Gate::Y(j) => self.conj_y(j),
            Gate::Z(j) => self.conj_z(j),
        }
    }

    /// Dense matrix of the string, qubit 0 most significant.
    pub fn to_matrix(&self) -> CMat {
        let dim = 1usize << self.n;
        let mut mat = CMat::zeros(dim, dim);
        for col in 0..dim {
            let (row, amp) = self.apply_to_basis(col);
            mat[(row, col)] = amp;
        }
        mat
    }

    /// Image of `|col⟩` under the string: `(row, amplitude)`.
    pub fn apply_to_basis(&self, col: usize) -> (usize, C64) {
        let mut amp = if self.sign { -C_ONE } else { C_ONE };
        let mut row = 0usize;
        for j in 0..self.n {
            // Qubit j sits at bit (n-1-j) of the state index.
            let state_bit = col >> (self.n - 1 - j) & 1;
            let xb = Self::bit(self.x, j);
            let zb = Self::bit(self.z, j);
            let out_bit = state_bit ^ usize::from(xb);
            let factor = match (xb, zb) {
                (false, false) => C_ONE,
                (true, false) => C_ONE,
                // Z |b⟩ = (−1)^b |b⟩
                (false, true) => {
                    if state_bit == 1 {
                        -C_ONE
                    } else {
                        C_ONE
                    }
                }
                // Y |0⟩ = i|1⟩, Y |1⟩ = −i|0⟩
                (true, true) => {
                    if state_bit == 0 {
                        C64::new(0.0, 1.0)
                    } else {
                        C64::new(0.0, -1.0)
                    }
                }
            };
            amp *= factor;
            row |= out_bit << (self.n - 1 - j);
        }
        (row, amp)
    }
}

/// Clifford circuit gates on qubit indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    SInv(usize),
    Cnot(usize, usize),
    Swap(usize, usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl Gate {
    pub fn dagger(self) -> Gate {
        match self {
            Gate::S(j) => Gate::SInv(j),
            Gate::SInv(j) => Gate::S(j),
            other => other,
        }
    }
}

/// Apply a gate in place to a dense state over `n` qubits (qubit 0 most
/// significant).
pub fn apply_gate(v: &mut CVec, n: usize, g: Gate) {
    let mask = |j: usize| 1usize << (n - 1 - j);
    match g {
        Gate::H(j) => {
            let m = mask(j);
            let s = cr(std::f64::consts::FRAC_1_SQRT_2);
            for idx in 0..v.len() {
                if idx & m == 0 {
                    let a = v[idx];
                    let b = v[idx | m];
                    v[idx] = (a + b) * s;
                    v[idx | m] = (a - b) * s;
                }
            }
        }
        Gate::S(j) => {
            let m = mask(j);
            for idx in 0..v.len() {
                if idx & m != 0 {
                    v[idx] *= C64::new(0.0, 1.0);
                }
            }
        }
        Gate::SInv(j) => {
            let m = mask(j);
            for idx in 0..v.len() {
                if idx & m != 0 {
                    v[idx] *= C64::new(0.0, -1.0);
                }
            }
        }
        Gate::Cnot(c, t) => {
            let mc = mask(c);
            let mt = mask(t);
            for idx in 0..v.len() {
                if idx & mc != 0 && idx & mt == 0 {
                    let other = idx | mt;
                    let tmp = v[idx];
                    v[idx] = v[other];
                    v[other] = tmp;
                }
            }
        }
        Gate::Swap(a, b) => {
            let ma = mask(a);
            let mb = mask(b);
            for idx in 0..v.len() {
                if idx & ma != 0 && idx & mb == 0 {
                    let other = (idx & !ma) | mb;
                    let tmp = v[idx];
                    v[idx] = v[other];
                    v[other] = tmp;
                }
            }
        }
        Gate::X(j) => {
            let m = mask(j);
            for idx in 0..v.len() {
                if idx & m == 0 {
                    let other = idx | m;
                    let tmp = v[idx];
                    v[idx] = v[other];
                    v[other] = tmp;
                }
            }
        }
        Gate::Y(j) => {
            let m = mask(j);
            for idx in 0..v.len() {
                if idx & m == 0 {
                    let other = idx | m;
                    let a = v[idx];
                    let b = v[other];
                    v[idx] = C64::new(0.0, -1.0) * b;
                    v[other] = C64::new(0.0, 1.0) * a;
                }
            }
        }
        Gate::Z(j) => {
            let m = mask(j);
            for idx in 0..v.len() {
                if idx & m != 0 {
                    v[idx] = -v[idx];
                }
            }
        }
    }
}

/// Dense matrix of a gate circuit applied left to right (first gate acts
/// first).
pub fn circuit_matrix(n: usize, gates: &[Gate]) -> CMat {
    let dim = 1usize << n;
    let mut mat = CMat::zeros(dim, dim);
    for col in 0..dim {
        let mut v = CVec::zeros(dim);
        v[col] = C_ONE;
        for &g in gates {
            apply_gate(&mut v, n, g);
        }
        mat.set_column(col, &v);
    }
    mat
}

/// `H^{⊗n}`.
pub fn hadamard_all(n: usize) -> CMat {
    let dim = 1usize << n;
    let scale = (dim as f64).sqrt().recip();
    CMat::from_fn(dim, dim, |i, j| {
        let parity = (i & j).count_ones() % 2;
        if parity == 0 {
            cr(scale)
        } else {
            cr(-scale)
        }
    })
}

/// Rotation taking the eigenbasis of the given single-qubit axis to the
/// computational basis (apply, then measure).
pub fn axis_rotation(axis: MeasureAxis) -> CMat {
    use std::f64::consts::FRAC_1_SQRT_2;
    match axis {
        MeasureAxis::Z => CMat::identity(2, 2),
        MeasureAxis::X => CMat::from_row_slice(
            2,
            2,
            &[cr(FRAC_1_SQRT_2), cr(FRAC_1_SQRT_2), cr(FRAC_1_SQRT_2), cr(-FRAC_1_SQRT_2)],
        ),
        MeasureAxis::Y => CMat::from_row_slice(
            2,
            2,
            &[
                cr(FRAC_1_SQRT_2),
                C64::new(0.0, -FRAC_1_SQRT_2),
                cr(FRAC_1_SQRT_2),
                C64::new(0.0, FRAC_1_SQRT_2),
            ],
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureAxis {
    Z,
    X,
    Y,
}

impl MeasureAxis {
    pub fn as_char(self) -> char {
        match self {
            MeasureAxis::Z => 'Z',
            MeasureAxis::X => 'X',
            MeasureAxis::Y => 'Y',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'Z' => Some(MeasureAxis::Z),
            'X' => Some(MeasureAxis::X),
            'Y' => Some(MeasureAxis::Y),
            _ => None,
        }
    }

    pub fn all() -> [MeasureAxis; 3] {
        [MeasureAxis::Z, MeasureAxis::X, MeasureAxis::Y]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{frobenius_norm, unitarity_defect};

    fn gate_matrix(n: usize, g: Gate) -> CMat {
        circuit_matrix(n, &[g])
    }

    #[test]
    fn pauli_string_matrices_are_hermitian_unitary() {
        for code in 0..16u64 {
            let p = PauliString::from_bits(2, code & 3, code >> 2, false);
            let m = p.to_matrix();
            assert!(unitarity_defect(&m) < 1e-12);
            assert!(frobenius_norm(&(&m - m.adjoint())) < 1e-12);
        }
    }

    #[test]
    fn commutation_matches_symplectic() {
        for a in 0..16u64 {
            for b in 0..16u64 {
                let p = PauliString::from_bits(2, a & 3, a >> 2, false);
                let q = PauliString::from_bits(2, b & 3, b >> 2, false);
                let pm = p.to_matrix();
                let qm = q.to_matrix();
                let comm = &pm * &qm - &qm * &pm;
                let commutes = frobenius_norm(&comm) < 1e-12;
                assert_eq!(commutes, !p.anticommutes(&q), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn conjugation_rules_match_dense() {
        // Every gate × every 2-qubit signed Pauli: G P G† must equal the
        // bit-level conjugation exactly.
        let gates = [
            Gate::H(0),
            Gate::H(1),
            Gate::S(0),
            Gate::S(1),
            Gate::SInv(0),
            Gate::Cnot(0, 1),
            Gate::Cnot(1, 0),
            Gate::Swap(0, 1),
            Gate::X(0),
            Gate::Y(1),
            Gate::Z(0),
        ];
        for &g in &gates {
            let gm = gate_matrix(2, g);
            for code in 0..16u64 {
                for sign in [false, true] {
                    let p = PauliString::from_bits(2, code & 3, code >> 2, sign);
                    let mut q = p;
                    q.conj_gate(g);
                    let want = &gm * p.to_matrix() * gm.adjoint();
                    let got = q.to_matrix();
                    assert!(
                        frobenius_norm(&(&want - &got)) < 1e-12,
                        "gate {g:?} code {code} sign {sign}"
                    );
                }
            }
        }
    }

    #[test]
    fn circuit_matrix_composes_in_order() {
        // X then H on one qubit: matrix should be H·X.
        let m = circuit_matrix(1, &[Gate::X(0), Gate::H(0)]);
        let want = gate_matrix(1, Gate::H(0)) * gate_matrix(1, Gate::X(0));
        assert!(frobenius_norm(&(m - want)) < 1e-12);
    }

    #[test]
    fn hadamard_all_matches_circuit() {
        let m = hadamard_all(3);
        let c = circuit_matrix(3, &[Gate::H(0), Gate::H(1), Gate::H(2)]);
        assert!(frobenius_norm(&(m - c)) < 1e-12);
    }

    #[test]
    fn axis_rotations_diagonalize() {
        // Rotating the axis eigenbasis must give computational outcomes.
        for axis in MeasureAxis::all() {
            let r = axis_rotation(axis);
            assert!(unitarity_defect(&r) < 1e-12);
        }
        let y = axis_rotation(MeasureAxis::Y);
        let plus_i = CVec::from_vec(vec![
            cr(std::f64::consts::FRAC_1_SQRT_2),
            C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        ]);
        let out = &y * plus_i;
        assert!((out[0].norm() - 1.0).abs() < 1e-12);
        assert!(out[1].norm() < 1e-12);
    }
}
