//! Maximal sets of mutually unbiased bases.
//!
//! Prime dimensions use the quadratic Gauss-sum bases
//! `|e_i^{(r)}⟩ = p^{-1/2} Σ_j ω^{r j² + i j} |j⟩` plus the computational
//! basis (dimension 2 is the hard-coded {Z, X, Y} triple). Power-of-two
//! dimensions partition the n-qubit Pauli group into `2ⁿ+1` maximal
//! commuting classes through GF(2ⁿ) arithmetic with tabulated irreducible
//! polynomials, and diagonalize each class. Every construction is verified
//! numerically before it is returned.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result, TOL_ALGEBRAIC};
use crate::qcore::linalg::{cr, herm_eig, C64, CMat, C_ONE};

use super::pauli::PauliString;

/// A maximal set of `N+1` mutually unbiased bases; each entry's columns are
/// the basis vectors.
#[derive(Debug, Clone)]
pub struct MubSet {
    dim: usize,
    bases: Vec<CMat>,
}

/// Deviation report from [`MubSet::verify`].
#[derive(Debug, Clone, Copy)]
pub struct MubReport {
    /// Max over basis pairs r≠s and vectors i,j of `||⟨e_i|e_j⟩|² − 1/N|`.
    pub max_deviation: f64,
    /// Max deviation of any single basis from orthonormality.
    pub max_orthonormality_defect: f64,
}

impl MubSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn basis(&self, r: usize) -> &CMat {
        &self.bases[r]
    }

    pub fn bases(&self) -> &[CMat] {
        &self.bases
    }

    /// Construction for prime `p`.
    pub fn for_prime(p: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let set = if p == 2 { Self::qubit_triple() } else { Self::odd_prime(p) };
        set.verified()
    }

    /// Construction for `n` qubits (dimension 2ⁿ), `n ≤ 5`.
    pub fn for_qubits(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::Unsupported(format!(
                "qubit MUB construction tabulated for 1 ≤ n ≤ 5, got {n}"
            )));
        }
        let set = Self::from_pauli_partition(n);
        set.verified()
    }

    fn verified(self) -> Result<Self> {
        let report = self.verify();
        if report.max_deviation > TOL_ALGEBRAIC || report.max_orthonormality_defect > TOL_ALGEBRAIC
        {
            return Err(Error::ConstructionFailed(format!(
                "MUB set for N={} deviates by {:e} (orthonormality {:e})",
                self.dim, report.max_deviation, report.max_orthonormality_defect
            )));
        }
        Ok(self)
    }

    /// The unique qubit triple up to phases: computational, Hadamard,
    /// circular.
    fn qubit_triple() -> Self {
        let z = CMat::identity(2, 2);
        let x = CMat::from_row_slice(
            2,
            2,
            &[cr(FRAC_1_SQRT_2), cr(FRAC_1_SQRT_2), cr(FRAC_1_SQRT_2), cr(-FRAC_1_SQRT_2)],
        );
        let y = CMat::from_row_slice(
            2,
            2,
            &[
                cr(FRAC_1_SQRT_2),
                cr(FRAC_1_SQRT_2),
                C64::new(0.0, FRAC_1_SQRT_2),
                C64::new(0.0, -FRAC_1_SQRT_2),
            ],
        );
        Self { dim: 2, bases: vec![z, x, y] }
    }

    fn odd_prime(p: usize) -> Self {
        let mut bases = Vec::with_capacity(p + 1);
        bases.push(CMat::identity(p, p));
        let scale = (p as f64).sqrt().recip();
        for r in 0..p {
            let b = CMat::from_fn(p, p, |j, i| {
                let exponent = (r * j * j + i * j) % p;
                let angle = 2.0 * PI * exponent as f64 / p as f64;
                C64::new(angle.cos() * scale, angle.sin() * scale)
            });
            bases.push(b);
        }
        Self { dim: p, bases }
    }

    fn from_pauli_partition(n: usize) -> Self {
        let field = Gf2n::new(n);
        let dim = 1usize << n;
        let mut bases = Vec::with_capacity(dim + 1);
        for class in pauli_partition_generators(&field) {
            bases.push(common_eigenbasis(n, &class));
        }
        Self { dim, bases }
    }

    pub fn verify(&self) -> MubReport {
        let n = self.dim as f64;
        let mut max_deviation = 0.0f64;
        let mut max_ortho = 0.0f64;
        for (r, b) in self.bases.iter().enumerate() {
            // Orthonormality of each basis.
            let gram = b.adjoint() * b;
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let expect = if i == j { C_ONE } else { C64::new(0.0, 0.0) };
                    max_ortho = max_ortho.max((gram[(i, j)] - expect).norm());
                }
            }
            for s in r + 1..self.bases.len() {
                let overlaps = b.adjoint() * &self.bases[s];
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        let dev = (overlaps[(i, j)].norm_sqr() - 1.0 / n).abs();
                        max_deviation = max_deviation.max(dev);
                    }
                }
            }
        }
        MubReport { max_deviation, max_orthonormality_defect: max_ortho }
    }
}

pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2usize;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// GF(2ⁿ) in the polynomial basis, with the reduction polynomial tabulated.
struct Gf2n {
    n: usize,
    poly: u64,
}

impl Gf2n {
    fn new(n: usize) -> Self {
        // Irreducible polynomials over F₂ (leading bit included).
        let poly = match n {
            1 => 0b11,
            2 => 0b111,
            3 => 0b1011,
            4 => 0b10011,
            5 => 0b100101,
            _ => unreachable!("callers cap n at 5"),
        };
        Self { n, poly }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let mut acc = 0u64;
        for i in 0..self.n {
            if b >> i & 1 == 1 {
                acc ^= a << i;
            }
        }
        for bit in (self.n..2 * self.n).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= self.poly << (bit - self.n);
            }
        }
        acc
    }

    /// Field trace, landing in {0, 1}.
    fn trace(&self, a: u64) -> u64 {
        let mut acc = 0u64;
        let mut cur = a;
        for _ in 0..self.n {
            acc ^= cur;
            cur = self.mul(cur, cur);
        }
        debug_assert!(acc <= 1, "trace must land in the prime field");
        acc
    }

    /// Columns (as bitmasks) of multiplication by `mu`.
    fn mul_matrix(&self, mu: u64) -> Vec<u64> {
        (0..self.n).map(|i| self.mul(mu, 1 << i)).collect()
    }

    /// Columns of the Gram matrix of the trace form `G_{ij} = tr(e_i e_j)`.
    fn gram(&self) -> Vec<u64> {
        (0..self.n)
            .map(|j| {
                let mut col = 0u64;
                for i in 0..self.n {
                    col |= self.trace(self.mul(1 << i, 1 << j)) << i;
                }
                col
            })
            .collect()
    }
}

fn mat_vec_f2(cols: &[u64], v: u64) -> u64 {
    let mut acc = 0u64;
    for (i, &col) in cols.iter().enumerate() {
        if v >> i & 1 == 1 {
            acc ^= col;
        }
    }
    acc
}

fn mat_mul_f2(a: &[u64], b: &[u64]) -> Vec<u64> {
    b.iter().map(|&col| mat_vec_f2(a, col)).collect()
}

/// Generator sets of the `2ⁿ+1` maximal commuting Pauli classes.
///
/// The classes are the Lagrangian subspaces `{(a, S_μ a)}` for the symmetric
/// matrices `S_μ = G·M_μ` (G the trace-form Gram matrix, M_μ multiplication
/// by μ), plus the all-Z class `{(0, b)}`.
fn pauli_partition_generators(field: &Gf2n) -> Vec<Vec<PauliString>> {
    let n = field.n;
    let gram = field.gram();
    let mut classes = Vec::with_capacity((1usize << n) + 1);
    // All-Z class.
    classes.push((0..n).map(|k| PauliString::from_bits(n, 0, 1 << k, false)).collect());
    for mu in 0..(1u64 << n) {
        let s = mat_mul_f2(&gram, &field.mul_matrix(mu));
        // S must be symmetric for the class to commute.
        for i in 0..n {
            for j in 0..n {
                debug_assert_eq!(s[j] >> i & 1, s[i] >> j & 1, "S_mu not symmetric");
            }
        }
        let class = (0..n)
            .map(|k| PauliString::from_bits(n, 1 << k, mat_vec_f2(&s, 1 << k), false))
            .collect();
        classes.push(class);
    }
    classes
}

/// Joint eigenbasis of a commuting generator set, ordered canonically by
/// the eigenvalues of `Σ_k 3^{k+1} W_k` (distinct by 3-adic uniqueness).
fn common_eigenbasis(n: usize, generators: &[PauliString]) -> CMat {
    let dim = 1usize << n;
    let mut h = CMat::zeros(dim, dim);
    let mut coeff = 1.0;
    for g in generators {
        debug_assert!(generators.iter().all(|o| !g.anticommutes(o)));
        coeff *= 3.0;
        h += g.to_matrix().map(|z| z * coeff);
    }
    let (_, vecs) = herm_eig(&h);
    vecs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(5));
        assert!(is_prime(13));
        assert!(!is_prime(1));
        assert!(!is_prime(4));
        assert!(!is_prime(9));
    }

    #[test]
    fn qubit_triple_is_unbiased() {
        let set = MubSet::for_prime(2).unwrap();
        assert_eq!(set.len(), 3);
        let report = set.verify();
        assert!(report.max_deviation < 1e-12, "{report:?}");
    }

    #[test]
    fn odd_prime_constructions() {
        for p in [3usize, 5, 7] {
            let set = MubSet::for_prime(p).unwrap();
            assert_eq!(set.len(), p + 1);
            let report = set.verify();
            assert!(report.max_deviation < 1e-9, "p={p}: {report:?}");
            assert!(report.max_orthonormality_defect < 1e-12);
        }
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(MubSet::for_prime(6), Err(Error::NotPrime(6))));
        assert!(matches!(MubSet::for_prime(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn qubit_power_constructions() {
        for n in 1..=4usize {
            let set = MubSet::for_qubits(n).unwrap();
            assert_eq!(set.len(), (1 << n) + 1);
            let report = set.verify();
            assert!(report.max_deviation < 1e-9, "n={n}: {report:?}");
        }
    }

    #[test]
    fn five_qubit_construction() {
        let set = MubSet::for_qubits(5).unwrap();
        assert_eq!(set.len(), 33);
        assert!(set.verify().max_deviation < 1e-9);
    }

    #[test]
    fn unsupported_qubit_counts_rejected() {
        assert!(MubSet::for_qubits(0).is_err());
        assert!(MubSet::for_qubits(6).is_err());
    }

    #[test]
    fn corrupted_basis_is_detected() {
        let mut set = MubSet::for_prime(3).unwrap();
        // Rotate one vector of basis 1 towards a vector of basis 2.
        let stolen = set.bases[2].column(0).into_owned();
        let eps = 0.05f64;
        let mut col = set.bases[1].column(0).into_owned();
        col = col.map(|z| z * cr((1.0 - eps * eps).sqrt())) + stolen.map(|z| z * cr(eps));
        let n = col.norm();
        let col = col.map(|z| z / cr(n));
        set.bases[1].set_column(0, &col);
        let report = set.verify();
        assert!(report.max_deviation > eps * eps / 2.0, "{report:?}");
    }
}
