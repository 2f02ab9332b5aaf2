//! Generator instances for the extrapolation game: weighted challenge
//! vectors paired with target message states.

use crate::error::{Error, Result, TOL_ALGEBRAIC};
use crate::qcore::linalg::{cr, CMat, CVec, C_ONE, C_ZERO};
use crate::qcore::{RegisterShape, RngStream, StateVector};

/// One challenge branch: weight `β_s`, challenge vector on the S register,
/// and the m-qubit target state the solver must produce.
#[derive(Debug, Clone)]
pub struct Challenge {
    pub weight: f64,
    pub vector: CVec,
    pub target: StateVector,
}

/// Whether the challenge set is the computational basis or a general
/// orthonormal (cloneable) set.
#[derive(Debug, Clone)]
pub enum ChallengeBasis {
    /// Every challenge is a computational basis vector; `indices[s]` is its
    /// position.
    Classical { indices: Vec<usize> },
    /// General orthonormal challenges; `completion` is a unitary whose
    /// column `s` is the s-th challenge vector (remaining columns complete
    /// the basis), used as the unitary completion of the clone isometry.
    Cloneable { completion: CMat },
}

/// A cloneable→quantum extrapolation instance.
#[derive(Debug, Clone)]
pub struct GenInstance {
    challenges: Vec<Challenge>,
    s_dim: usize,
    msg_qubits: usize,
    basis: ChallengeBasis,
}

impl GenInstance {
    /// Validates weights (`Σ β² = 1`), challenge orthonormality, and target
    /// normalization, then classifies the challenge basis.
    pub fn new(challenges: Vec<Challenge>, s_dim: usize, msg_qubits: usize) -> Result<Self> {
        Self::with_tol(challenges, s_dim, msg_qubits, TOL_ALGEBRAIC)
    }

    pub fn with_tol(
        challenges: Vec<Challenge>,
        s_dim: usize,
        msg_qubits: usize,
        tol: f64,
    ) -> Result<Self> {
        if challenges.is_empty() {
            return Err(Error::InvalidInstance("no challenges".into()));
        }
        if challenges.len() > s_dim {
            return Err(Error::InvalidInstance(format!(
                "{} challenges cannot be orthonormal in dimension {s_dim}",
                challenges.len()
            )));
        }
        let msg_dim = 1usize << msg_qubits;
        let weight_sq: f64 = challenges.iter().map(|c| c.weight * c.weight).sum();
        if (weight_sq - 1.0).abs() > tol {
            return Err(Error::InvalidInstance(format!(
                "weights are not normalized: Σβ² = {weight_sq}"
            )));
        }
        for (s, c) in challenges.iter().enumerate() {
            if c.weight < 0.0 {
                return Err(Error::InvalidInstance(format!("weight {s} is negative")));
            }
            if c.vector.len() != s_dim {
                return Err(Error::InvalidInstance(format!(
                    "challenge {s} has dimension {} instead of {s_dim}",
                    c.vector.len()
                )));
            }
            if c.target.dim() != msg_dim {
                return Err(Error::InvalidInstance(format!(
                    "target {s} has dimension {} instead of {msg_dim}",
                    c.target.dim()
                )));
            }
            c.target.require_normalized()?;
        }
        for i in 0..challenges.len() {
            for j in 0..challenges.len() {
                let inner = challenges[i].vector.dotc(&challenges[j].vector);
                let expect = if i == j { C_ONE } else { C_ZERO };
                if (inner - expect).norm() > tol {
                    return Err(Error::InvalidInstance(format!(
                        "challenges {i} and {j} are not orthonormal (inner product {inner})"
                    )));
                }
            }
        }
        let basis = classify_basis(&challenges, s_dim, tol)?;
        Ok(Self { challenges, s_dim, msg_qubits, basis })
    }

    pub fn challenges(&self) -> &[Challenge] {
        &self.challenges
    }

    pub fn s_dim(&self) -> usize {
        self.s_dim
    }

    pub fn msg_qubits(&self) -> usize {
        self.msg_qubits
    }

    pub fn msg_dim(&self) -> usize {
        1 << self.msg_qubits
    }

    pub fn basis(&self) -> &ChallengeBasis {
        &self.basis
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.basis, ChallengeBasis::Classical { .. })
    }

    /// Unitary completion of the clone map's basis change: column `s` holds
    /// the s-th challenge. For classical instances this is a permutation.
    pub fn clone_completion(&self) -> CMat {
        match &self.basis {
            ChallengeBasis::Classical { indices } => {
                // Permutation placing challenge s at column s.
                let mut used = vec![false; self.s_dim];
                let mut cols: Vec<usize> = Vec::with_capacity(self.s_dim);
                for &idx in indices {
                    cols.push(idx);
                    used[idx] = true;
                }
                for (idx, &u) in used.iter().enumerate() {
                    if !u {
                        cols.push(idx);
                    }
                }
                let mut w = CMat::zeros(self.s_dim, self.s_dim);
                for (col, &row) in cols.iter().enumerate() {
                    w[(row, col)] = C_ONE;
                }
                w
            }
            ChallengeBasis::Cloneable { completion } => completion.clone(),
        }
    }

    /// The joint state `Σ_s β_s |chal_s⟩_S |ψ_s⟩_M` on (S, M).
    pub fn gen_state(&self) -> Result<StateVector> {
        let msg_dim = self.msg_dim();
        let shape = RegisterShape::new(vec![self.s_dim, msg_dim])?;
        let mut amps = CVec::zeros(self.s_dim * msg_dim);
        for c in &self.challenges {
            for i in 0..self.s_dim {
                if c.vector[i] == C_ZERO {
                    continue;
                }
                for x in 0..msg_dim {
                    amps[i * msg_dim + x] += c.vector[i] * c.target.amps()[x] * cr(c.weight);
                }
            }
        }
        StateVector::new(shape, amps)
    }

    /// The purified challenge state `Σ_s β_s |chal_s⟩_S |ψ_s⟩_M |chal_s⟩_{S'}`.
    pub fn purified_challenge_state(&self) -> Result<StateVector> {
        let msg_dim = self.msg_dim();
        let shape = RegisterShape::new(vec![self.s_dim, msg_dim, self.s_dim])?;
        let mut amps = CVec::zeros(self.s_dim * msg_dim * self.s_dim);
        for c in &self.challenges {
            for i in 0..self.s_dim {
                for x in 0..msg_dim {
                    for j in 0..self.s_dim {
                        let a = c.vector[i] * c.target.amps()[x] * c.vector[j] * cr(c.weight);
                        if a != C_ZERO {
                            amps[(i * msg_dim + x) * self.s_dim + j] += a;
                        }
                    }
                }
            }
        }
        StateVector::new(shape, amps)
    }
}

fn classify_basis(challenges: &[Challenge], s_dim: usize, tol: f64) -> Result<ChallengeBasis> {
    let mut indices = Vec::with_capacity(challenges.len());
    let mut classical = true;
    'outer: for c in challenges {
        for i in 0..s_dim {
            if (c.vector[i].norm() - 1.0).abs() < tol {
                indices.push(i);
                continue 'outer;
            }
        }
        classical = false;
        break;
    }
    if classical {
        return Ok(ChallengeBasis::Classical { indices });
    }
    // Complete the challenge set to a unitary by Gram–Schmidt against the
    // computational basis.
    let mut cols: Vec<CVec> = challenges.iter().map(|c| c.vector.clone()).collect();
    for i in 0..s_dim {
        if cols.len() == s_dim {
            break;
        }
        let mut v = CVec::zeros(s_dim);
        v[i] = C_ONE;
        for c in &cols {
            let overlap = c.dotc(&v);
            v -= c.map(|z| z * overlap);
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v.map(|z| z / cr(norm)));
        }
    }
    if cols.len() != s_dim {
        return Err(Error::InvalidInstance("failed to complete challenge basis".into()));
    }
    let completion = CMat::from_columns(&cols);
    Ok(ChallengeBasis::Cloneable { completion })
}

/// Single-challenge instance with target `|0…0⟩`: both commitment branches
/// measure the same state, so hiding distance is exactly 0.
pub fn degenerate_instance(msg_qubits: usize) -> Result<GenInstance> {
    let shape = RegisterShape::single(1 << msg_qubits)?;
    GenInstance::new(
        vec![Challenge {
            weight: 1.0,
            vector: CVec::from_element(1, C_ONE),
            target: StateVector::basis_state(shape, &[0])?,
        }],
        1,
        msg_qubits,
    )
}

/// Single-challenge instance with target `|1⟩` on one message qubit.
pub fn excited_instance() -> Result<GenInstance> {
    let shape = RegisterShape::single(2)?;
    GenInstance::new(
        vec![Challenge {
            weight: 1.0,
            vector: CVec::from_element(1, C_ONE),
            target: StateVector::basis_state(shape, &[1])?,
        }],
        1,
        1,
    )
}

/// Two classical challenges with conjugate-basis targets `|0⟩` and `|+⟩`.
pub fn bb84_instance() -> Result<GenInstance> {
    let w = std::f64::consts::FRAC_1_SQRT_2;
    let zero = StateVector::from_amps(vec![C_ONE, C_ZERO])?;
    let plus = StateVector::from_amps(vec![cr(w), cr(w)])?;
    let e = |i: usize| {
        let mut v = CVec::zeros(2);
        v[i] = C_ONE;
        v
    };
    GenInstance::new(
        vec![
            Challenge { weight: w, vector: e(0), target: zero },
            Challenge { weight: w, vector: e(1), target: plus },
        ],
        2,
        1,
    )
}

/// Haar-random classical instance: `count` challenges in dimension `s_dim`
/// with Haar targets and random weights.
pub fn haar_classical_instance(
    count: usize,
    s_dim: usize,
    msg_qubits: usize,
    stream: &mut RngStream,
) -> Result<GenInstance> {
    if count == 0 || count > s_dim {
        return Err(Error::InvalidArgument(format!(
            "cannot place {count} orthonormal challenges in dimension {s_dim}"
        )));
    }
    let raw: Vec<f64> = (0..count).map(|_| stream.uniform_f64() + 0.05).collect();
    let total: f64 = raw.iter().sum();
    let mut challenges = Vec::with_capacity(count);
    for (s, r) in raw.into_iter().enumerate() {
        let mut v = CVec::zeros(s_dim);
        v[s] = C_ONE;
        challenges.push(Challenge {
            weight: (r / total).sqrt(),
            vector: v,
            target: stream.haar_state(1 << msg_qubits)?,
        });
    }
    GenInstance::new(challenges, s_dim, msg_qubits)
}

/// A genuinely non-classical (cloneable) instance: challenges in the
/// two-dimensional Fourier basis with Haar targets.
pub fn cloneable_fourier_instance(stream: &mut RngStream) -> Result<GenInstance> {
    let w = std::f64::consts::FRAC_1_SQRT_2;
    let plus = CVec::from_vec(vec![cr(w), cr(w)]);
    let minus = CVec::from_vec(vec![cr(w), cr(-w)]);
    GenInstance::new(
        vec![
            Challenge { weight: w, vector: plus, target: stream.haar_state(2)? },
            Challenge { weight: w, vector: minus, target: stream.haar_state(2)? },
        ],
        2,
        1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::unitarity_defect;

    #[test]
    fn builtin_instances_validate() {
        assert!(degenerate_instance(1).is_ok());
        assert!(excited_instance().is_ok());
        let bb84 = bb84_instance().unwrap();
        assert!(bb84.is_classical());
        assert_eq!(bb84.challenges().len(), 2);
        let mut stream = RngStream::from_seed(5);
        let haar = haar_classical_instance(3, 4, 1, &mut stream).unwrap();
        assert!(haar.is_classical());
        let cl = cloneable_fourier_instance(&mut stream).unwrap();
        assert!(!cl.is_classical());
    }

    #[test]
    fn completion_is_unitary_with_challenge_columns() {
        let mut stream = RngStream::from_seed(6);
        let inst = cloneable_fourier_instance(&mut stream).unwrap();
        let w = inst.clone_completion();
        assert!(unitarity_defect(&w) < 1e-9);
        for (s, c) in inst.challenges().iter().enumerate() {
            let col = w.column(s).into_owned();
            assert!((col - &c.vector).norm() < 1e-9);
        }
        // Classical instances get a permutation.
        let bb84 = bb84_instance().unwrap();
        let w = bb84.clone_completion();
        assert!(unitarity_defect(&w) < 1e-12);
    }

    #[test]
    fn bad_instances_rejected() {
        let shape = RegisterShape::single(2).unwrap();
        let t = StateVector::basis_state(shape, &[0]).unwrap();
        // Unnormalized weights.
        let c = Challenge { weight: 0.5, vector: CVec::from_element(1, C_ONE), target: t.clone() };
        assert!(GenInstance::new(vec![c], 1, 1).is_err());
        // Non-orthogonal challenges.
        let v = CVec::from_vec(vec![C_ONE, C_ZERO]);
        let bad = GenInstance::new(
            vec![
                Challenge {
                    weight: std::f64::consts::FRAC_1_SQRT_2,
                    vector: v.clone(),
                    target: t.clone(),
                },
                Challenge { weight: std::f64::consts::FRAC_1_SQRT_2, vector: v, target: t.clone() },
            ],
            2,
            1,
        );
        assert!(bad.is_err());
        // Too many challenges for the dimension.
        let e = |i: usize| {
            let mut v = CVec::zeros(1);
            if i == 0 {
                v[0] = C_ONE;
            }
            v
        };
        let bad = GenInstance::new(
            vec![
                Challenge { weight: 0.8, vector: e(0), target: t.clone() },
                Challenge { weight: 0.6, vector: e(1), target: t },
            ],
            1,
            1,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn gen_state_matches_weights() {
        let inst = bb84_instance().unwrap();
        let gen = inst.gen_state().unwrap();
        assert!((gen.norm() - 1.0).abs() < 1e-12);
        // ⟨0, 0| component = β_0 ⟨0|ψ_0⟩ = 1/√2.
        assert!((gen.amps()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let purified = inst.purified_challenge_state().unwrap();
        assert!((purified.norm() - 1.0).abs() < 1e-12);
    }
}
