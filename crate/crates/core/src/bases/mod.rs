//! Keyed families of measurement bases `{Rand_k}`.
//!
//! A family assigns to every key a unitary; measuring a state "in basis k"
//! means applying `Rand_k` and reading out the computational basis, so the
//! outcome distribution is the diagonal of `Rand_k ρ Rand_k†` and the
//! post-measurement (pinched) state lives in the original space.

mod clifford;
mod mub;
pub mod pauli;

pub use clifford::{clifford_circuit, clifford_matrix, group_order, CliffordIndex};
pub use mub::{is_prime, MubReport, MubSet};

use crate::error::{Error, Result, TOL_ALGEBRAIC};
use crate::qcore::linalg::{cr, unitarity_defect, CMat, CVec, C_ONE, C_ZERO};
use crate::qcore::{DensityMatrix, RngStream, StateVector};

use pauli::{hadamard_all, MeasureAxis, PauliString};

/// Largest key set that [`BasisFamily::enumerate_keys`] will materialize.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

/// What a family is made of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// The `p+1` maximal MUBs in prime dimension `p`.
    MubPrime { p: usize },
    /// The `2ⁿ+1` maximal MUBs on `n` qubits.
    MubQubits { n: usize },
    /// Uniform n-qubit Cliffords (exact 2-design).
    Clifford { n: usize },
    /// Random ±1 diagonal then Hadamard-basis measurement.
    BinaryPhase { n: usize },
    /// The n-qubit Pauli group mod phase (1-design only).
    PauliGroup { n: usize },
    /// Independent uniform {Z, X, Y} measurement axis per qubit.
    PerQubitPauli { n: usize },
    /// A fixed budget of Haar-sampled unitaries.
    Haar { dim: usize, sample_budget: usize },
    /// The fixed computational basis.
    Computational { dim: usize },
}

impl FamilyKind {
    pub fn label(&self) -> String {
        match self {
            FamilyKind::MubPrime { p } => format!("mub_prime({p})"),
            FamilyKind::MubQubits { n } => format!("mub_qubits({n})"),
            FamilyKind::Clifford { n } => format!("clifford({n})"),
            FamilyKind::BinaryPhase { n } => format!("binary_phase({n})"),
            FamilyKind::PauliGroup { n } => format!("pauli_group({n})"),
            FamilyKind::PerQubitPauli { n } => format!("per_qubit_pauli({n})"),
            FamilyKind::Haar { dim, sample_budget } => format!("haar({dim},{sample_budget})"),
            FamilyKind::Computational { dim } => format!("computational({dim})"),
        }
    }
}

/// Canonical string form of one key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisKey(pub String);

impl std::fmt::Display for BasisKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// A keyed family of measurement bases.
#[derive(Debug, Clone)]
pub struct BasisFamily {
    kind: FamilyKind,
    dim: usize,
    key_count: u128,
    /// MUB kinds only: number of bases actually in use (`p ≤ N+1`).
    bases_in_use: usize,
    mub: Option<MubSet>,
    /// Haar kind only: stream that seeds the per-key unitaries.
    haar_stream: Option<RngStream>,
}

impl BasisFamily {
    /// Build and verify a family. `stream` seeds the Haar kind and is
    /// ignored elsewhere.
    pub fn build(kind: FamilyKind, stream: Option<RngStream>) -> Result<Self> {
        let family = match kind {
            FamilyKind::MubPrime { p } => {
                let mub = MubSet::for_prime(p)?;
                Self {
                    kind,
                    dim: p,
                    key_count: (p + 1) as u128,
                    bases_in_use: p + 1,
                    mub: Some(mub),
                    haar_stream: None,
                }
            }
            FamilyKind::MubQubits { n } => {
                let mub = MubSet::for_qubits(n)?;
                let dim = 1usize << n;
                Self {
                    kind,
                    dim,
                    key_count: (dim + 1) as u128,
                    bases_in_use: dim + 1,
                    mub: Some(mub),
                    haar_stream: None,
                }
            }
            FamilyKind::Clifford { n } => {
                if n == 0 || n > 10 {
                    return Err(Error::Unsupported(format!("clifford qubit count {n}")));
                }
                let family = Self {
                    kind,
                    dim: 1 << n,
                    key_count: group_order(n)?,
                    bases_in_use: 0,
                    mub: None,
                    haar_stream: None,
                };
                family.verify_clifford_build()?;
                family
            }
            FamilyKind::BinaryPhase { n } => {
                if n == 0 || n > 6 {
                    return Err(Error::Unsupported(format!("binary phase qubit count {n}")));
                }
                Self {
                    kind,
                    dim: 1 << n,
                    key_count: 1u128 << (1usize << n),
                    bases_in_use: 0,
                    mub: None,
                    haar_stream: None,
                }
            }
            FamilyKind::PauliGroup { n } => {
                if n == 0 || n > 10 {
                    return Err(Error::Unsupported(format!("pauli group qubit count {n}")));
                }
                Self {
                    kind,
                    dim: 1 << n,
                    key_count: 1u128 << (2 * n),
                    bases_in_use: 0,
                    mub: None,
                    haar_stream: None,
                }
            }
            FamilyKind::PerQubitPauli { n } => {
                if n == 0 || n > 12 {
                    return Err(Error::Unsupported(format!("per-qubit axis count {n}")));
                }
                Self {
                    kind,
                    dim: 1 << n,
                    key_count: 3u128.pow(n as u32),
                    bases_in_use: 0,
                    mub: None,
                    haar_stream: None,
                }
            }
            FamilyKind::Haar { dim, sample_budget } => {
                if dim < 2 || sample_budget == 0 {
                    return Err(Error::Unsupported(format!(
                        "haar family needs dim ≥ 2 and a positive budget, got ({dim},{sample_budget})"
                    )));
                }
                let stream = stream.ok_or_else(|| {
                    Error::InvalidArgument("haar family requires an RNG stream".into())
                })?;
                Self {
                    kind,
                    dim,
                    key_count: sample_budget as u128,
                    bases_in_use: 0,
                    mub: None,
                    haar_stream: Some(stream),
                }
            }
            FamilyKind::Computational { dim } => {
                if dim == 0 {
                    return Err(Error::Unsupported("zero-dimensional basis".into()));
                }
                Self {
                    kind,
                    dim,
                    key_count: 1,
                    bases_in_use: 0,
                    mub: None,
                    haar_stream: None,
                }
            }
        };
        Ok(family)
    }

    /// Restrict a MUB family to its first `p` bases (Lemma-style subsets).
    pub fn restrict_bases(mut self, p: usize) -> Result<Self> {
        let full = match &self.mub {
            Some(mub) => mub.len(),
            None => {
                return Err(Error::Unsupported(format!(
                    "{} has no basis subset notion",
                    self.kind.label()
                )))
            }
        };
        if p == 0 || p > full {
            return Err(Error::InvalidArgument(format!("cannot use {p} of {full} bases")));
        }
        self.bases_in_use = p;
        self.key_count = p as u128;
        Ok(self)
    }

    fn verify_clifford_build(&self) -> Result<()> {
        let n = match self.kind {
            FamilyKind::Clifford { n } => n,
            _ => unreachable!(),
        };
        if n <= 2 {
            let report = verify_2design(self, &DesignProbes::standard(self.dim)?, EvalMode::Exact)?;
            if report.fourth_deviation() > TOL_ALGEBRAIC || report.cross_deviation() > TOL_ALGEBRAIC
            {
                return Err(Error::ConstructionFailed(format!(
                    "clifford({n}) failed the exact 2-design moment test: {report:?}"
                )));
            }
        } else {
            // Spot-check unitarity of a few sampled elements.
            let stream = RngStream::from_seed(0x1f2e_3d4c);
            for i in 0..4 {
                let idx = CliffordIndex::sample(n, &mut stream.substream(i));
                let defect = unitarity_defect(&clifford_matrix(n, &idx)?);
                if defect > TOL_ALGEBRAIC {
                    return Err(Error::ConstructionFailed(format!(
                        "clifford({n}) key {} deviates from unitarity by {defect:e}",
                        idx.to_key()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// Dimension of the measured system.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size of the key set (sample budget for the Haar kind).
    pub fn key_count(&self) -> u128 {
        self.key_count
    }

    /// For MUB kinds, the number of bases in use.
    pub fn bases_in_use(&self) -> Option<usize> {
        self.mub.as_ref().map(|_| self.bases_in_use)
    }

    pub fn mub_set(&self) -> Option<&MubSet> {
        self.mub.as_ref()
    }

    pub fn is_enumerable(&self) -> bool {
        !matches!(self.kind, FamilyKind::Haar { .. }) && self.key_count <= ENUMERATION_LIMIT
    }

    /// Every key exactly once. Errors for the Haar kind and for key sets
    /// beyond [`ENUMERATION_LIMIT`].
    pub fn enumerate_keys(&self) -> Result<Vec<BasisKey>> {
        if matches!(self.kind, FamilyKind::Haar { .. }) {
            return Err(Error::NotEnumerable(self.kind.label()));
        }
        if self.key_count > ENUMERATION_LIMIT {
            return Err(Error::NotEnumerable(format!(
                "{} has {} keys",
                self.kind.label(),
                self.key_count
            )));
        }
        let keys = match &self.kind {
            FamilyKind::MubPrime { .. } | FamilyKind::MubQubits { .. } => {
                (0..self.bases_in_use).map(|r| BasisKey(r.to_string())).collect()
            }
            FamilyKind::Clifford { n } => CliffordIndex::enumerate(*n)?
                .into_iter()
                .map(|idx| BasisKey(idx.to_key()))
                .collect(),
            FamilyKind::BinaryPhase { n } => {
                let bits = 1usize << n;
                (0..(1u64 << bits)).map(|code| BasisKey(sign_key(code, bits))).collect()
            }
            FamilyKind::PauliGroup { n } => {
                (0..(1u64 << (2 * n))).map(|code| BasisKey(code.to_string())).collect()
            }
            FamilyKind::PerQubitPauli { n } => {
                let count = 3u64.pow(*n as u32);
                (0..count).map(|code| BasisKey(axis_key(code, *n))).collect()
            }
            FamilyKind::Haar { .. } => unreachable!(),
            FamilyKind::Computational { .. } => vec![BasisKey("0".into())],
        };
        Ok(keys)
    }

    /// `count` i.i.d. uniform keys, reproducible per stream.
    pub fn sample_keys(&self, count: usize, stream: &mut RngStream) -> Vec<BasisKey> {
        (0..count)
            .map(|_| match &self.kind {
                FamilyKind::MubPrime { .. } | FamilyKind::MubQubits { .. } => {
                    BasisKey(stream.uniform_index(self.bases_in_use).to_string())
                }
                FamilyKind::Clifford { n } => BasisKey(CliffordIndex::sample(*n, stream).to_key()),
                FamilyKind::BinaryPhase { n } => {
                    let bits = 1usize << n;
                    let mut code = 0u64;
                    for b in 0..bits {
                        code |= (stream.uniform_index(2) as u64) << b;
                    }
                    BasisKey(sign_key(code, bits))
                }
                FamilyKind::PauliGroup { n } => {
                    let code = stream.uniform_index(1usize << (2 * n)) as u64;
                    BasisKey(code.to_string())
                }
                FamilyKind::PerQubitPauli { n } => {
                    let code = stream.uniform_index(3usize.pow(*n as u32)) as u64;
                    BasisKey(axis_key(code, *n))
                }
                FamilyKind::Haar { sample_budget, .. } => {
                    BasisKey(stream.uniform_index(*sample_budget).to_string())
                }
                FamilyKind::Computational { .. } => BasisKey("0".into()),
            })
            .collect()
    }

    /// The unitary `Rand_k` applied before a computational-basis readout.
    pub fn basis_unitary(&self, key: &BasisKey) -> Result<CMat> {
        let bad_key = || Error::InvalidKey { family: self.kind.label(), key: key.0.clone() };
        match &self.kind {
            FamilyKind::MubPrime { .. } | FamilyKind::MubQubits { .. } => {
                let r: usize = key.0.parse().map_err(|_| bad_key())?;
                if r >= self.bases_in_use {
                    return Err(bad_key());
                }
                // The basis matrix holds the vectors as columns; the
                // pre-measurement rotation is its adjoint.
                Ok(self.mub.as_ref().expect("mub kinds carry a set").basis(r).adjoint())
            }
            FamilyKind::Clifford { n } => {
                let idx = CliffordIndex::from_key(*n, &key.0)?;
                clifford_matrix(*n, &idx)
            }
            FamilyKind::BinaryPhase { n } => {
                let bits = 1usize << n;
                let code = parse_sign_key(&key.0, bits).ok_or_else(bad_key)?;
                let mut diag = CVec::from_element(bits, C_ONE);
                for (b, d) in diag.iter_mut().enumerate() {
                    if code >> b & 1 == 1 {
                        *d = -C_ONE;
                    }
                }
                Ok(hadamard_all(*n) * CMat::from_diagonal(&diag))
            }
            FamilyKind::PauliGroup { n } => {
                let code: u64 = key.0.parse().map_err(|_| bad_key())?;
                if code >= 1u64 << (2 * n) {
                    return Err(bad_key());
                }
                let x = code & ((1 << n) - 1);
                let z = code >> n;
                Ok(PauliString::from_bits(*n, x, z, false).to_matrix())
            }
            FamilyKind::PerQubitPauli { n } => {
                let axes = parse_axis_key(&key.0, *n).ok_or_else(bad_key)?;
                let mut u = CMat::identity(1, 1);
                for axis in axes {
                    u = crate::qcore::linalg::kron(&u, &pauli::axis_rotation(axis));
                }
                Ok(u)
            }
            FamilyKind::Haar { sample_budget, dim } => {
                let i: usize = key.0.parse().map_err(|_| bad_key())?;
                if i >= *sample_budget {
                    return Err(bad_key());
                }
                let mut sub = self
                    .haar_stream
                    .as_ref()
                    .expect("haar kind carries a stream")
                    .substream(i as u64);
                sub.haar_unitary(*dim)
            }
            FamilyKind::Computational { dim } => {
                if key.0 != "0" {
                    return Err(bad_key());
                }
                Ok(CMat::identity(*dim, *dim))
            }
        }
    }

    /// Outcome distribution of measuring `rho` in basis `key`:
    /// the diagonal of `U ρ U†`.
    pub fn outcome_distribution(&self, key: &BasisKey, rho: &DensityMatrix) -> Result<Vec<f64>> {
        let u = self.basis_unitary(key)?;
        self.check_dim(rho.dim())?;
        Ok(diag_of_conjugation(&u, rho))
    }

    /// Pinch `rho` in basis `key`: both the post-measurement state in the
    /// original space and the outcome distribution.
    pub fn pinch(&self, key: &BasisKey, rho: &DensityMatrix) -> Result<PinchResult> {
        let u = self.basis_unitary(key)?;
        self.check_dim(rho.dim())?;
        let distribution = diag_of_conjugation(&u, rho);
        let diag = CMat::from_diagonal(&CVec::from_iterator(
            distribution.len(),
            distribution.iter().map(|&p| cr(p)),
        ));
        let pinched = DensityMatrix::from_parts_unchecked(u.adjoint() * diag * &u);
        Ok(PinchResult { pinched, distribution })
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim {
            return Err(Error::DimMismatch { left: dim, right: self.dim });
        }
        Ok(())
    }
}

fn sign_key(code: u64, bits: usize) -> String {
    (0..bits).map(|b| if code >> b & 1 == 1 { '1' } else { '0' }).collect()
}

fn parse_sign_key(key: &str, bits: usize) -> Option<u64> {
    if key.len() != bits {
        return None;
    }
    let mut code = 0u64;
    for (b, c) in key.chars().enumerate() {
        match c {
            '0' => {}
            '1' => code |= 1 << b,
            _ => return None,
        }
    }
    Some(code)
}

fn axis_key(mut code: u64, n: usize) -> String {
    let mut out = vec!['Z'; n];
    for slot in out.iter_mut().rev() {
        *slot = MeasureAxis::all()[(code % 3) as usize].as_char();
        code /= 3;
    }
    out.into_iter().collect()
}

fn parse_axis_key(key: &str, n: usize) -> Option<Vec<MeasureAxis>> {
    if key.len() != n {
        return None;
    }
    key.chars().map(MeasureAxis::from_char).collect()
}

/// `diag(U ρ U†)` clamped to nonnegative reals.
fn diag_of_conjugation(u: &CMat, rho: &DensityMatrix) -> Vec<f64> {
    let t = u * rho.mat();
    let n = u.nrows();
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let mut acc = C_ZERO;
        for j in 0..n {
            acc += t[(x, j)] * u[(x, j)].conj();
        }
        out.push(acc.re.max(0.0));
    }
    out
}

/// Post-measurement state plus outcome distribution.
#[derive(Debug, Clone)]
pub struct PinchResult {
    pub pinched: DensityMatrix,
    pub distribution: Vec<f64>,
}

/// Orthogonal probe pair for the 2-design moment test.
#[derive(Debug, Clone)]
pub struct DesignProbes {
    pub a: StateVector,
    pub b: StateVector,
}

impl DesignProbes {
    /// `|0⟩`, `|1⟩` in the given dimension.
    pub fn standard(dim: usize) -> Result<Self> {
        let shape = crate::qcore::RegisterShape::single(dim)?;
        Ok(Self {
            a: StateVector::basis_state(shape.clone(), &[0])?,
            b: StateVector::basis_state(shape, &[1])?,
        })
    }

    /// A Haar-random orthonormal pair.
    pub fn random(dim: usize, stream: &mut RngStream) -> Result<Self> {
        let u = stream.haar_unitary(dim)?;
        let col = |j: usize| StateVector::from_amps(u.column(j).iter().copied().collect());
        Ok(Self { a: col(0)?, b: col(1)? })
    }

    fn check(&self) -> Result<()> {
        if self.a.dim() != self.b.dim() {
            return Err(Error::DimMismatch { left: self.a.dim(), right: self.b.dim() });
        }
        let overlap = self.a.overlap(&self.b)?.norm();
        if overlap > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "design probes must be orthogonal (overlap {overlap:e})"
            )));
        }
        Ok(())
    }
}

/// How to average over a family's keys.
#[derive(Debug, Clone)]
pub enum EvalMode {
    /// Enumerate the full key set.
    Exact,
    /// Monte Carlo over sampled keys.
    Sampled { trials: usize, stream: RngStream },
}

/// Moments report from [`verify_2design`].
#[derive(Debug, Clone)]
pub struct Design2Report {
    pub dim: usize,
    /// `E_k[|⟨0|U_k|ψ⟩|⁴]`.
    pub fourth_moment: f64,
    /// `E_k[|⟨0|U_k|ψ⟩|² |⟨0|U_k|φ⟩|²]` for orthogonal ψ, φ.
    pub cross_moment: f64,
    /// Haar values `2/(N(N+1))` and `1/(N(N+1))`.
    pub fourth_expected: f64,
    pub cross_expected: f64,
    pub samples: Option<usize>,
    pub fourth_stderr: Option<f64>,
    pub cross_stderr: Option<f64>,
}

impl Design2Report {
    pub fn fourth_deviation(&self) -> f64 {
        (self.fourth_moment - self.fourth_expected).abs()
    }

    pub fn cross_deviation(&self) -> f64 {
        (self.cross_moment - self.cross_expected).abs()
    }
}

/// Evaluate the degree-2 moment identities of a family against the Haar
/// closed forms.
pub fn verify_2design(
    family: &BasisFamily,
    probes: &DesignProbes,
    mode: EvalMode,
) -> Result<Design2Report> {
    probes.check()?;
    if probes.a.dim() != family.dim() {
        return Err(Error::DimMismatch { left: probes.a.dim(), right: family.dim() });
    }
    let n = family.dim() as f64;
    let eval = |key: &BasisKey| -> Result<(f64, f64)> {
        let u = family.basis_unitary(key)?;
        // ⟨0|U|ψ⟩ is the first entry of U|ψ⟩.
        let pa: f64 = (&u * probes.a.amps())[0].norm_sqr();
        let pb: f64 = (&u * probes.b.amps())[0].norm_sqr();
        Ok((pa * pa, pa * pb))
    };
    let (fourth, cross, samples, fourth_stderr, cross_stderr) = match mode {
        EvalMode::Exact => {
            let keys = family.enumerate_keys()?;
            let mut f_acc = 0.0;
            let mut c_acc = 0.0;
            for key in &keys {
                let (f, c) = eval(key)?;
                f_acc += f;
                c_acc += c;
            }
            let count = keys.len() as f64;
            (f_acc / count, c_acc / count, None, None, None)
        }
        EvalMode::Sampled { trials, mut stream } => {
            let keys = family.sample_keys(trials, &mut stream);
            let mut f_acc = 0.0;
            let mut f_sq = 0.0;
            let mut c_acc = 0.0;
            let mut c_sq = 0.0;
            for key in &keys {
                let (f, c) = eval(key)?;
                f_acc += f;
                f_sq += f * f;
                c_acc += c;
                c_sq += c * c;
            }
            let count = trials as f64;
            let f_mean = f_acc / count;
            let c_mean = c_acc / count;
            let f_se = ((f_sq / count - f_mean * f_mean).max(0.0) / count).sqrt();
            let c_se = ((c_sq / count - c_mean * c_mean).max(0.0) / count).sqrt();
            (f_mean, c_mean, Some(trials), Some(f_se), Some(c_se))
        }
    };
    Ok(Design2Report {
        dim: family.dim(),
        fourth_moment: fourth,
        cross_moment: cross,
        fourth_expected: 2.0 / (n * (n + 1.0)),
        cross_expected: 1.0 / (n * (n + 1.0)),
        samples,
        fourth_stderr,
        cross_stderr,
    })
}

/// MUB verification report (see [`MubSet::verify`]).
pub fn verify_mub(set: &MubSet) -> MubReport {
    set.verify()
}
