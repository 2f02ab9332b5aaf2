//! Expected post-measurement trace distance under keyed basis families,
//! the bounds it must obey, and the families that break it.

use rayon::prelude::*;

use crate::bases::{BasisFamily, BasisKey, EvalMode, FamilyKind, MubSet};
use crate::error::{Error, Result};
use crate::qcore::linalg::{frobenius_norm, hs_inner, CMat, CVec};
use crate::qcore::{DensityMatrix, RngStream, StateVector};

/// Outcome of a hiding experiment: the measured expectation and the bound
/// it is compared against.
#[derive(Debug, Clone)]
pub struct HidingReport {
    pub family: String,
    pub expected_td: f64,
    pub bound: LemmaBound,
    pub mode_label: String,
    pub trials: Option<usize>,
    pub stderr: Option<f64>,
    /// Per-key (exact) or per-trial (Monte Carlo) trace distances.
    pub per_key_tds: Option<Vec<(String, f64)>>,
    /// Counterexample runs record which state pair was measured.
    pub pair_label: Option<String>,
}

impl HidingReport {
    /// Slack-adjusted comparison: `expectedTD ≤ bound + 1e-9` for exact
    /// runs, `≤ bound + 3·stderr` for Monte Carlo runs.
    pub fn within_bound(&self) -> Option<bool> {
        let bound = self.bound.value()?;
        let slack = match self.stderr {
            Some(se) => 3.0 * se,
            None => 1e-9,
        };
        Some(self.expected_td <= bound + slack)
    }
}

/// The applicable proven bound on the expected post-measurement distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LemmaBound {
    /// `√(N/(2p)) · TD` for `p` MUBs in dimension N.
    Mub { n: usize, p: usize, value: f64 },
    /// `√(N/(2(N+1))) · TD` for a unitary 2-design.
    TwoDesign { n: usize, value: f64 },
    /// The family carries no proven bound.
    NoBound,
}

impl LemmaBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            LemmaBound::Mub { value, .. } | LemmaBound::TwoDesign { value, .. } => Some(*value),
            LemmaBound::NoBound => None,
        }
    }
}

/// The bound the family's kind earns for a pair at trace distance `td`.
///
/// MUB families get `√(N/(2p))·td` with `p` the number of bases in use
/// (so `p = N` specializes to `td/√2`); 2-design families (Cliffords, and
/// Haar as the limiting 2-design) get `√(N/(2(N+1)))·td`. Everything else
/// is an explicit no-bound marker.
pub fn lemma_bound(family: &BasisFamily, td: f64) -> LemmaBound {
    let n = family.dim();
    match family.kind() {
        FamilyKind::MubPrime { .. } | FamilyKind::MubQubits { .. } => {
            let p = family.bases_in_use().expect("mub kinds track bases in use");
            LemmaBound::Mub { n, p, value: (n as f64 / (2.0 * p as f64)).sqrt() * td }
        }
        FamilyKind::Clifford { .. } | FamilyKind::Haar { .. } => {
            LemmaBound::TwoDesign { n, value: (n as f64 / (2.0 * (n as f64 + 1.0))).sqrt() * td }
        }
        _ => LemmaBound::NoBound,
    }
}

fn key_td(
    family: &BasisFamily,
    key: &BasisKey,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<f64> {
    let u = family.basis_unitary(key)?;
    Ok(tv_for_unitary(&u, rho0, rho1))
}

/// Trace distance of the two pinched states, computed as the total
/// variation of the outcome distributions.
fn tv_for_unitary(u: &CMat, rho0: &DensityMatrix, rho1: &DensityMatrix) -> f64 {
    let diff = rho0.mat() - rho1.mat();
    let t = u * diff;
    let n = u.nrows();
    let mut acc = 0.0;
    for x in 0..n {
        let mut d = 0.0;
        for j in 0..n {
            d += (t[(x, j)] * u[(x, j)].conj()).re;
        }
        acc += d.abs();
    }
    0.5 * acc
}

/// `E_k[TD(W₀^{(k)}, W₁^{(k)})]` over the family's keys.
pub fn expected_pinch_distance(
    family: &BasisFamily,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    mode: EvalMode,
) -> Result<HidingReport> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimMismatch { left: rho0.dim(), right: rho1.dim() });
    }
    if rho0.dim() != family.dim() {
        return Err(Error::DimMismatch { left: rho0.dim(), right: family.dim() });
    }
    let td = crate::qcore::trace_distance(rho0, rho1)?;
    let (keys, mode_label, trials) = match mode {
        EvalMode::Exact => (family.enumerate_keys()?, "exact".to_string(), None),
        EvalMode::Sampled { trials, mut stream } => {
            (family.sample_keys(trials, &mut stream), "monte_carlo".to_string(), Some(trials))
        }
    };
    let per_key: Vec<(String, f64)> = keys
        .par_iter()
        .map(|key| key_td(family, key, rho0, rho1).map(|v| (key.0.clone(), v)))
        .collect::<Result<_>>()?;
    let count = per_key.len() as f64;
    let mean = per_key.iter().map(|(_, v)| v).sum::<f64>() / count;
    let stderr = trials.map(|t| {
        let var = per_key.iter().map(|(_, v)| (v - mean).powi(2)).sum::<f64>()
            / (t as f64 - 1.0).max(1.0);
        (var / t as f64).sqrt()
    });
    Ok(HidingReport {
        family: family.kind().label(),
        expected_td: mean,
        bound: lemma_bound(family, td),
        mode_label,
        trials,
        stderr,
        per_key_tds: Some(per_key),
        pair_label: None,
    })
}

/// The orthogonal decomposition of a density matrix across a maximal MUB
/// set: `W = I/N + Σ_r (W^{(r)} − I/N)`.
#[derive(Debug, Clone)]
pub struct IvanovicDecomposition {
    /// The correction terms `W^{(r)} − I/N`, one per basis.
    pub terms: Vec<CMat>,
    /// Hilbert–Schmidt norm of `W − I/N − Σ_r terms`.
    pub residual: f64,
    /// Largest pairwise `|Tr(T_r T_s)|`, r ≠ s.
    pub max_cross: f64,
}

pub fn ivanovic_decompose(w: &DensityMatrix, mub: &MubSet) -> Result<IvanovicDecomposition> {
    if w.dim() != mub.dim() {
        return Err(Error::DimMismatch { left: w.dim(), right: mub.dim() });
    }
    let n = mub.dim();
    let scale = 1.0 / n as f64;
    let id_over_n = CMat::identity(n, n).map(|z| z * scale);
    let mut terms = Vec::with_capacity(mub.len());
    for b in mub.bases() {
        // Pinch in basis r: B diag(B† W B) B†.
        let inner = b.adjoint() * w.mat() * b;
        let diag = CMat::from_diagonal(&CVec::from_fn(n, |i, _| inner[(i, i)]));
        let pinched = b * diag * b.adjoint();
        terms.push(pinched - &id_over_n);
    }
    let mut sum = id_over_n.clone();
    for t in &terms {
        sum += t;
    }
    let residual = frobenius_norm(&(w.mat() - sum));
    let mut max_cross = 0.0f64;
    for r in 0..terms.len() {
        for s in r + 1..terms.len() {
            max_cross = max_cross.max(hs_inner(&terms[r], &terms[s]).norm());
        }
    }
    Ok(IvanovicDecomposition { terms, residual, max_cross })
}

/// Which deliberately broken family to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Counterexample {
    BinaryPhase,
    PauliGroup,
    PerQubitPauli,
}

impl Counterexample {
    pub fn label(&self) -> &'static str {
        match self {
            Counterexample::BinaryPhase => "binary_phase",
            Counterexample::PauliGroup => "pauli_group",
            Counterexample::PerQubitPauli => "per_qubit_pauli",
        }
    }

    /// The designated distinguishable pair for this family.
    pub fn state_pair(&self, n: usize) -> Result<(StateVector, StateVector, String)> {
        let dim = 1usize << n;
        let shape = crate::qcore::RegisterShape::single(dim)?;
        match self {
            Counterexample::BinaryPhase => {
                // |±0⋯0⟩ = (|0ⁿ⟩ ± |10^{n-1}⟩)/√2.
                let mk = |sign: f64| {
                    let mut amps = CVec::zeros(dim);
                    amps[0] = crate::qcore::linalg::cr(std::f64::consts::FRAC_1_SQRT_2);
                    amps[dim / 2] =
                        crate::qcore::linalg::cr(sign * std::f64::consts::FRAC_1_SQRT_2);
                    StateVector::new(shape.clone(), amps)
                };
                Ok((mk(1.0)?, mk(-1.0)?, "|+0..0> vs |-0..0>".into()))
            }
            Counterexample::PauliGroup | Counterexample::PerQubitPauli => {
                let zero = StateVector::basis_state(shape.clone(), &[0])?;
                let ones = StateVector::basis_state(shape, &[dim - 1])?;
                Ok((zero, ones, "|0..0> vs |1..1>".into()))
            }
        }
    }
}

/// Run a counterexample family on its designated pair.
///
/// Exact mode enumerates the relevant key set: the full family for the
/// Pauli kinds, and for binary phase only the four sign assignments on the
/// two support components (all other signs act trivially on the pair, so
/// the four-term average is the exact full-set average at any n).
pub fn counterexample_run(which: Counterexample, n: usize, mode: EvalMode) -> Result<HidingReport> {
    if n == 0 || n > 6 {
        return Err(Error::Unsupported(format!("counterexample qubit count {n}")));
    }
    let (psi0, psi1, pair_label) = which.state_pair(n)?;
    let rho0 = psi0.to_density()?;
    let rho1 = psi1.to_density()?;

    if matches!(which, Counterexample::BinaryPhase) {
        if let EvalMode::Exact = mode {
            let family = BasisFamily::build(FamilyKind::BinaryPhase { n }, None)?;
            let dim = 1usize << n;
            let mut per_key = Vec::with_capacity(4);
            for signs in 0..4u64 {
                // Sign bit 0 on component 0, sign bit 1 on component dim/2.
                let mut code_key: Vec<char> = vec!['0'; dim];
                if signs & 1 == 1 {
                    code_key[0] = '1';
                }
                if signs >> 1 & 1 == 1 {
                    code_key[dim / 2] = '1';
                }
                let key = BasisKey(code_key.into_iter().collect());
                let td = key_td(&family, &key, &rho0, &rho1)?;
                per_key.push((key.0, td));
            }
            let mean = per_key.iter().map(|(_, v)| v).sum::<f64>() / per_key.len() as f64;
            return Ok(HidingReport {
                family: family.kind().label(),
                expected_td: mean,
                bound: LemmaBound::NoBound,
                mode_label: "exact".into(),
                trials: None,
                stderr: None,
                per_key_tds: Some(per_key),
                pair_label: Some(pair_label),
            });
        }
    }

    let kind = match which {
        Counterexample::BinaryPhase => FamilyKind::BinaryPhase { n },
        Counterexample::PauliGroup => FamilyKind::PauliGroup { n },
        Counterexample::PerQubitPauli => FamilyKind::PerQubitPauli { n },
    };
    let family = BasisFamily::build(kind, None)?;
    let mut report = expected_pinch_distance(&family, &rho0, &rho1, mode)?;
    report.pair_label = Some(pair_label);
    report.bound = LemmaBound::NoBound;
    Ok(report)
}

/// Monte Carlo estimate of `E_U[TD]` for `|0⟩⟨0|` vs `|1⟩⟨1|` under Haar
/// measurements in dimension `n_dim`.
pub fn haar_limit(n_dim: usize, trials: usize, stream: &RngStream) -> Result<HidingReport> {
    if n_dim < 2 {
        return Err(Error::Unsupported(format!("haar limit needs dim ≥ 2, got {n_dim}")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("haar limit needs at least one trial".into()));
    }
    let tds: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut sub = stream.substream(t as u64);
            let u = sub.haar_unitary(n_dim)?;
            // Pinched |0⟩⟨0| and |1⟩⟨1| are the first two column weights.
            let mut acc = 0.0;
            for x in 0..n_dim {
                acc += (u[(x, 0)].norm_sqr() - u[(x, 1)].norm_sqr()).abs();
            }
            Ok(0.5 * acc)
        })
        .collect::<Result<_>>()?;
    let mean = tds.iter().sum::<f64>() / trials as f64;
    let var = tds.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0).max(1.0);
    let stderr = (var / trials as f64).sqrt();
    Ok(HidingReport {
        family: format!("haar({n_dim})"),
        expected_td: mean,
        bound: LemmaBound::TwoDesign {
            n: n_dim,
            value: (n_dim as f64 / (2.0 * (n_dim as f64 + 1.0))).sqrt(),
        },
        mode_label: "monte_carlo".into(),
        trials: Some(trials),
        stderr: Some(stderr),
        per_key_tds: Some(tds.iter().enumerate().map(|(i, v)| (i.to_string(), *v)).collect()),
        pair_label: Some("|0> vs |1>".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_pair() -> (DensityMatrix, DensityMatrix) {
        (
            DensityMatrix::from_distribution(&[1.0, 0.0]).unwrap(),
            DensityMatrix::from_distribution(&[0.0, 1.0]).unwrap(),
        )
    }

    #[test]
    fn mub2_exact_z_pair_is_one_third() {
        // Z distinguishes perfectly, X and Y not at all.
        let f = BasisFamily::build(FamilyKind::MubPrime { p: 2 }, None).unwrap();
        let (rho0, rho1) = z_pair();
        let report = expected_pinch_distance(&f, &rho0, &rho1, EvalMode::Exact).unwrap();
        assert!((report.expected_td - 1.0 / 3.0).abs() < 1e-12, "{report:?}");
        let bound = report.bound.value().unwrap();
        assert!((bound - (2.0f64 / 6.0).sqrt()).abs() < 1e-12);
        assert_eq!(report.within_bound(), Some(true));
    }

    #[test]
    fn clifford1_exact_z_pair_is_one_third() {
        // 8 of the 24 single-qubit Cliffords keep the Z axis on ±Z.
        let f = BasisFamily::build(FamilyKind::Clifford { n: 1 }, None).unwrap();
        let (rho0, rho1) = z_pair();
        let report = expected_pinch_distance(&f, &rho0, &rho1, EvalMode::Exact).unwrap();
        assert!((report.expected_td - 1.0 / 3.0).abs() < 1e-12, "{report:?}");
        let ones = report
            .per_key_tds
            .as_ref()
            .unwrap()
            .iter()
            .filter(|(_, v)| (v - 1.0).abs() < 1e-9)
            .count();
        assert_eq!(ones, 8);
    }

    #[test]
    fn computational_family_never_hides() {
        let f = BasisFamily::build(FamilyKind::Computational { dim: 2 }, None).unwrap();
        let (rho0, rho1) = z_pair();
        let report = expected_pinch_distance(&f, &rho0, &rho1, EvalMode::Exact).unwrap();
        assert!((report.expected_td - 1.0).abs() < 1e-12);
        assert_eq!(report.bound, LemmaBound::NoBound);
        assert_eq!(report.within_bound(), None);
    }

    #[test]
    fn lemma_bound_values() {
        let f = BasisFamily::build(FamilyKind::MubPrime { p: 2 }, None).unwrap();
        match lemma_bound(&f, 1.0) {
            LemmaBound::Mub { n: 2, p: 3, value } => {
                assert!((value - 0.5773502691896258).abs() < 1e-12)
            }
            other => panic!("unexpected bound {other:?}"),
        }
        // p = N subset gives td/√2.
        let f = BasisFamily::build(FamilyKind::MubPrime { p: 3 }, None)
            .unwrap()
            .restrict_bases(3)
            .unwrap();
        match lemma_bound(&f, 1.0) {
            LemmaBound::Mub { n: 3, p: 3, value } => {
                assert!((value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12)
            }
            other => panic!("unexpected bound {other:?}"),
        }
        let f = BasisFamily::build(FamilyKind::Clifford { n: 2 }, None).unwrap();
        match lemma_bound(&f, 1.0) {
            LemmaBound::TwoDesign { n: 4, value } => {
                assert!((value - (4.0f64 / 10.0).sqrt()).abs() < 1e-12)
            }
            other => panic!("unexpected bound {other:?}"),
        }
    }

    #[test]
    fn ivanovic_identity_has_zero_terms() {
        let mub = MubSet::for_prime(3).unwrap();
        let w = DensityMatrix::maximally_mixed(3);
        let dec = ivanovic_decompose(&w, &mub).unwrap();
        assert!(dec.residual < 1e-12);
        for t in &dec.terms {
            assert!(frobenius_norm(t) < 1e-12);
        }
    }

    #[test]
    fn ivanovic_reconstructs_pure_state() {
        let mub = MubSet::for_prime(2).unwrap();
        let w = DensityMatrix::from_distribution(&[1.0, 0.0]).unwrap();
        let dec = ivanovic_decompose(&w, &mub).unwrap();
        assert!(dec.residual < 1e-12, "residual {}", dec.residual);
        assert!(dec.max_cross < 1e-12, "cross {}", dec.max_cross);
    }

    #[test]
    fn ivanovic_random_sweep() {
        let mut stream = RngStream::from_seed(17);
        for &n in &[2usize, 3, 4, 5] {
            let mub =
                if n == 4 { MubSet::for_qubits(2).unwrap() } else { MubSet::for_prime(n).unwrap() };
            for _ in 0..10 {
                let w = stream.density(n, n).unwrap();
                let dec = ivanovic_decompose(&w, &mub).unwrap();
                assert!(dec.residual < 1e-8, "N={n} residual {}", dec.residual);
                assert!(dec.max_cross < 1e-9, "N={n} cross {}", dec.max_cross);
            }
        }
    }

    #[test]
    fn binary_phase_counterexample_is_total() {
        for n in 1..=4usize {
            let report =
                counterexample_run(Counterexample::BinaryPhase, n, EvalMode::Exact).unwrap();
            assert!((report.expected_td - 1.0).abs() < 1e-9, "n={n}: {report:?}");
        }
    }

    #[test]
    fn binary_phase_reduced_average_matches_full_enumeration() {
        // At n = 2 the 16-key full set is cheap; it must agree with the
        // 4-assignment reduction exactly.
        let n = 2;
        let reduced = counterexample_run(Counterexample::BinaryPhase, n, EvalMode::Exact).unwrap();
        let family = BasisFamily::build(FamilyKind::BinaryPhase { n }, None).unwrap();
        let (psi0, psi1, _) = Counterexample::BinaryPhase.state_pair(n).unwrap();
        let full = expected_pinch_distance(
            &family,
            &psi0.to_density().unwrap(),
            &psi1.to_density().unwrap(),
            EvalMode::Exact,
        )
        .unwrap();
        assert!((reduced.expected_td - full.expected_td).abs() < 1e-12);
    }

    #[test]
    fn pauli_group_counterexample_is_total() {
        for n in 1..=3usize {
            let report =
                counterexample_run(Counterexample::PauliGroup, n, EvalMode::Exact).unwrap();
            assert!((report.expected_td - 1.0).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn per_qubit_axis_matches_combinatorial_oracle() {
        // TD is 1 exactly when some qubit is measured on the Z axis, else 0;
        // the exact average is 1 − (2/3)ⁿ.
        for n in 1..=4usize {
            let report =
                counterexample_run(Counterexample::PerQubitPauli, n, EvalMode::Exact).unwrap();
            let oracle = 1.0 - (2.0f64 / 3.0).powi(n as i32);
            assert!((report.expected_td - oracle).abs() < 1e-9, "n={n}: {report:?}");
        }
    }

    #[test]
    fn haar_limit_small_dim_matches_quadrature() {
        // For N = 2 the average reduces to ∫₀¹ |2a−1| da; evaluate the
        // integral by midpoint quadrature as an independent oracle.
        let grid = 20_000usize;
        let mut oracle = 0.0;
        for i in 0..grid {
            let a = (i as f64 + 0.5) / grid as f64;
            oracle += (2.0 * a - 1.0).abs();
        }
        oracle /= grid as f64;
        let stream = RngStream::from_seed(421);
        let report = haar_limit(2, 10_000, &stream).unwrap();
        let se = report.stderr.unwrap();
        assert!(
            (report.expected_td - oracle).abs() < 3.0 * se,
            "estimate {} vs oracle {oracle} (se {se})",
            report.expected_td
        );
    }

    #[test]
    fn monte_carlo_mode_reports_stderr() {
        let f = BasisFamily::build(FamilyKind::Clifford { n: 2 }, None).unwrap();
        let mut stream = RngStream::from_seed(9);
        let rho0 = stream.density(4, 1).unwrap();
        let rho1 = stream.density(4, 4).unwrap();
        let report = expected_pinch_distance(
            &f,
            &rho0,
            &rho1,
            EvalMode::Sampled { trials: 200, stream: stream.substream(1) },
        )
        .unwrap();
        assert_eq!(report.trials, Some(200));
        assert!(report.stderr.unwrap() > 0.0);
        assert_eq!(report.within_bound(), Some(true));
    }

    #[test]
    fn measurement_cannot_increase_distinguishability() {
        let mut stream = RngStream::from_seed(31);
        let kinds = vec![
            FamilyKind::MubPrime { p: 2 },
            FamilyKind::Clifford { n: 1 },
            FamilyKind::BinaryPhase { n: 1 },
            FamilyKind::PauliGroup { n: 1 },
            FamilyKind::PerQubitPauli { n: 1 },
        ];
        for kind in kinds {
            let f = BasisFamily::build(kind, None).unwrap();
            let rho0 = stream.density(2, 2).unwrap();
            let rho1 = stream.density(2, 1).unwrap();
            let td = crate::qcore::trace_distance(&rho0, &rho1).unwrap();
            let report = expected_pinch_distance(&f, &rho0, &rho1, EvalMode::Exact).unwrap();
            assert!(report.expected_td <= td + 1e-9, "{}", f.kind().label());
        }
    }
}
