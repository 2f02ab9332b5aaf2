//! Uniform Clifford-group elements addressed by a mixed-radix index.
//!
//! An n-qubit Clifford (mod global phase) is picked level by level: at
//! level ℓ the index chooses a signed non-identity Pauli `P` on qubits
//! `ℓ..n` together with a signed anticommuting partner `P'`, and a sweep of
//! Clifford gates reduces the pair to `(+X_ℓ, +Z_ℓ)`. The level choice
//! counts are `2(4^m − 1) · 4^m` for `m = n − ℓ` remaining qubits, whose
//! product is exactly the group order mod phase (24 for n = 1, 11520 for
//! n = 2), so enumerating indices enumerates the group and a uniform index
//! is a uniform element.

use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::linalg::CMat;
use crate::qcore::RngStream;

use super::pauli::{circuit_matrix, Gate, PauliString};

/// Number of `(P, P')` choices at a level with `m` remaining qubits.
fn level_radix(m: usize) -> u64 {
    let fourm = 1u64 << (2 * m);
    2 * (fourm - 1) * fourm
}

/// Group order mod global phase, as the product of level radices.
pub fn group_order(n: usize) -> Result<u128> {
    if n == 0 || n > 12 {
        return Err(Error::Unsupported(format!("clifford qubit count {n}")));
    }
    Ok((1..=n).map(|m| level_radix(m) as u128).product())
}

/// Per-level sub-indices of one group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordIndex(pub Vec<u64>);

impl CliffordIndex {
    /// Canonical key string: dash-joined per-level indices, outermost level
    /// first.
    pub fn to_key(&self) -> String {
        self.0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("-")
    }

    pub fn from_key(n: usize, key: &str) -> Result<Self> {
        let parts: Vec<&str> = key.split('-').collect();
        if parts.len() != n {
            return Err(Error::InvalidKey { family: format!("clifford({n})"), key: key.into() });
        }
        let mut subs = Vec::with_capacity(n);
        for (level, part) in parts.iter().enumerate() {
            let m = n - level;
            let idx: u64 = part
                .parse()
                .map_err(|_| Error::InvalidKey { family: format!("clifford({n})"), key: key.into() })?;
            if idx >= level_radix(m) {
                return Err(Error::InvalidKey { family: format!("clifford({n})"), key: key.into() });
            }
            subs.push(idx);
        }
        Ok(CliffordIndex(subs))
    }

    pub fn sample(n: usize, stream: &mut RngStream) -> Self {
        let subs = (0..n)
            .map(|level| {
                let m = n - level;
                stream.rng().random_range(0..level_radix(m))
            })
            .collect();
        CliffordIndex(subs)
    }

    /// All indices in lexicographic order. Only sensible for small n.
    pub fn enumerate(n: usize) -> Result<Vec<CliffordIndex>> {
        let order = group_order(n)?;
        if order > 1 << 20 {
            return Err(Error::NotEnumerable(format!(
                "clifford({n}) has {order} elements"
            )));
        }
        let mut all = Vec::with_capacity(order as usize);
        let radices: Vec<u64> = (0..n).map(|level| level_radix(n - level)).collect();
        let mut current = vec![0u64; n];
        loop {
            all.push(CliffordIndex(current.clone()));
            // Odometer increment, last level fastest.
            let mut pos = n;
            loop {
                if pos == 0 {
                    return Ok(all);
                }
                pos -= 1;
                current[pos] += 1;
                if current[pos] < radices[pos] {
                    break;
                }
                current[pos] = 0;
            }
        }
    }
}

/// Decode one level's sub-index into the signed anticommuting Pauli pair on
/// qubits `offset..n`.
fn decode_level(n: usize, offset: usize, idx: u64) -> (PauliString, PauliString) {
    let m = n - offset;
    let fourm = 1u64 << (2 * m);
    debug_assert!(idx < level_radix(m));
    let a_idx = idx / fourm;
    let b_idx = idx % fourm;

    let sign_a = a_idx / (fourm - 1) == 1;
    let code_a = 1 + a_idx % (fourm - 1);
    let a = place_code(n, offset, m, code_a, sign_a);

    let sign_b = b_idx & 1 == 1;
    let rank = b_idx >> 1;
    // rank-th code (ascending) anticommuting with `a`.
    let mut seen = 0u64;
    let mut code_b = None;
    for code in 0..fourm {
        let cand = place_code(n, offset, m, code, false);
        if cand.anticommutes(&a) {
            if seen == rank {
                code_b = Some(code);
                break;
            }
            seen += 1;
        }
    }
    let b = place_code(n, offset, m, code_b.expect("half of all codes anticommute"), sign_b);
    (a, b)
}

/// Spread the 2m-bit code over qubits `offset..offset+m`.
fn place_code(n: usize, offset: usize, m: usize, code: u64, sign: bool) -> PauliString {
    let xpart = code & ((1 << m) - 1);
    let zpart = code >> m;
    PauliString::from_bits(n, xpart << offset, zpart << offset, sign)
}

/// Gates reducing the signed pair `(a, b)` to `(+X_ℓ, +Z_ℓ)` under
/// conjugation, touching only qubits `ℓ..n`.
fn sweep(mut a: PauliString, mut b: PauliString, l: usize, gates: &mut Vec<Gate>) {
    let n = a.n;
    let mut push = |g: Gate, a: &mut PauliString, b: &mut PauliString| {
        a.conj_gate(g);
        b.conj_gate(g);
        gates.push(g);
    };

    let reduce_to_single_x = |row_of: &dyn Fn(&PauliString, &PauliString) -> PauliString,
                              push: &mut dyn FnMut(Gate, &mut PauliString, &mut PauliString),
                              a: &mut PauliString,
                              b: &mut PauliString|
     -> usize {
        // Clear Z entries: H where only Z, S where Y.
        for j in l..n {
            let p = row_of(a, b);
            let xb = p.x >> j & 1 == 1;
            let zb = p.z >> j & 1 == 1;
            if zb && !xb {
                push(Gate::H(j), a, b);
            } else if zb && xb {
                push(Gate::S(j), a, b);
            }
        }
        // CNOT tree onto the first X position.
        let mut xs: Vec<usize> = (l..n).filter(|&j| row_of(a, b).x >> j & 1 == 1).collect();
        while xs.len() > 1 {
            let mut next = Vec::with_capacity(xs.len().div_ceil(2));
            for pair in xs.chunks(2) {
                if pair.len() == 2 {
                    push(Gate::Cnot(pair[0], pair[1]), a, b);
                }
                next.push(pair[0]);
            }
            xs = next;
        }
        xs[0]
    };

    // Reduce `a` to ±X at some position, then move it to qubit ℓ.
    let pos = reduce_to_single_x(&|a, _| *a, &mut push, &mut a, &mut b);
    if pos != l {
        push(Gate::Swap(pos, l), &mut a, &mut b);
    }
    debug_assert_eq!(a.x, 1 << l);
    debug_assert_eq!(a.z, 0);

    // If `b` is not already ±Z_ℓ, rotate a out of the way and reduce b.
    let b_is_zl = b.x == 0 && b.z == 1 << l;
    if !b_is_zl {
        push(Gate::H(l), &mut a, &mut b);
        let pos = reduce_to_single_x(&|_, b| *b, &mut push, &mut a, &mut b);
        debug_assert_eq!(pos, l, "anticommutation pins b to qubit ℓ");
        push(Gate::H(l), &mut a, &mut b);
    }
    debug_assert_eq!((a.x, a.z), (1 << l, 0));
    debug_assert_eq!((b.x, b.z), (0, 1 << l));

    // Fix signs with a Pauli on qubit ℓ.
    match (a.sign, b.sign) {
        (false, false) => {}
        (true, false) => push(Gate::Z(l), &mut a, &mut b),
        (false, true) => push(Gate::X(l), &mut a, &mut b),
        (true, true) => push(Gate::Y(l), &mut a, &mut b),
    }
    debug_assert!(!a.sign && !b.sign);
}

/// The gate circuit of the Clifford addressed by `index` (to be applied
/// left to right).
pub fn clifford_circuit(n: usize, index: &CliffordIndex) -> Result<Vec<Gate>> {
    if index.0.len() != n {
        return Err(Error::InvalidKey {
            family: format!("clifford({n})"),
            key: index.to_key(),
        });
    }
    let mut reduction = Vec::new();
    for (level, &sub) in index.0.iter().enumerate() {
        let m = n - level;
        if sub >= level_radix(m) {
            return Err(Error::InvalidKey {
                family: format!("clifford({n})"),
                key: index.to_key(),
            });
        }
        let (a, b) = decode_level(n, level, sub);
        sweep(a, b, level, &mut reduction);
    }
    // The reduction circuit V satisfies V P V† = X_ℓ etc.; the addressed
    // Clifford is V†, which maps (X_ℓ, Z_ℓ) onto the drawn pairs.
    Ok(reduction.iter().rev().map(|g| g.dagger()).collect())
}

/// Dense unitary of the addressed Clifford.
pub fn clifford_matrix(n: usize, index: &CliffordIndex) -> Result<CMat> {
    let circuit = clifford_circuit(n, index)?;
    Ok(circuit_matrix(n, &circuit))
}
