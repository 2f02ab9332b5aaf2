//! Shared dense complex-matrix helpers.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const C_ZERO: C64 = C64::new(0.0, 0.0);
pub const C_ONE: C64 = C64::new(1.0, 0.0);

pub fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Kronecker product with the left factor most significant.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C_ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// Max entry-wise deviation from Hermitian symmetry.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†)/2`. Eigensolvers assume an exactly Hermitian input.
pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues ascending,
/// matching orthonormal eigenvector columns.
pub fn herm_eig(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(hermitize(m));
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Eigenvalues only, ascending.
pub fn herm_eigvals(m: &CMat) -> Vec<f64> {
    let eig = SymmetricEigen::new(hermitize(m));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Deviation of `m` from unitarity, measured as `max |(m† m - I)_{ij}|`.
pub fn unitarity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let g = m.adjoint() * m;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { C_ONE } else { C_ZERO };
            worst = worst.max((g[(i, j)] - expect).norm());
        }
    }
    worst
}

pub fn frobenius_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hilbert–Schmidt inner product `Tr(a† b)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    let mut acc = C_ZERO;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)].conj() * b[(i, j)];
        }
    }
    acc
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Entry-wise complex conjugate.
pub fn conjugate_mat(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

pub fn conjugate_vec(v: &CVec) -> CVec {
    v.map(|z| z.conj())
}

/// A unitary whose first column is the given unit vector (Householder
/// completion). Used to promote state-preparation maps to full unitaries.
pub fn unitary_with_first_column(v: &CVec) -> CMat {
    let n = v.len();
    let mut u = identity(n);
    // Reflector sending e_0 to v/phase, where the phase makes the first
    // component real nonnegative; the reflector is then exact.
    let e0 = CVec::from_fn(n, |i, _| if i == 0 { C_ONE } else { C_ZERO });
    let overlap = v[0];
    let phase = if overlap.norm() > 1e-14 { overlap / cr(overlap.norm()) } else { C_ONE };
    let target = v.map(|z| z / phase);
    let mut w = &target - &e0;
    let wn = w.norm();
    if wn > 1e-14 {
        w /= cr(wn);
        let proj = &w * w.adjoint();
        u -= proj.map(|z| z * 2.0);
    }
    u.map(|z| z * phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_basics() {
        let x = CMat::from_row_slice(2, 2, &[C_ZERO, C_ONE, C_ONE, C_ZERO]);
        let i2 = identity(2);
        let xi = kron(&x, &i2);
        assert_eq!(xi[(0, 2)], C_ONE);
        assert_eq!(xi[(1, 3)], C_ONE);
        assert_eq!(xi[(2, 0)], C_ONE);
        assert!(unitarity_defect(&xi) < 1e-12);
    }

    #[test]
    fn herm_eig_reconstructs() {
        let m = CMat::from_row_slice(
            2,
            2,
            &[cr(0.3), C64::new(0.1, -0.2), C64::new(0.1, 0.2), cr(0.7)],
        );
        let (vals, vecs) = herm_eig(&m);
        let d = CMat::from_diagonal(&CVec::from_iterator(2, vals.iter().map(|&x| cr(x))));
        let recon = &vecs * d * vecs.adjoint();
        assert!(frobenius_norm(&(recon - m)) < 1e-12);
        assert!(vals[0] <= vals[1]);
    }

    #[test]
    fn first_column_completion_is_unitary() {
        let v = CVec::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        let u = unitary_with_first_column(&v);
        assert!(unitarity_defect(&u) < 1e-12);
        assert!((u.column(0).into_owned() - v).norm() < 1e-12);

        let w = CVec::from_vec(vec![
            C64::new(0.5, 0.1),
            C64::new(-0.3, 0.4),
            C64::new(0.2, -0.2),
            C64::new(0.1, 0.63),
        ]);
        let w = &w / cr(w.norm());
        let u = unitary_with_first_column(&w);
        assert!(unitarity_defect(&u) < 1e-12);
        assert!((u.column(0).into_owned() - w).norm() < 1e-12);
    }
}
