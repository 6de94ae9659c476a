//! Dense complex linear algebra at desk scale (matrices up to 8×8).
//!
//! Provides the decompositions used by the reduction pipeline — Iwasawa
//! factorisations `g = k b = b_L k_R`, Hermitian eigensystems, singular value
//! and polar decompositions — together with the `𝒦 ⊕ ℬ` splitting of
//! `sl(2n, ℂ)` and the pairing `⟨X, Y⟩ = Im tr(XY)` that identifies the two
//! summands as mutually dual.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar.
pub type C64 = Complex64;
/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = DVector<C64>;

/// Absolute floor applied to every relative tolerance.
pub const ABS_FLOOR: f64 = 1e-14;

/// Shorthand for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Largest entry modulus of a vector.
pub fn max_abs_vec(a: &CVector) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Frobenius norm.
pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Identity matrix of size `dim`.
pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// The grading matrix `I = diag(1_n, −1_n)`.
pub fn grading(n: usize) -> CMatrix {
    CMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i != j {
            C64::new(0.0, 0.0)
        } else if i < n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        }
    })
}

/// Diagonal complex matrix from real entries.
pub fn diag_real(d: &[f64]) -> CMatrix {
    let m = d.len();
    CMatrix::from_fn(m, m, |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) })
}

/// Diagonal complex matrix from complex entries.
pub fn diag_complex(d: &[C64]) -> CMatrix {
    let m = d.len();
    CMatrix::from_fn(m, m, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) })
}

/// Assemble the block matrix `[[a, b], [c, d]]` from four square blocks.
pub fn block2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// Extract the `(bi, bj)` block of size `n` from a `2n × 2n` matrix.
pub fn block(m: &CMatrix, n: usize, bi: usize, bj: usize) -> CMatrix {
    m.view((bi * n, bj * n), (n, n)).into_owned()
}

/// Trace of a square matrix.
pub fn trace(a: &CMatrix) -> C64 {
    (0..a.nrows()).map(|i| a[(i, i)]).sum()
}

/// `‖A†A − 1‖_max`.
pub fn unitarity_defect(a: &CMatrix) -> f64 {
    max_abs(&(a.adjoint() * a - identity(a.nrows())))
}

/// `‖A − A†‖_max`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

/// `A` is unitary within `tol`.
pub fn is_unitary(a: &CMatrix, tol: f64) -> bool {
    unitarity_defect(a) <= tol
}

/// `A` is Hermitian within `tol` (relative to `‖A‖_max`).
pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    hermiticity_defect(a) <= tol * max_abs(a).max(1.0)
}

/// `A` is upper triangular with a strictly positive real diagonal.
pub fn is_upper_triangular_positive_diag(a: &CMatrix, tol: f64) -> bool {
    let scale = max_abs(a).max(1.0) * tol;
    for i in 0..a.nrows() {
        for j in 0..i {
            if a[(i, j)].norm() > scale {
                return false;
            }
        }
        let d = a[(i, i)];
        if d.re <= 0.0 || d.im.abs() > scale {
            return false;
        }
    }
    true
}

/// Rescale `g` into `SL(dim, ℂ)` by the principal `dim`-th root of its determinant.
pub fn normalize_det(g: &CMatrix) -> CMatrix {
    let det = g.determinant();
    let root = det.powf(1.0 / g.nrows() as f64);
    g.map(|z| z / root)
}

/// Thin QR factorisation `a = q r` by modified Gram–Schmidt with one
/// re-orthogonalisation pass; `r` has a strictly positive real diagonal.
pub fn gram_schmidt_qr(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let m = a.nrows();
    let cols = a.ncols();
    let scale = frobenius(a).max(ABS_FLOOR);
    let mut q = CMatrix::zeros(m, cols);
    let mut r = CMatrix::zeros(cols, cols);
    for j in 0..cols {
        let mut v: CVector = a.column(j).into_owned();
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i);
                let proj = qi.dotc(&v);
                r[(i, j)] += proj;
                v -= qi * proj;
            }
        }
        let nrm = v.norm();
        if nrm < ABS_FLOOR * scale {
            return Err(Error::NonInvertible(format!(
                "pivot {j} has magnitude {nrm:e} after orthogonalisation"
            )));
        }
        r[(j, j)] = C64::new(nrm, 0.0);
        q.set_column(j, &(v / C64::new(nrm, 0.0)));
    }
    Ok((q, r))
}

/// Iwasawa factorisation `g = k b` with `k` unitary and `b` upper triangular
/// with positive diagonal. For `g ∈ SL(2n, ℂ)` both factors have determinant one.
pub fn iwasawa_decompose(g: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    gram_schmidt_qr(g)
}

/// Right Iwasawa factorisation `g = b_L k_R`, obtained from the QR
/// factorisation of the index-reversed adjoint.
pub fn iwasawa_right(g: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let dim = g.nrows();
    let rev = |m: &CMatrix| CMatrix::from_fn(dim, dim, |i, j| m[(dim - 1 - i, dim - 1 - j)]);
    let (q, r) = gram_schmidt_qr(&rev(g).adjoint())?;
    Ok((rev(&r.adjoint()), rev(&q.adjoint())))
}

/// Eigen-decomposition of a Hermitian matrix: `A = U diag(values) U†` with
/// values in descending order. Each eigenvector is normalised so that its
/// largest-modulus entry (lowest index on ties) is real and positive.
pub fn hermitian_eigensystem(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let defect = hermiticity_defect(a);
    if defect > 1e-12 * max_abs(a).max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let herm = (a + a.adjoint()).map(|z| z * 0.5);
    let eig = nalgebra::SymmetricEigen::new(herm);
    let dim = a.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut u = CMatrix::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        let mut v: CVector = eig.eigenvectors.column(src).into_owned();
        let mut best = 0;
        for i in 1..dim {
            if v[i].norm() > v[best].norm() * (1.0 + 1e-12) {
                best = i;
            }
        }
        let phase = v[best] / v[best].norm();
        v /= phase;
        u.set_column(col, &v);
    }
    Ok((values, u))
}

/// Singular value decomposition `χ = U diag(β) V†` with `β` descending.
pub fn singular_values(chi: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let svd = nalgebra::SVD::new(chi.clone(), true, true);
    let u = svd.u.expect("left singular vectors requested");
    let vt = svd.v_t.expect("right singular vectors requested");
    let m = svd.singular_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let beta: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = vt.adjoint();
    let mut us = CMatrix::zeros(u.nrows(), m);
    let mut vs = CMatrix::zeros(v.nrows(), m);
    for (col, &src) in order.iter().enumerate() {
        us.set_column(col, &u.column(src));
        vs.set_column(col, &v.column(src));
    }
    (us, beta, vs)
}

/// Polar decomposition `χ = p u` with `p` positive definite Hermitian and `u` unitary.
pub fn polar_decompose(chi: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let (u, beta, v) = singular_values(chi);
    let smallest = beta.last().copied().unwrap_or(0.0);
    if smallest <= 1e-13 * beta.first().copied().unwrap_or(0.0).max(ABS_FLOOR) {
        return Err(Error::Singular(format!("smallest singular value {smallest:e}")));
    }
    let p = &u * diag_real(&beta) * u.adjoint();
    let w = &u * v.adjoint();
    Ok((p, w))
}

/// Matrix exponential (scaling and squaring with Padé approximants).
pub fn expm(x: &CMatrix) -> CMatrix {
    x.clone().exp()
}

/// The duality pairing `⟨X, Y⟩ = Im tr(XY)`.
pub fn pairing(x: &CMatrix, y: &CMatrix) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..x.nrows() {
        for k in 0..x.ncols() {
            s += x[(i, k)] * y[(k, i)];
        }
    }
    s.im
}

/// Dual bases of `𝒦 = su(2n)` and `ℬ = Lie(SB(2n))` with
/// `Im tr(K_i B_j) = δ_ij`; together they span `sl(2n, ℂ)` over ℝ.
#[derive(Debug, Clone)]
pub struct LiePairingBasis {
    /// Half-dimension: matrices are `2n × 2n`.
    pub n: usize,
    /// Anti-Hermitian traceless basis of `𝒦`.
    pub basis_k: Vec<CMatrix>,
    /// Upper-triangular traceless, real-diagonal basis of `ℬ`.
    pub basis_b: Vec<CMatrix>,
}

impl LiePairingBasis {
    /// Build the dual pair of bases for `sl(2n, ℂ)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "n must be positive");
        let dim = 2 * n;
        let zero = || CMatrix::zeros(dim, dim);
        let one = C64::new(1.0, 0.0);
        let i1 = C64::new(0.0, 1.0);
        let mut basis_k = Vec::new();
        let mut basis_b = Vec::new();
        for p in 0..dim {
            for q in (p + 1)..dim {
                // E_pq pairs with i(E_pq + E_qp).
                let mut b = zero();
                b[(p, q)] = one;
                let mut k = zero();
                k[(p, q)] = i1;
                k[(q, p)] = i1;
                basis_b.push(b);
                basis_k.push(k);
                // i E_pq pairs with −(E_pq − E_qp).
                let mut b = zero();
                b[(p, q)] = i1;
                let mut k = zero();
                k[(p, q)] = -one;
                k[(q, p)] = one;
                basis_b.push(b);
                basis_k.push(k);
            }
        }
        let inv = 1.0 / dim as f64;
        for m in 0..(dim - 1) {
            let mut b = zero();
            b[(m, m)] = one;
            b[(dim - 1, dim - 1)] = -one;
            let mut k = zero();
            for d in 0..dim {
                let h = if d == m { 1.0 - inv } else { -inv };
                k[(d, d)] = C64::new(0.0, h);
            }
            basis_b.push(b);
            basis_k.push(k);
        }
        LiePairingBasis { n, basis_k, basis_b }
    }

    /// Real dimension of each of `𝒦` and `ℬ`, i.e. `4n² − 1`.
    pub fn half_dim(&self) -> usize {
        self.basis_k.len()
    }

    /// Concatenated real basis of `sl(2n, ℂ)`: the `𝒦` elements followed by the `ℬ` elements.
    pub fn basis_sl(&self) -> Vec<CMatrix> {
        self.basis_k.iter().chain(self.basis_b.iter()).cloned().collect()
    }

    /// Gram matrix of [`Self::basis_sl`] under `Im tr(XY)`.
    pub fn gram_sl(&self) -> DMatrix<f64> {
        let sl = self.basis_sl();
        DMatrix::from_fn(sl.len(), sl.len(), |i, j| pairing(&sl[i], &sl[j]))
    }

    /// 2-norm condition number of the Gram matrix.
    pub fn gram_condition(&self) -> f64 {
        let s = self.gram_sl().singular_values();
        let max = s.iter().cloned().fold(0.0, f64::max);
        let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }

    /// Element of `ℬ` with coordinates `a` in [`Self::basis_b`].
    pub fn combine_b(&self, a: &[f64]) -> CMatrix {
        let dim = 2 * self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for (bi, &ai) in self.basis_b.iter().zip(a) {
            m += bi * C64::new(ai, 0.0);
        }
        m
    }

    /// Element of `𝒦` with coordinates `c` in [`Self::basis_k`].
    pub fn combine_k(&self, c: &[f64]) -> CMatrix {
        let dim = 2 * self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for (ki, &ci) in self.basis_k.iter().zip(c) {
            m += ki * C64::new(ci, 0.0);
        }
        m
    }
}

/// The `𝒦`-component of `Z ∈ sl(2n, ℂ)` in the splitting `Z = π_𝒦 Z + π_ℬ Z`.
pub fn project_k(z: &CMatrix) -> CMatrix {
    let dim = z.nrows();
    CMatrix::from_fn(dim, dim, |i, j| {
        if i > j {
            z[(i, j)]
        } else if i < j {
            -z[(j, i)].conj()
        } else {
            C64::new(0.0, z[(i, i)].im)
        }
    })
}

/// The `ℬ`-component of `Z ∈ sl(2n, ℂ)` in the splitting `Z = π_𝒦 Z + π_ℬ Z`.
pub fn project_b(z: &CMatrix) -> CMatrix {
    z - project_k(z)
}

/// Complete the unit vector `e` to a unitary matrix whose last column is `e`.
pub fn unitary_with_last_column(e: &CVector) -> CMatrix {
    let m = e.len();
    let mut cols: Vec<CVector> = vec![e.clone()];
    for d in 0..m {
        if cols.len() == m {
            break;
        }
        let mut z = CVector::zeros(m);
        z[d] = C64::new(1.0, 0.0);
        for _pass in 0..2 {
            for c in &cols {
                let p = c.dotc(&z);
                z -= c * p;
            }
        }
        let nrm = z.norm();
        if nrm > 1e-6 {
            cols.push(z / C64::new(nrm, 0.0));
        }
    }
    let mut w = CMatrix::zeros(m, m);
    for (i, c) in cols.iter().skip(1).enumerate() {
        w.set_column(i, c);
    }
    w.set_column(m - 1, e);
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(dim: usize, seed: u64) -> CMatrix {
        let mut s = seed;
        CMatrix::from_fn(dim, dim, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            c64(a, b)
        })
    }

    #[test]
    fn iwasawa_identity_is_trivial() {
        let (k, b) = iwasawa_decompose(&identity(4)).unwrap();
        assert!(max_abs(&(k - identity(4))) < 1e-15);
        assert!(max_abs(&(b - identity(4))) < 1e-15);
    }

    #[test]
    fn iwasawa_fixes_triangular_input() {
        let mut b = CMatrix::zeros(3, 3);
        b[(0, 0)] = c64(2.0, 0.0);
        b[(1, 1)] = c64(0.5, 0.0);
        b[(2, 2)] = c64(1.0, 0.0);
        b[(0, 1)] = c64(0.3, -0.2);
        b[(1, 2)] = c64(-1.0, 0.7);
        let (k, bb) = iwasawa_decompose(&b).unwrap();
        assert!(max_abs(&(k - identity(3))) < 1e-14);
        assert!(max_abs(&(bb - &b)) < 1e-14);
    }

    #[test]
    fn iwasawa_right_fixes_unitary_input() {
        let (k, _) = iwasawa_decompose(&normalize_det(&sample(4, 3))).unwrap();
        let (bl, kr) = iwasawa_right(&k).unwrap();
        assert!(max_abs(&(bl - identity(4))) < 1e-13);
        assert!(max_abs(&(kr - &k)) < 1e-13);
    }

    #[test]
    fn iwasawa_reconstructs_random_sl() {
        for seed in 0..20 {
            let g = normalize_det(&sample(6, seed));
            let (k, b) = iwasawa_decompose(&g).unwrap();
            assert!(max_abs(&(&k * &b - &g)) <= 1e-12 * max_abs(&g));
            assert!(is_unitary(&k, 1e-12));
            assert!(is_upper_triangular_positive_diag(&b, 1e-12));
            assert!((k.determinant() - c64(1.0, 0.0)).norm() < 1e-12);
            let (bl, kr) = iwasawa_right(&g).unwrap();
            assert!(max_abs(&(&bl * &kr - &g)) <= 1e-12 * max_abs(&g));
            assert!(is_upper_triangular_positive_diag(&bl, 1e-12));
            assert!((bl.determinant() - c64(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn iwasawa_rejects_singular_input() {
        let mut g = sample(3, 1);
        let c0 = g.column(0).into_owned();
        g.set_column(2, &(c0 * c64(2.0, 0.0)));
        assert!(matches!(iwasawa_decompose(&g), Err(Error::NonInvertible(_))));
    }

    #[test]
    fn eigensystem_of_diagonal_is_permutation() {
        let a = diag_real(&[1.0, 3.0, -2.0]);
        let (vals, u) = hermitian_eigensystem(&a).unwrap();
        assert_eq!(vals, vec![3.0, 1.0, -2.0]);
        assert!((u[(1, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((u[(0, 1)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((u[(2, 2)] - c64(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eigensystem_reconstructs_and_is_deterministic() {
        let m = sample(6, 9);
        let a = &m + m.adjoint();
        let (vals, u) = hermitian_eigensystem(&a).unwrap();
        let rec = &u * diag_real(&vals) * u.adjoint();
        assert!(max_abs(&(rec - &a)) <= 1e-11 * max_abs(&a));
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        let (vals2, u2) = hermitian_eigensystem(&a).unwrap();
        assert_eq!(vals, vals2);
        assert_eq!(u, u2);
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn svd_and_polar_reconstruct() {
        let chi = sample(4, 5);
        let (u, beta, v) = singular_values(&chi);
        assert!(max_abs(&(&u * diag_real(&beta) * v.adjoint() - &chi)) <= 1e-11 * max_abs(&chi));
        assert!(beta.windows(2).all(|w| w[0] >= w[1]));
        let (ev, _) = hermitian_eigensystem(&(&chi * chi.adjoint())).unwrap();
        for (b, e) in beta.iter().zip(&ev) {
            assert!((b * b - e).abs() < 1e-10);
        }
        let (p, w) = polar_decompose(&chi).unwrap();
        assert!(max_abs(&(&p * &w - &chi)) <= 1e-12 * max_abs(&chi) * 10.0);
        assert!(max_abs(&(&p * &p - &chi * chi.adjoint())) < 1e-10);
        assert!(is_unitary(&w, 1e-12));
        let (_, b0, _) = singular_values(&CMatrix::zeros(3, 3));
        assert!(b0.iter().all(|&b| b == 0.0));
        assert!(matches!(polar_decompose(&CMatrix::zeros(2, 2)), Err(Error::Singular(_))));
    }

    #[test]
    fn pairing_basis_is_dual() {
        for n in 1..=3 {
            let basis = LiePairingBasis::new(n);
            assert_eq!(basis.half_dim(), 4 * n * n - 1);
            for (i, k) in basis.basis_k.iter().enumerate() {
                assert!(max_abs(&(k + k.adjoint())) < 1e-15);
                assert!(trace(k).norm() < 1e-14);
                for (j, b) in basis.basis_b.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((pairing(k, b) - expect).abs() < 1e-12);
                }
            }
            assert!(basis.gram_condition().is_finite());
        }
    }

    #[test]
    fn projections_split_sl() {
        let basis = LiePairingBasis::new(2);
        let mut z = sample(4, 17);
        let t = trace(&z) / c64(4.0, 0.0);
        for i in 0..4 {
            z[(i, i)] -= t;
        }
        let k = project_k(&z);
        let b = project_b(&z);
        assert!(max_abs(&(&k + k.adjoint())) < 1e-15);
        assert!(trace(&k).norm() < 1e-14 && trace(&b).norm() < 1e-14);
        for i in 0..4 {
            assert!(b[(i, i)].im.abs() < 1e-15);
            for j in 0..i {
                assert!(b[(i, j)].norm() < 1e-15);
            }
        }
        // Coordinates obtained through the pairing agree with the direct split.
        let a: Vec<f64> = basis.basis_k.iter().map(|ki| pairing(ki, &z)).collect();
        let c: Vec<f64> = basis.basis_b.iter().map(|bi| pairing(bi, &z)).collect();
        assert!(max_abs(&(basis.combine_b(&a) - &b)) < 1e-13);
        assert!(max_abs(&(basis.combine_k(&c) - &k)) < 1e-13);
    }
}
