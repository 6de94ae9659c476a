//! Deterministic random sampling of parameters, chart points and group elements.
//!
//! All randomness flows from a seeded SplitMix64 generator so that every
//! command, test and acceptance run is reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;

use crate::algebra::{expm, gram_schmidt_qr, normalize_det, CMatrix, LiePairingBasis, C64};
use crate::hamiltonians::VdParams;
use crate::model::Params;

/// The crate-wide pseudo-random generator.
pub type Rng64 = SplitMix64;

/// Generator seeded with `seed`.
pub fn rng(seed: u64) -> Rng64 {
    SplitMix64::seed_from_u64(seed)
}

/// Uniform sample from `[a, b)`.
pub fn uniform(r: &mut Rng64, a: f64, b: f64) -> f64 {
    a + (b - a) * r.random::<f64>()
}

/// Standard normal sample.
pub fn normal(r: &mut Rng64) -> f64 {
    r.sample(StandardNormal)
}

/// Complex sample with independent standard normal parts.
pub fn complex_normal(r: &mut Rng64) -> C64 {
    C64::new(normal(r), normal(r))
}

/// `m` angles uniform in `[0, 2π)`.
pub fn angles(r: &mut Rng64, m: usize) -> Vec<f64> {
    (0..m).map(|_| uniform(r, 0.0, std::f64::consts::TAU)).collect()
}

/// Unit-modulus phases `e^{iφ}` with uniform `φ`.
pub fn phases(r: &mut Rng64, m: usize) -> Vec<C64> {
    angles(r, m).into_iter().map(|a| C64::from_polar(1.0, a)).collect()
}

/// Gaussian matrix rescaled into `SL(dim, ℂ)`.
pub fn random_sl(r: &mut Rng64, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| complex_normal(r));
    normalize_det(&g)
}

/// Haar-distributed element of `SU(dim)`.
pub fn random_su(r: &mut Rng64, dim: usize) -> CMatrix {
    loop {
        let g = CMatrix::from_fn(dim, dim, |_, _| complex_normal(r));
        if let Ok((q, _)) = gram_schmidt_qr(&g) {
            return normalize_det(&q);
        }
    }
}

/// `exp(X)` for `X ∈ sl(2n, ℂ)` with uniform coordinates in `[−scale, scale)`
/// along the `𝒦 ⊕ ℬ` basis.
pub fn sl_near_identity(r: &mut Rng64, n: usize, scale: f64) -> CMatrix {
    let basis = LiePairingBasis::new(n);
    let c: Vec<f64> = (0..basis.half_dim()).map(|_| uniform(r, -scale, scale)).collect();
    let d: Vec<f64> = (0..basis.half_dim()).map(|_| uniform(r, -scale, scale)).collect();
    expm(&(basis.combine_k(&c) + basis.combine_b(&d)))
}

/// Van Diejen couplings with `a, b ∈ [−1.5, 1.5)`, `c, d ∈ [−1, 1)`, `μ ∈ [0.2, 1)`.
pub fn vd_params(r: &mut Rng64) -> VdParams {
    let (a, b) = (uniform(r, -1.5, 1.5), uniform(r, -1.5, 1.5));
    let (c, d) = (uniform(r, -1.0, 1.0), uniform(r, -1.0, 1.0));
    let mu = uniform(r, 0.2, 1.0);
    VdParams { a, b, c, d, mu }
}

/// Interior point of `𝒟₊`: `λ_n − max(|u|,|v|)` and each excess gap
/// `λ_j − λ_{j+1} − μ` drawn uniformly from `(lo, hi)`.
pub fn lambda_interior(r: &mut Rng64, p: &Params, lo: f64, hi: f64) -> Vec<f64> {
    let n = p.n;
    let mut lam = vec![0.0; n];
    lam[n - 1] = p.floor() + uniform(r, lo, hi);
    for j in (0..n - 1).rev() {
        lam[j] = lam[j + 1] + p.mu + uniform(r, lo, hi);
    }
    lam
}

/// Interior point of `𝒟̂₊` with excess gaps drawn uniformly from `(lo, hi)`.
pub fn hat_interior(r: &mut Rng64, p: &Params, lo: f64, hi: f64) -> Vec<f64> {
    let mut hat = vec![0.0; p.n];
    hat[0] = p.s() - uniform(r, lo, hi);
    for j in 1..p.n {
        hat[j] = hat[j - 1] - p.mu - uniform(r, lo, hi);
    }
    hat
}

/// `ζ ∈ ℂⁿ` with Gaussian entries of standard deviation `scale` per real component.
pub fn zeta(r: &mut Rng64, n: usize, scale: f64) -> Vec<C64> {
    (0..n).map(|_| complex_normal(r) * scale).collect()
}

/// `ζ` with at least one vanishing component (a chart-boundary point).
pub fn boundary_zeta(r: &mut Rng64, n: usize, scale: f64) -> Vec<C64> {
    let mut z = zeta(r, n, scale);
    let k = r.random_range(0..n);
    z[k] = C64::new(0.0, 0.0);
    for zj in z.iter_mut() {
        if r.random::<f64>() < 0.25 {
            *zj = C64::new(0.0, 0.0);
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_unitary, max_abs};
    use crate::model::{in_d_plus, in_dhat_plus};

    #[test]
    fn generator_is_deterministic() {
        let a: Vec<u64> = {
            let mut r = rng(7);
            (0..4).map(|_| r.random::<u64>()).collect()
        };
        let b: Vec<u64> = {
            let mut r = rng(7);
            (0..4).map(|_| r.random::<u64>()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn group_samples_are_in_the_group() {
        let mut r = rng(1);
        let k = random_su(&mut r, 4);
        assert!(is_unitary(&k, 1e-12));
        assert!((k.determinant() - C64::new(1.0, 0.0)).norm() < 1e-12);
        let g = random_sl(&mut r, 4);
        assert!((g.determinant() - C64::new(1.0, 0.0)).norm() < 1e-12 * max_abs(&g).powi(4));
    }

    #[test]
    fn domain_samples_are_interior() {
        let mut r = rng(2);
        let p = Params::new(3, 0.5, -1.0, 0.3).unwrap();
        for _ in 0..50 {
            assert!(in_d_plus(&lambda_interior(&mut r, &p, 0.01, 1.0), &p));
            assert!(in_dhat_plus(&hat_interior(&mut r, &p, 0.01, 1.0), &p));
        }
    }
}
