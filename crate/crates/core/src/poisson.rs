//! Finite-difference Poisson brackets on the Heisenberg double and on `K`.
//!
//! For `F` on `SL(2n, ℂ)` the left and right derivatives are defined by
//! `d/ds F(e^{sX} g e^{sY}) = Im tr(X∇F + Y∇'F)`. With the dual bases
//! `{K_i}`, `{B_i}` of `𝒦` and `ℬ` (`Im tr(K_iB_j) = δ_ij`, both subalgebras
//! isotropic) this reads `∇F = Σ_i (∂_{K_i}F) B_i + (∂_{B_i}F) K_i`, so every
//! bracket reduces to directional derivatives along basis elements, which are
//! taken by central differences with one Richardson step.

use crate::algebra::{
    block2, expm, grading, identity, max_abs, normalize_det, polar_decompose, project_b, project_k, trace, CMatrix,
    LiePairingBasis, C64,
};
use crate::error::{Error, Result};
use crate::model::Params;

/// Finite-difference settings.
#[derive(Debug, Clone, Copy)]
pub struct FdConfig {
    /// Step size.
    pub h: f64,
    /// Combine steps `h` and `h/2` by Richardson extrapolation.
    pub richardson: bool,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { h: 1e-5, richardson: true }
    }
}

/// Side on which a one-parameter subgroup acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `g ↦ e^{sX} g`.
    Left,
    /// `g ↦ g e^{sX}`.
    Right,
}

fn moved(g: &CMatrix, x: &CMatrix, s: f64, side: Side) -> CMatrix {
    let e = expm(&x.map(|z| z * s));
    match side {
        Side::Left => e * g,
        Side::Right => g * e,
    }
}

/// `d/ds F(e^{sX}g)` (left) or `d/ds F(g e^{sX})` (right) at `s = 0`.
pub fn directional<F: Fn(&CMatrix) -> f64>(f: &F, g: &CMatrix, x: &CMatrix, side: Side, cfg: FdConfig) -> f64 {
    let central = |h: f64| (f(&moved(g, x, h, side)) - f(&moved(g, x, -h, side))) / (2.0 * h);
    if cfg.richardson {
        (4.0 * central(0.5 * cfg.h) - central(cfg.h)) / 3.0
    } else {
        central(cfg.h)
    }
}

/// Coordinates of a derivative: `∂_{K_i}F` and `∂_{B_i}F`.
#[derive(Debug, Clone)]
pub struct Gradient {
    /// Derivatives along the `𝒦` basis.
    pub dk: Vec<f64>,
    /// Derivatives along the `ℬ` basis.
    pub db: Vec<f64>,
}

impl Gradient {
    /// The `sl(2n, ℂ)`-valued derivative `Σ ∂_{K_i}F B_i + ∂_{B_i}F K_i`.
    pub fn matrix(&self, basis: &LiePairingBasis) -> CMatrix {
        basis.combine_b(&self.dk) + basis.combine_k(&self.db)
    }
}

fn gradient<F: Fn(&CMatrix) -> f64>(f: &F, g: &CMatrix, basis: &LiePairingBasis, side: Side, cfg: FdConfig) -> Gradient {
    Gradient {
        dk: basis.basis_k.iter().map(|x| directional(f, g, x, side, cfg)).collect(),
        db: basis.basis_b.iter().map(|x| directional(f, g, x, side, cfg)).collect(),
    }
}

/// Left derivative `∇F(g)` in coordinates.
pub fn grad_left<F: Fn(&CMatrix) -> f64>(f: &F, g: &CMatrix, basis: &LiePairingBasis, cfg: FdConfig) -> Gradient {
    gradient(f, g, basis, Side::Left, cfg)
}

/// Right derivative `∇'F(g)` in coordinates.
pub fn grad_right<F: Fn(&CMatrix) -> f64>(f: &F, g: &CMatrix, basis: &LiePairingBasis, cfg: FdConfig) -> Gradient {
    gradient(f, g, basis, Side::Right, cfg)
}

fn pair_r(a: &Gradient, b: &Gradient) -> f64 {
    // Im tr(∇F R(∇H)) with R = ½(π_𝒦 − π_ℬ)
    0.5 * a.dk.iter().zip(&b.db).zip(a.db.iter().zip(&b.dk)).map(|((fk, hb), (fb, hk))| fk * hb - fb * hk).sum::<f64>()
}

/// The Heisenberg-double bracket `Im tr(∇F R(∇H) + ∇'F R(∇'H))`.
pub fn bracket_heisenberg<F, H>(f: &F, h: &H, g: &CMatrix, basis: &LiePairingBasis, cfg: FdConfig) -> f64
where
    F: Fn(&CMatrix) -> f64,
    H: Fn(&CMatrix) -> f64,
{
    let (fl, fr) = (grad_left(f, g, basis, cfg), grad_right(f, g, basis, cfg));
    let (hl, hr) = (grad_left(h, g, basis, cfg), grad_right(h, g, basis, cfg));
    pair_r(&fl, &hl) + pair_r(&fr, &hr)
}

/// `ℬ`-valued derivatives `(Df, D'f)` of a function on `K`, defined by
/// `d/ds f(e^{sX} k e^{sY}) = Im tr(X Df + Y D'f)` for `X, Y ∈ 𝒦`.
pub fn k_derivatives<F: Fn(&CMatrix) -> f64>(
    f: &F,
    k: &CMatrix,
    basis: &LiePairingBasis,
    cfg: FdConfig,
) -> (CMatrix, CMatrix) {
    let left: Vec<f64> = basis.basis_k.iter().map(|x| directional(f, k, x, Side::Left, cfg)).collect();
    let right: Vec<f64> = basis.basis_k.iter().map(|x| directional(f, k, x, Side::Right, cfg)).collect();
    (basis.combine_b(&left), basis.combine_b(&right))
}

/// The bracket `{f, h}_K(k) = Im tr(Df(k) k D'h(k) k^{−1})` on `K = SU(2n)`.
pub fn bracket_k<F, H>(f: &F, h: &H, k: &CMatrix, basis: &LiePairingBasis, cfg: FdConfig) -> f64
where
    F: Fn(&CMatrix) -> f64,
    H: Fn(&CMatrix) -> f64,
{
    let (df, _) = k_derivatives(f, k, basis, cfg);
    let (_, dh) = k_derivatives(h, k, basis, cfg);
    trace(&(df * k * dh * k.adjoint())).im
}

/// `h_j(k) = ½ tr((k†IkI)^j)`.
pub fn h_k(j: u32, k: &CMatrix) -> f64 {
    let i = grading(k.nrows() / 2);
    let m = k.adjoint() * &i * k * &i;
    0.5 * trace(&m.pow(j)).re
}

/// `ℋ_j(g) = h_j(k)` with `g = kb`.
pub fn cal_h(j: u32, g: &CMatrix) -> f64 {
    match crate::algebra::iwasawa_decompose(g) {
        Ok((k, _)) => h_k(j, &k),
        Err(_) => f64::NAN,
    }
}

/// `Ĥ_j(g) = ½ tr((bb†)^j) = ½ tr((g†g)^j)`.
pub fn cal_h_hat(j: u32, g: &CMatrix) -> f64 {
    0.5 * trace(&(g.adjoint() * g).pow(j)).re
}

fn block_diag_basis(n: usize, fix_last: bool) -> Vec<CMatrix> {
    // Lie algebra of S(U(n) × U(n)); with `fix_last` the first block also fixes e_n.
    let dim = 2 * n;
    let mut out = Vec::new();
    let one = C64::new(1.0, 0.0);
    let i1 = C64::new(0.0, 1.0);
    for blk in 0..2 {
        let off = blk * n;
        let top = if blk == 0 && fix_last { n - 1 } else { n };
        for p in 0..top {
            for q in p + 1..top {
                let mut a = CMatrix::zeros(dim, dim);
                a[(off + p, off + q)] = one;
                a[(off + q, off + p)] = -one;
                out.push(a);
                let mut s = CMatrix::zeros(dim, dim);
                s[(off + p, off + q)] = i1;
                s[(off + q, off + p)] = i1;
                out.push(s);
            }
        }
    }
    let diag: Vec<usize> = (0..dim).filter(|&d| !(fix_last && d == n - 1)).collect();
    for w in diag.windows(2) {
        let mut h = CMatrix::zeros(dim, dim);
        h[(w[0], w[0])] = i1;
        h[(w[1], w[1])] = -i1;
        out.push(h);
    }
    out
}

/// Largest directional derivative of `F` along the gauge action
/// `g ↦ η_L g η_R^{−1}`, with `η_L` in the stabiliser of `ŵ = r e_n` and
/// `η_R ∈ S(U(n) × U(n))`, relative to `max(1, |F(g)|)` (finite differences
/// of large values carry rounding noise proportional to `|F|`).
pub fn gauge_invariance_defect<F: Fn(&CMatrix) -> f64>(f: &F, g: &CMatrix, p: &Params, cfg: FdConfig) -> f64 {
    let left = block_diag_basis(p.n, true);
    let right = block_diag_basis(p.n, false);
    let dl = left.iter().map(|x| directional(f, g, x, Side::Left, cfg).abs());
    let dr = right.iter().map(|x| directional(f, g, x, Side::Right, cfg).abs());
    dl.chain(dr).fold(0.0, f64::max) / f(g).abs().max(1.0)
}

/// One RK4 step of the collective flow `k̇ = π_𝒦(k D'h(k) k^{−1}) k`,
/// `ḃ = −D'h(k) b`, followed by re-projection of `k` to `SU(2n)` and of `b`
/// to upper triangular form with determinant one.
pub fn collective_flow_step<H: Fn(&CMatrix) -> f64>(
    h: &H,
    state: (&CMatrix, &CMatrix),
    dt: f64,
    basis: &LiePairingBasis,
    cfg: FdConfig,
) -> Result<(CMatrix, CMatrix)> {
    let rhs = |k: &CMatrix, b: &CMatrix| -> (CMatrix, CMatrix) {
        let (_, dp) = k_derivatives(h, k, basis, cfg);
        let kinv = k.clone().try_inverse().unwrap_or_else(|| k.adjoint());
        let kd = project_k(&(k * &dp * kinv)) * k;
        let bd = -(dp * b);
        (kd, bd)
    };
    let (k0, b0) = state;
    let sc = |m: &CMatrix, s: f64| m.map(|z| z * s);
    let (k1, l1) = rhs(k0, b0);
    let (k2, l2) = rhs(&(k0 + sc(&k1, 0.5 * dt)), &(b0 + sc(&l1, 0.5 * dt)));
    let (k3, l3) = rhs(&(k0 + sc(&k2, 0.5 * dt)), &(b0 + sc(&l2, 0.5 * dt)));
    let (k4, l4) = rhs(&(k0 + sc(&k3, dt)), &(b0 + sc(&l3, dt)));
    let k_raw = k0 + sc(&(k1 + sc(&k2, 2.0) + sc(&k3, 2.0) + k4), dt / 6.0);
    let b_raw = b0 + sc(&(l1 + sc(&l2, 2.0) + sc(&l3, 2.0) + l4), dt / 6.0);
    let (_, u) = polar_decompose(&k_raw).map_err(|e| Error::StepRejected(e.to_string()))?;
    let k_new = normalize_det(&u);
    let dim = b_raw.nrows();
    let mut b_tri = CMatrix::from_fn(dim, dim, |i, j| if i > j { C64::new(0.0, 0.0) } else { b_raw[(i, j)] });
    for i in 0..dim {
        b_tri[(i, i)] = C64::new(b_tri[(i, i)].re, 0.0);
    }
    let b_new = normalize_det(&b_tri);
    let corr = max_abs(&(&k_new - &k_raw)).max(max_abs(&(&b_new - &b_raw)) / max_abs(&b_raw).max(1.0));
    if corr > 1e-6 {
        return Err(Error::StepRejected(format!("projection correction {corr:e}")));
    }
    Ok((k_new, b_new))
}

/// `‖π_ℬ(D'h − k†(Dh)k)‖`, which vanishes for every `h` on `K`.
pub fn derivative_identity_defect<F: Fn(&CMatrix) -> f64>(f: &F, k: &CMatrix, basis: &LiePairingBasis, cfg: FdConfig) -> f64 {
    let (d, dp) = k_derivatives(f, k, basis, cfg);
    max_abs(&project_b(&(dp - k.adjoint() * d * k)))
}

/// Block-diagonal `diag(A, B)` helper for tests and callers.
pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.nrows();
    block2(a, &CMatrix::zeros(n, n), &CMatrix::zeros(n, n), b)
}

/// Identity state `(k, b) = (1, 1)` of size `2n`.
pub fn identity_state(n: usize) -> (CMatrix, CMatrix) {
    (identity(2 * n), identity(2 * n))
}
