//! Group-level realisation of admissible triples.
//!
//! Points of the constraint surface `ℳ₀ ⊂ SL(2n, ℂ)` are built from
//! admissible triples as `g = k b` with quasi-diagonal `b`; conversely the
//! triple is read off from `g` after transporting it into the slice `ℳ₁`
//! where `b` is quasi-diagonal. The eigenvalue map `ℒ` and the eigenphases
//! of `k†IkI` (the dual action variables) are computed here as well.

use serde_json::Value;

use crate::algebra::{
    block, block2, diag_complex, diag_real, grading, hermitian_eigensystem, identity, iwasawa_decompose,
    iwasawa_right, max_abs, normalize_det, singular_values, unitary_with_last_column, CMatrix, CVector, C64,
};
use crate::error::{Error, Result};
use crate::model::{lambda_blocks, Params};
use crate::triples::{triple_from_zeta, Triple};

/// Tolerance of the constraint-surface membership test.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Momentum data `σ`, `v̂` and `ŵ = (v̂, 0)` with `σσ† = α²1 + v̂v̂†`.
#[derive(Debug, Clone)]
pub struct MomentumData {
    /// Upper triangular `σ` with positive diagonal.
    pub sigma: CMatrix,
    /// `v̂ = r e_n` with `r² = α²(α^{−2n} − 1)`.
    pub vhat: CVector,
    /// `ŵ = (v̂, 0) ∈ ℂ^{2n}`.
    pub what: CVector,
}

/// Deterministic momentum data with `v̂ = r e_n`; then
/// `σ = diag(α, …, α, α^{1−n})`.
pub fn momentum_sigma(p: &Params) -> MomentumData {
    let n = p.n;
    let a = p.alpha();
    let r = p.wnorm2().sqrt();
    let mut d = vec![a; n];
    d[n - 1] = (a * a + r * r).sqrt();
    let mut vhat = CVector::zeros(n);
    vhat[n - 1] = C64::new(r, 0.0);
    let mut what = CVector::zeros(2 * n);
    what[n - 1] = C64::new(r, 0.0);
    MomentumData { sigma: diag_real(&d), vhat, what }
}

/// A point `g ∈ SL(2n, ℂ)` with its two Iwasawa factorisations
/// `g = k b = b_L k_R`.
#[derive(Debug, Clone)]
pub struct GroupPoint {
    /// The group element.
    pub g: CMatrix,
    /// Unitary factor of `g = k b`.
    pub k: CMatrix,
    /// Upper triangular factor of `g = k b`.
    pub b: CMatrix,
    /// Upper triangular factor of `g = b_L k_R`.
    pub b_l: CMatrix,
    /// Unitary factor of `g = b_L k_R`.
    pub k_r: CMatrix,
}

impl GroupPoint {
    /// Factorise `g`.
    pub fn new(g: CMatrix) -> Result<Self> {
        let (k, b) = iwasawa_decompose(&g)?;
        let (b_l, k_r) = iwasawa_right(&g)?;
        Ok(GroupPoint { g, k, b, b_l, k_r })
    }

    /// Half the size of `g`.
    pub fn n(&self) -> usize {
        self.g.nrows() / 2
    }

    /// JSON as a `2n × 2n` array of `[re, im]` pairs.
    pub fn to_json(&self) -> Value {
        let m = self.g.nrows();
        Value::from(
            (0..m)
                .map(|i| Value::from((0..m).map(|j| Value::from(vec![self.g[(i, j)].re, self.g[(i, j)].im])).collect::<Vec<_>>()))
                .collect::<Vec<_>>(),
        )
    }

    /// Parse a JSON array; when `require_m0` is set the constraints are
    /// re-checked and violations rejected.
    pub fn from_json(v: &Value, p: &Params, require_m0: bool) -> Result<Self> {
        let rows: Vec<Vec<[f64; 2]>> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Domain(format!("bad group element JSON: {e}")))?;
        let m = 2 * p.n;
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::Domain(format!("group element must be {m}x{m}")));
        }
        let g = CMatrix::from_fn(m, m, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
        let gp = GroupPoint::new(g)?;
        if require_m0 {
            let rep = check_constraints(&gp, p);
            if !rep.in_m0 {
                return Err(Error::Domain(format!("group element violates the constraints (max residual {:e})", rep.max())));
            }
        }
        Ok(gp)
    }
}

/// Build `g = k b` from an admissible triple.
pub fn reconstruct_g(t: &Triple, p: &Params) -> Result<GroupPoint> {
    reconstruct_g_with(t, p, &identity(2 * p.n))
}

/// [`reconstruct_g`] with the eigenvector gauge changed by a block-diagonal
/// unitary `mix = diag(A, B)` acting on the `±1` eigenbases of `ρQρ`.
pub fn reconstruct_g_with(t: &Triple, p: &Params, mix: &CMatrix) -> Result<GroupPoint> {
    let n = p.n;
    if t.n() != n {
        return Err(Error::Domain(format!("triple has n = {}, params have n = {n}", t.n())));
    }
    let blocks = lambda_blocks(&t.lambda, p)?;
    let rho = &blocks.rho;
    let m = rho * &t.q * rho;
    let (vals, u) = hermitian_eigensystem(&m).map_err(|e| Error::ReconstructionFailure(e.to_string()))?;
    if let Some(v) = vals.iter().find(|v| v.abs() < 1e-8) {
        return Err(Error::ReconstructionFailure(format!("eigenvalue {v:e} of Q does not split into ±1")));
    }
    let positive = vals.iter().filter(|v| **v > 0.0).count();
    if positive != n {
        return Err(Error::ReconstructionFailure(format!("Q has {positive} positive eigenvalues, expected {n}")));
    }
    let kappa = normalize_det(&(u * mix).adjoint());
    let v = &kappa * rho * &t.wtilde;
    let top: CVector = v.rows(0, n).into_owned();
    let r = top.norm();
    if r <= 1e-300 {
        return Err(Error::ReconstructionFailure("w vanishes".into()));
    }
    let h = unitary_with_last_column(&(top / C64::new(r, 0.0))).adjoint();
    let c = h.determinant().powf(-1.0 / n as f64);
    let k_plus = block2(&h, &CMatrix::zeros(n, n), &CMatrix::zeros(n, n), &diag_complex(&vec![c; n]));
    let k = k_plus * kappa;
    let g = &k * &blocks.b;
    GroupPoint::new(g)
}

/// Residuals of the moment-map constraints and of the quadratic identity
/// `y²gg† − ½gg†(1 − I)gg† = ½α²(1 + I) + ŵŵ†`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ConstraintReport {
    /// Lower-left block of `b_L`.
    pub b_l_lower: f64,
    /// Upper-left block of `b_L` against `y^{−1}σ`.
    pub b_l_top: f64,
    /// Lower-right block of `b_L` against `y·1`.
    pub b_l_bottom: f64,
    /// Lower-left block of `b`.
    pub b_lower: f64,
    /// Upper-left block of `b` against `x·1`.
    pub b_top: f64,
    /// Lower-right block of `b` against `x^{−1}·1`.
    pub b_bottom: f64,
    /// Quadratic identity, relative to `max(1, ‖gg†‖²)`.
    pub quadratic: f64,
    /// All residuals below [`CONSTRAINT_TOL`].
    pub in_m0: bool,
}

impl ConstraintReport {
    /// Largest residual.
    pub fn max(&self) -> f64 {
        [self.b_l_lower, self.b_l_top, self.b_l_bottom, self.b_lower, self.b_top, self.b_bottom, self.quadratic]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Relative residual of the quadratic identity satisfied on `ℳ₀`.
pub fn quadratic_residual(g: &CMatrix, p: &Params) -> f64 {
    let n = p.n;
    let dim = 2 * n;
    let one = identity(dim);
    let i = grading(n);
    let gg = g * g.adjoint();
    let w = momentum_sigma(p).what;
    let a2 = p.alpha().powi(2);
    let lhs = gg.map(|z| z * p.y().powi(2)) - (&gg * (&one - &i) * &gg).map(|z| z * 0.5);
    let rhs = (&one + &i).map(|z| z * (0.5 * a2)) + &w * w.adjoint();
    max_abs(&(lhs - rhs)) / max_abs(&gg).powi(2).max(1.0)
}

/// Check the block forms of `b_L` and `b` and the quadratic identity.
pub fn check_constraints(gp: &GroupPoint, p: &Params) -> ConstraintReport {
    let n = p.n;
    let sigma = momentum_sigma(p).sigma;
    let (x, y) = (p.x(), p.y());
    let dev = |m: CMatrix, target: CMatrix| max_abs(&(m - target));
    let scal = |s: f64| diag_real(&vec![s; n]);
    let zero = CMatrix::zeros(n, n);
    let scale_l = max_abs(&gp.b_l).max(1.0);
    let scale = max_abs(&gp.b).max(1.0);
    let mut rep = ConstraintReport {
        b_l_lower: dev(block(&gp.b_l, n, 1, 0), zero.clone()) / scale_l,
        b_l_top: dev(block(&gp.b_l, n, 0, 0), sigma.map(|z| z / y)) / scale_l,
        b_l_bottom: dev(block(&gp.b_l, n, 1, 1), scal(y)) / scale_l,
        b_lower: dev(block(&gp.b, n, 1, 0), zero) / scale,
        b_top: dev(block(&gp.b, n, 0, 0), scal(x)) / scale,
        b_bottom: dev(block(&gp.b, n, 1, 1), scal(1.0 / x)) / scale,
        quadratic: quadratic_residual(&gp.g, p),
        in_m0: false,
    };
    rep.in_m0 = rep.max() < CONSTRAINT_TOL;
    rep
}

/// `λ` from the singular values `β` of the upper-right block of `b`, via
/// `β² = 2(cosh 2λ − cosh 2v)`; descending.
fn lambda_from_beta(beta: &[f64], p: &Params) -> Vec<f64> {
    beta.iter().map(|b| 0.5 * (0.5 * b * b + (2.0 * p.v).cosh()).acosh()).collect()
}

/// The eigenvalue map `ℒ`: `e^{±2λ_i}` are the eigenvalues of `bb†`.
pub fn eigen_lambda(gp: &GroupPoint, p: &Params) -> Vec<f64> {
    let chi = block(&gp.b, p.n, 0, 1);
    let (_, beta, _) = singular_values(&chi);
    lambda_from_beta(&beta, p)
}

/// Transport `g ∈ ℳ₀` into `ℳ₁` by a right `K₊` gauge transformation:
/// returns `g₁ = g η_R^{−1}` with quasi-diagonal `b`-factor, and `η_R`.
pub fn gauge_to_m1(gp: &GroupPoint, p: &Params) -> Result<(GroupPoint, CMatrix)> {
    let n = p.n;
    let chi = block(&gp.b, n, 0, 1);
    let (u, beta, v) = singular_values(&chi);
    for j in 0..n.saturating_sub(1) {
        if beta[j] - beta[j + 1] < 1e-10 {
            return Err(Error::DegenerateSingularValues(format!("beta_{} - beta_{} = {:e}", j + 1, j + 2, beta[j] - beta[j + 1])));
        }
    }
    let a = u.adjoint();
    let bm = v.adjoint();
    let det = a.determinant() * bm.determinant();
    let c = det.powf(-1.0 / (2 * n) as f64);
    let eta = block2(&a, &CMatrix::zeros(n, n), &CMatrix::zeros(n, n), &bm).map(|z| z * c);
    let g1 = &gp.g * eta.adjoint();
    Ok((GroupPoint::new(g1)?, eta))
}

/// Read the admissible triple `(ρk†ŵ, ρk†Ikρ, λ)` off `g₁ ∈ ℳ₁`.
pub fn triple_from_g(g1: &GroupPoint, p: &Params) -> Result<Triple> {
    let n = p.n;
    let chi = block(&g1.b, n, 0, 1);
    let scale = max_abs(&chi).max(1.0);
    let mut defect: f64 = 0.0;
    let mut beta = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                defect = defect.max(chi[(i, i)].im.abs()).max((-chi[(i, i)].re).max(0.0));
                beta[i] = chi[(i, i)].re;
            } else {
                defect = defect.max(chi[(i, j)].norm());
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        defect = defect.max((beta[i + 1] - beta[i]).max(0.0));
    }
    if defect > 1e-9 * scale {
        return Err(Error::NotQuasiDiagonal(defect));
    }
    let lambda = lambda_from_beta(&beta, p);
    let blocks = lambda_blocks(&lambda, p)?;
    let rho = &blocks.rho;
    let kd = g1.k.adjoint();
    let q = rho * &kd * grading(n) * &g1.k * rho;
    let w = rho * kd * momentum_sigma(p).what;
    Ok(Triple { lambda, wtilde: w, q })
}

/// Full inverse path `g ∈ ℳ₀ → ℳ₁ → triple`.
pub fn triple_from_m0(gp: &GroupPoint, p: &Params) -> Result<Triple> {
    let (g1, _) = gauge_to_m1(gp, p)?;
    triple_from_g(&g1, p)
}

/// Eigenphase data of `k†IkI`.
#[derive(Debug, Clone)]
pub struct HatActions {
    /// `q_a ∈ [0, π/2]` with `e^{±2iq_a}` the eigenvalues of `k†IkI`, ascending.
    pub q: Vec<f64>,
    /// `λ̂_a = ln sin q_a`, descending.
    pub hat_lambda: Vec<f64>,
    /// Largest deviation of an eigenvalue of `k†IkI` from the unit circle.
    pub circle_defect: f64,
}

/// Eigenvalues of a square complex matrix from its Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<C64> {
    let (_, t) = m.clone().schur().unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Dual actions of `g`: `cos 2q_a` are the eigenvalues of the upper-left
/// block of `k†Ik`, and `λ̂ = ln sin q = ½ ln((1 − cos 2q)/2)`.
pub fn hat_actions(gp: &GroupPoint, p: &Params) -> Result<HatActions> {
    hat_actions_of_k(&gp.k, p.n)
}

/// [`hat_actions`] for a bare unitary `k ∈ SU(2n)`.
pub fn hat_actions_of_k(k: &CMatrix, n: usize) -> Result<HatActions> {
    let i = grading(n);
    let kik = k.adjoint() * &i * k;
    let circle_defect = eigenvalues(&(&kik * &i)).iter().fold(0.0f64, |s, z| s.max((z.norm() - 1.0).abs()));
    if circle_defect > 1e-9 {
        return Err(Error::SpectrumOffCircle(circle_defect));
    }
    let (cos2q, _) = hermitian_eigensystem(&block(&kik, n, 0, 0))?;
    let mut q: Vec<f64> = cos2q.iter().map(|c| 0.5 * c.clamp(-1.0, 1.0).acos()).collect();
    q.sort_by(f64::total_cmp);
    let mut hat: Vec<f64> = cos2q.iter().map(|c| 0.5 * ((1.0 - c) / 2.0).ln()).collect();
    hat.sort_by(|a, b| b.total_cmp(a));
    Ok(HatActions { q, hat_lambda: hat, circle_defect })
}

/// The point of `ℳ₀` representing `ζ` (normal-form triple, then `g = kb`).
pub fn group_point_from_zeta(zeta: &[C64], p: &Params) -> Result<(Triple, GroupPoint)> {
    let t = triple_from_zeta(zeta, p)?;
    let gp = reconstruct_g(&t, p)?;
    Ok((t, gp))
}

/// [`hat_actions`] of the point with coordinates `ζ`.
pub fn hat_actions_from_zeta(zeta: &[C64], p: &Params) -> Result<HatActions> {
    let (_, gp) = group_point_from_zeta(zeta, p)?;
    hat_actions(&gp, p)
}

/// `½ tr((bb†)^j)`.
pub fn half_trace_bb(gp: &GroupPoint, j: u32) -> f64 {
    let bb = &gp.b * gp.b.adjoint();
    0.5 * crate::algebra::trace(&bb.pow(j)).re
}

/// `½ tr((k†IkI)^j)`.
pub fn half_trace_kik(gp: &GroupPoint, j: u32) -> f64 {
    let i = grading(gp.n());
    let m = gp.k.adjoint() * &i * &gp.k * &i;
    0.5 * crate::algebra::trace(&m.pow(j)).re
}
