//! Model parameters, admissible domains and the coordinate charts.
//!
//! * `𝒟₊` — positions `λ` of the RSvD system: `λ_n > max(|u|,|v|)` and
//!   `λ_i − λ_{i+1} > μ`.
//! * `𝒟̂₊` — positions `λ̂` of the dual system: `s > λ̂₁` and
//!   `λ̂_j − λ̂_{j+1} > μ`, with `s = min(0, v − u)`.
//! * The global complex coordinates `ζ ∈ ℂⁿ` (on `M`) and `Z ∈ ℂⁿ` (on `M̂`)
//!   and their relation to the Darboux charts `(λ, θ)` and `(λ̂, θ̂)`.

use serde::{Deserialize, Serialize};

use crate::algebra::{block2, diag_real, CMatrix, C64};
use crate::error::{Error, Result};

/// Tolerance of the ε-relaxed domain predicates.
pub const DOMAIN_EPS: f64 = 1e-10;

/// Model parameters `(n, μ, u, v)`; derived constants are recomputed on demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    /// Number of particles.
    pub n: usize,
    /// Coupling `μ > 0`.
    pub mu: f64,
    /// Coupling `u`.
    pub u: f64,
    /// Coupling `v`.
    pub v: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    n: usize,
    mu: f64,
    u: f64,
    v: f64,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        Params::new(r.n, r.mu, r.u, r.v)
    }
}

impl Default for Params {
    fn default() -> Self {
        Params { n: 2, mu: 0.5, u: -1.0, v: 0.3 }
    }
}

impl Params {
    /// Validate and build parameters.
    pub fn new(n: usize, mu: f64, u: f64, v: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("n must be positive".into()));
        }
        if !(mu.is_finite() && u.is_finite() && v.is_finite()) {
            return Err(Error::InvalidParameters("mu, u and v must be finite".into()));
        }
        if mu <= 0.0 {
            return Err(Error::InvalidParameters(format!("mu must be positive (got {mu})")));
        }
        if u.abs() == v.abs() {
            return Err(Error::InvalidParameters(format!("|u| must differ from |v| (got u={u}, v={v})")));
        }
        Ok(Params { n, mu, u, v })
    }

    /// Same couplings with a different particle number.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Params::new(n, self.mu, self.u, self.v)
    }

    /// `α = e^{−μ}`.
    pub fn alpha(&self) -> f64 {
        (-self.mu).exp()
    }

    /// `x = e^{−v}`.
    pub fn x(&self) -> f64 {
        (-self.v).exp()
    }

    /// `y = e^{−u}`.
    pub fn y(&self) -> f64 {
        (-self.u).exp()
    }

    /// `s = min(0, v − u)`.
    pub fn s(&self) -> f64 {
        (self.v - self.u).min(0.0)
    }

    /// Lower bound `max(|u|, |v|)` of `λ_n` on `𝒟₊`.
    pub fn floor(&self) -> f64 {
        self.u.abs().max(self.v.abs())
    }

    /// The global gauge section is available iff `|u| > |v|` and `u < 0`.
    pub fn section_s_valid(&self) -> bool {
        self.u.abs() > self.v.abs() && self.u < 0.0
    }

    /// Error unless the gauge section is available.
    pub fn require_section(&self) -> Result<()> {
        if self.section_s_valid() {
            Ok(())
        } else {
            Err(Error::SectionUnavailable(format!(
                "requires u < 0 and |u| > |v| (got u={}, v={})",
                self.u, self.v
            )))
        }
    }

    /// Squared norm `α²(α^{−2n} − 1)` required of `w̃` and `v̂`.
    pub fn wnorm2(&self) -> f64 {
        let a2 = self.alpha().powi(2);
        a2 * (self.alpha().powi(-2 * self.n as i32) - 1.0)
    }
}

fn check_len(n: usize, v: &[f64], what: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::Domain(format!("{what} has {} entries, expected {n}", v.len())));
    }
    Ok(())
}

fn d_plus_margin(lambda: &[f64], p: &Params) -> f64 {
    let n = lambda.len();
    let mut m = lambda[n - 1] - p.floor();
    for j in 0..n - 1 {
        m = m.min(lambda[j] - lambda[j + 1] - p.mu);
    }
    m
}

/// `λ ∈ 𝒟₊` (strict inequalities, exact comparison).
pub fn in_d_plus(lambda: &[f64], p: &Params) -> bool {
    lambda.len() == p.n && d_plus_margin(lambda, p) > 0.0
}

/// `λ ∈ closure(𝒟₊)` (non-strict inequalities, exact comparison).
pub fn in_d_closure(lambda: &[f64], p: &Params) -> bool {
    lambda.len() == p.n && d_plus_margin(lambda, p) >= 0.0
}

/// `λ ∈ closure(𝒟₊)` up to `eps`.
pub fn in_d_closure_eps(lambda: &[f64], p: &Params, eps: f64) -> bool {
    lambda.len() == p.n && d_plus_margin(lambda, p) >= -eps
}

fn dhat_margin(hat: &[f64], p: &Params) -> f64 {
    let mut m = p.s() - hat[0];
    for j in 0..hat.len() - 1 {
        m = m.min(hat[j] - hat[j + 1] - p.mu);
    }
    m
}

/// `λ̂ ∈ 𝒟̂₊` (strict inequalities, exact comparison).
pub fn in_dhat_plus(hat: &[f64], p: &Params) -> bool {
    hat.len() == p.n && dhat_margin(hat, p) > 0.0
}

/// `λ̂ ∈ closure(𝒟̂₊)` up to `eps`.
pub fn in_dhat_closure_eps(hat: &[f64], p: &Params, eps: f64) -> bool {
    hat.len() == p.n && dhat_margin(hat, p) >= -eps
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(std::f64::consts::TAU);
    if r >= std::f64::consts::TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(std::f64::consts::TAU - d)
}

/// Vertex `λ_j = |u| + (n − j)μ` of `closure(𝒟₊)`, the image of `ζ = 0`.
pub fn vertex_lambda(p: &Params) -> Vec<f64> {
    (1..=p.n).map(|j| p.u.abs() + (p.n - j) as f64 * p.mu).collect()
}

/// Vertex `λ̂_j = s − (j − 1)μ` of `closure(𝒟̂₊)`, the image of `Z = 0`.
pub fn vertex_hat(p: &Params) -> Vec<f64> {
    (1..=p.n).map(|j| p.s() - (j - 1) as f64 * p.mu).collect()
}

/// Positions `λ(ζ)`: `λ_j = |u| + (n − j)μ + Σ_{l ≥ j} |ζ_l|²`.
pub fn lambda_from_zeta(zeta: &[C64], p: &Params) -> Vec<f64> {
    let n = zeta.len();
    let mut lam = vec![0.0; n];
    let mut acc = 0.0;
    for j in (0..n).rev() {
        acc += zeta[j].norm_sqr();
        lam[j] = p.u.abs() + (n - 1 - j) as f64 * p.mu + acc;
    }
    lam
}

/// Boundary coordinates `(λ_1 − λ_2 − μ, …, λ_{n−1} − λ_n − μ, λ_n − |u|)`
/// whose square roots are the moduli `|ζ_j|`.
pub fn zeta_moduli_sq(lambda: &[f64], p: &Params) -> Vec<f64> {
    let n = lambda.len();
    (0..n)
        .map(|j| if j + 1 < n { lambda[j] - lambda[j + 1] - p.mu } else { lambda[n - 1] - p.u.abs() })
        .collect()
}

/// `ζ_j = √(gap_j) · ∏_{l ≤ j} e^{−iθ_l}` for `λ ∈ closure(𝒟₊)`.
pub fn zeta_from_darboux(lambda: &[f64], theta: &[f64], p: &Params) -> Result<Vec<C64>> {
    check_len(p.n, lambda, "lambda")?;
    check_len(p.n, theta, "theta")?;
    p.require_section()?;
    if !in_d_closure_eps(lambda, p, DOMAIN_EPS) {
        return Err(Error::Domain("lambda is outside closure(D+)".into()));
    }
    let gaps = zeta_moduli_sq(lambda, p);
    let mut phase = 0.0;
    Ok(gaps
        .iter()
        .zip(theta)
        .map(|(g, t)| {
            phase -= t;
            C64::from_polar(g.max(0.0).sqrt(), phase)
        })
        .collect())
}

/// Inverse of [`zeta_from_darboux`] on `(ℂ*)ⁿ`.
pub fn darboux_from_zeta(zeta: &[C64], p: &Params) -> Result<(Vec<f64>, Vec<f64>)> {
    check_len(p.n, &vec![0.0; zeta.len()], "zeta")?;
    p.require_section()?;
    if let Some(j) = zeta.iter().position(|z| *z == C64::new(0.0, 0.0)) {
        return Err(Error::AngleUndefined(format!("zeta_{} = 0", j + 1)));
    }
    let lam = lambda_from_zeta(zeta, p);
    let n = zeta.len();
    let mut theta = vec![0.0; n];
    theta[0] = wrap_angle(-zeta[0].arg());
    for j in 1..n {
        theta[j] = wrap_angle(zeta[j - 1].arg() - zeta[j].arg());
    }
    Ok((lam, theta))
}

/// Positions `λ̂(Z)`: `λ̂_j = s − (j − 1)μ − |Z_n|² − Σ_{l<j} |Z_l|²`.
pub fn hat_lambda_from_z(z: &[C64], p: &Params) -> Vec<f64> {
    let n = z.len();
    let mut out = vec![0.0; n];
    let mut acc = z[n - 1].norm_sqr();
    for j in 0..n {
        out[j] = p.s() - j as f64 * p.mu - acc;
        if j + 1 < n {
            acc += z[j].norm_sqr();
        }
    }
    out
}

/// `Z_j = √(λ̂_j − λ̂_{j+1} − μ) ∏_{k>j} e^{iθ̂_k}` (j < n) and
/// `Z_n = √(s − λ̂_1) ∏_k e^{iθ̂_k}`.
pub fn z_from_hat(hat: &[f64], theta_hat: &[f64], p: &Params) -> Result<Vec<C64>> {
    check_len(p.n, hat, "hat_lambda")?;
    check_len(p.n, theta_hat, "hat_theta")?;
    if !in_dhat_closure_eps(hat, p, DOMAIN_EPS) {
        return Err(Error::Domain("hat_lambda is outside closure(D^+)".into()));
    }
    let n = hat.len();
    let total: f64 = theta_hat.iter().sum();
    Ok((0..n)
        .map(|j| {
            if j + 1 < n {
                let phase: f64 = theta_hat[j + 1..].iter().sum();
                C64::from_polar((hat[j] - hat[j + 1] - p.mu).max(0.0).sqrt(), phase)
            } else {
                C64::from_polar((p.s() - hat[0]).max(0.0).sqrt(), total)
            }
        })
        .collect())
}

/// Inverse of [`z_from_hat`] on `(ℂ*)ⁿ`.
pub fn hat_from_z(z: &[C64], p: &Params) -> Result<(Vec<f64>, Vec<f64>)> {
    if let Some(j) = z.iter().position(|w| *w == C64::new(0.0, 0.0)) {
        return Err(Error::AngleUndefined(format!("Z_{} = 0", j + 1)));
    }
    let n = z.len();
    let hat = hat_lambda_from_z(z, p);
    let phi: Vec<f64> = z.iter().map(|w| w.arg()).collect();
    let mut th = vec![0.0; n];
    if n == 1 {
        th[0] = wrap_angle(phi[0]);
    } else {
        th[n - 1] = wrap_angle(phi[n - 2]);
        for k in 1..n - 1 {
            th[k] = wrap_angle(phi[k - 1] - phi[k]);
        }
        th[0] = wrap_angle(phi[n - 1] - phi[0]);
    }
    Ok((hat, th))
}

/// Profile functions `c(t)`, `s(t)` with `c² + s² = 1`, defined for `t ≥ |v|`.
pub fn cs_profile(t: f64, p: &Params) -> Result<(f64, f64)> {
    let v = p.v;
    if t < v.abs() {
        return Err(Error::Domain(format!("cs_profile needs t >= |v| (t={t}, v={v})")));
    }
    if t == 0.0 {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        return Ok((r, r));
    }
    if t < 1e-8 {
        // v = 0 necessarily; sinh t / sinh 2t = 1/(2 cosh t).
        let c2 = 0.5 / t.cosh();
        return Ok((c2.sqrt(), (1.0 - c2).sqrt()));
    }
    let s2t = (2.0 * t).sinh();
    let c2 = (t + v).exp() * (t - v).sinh() / s2t;
    let s2 = (v - t).exp() * (v + t).sinh() / s2t;
    Ok((c2.max(0.0).sqrt(), s2.max(0.0).sqrt()))
}

/// `β_i = 2 √(sinh(λ_i + v) sinh(λ_i − v))`.
pub fn beta(lambda: &[f64], p: &Params) -> Result<Vec<f64>> {
    lambda
        .iter()
        .map(|&l| {
            if l < p.v.abs() {
                Err(Error::Domain(format!("lambda entry {l} below |v| = {}", p.v.abs())))
            } else {
                Ok(2.0 * ((l + p.v).sinh() * (l - p.v).sinh()).max(0.0).sqrt())
            }
        })
        .collect()
}

/// λ-dependent building blocks of the reconstruction.
#[derive(Debug, Clone)]
pub struct LambdaBlocks {
    /// `Λ = (e^{2λ_1}, …, e^{2λ_n}, e^{−2λ_1}, …, e^{−2λ_n})`.
    pub big_lambda: Vec<f64>,
    /// Real symmetric orthogonal `ρ = [[C, S], [S, −C]]`.
    pub rho: CMatrix,
    /// Off-diagonal entries `β_i` of the quasi-diagonal `b`.
    pub beta: Vec<f64>,
    /// Quasi-diagonal `b = [[e^{−v}1, diag β], [0, e^{v}1]]`.
    pub b: CMatrix,
}

/// `Λ(λ)` as a list of `2n` reals.
pub fn big_lambda(lambda: &[f64]) -> Vec<f64> {
    lambda.iter().map(|l| (2.0 * l).exp()).chain(lambda.iter().map(|l| (-2.0 * l).exp())).collect()
}

/// Build `Λ`, `ρ`, `β` and `b` with `b b† = ρ Λ ρ^{−1}`.
pub fn lambda_blocks(lambda: &[f64], p: &Params) -> Result<LambdaBlocks> {
    let n = lambda.len();
    let beta = beta(lambda, p)?;
    let mut cs = Vec::with_capacity(n);
    let mut ss = Vec::with_capacity(n);
    for &l in lambda {
        let (c, s) = cs_profile(l, p)?;
        cs.push(c);
        ss.push(s);
    }
    let cm = diag_real(&cs);
    let sm = diag_real(&ss);
    let rho = block2(&cm, &sm, &sm, &(-&cm));
    let x = p.x();
    let b = block2(
        &diag_real(&vec![x; n]),
        &diag_real(&beta),
        &CMatrix::zeros(n, n),
        &diag_real(&vec![1.0 / x; n]),
    );
    Ok(LambdaBlocks { big_lambda: big_lambda(lambda), rho, beta, b })
}

/// Report of the strong-regularity test.
#[derive(Debug, Clone, Copy)]
pub struct RegularityReport {
    /// Smallest relative size of a factor of `p₁`.
    pub p1_min_factor: f64,
    /// Smallest relative size of a factor of `p₂`.
    pub p2_min_factor: f64,
    /// Both polynomials are non-vanishing.
    pub regular: bool,
}

/// Strong regularity: non-vanishing of
/// `p₁ = ∏_{k≠l} (Λ_k − Λ_l)(Λ_kΛ_l − α²)` and
/// `p₂ = ∏_k (Λ_k − α)(y²Λ_k − α²)(Λ_k − y²)(Λ_k − x²)`,
/// tested factor by factor relative to each factor's scale.
pub fn strong_regularity(lambda: &[f64], p: &Params) -> RegularityReport {
    let big = big_lambda(lambda);
    let a = p.alpha();
    let a2 = a * a;
    let y2 = p.y().powi(2);
    let x2 = p.x().powi(2);
    let rel = |d: f64, s: f64| d.abs() / s.abs().max(f64::MIN_POSITIVE);
    let mut p1 = f64::INFINITY;
    for k in 0..big.len() {
        for l in 0..big.len() {
            if k != l {
                p1 = p1.min(rel(big[k] - big[l], big[k].max(big[l])));
                p1 = p1.min(rel(big[k] * big[l] - a2, (big[k] * big[l]).max(a2)));
            }
        }
    }
    let mut p2 = f64::INFINITY;
    for &lk in &big {
        p2 = p2.min(rel(lk - a, lk.max(a)));
        p2 = p2.min(rel(y2 * lk - a2, (y2 * lk).max(a2)));
        p2 = p2.min(rel(lk - y2, lk.max(y2)));
        p2 = p2.min(rel(lk - x2, lk.max(x2)));
    }
    RegularityReport { p1_min_factor: p1, p2_min_factor: p2, regular: p1 > 1e-12 && p2 > 1e-12 }
}

/// Boolean form of [`strong_regularity`].
pub fn strong_regular(lambda: &[f64], p: &Params) -> bool {
    strong_regularity(lambda, p).regular
}
