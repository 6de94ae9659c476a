//! Hamiltonian evaluators.
//!
//! * [`h_main`] — the RSvD-type Hamiltonian `H(λ, θ)` on the chart
//!   `𝒟₊ × 𝕋ⁿ` of `M`, and [`h_hat_main`] — its dual `Ĥ(λ̂, θ̂)` on
//!   `𝒟̂₊ × 𝕋ⁿ`.
//! * The reduced commuting families `Σ cosh(2jλ_i)` and
//!   `Σ (−1)^j T_{2j}(e^{λ̂_a})`, their frequencies and the semiclassical
//!   spectrum.
//! * The van Diejen Hamiltonian, its factorised kinetic term, the closed form
//!   of its potential, the scaling limit that produces `H`, and the residue
//!   identity behind the closed form.
//!
//! The chart Hamiltonians are generic over [`Scalar`] so that gradients can be
//! taken by complex-step differentiation.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::C64;
use crate::error::{Error, Result};
use crate::model::{lambda_from_zeta, Params};

/// Real or complex scalar supporting the elementary functions used by the
/// Hamiltonians.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    /// Embed a real constant.
    fn cst(x: f64) -> Self;
    /// Real part.
    fn re(self) -> f64;
    /// Hyperbolic sine.
    fn sinh(self) -> Self;
    /// Hyperbolic cosine.
    fn cosh(self) -> Self;
    /// Cosine.
    fn cos(self) -> Self;
    /// Principal square root.
    fn sqrt(self) -> Self;
    /// Exponential.
    fn exp(self) -> Self;
}

impl Scalar for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn re(self) -> f64 {
        self
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
}

impl Scalar for C64 {
    fn cst(x: f64) -> Self {
        C64::new(x, 0.0)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn sinh(self) -> Self {
        C64::sinh(self)
    }
    fn cosh(self) -> Self {
        C64::cosh(self)
    }
    fn cos(self) -> Self {
        C64::cos(self)
    }
    fn sqrt(self) -> Self {
        C64::sqrt(self)
    }
    fn exp(self) -> Self {
        C64::exp(self)
    }
}

fn sq<S: Scalar>(x: S) -> S {
    x * x
}

/// Arguments of all square roots in `H(λ, θ)`: for each `j` the factors
/// `1 − sinh²v/sinh²λ_j`, `1 − sinh²u/sinh²λ_j` and, for `k ≠ j`,
/// `1 − sinh²μ/sinh²(λ_j ∓ λ_k)`.
pub fn h_sqrt_args(lambda: &[f64], p: &Params) -> Vec<f64> {
    let n = lambda.len();
    let smu2 = p.mu.sinh().powi(2);
    let mut out = Vec::new();
    for j in 0..n {
        let s2 = lambda[j].sinh().powi(2);
        out.push(1.0 - p.v.sinh().powi(2) / s2);
        out.push(1.0 - p.u.sinh().powi(2) / s2);
        for k in j + 1..n {
            out.push(1.0 - smu2 / (lambda[j] - lambda[k]).sinh().powi(2));
            out.push(1.0 - smu2 / (lambda[j] + lambda[k]).sinh().powi(2));
        }
    }
    out
}

/// Arguments of all square roots in `Ĥ(λ̂, θ̂)`: `U₁(λ̂_j)` and
/// `1 − sinh²μ/sinh²(λ̂_j − λ̂_k)`.
pub fn h_hat_sqrt_args(hat: &[f64], p: &Params) -> Vec<f64> {
    let n = hat.len();
    let smu2 = p.mu.sinh().powi(2);
    let mut out = Vec::new();
    for j in 0..n {
        out.push(u1(hat[j], p));
        for k in j + 1..n {
            out.push(1.0 - smu2 / (hat[j] - hat[k]).sinh().powi(2));
        }
    }
    out
}

fn check_args(args: &[f64], what: &str) -> Result<()> {
    match args.iter().copied().fold(f64::INFINITY, f64::min) {
        m if m > 0.0 => Ok(()),
        m => Err(Error::Domain(format!("{what}: square-root argument {m:e} is not positive"))),
    }
}

/// The potential `V(λ)` including the constant `C₀ = n e^{u−v} + cosh(v−u)/sinh²μ`.
pub fn potential_v<S: Scalar>(lambda: &[S], p: &Params) -> S {
    let n = lambda.len() as f64;
    let smu2 = p.mu.sinh().powi(2);
    let mut p1 = S::cst(1.0);
    let mut p2 = S::cst(1.0);
    for &l in lambda {
        p1 = p1 * (S::cst(1.0) - S::cst(smu2) / sq(l.sinh()));
        p2 = p2 * (S::cst(1.0) + S::cst(smu2) / sq(l.cosh()));
    }
    let c0 = n * (p.u - p.v).exp() + (p.v - p.u).cosh() / smu2;
    let pre = (p.v - p.u).exp();
    (S::cst(p.v.sinh() * p.u.sinh() / smu2) * p1 - S::cst(p.v.cosh() * p.u.cosh() / smu2) * p2 + S::cst(c0))
        * S::cst(pre)
}

/// `H(λ, θ)` for any scalar type (no domain checks).
pub fn h_main_generic<S: Scalar>(lambda: &[S], theta: &[S], p: &Params) -> S {
    let n = lambda.len();
    let smu2 = S::cst(p.mu.sinh().powi(2));
    let one = S::cst(1.0);
    let (sv2, su2) = (S::cst(p.v.sinh().powi(2)), S::cst(p.u.sinh().powi(2)));
    let mut kin = S::cst(0.0);
    for j in 0..n {
        let lj = lambda[j];
        let s2 = sq(lj.sinh());
        let mut t = theta[j].cos() / sq(lj.cosh()) * (one - sv2 / s2).sqrt() * (one - su2 / s2).sqrt();
        for k in 0..n {
            if k != j {
                t = t
                    * (one - smu2 / sq((lj - lambda[k]).sinh())).sqrt()
                    * (one - smu2 / sq((lj + lambda[k]).sinh())).sqrt();
            }
        }
        kin = kin + t;
    }
    potential_v(lambda, p) + kin * S::cst((p.v - p.u).exp())
}

/// `H(λ, θ)` on `𝒟₊ × 𝕋ⁿ`.
pub fn h_main(lambda: &[f64], theta: &[f64], p: &Params) -> Result<f64> {
    check_dims(lambda, theta, p)?;
    check_args(&h_sqrt_args(lambda, p), "H")?;
    Ok(h_main_generic(lambda, theta, p))
}

fn u1<S: Scalar>(h: S, p: &Params) -> S {
    let e = (S::cst(-2.0) * h).exp();
    let k = (2.0 * (p.v - p.u)).exp();
    S::cst(1.0) - S::cst(1.0 + k) * e + S::cst(k) * e * e
}

/// `U(λ̂) = ½(e^{−2u} + e^{2v}) Σ e^{−2λ̂_j}`.
pub fn potential_u<S: Scalar>(hat: &[S], p: &Params) -> S {
    let c = 0.5 * ((-2.0 * p.u).exp() + (2.0 * p.v).exp());
    hat.iter().fold(S::cst(0.0), |s, &h| s + (S::cst(-2.0) * h).exp()) * S::cst(c)
}

/// `Ĥ(λ̂, θ̂)` for any scalar type (no domain checks).
pub fn h_hat_main_generic<S: Scalar>(hat: &[S], theta: &[S], p: &Params) -> S {
    let n = hat.len();
    let smu2 = S::cst(p.mu.sinh().powi(2));
    let one = S::cst(1.0);
    let mut kin = S::cst(0.0);
    for j in 0..n {
        let mut t = theta[j].cos() * u1(hat[j], p).sqrt();
        for k in 0..n {
            if k != j {
                t = t * (one - smu2 / sq((hat[j] - hat[k]).sinh())).sqrt();
            }
        }
        kin = kin + t;
    }
    potential_u(hat, p) - kin
}

/// `Ĥ(λ̂, θ̂)` on `𝒟̂₊ × 𝕋ⁿ`.
pub fn h_hat_main(hat: &[f64], theta: &[f64], p: &Params) -> Result<f64> {
    check_dims(hat, theta, p)?;
    check_args(&h_hat_sqrt_args(hat, p), "Hhat")?;
    Ok(h_hat_main_generic(hat, theta, p))
}

fn check_dims(a: &[f64], b: &[f64], p: &Params) -> Result<()> {
    if a.len() != p.n || b.len() != p.n {
        return Err(Error::Domain(format!("chart point must have {} positions and {} angles", p.n, p.n)));
    }
    Ok(())
}

/// Chebyshev polynomial `T_m(x)` by the three-term recurrence.
pub fn chebyshev_t<S: Scalar>(m: usize, x: S) -> S {
    let (mut a, mut b) = (S::cst(1.0), x);
    if m == 0 {
        return a;
    }
    for _ in 1..m {
        let c = S::cst(2.0) * x * b - a;
        a = b;
        b = c;
    }
    b
}

/// Chebyshev polynomial `U_m(x)` by the three-term recurrence.
pub fn chebyshev_u<S: Scalar>(m: usize, x: S) -> S {
    let (mut a, mut b) = (S::cst(1.0), S::cst(2.0) * x);
    if m == 0 {
        return a;
    }
    for _ in 1..m {
        let c = S::cst(2.0) * x * b - a;
        a = b;
        b = c;
    }
    b
}

/// Coefficient tables of `T_m` and `U_m` for `m ≤ max_degree`
/// (ascending powers), built by the recurrence.
#[derive(Debug, Clone)]
pub struct ChebyshevCache {
    /// Largest tabulated degree.
    pub max_degree: usize,
    /// Coefficients of `T_m`.
    pub t: Vec<Vec<f64>>,
    /// Coefficients of `U_m`.
    pub u: Vec<Vec<f64>>,
}

impl ChebyshevCache {
    /// Tabulate up to `max_degree`.
    pub fn new(max_degree: usize) -> Self {
        let build = |first: Vec<f64>| {
            let mut rows = vec![vec![1.0], first];
            for m in 2..=max_degree {
                let mut next = vec![0.0; m + 1];
                for (i, c) in rows[m - 1].iter().enumerate() {
                    next[i + 1] += 2.0 * c;
                }
                for (i, c) in rows[m - 2].iter().enumerate() {
                    next[i] -= c;
                }
                rows.push(next);
            }
            rows.truncate(max_degree + 1);
            rows
        };
        ChebyshevCache { max_degree, t: build(vec![0.0, 1.0]), u: build(vec![0.0, 2.0]) }
    }

    fn horner(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |s, &a| s * x + a)
    }

    /// `T_m(x)` from the table.
    pub fn eval_t(&self, m: usize, x: f64) -> f64 {
        Self::horner(&self.t[m], x)
    }

    /// `U_m(x)` from the table.
    pub fn eval_u(&self, m: usize, x: f64) -> f64 {
        Self::horner(&self.u[m], x)
    }
}

/// `Σ cosh(2jλ_i)`, the reduced `½tr((bb†)^j)`.
pub fn reduced_actions_hat(lambda: &[f64], j: usize) -> f64 {
    lambda.iter().map(|l| (2.0 * j as f64 * l).cosh()).sum()
}

/// `P_j(x) = (−1)^j T_{2j}(x)`, so that `P_j(sin q) = cos(2jq)`.
pub fn p_j<S: Scalar>(j: usize, x: S) -> S {
    let t = chebyshev_t(2 * j, x);
    if j % 2 == 0 {
        t
    } else {
        -t
    }
}

/// `Σ_a P_j(e^{λ̂_a})`, the reduced `½tr((k†IkI)^j)`.
pub fn reduced_actions_m(hat: &[f64], j: usize) -> Result<f64> {
    if let Some(h) = hat.iter().find(|h| **h > 1e-12) {
        return Err(Error::Domain(format!("hat lambda {h} > 0 gives e^hat > 1")));
    }
    Ok(hat.iter().map(|&h| p_j(j, h.exp())).sum())
}

/// Frequencies `Ω_{j,a} = 2j sinh(2jλ_a)` of `Σ cosh(2jλ)`.
pub fn frequencies_m(j: usize, lambda: &[f64]) -> Vec<f64> {
    let jf = j as f64;
    lambda.iter().map(|l| 2.0 * jf * (2.0 * jf * l).sinh()).collect()
}

/// Frequencies `Ω̂_{j,a} = 2(−1)^j j e^{λ̂_a} U_{2j−1}(e^{λ̂_a})`.
pub fn frequencies_hat(j: usize, hat: &[f64]) -> Vec<f64> {
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    hat.iter().map(|&h| 2.0 * sign * j as f64 * h.exp() * chebyshev_u(2 * j - 1, h.exp())).collect()
}

/// Semiclassical value of `Σ cosh(2jλ)` with integer actions `|ζ_l|² = occupations_l`.
pub fn semiclassical_spectrum(j: usize, occupations: &[u32], p: &Params) -> Result<f64> {
    p.require_section()?;
    if occupations.len() != p.n {
        return Err(Error::Domain(format!("need {} occupations", p.n)));
    }
    let z: Vec<C64> = occupations.iter().map(|&o| C64::new((o as f64).sqrt(), 0.0)).collect();
    Ok(reduced_actions_hat(&lambda_from_zeta(&z, p), j))
}

/// Parameters `(a, b, c, d, μ)` of the van Diejen Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VdParams {
    /// Coupling `a`.
    pub a: f64,
    /// Coupling `b`.
    pub b: f64,
    /// Coupling `c`.
    pub c: f64,
    /// Coupling `d`.
    pub d: f64,
    /// Coupling `μ > 0`.
    pub mu: f64,
}

impl VdParams {
    /// Validate `μ > 0`.
    pub fn new(a: f64, b: f64, c: f64, d: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::InvalidParameters(format!("mu must be positive (got {mu})")));
        }
        Ok(VdParams { a, b, c, d, mu })
    }
}

fn v2(lambda: &[f64], j: usize, s: f64, mu: f64) -> f64 {
    let lj = lambda[j];
    lambda
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != j)
        .map(|(_, &lk)| {
            (mu + s * (lj + lk)).sinh() * (mu + s * (lj - lk)).sinh() / ((lj + lk).sinh() * (lj - lk).sinh())
        })
        .product()
}

/// `e^{a−b} V_{±j}` (`s = ±1`), with `e^{a}cosh(a ± λ)` and `e^{−b}cosh(b ± λ)`
/// written as finite sums of exponentials so large `|a|`, `|b|` cannot overflow.
fn v_scaled(lambda: &[f64], j: usize, s: f64, vd: &VdParams) -> f64 {
    let l = lambda[j];
    let ea = 0.5 * ((2.0 * vd.a + s * l).exp() + (-s * l).exp());
    let eb = 0.5 * ((s * l).exp() + (-2.0 * vd.b - s * l).exp());
    let v1 = ea * eb * (vd.c + s * l).sinh() * (vd.d + s * l).sinh() / (l.cosh() * l.sinh()).powi(2);
    v1 * v2(lambda, j, s, vd.mu)
}

/// `V_{±j}` (`s = ±1`).
pub fn v_pm(lambda: &[f64], j: usize, s: f64, vd: &VdParams) -> f64 {
    let l = lambda[j];
    let v1 = (vd.a + s * l).cosh() * (vd.b + s * l).cosh() * (vd.c + s * l).sinh() * (vd.d + s * l).sinh()
        / (l.cosh() * l.sinh()).powi(2);
    v1 * v2(lambda, j, s, vd.mu)
}

fn check_vd_point(lambda: &[f64]) -> Result<()> {
    for (j, &l) in lambda.iter().enumerate() {
        if l == 0.0 {
            return Err(Error::Domain("lambda entries must be nonzero".into()));
        }
        for &m in &lambda[j + 1..] {
            if l == m || l == -m {
                return Err(Error::Domain(format!("coinciding lambda entries {l}, {m}")));
            }
        }
    }
    Ok(())
}

/// `V_jV_{−j}` evaluated as the product of the two factors.
pub fn kinetic_direct(lambda: &[f64], j: usize, vd: &VdParams) -> f64 {
    v_pm(lambda, j, 1.0, vd) * v_pm(lambda, j, -1.0, vd)
}

/// `V_jV_{−j}` in the factorised form with `1 + sinh²a/cosh²λ_j` etc.
pub fn kinetic_factored(lambda: &[f64], j: usize, vd: &VdParams) -> f64 {
    let l = lambda[j];
    let (c2, s2) = (l.cosh().powi(2), l.sinh().powi(2));
    let smu2 = vd.mu.sinh().powi(2);
    let mut r = (1.0 + vd.a.sinh().powi(2) / c2)
        * (1.0 + vd.b.sinh().powi(2) / c2)
        * (1.0 - vd.c.sinh().powi(2) / s2)
        * (1.0 - vd.d.sinh().powi(2) / s2);
    for (k, &m) in lambda.iter().enumerate() {
        if k != j {
            r *= (1.0 - smu2 / (l - m).sinh().powi(2)) * (1.0 - smu2 / (l + m).sinh().powi(2));
        }
    }
    r
}

/// Potential `−½Σ(V_j + V_{−j})` by direct summation.
pub fn potential_direct(lambda: &[f64], vd: &VdParams) -> f64 {
    -0.5 * (0..lambda.len()).map(|j| v_pm(lambda, j, 1.0, vd) + v_pm(lambda, j, -1.0, vd)).sum::<f64>()
}

/// The constant `C[μ; a, b, c, d]` split into its two lines.
pub fn vd_constant_parts(vd: &VdParams, n: usize) -> (f64, f64) {
    let smu = vd.mu.sinh();
    let first = ((vd.a - vd.b).cosh() * (vd.c - vd.d).cosh()
        - (vd.a + vd.b - vd.mu).cosh() * (vd.c + vd.d - vd.mu).cosh())
        / (2.0 * smu * smu);
    let second = -(vd.a + vd.b + vd.c + vd.d + (2 * n - 1) as f64 * vd.mu).sinh() / (2.0 * smu);
    (first, second)
}

/// The two product terms of the closed-form potential.
pub fn potential_products(lambda: &[f64], vd: &VdParams) -> (f64, f64) {
    let smu2 = vd.mu.sinh().powi(2);
    let p1: f64 = lambda.iter().map(|l| 1.0 - smu2 / l.sinh().powi(2)).product();
    let p2: f64 = lambda.iter().map(|l| 1.0 + smu2 / l.cosh().powi(2)).product();
    (
        vd.a.cosh() * vd.b.cosh() * vd.c.sinh() * vd.d.sinh() / smu2 * p1,
        vd.a.sinh() * vd.b.sinh() * vd.c.cosh() * vd.d.cosh() / smu2 * p2,
    )
}

/// Closed form of the potential: the two product terms plus `C`.
pub fn potential_closed(lambda: &[f64], vd: &VdParams) -> f64 {
    let (t1, t2) = potential_products(lambda, vd);
    let (c1, c2) = vd_constant_parts(vd, lambda.len());
    t1 + t2 + c1 + c2
}

/// `H_vD[μ; a, b, c, d](λ, θ)`.
pub fn vd_hamiltonian(lambda: &[f64], theta: &[f64], vd: &VdParams) -> Result<f64> {
    check_vd_point(lambda)?;
    let mut kin = 0.0;
    for j in 0..lambda.len() {
        let prod = kinetic_direct(lambda, j, vd);
        if prod < -1e-12 {
            return Err(Error::Domain(format!("V_j V_-j = {prod:e} is negative")));
        }
        kin += theta[j].cos() * prod.max(0.0).sqrt();
    }
    Ok(kin + potential_direct(lambda, vd))
}

/// `4e^{a}e^{−b} H_vD[μ; a, b, c, d](λ, θ)`, evaluated with pre-scaled
/// factors so that it stays finite for large `|a|`, `|b|`.
pub fn vd_hamiltonian_scaled(lambda: &[f64], theta: &[f64], vd: &VdParams) -> Result<f64> {
    check_vd_point(lambda)?;
    let mut total = 0.0;
    for j in 0..lambda.len() {
        let (vp, vm) = (v_scaled(lambda, j, 1.0, vd), v_scaled(lambda, j, -1.0, vd));
        if vp * vm < -1e-12 {
            return Err(Error::Domain(format!("V_j V_-j = {:e} is negative", vp * vm)));
        }
        total += 4.0 * theta[j].cos() * (vp * vm).max(0.0).sqrt() - 2.0 * (vp + vm);
    }
    Ok(total)
}

/// Absolute and relative error of the scaling limit
/// `e^{v−u}·4e^{a}e^{−b}·H_vD[μ; a, b, u, v] + n → H`.
pub fn vd_limit_error(lambda: &[f64], theta: &[f64], p: &Params, a: f64, b: f64) -> Result<(f64, f64)> {
    let h = h_main(lambda, theta, p)?;
    let vd = VdParams::new(a, b, p.u, p.v, p.mu)?;
    let approx = (p.v - p.u).exp() * vd_hamiltonian_scaled(lambda, theta, &vd)? + p.n as f64;
    let err = (approx - h).abs();
    Ok((err, err / h.abs().max(f64::MIN_POSITIVE)))
}

/// Least-squares fit of `ln err` against `ln(e^{2a} + e^{−2b})`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LimitFit {
    /// Fitted slope (1 for the expected rate).
    pub slope: f64,
    /// Coefficient of determination.
    pub r2: f64,
}

/// Fit the convergence rate of the scaling limit over the given `(a, b)` pairs.
pub fn vd_limit_fit(lambda: &[f64], theta: &[f64], p: &Params, pairs: &[(f64, f64)]) -> Result<LimitFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(a, b) in pairs {
        let (err, _) = vd_limit_error(lambda, theta, p, a, b)?;
        xs.push(((2.0 * a).exp() + (-2.0 * b).exp()).ln());
        ys.push(err.max(f64::MIN_POSITIVE).ln());
    }
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(LimitFit { slope, r2: if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 } })
}

/// Residues of `F(z)dz` at all of its poles.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueReport {
    /// Residue at `z = 0`.
    pub zero: f64,
    /// Residues at `z = +1` and `z = −1`.
    pub pm_one: (f64, f64),
    /// Residues at `z = +α` and `z = −α`.
    pub pm_alpha: (f64, f64),
    /// Residue at `z = ∞`.
    pub infinity: f64,
    /// Residues at `z = Λ_a`.
    pub lambda: Vec<f64>,
    /// Sum of all residues.
    pub sum: f64,
    /// Largest residue magnitude.
    pub scale: f64,
}

/// Residues of the one-form `F(z)dz` whose vanishing residue sum yields the
/// closed form of the van Diejen potential. `big_lambda` holds `Λ_1..Λ_{2n}`.
pub fn residue_sum(vd: &VdParams, big_lambda: &[f64]) -> Result<ResidueReport> {
    let alpha = (-vd.mu).exp();
    let (ca, cb, cc, cd) = (vd.a.exp(), vd.b.exp(), vd.c.exp(), vd.d.exp());
    // numerator and denominator linear factors (c1 z + c0)
    let mut num: Vec<(f64, f64)> = vec![(ca, 1.0 / ca), (cb, 1.0 / cb), (cc, -1.0 / cc), (cd, -1.0 / cd)];
    num.extend(big_lambda.iter().map(|&l| (l / alpha, -alpha)));
    let poles: Vec<f64> = [0.0, 1.0, -1.0, alpha, -alpha].into_iter().chain(big_lambda.iter().copied()).collect();
    for i in 0..poles.len() {
        for j in i + 1..poles.len() {
            if (poles[i] - poles[j]).abs() < 1e-8 {
                return Err(Error::PoleCollision(format!("poles {} and {} coincide", poles[i], poles[j])));
            }
        }
    }
    let pref = 0.5 / (alpha.powi(-2) - 1.0);
    let residue_at = |i: usize| {
        let z = poles[i];
        let numv: f64 = num.iter().map(|(c1, c0)| c1 * z + c0).product();
        let den: f64 = poles.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, &q)| z - q).product();
        pref * numv / den
    };
    let res: Vec<f64> = (0..poles.len()).map(residue_at).collect();
    let infinity = -pref * num.iter().map(|(c1, _)| c1).product::<f64>();
    let sum = res.iter().sum::<f64>() + infinity;
    let scale = res.iter().chain(std::iter::once(&infinity)).fold(0.0f64, |s, r| s.max(r.abs()));
    Ok(ResidueReport {
        zero: res[0],
        pm_one: (res[1], res[2]),
        pm_alpha: (res[3], res[4]),
        infinity,
        lambda: res[5..].to_vec(),
        sum,
        scale,
    })
}
