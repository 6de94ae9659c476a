//! Explicit solution of the constraint equation.
//!
//! An admissible triple `(w̃, Q, λ)` satisfies
//! `ΛQΛ − α²Q = Λ² + α²1 − 2y²Λ + 2w̃w̃†` together with `Q = Q† = Q^{−1}`,
//! `tr Q = 0`, `Qw̃ = w̃` and `‖w̃‖² = α²(α^{−2n} − 1)`. For `λ` in the closure
//! of `𝒟₊` the solution is `w̃_l = e^{iξ_l} √ℱ_l(λ)` and
//! `Q = D + 2𝒲C𝒲†` with `D_ll = (Λ_l² + α² − 2y²Λ_l)/(Λ_l² − α²)` and
//! `C_lm = 1/(Λ_lΛ_m − α²)`.
//!
//! Several entries of `C` have poles exactly where some `ℱ_l` vanish. All
//! such products are evaluated in factored form: every `ℱ_l` is written as a
//! strictly positive smooth part times a product of `sinh(x)` factors, where
//! `x` is one of the boundary coordinates `λ_j − λ_{j+1} − μ` or
//! `λ_n − |u|`. The cancellation `sinh(x)·C = −½e^{2μ+x}` is then exact.
//!
//! Indices are zero-based throughout the code: position `l ∈ 0..2n`
//! corresponds to the mathematical index `l + 1`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{hermiticity_defect, max_abs, trace, unitarity_defect, CMatrix, CVector, C64};
use crate::error::{Error, Result};
use crate::model::{big_lambda, in_d_closure_eps, lambda_from_zeta, Params, DOMAIN_EPS};

/// Threshold of the residual checks of [`verify_admissible`].
pub const ADMISSIBLE_TOL: f64 = 1e-10;
/// Residual accepted when loading a serialized triple.
pub const LOAD_TOL: f64 = 1e-8;
/// Window around `λ_n = μ/2` in which `Q_{2n,2n}` is interpolated.
pub const HALF_MU_WINDOW: f64 = 1e-6;
/// Moduli below this are treated as zero by angle and phase extraction.
pub const MODULUS_FLOOR: f64 = 1e-12;

/// An admissible triple `(w̃, Q, λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple {
    /// Positions `λ`, strictly descending on the interior.
    pub lambda: Vec<f64>,
    /// The vector `w̃ ∈ ℂ^{2n}`.
    pub wtilde: CVector,
    /// The matrix `Q`, Hermitian and unitary.
    pub q: CMatrix,
}

impl Triple {
    /// Particle number.
    pub fn n(&self) -> usize {
        self.lambda.len()
    }
}

/// `J(x) = sinh(x)/x` with `J(0) = 1`.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-5 {
        1.0 + x * x / 6.0 * (1.0 + x * x / 20.0)
    } else {
        x.sinh() / x
    }
}

fn require_len(p: &Params, lambda: &[f64]) -> Result<()> {
    if lambda.len() != p.n {
        return Err(Error::Domain(format!("lambda has {} entries, expected {}", lambda.len(), p.n)));
    }
    Ok(())
}

fn require_closure(p: &Params, lambda: &[f64]) -> Result<()> {
    require_len(p, lambda)?;
    if !in_d_closure_eps(lambda, p, DOMAIN_EPS) {
        return Err(Error::Domain(format!("lambda = {lambda:?} is outside closure(D+)")));
    }
    Ok(())
}

/// The products `F_1, …, F_{2n}` (`F_{n+a}` is `F_a` with `μ → −μ`).
pub fn f_functions(lambda: &[f64], p: &Params) -> Result<Vec<f64>> {
    require_len(p, lambda)?;
    let n = p.n;
    let mu = p.mu;
    let mut out = vec![1.0; 2 * n];
    for a in 0..n {
        for i in 0..n {
            if i == a {
                continue;
            }
            let (la, li) = (lambda[a], lambda[i]);
            let den = (la - li).sinh() * (la + li).sinh();
            if den == 0.0 || !den.is_finite() {
                return Err(Error::Domain(format!("coinciding lambda entries {la} and ±{li}")));
            }
            out[a] *= (la + li + mu).sinh() * (la - li + mu).sinh() / den;
            out[n + a] *= (la + li - mu).sinh() * (la - li - mu).sinh() / den;
        }
    }
    Ok(out)
}

/// Boundary coordinate `raw = a − b` (with `scale = |a| + |b|`) clamped at
/// zero and snapped to zero within the rounding noise of the subtraction:
/// a facet point such as `λ_j = λ_{j+1} + μ` does not reproduce its gap
/// exactly, and `√x` would turn an ulp of noise into a `1e−8` modulus.
fn facet_coordinate(raw: f64, scale: f64) -> f64 {
    if raw <= 4.0 * f64::EPSILON * scale {
        0.0
    } else {
        raw
    }
}

/// Factored form of `ℱ`: `ℱ_l = smooth_l · ∏_{k ∈ ids_l} sinh(x_k)`.
///
/// The boundary coordinates are `x_k = λ_k − λ_{k+1} − μ` for `k < n − 1`
/// and `x_{n−1} = λ_n − |u|`; they coincide with `|ζ_k|²`.
#[derive(Debug, Clone)]
pub struct Factored {
    /// Strictly positive smooth factors (length `2n`).
    pub smooth: Vec<f64>,
    /// Boundary coordinates whose `sinh` divides each `ℱ_l`.
    pub ids: Vec<Vec<usize>>,
    /// Boundary coordinates, clamped at zero.
    pub x: Vec<f64>,
}

impl Factored {
    /// Factor `ℱ(λ)` for `λ ∈ closure(𝒟₊)`.
    pub fn new(lambda: &[f64], p: &Params) -> Result<Self> {
        require_closure(p, lambda)?;
        let n = p.n;
        let (mu, u) = (p.mu, p.u);
        let mut smooth = vec![0.0; 2 * n];
        let mut ids = vec![Vec::new(); 2 * n];
        let mut x = vec![0.0; n];
        for k in 0..n - 1 {
            x[k] = facet_coordinate(lambda[k] - lambda[k + 1] - mu, lambda[k].abs() + lambda[k + 1].abs() + mu);
        }
        x[n - 1] = facet_coordinate(lambda[n - 1] - u.abs(), lambda[n - 1].abs() + u.abs());
        for a in 0..n {
            let la = lambda[a];
            let pre = (-mu).exp() * mu.sinh() / (2.0 * la).sinh();
            // e^{2λ} − y² = 2e^{λ−u} sinh(λ+u),  y² − e^{−2λ} = 2e^{−u−λ} sinh(λ−u)
            let mut sa = pre * 2.0 * (la - u).exp();
            let mut sb = pre * 2.0 * (-u - la).exp();
            if a == n - 1 && u < 0.0 {
                ids[a].push(n - 1);
            } else {
                sa *= (la + u).sinh();
            }
            if a == n - 1 && u > 0.0 {
                ids[n + a].push(n - 1);
            } else {
                sb *= (la - u).sinh();
            }
            for i in 0..n {
                if i == a {
                    continue;
                }
                let li = lambda[i];
                let den = (la - li).sinh() * (la + li).sinh();
                if i + 1 == a {
                    // sinh(λ_a − λ_i + μ)/sinh(λ_a − λ_i) = sinh(x_i)/sinh(λ_i − λ_a)
                    sa *= (la + li + mu).sinh() / ((li - la).sinh() * (la + li).sinh());
                    ids[a].push(i);
                } else {
                    sa *= (la + li + mu).sinh() * (la - li + mu).sinh() / den;
                }
                if i == a + 1 {
                    sb *= (la + li - mu).sinh() / den;
                    ids[n + a].push(a);
                } else {
                    sb *= (la + li - mu).sinh() * (la - li - mu).sinh() / den;
                }
            }
            smooth[a] = sa;
            smooth[n + a] = sb;
        }
        if let Some(l) = smooth.iter().position(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::Domain(format!("smooth factor {} of calF is not positive at {lambda:?}", l + 1)));
        }
        Ok(Factored { smooth, ids, x })
    }

    /// `ℱ_l` as a plain number.
    pub fn calf(&self, l: usize) -> f64 {
        self.smooth[l] * self.ids[l].iter().map(|&k| self.x[k].sinh()).product::<f64>()
    }

    /// `√ℱ_l` evaluated factorwise.
    pub fn sqrt_calf(&self, l: usize) -> f64 {
        self.smooth[l].sqrt() * self.ids[l].iter().map(|&k| self.x[k].sinh().sqrt()).product::<f64>()
    }

    /// Positive analytic factor `f_l` with `|w̃_l| = f_l · ∏ √x_k`.
    pub fn f(&self, l: usize) -> f64 {
        self.smooth[l].sqrt() * self.ids[l].iter().map(|&k| sinhc(self.x[k]).sqrt()).product::<f64>()
    }

    /// Boundary factor `∏ √x_k` of `|w̃_l|`.
    pub fn boundary(&self, l: usize) -> f64 {
        self.ids[l].iter().map(|&k| self.x[k].sqrt()).product()
    }

    /// Gap index `g` if `(l, m)` is the pole pair `(g + 1, n + g)` (in either order).
    fn pole_gap(&self, l: usize, m: usize) -> Option<usize> {
        let n = self.x.len();
        let hit = |a: usize, b: usize| a < n && b >= n && b < 2 * n - 1 && a == b - n + 1;
        if hit(l, m) {
            Some(m - n)
        } else if hit(m, l) {
            Some(l - n)
        } else {
            None
        }
    }

    /// Positive factor `f_{g+2, n+g+1}` of the pole-pair entry, with
    /// `|Q_{g+2,n+g+1}| = f_{g+2,n+g+1} · ∏ √x` over the remaining boundary
    /// factors (only the floor coordinate, for `g = n − 2`).
    pub fn f_pair(&self, g: usize, mu: f64) -> f64 {
        let n = self.x.len();
        let (l, m) = (g + 1, n + g);
        let others: f64 = self.other_ids(l, m, g).map(|k| sinhc(self.x[k]).sqrt()).product();
        (2.0 * mu + self.x[g]).exp() * (self.smooth[l] * self.smooth[m]).sqrt() * others
    }

    fn other_ids(&self, l: usize, m: usize, g: usize) -> impl Iterator<Item = usize> + '_ {
        let mut skip_l = true;
        let mut skip_m = true;
        let a = self.ids[l].iter().copied().filter(move |&k| {
            if k == g && skip_l {
                skip_l = false;
                false
            } else {
                true
            }
        });
        let b = self.ids[m].iter().copied().filter(move |&k| {
            if k == g && skip_m {
                skip_m = false;
                false
            } else {
                true
            }
        });
        a.chain(b)
    }

    /// `√ℱ_l √ℱ_m / (Λ_lΛ_m − α²)` for a pole pair, with the cancellation made exact.
    fn pole_product(&self, l: usize, m: usize, g: usize, mu: f64) -> f64 {
        let others: f64 = self.other_ids(l, m, g).map(|k| self.x[k].sinh().sqrt()).product();
        -0.5 * (2.0 * mu + self.x[g]).exp() * (self.smooth[l] * self.smooth[m]).sqrt() * others
    }
}

/// The functions `ℱ_1, …, ℱ_{2n}`, nonnegative on `closure(𝒟₊)`.
pub fn calf(lambda: &[f64], p: &Params) -> Result<Vec<f64>> {
    let fac = Factored::new(lambda, p)?;
    Ok((0..2 * p.n).map(|l| fac.calf(l)).collect())
}

/// `ℱ` evaluated directly from the defining products, valid for any `λ`
/// without coincidences (used to probe points outside the domain).
pub fn calf_unrestricted(lambda: &[f64], p: &Params) -> Result<Vec<f64>> {
    let n = p.n;
    let f = f_functions(lambda, p)?;
    let y2 = p.y().powi(2);
    let mut out = vec![0.0; 2 * n];
    for a in 0..n {
        let la = lambda[a];
        let pre = (-p.mu).exp() * p.mu.sinh() / (2.0 * la).sinh();
        out[a] = pre * ((2.0 * la).exp() - y2) * f[a];
        out[n + a] = pre * (y2 - (-2.0 * la).exp()) * f[n + a];
    }
    Ok(out)
}

/// `|w̃_l| = f_l · boundary_l` in factored form.
#[derive(Debug, Clone)]
pub struct ModW {
    /// `|w̃_l|`.
    pub moduli: Vec<f64>,
    /// Strictly positive analytic factors `f_l`.
    pub f: Vec<f64>,
    /// Products of `√x` boundary factors.
    pub boundary: Vec<f64>,
    /// Factors `f_{j+1,n+j}` of the pole-pair entries, `j = 1, …, n − 1`.
    pub f_pair: Vec<f64>,
}

/// Factored moduli of `w̃` on `closure(𝒟₊)`.
pub fn mod_w_factored(lambda: &[f64], p: &Params) -> Result<ModW> {
    p.require_section()?;
    let fac = Factored::new(lambda, p)?;
    let m = 2 * p.n;
    let f: Vec<f64> = (0..m).map(|l| fac.f(l)).collect();
    let boundary: Vec<f64> = (0..m).map(|l| fac.boundary(l)).collect();
    Ok(ModW {
        moduli: (0..m).map(|l| fac.sqrt_calf(l)).collect(),
        f,
        boundary,
        f_pair: (0..p.n.saturating_sub(1)).map(|g| fac.f_pair(g, p.mu)).collect(),
    })
}

fn diag_d(big: f64, p: &Params) -> f64 {
    let a2 = p.alpha().powi(2);
    let y2 = p.y().powi(2);
    (big * big + a2 - 2.0 * y2 * big) / (big * big - a2)
}

/// `Q_{2n,2n}` as a single rational function of `t = λ_n`, evaluated with the
/// unrestricted `ℱ_{2n}` (analytic in `t` across `μ/2`).
fn q_last_direct(lambda: &[f64], t: f64, p: &Params) -> f64 {
    let n = p.n;
    let mut lam = lambda.to_vec();
    lam[n - 1] = t;
    let big = (-2.0 * t).exp();
    let a2 = p.alpha().powi(2);
    let y2 = p.y().powi(2);
    let mut fl = (-p.mu).exp() * p.mu.sinh() / (2.0 * t).sinh() * (y2 - (-2.0 * t).exp());
    for i in 0..n - 1 {
        let li = lam[i];
        fl *= (t + li - p.mu).sinh() * (t - li - p.mu).sinh() / ((t - li).sinh() * (t + li).sinh());
    }
    (big * big + a2 - 2.0 * y2 * big + 2.0 * fl) / (big * big - a2)
}

/// `Q_{2n,2n}` at `λ_n = t` within [`HALF_MU_WINDOW`] of `μ/2` by cubic
/// interpolation through points well outside the window.
fn q_last_near_half_mu(lambda: &[f64], p: &Params) -> f64 {
    let t0 = 0.5 * p.mu;
    let d = 1e-3;
    let nodes = [t0 - 2.0 * d, t0 - d, t0 + d, t0 + 2.0 * d];
    let vals: Vec<f64> = nodes.iter().map(|&t| q_last_direct(lambda, t, p)).collect();
    let t = lambda[p.n - 1];
    let mut acc = 0.0;
    for (i, &ti) in nodes.iter().enumerate() {
        let mut w = vals[i];
        for (j, &tj) in nodes.iter().enumerate() {
            if i != j {
                w *= (t - tj) / (ti - tj);
            }
        }
        acc += w;
    }
    acc
}

/// Assemble the admissible triple with phases `e^{iξ}` at `λ ∈ closure(𝒟₊)`.
pub fn build_triple(lambda: &[f64], xi: &[f64], p: &Params) -> Result<Triple> {
    require_closure(p, lambda)?;
    let n = p.n;
    let m = 2 * n;
    if xi.len() != m {
        return Err(Error::Domain(format!("xi has {} entries, expected {m}", xi.len())));
    }
    let fac = Factored::new(lambda, p)?;
    let big = big_lambda(lambda);
    let a2 = p.alpha().powi(2);
    let sq: Vec<f64> = (0..m).map(|l| fac.sqrt_calf(l)).collect();
    let wtilde = CVector::from_fn(m, |l, _| C64::from_polar(sq[l], xi[l]));
    let near_half = (lambda[n - 1] - 0.5 * p.mu).abs() < HALF_MU_WINDOW;
    let mut q = CMatrix::zeros(m, m);
    for l in 0..m {
        for k in 0..m {
            let phase = C64::from_polar(1.0, xi[l] - xi[k]);
            let val = if let Some(g) = fac.pole_gap(l, k) {
                phase * (2.0 * fac.pole_product(l, k, g, p.mu))
            } else if l == k && l == m - 1 && near_half {
                C64::new(q_last_near_half_mu(lambda, p), 0.0)
            } else {
                let mut e = phase * (2.0 * sq[l] * sq[k] / (big[l] * big[k] - a2));
                if l == k {
                    e += diag_d(big[l], p);
                }
                e
            };
            q[(l, k)] = val;
        }
    }
    Ok(Triple { lambda: lambda.to_vec(), wtilde, q })
}

/// Residuals of the admissibility conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    /// Constraint residual, relative to `max(1, max Λ²)`.
    pub constraint: f64,
    /// `‖Q†Q − 1‖`.
    pub unitarity: f64,
    /// `‖Q − Q†‖`.
    pub hermiticity: f64,
    /// `|tr Q|`.
    pub trace: f64,
    /// `‖Qw̃ − w̃‖`.
    pub eigen: f64,
    /// `|‖w̃‖² − α²(α^{−2n} − 1)|`.
    pub norm: f64,
}

impl AdmissibilityReport {
    /// Largest residual.
    pub fn max(&self) -> f64 {
        [self.constraint, self.unitarity, self.hermiticity, self.trace, self.eigen, self.norm]
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// All residuals at most `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Report every admissibility residual of `t` (max-entry norms).
pub fn verify_admissible(t: &Triple, p: &Params) -> AdmissibilityReport {
    let m = t.q.nrows();
    let big = big_lambda(&t.lambda);
    let a2 = p.alpha().powi(2);
    let y2 = p.y().powi(2);
    let mut constraint: f64 = 0.0;
    for l in 0..m {
        for k in 0..m {
            let mut r = t.q[(l, k)] * (big[l] * big[k] - a2) - 2.0 * t.wtilde[l] * t.wtilde[k].conj();
            if l == k {
                r -= big[l] * big[l] + a2 - 2.0 * y2 * big[l];
            }
            constraint = constraint.max(r.norm());
        }
    }
    let scale = big.iter().fold(1.0f64, |s, b| s.max(b * b));
    AdmissibilityReport {
        constraint: constraint / scale,
        unitarity: unitarity_defect(&t.q),
        hermiticity: hermiticity_defect(&t.q),
        trace: trace(&t.q).norm(),
        eigen: (&t.q * &t.wtilde - &t.wtilde).iter().fold(0.0, |s, z| s.max(z.norm())),
        norm: (t.wtilde.norm_squared() - p.wnorm2()).abs(),
    }
}

/// `|w̃_j|²` from the matrix-inverse formula `½ Σ_l (C^{−1})_{jl}(1 − D_ll)`,
/// valid for strongly regular `λ`.
pub fn calf_via_cauchy_inverse(lambda: &[f64], p: &Params) -> Result<Vec<f64>> {
    require_len(p, lambda)?;
    let big = big_lambda(lambda);
    let m = big.len();
    let a2 = p.alpha().powi(2);
    let c = DMatrix::from_fn(m, m, |l, k| 1.0 / (big[l] * big[k] - a2));
    let rhs = DVector::from_fn(m, |l, _| 0.5 * (1.0 - diag_d(big[l], p)));
    let sol = c.lu().solve(&rhs).ok_or_else(|| Error::Singular("Cauchy-like matrix C".into()))?;
    Ok(sol.iter().copied().collect())
}

/// Action of the torus `𝕋ⁿ` embedded as `diag(τ, τ)`.
pub fn torus_act(tau: &[C64], t: &Triple) -> Triple {
    let full: Vec<C64> = tau.iter().chain(tau.iter()).copied().collect();
    conjugate_by_phases(&full, t)
}

/// Action of the full diagonal torus `e^{iξ}`, `ξ ∈ ℝ^{2n}`.
pub fn full_phase_act(xi: &[f64], t: &Triple) -> Triple {
    let full: Vec<C64> = xi.iter().map(|&a| C64::from_polar(1.0, a)).collect();
    conjugate_by_phases(&full, t)
}

fn conjugate_by_phases(ph: &[C64], t: &Triple) -> Triple {
    let m = ph.len();
    Triple {
        lambda: t.lambda.clone(),
        wtilde: CVector::from_fn(m, |l, _| ph[l] * t.wtilde[l]),
        q: CMatrix::from_fn(m, m, |l, k| ph[l] * t.q[(l, k)] * ph[k].conj()),
    }
}

/// Angles `θ_j = arg(w̃_j w̃*_{n+j})` in `[0, 2π)`.
pub fn theta_from_triple(t: &Triple) -> Result<Vec<f64>> {
    let n = t.n();
    (0..n)
        .map(|j| {
            let z = t.wtilde[j] * t.wtilde[n + j].conj();
            if z.norm() <= MODULUS_FLOOR {
                Err(Error::BoundaryPoint(format!("|w_{} w_{}| vanishes", j + 1, n + j + 1)))
            } else {
                Ok(crate::model::wrap_angle(z.arg()))
            }
        })
        .collect()
}

/// `ξ = (θ, 0)`: the phases reproducing the Darboux angles `θ`.
pub fn xi_from_theta(theta: &[f64]) -> Vec<f64> {
    theta.iter().copied().chain(std::iter::repeat_n(0.0, theta.len())).collect()
}

fn unit_phase(z: C64, scale: f64, what: &str) -> Result<C64> {
    if z.norm() <= MODULUS_FLOOR * scale.max(1.0) || !z.norm().is_finite() {
        return Err(Error::PhaseUndefined(format!("{what} has zero modulus")));
    }
    Ok(z / z.norm())
}

/// Gauge-fix `t` by the torus action so that `w̃_1 > 0`, `w̃_{2n} > 0` and
/// `Q_{j+1,n+j} < 0` for `j = 1, …, n − 2` (for `n = 1`: `w̃_2 > 0`).
/// Returns the normal form and the `τ` used.
pub fn normal_form(t: &Triple, p: &Params) -> Result<(Triple, Vec<C64>)> {
    p.require_section()?;
    let n = p.n;
    require_len(p, &t.lambda)?;
    let fac = Factored::new(&t.lambda, p)?;
    let mut tau = vec![C64::new(1.0, 0.0); n];
    if n == 1 {
        let x = unit_phase(t.wtilde[1] / fac.f(1), 1.0, "w_2")?;
        tau[0] = x.conj();
    } else {
        let x1 = unit_phase(t.wtilde[0] / fac.f(0), 1.0, "w_1")?;
        let x2n = unit_phase(t.wtilde[2 * n - 1] / fac.f(2 * n - 1), 1.0, "w_2n")?;
        tau[0] = x1.conj();
        tau[n - 1] = x2n.conj();
        for g in 0..n.saturating_sub(2) {
            let x = unit_phase(-t.q[(g + 1, n + g)] / fac.f_pair(g, p.mu), 1.0, "Q pole-pair entry")?;
            tau[g + 1] = tau[g] * x.conj();
        }
    }
    Ok((torus_act(&tau, t), tau))
}

/// Global coordinates `ζ ∈ ℂⁿ` of the torus orbit of `t`.
pub fn zeta_from_triple(t: &Triple, p: &Params) -> Result<Vec<C64>> {
    let (s, _) = normal_form(t, p)?;
    let n = p.n;
    let fac = Factored::new(&s.lambda, p)?;
    if n == 1 {
        return Ok(vec![s.wtilde[0].conj() / fac.f(0)]);
    }
    let mut z: Vec<C64> = (0..n - 1).map(|g| s.wtilde[n + g] / fac.f(n + g)).collect();
    z.push(-s.q[(n - 1, 2 * n - 2)].conj() / fac.f_pair(n - 2, p.mu));
    Ok(z)
}

/// Phases `ξ(ζ)` of the normal-form triple with coordinates `ζ`.
pub fn xi_from_zeta(zeta: &[C64]) -> Vec<f64> {
    let n = zeta.len();
    let phi: Vec<f64> = zeta.iter().map(|z| if *z == C64::new(0.0, 0.0) { 0.0 } else { z.arg() }).collect();
    let mut xi = vec![0.0; 2 * n];
    if n == 1 {
        xi[0] = -phi[0];
        return xi;
    }
    let psi: Vec<f64> = (0..n).map(|j| if j == 0 { phi[0] } else { phi[j] - phi[j - 1] }).collect();
    for j in 0..n - 1 {
        xi[n + j] = xi[j] + psi[j];
        if j + 2 < n {
            xi[j + 1] = xi[n + j];
        }
    }
    xi[n - 1] = -psi[n - 1];
    xi
}

/// The normal-form triple with global coordinates `ζ`.
pub fn triple_from_zeta(zeta: &[C64], p: &Params) -> Result<Triple> {
    p.require_section()?;
    if zeta.len() != p.n {
        return Err(Error::Domain(format!("zeta has {} entries, expected {}", zeta.len(), p.n)));
    }
    build_triple(&lambda_from_zeta(zeta, p), &xi_from_zeta(zeta), p)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleJson {
    lambda: Vec<f64>,
    wtilde: Vec<[f64; 2]>,
    #[serde(rename = "Q")]
    q: Vec<Vec<[f64; 2]>>,
}

impl Triple {
    /// JSON value `{"lambda": …, "wtilde": [[re, im], …], "Q": [[[re, im], …], …]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let m = self.q.nrows();
        let j = TripleJson {
            lambda: self.lambda.clone(),
            wtilde: self.wtilde.iter().map(|z| [z.re, z.im]).collect(),
            q: (0..m).map(|l| (0..m).map(|k| [self.q[(l, k)].re, self.q[(l, k)].im]).collect()).collect(),
        };
        serde_json::to_value(j).expect("triple serializes")
    }

    /// Parse a triple and re-verify admissibility (rejecting residuals above [`LOAD_TOL`]).
    pub fn from_json(v: &serde_json::Value, p: &Params) -> Result<Self> {
        let j: TripleJson = serde_json::from_value(v.clone()).map_err(|e| Error::Domain(format!("bad triple JSON: {e}")))?;
        let n = j.lambda.len();
        if n != p.n || j.wtilde.len() != 2 * n || j.q.len() != 2 * n || j.q.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::Domain("triple JSON has inconsistent dimensions".into()));
        }
        let t = Triple {
            lambda: j.lambda,
            wtilde: CVector::from_fn(2 * n, |l, _| C64::new(j.wtilde[l][0], j.wtilde[l][1])),
            q: CMatrix::from_fn(2 * n, 2 * n, |l, k| C64::new(j.q[l][k][0], j.q[l][k][1])),
        };
        let r = verify_admissible(&t, p).max();
        if !(r <= LOAD_TOL) {
            return Err(Error::NotAdmissible(r));
        }
        Ok(t)
    }
}

/// Largest entrywise difference between two triples.
pub fn triple_distance(a: &Triple, b: &Triple) -> f64 {
    let dl = a.lambda.iter().zip(&b.lambda).fold(0.0f64, |s, (x, y)| s.max((x - y).abs()));
    let dw = (&a.wtilde - &b.wtilde).iter().fold(0.0f64, |s, z| s.max(z.norm()));
    dl.max(dw).max(max_abs(&(&a.q - &b.q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{angles, lambda_interior, rng};

    fn params(n: usize) -> Params {
        Params::default().with_n(n).unwrap()
    }

    #[test]
    fn empty_products_for_one_particle() {
        let p = params(1);
        assert_eq!(f_functions(&[1.3], &p).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn single_particle_calf_closed_form() {
        let p = Params::new(1, 2f64.ln(), -1.0, 0.0).unwrap();
        let f = calf(&[1.5], &p).unwrap();
        let want = (-p.mu).exp() * (3f64.exp() - 2f64.exp()) * p.mu.sinh() / 3f64.sinh();
        assert!((f[0] - want).abs() < 1e-14);
        assert!((p.wnorm2() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn factored_agrees_with_direct_products() {
        let mut r = rng(3);
        for n in 1..=3 {
            let p = params(n);
            for _ in 0..20 {
                let lam = lambda_interior(&mut r, &p, 0.05, 1.0);
                let a = calf(&lam, &p).unwrap();
                let b = calf_unrestricted(&lam, &p).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
                }
                let mw = mod_w_factored(&lam, &p).unwrap();
                for l in 0..2 * n {
                    assert!((mw.moduli[l] - mw.f[l] * mw.boundary[l]).abs() < 1e-12);
                    assert!((mw.moduli[l] - a[l].sqrt()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pole_pair_factor_matches_entrywise_value() {
        let mut r = rng(4);
        for n in 2..=3 {
            let p = params(n);
            for _ in 0..20 {
                let lam = lambda_interior(&mut r, &p, 0.05, 1.0);
                let big = big_lambda(&lam);
                let a2 = p.alpha().powi(2);
                let f = calf(&lam, &p).unwrap();
                let mw = mod_w_factored(&lam, &p).unwrap();
                let x = crate::model::zeta_moduli_sq(&lam, &p);
                for g in 0..n - 1 {
                    let (l, m) = (g + 1, n + g);
                    let entry = 2.0 * (f[l] * f[m]).sqrt() / (big[l] * big[m] - a2);
                    let bnd = if g + 2 == n { x[n - 1].sqrt() } else { 1.0 };
                    assert!((entry.abs() - mw.f_pair[g] * bnd).abs() < 1e-10 * entry.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn random_triples_are_admissible() {
        let mut r = rng(5);
        for n in 1..=3 {
            let p = params(n);
            for _ in 0..30 {
                let lam = lambda_interior(&mut r, &p, 0.0, 1.0);
                let xi = angles(&mut r, 2 * n);
                let t = build_triple(&lam, &xi, &p).unwrap();
                let rep = verify_admissible(&t, &p);
                assert!(rep.passes(ADMISSIBLE_TOL), "{rep:?}");
            }
        }
    }

    #[test]
    fn vertex_triple_is_supported_on_first_and_last() {
        for n in 1..=3 {
            let p = params(n);
            let t = triple_from_zeta(&vec![C64::new(0.0, 0.0); n], &p).unwrap();
            for l in 0..2 * n {
                // for n = 1 the floor factor also removes index 1
                let on = (l == 0 && n > 1) || l == 2 * n - 1;
                assert_eq!(t.wtilde[l].norm() > 0.0, on, "n={n}, l={l}");
            }
            assert!(verify_admissible(&t, &p).passes(ADMISSIBLE_TOL));
        }
    }

    #[test]
    fn scaled_w_norm_residual() {
        let p = params(2);
        let mut t = build_triple(&[2.0, 1.2], &[0.0; 4], &p).unwrap();
        t.wtilde *= C64::new(1.01, 0.0);
        let rep = verify_admissible(&t, &p);
        assert!((rep.norm - 0.0201 * p.wnorm2()).abs() < 1e-12);
    }

    #[test]
    fn theta_round_trip_and_zeta_two_paths() {
        let mut r = rng(6);
        for n in 1..=3 {
            let p = params(n);
            for _ in 0..20 {
                let lam = lambda_interior(&mut r, &p, 0.05, 1.0);
                let th = angles(&mut r, n);
                let t = build_triple(&lam, &xi_from_theta(&th), &p).unwrap();
                let back = theta_from_triple(&t).unwrap();
                for (a, b) in th.iter().zip(&back) {
                    assert!(crate::model::angle_distance(*a, *b) < 1e-10);
                }
                let z1 = zeta_from_triple(&t, &p).unwrap();
                let z2 = crate::model::zeta_from_darboux(&lam, &th, &p).unwrap();
                for (a, b) in z1.iter().zip(&z2) {
                    assert!((a - b).norm() < 1e-9, "n={n}: {z1:?} vs {z2:?}");
                }
            }
        }
    }

    #[test]
    fn zeta_round_trip_and_normal_form_signs() {
        let mut r = rng(7);
        for n in 1..=3 {
            let p = params(n);
            for _ in 0..20 {
                let z = crate::sampling::zeta(&mut r, n, 0.7);
                let t = triple_from_zeta(&z, &p).unwrap();
                let (s, _) = normal_form(&t, &p).unwrap();
                assert!(triple_distance(&s, &t) < 1e-10, "triple_from_zeta is not in normal form");
                let back = zeta_from_triple(&t, &p).unwrap();
                for (a, b) in z.iter().zip(&back) {
                    assert!((a - b).norm() < 1e-9);
                }
                let tau = crate::sampling::phases(&mut r, n);
                let moved = torus_act(&tau, &t);
                let back2 = zeta_from_triple(&moved, &p).unwrap();
                for (a, b) in z.iter().zip(&back2) {
                    assert!((a - b).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn cauchy_inverse_cross_check() {
        let p = params(2);
        let lam = [2.1, 1.3];
        let a = calf(&lam, &p).unwrap();
        let b = calf_via_cauchy_inverse(&lam, &p).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let p = params(2);
        let t = build_triple(&[2.0, 1.2], &[0.3, -0.2, 1.0, 0.5], &p).unwrap();
        let back = Triple::from_json(&t.to_json(), &p).unwrap();
        assert!(triple_distance(&t, &back) == 0.0);
        let mut bad = t.clone();
        bad.wtilde *= C64::new(1.01, 0.0);
        assert!(matches!(Triple::from_json(&bad.to_json(), &p), Err(Error::NotAdmissible(_))));
    }
}
