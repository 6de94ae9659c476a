//! Reduced dynamics.
//!
//! The commuting families generate explicit torus flows on both global
//! models, `M = ℂⁿ ∋ ζ` and `M̂ = ℂⁿ ∋ Z`. The many-body Hamiltonians are
//! integrated on their Darboux charts `(λ, θ)` with implicit midpoint steps
//! composed into the symmetric fourth-order triple jump, using the
//! convention `θ̇ = ∂H/∂λ`, `λ̇ = −∂H/∂θ`. Gradients are
//! obtained by complex-step differentiation of the generic evaluators.
//! Since the chart formula of `H` involves `√(1 − sinh²u/sinh²λ_n)`, its flow
//! can leave the chart in finite time; this is reported as a
//! [`BoundaryEvent`] rather than an error.

use std::io::Write;

use crate::error::{Error, Result};
use crate::hamiltonians::{
    frequencies_hat, frequencies_m, h_hat_main_generic, h_hat_sqrt_args, h_main_generic, h_sqrt_args, p_j,
    reduced_actions_hat, reduced_actions_m, Scalar,
};
use crate::model::{hat_lambda_from_z, lambda_from_zeta, vertex_hat, vertex_lambda, zeta_from_darboux, Params};
use crate::reconstruct::hat_actions_from_zeta;
use crate::sampling::{rng, zeta};
use crate::algebra::C64;

/// Square-root arguments below this value end a chart trajectory.
pub const BOUNDARY_ARG: f64 = 1e-8;
/// Time resolution of boundary-event bisection.
pub const EVENT_TIME_TOL: f64 = 1e-10;
/// Fixed-point iterations allowed per implicit midpoint step.
pub const MIDPOINT_MAX_ITER: usize = 50;
/// Convergence tolerance of the fixed-point iteration (relative to `max(1, |z|)`).
pub const MIDPOINT_TOL: f64 = 1e-14;
const COMPLEX_STEP: f64 = 1e-30;

/// Which Hamiltonian drives a chart trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowKind {
    /// The hyperbolic many-body Hamiltonian `H(λ, θ)` on the `M` chart.
    H,
    /// The dual Hamiltonian `Ĥ(λ̂, θ̂)` on the `M̂` chart.
    Hhat,
    /// `Σ cosh(2jλ_l)` on the `M` chart.
    ActionM(usize),
    /// `Σ P_j(e^{λ̂_a})` on the `M̂` chart.
    ActionHat(usize),
}

impl FlowKind {
    /// Whether the chart coordinates are `(λ, θ)` of `M`.
    pub fn on_m(self) -> bool {
        matches!(self, FlowKind::H | FlowKind::ActionM(_))
    }

    fn eval<S: Scalar>(self, pos: &[S], ang: &[S], p: &Params) -> S {
        match self {
            FlowKind::H => h_main_generic(pos, ang, p),
            FlowKind::Hhat => h_hat_main_generic(pos, ang, p),
            FlowKind::ActionM(j) => pos.iter().fold(S::cst(0.0), |s, &l| s + (S::cst(2.0 * j as f64) * l).cosh()),
            FlowKind::ActionHat(j) => pos.iter().fold(S::cst(0.0), |s, &l| s + p_j(j, l.exp())),
        }
    }

    fn sqrt_args(self, pos: &[f64], p: &Params) -> Vec<f64> {
        match self {
            FlowKind::H => h_sqrt_args(pos, p),
            FlowKind::Hhat => h_hat_sqrt_args(pos, p),
            _ => Vec::new(),
        }
    }
}

/// Smallest square-root argument of the chart formula (`+∞` if there is none).
pub fn min_sqrt_arg(kind: FlowKind, pos: &[f64], p: &Params) -> (f64, Option<usize>) {
    kind.sqrt_args(pos, p)
        .into_iter()
        .enumerate()
        .fold((f64::INFINITY, None), |acc, (i, a)| if a < acc.0 { (a, Some(i)) } else { acc })
}

/// Value of the Hamiltonian at a chart point.
pub fn energy(kind: FlowKind, pos: &[f64], ang: &[f64], p: &Params) -> f64 {
    kind.eval(pos, ang, p)
}

/// Gradient `(∂H/∂pos, ∂H/∂ang)` by complex-step differentiation.
pub fn gradient(kind: FlowKind, pos: &[f64], ang: &[f64], p: &Params) -> (Vec<f64>, Vec<f64>) {
    let n = pos.len();
    let lift = |v: &[f64]| v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>();
    let (lp, la) = (lift(pos), lift(ang));
    let d = |which: usize, i: usize| {
        let (mut a, mut b) = (lp.clone(), la.clone());
        if which == 0 {
            a[i].im = COMPLEX_STEP;
        } else {
            b[i].im = COMPLEX_STEP;
        }
        kind.eval(&a, &b, p).im / COMPLEX_STEP
    };
    ((0..n).map(|i| d(0, i)).collect(), (0..n).map(|i| d(1, i)).collect())
}

fn vector_field(kind: FlowKind, z: &[f64], p: &Params) -> Vec<f64> {
    let n = z.len() / 2;
    let (gp, ga) = gradient(kind, &z[..n], &z[n..], p);
    ga.iter().map(|g| -g).chain(gp).collect()
}

/// One implicit midpoint step of size `dt` from `z = (pos, ang)`.
pub fn midpoint_step(kind: FlowKind, z: &[f64], dt: f64, p: &Params) -> Result<Vec<f64>> {
    let n = z.len() / 2;
    let f0 = vector_field(kind, z, p);
    let mut z1: Vec<f64> = z.iter().zip(&f0).map(|(a, b)| a + dt * b).collect();
    for _ in 0..MIDPOINT_MAX_ITER {
        let zm: Vec<f64> = z.iter().zip(&z1).map(|(a, b)| 0.5 * (a + b)).collect();
        if min_sqrt_arg(kind, &zm[..n], p).0 <= 0.0 {
            return Err(Error::Domain("midpoint left the chart".into()));
        }
        let f = vector_field(kind, &zm, p);
        let next: Vec<f64> = z.iter().zip(&f).map(|(a, b)| a + dt * b).collect();
        let scale = next.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let diff = next.iter().zip(&z1).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        z1 = next;
        if !z1.iter().all(|x| x.is_finite()) {
            break;
        }
        if diff <= MIDPOINT_TOL * scale {
            return Ok(z1);
        }
    }
    Err(Error::NoConvergence(MIDPOINT_MAX_ITER))
}

/// One step of the fourth-order triple-jump composition of implicit midpoint
/// steps (`γ₁ dt, γ₂ dt, γ₁ dt` with `γ₁ = 1/(2 − 2^{1/3})`,
/// `γ₂ = 1 − 2γ₁`). Symplectic and symmetric like its building block; the
/// plain midpoint rule's `O(dt²)` energy oscillation is too large for
/// `dt = 1e−3` energy checks at the `1e−8` level.
pub fn triple_jump_step(kind: FlowKind, z: &[f64], dt: f64, p: &Params) -> Result<Vec<f64>> {
    let g1 = 1.0 / (2.0 - 2f64.cbrt());
    let g2 = 1.0 - 2.0 * g1;
    let z1 = midpoint_step(kind, z, g1 * dt, p)?;
    let z2 = midpoint_step(kind, &z1, g2 * dt, p)?;
    midpoint_step(kind, &z2, g1 * dt, p)
}

/// Maximum recursion depth of step splitting in [`symplectic_step`] when a
/// stage fails.
pub const MAX_STEP_SPLITS: u32 = 24;
/// Maximum recursion depth of splitting driven by the local error estimate.
pub const MAX_ERROR_SPLITS: u32 = 12;
/// Local error (relative to `max(1, |z|)`) above which a step is split.
pub const LOCAL_ERROR_TOL: f64 = 1e-12;

/// A [`triple_jump_step`] of size `dt` with step-doubling error control.
///
/// The full step is compared with two half steps; if they differ by more
/// than [`LOCAL_ERROR_TOL`], or a stage fails (fixed-point iteration not
/// converging, or a midpoint outside the chart), both halves are split
/// again, recursively up to [`MAX_ERROR_SPLITS`] or [`MAX_STEP_SPLITS`]
/// levels respectively. A step whose end point lies outside the chart is
/// rejected with [`Error::Domain`] without splitting. Away from the chart
/// boundary no splitting happens at the step sizes used here, so the map
/// stays the symplectic triple jump; near the boundary the chart vector
/// field grows like `1/√arg` and the splitting resolves the fast angle motion.
pub fn symplectic_step(kind: FlowKind, z: &[f64], dt: f64, p: &Params) -> Result<Vec<f64>> {
    split_step(kind, z, dt, p, 0)
}

fn split_step(kind: FlowKind, z: &[f64], dt: f64, p: &Params, depth: u32) -> Result<Vec<f64>> {
    let n = p.n;
    let attempt = triple_jump_step(kind, z, dt, p).and_then(|full| {
        let half = triple_jump_step(kind, z, 0.5 * dt, p)?;
        let two = triple_jump_step(kind, &half, 0.5 * dt, p)?;
        let scale = z.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let err = full.iter().zip(&two).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        Ok((two, err / scale))
    });
    let split = match &attempt {
        // a step ending outside the chart is a boundary crossing, which no
        // amount of splitting removes; the caller locates it
        Ok((z1, _)) if min_sqrt_arg(kind, &z1[..n], p).0 < BOUNDARY_ARG => {
            return Err(Error::Domain("step left the chart".into()));
        }
        Ok((_, err)) => *err > LOCAL_ERROR_TOL && depth < MAX_ERROR_SPLITS,
        Err(Error::NoConvergence(_) | Error::Domain(_)) => depth < MAX_STEP_SPLITS,
        Err(_) => false,
    };
    if split {
        let half = split_step(kind, z, 0.5 * dt, p, depth + 1)?;
        return split_step(kind, &half, 0.5 * dt, p, depth + 1);
    }
    attempt.map(|(z1, _)| z1)
}

/// A trajectory leaving the chart.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BoundaryEvent {
    /// Time of the last state with all square-root arguments `≥` [`BOUNDARY_ARG`].
    pub time: f64,
    /// Width of the final bisection bracket.
    pub time_bracket: f64,
    /// Index into the square-root argument list of the critical factor.
    pub arg_index: usize,
    /// Value of that argument at `time`.
    pub min_arg: f64,
}

/// Sampled solution of Hamilton's equations on a chart.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Which Hamiltonian generated it.
    pub kind: FlowKind,
    /// Strictly increasing sample times.
    pub times: Vec<f64>,
    /// Positions (`λ` or `λ̂`) per sample.
    pub positions: Vec<Vec<f64>>,
    /// Angles (`θ` or `θ̂`) per sample.
    pub angles: Vec<Vec<f64>>,
    /// Energy per sample.
    pub energy: Vec<f64>,
    /// Conserved action variables per sample: `λ̂` for `H`, `|ζ_k|²` or
    /// `|Z_k|²` for the torus flows, `NaN` for `Ĥ`.
    pub actions: Vec<Vec<f64>>,
    /// Early termination at the chart boundary.
    pub boundary_event: Option<BoundaryEvent>,
}

/// Summary diagnostics of a trajectory.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TrajectorySummary {
    /// Final time reached.
    pub t_final: f64,
    /// Number of samples.
    pub samples: usize,
    /// Initial energy.
    pub energy0: f64,
    /// `max_t |E(t) − E₀| / |E₀|`.
    pub energy_max_rel_dev: f64,
    /// Least-squares slope of `(E(t) − E₀)/|E₀|` against `t`: the secular
    /// part of the energy error (the bounded oscillation of a symplectic
    /// integrator is not drift).
    pub energy_drift_per_time: f64,
    /// `max_t max_a |action_a(t) − action_a(0)|` over finite action samples.
    pub action_drift: f64,
}

impl Trajectory {
    /// Summary of drifts.
    pub fn summary(&self) -> TrajectorySummary {
        let e0 = self.energy[0];
        let t_final = *self.times.last().unwrap_or(&0.0);
        let de = self.energy.iter().fold(0.0_f64, |m, e| m.max((e - e0).abs()));
        let a0 = &self.actions[0];
        let da = self.actions.iter().fold(0.0_f64, |m, a| {
            a.iter().zip(a0).filter(|(x, y)| x.is_finite() && y.is_finite()).fold(m, |m, (x, y)| m.max((x - y).abs()))
        });
        let scale = e0.abs().max(f64::MIN_POSITIVE);
        let m = self.times.len() as f64;
        let tm = self.times.iter().sum::<f64>() / m;
        let em = self.energy.iter().map(|e| (e - e0) / scale).sum::<f64>() / m;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (t, e) in self.times.iter().zip(&self.energy) {
            sxy += (t - tm) * ((e - e0) / scale - em);
            sxx += (t - tm) * (t - tm);
        }
        TrajectorySummary {
            t_final,
            samples: self.times.len(),
            energy0: e0,
            energy_max_rel_dev: de / scale,
            energy_drift_per_time: if sxx > 0.0 { (sxy / sxx).abs() } else { 0.0 },
            action_drift: da,
        }
    }

    /// Write the CSV `t, lambda_1..n, theta_1..n, energy, action_1..n`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self.positions.first().map_or(0, Vec::len);
        let mut head = vec!["t".to_string()];
        head.extend((1..=n).map(|i| format!("lambda_{i}")));
        head.extend((1..=n).map(|i| format!("theta_{i}")));
        head.push("energy".into());
        head.extend((1..=n).map(|i| format!("action_{i}")));
        writeln!(w, "{}", head.join(","))?;
        for s in 0..self.times.len() {
            let mut row = vec![fmt17(self.times[s])];
            row.extend(self.positions[s].iter().map(|x| fmt17(*x)));
            row.extend(self.angles[s].iter().map(|x| fmt17(*x)));
            row.push(fmt17(self.energy[s]));
            row.extend(self.actions[s].iter().map(|x| fmt17(*x)));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// A float with 17 significant digits (`nan`/`inf` spelled out).
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn conserved_actions(kind: FlowKind, pos: &[f64], ang: &[f64], p: &Params) -> Vec<f64> {
    let nan = vec![f64::NAN; pos.len()];
    match kind {
        // the dual positions λ̂ are the action variables of H
        FlowKind::H => zeta_from_darboux(pos, ang, p)
            .and_then(|z| hat_actions_from_zeta(&z, p))
            .map(|h| h.hat_lambda)
            .unwrap_or(nan),
        // flows of functions of the positions keep the moduli |ζ_k|², |Z_k|²
        FlowKind::ActionM(_) => crate::model::zeta_moduli_sq(pos, p),
        FlowKind::ActionHat(_) => hat_moduli_sq(pos, p),
        // the actions of Ĥ are the positions λ, which the hat chart does not expose
        FlowKind::Hhat => nan,
    }
}

/// `|Z_k|²` from `λ̂`: `λ̂_k − λ̂_{k+1} − μ` for `k < n` and `s − λ̂_1`.
pub fn hat_moduli_sq(hat: &[f64], p: &Params) -> Vec<f64> {
    let n = hat.len();
    (0..n).map(|k| if k + 1 < n { hat[k] - hat[k + 1] - p.mu } else { p.s() - hat[0] }).collect()
}

/// Integrate the chart Hamiltonian `kind` from `(pos, ang)` up to `t_end` with
/// step `dt`, stopping early at the chart boundary.
pub fn integrate_many_body(
    kind: FlowKind,
    start: (&[f64], &[f64]),
    t_end: f64,
    dt: f64,
    p: &Params,
) -> Result<Trajectory> {
    let n = p.n;
    let (pos0, ang0) = start;
    if pos0.len() != n || ang0.len() != n {
        return Err(Error::Domain(format!("chart point must have {n} positions and {n} angles")));
    }
    if !(dt > 0.0 && t_end >= 0.0 && dt.is_finite() && t_end.is_finite()) {
        return Err(Error::Domain(format!("need dt > 0 and t_end >= 0 (dt={dt}, t_end={t_end})")));
    }
    let (m0, _) = min_sqrt_arg(kind, pos0, p);
    if m0 < BOUNDARY_ARG {
        return Err(Error::Domain(format!("start point is not inside the chart (square-root argument {m0:e})")));
    }
    let mut traj = Trajectory {
        kind,
        times: Vec::new(),
        positions: Vec::new(),
        angles: Vec::new(),
        energy: Vec::new(),
        actions: Vec::new(),
        boundary_event: None,
    };
    let record = |traj: &mut Trajectory, t: f64, z: &[f64]| {
        traj.times.push(t);
        traj.positions.push(z[..n].to_vec());
        traj.angles.push(z[n..].to_vec());
        traj.energy.push(energy(kind, &z[..n], &z[n..], p));
        traj.actions.push(conserved_actions(kind, &z[..n], &z[n..], p));
    };
    let mut z: Vec<f64> = pos0.iter().chain(ang0).copied().collect();
    let mut t = 0.0;
    record(&mut traj, t, &z);
    let steps = (t_end / dt).round().max(0.0) as usize;
    let try_step = |z: &[f64], h: f64| -> Option<Vec<f64>> {
        symplectic_step(kind, z, h, p).ok().filter(|z1| min_sqrt_arg(kind, &z1[..n], p).0 >= BOUNDARY_ARG)
    };
    for s in 0..steps {
        let target = if s + 1 == steps { t_end } else { (s + 1) as f64 * dt };
        let h = target - t;
        if let Some(z1) = try_step(&z, h) {
            z = z1;
            t = target;
            record(&mut traj, t, &z);
            continue;
        }
        let (mut lo, mut hi) = (0.0, h);
        let mut z_lo = z.clone();
        while hi - lo > EVENT_TIME_TOL {
            let mid = 0.5 * (lo + hi);
            match try_step(&z, mid) {
                Some(zm) => {
                    lo = mid;
                    z_lo = zm;
                }
                None => hi = mid,
            }
        }
        let (arg, idx) = min_sqrt_arg(kind, &z_lo[..n], p);
        if arg > 1e-4 {
            // not a boundary: the implicit equations themselves failed
            return Err(Error::NoConvergence(MIDPOINT_MAX_ITER));
        }
        if lo > 0.0 {
            t += lo;
            z = z_lo;
            record(&mut traj, t, &z);
        }
        traj.boundary_event =
            Some(BoundaryEvent { time: t, time_bracket: hi - lo, arg_index: idx.unwrap_or(0), min_arg: arg });
        break;
    }
    Ok(traj)
}

/// Sample [`torus_flow_m`] on `t = 0, dt, …, t_end`, recording `(λ, θ)`
/// (angles `NaN` where some `ζ_k = 0`), `Σ cosh(2jλ)` and the actions `|ζ_k|²`.
pub fn torus_trajectory_m(zeta0: &[C64], j: usize, t_end: f64, dt: f64, p: &Params) -> Result<Trajectory> {
    if zeta0.len() != p.n {
        return Err(Error::Domain(format!("zeta must have {} components", p.n)));
    }
    if !(dt > 0.0 && t_end >= 0.0 && dt.is_finite() && t_end.is_finite()) {
        return Err(Error::Domain(format!("need dt > 0 and t_end >= 0 (dt={dt}, t_end={t_end})")));
    }
    p.require_section()?;
    let steps = (t_end / dt).round() as usize;
    let mut traj = Trajectory {
        kind: FlowKind::ActionM(j),
        times: Vec::new(),
        positions: Vec::new(),
        angles: Vec::new(),
        energy: Vec::new(),
        actions: Vec::new(),
        boundary_event: None,
    };
    for s in 0..=steps {
        let t = if s == steps { t_end } else { s as f64 * dt };
        let z = torus_flow_m(zeta0, j, t, p);
        let lam = lambda_from_zeta(&z, p);
        let ang = crate::model::darboux_from_zeta(&z, p).map(|(_, th)| th).unwrap_or(vec![f64::NAN; p.n]);
        traj.energy.push(reduced_actions_hat(&lam, j));
        traj.actions.push(z.iter().map(|c| c.norm_sqr()).collect());
        traj.times.push(t);
        traj.positions.push(lam);
        traj.angles.push(ang);
    }
    Ok(traj)
}

/// Flow of `Σ cosh(2jλ_l)` on `M = ℂⁿ`: the phase of `ζ_k` advances by
/// `−t Σ_{l≤k} Ω_{j,l}` with `Ω_{j,l} = 2j sinh(2jλ_l)`.
pub fn torus_flow_m(zeta0: &[C64], j: usize, t: f64, p: &Params) -> Vec<C64> {
    let om = frequencies_m(j, &lambda_from_zeta(zeta0, p));
    let mut acc = 0.0;
    zeta0
        .iter()
        .zip(&om)
        .map(|(z, o)| {
            acc += o;
            z * C64::from_polar(1.0, -t * acc)
        })
        .collect()
}

/// Flow of `Σ P_j(e^{λ̂_a})` on `M̂ = ℂⁿ`: the phase of `Z_k` (`k < n`)
/// advances by `t Σ_{l>k} Ω̂_{j,l}`, that of `Z_n` by `t Σ_l Ω̂_{j,l}`.
pub fn torus_flow_hat(z0: &[C64], j: usize, t: f64, p: &Params) -> Vec<C64> {
    let n = z0.len();
    let om = frequencies_hat(j, &hat_lambda_from_z(z0, p));
    (0..n)
        .map(|k| {
            let s: f64 = if k + 1 < n { om[k + 1..].iter().sum() } else { om.iter().sum() };
            z0[k] * C64::from_polar(1.0, t * s)
        })
        .collect()
}

/// Frequencies of a commuting Hamiltonian and their separation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FrequencyReport {
    /// `Ω_{j,1..n}`.
    pub frequencies: Vec<f64>,
    /// `Ω_a − Ω_b` for `a < b`.
    pub differences: Vec<f64>,
    /// Smallest `|Ω_a − Ω_b|`.
    pub min_gap: f64,
    /// `min_gap > 1e−10`.
    pub pairwise_distinct: bool,
}

/// Frequencies of `Σ cosh(2jλ)` (`hat = false`) or of `Σ P_j(e^{λ̂})` (`hat = true`).
pub fn frequency_report(j: usize, point: &[f64], hat: bool) -> FrequencyReport {
    let frequencies = if hat { frequencies_hat(j, point) } else { frequencies_m(j, point) };
    let mut differences = Vec::new();
    for a in 0..frequencies.len() {
        for b in a + 1..frequencies.len() {
            differences.push(frequencies[a] - frequencies[b]);
        }
    }
    let min_gap = differences.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    FrequencyReport { frequencies, differences, min_gap, pairwise_distinct: min_gap > 1e-10 }
}

/// Stationarity of the origins and the reduced values at the vertices.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EquilibriumReport {
    /// `ζ = 0` fixed by every `torus_flow_m`.
    pub zeta_origin_stationary: bool,
    /// `Z = 0` fixed by every `torus_flow_hat`.
    pub z_origin_stationary: bool,
    /// Vertex `λ` (image of `ζ = 0`).
    pub vertex_lambda: Vec<f64>,
    /// `Σ cosh(2jλ)` at the vertex, `j = 1..n`.
    pub reduced_actions_at_vertex: Vec<f64>,
    /// Vertex `λ̂` (image of `Z = 0`).
    pub vertex_hat: Vec<f64>,
    /// `Σ P_1(e^{λ̂})` at the hat vertex.
    pub hat_h1_at_vertex: f64,
}

/// Check the joint equilibria `ζ = 0` and `Z = 0`.
pub fn equilibrium_scan(p: &Params) -> Result<EquilibriumReport> {
    p.require_section()?;
    let n = p.n;
    let zero = vec![C64::new(0.0, 0.0); n];
    let times = [0.3, 1.0, 7.5];
    let fixed = |f: &dyn Fn(usize, f64) -> Vec<C64>| {
        (1..=n).all(|j| times.iter().all(|&t| f(j, t).iter().all(|z| z.norm() == 0.0)))
    };
    let vl = vertex_lambda(p);
    let vh = vertex_hat(p);
    Ok(EquilibriumReport {
        zeta_origin_stationary: fixed(&|j, t| torus_flow_m(&zero, j, t, p)),
        z_origin_stationary: fixed(&|j, t| torus_flow_hat(&zero, j, t, p)),
        reduced_actions_at_vertex: (1..=n).map(|j| reduced_actions_hat(&vl, j)).collect(),
        hat_h1_at_vertex: reduced_actions_m(&vh, 1)?,
        vertex_lambda: vl,
        vertex_hat: vh,
    })
}

/// Result of the random minimality test of both `j = 1` reduced Hamiltonians.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct MinimalityReport {
    /// Number of random points tested per side.
    pub samples: usize,
    /// Points on `M` where `Σ cosh 2λ` does not exceed its vertex value.
    pub m_failures: usize,
    /// Points on `M̂` where `Σ P_1(e^{λ̂})` does not exceed its vertex value.
    pub hat_failures: usize,
    /// Smallest excess over the vertex value seen on `M`.
    pub m_min_excess: f64,
    /// Smallest excess over the vertex value seen on `M̂`.
    pub hat_min_excess: f64,
}

/// Sample nonzero `ζ` and `Z` and compare the `j = 1` reduced Hamiltonians
/// with their values at the origin.
pub fn minimality_check(p: &Params, samples: usize, seed: u64) -> Result<MinimalityReport> {
    p.require_section()?;
    let mut r = rng(seed);
    let m0 = reduced_actions_hat(&vertex_lambda(p), 1);
    let h0 = reduced_actions_m(&vertex_hat(p), 1)?;
    let mut rep =
        MinimalityReport { samples, m_failures: 0, hat_failures: 0, m_min_excess: f64::INFINITY, hat_min_excess: f64::INFINITY };
    for _ in 0..samples {
        let z = zeta(&mut r, p.n, 0.5);
        let em = reduced_actions_hat(&lambda_from_zeta(&z, p), 1) - m0;
        let zh = zeta(&mut r, p.n, 0.5);
        let eh = reduced_actions_m(&hat_lambda_from_z(&zh, p), 1)? - h0;
        rep.m_min_excess = rep.m_min_excess.min(em);
        rep.hat_min_excess = rep.hat_min_excess.min(eh);
        rep.m_failures += usize::from(em <= 0.0);
        rep.hat_failures += usize::from(eh <= 0.0);
    }
    Ok(rep)
}

/// `max |JᵀΩ'J − Ω|` for the chart map `(λ, θ) ↦ ζ`, where `Ω` represents
/// `Σ dθ ∧ dλ` and `Ω'` represents `2 Σ dx ∧ dy` (`ζ = x + iy`).
pub fn chart_symplectic_defect(lambda: &[f64], theta: &[f64], p: &Params) -> Result<f64> {
    let n = p.n;
    let map = |z: &[f64]| -> Result<Vec<f64>> {
        let zeta = zeta_from_darboux(&z[..n], &z[n..], p)?;
        Ok(zeta.iter().map(|c| c.re).chain(zeta.iter().map(|c| c.im)).collect())
    };
    let z0: Vec<f64> = lambda.iter().chain(theta).copied().collect();
    let jac = jacobian(&map, &z0, 1e-5)?;
    Ok(form_defect(&jac, &omega(n, -1.0).scale(2.0), &omega(n, 1.0)))
}

/// `max |JᵀΩJ − Ω|` for the time-`t` flow map of `kind` on its chart.
pub fn flow_symplectic_defect(kind: FlowKind, pos: &[f64], ang: &[f64], t: f64, dt: f64, p: &Params) -> Result<f64> {
    let n = p.n;
    let map = |z: &[f64]| -> Result<Vec<f64>> {
        let tr = integrate_many_body(kind, (&z[..n], &z[n..]), t, dt, p)?;
        if tr.boundary_event.is_some() {
            return Err(Error::BoundaryPoint("flow left the chart".into()));
        }
        Ok(tr.positions.last().unwrap().iter().chain(tr.angles.last().unwrap()).copied().collect())
    };
    let z0: Vec<f64> = pos.iter().chain(ang).copied().collect();
    let jac = jacobian(&map, &z0, 1e-5)?;
    let om = omega(n, 1.0);
    Ok(form_defect(&jac, &om, &om))
}

/// `Ω` in coordinates `(q_1..q_n, p_1..p_n)` for the form `sign · Σ dp ∧ dq`.
fn omega(n: usize, sign: f64) -> nalgebra::DMatrix<f64> {
    let mut o = nalgebra::DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        o[(i, n + i)] = -sign;
        o[(n + i, i)] = sign;
    }
    o
}

fn form_defect(jac: &nalgebra::DMatrix<f64>, target: &nalgebra::DMatrix<f64>, source: &nalgebra::DMatrix<f64>) -> f64 {
    (jac.transpose() * target * jac - source).amax()
}

fn jacobian<F: Fn(&[f64]) -> Result<Vec<f64>>>(f: &F, z0: &[f64], h: f64) -> Result<nalgebra::DMatrix<f64>> {
    let m = z0.len();
    let mut jac = nalgebra::DMatrix::zeros(m, m);
    let central = |i: usize, h: f64| -> Result<Vec<f64>> {
        let mut a = z0.to_vec();
        let mut b = z0.to_vec();
        a[i] += h;
        b[i] -= h;
        let (fa, fb) = (f(&a)?, f(&b)?);
        Ok(fa.iter().zip(&fb).map(|(x, y)| (x - y) / (2.0 * h)).collect())
    };
    for i in 0..m {
        let (d1, d2) = (central(i, h)?, central(i, 0.5 * h)?);
        for r in 0..m {
            jac[(r, i)] = (4.0 * d2[r] - d1[r]) / 3.0;
        }
    }
    Ok(jac)
}
