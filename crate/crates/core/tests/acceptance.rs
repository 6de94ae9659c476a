//! Acceptance suite: eleven property-based criteria over n ∈ {1, 2, 3} at
//! the default parameters (μ = 0.5, u = −1, v = 0.3) plus small sweeps.
//!
//! Runs without the libtest harness so that every criterion prints exactly
//! one `PASS`/`FAIL` line even when the run succeeds; the process exits
//! non-zero if any criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use bcn_duality::algebra::{LiePairingBasis, C64};
use bcn_duality::flows::*;
use bcn_duality::hamiltonians::*;
use bcn_duality::model::*;
use bcn_duality::poisson::*;
use bcn_duality::reconstruct::*;
use bcn_duality::sampling::*;
use bcn_duality::triples::*;
use bcn_duality::{Params, Result};
use rand::Rng;

const NS: [usize; 3] = [1, 2, 3];

fn params(n: usize) -> Params {
    Params::new(n, 0.5, -1.0, 0.3).unwrap()
}

/// Outcome of one criterion: pass flag and a one-line summary of the worst cases.
struct Outcome {
    pass: bool,
    detail: String,
}

/// Accumulates named maxima and their thresholds.
#[derive(Default)]
struct Ledger {
    items: Vec<(String, f64, f64, bool)>,
    notes: Vec<String>,
}

impl Ledger {
    /// Record `value < tol`.
    fn below(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.items.push((name.into(), value, tol, value < tol));
    }
    /// Record a boolean check, printed as its count of failures.
    fn count(&mut self, name: impl Into<String>, failures: usize) {
        self.items.push((name.into(), failures as f64, 1.0, failures == 0));
    }
    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
    fn finish(self) -> Outcome {
        let pass = self.items.iter().all(|i| i.3);
        let mut parts: Vec<String> = self
            .items
            .iter()
            .map(|(name, v, tol, ok)| {
                let mark = if *ok { "" } else { " <-- FAIL" };
                if *tol == 1.0 && v.fract() == 0.0 {
                    format!("{name} failures={v}{mark}")
                } else {
                    format!("{name}={v:.2e} (<{tol:.0e}){mark}")
                }
            })
            .collect();
        parts.extend(self.notes);
        Outcome { pass, detail: parts.join("; ") }
    }
}

fn run(f: impl FnOnce(&mut Ledger) -> Result<()>) -> Outcome {
    let mut l = Ledger::default();
    match f(&mut l) {
        Ok(()) => l.finish(),
        Err(e) => {
            let mut o = l.finish();
            o.pass = false;
            o.detail = format!("error: {e}; {}", o.detail);
            o
        }
    }
}

fn sample_zeta(r: &mut Rng64, n: usize, i: usize, boundary_every: usize) -> Vec<C64> {
    if i % boundary_every == boundary_every - 1 {
        boundary_zeta(r, n, 0.6)
    } else {
        zeta(r, n, 0.6)
    }
}

// 1 ─ explicit constraint solutions are admissible
fn c1_constraint_solutions() -> Outcome {
    run(|l| {
        for n in NS {
            let p = params(n);
            let mut r = rng(100 + n as u64);
            let mut worst = [0.0f64; 6];
            for i in 0..500 {
                let mut lam = lambda_interior(&mut r, &p, 0.0, 1.0);
                if i % 10 == 9 {
                    // a point of the closure: put one constraint on its bound
                    let k = r.random_range(0..n);
                    let shift = if k + 1 < n { lam[k] - lam[k + 1] - p.mu } else { lam[n - 1] - p.floor() };
                    for x in lam.iter_mut().take(k + 1) {
                        *x -= shift;
                    }
                }
                let xi = angles(&mut r, 2 * n);
                let rep = verify_admissible(&build_triple(&lam, &xi, &p)?, &p);
                let v = [rep.constraint, rep.unitarity, rep.hermiticity, rep.trace, rep.eigen, rep.norm];
                for (w, x) in worst.iter_mut().zip(v) {
                    *w = w.max(x);
                }
            }
            l.below(format!("n={n} max residual"), worst.iter().copied().fold(0.0, f64::max), 1e-10);
        }
        Ok(())
    })
}

// 2 ─ the positivity region of ℱ is exactly the explicit domain
fn c2_domain() -> Outcome {
    run(|l| {
        for n in NS {
            let p = params(n);
            let mut r = rng(200 + n as u64);
            let mut bad_inside = 0;
            for _ in 0..1000 {
                let lam = lambda_interior(&mut r, &p, 1e-6, 1.5);
                if calf(&lam, &p)?.iter().any(|&f| f <= 0.0) {
                    bad_inside += 1;
                }
            }
            l.count(format!("n={n} inside"), bad_inside);
            // descending positive λ outside closure(𝒟₊), about half of them
            // with λ_n below |u|
            let (mut bad_outside, mut below_u, mut drawn) = (0, 0, 0);
            while drawn < 1000 {
                let mut lam = vec![0.0; n];
                lam[n - 1] = uniform(&mut r, 0.01, 2.0 * p.floor());
                for j in (0..n - 1).rev() {
                    lam[j] = lam[j + 1] + uniform(&mut r, 0.01, 2.0 * p.mu);
                }
                if in_d_closure(&lam, &p) {
                    continue;
                }
                let Ok(f) = calf_unrestricted(&lam, &p) else { continue };
                drawn += 1;
                below_u += usize::from(lam[n - 1] < p.u.abs());
                if f.iter().all(|&x| x > 0.0) {
                    bad_outside += 1;
                }
            }
            l.count(format!("n={n} outside ({below_u} with λ_n<|u|)"), bad_outside);
            let mut worst: f64 = 0.0;
            let mut outside = 0;
            for i in 0..200 {
                let z = sample_zeta(&mut r, n, i, 5);
                let (_, gp) = group_point_from_zeta(&z, &p)?;
                let lam = eigen_lambda(&gp, &p);
                if !in_d_closure_eps(&lam, &p, 1e-10) {
                    outside += 1;
                }
                let exact = lambda_from_zeta(&z, &p);
                worst = lam.iter().zip(&exact).fold(worst, |m, (a, b)| m.max((a - b).abs()));
            }
            l.count(format!("n={n} reconstructed outside closure"), outside);
            l.note(format!("n={n} |ℒ(g) − λ(ζ)|={worst:.1e}"));
        }
        Ok(())
    })
}

// 3 ─ ζ → triple → g → triple → ζ
fn c3_round_trip() -> Outcome {
    run(|l| {
        for n in NS {
            let p = params(n);
            let mut r = rng(300 + n as u64);
            let (mut worst, mut worst_abs) = (0.0f64, 0.0f64);
            for i in 0..200 {
                let z = sample_zeta(&mut r, n, i, 10);
                let (_, gp) = group_point_from_zeta(&z, &p)?;
                let back = zeta_from_triple(&triple_from_m0(&gp, &p)?, &p)?;
                let scale = z.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt().max(1.0);
                for (a, b) in z.iter().zip(&back) {
                    worst = worst.max((a - b).norm() / scale);
                    worst_abs = worst_abs.max((a - b).norm());
                }
            }
            l.below(format!("n={n} |Δζ|/max(1,|ζ|)"), worst, 1e-8);
            l.note(format!("n={n} abs={worst_abs:.1e}"));
        }
        Ok(())
    })
}

// 4 ─ both families of duality trace identities
fn c4_trace_identities() -> Outcome {
    run(|l| {
        for n in NS {
            let p = params(n);
            let mut r = rng(400 + n as u64);
            let (mut bb, mut kik) = (0.0f64, 0.0f64);
            for i in 0..200 {
                let z = sample_zeta(&mut r, n, i, 10);
                let (_, gp) = group_point_from_zeta(&z, &p)?;
                let lam = lambda_from_zeta(&z, &p);
                let hat = hat_actions(&gp, &p)?;
                for j in 1..=n {
                    let f = reduced_actions_hat(&lam, j);
                    bb = bb.max((half_trace_bb(&gp, j as u32) - f).abs() / f.abs());
                    let g = reduced_actions_m(&hat.hat_lambda, j)?;
                    kik = kik.max((half_trace_kik(&gp, j as u32) - g).abs());
                }
            }
            l.below(format!("n={n} bb (rel)"), bb, 1e-9);
            l.below(format!("n={n} k†IkI"), kik, 1e-9);
        }
        Ok(())
    })
}

// 5 ─ H = ½ tr(k†IkI) on reconstructed points
fn c5_hamiltonian_reduction() -> Outcome {
    run(|l| {
        for n in NS {
            let p = params(n);
            let mut r = rng(500 + n as u64);
            let (mut worst, mut signed) = (0.0f64, 0.0f64);
            for _ in 0..200 {
                let lam = lambda_interior(&mut r, &p, 0.05, 1.0);
                let th = angles(&mut r, n);
                let (_, gp) = group_point_from_zeta(&zeta_from_darboux(&lam, &th, &p)?, &p)?;
                let d = h_main(&lam, &th, &p)? - half_trace_kik(&gp, 1);
                worst = worst.max(d.abs());
                signed += d / 200.0;
            }
            l.below(format!("n={n}"), worst, 1e-8);
            l.note(format!("n={n} mean offset={signed:.1e}"));
        }
        Ok(())
    })
}

// 6 ─ Poisson commutativity and gauge invariance
fn c6_poisson() -> Outcome {
    run(|l| {
        let fd = FdConfig::default();
        for n in [2, 3] {
            let basis = LiePairingBasis::new(n);
            let mut r = rng(600 + n as u64);
            let (mut bk, mut bh, mut bm) = (0.0f64, 0.0f64, 0.0f64);
            let mut control = f64::INFINITY;
            for _ in 0..100 {
                let k = random_su(&mut r, 2 * n);
                let g = sl_near_identity(&mut r, n, 0.4);
                for i in 1..=n as u32 {
                    for j in i + 1..=n as u32 {
                        bk = bk.max(bracket_k(&|k: &_| h_k(i, k), &|k: &_| h_k(j, k), &k, &basis, fd).abs());
                        let b = bracket_heisenberg(&|g: &_| cal_h_hat(i, g), &|g: &_| cal_h_hat(j, g), &g, &basis, fd);
                        bh = bh.max(b.abs());
                    }
                }
                let b = bracket_heisenberg(&|g: &_| cal_h(1, g), &|g: &_| cal_h(2, g), &g, &basis, fd);
                bm = bm.max(b.abs());
                // sensitivity: a non-invariant entry does not commute with h_1
                let c = bracket_k(&|k: &bcn_duality::algebra::CMatrix| k[(0, 0)].re, &|k: &_| h_k(1, k), &k, &basis, fd);
                control = control.min(c.abs().max(1e-300));
            }
            l.below(format!("n={n} {{h_i,h_j}}_K"), bk, 1e-5);
            l.below(format!("n={n} {{Ĥ_i,Ĥ_j}}"), bh, 1e-5);
            l.below(format!("n={n} {{ℋ_1,ℋ_2}}"), bm, 1e-5);
            l.note(format!("n={n} control min|{{Re k11,h_1}}|={control:.1e}"));
        }
        for n in NS {
            let p = params(n);
            let mut r = rng(650 + n as u64);
            let mut worst: f64 = 0.0;
            for i in 0..20 {
                let (_, gp) = group_point_from_zeta(&sample_zeta(&mut r, n, i, 5), &p)?;
                for j in 1..=n as u32 {
                    worst = worst.max(gauge_invariance_defect(&|g: &_| cal_h(j, g), &gp.g, &p, fd));
                    worst = worst.max(gauge_invariance_defect(&|g: &_| cal_h_hat(j, g), &gp.g, &p, fd));
                }
            }
            l.below(format!("n={n} gauge"), worst, 1e-6);
        }
        Ok(())
    })
}

// 7 ─ the chart is Darboux and the integrated flow map is symplectic
fn c7_symplectic() -> Outcome {
    run(|l| {
        for n in NS {
            let p = params(n);
            let mut r = rng(700 + n as u64);
            let mut chart: f64 = 0.0;
            for _ in 0..200 {
                let lam = lambda_interior(&mut r, &p, 0.05, 1.0);
                chart = chart.max(chart_symplectic_defect(&lam, &angles(&mut r, n), &p)?);
            }
            l.below(format!("n={n} chart"), chart, 1e-8);
            let mut flow: f64 = 0.0;
            for kind in [FlowKind::H, FlowKind::ActionM(1)] {
                let lam = lambda_interior(&mut r, &p, 0.2, 0.8);
                flow = flow.max(flow_symplectic_defect(kind, &lam, &angles(&mut r, n), 1.0, 1e-2, &p)?);
            }
            l.below(format!("n={n} time-1 map"), flow, 1e-5);
        }
        Ok(())
    })
}

// 8 ─ dynamics
fn c8_dynamics() -> Outcome {
    run(|l| {
        for n in NS {
            let p = params(n);
            let mut r = rng(800 + n as u64);
            let (mut drift, mut osc, mut act) = (0.0f64, 0.0f64, 0.0f64);
            for _ in 0..3 {
                let lam = lambda_interior(&mut r, &p, 0.2, 0.8);
                let tr = integrate_many_body(FlowKind::H, (&lam, &angles(&mut r, n)), 5.0, 1e-3, &p)?;
                let s = tr.summary();
                drift = drift.max(s.energy_drift_per_time.abs());
                osc = osc.max(s.energy_max_rel_dev);
                act = act.max(s.action_drift);
            }
            l.below(format!("n={n} H energy drift/t"), drift, 1e-8);
            l.below(format!("n={n} λ̂ drift"), act, 1e-6);
            l.note(format!("n={n} max |ΔE|/E={osc:.1e}"));
        }
        // the dual flow, started near its vertex
        for n in [1, 2] {
            let p = params(n);
            let mut r = rng(850 + n as u64);
            let mut drift: f64 = 0.0;
            for _ in 0..2 {
                let hat = hat_interior(&mut r, &p, 0.2, 0.6);
                let tr = integrate_many_body(FlowKind::Hhat, (&hat, &angles(&mut r, n)), 1.0, 1e-3, &p)?;
                drift = drift.max(tr.summary().energy_drift_per_time.abs());
            }
            l.below(format!("n={n} Ĥ energy drift/t"), drift, 1e-8);
        }
        // dual actions over the whole chart lifetime of a trajectory that exits
        let mut events = 0;
        let (mut bracket, mut act_life) = (0.0f64, 0.0f64);
        for n in NS {
            let p = params(n);
            let mut lam = lambda_interior(&mut rng(870 + n as u64), &p, 0.3, 0.6);
            lam[n - 1] = p.floor() + 1e-7;
            let mut th = vec![0.3; n];
            th[n - 1] = -FRAC_PI_2;
            let tr = integrate_many_body(FlowKind::H, (&lam, &th), 1.0, 1e-3, &p)?;
            if let Some(ev) = tr.boundary_event {
                events += 1;
                bracket = bracket.max(ev.time_bracket);
            }
            act_life = act_life.max(tr.summary().action_drift);
        }
        l.count("boundary events missed", 3 - events);
        l.below("event time bracket", bracket, 1e-10 * (1.0 + 1e-9));
        l.below("λ̂ drift to the boundary", act_life, 1e-6);
        // integrator against the exact torus flows on t ∈ [0, 1]
        let mut cross: f64 = 0.0;
        for n in NS {
            let p = params(n);
            let mut r = rng(880 + n as u64);
            for j in 1..=n {
                // Ω_j grows like sinh(2jλ_1); beyond j = 2 at n = 3 the phases
                // reached by t = 1 exceed what a double can resolve
                if j <= 2 {
                    let z = zeta(&mut r, n, 0.4);
                    let (lam, th) = darboux_from_zeta(&z, &p)?;
                    let tr = integrate_many_body(FlowKind::ActionM(j), (&lam, &th), 1.0, 1e-3, &p)?;
                    for (k, &t) in tr.times.iter().enumerate().step_by(50) {
                        let zi = zeta_from_darboux(&tr.positions[k], &tr.angles[k], &p)?;
                        let ze = torus_flow_m(&z, j, t, &p);
                        cross = zi.iter().zip(&ze).fold(cross, |m, (a, b)| m.max((a - b).norm()));
                    }
                }
                let hat = hat_interior(&mut r, &p, 0.1, 0.8);
                let th = angles(&mut r, n);
                let z0 = z_from_hat(&hat, &th, &p)?;
                let tr = integrate_many_body(FlowKind::ActionHat(j), (&hat, &th), 1.0, 1e-3, &p)?;
                for (k, &t) in tr.times.iter().enumerate().step_by(50) {
                    let zi = z_from_hat(&tr.positions[k], &tr.angles[k], &p)?;
                    let ze = torus_flow_hat(&z0, j, t, &p);
                    cross = zi.iter().zip(&ze).fold(cross, |m, (a, b)| m.max((a - b).norm()));
                }
            }
        }
        l.below("integrator vs torus flow", cross, 1e-6);
        Ok(())
    })
}

// 9 ─ the origins are stationary minima
fn c9_equilibrium() -> Outcome {
    run(|l| {
        for n in NS {
            let p = params(n);
            let e = equilibrium_scan(&p)?;
            l.count(format!("n={n} stationary"), usize::from(!e.zeta_origin_stationary) + usize::from(!e.z_origin_stationary));
            let m = minimality_check(&p, 500, 900 + n as u64)?;
            l.count(format!("n={n} minimality"), m.m_failures + m.hat_failures);
        }
        Ok(())
    })
}

// 10 ─ van Diejen identities and the scaling limit
fn c10_van_diejen() -> Outcome {
    run(|l| {
        let (mut kin, mut pot, mut res) = (0.0f64, 0.0f64, 0.0f64);
        let mut r = rng(1000);
        for i in 0..200 {
            let n = NS[i % 3];
            let vd = vd_params(&mut r);
            let q = Params::new(n, vd.mu, -1.0, 0.3)?;
            let lam = lambda_interior(&mut r, &q, 0.05, 0.8);
            for j in 0..n {
                let a = kinetic_direct(&lam, j, &vd);
                kin = kin.max((a - kinetic_factored(&lam, j, &vd)).abs() / a.abs().max(1.0));
            }
            let d = potential_direct(&lam, &vd);
            pot = pot.max((d - potential_closed(&lam, &vd)).abs() / d.abs().max(1.0));
            let rep = residue_sum(&vd, &big_lambda(&lam))?;
            res = res.max(rep.sum.abs() / rep.scale);
        }
        l.below("kinetic", kin, 1e-12);
        l.below("potential", pot, 1e-10);
        l.below("residue sum (rel)", res, 1e-10);
        let (mut lim, mut nonmono, mut r2) = (0.0f64, 0, f64::INFINITY);
        for n in NS {
            let p = params(n);
            let mut r = rng(1010 + n as u64);
            for _ in 0..5 {
                let lam = lambda_interior(&mut r, &p, 0.2, 0.8);
                let th = angles(&mut r, n);
                let errs: Vec<f64> = [10.0, 12.0, 14.0, 16.0, 20.0]
                    .iter()
                    .map(|&c| vd_limit_error(&lam, &th, &p, -c, c).map(|e| e.1))
                    .collect::<Result<_>>()?;
                lim = lim.max(errs[4]);
                nonmono += errs.windows(2).filter(|w| w[1] >= w[0]).count();
                let fit = vd_limit_fit(&lam, &th, &p, &[(-8.0, 8.0), (-12.0, 12.0), (-16.0, 16.0)])?;
                r2 = r2.min(fit.r2);
            }
        }
        l.below("limit rel error at (−20,20)", lim, 1e-6);
        l.count("non-monotone steps", nonmono);
        l.below("1 − R²", 1.0 - r2, 0.01);
        Ok(())
    })
}

// 11 ─ continuity of Q across the removable singularities
//
// Along λ(ε) = λ* + ε·d with λ* on a facet, the entries of Q carrying an
// apparent pole, Q_{j+1,n+j} and Q_{n+j,j+1} for the gap λ_j − λ_{j+1} = μ
// (Q_{2n,2n} for λ_n = μ/2), are analytic in ε; their successive increments
// along ε_k = 1e−6·2^{−k} are measured over the tail ε_k ≤ 1e−9, together
// with the distance of the term at ε ≈ 1e−12 from the value on the facet.
// Entries containing a single vanishing w̃ factor behave like √ε there: they
// are continuous but their increments only fall as √ε, so they are reported
// separately.
fn c11_continuity() -> Outcome {
    type Entries = Vec<(usize, usize)>;
    fn increments(p: &Params, base: &[f64], dir: &[f64], xi: &[f64], entries: &Entries) -> Result<(f64, f64, f64)> {
        let q_at = |eps: f64| -> Result<bcn_duality::algebra::CMatrix> {
            let lam: Vec<f64> = base.iter().zip(dir).map(|(b, d)| b + eps * d).collect();
            Ok(build_triple(&lam, xi, p)?.q)
        };
        let qs: Vec<_> = (0..40).map(|k| q_at(1e-6 * 0.5f64.powi(k))).collect::<Result<_>>()?;
        let on_facet = q_at(0.0)?;
        let gap = |a: &bcn_duality::algebra::CMatrix, b: &bcn_duality::algebra::CMatrix| {
            entries.iter().fold(0.0f64, |m, &(i, j)| m.max((a[(i, j)] - b[(i, j)]).norm()))
        };
        let whole = |a: &bcn_duality::algebra::CMatrix, b: &bcn_duality::algebra::CMatrix| {
            (a - b).iter().fold(0.0f64, |m, z| m.max(z.norm()))
        };
        let tail = qs[10..].windows(2).fold(0.0f64, |m, w| m.max(gap(&w[0], &w[1])));
        let whole_tail = qs[10..].windows(2).fold(0.0f64, |m, w| m.max(whole(&w[0], &w[1])));
        // ε_20 ≈ 1e−12 is still resolved in λ; deeper terms round onto the facet
        Ok((tail, gap(&qs[20], &on_facet), whole_tail))
    }
    run(|l| {
        let mut sqrt_like: f64 = 0.0;
        for n in [2, 3] {
            let p = params(n);
            let mut r = rng(1100 + n as u64);
            for g in 0..n - 1 {
                let mut lam = lambda_interior(&mut r, &p, 0.2, 0.8);
                let shift = lam[g] - lam[g + 1] - p.mu;
                for x in lam.iter_mut().take(g + 1) {
                    *x -= shift;
                }
                let mut dir = vec![0.0; n];
                dir.iter_mut().take(g + 1).for_each(|d| *d = 1.0);
                let xi = angles(&mut r, 2 * n);
                // 1-based gap j = g + 1: entries (j+1, n+j) and (n+j, j+1)
                let entries = vec![(g + 1, n + g), (n + g, g + 1)];
                let (tail, limit, whole) = increments(&p, &lam, &dir, &xi, &entries)?;
                l.below(format!("n={n} gap {} increments", g + 1), tail, 1e-8);
                l.below(format!("n={n} gap {} vs facet value", g + 1), limit, 1e-8);
                sqrt_like = sqrt_like.max(whole);
            }
        }
        // λ_n = μ/2 lies in the domain only when max(|u|,|v|) < μ/2
        for n in [1, 2] {
            let p = Params::new(n, 3.0, -1.0, 0.3)?;
            let mut r = rng(1150 + n as u64);
            let mut lam = lambda_interior(&mut r, &p, 0.2, 0.8);
            let shift = lam[n - 1] - 0.5 * p.mu;
            lam.iter_mut().for_each(|x| *x -= shift);
            let xi = angles(&mut r, 2 * n);
            let entries = vec![(2 * n - 1, 2 * n - 1)];
            let up = vec![1.0; n];
            let down = vec![-1.0; n];
            let (above, la, wa) = increments(&p, &lam, &up, &xi, &entries)?;
            let (below, lb, wb) = increments(&p, &lam, &down, &xi, &entries)?;
            l.below(format!("n={n} λ_n→μ/2 increments"), above.max(below), 1e-8);
            l.below(format!("n={n} λ_n→μ/2 vs value"), la.max(lb), 1e-8);
            l.below(format!("n={n} λ_n→μ/2 all entries"), wa.max(wb), 1e-8);
        }
        l.note(format!("√ε-type entries at gap facets: tail increments {sqrt_like:.1e}"));
        Ok(())
    })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("constraint solutions admissible", c1_constraint_solutions),
        ("domain of positivity", c2_domain),
        ("round-trip bijection", c3_round_trip),
        ("duality trace identities", c4_trace_identities),
        ("Hamiltonian reduction", c5_hamiltonian_reduction),
        ("Poisson commutativity", c6_poisson),
        ("symplectic chart and flow", c7_symplectic),
        ("dynamics", c8_dynamics),
        ("equilibrium and minimum", c9_equilibrium),
        ("van Diejen identities and limit", c10_van_diejen),
        ("continuity at removable singularities", c11_continuity),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let start = Instant::now();
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .filter(|(i, (name, _))| {
                filter.is_empty() || filter.iter().any(|f| name.contains(f.as_str()) || f == &(i + 1).to_string())
            })
            .map(|(i, &(name, f))| {
                (i + 1, name, s.spawn(move || {
                    let t = Instant::now();
                    let o = std::panic::catch_unwind(f).unwrap_or_else(|_| Outcome { pass: false, detail: "panicked".into() });
                    (o, t.elapsed())
                }))
            })
            .collect();
        handles.into_iter().map(|(i, name, h)| (i, name, h.join().unwrap())).collect()
    });
    let mut failed = 0;
    for (i, name, (o, dt)) in &results {
        failed += usize::from(!o.pass);
        println!(
            "criterion {i:>2} {} {name} [{:.1}s]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
