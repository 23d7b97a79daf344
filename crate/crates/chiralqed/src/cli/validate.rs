//! Self-checks runnable from the CLI: every claim the library is built
//! around, re-verified numerically with measured deviations. The acceptance
//! test suite calls the same functions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::dynamics::{
    assemble_liouvillian, default_time_grid, evolve, solve_steady, DensityMatrix,
};
use crate::hilbert::c;
use crate::model::{validate_energy_conservation, Drive, Emitter, EmitterChain};
use crate::observables::{
    collective_populations, compute_stats, field_moments, output_operator_reflected, OutputStats,
};
use crate::oracles::{
    classical_two_atom_transmission, critical_power, single_atom_amplitudes, single_atom_g2_transmitted,
    single_atom_powers, transparency_elements, SingleAtomParams,
};
use crate::tcmt::{scattering_matrix, ClassicalSystem};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn from_deviation(name: &'static str, dev: f64, tol: f64) -> Self {
        CheckResult {
            name,
            passed: dev < tol,
            detail: format!("max deviation {dev:.3e} (tolerance {tol:.0e})"),
        }
    }
}

pub fn run_all_checks() -> Vec<CheckResult> {
    vec![
        check_energy_conservation(),
        check_single_atom_oracles(),
        check_reflection_antibunching(),
        check_two_atom_transparency(),
        check_reflected_photon_statistics(),
        check_quantum_critical_coupling(),
        check_nonreciprocal_transmission(),
        check_classical_reciprocity(),
        check_incoherent_periodicity(),
        check_solver_cross_validation(),
        check_quantum_classical_correspondence(),
        check_weak_drive_coherence(),
        check_lossless_energy_balance(),
    ]
}

fn steady_stats(chain: &EmitterChain, drive: &Drive) -> crate::Result<(OutputStats, DensityMatrix)> {
    let liouvillian = assemble_liouvillian(chain, drive);
    let solution = solve_steady(&liouvillian)?;
    let stats = compute_stats(chain, drive, &solution.rho)?;
    Ok((stats, solution.rho))
}

fn random_chain(rng: &mut ChaCha8Rng, n: usize) -> EmitterChain {
    let emitters = (0..n)
        .map(|i| Emitter {
            delta: rng.gen_range(-2.0..2.0),
            gamma: rng.gen_range(0.0..0.5),
            k1: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            k2: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            phi: if i == 0 { 0.0 } else { rng.gen_range(0.0..2.0 * PI) },
        })
        .collect();
    EmitterChain::new(emitters).unwrap()
}

/// Random chain whose couplings stay O(1), so all decay rates are moderate
/// and perturbative tolerances are meaningful.
fn bounded_random_chain(rng: &mut ChaCha8Rng, n: usize, gamma_range: (f64, f64)) -> EmitterChain {
    let coupling =
        |rng: &mut ChaCha8Rng| Complex64::from_polar(rng.gen_range(0.5..1.0), rng.gen_range(0.0..2.0 * PI));
    let emitters = (0..n)
        .map(|i| Emitter {
            delta: rng.gen_range(-2.0..2.0),
            gamma: if gamma_range.1 > gamma_range.0 {
                rng.gen_range(gamma_range.0..gamma_range.1)
            } else {
                gamma_range.0
            },
            k1: coupling(rng),
            k2: coupling(rng),
            phi: if i == 0 { 0.0 } else { rng.gen_range(0.0..2.0 * PI) },
        })
        .collect();
    EmitterChain::new(emitters).unwrap()
}

fn mirror_pair(delta: f64, gamma: f64, k1_sq: f64, k2_sq: f64, phi: f64) -> EmitterChain {
    let k1 = c(k1_sq.sqrt(), 0.0);
    let k2 = c(k2_sq.sqrt(), 0.0);
    EmitterChain::new(vec![
        Emitter { delta, gamma, k1, k2, phi: 0.0 },
        Emitter { delta: -delta, gamma, k1, k2, phi },
    ])
    .unwrap()
}

fn crossed_pair(gamma: f64) -> EmitterChain {
    let ka = c(1.6f64.sqrt(), 0.0);
    let kb = c(0.4f64.sqrt(), 0.0);
    EmitterChain::new(vec![
        Emitter { delta: 0.0, gamma, k1: ka, k2: kb, phi: 0.0 },
        Emitter { delta: 1.0, gamma, k1: kb, k2: ka, phi: PI },
    ])
    .unwrap()
}

/// Unconditional relation between the coupling matrix and the decay matrix,
/// over random chains of up to four emitters.
pub fn check_energy_conservation() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let chain = random_chain(&mut rng, n);
        worst = worst.max(validate_energy_conservation(&chain));
    }
    CheckResult::from_deviation("energy-conservation", worst, 1e-12)
}

fn single_atom_grid() -> Vec<SingleAtomParams> {
    let mut grid = Vec::new();
    for k in -6..=6 {
        for gamma in [0.0, 0.05, 0.5] {
            for p in [1e-3f64, 0.1, 1.0, 10.0] {
                grid.push(SingleAtomParams {
                    delta: k as f64 * 0.5,
                    gamma,
                    k1: c(1.4f64.sqrt(), 0.0),
                    k2: c(0.6f64.sqrt(), 0.0),
                    alpha: c(p.sqrt(), 0.0),
                });
            }
        }
    }
    grid
}

fn single_atom_chain(p: &SingleAtomParams) -> (EmitterChain, Drive) {
    let chain = EmitterChain::new(vec![Emitter {
        delta: p.delta,
        gamma: p.gamma,
        k1: p.k1,
        k2: p.k2,
        phi: 0.0,
    }])
    .unwrap();
    (chain, Drive::forward_only(p.alpha))
}

/// Full numeric pipeline against the single-atom closed forms for every
/// amplitude, power and correlation observable.
pub fn check_single_atom_oracles() -> CheckResult {
    let mut worst = 0.0f64;
    for params in single_atom_grid() {
        let (chain, drive) = single_atom_chain(&params);
        let stats = match steady_stats(&chain, &drive) {
            Ok((s, _)) => s,
            Err(e) => {
                return CheckResult {
                    name: "single-atom-oracles",
                    passed: false,
                    detail: format!("solve failed at delta={} p={}: {e}", params.delta, params.power()),
                }
            }
        };
        let (t, r) = single_atom_amplitudes(&params);
        let (big_t, big_r, incoherent, leak) = single_atom_powers(&params);
        let g2 = single_atom_g2_transmitted(&params).unwrap();
        for dev in [
            (stats.t - t).norm(),
            (stats.r - r).norm(),
            (stats.big_t - big_t).abs(),
            (stats.big_r - big_r).abs(),
            ((stats.big_t - stats.t.norm_sqr()) - incoherent).abs(),
            (stats.leakage - leak).abs(),
            (stats.g2_t.unwrap() - g2).abs(),
        ] {
            worst = worst.max(dev);
        }
    }
    CheckResult::from_deviation("single-atom-oracles", worst, 1e-8)
}

/// A single atom can never hold two excitations, so the two-photon moment of
/// its purely atomic reflected field vanishes identically.
pub fn check_reflection_antibunching() -> CheckResult {
    let mut worst = 0.0f64;
    for params in single_atom_grid() {
        let (chain, drive) = single_atom_chain(&params);
        let liouvillian = assemble_liouvillian(&chain, &drive);
        let rho = solve_steady(&liouvillian).unwrap().rho;
        let reflected = output_operator_reflected(&chain, &drive);
        let (_, _, two_photon) = field_moments(&rho, &reflected).unwrap();
        worst = worst.max(two_photon.abs());
    }
    CheckResult::from_deviation("reflection-antibunching", worst, 1e-12)
}

/// Two mirrored atoms at a phase of a multiple of pi transmit perfectly at
/// any power, stay pure, and hold the predicted collective-state elements.
pub fn check_two_atom_transparency() -> CheckResult {
    let k1 = c(1.2f64.sqrt(), 0.0);
    let k2 = c(0.8f64.sqrt(), 0.0);
    let mut worst = 0.0f64;
    for (phi, t_sign) in [(PI, -1.0), (2.0 * PI, 1.0)] {
        for p in [0.1f64, 1.0, 10.0] {
            let alpha = c(p.sqrt(), 0.0);
            let chain = mirror_pair(1.0, 0.0, 1.2, 0.8, phi);
            let (stats, rho) = steady_stats(&chain, &Drive::forward_only(alpha)).unwrap();
            let pops = collective_populations(&rho).unwrap();
            let (pop, coh) = transparency_elements(1.0, k1, k2, alpha);
            // Transmitted mean carries only the propagation phase e^{i phi}.
            let (bright_pop, bright_coh, dark_pop, dark_coh) = if t_sign < 0.0 {
                (pops.p_s, pops.rho_sg, pops.p_a, pops.rho_ag)
            } else {
                (pops.p_a, pops.rho_ag, pops.p_s, pops.rho_sg)
            };
            for dev in [
                (stats.big_t - 1.0).abs(),
                stats.big_r,
                1.0 - stats.purity,
                (stats.t - c(t_sign, 0.0)).norm(),
                (bright_pop - pop).abs(),
                (bright_coh - coh).norm(),
                dark_pop,
                dark_coh.norm(),
                pops.p_e,
            ] {
                worst = worst.max(dev);
            }
        }
    }
    CheckResult::from_deviation("two-atom-transparency", worst, 1e-8)
}

/// Low-power reflected-field statistics of the strongly chiral pair, against
/// the quoted working point and the symmetric-coupling floor of 1/4.
pub fn check_reflected_photon_statistics() -> CheckResult {
    let alpha = c(1e-3f64.sqrt(), 0.0);
    let chain = mirror_pair(0.5, 0.0, 1.6, 0.4, PI / 2.0);
    let (stats, _) = steady_stats(&chain, &Drive::forward_only(alpha)).unwrap();
    let g2_dev = (stats.g2_r.unwrap() - 0.0914).abs();
    let r_dev = (stats.big_r - 0.896).abs();

    let symmetric = EmitterChain::new(vec![
        Emitter { delta: 50.0, gamma: 0.0, k1: c(1.0, 0.0), k2: c(1.0, 0.0), phi: 0.0 },
        Emitter { delta: -50.0, gamma: 0.0, k1: c(1.0, 0.0), k2: c(1.0, 0.0), phi: PI / 2.0 },
    ])
    .unwrap();
    let (sym_stats, _) = steady_stats(&symmetric, &Drive::forward_only(alpha)).unwrap();
    let floor_dev = (sym_stats.g2_r.unwrap() - 0.25).abs();

    let passed = g2_dev < 0.005 && r_dev < 0.01 && floor_dev < 0.01;
    CheckResult {
        name: "reflected-photon-statistics",
        passed,
        detail: format!(
            "g2_R off by {g2_dev:.2e} (tol 5e-3), R off by {r_dev:.2e} (tol 1e-2), \
             symmetric floor off by {floor_dev:.2e} (tol 1e-2)"
        ),
    }
}

fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..70 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Coherent transmission of a lossy single atom vanishes at one input power;
/// checks the closed-form power, the numeric dip, and the statistics there.
pub fn check_quantum_critical_coupling() -> CheckResult {
    let params = |p: f64| SingleAtomParams {
        delta: 0.0,
        gamma: 0.05,
        k1: c(1.4f64.sqrt(), 0.0),
        k2: c(0.6f64.sqrt(), 0.0),
        alpha: c(p.sqrt(), 0.0),
    };
    let p_crit = critical_power(&params(1.0)).unwrap();
    let crit_dev = (p_crit - 0.13125).abs();

    let t2 = |p: f64| -> f64 {
        let (chain, drive) = single_atom_chain(&params(p));
        steady_stats(&chain, &drive).map_or(f64::INFINITY, |(s, _)| s.t.norm_sqr())
    };
    // Coarse log grid localizes the dip, golden-section sharpens it.
    let grid: Vec<f64> = (0..301).map(|i| 1e-3 * (1e4f64).powf(i as f64 / 300.0)).collect();
    let coarse = grid
        .iter()
        .map(|&p| (p, t2(p)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
        .0;
    let (p_min, t2_min) = golden_min(coarse * 0.8, coarse * 1.25, t2);

    let (chain, drive) = single_atom_chain(&params(0.13125));
    let (stats, _) = steady_stats(&chain, &drive).unwrap();
    let t_dev = (stats.big_t - 1.0 / 3.0).abs();
    let g2_oracle = single_atom_g2_transmitted(&params(0.13125)).unwrap();
    let g2_rel = (stats.g2_t.unwrap() - g2_oracle).abs() / g2_oracle;
    let g2_abs = (g2_oracle - 21.0).abs();

    let passed = crit_dev < 1e-12
        && (p_min - 0.131).abs() < 0.005
        && t2_min < 1e-10
        && t_dev < 1e-8
        && g2_rel < 1e-6
        && g2_abs < 1e-6;
    CheckResult {
        name: "quantum-critical-coupling",
        passed,
        detail: format!(
            "critical power off by {crit_dev:.1e}, numeric dip at {p_min:.4} (depth {t2_min:.1e}), \
             T off by {t_dev:.1e}, g2_T = {g2_oracle} (rel dev {g2_rel:.1e})"
        ),
    }
}

/// Crossed pair under forward vs backward drive: a deep forward transmission
/// dip near p = 0.2 that the backward direction does not share, and the dip
/// sliding to zero power when intrinsic damping balances the chirality.
pub fn check_nonreciprocal_transmission() -> CheckResult {
    let grid: Vec<f64> = (0..201).map(|i| 1e-3 * (1e4f64).powf(i as f64 / 200.0)).collect();
    let coherent = |gamma: f64, backward: bool| -> Vec<f64> {
        grid.iter()
            .map(|&p| {
                let amp = c(p.sqrt(), 0.0);
                let drive =
                    if backward { Drive::backward_only(amp) } else { Drive::forward_only(amp) };
                let (stats, _) = steady_stats(&crossed_pair(gamma), &drive).unwrap();
                stats.i_c_t / p
            })
            .collect()
    };
    let incoherent_at = |p: f64, backward: bool| -> f64 {
        let amp = c(p.sqrt(), 0.0);
        let drive = if backward { Drive::backward_only(amp) } else { Drive::forward_only(amp) };
        let (stats, _) = steady_stats(&crossed_pair(0.0), &drive).unwrap();
        stats.i_inc_t / p
    };

    let fwd = coherent(0.0, false);
    let bwd = coherent(0.0, true);
    let dip = (0..grid.len()).min_by(|&a, &b| fwd[a].total_cmp(&fwd[b])).unwrap();
    let p_dip = grid[dip];
    let ratio = fwd[dip] / bwd[dip];
    let inc_fwd = incoherent_at(p_dip, false);
    let inc_bwd = incoherent_at(p_dip, true);

    let critical = coherent(0.6, false);
    let crit_dip = (0..grid.len()).min_by(|&a, &b| critical[a].total_cmp(&critical[b])).unwrap();

    let passed =
        (p_dip - 0.2).abs() < 0.05 && ratio < 0.1 && inc_fwd > inc_bwd && crit_dip == 0;
    CheckResult {
        name: "nonreciprocal-transmission",
        passed,
        detail: format!(
            "forward dip at p = {p_dip:.3} (want 0.2±0.05), fwd/bwd coherent ratio {ratio:.3} \
             (tol 0.1), incoherent fwd {inc_fwd:.3} vs bwd {inc_bwd:.3}, damped dip at grid index {crit_dip}"
        ),
    }
}

/// The harmonic-resonator model transmits identically in both directions for
/// the mirrored coupling layout, and matches its closed form.
pub fn check_classical_reciprocity() -> CheckResult {
    let ka = c(1.6f64.sqrt(), 0.0);
    let kb = c(0.4f64.sqrt(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut recip_dev = 0.0f64;
    let mut form_dev = 0.0f64;
    for _ in 0..100 {
        let da = rng.gen_range(-3.0..3.0);
        let db = rng.gen_range(-3.0..3.0);
        let phi = rng.gen_range(0.0..2.0 * PI);
        let chain = EmitterChain::new(vec![
            Emitter { delta: da, gamma: 0.0, k1: ka, k2: kb, phi: 0.0 },
            Emitter { delta: db, gamma: 0.0, k1: kb, k2: ka, phi },
        ])
        .unwrap();
        let s = scattering_matrix(&ClassicalSystem::from_chain(&chain).unwrap()).unwrap();
        let t_fwd = s[(1, 0)].norm();
        let t_bwd = s[(0, 1)].norm();
        recip_dev = recip_dev.max((t_fwd - t_bwd).abs());
        let closed = classical_two_atom_transmission(da, db, ka, kb, phi);
        form_dev = form_dev.max((t_fwd * t_fwd - closed).abs()).max((t_bwd * t_bwd - closed).abs());
    }
    let passed = recip_dev < 1e-12 && form_dev < 1e-10;
    CheckResult {
        name: "classical-reciprocity",
        passed,
        detail: format!(
            "max |t_fwd - t_bwd| = {recip_dev:.2e} (tol 1e-12), closed-form deviation {form_dev:.2e} (tol 1e-10)"
        ),
    }
}

/// Incoherent output of the mirrored pair repeats with phase period pi and
/// vanishes at multiples of pi when nothing leaks.
pub fn check_incoherent_periodicity() -> CheckResult {
    let drive = Drive::forward_only(c(1.0, 0.0));
    let incoherent = |gamma: f64, phi: f64| -> (f64, f64) {
        let chain = mirror_pair(0.5, gamma, 1.2, 0.8, phi);
        let (stats, _) = steady_stats(&chain, &drive).unwrap();
        (stats.i_inc_r, stats.i_inc_t)
    };
    let mut period_dev = 0.0f64;
    for gamma in [0.0, 0.2, 0.5] {
        for i in 0..51 {
            let phi = PI * i as f64 / 50.0;
            let (r0, t0) = incoherent(gamma, phi);
            let (r1, t1) = incoherent(gamma, phi + PI);
            period_dev = period_dev.max((r0 - r1).abs()).max((t0 - t1).abs());
        }
    }
    let mut null_dev = 0.0f64;
    for phi in [0.0, PI, 2.0 * PI] {
        let (r, t) = incoherent(0.0, phi);
        null_dev = null_dev.max(r).max(t);
    }
    let passed = period_dev < 1e-8 && null_dev < 1e-10;
    CheckResult {
        name: "incoherent-periodicity",
        passed,
        detail: format!(
            "max |I_inc(phi) - I_inc(phi+pi)| = {period_dev:.2e} (tol 1e-8), \
             max null residue {null_dev:.2e} (tol 1e-10)"
        ),
    }
}

/// The direct solve and plain time integration are assembled independently;
/// their steady states must coincide.
pub fn check_solver_cross_validation() -> CheckResult {
    let mut worst = 0.0f64;
    for p in [0.1f64, 1.0, 10.0] {
        for phi in [PI / 2.0, PI, 1.5 * PI] {
            let chain = mirror_pair(0.5, 0.2, 1.2, 0.8, phi);
            let drive = Drive::forward_only(c(p.sqrt(), 0.0));
            let liouvillian = assemble_liouvillian(&chain, &drive);
            let direct = solve_steady(&liouvillian).unwrap().rho;
            let (t_final, dt) = default_time_grid(&chain);
            let relaxed =
                evolve(&chain, &drive, &DensityMatrix::ground(2), t_final, dt).unwrap();
            worst = worst.max(direct.trace_distance(&relaxed));
        }
    }
    CheckResult::from_deviation("solver-cross-validation", worst, 1e-6)
}

/// At vanishing power the quantum amplitudes reduce to the harmonic-response
/// scattering matrix.
pub fn check_quantum_classical_correspondence() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut worst = 0.0f64;
    let alpha = c(1e-3, 0.0);
    for _ in 0..20 {
        let n = rng.gen_range(1..=2);
        let chain = bounded_random_chain(&mut rng, n, (0.1, 0.5));
        let s = match scattering_matrix(&ClassicalSystem::from_chain(&chain).unwrap()) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let (stats, _) = steady_stats(&chain, &Drive::forward_only(alpha)).unwrap();
        worst = worst.max((stats.t - s[(1, 0)]).norm()).max((stats.r - s[(0, 0)]).norm());
    }
    CheckResult::from_deviation("quantum-classical-correspondence", worst, 1e-4)
}

/// Away from saturation the output is almost entirely coherent.
pub fn check_weak_drive_coherence() -> CheckResult {
    let p = 1e-6f64;
    let chain = mirror_pair(0.5, 0.2, 1.2, 0.8, PI / 2.0);
    let (stats, _) = steady_stats(&chain, &Drive::forward_only(c(p.sqrt(), 0.0))).unwrap();
    let worst = (stats.i_inc_t / p).max(stats.i_inc_r / p);
    CheckResult::from_deviation("weak-drive-coherence", worst, 1e-3)
}

/// Without intrinsic damping every input photon leaves through a port.
pub fn check_lossless_energy_balance() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let chain = bounded_random_chain(&mut rng, n, (0.0, 0.0));
        let (stats, _) = steady_stats(&chain, &Drive::forward_only(c(0.7, 0.0))).unwrap();
        worst = worst.max(stats.leakage.abs());
    }
    CheckResult::from_deviation("lossless-energy-balance", worst, 1e-8)
}
