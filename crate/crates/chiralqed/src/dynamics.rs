//! Master-equation superoperator, steady states, and a fixed-step RK4
//! integrator kept as an independent cross-check of the linear solve.
//!
//! Vectorization is column-stacking: vec(AρB) = (Bᵀ ⊗ A) vec(ρ), so the
//! vec index of entry (r, c) is c·d + r.

use crate::error::{Error, Result};
use crate::hilbert::{c, dagger, identity, kronecker, lowering_operator, ComplexMatrix};
use crate::model::{build_decay_matrix, build_hamiltonian, Drive, EmitterChain};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Liouvillian L acting on vec(ρ): vec(dρ/dt) = L vec(ρ).
#[derive(Debug, Clone)]
pub struct Superoperator {
    pub matrix: ComplexMatrix,
    /// Hilbert dimension d; the matrix is d²×d².
    pub dim: usize,
}

impl Superoperator {
    /// dρ/dt for the given ρ, as a matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        unvec(&(&self.matrix * vec_density(rho)), self.dim)
    }

    /// Max-norm of L vec(ρ); zero for a steady state.
    pub fn residual(&self, rho: &ComplexMatrix) -> f64 {
        (&self.matrix * vec_density(rho))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Hermitian, unit-trace state on the 2^N-dimensional chain space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-10) and positivity
    /// (eigenvalues ≥ −1e-8) before accepting the matrix.
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let herm = (&rho - dagger(&rho)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!("not Hermitian: deviation {herm:.3e}")));
        }
        let tr = rho.trace();
        if (tr - c(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min_eig = rho
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -1e-8 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { rho })
    }

    /// |g…g⟩⟨g…g|, the dark state of the undriven chain.
    pub fn ground(n_atoms: usize) -> Self {
        let dim = 1 << n_atoms;
        let mut rho = DMatrix::zeros(dim, dim);
        rho[(dim - 1, dim - 1)] = c(1.0, 0.0);
        Self { rho }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// ½ Σ|λ_i| of the Hermitian difference.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.rho - &other.rho;
        0.5 * diff.symmetric_eigenvalues().iter().map(|e| e.abs()).sum::<f64>()
    }
}

/// Column-stacked vec(ρ).
pub fn vec_density(rho: &ComplexMatrix) -> DVector<Complex64> {
    DVector::from_column_slice(rho.as_slice())
}

/// Inverse of [`vec_density`].
pub fn unvec(v: &DVector<Complex64>, dim: usize) -> ComplexMatrix {
    DMatrix::from_column_slice(dim, dim, v.as_slice())
}

fn left_mult(x: &ComplexMatrix, dim: usize) -> ComplexMatrix {
    kronecker(&identity(dim), x)
}

fn right_mult(x: &ComplexMatrix, dim: usize) -> ComplexMatrix {
    kronecker(&x.transpose(), &identity(dim))
}

fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    kronecker(&b.transpose(), a)
}

/// Assembles L for the chain's master equation: the commutator with the
/// driven Hamiltonian, one dissipator per emitter with total rate Γ_ii + γ_i
/// (population decays at twice that), and the directional cross terms
/// between every ordered pair.
pub fn assemble_liouvillian(chain: &EmitterChain, drive: &Drive) -> Superoperator {
    let n = chain.n_atoms();
    let dim = chain.dim();
    let h = build_hamiltonian(chain, drive);
    let decay = build_decay_matrix(chain).matrix;

    let sm: Vec<ComplexMatrix> = (0..n).map(|i| lowering_operator(i, n)).collect();
    let sp: Vec<ComplexMatrix> = sm.iter().map(dagger).collect();

    // -i (Hρ - ρH)
    let mut l = (left_mult(&h, dim) - right_mult(&h, dim)) * c(0.0, -1.0);

    for i in 0..n {
        let rate = decay[(i, i)].re + chain.emitters()[i].gamma;
        let pp = &sp[i] * &sm[i];
        let term = left_mult(&pp, dim) + right_mult(&pp, dim) - sandwich(&sm[i], &sp[i]) * c(2.0, 0.0);
        l -= term * c(rate, 0.0);
    }

    // Cross bracket for i<j plus its Hermitian conjugate, written out so the
    // vectorized form mirrors the matrix equation term by term.
    for i in 0..n {
        for j in (i + 1)..n {
            let g_ij = decay[(i, j)];
            let g_ji = decay[(j, i)];
            let p_ij = &sp[i] * &sm[j];
            let p_ji = &sp[j] * &sm[i];
            let mut term = left_mult(&p_ij, dim) * g_ij;
            term += right_mult(&p_ij, dim) * g_ji.conj();
            term -= sandwich(&sm[j], &sp[i]) * (g_ij + g_ji.conj());
            // H.c. of the bracket
            term += left_mult(&p_ji, dim) * g_ji;
            term += right_mult(&p_ji, dim) * g_ij.conj();
            term -= sandwich(&sm[i], &sp[j]) * (g_ij.conj() + g_ji);
            l -= term;
        }
    }

    Superoperator { matrix: l, dim }
}

/// Which route produced a steady state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvePath {
    Direct,
    TimeEvolution,
}

impl std::fmt::Display for SolvePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolvePath::Direct => write!(f, "direct"),
            SolvePath::TimeEvolution => write!(f, "time-evolution"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SteadySolution {
    pub rho: DensityMatrix,
    pub path: SolvePath,
    /// Max-norm of L vec(ρ) at the returned state.
    pub residual: f64,
}

/// Singular values below this fraction of the largest one count as zero when
/// deciding whether the steady state is unique.
const NULL_SPACE_REL_TOL: f64 = 1e-10;

/// Steady state of L: replaces the first scalar equation of L vec(ρ) = 0
/// with the trace constraint and solves the bordered dense system. If the
/// null space is not one-dimensional (singular values below 1e-10·σ_max),
/// falls back to relaxing L from |g…g⟩⟨g…g| and reports the path taken.
pub fn solve_steady(liouvillian: &Superoperator) -> Result<SteadySolution> {
    let dim = liouvillian.dim;
    let m = dim * dim;

    let sv = liouvillian.matrix.clone().singular_values();
    let sigma_max = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let null_dim = sv.iter().filter(|&&s| s <= NULL_SPACE_REL_TOL * sigma_max).count();
    if null_dim != 1 || sigma_max == 0.0 {
        let rho = relax_to_steady(liouvillian)?;
        let residual = liouvillian.residual(rho.matrix());
        return Ok(SteadySolution { rho, path: SolvePath::TimeEvolution, residual });
    }

    // Trace preservation makes row 0 a combination of the remaining rows, so
    // overwriting it with the trace functional keeps the system square and
    // makes it nonsingular exactly when the steady state is unique.
    let mut bordered = liouvillian.matrix.clone();
    for col in 0..m {
        bordered[(0, col)] = c(0.0, 0.0);
    }
    for k in 0..dim {
        bordered[(0, k * (dim + 1))] = c(1.0, 0.0);
    }
    let mut rhs = DVector::zeros(m);
    rhs[0] = c(1.0, 0.0);

    let x = bordered.lu().solve(&rhs).ok_or(Error::SolverSingular)?;
    let raw = unvec(&x, dim);
    let herm = (&raw + dagger(&raw)) * c(0.5, 0.0);
    let tr = herm.trace();
    let rho_mat = herm / tr;

    let residual = liouvillian.residual(&rho_mat);
    if residual > 1e-9 {
        return Err(Error::SolverSingular);
    }
    let rho = DensityMatrix::new(rho_mat)?;
    Ok(SteadySolution { rho, path: SolvePath::Direct, residual })
}

/// RK4 relaxation of vec(ρ) under L from the ground state, used when the
/// direct solve cannot certify uniqueness. Succeeds once the residual drops
/// below 1e-9; errors if it never does.
fn relax_to_steady(liouvillian: &Superoperator) -> Result<DensityMatrix> {
    let dim = liouvillian.dim;
    let l = &liouvillian.matrix;
    let scale = l.iter().map(|z| z.norm()).fold(0.0, f64::max) * dim as f64;
    let dt = if scale > 0.0 { 0.5 / scale } else { 1.0 };

    let mut x = vec_density(DensityMatrix::ground(dim.trailing_zeros() as usize).matrix());
    let max_chunks = 2000;
    let steps_per_chunk = 200;
    for _ in 0..max_chunks {
        for _ in 0..steps_per_chunk {
            let k1 = l * &x;
            let k2 = l * &(&x + &k1 * c(dt / 2.0, 0.0));
            let k3 = l * &(&x + &k2 * c(dt / 2.0, 0.0));
            let k4 = l * &(&x + &k3 * c(dt, 0.0));
            x += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(dt / 6.0, 0.0);
        }
        let residual = (l * &x).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual < 1e-9 {
            let raw = unvec(&x, dim);
            let herm = (&raw + dagger(&raw)) * c(0.5, 0.0);
            let tr = herm.trace();
            return DensityMatrix::new(herm / tr);
        }
    }
    Err(Error::NonUniqueSteadyState)
}

/// Step sizes matched to the chain's rates: dt resolves the fastest decay,
/// t_final outlasts the slowest.
pub fn default_time_grid(chain: &EmitterChain) -> (f64, f64) {
    let decay = build_decay_matrix(chain).matrix;
    let rates: Vec<f64> = chain
        .emitters()
        .iter()
        .enumerate()
        .map(|(i, e)| decay[(i, i)].re + e.gamma)
        .collect();
    let rate_max = rates.iter().fold(0.0f64, |a, &b| a.max(b)).max(1e-9);
    let rate_min = rates.iter().fold(f64::INFINITY, |a, &b| a.min(b)).max(1e-9);
    (50.0 / rate_min, 1e-3 / rate_max)
}

/// Fixed-step RK4 integration of the master equation applied in matrix form,
/// assembled directly from the Hamiltonian and decay matrix rather than from
/// the vectorized Liouvillian so the two routes stay independent.
///
/// Panics if dt ≤ 0 or t_final < dt. Errors with [`Error::StepTooLarge`] if
/// trace or Hermiticity drift exceeds 1e-6 during the run.
pub fn evolve(
    chain: &EmitterChain,
    drive: &Drive,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    assert!(dt > 0.0, "dt must be positive");
    assert!(t_final >= dt, "t_final must be at least dt");
    let n = chain.n_atoms();
    let dim = chain.dim();
    assert_eq!(rho0.dim(), dim, "initial state dimension mismatch");

    let h = build_hamiltonian(chain, drive);
    let decay = build_decay_matrix(chain).matrix;
    let sm: Vec<ComplexMatrix> = (0..n).map(|i| lowering_operator(i, n)).collect();
    let sp: Vec<ComplexMatrix> = sm.iter().map(dagger).collect();
    let pp: Vec<Vec<ComplexMatrix>> = (0..n)
        .map(|i| (0..n).map(|j| &sp[i] * &sm[j]).collect())
        .collect();

    let rhs = |rho: &ComplexMatrix| -> ComplexMatrix {
        let mut out = (&h * rho - rho * &h) * c(0.0, -1.0);
        for i in 0..n {
            let rate = c(decay[(i, i)].re + chain.emitters()[i].gamma, 0.0);
            out -= (&pp[i][i] * rho + rho * &pp[i][i] - (&sm[i] * rho * &sp[i]) * c(2.0, 0.0)) * rate;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let g_ij = decay[(i, j)];
                let g_ji = decay[(j, i)];
                let mut term = (&pp[i][j] * rho) * g_ij;
                term -= (&sm[j] * rho * &sp[i]) * (g_ij + g_ji.conj());
                term += (rho * &pp[i][j]) * g_ji.conj();
                term += (&pp[j][i] * rho) * g_ji;
                term -= (&sm[i] * rho * &sp[j]) * (g_ij.conj() + g_ji);
                term += (rho * &pp[j][i]) * g_ij.conj();
                out -= term;
            }
        }
        out
    };

    let steps = (t_final / dt).round() as usize;
    let mut rho = rho0.matrix().clone();
    let half = c(dt / 2.0, 0.0);
    let sixth = c(dt / 6.0, 0.0);
    let two = c(2.0, 0.0);
    for step in 0..steps {
        let k1 = rhs(&rho);
        let k2 = rhs(&(&rho + &k1 * half));
        let k3 = rhs(&(&rho + &k2 * half));
        let k4 = rhs(&(&rho + &k3 * c(dt, 0.0)));
        rho += (k1 + k2 * two + k3 * two + k4) * sixth;

        if step % 1000 == 999 || step == steps - 1 {
            let tr_drift = (rho.trace() - c(1.0, 0.0)).norm();
            let herm_drift = (&rho - dagger(&rho)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            // negated comparison so a NaN from a blown-up step also trips
            if !(tr_drift <= 1e-6 && herm_drift <= 1e-6) {
                return Err(Error::StepTooLarge(format!(
                    "trace drift {tr_drift:.3e}, Hermiticity drift {herm_drift:.3e} at step {step}"
                )));
            }
        }
    }
    DensityMatrix::new(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Emitter;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single_atom(delta: f64, gamma: f64, k1_sq: f64, k2_sq: f64) -> EmitterChain {
        EmitterChain::new(vec![Emitter {
            delta,
            gamma,
            k1: c(k1_sq.sqrt(), 0.0),
            k2: c(k2_sq.sqrt(), 0.0),
            phi: 0.0,
        }])
        .unwrap()
    }

    fn fig3_chain(phi: f64) -> EmitterChain {
        EmitterChain::new(vec![
            Emitter { delta: 1.0, gamma: 0.0, k1: c(1.2f64.sqrt(), 0.0), k2: c(0.8f64.sqrt(), 0.0), phi: 0.0 },
            Emitter { delta: -1.0, gamma: 0.0, k1: c(1.2f64.sqrt(), 0.0), k2: c(0.8f64.sqrt(), 0.0), phi },
        ])
        .unwrap()
    }

    fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
        let a = DMatrix::from_fn(dim, dim, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let m = &a * dagger(&a);
        let tr = m.trace();
        m / tr
    }

    #[test]
    fn vec_unvec_roundtrip_and_index_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let m = random_density(&mut rng, 4);
        let v = vec_density(&m);
        assert_eq!(unvec(&v, 4), m);
        // entry (r, c) lives at vec index c*d + r
        assert_eq!(v[2 * 4 + 3], m[(3, 2)]);
    }

    #[test]
    fn vectorized_products_match_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = DMatrix::from_fn(3, 3, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let b = DMatrix::from_fn(3, 3, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let rho = random_density(&mut rng, 3);
        let direct = &a * &rho * &b;
        let via_kron = unvec(&(sandwich(&a, &b) * vec_density(&rho)), 3);
        assert!((direct - via_kron).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-13);
    }

    #[test]
    fn undriven_single_atom_decays_to_ground() {
        let chain = single_atom(0.0, 0.5, 0.6, 0.4);
        let sol = solve_steady(&assemble_liouvillian(&chain, &Drive::none())).unwrap();
        assert_eq!(sol.path, SolvePath::Direct);
        let expected = DensityMatrix::ground(1);
        assert!(sol.rho.trace_distance(&expected) < 1e-10);
    }

    #[test]
    fn excited_population_decays_at_twice_the_total_rate() {
        // Gamma_11 + gamma = 1 here, so rho_ee(t) = exp(-2t).
        let chain = single_atom(0.0, 0.5, 0.6, 0.4);
        let mut excited = DMatrix::zeros(2, 2);
        excited[(0, 0)] = c(1.0, 0.0);
        let rho0 = DensityMatrix::new(excited).unwrap();
        let rho1 = evolve(&chain, &Drive::none(), &rho0, 1.0, 1e-4).unwrap();
        assert!((rho1.matrix()[(0, 0)].re - (-2.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn liouvillian_preserves_trace_and_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let chain = fig3_chain(1.1);
        let lv = assemble_liouvillian(&chain, &Drive::forward_only(c(0.9, 0.2)));
        for _ in 0..100 {
            let rho = random_density(&mut rng, 4);
            let drho = lv.apply(&rho);
            assert!(drho.trace().norm() < 1e-12);
            let anti = (&drho - dagger(&drho)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(anti < 1e-12);
        }
    }

    #[test]
    fn steady_state_satisfies_master_equation() {
        let chain = fig3_chain(std::f64::consts::PI);
        let lv = assemble_liouvillian(&chain, &Drive::forward_only(c(1.0, 0.0)));
        let sol = solve_steady(&lv).unwrap();
        assert!(sol.residual < 1e-10);
        let eigs = sol.rho.matrix().symmetric_eigenvalues();
        assert!(eigs.iter().all(|&e| e >= -1e-8));
    }

    #[test]
    fn solve_and_evolve_agree() {
        let chain = fig3_chain(2.0);
        let drive = Drive::forward_only(c(1.0, 0.0));
        let sol = solve_steady(&assemble_liouvillian(&chain, &drive)).unwrap();
        let evolved = evolve(&chain, &drive, &DensityMatrix::ground(2), 60.0, 1e-3).unwrap();
        assert!(sol.rho.trace_distance(&evolved) < 1e-6);
    }

    #[test]
    fn steady_state_is_a_fixed_point_of_evolve() {
        let chain = fig3_chain(1.7);
        let drive = Drive::forward_only(c(0.8, 0.0));
        let sol = solve_steady(&assemble_liouvillian(&chain, &drive)).unwrap();
        let later = evolve(&chain, &drive, &sol.rho, 5.0, 1e-3).unwrap();
        assert!(sol.rho.trace_distance(&later) < 1e-8);
    }

    #[test]
    fn degenerate_liouvillian_falls_back_to_time_evolution() {
        // No decay, no drive: every population distribution is stationary,
        // so the direct solve must refuse and relaxation returns the ground
        // state it started from.
        let chain = EmitterChain::new(vec![Emitter {
            delta: 0.7,
            gamma: 0.0,
            k1: c(0.0, 0.0),
            k2: c(0.0, 0.0),
            phi: 0.0,
        }])
        .unwrap();
        let sol = solve_steady(&assemble_liouvillian(&chain, &Drive::none())).unwrap();
        assert_eq!(sol.path, SolvePath::TimeEvolution);
        assert!(sol.rho.trace_distance(&DensityMatrix::ground(1)) < 1e-12);
    }

    #[test]
    fn evolve_rejects_coarse_steps() {
        let chain = single_atom(0.0, 0.0, 50.0, 50.0);
        let err = evolve(&chain, &Drive::forward_only(c(3.0, 0.0)), &DensityMatrix::ground(1), 400.0, 0.2);
        assert!(matches!(err, Err(Error::StepTooLarge(_))));
    }
}
