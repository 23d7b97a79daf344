//! Python bindings for the chiral-chain solver: build a chain, solve for its
//! steady state, read off output-field statistics, and cross-check against
//! the single-atom and two-atom closed forms.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use chiralqed::dynamics::{assemble_liouvillian, solve_steady};
use chiralqed::hilbert::ComplexMatrix;
use chiralqed::model::{
    build_decay_matrix, build_k_matrix, validate_energy_conservation, Drive, Emitter,
    EmitterChain,
};
use chiralqed::observables::{collective_populations, compute_stats};
use chiralqed::oracles::{self, SingleAtomParams};
use chiralqed::tcmt;

fn err(e: chiralqed::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Chain of two-level emitters along the waveguide.
#[pyclass(frozen)]
struct Chain {
    inner: EmitterChain,
}

#[pymethods]
impl Chain {
    /// atoms: list of (delta, gamma, k1, k2, phi) tuples, couplings complex.
    /// The first phase must be zero.
    #[new]
    fn new(atoms: Vec<(f64, f64, Complex64, Complex64, f64)>) -> PyResult<Self> {
        let emitters = atoms
            .into_iter()
            .map(|(delta, gamma, k1, k2, phi)| Emitter { delta, gamma, k1, k2, phi })
            .collect();
        Ok(Chain { inner: EmitterChain::new(emitters).map_err(err)? })
    }

    fn n_atoms(&self) -> usize {
        self.inner.n_atoms()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Max-norm deviation of KK† from Γ + Γ† + intrinsic loss.
    fn energy_conservation_deviation(&self) -> f64 {
        validate_energy_conservation(&self.inner)
    }

    fn k_matrix(&self) -> Vec<Vec<Complex64>> {
        rows(&build_k_matrix(&self.inner))
    }

    fn decay_matrix(&self) -> Vec<Vec<Complex64>> {
        rows(&build_decay_matrix(&self.inner).matrix)
    }

    fn __repr__(&self) -> String {
        format!("Chain(n_atoms={})", self.inner.n_atoms())
    }
}

/// Steady-state output statistics for a one-sided drive.
#[pyclass(frozen)]
struct Stats {
    #[pyo3(get)]
    t: Complex64,
    #[pyo3(get)]
    r: Complex64,
    #[pyo3(get, name = "T")]
    big_t: f64,
    #[pyo3(get, name = "R")]
    big_r: f64,
    #[pyo3(get, name = "I_c_T")]
    i_c_t: f64,
    #[pyo3(get, name = "I_inc_T")]
    i_inc_t: f64,
    #[pyo3(get, name = "I_c_R")]
    i_c_r: f64,
    #[pyo3(get, name = "I_inc_R")]
    i_inc_r: f64,
    #[pyo3(get, name = "g2_T")]
    g2_t: Option<f64>,
    #[pyo3(get, name = "g2_R")]
    g2_r: Option<f64>,
    #[pyo3(get)]
    purity: f64,
    #[pyo3(get)]
    leakage: f64,
    /// "direct" or "time-evolution".
    #[pyo3(get)]
    path: String,
    #[pyo3(get)]
    residual: f64,
}

#[pymethods]
impl Stats {
    fn __repr__(&self) -> String {
        format!(
            "Stats(T={}, R={}, leakage={}, path={:?})",
            self.big_t, self.big_r, self.leakage, self.path
        )
    }
}

/// Populations in the collective two-atom basis |e⟩, |s⟩, |a⟩, |g⟩
/// plus the coherences that feed the output field.
#[pyclass(frozen)]
struct Populations {
    #[pyo3(get)]
    p_e: f64,
    #[pyo3(get)]
    p_s: f64,
    #[pyo3(get)]
    p_a: f64,
    #[pyo3(get)]
    p_g: f64,
    #[pyo3(get)]
    rho_sg: Complex64,
    #[pyo3(get)]
    rho_ag: Complex64,
    #[pyo3(get)]
    rho_ea: Complex64,
    #[pyo3(get)]
    rho_es: Complex64,
}

#[pymethods]
impl Populations {
    fn __repr__(&self) -> String {
        format!(
            "Populations(p_e={}, p_s={}, p_a={}, p_g={})",
            self.p_e, self.p_s, self.p_a, self.p_g
        )
    }
}

fn solve(chain: &Chain, forward: Complex64, backward: Complex64) -> PyResult<chiralqed::dynamics::SteadySolution> {
    let drive = Drive { forward, backward };
    let liouvillian = assemble_liouvillian(&chain.inner, &drive);
    solve_steady(&liouvillian).map_err(err)
}

/// Steady-state statistics under a coherent drive on one port.
#[pyfunction]
#[pyo3(signature = (chain, forward, backward = Complex64::new(0.0, 0.0)))]
fn steady(chain: &Chain, forward: Complex64, backward: Complex64) -> PyResult<Stats> {
    let drive = Drive { forward, backward };
    let solution = solve(chain, forward, backward)?;
    let s = compute_stats(&chain.inner, &drive, &solution.rho).map_err(err)?;
    Ok(Stats {
        t: s.t,
        r: s.r,
        big_t: s.big_t,
        big_r: s.big_r,
        i_c_t: s.i_c_t,
        i_inc_t: s.i_inc_t,
        i_c_r: s.i_c_r,
        i_inc_r: s.i_inc_r,
        g2_t: s.g2_t,
        g2_r: s.g2_r,
        purity: s.purity,
        leakage: s.leakage,
        path: solution.path.to_string(),
        residual: solution.residual,
    })
}

/// Steady-state density matrix as a list of rows.
#[pyfunction]
#[pyo3(signature = (chain, forward, backward = Complex64::new(0.0, 0.0)))]
fn steady_density(
    chain: &Chain,
    forward: Complex64,
    backward: Complex64,
) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(rows(solve(chain, forward, backward)?.rho.matrix()))
}

/// Collective-basis populations of a driven two-atom chain.
#[pyfunction]
#[pyo3(signature = (chain, forward, backward = Complex64::new(0.0, 0.0)))]
fn steady_populations(
    chain: &Chain,
    forward: Complex64,
    backward: Complex64,
) -> PyResult<Populations> {
    let p = collective_populations(&solve(chain, forward, backward)?.rho).map_err(err)?;
    Ok(Populations {
        p_e: p.p_e,
        p_s: p.p_s,
        p_a: p.p_a,
        p_g: p.p_g,
        rho_sg: p.rho_sg,
        rho_ag: p.rho_ag,
        rho_ea: p.rho_ea,
        rho_es: p.rho_es,
    })
}

/// 2x2 scattering matrix of the linearized chain; rows are output ports,
/// columns input ports, so s[1][0] is forward transmission.
#[pyfunction]
fn scattering_matrix(chain: &Chain) -> PyResult<Vec<Vec<Complex64>>> {
    let sys = tcmt::ClassicalSystem::from_chain(&chain.inner).map_err(err)?;
    Ok(rows(&tcmt::scattering_matrix(&sys).map_err(err)?))
}

fn single_atom(delta: f64, gamma: f64, k1: Complex64, k2: Complex64, power: f64) -> SingleAtomParams {
    SingleAtomParams { delta, gamma, k1, k2, alpha: Complex64::new(power.sqrt(), 0.0) }
}

/// Closed-form (t, r) of one atom driven at the given power.
#[pyfunction]
fn single_atom_amplitudes(
    delta: f64,
    gamma: f64,
    k1: Complex64,
    k2: Complex64,
    power: f64,
) -> (Complex64, Complex64) {
    oracles::single_atom_amplitudes(&single_atom(delta, gamma, k1, k2, power))
}

/// Closed-form (T, R, T - |t|^2, 1 - T - R) of one atom.
#[pyfunction]
fn single_atom_powers(
    delta: f64,
    gamma: f64,
    k1: Complex64,
    k2: Complex64,
    power: f64,
) -> (f64, f64, f64, f64) {
    oracles::single_atom_powers(&single_atom(delta, gamma, k1, k2, power))
}

/// Drive power at which the coherent transmitted amplitude vanishes, or None
/// off resonance or for insufficient chirality.
#[pyfunction]
fn critical_power(delta: f64, gamma: f64, k1: Complex64, k2: Complex64) -> Option<f64> {
    oracles::critical_power(&single_atom(delta, gamma, k1, k2, 1.0))
}

/// Closed-form transmitted g2 of one atom.
#[pyfunction]
fn single_atom_g2_transmitted(
    delta: f64,
    gamma: f64,
    k1: Complex64,
    k2: Complex64,
    power: f64,
) -> PyResult<f64> {
    oracles::single_atom_g2_transmitted(&single_atom(delta, gamma, k1, k2, power)).map_err(err)
}

/// Low-power reflected g2 of two lossless atoms at phase pi/2.
#[pyfunction]
fn two_atom_lowpower_g2_reflected(delta: f64, k1: Complex64, k2: Complex64) -> f64 {
    oracles::two_atom_lowpower_g2_reflected(delta, k1, k2)
}

/// Low-power reflectivity of two lossless atoms at phase pi/2.
#[pyfunction]
fn two_atom_lowpower_reflectivity(delta: f64, k1: Complex64, k2: Complex64) -> f64 {
    oracles::two_atom_lowpower_reflectivity(delta, k1, k2)
}

/// Classical forward transmission of two detuned atoms with crossed couplings.
#[pyfunction]
fn classical_two_atom_transmission(
    delta_a: f64,
    delta_b: f64,
    k_alpha: Complex64,
    k_beta: Complex64,
    phi: f64,
) -> f64 {
    oracles::classical_two_atom_transmission(delta_a, delta_b, k_alpha, k_beta, phi)
}

#[pymodule]
fn chiralqed_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Chain>()?;
    m.add_class::<Stats>()?;
    m.add_class::<Populations>()?;
    m.add_function(wrap_pyfunction!(steady, m)?)?;
    m.add_function(wrap_pyfunction!(steady_density, m)?)?;
    m.add_function(wrap_pyfunction!(steady_populations, m)?)?;
    m.add_function(wrap_pyfunction!(scattering_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(single_atom_amplitudes, m)?)?;
    m.add_function(wrap_pyfunction!(single_atom_powers, m)?)?;
    m.add_function(wrap_pyfunction!(critical_power, m)?)?;
    m.add_function(wrap_pyfunction!(single_atom_g2_transmitted, m)?)?;
    m.add_function(wrap_pyfunction!(two_atom_lowpower_g2_reflected, m)?)?;
    m.add_function(wrap_pyfunction!(two_atom_lowpower_reflectivity, m)?)?;
    m.add_function(wrap_pyfunction!(classical_two_atom_transmission, m)?)?;
    Ok(())
}
