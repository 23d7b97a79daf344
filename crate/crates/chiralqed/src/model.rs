//! Physical system description: emitters along the waveguide, the coupling
//! matrix K, the decay matrix Γ, and the driven Hamiltonian.
//!
//! All rates are in units of a caller-chosen reference; the conventional
//! normalization sets Γ = (|k₁|² + |k₂|²)/2 = 1.

use crate::error::{Error, Result};
use crate::hilbert::{c, dagger, lowering_operator, ComplexMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Emitter {
    /// Detuning Δ from the drive frequency.
    pub delta: f64,
    /// Intrinsic damping γ into non-waveguide channels; must be ≥ 0.
    pub gamma: f64,
    /// Coupling to the forward-propagating mode, units √rate.
    pub k1: Complex64,
    /// Coupling to the backward-propagating mode, units √rate.
    pub k2: Complex64,
    /// Forward propagation phase φ accumulated up to this emitter.
    pub phi: f64,
}

/// Emitters ordered along the waveguide, port-1 side first.
///
/// The first emitter's phase is fixed to 0 by convention.
#[derive(Debug, Clone, PartialEq)]
pub struct EmitterChain {
    emitters: Vec<Emitter>,
}

impl EmitterChain {
    pub fn new(emitters: Vec<Emitter>) -> Result<Self> {
        if emitters.is_empty() {
            return Err(Error::InvalidChain("chain has no emitters".into()));
        }
        if emitters[0].phi != 0.0 {
            return Err(Error::InvalidChain(format!(
                "first emitter must have phi = 0, got {}",
                emitters[0].phi
            )));
        }
        for (i, e) in emitters.iter().enumerate() {
            if !(e.gamma >= 0.0) {
                return Err(Error::InvalidChain(format!(
                    "emitter {i}: gamma must be >= 0, got {}",
                    e.gamma
                )));
            }
            for (name, v) in [("delta", e.delta), ("phi", e.phi)] {
                if !v.is_finite() {
                    return Err(Error::InvalidChain(format!("emitter {i}: {name} is not finite")));
                }
            }
            if !e.k1.is_finite() || !e.k2.is_finite() {
                return Err(Error::InvalidChain(format!("emitter {i}: coupling is not finite")));
            }
        }
        Ok(Self { emitters })
    }

    pub fn emitters(&self) -> &[Emitter] {
        &self.emitters
    }

    pub fn n_atoms(&self) -> usize {
        self.emitters.len()
    }

    /// Hilbert-space dimension 2^N.
    pub fn dim(&self) -> usize {
        1 << self.emitters.len()
    }

    /// Total forward phase φ_N, the phase of the last emitter.
    pub fn phi_n(&self) -> f64 {
        self.emitters.last().unwrap().phi
    }

    /// Non-fatal oddities worth surfacing: non-monotone phases are legal
    /// but usually indicate a typo.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.emitters.windows(2).any(|w| w[1].phi < w[0].phi) {
            out.push("propagation phases are not monotone along the chain".into());
        }
        out
    }
}

/// Input amplitudes at the two ports, units √rate (√photon-flux).
///
/// The input power of a forward-only drive is |forward|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    pub forward: Complex64,
    pub backward: Complex64,
}

impl Drive {
    pub fn forward_only(alpha: Complex64) -> Self {
        Self { forward: alpha, backward: c(0.0, 0.0) }
    }

    pub fn backward_only(alpha: Complex64) -> Self {
        Self { forward: c(0.0, 0.0), backward: alpha }
    }

    pub fn none() -> Self {
        Self { forward: c(0.0, 0.0), backward: c(0.0, 0.0) }
    }
}

/// Waveguide-mediated dissipative couplings Γ.
///
/// Diagonal entries are real and equal to half the total waveguide emission
/// rate; Γ + Γ† = KK† (energy conservation).
#[derive(Debug, Clone, PartialEq)]
pub struct DecayMatrix {
    pub matrix: ComplexMatrix,
}

/// K matrix, N×2: row i = (k_{i1} e^{iφ_i}, k_{i2} e^{i(φ_N − φ_i)}).
pub fn build_k_matrix(chain: &EmitterChain) -> ComplexMatrix {
    let n = chain.n_atoms();
    let phi_n = chain.phi_n();
    let mut k = DMatrix::zeros(n, 2);
    for (i, e) in chain.emitters().iter().enumerate() {
        k[(i, 0)] = e.k1 * Complex64::cis(e.phi);
        k[(i, 1)] = e.k2 * Complex64::cis(phi_n - e.phi);
    }
    k
}

/// Γ_ii = (|k_{i1}|² + |k_{i2}|²)/2; for i < j,
/// Γ_ij = k_{i2} k_{j2}* e^{i(φ_j − φ_i)} and Γ_ji = k_{i1}* k_{j1} e^{i(φ_j − φ_i)}.
pub fn build_decay_matrix(chain: &EmitterChain) -> DecayMatrix {
    let n = chain.n_atoms();
    let es = chain.emitters();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = c((es[i].k1.norm_sqr() + es[i].k2.norm_sqr()) / 2.0, 0.0);
        for j in (i + 1)..n {
            let phase = Complex64::cis(es[j].phi - es[i].phi);
            g[(i, j)] = es[i].k2 * es[j].k2.conj() * phase;
            g[(j, i)] = es[i].k1.conj() * es[j].k1 * phase;
        }
    }
    DecayMatrix { matrix: g }
}

/// Max entrywise |KK† − (Γ + Γ†)| for the given matrices.
pub fn energy_conservation_deviation(k: &ComplexMatrix, decay: &DecayMatrix) -> f64 {
    let lhs = k * dagger(k);
    let rhs = &decay.matrix + dagger(&decay.matrix);
    (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max entrywise |KK† − (Γ + Γ†)| for the chain's own K and Γ; callers
/// assert this is below 1e-12.
pub fn validate_energy_conservation(chain: &EmitterChain) -> f64 {
    energy_conservation_deviation(&build_k_matrix(chain), &build_decay_matrix(chain))
}

/// Driven Hamiltonian in the rotating frame:
/// H = Σ_i Δ_i S_i⁺S_i⁻ + i Σ_i (d_i S_i⁺ − d_i* S_i⁻) with
/// d_i = k_{i1} e^{iφ_i} ε₁→ + k_{i2} e^{i(φ_N−φ_i)} ε₂←, i.e. d = K ε_in.
///
/// The detuning term uses Δ S⁺S⁻; the S^z form differs by a multiple of the
/// identity (exactly, for antisymmetric detunings) and leaves ρ dynamics
/// unchanged.
pub fn build_hamiltonian(chain: &EmitterChain, drive: &Drive) -> ComplexMatrix {
    let n = chain.n_atoms();
    let dim = chain.dim();
    let k = build_k_matrix(chain);
    let mut h: ComplexMatrix = DMatrix::zeros(dim, dim);
    for (i, e) in chain.emitters().iter().enumerate() {
        let s_minus = lowering_operator(i, n);
        let s_plus = dagger(&s_minus);
        h += (&s_plus * &s_minus) * c(e.delta, 0.0);
        let d = k[(i, 0)] * drive.forward + k[(i, 1)] * drive.backward;
        let coeff = c(0.0, 1.0) * d;
        h += &s_plus * coeff + &s_minus * coeff.conj();
    }
    h
}
