//! Classical temporal coupled-mode baseline: N linear resonators with the
//! same K and Γ structure as the quantum chain, solved in the frequency
//! domain. Intrinsic damping enters as an additive real diagonal on Γ, the
//! classical analog of the Γ_ii + γ_i grouping in the master equation.

use crate::error::{Error, Result};
use crate::hilbert::{c, dagger, ComplexMatrix};
use crate::model::{
    build_decay_matrix, build_k_matrix, energy_conservation_deviation, validate_energy_conservation,
    DecayMatrix, EmitterChain,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct ClassicalSystem {
    pub deltas: Vec<f64>,
    /// Γ plus the intrinsic-loss diagonal.
    pub decay: DecayMatrix,
    pub k_matrix: ComplexMatrix,
    pub phi_n: f64,
}

impl ClassicalSystem {
    /// Classical counterpart of a chain: same K, same Γ, emitter γ folded in
    /// as diagonal loss. The waveguide part must satisfy KK† = Γ + Γ†.
    pub fn from_chain(chain: &EmitterChain) -> Result<Self> {
        let deviation = validate_energy_conservation(chain);
        if deviation > 1e-12 {
            return Err(Error::InvalidChain(format!(
                "waveguide decay matrix violates energy conservation by {deviation:.3e}"
            )));
        }
        let mut decay = build_decay_matrix(chain);
        for (i, e) in chain.emitters().iter().enumerate() {
            decay.matrix[(i, i)] += c(e.gamma, 0.0);
        }
        Ok(Self {
            deltas: chain.emitters().iter().map(|e| e.delta).collect(),
            decay,
            k_matrix: build_k_matrix(chain),
            phi_n: chain.phi_n(),
        })
    }

    /// iΔ_diag + Γ, the frequency-domain response matrix.
    fn response(&self) -> ComplexMatrix {
        let n = self.deltas.len();
        let mut m = self.decay.matrix.clone();
        for i in 0..n {
            m[(i, i)] += c(0.0, self.deltas[i]);
        }
        m
    }

    /// Deviation from the lossless-energy-conservation constraint, with the
    /// intrinsic diagonal removed again.
    pub fn waveguide_conservation_deviation(&self, intrinsic: &[f64]) -> f64 {
        let mut waveguide = self.decay.clone();
        for (i, g) in intrinsic.iter().enumerate() {
            waveguide.matrix[(i, i)] -= c(*g, 0.0);
        }
        energy_conservation_deviation(&self.k_matrix, &waveguide)
    }
}

/// Steady resonator amplitudes c = (iΔ_diag + Γ)⁻¹ K ε_in.
pub fn classical_steady_amplitudes(
    sys: &ClassicalSystem,
    e_in: (Complex64, Complex64),
) -> Result<DVector<Complex64>> {
    let rhs = &sys.k_matrix * DVector::from_column_slice(&[e_in.0, e_in.1]);
    sys.response().lu().solve(&rhs).ok_or(Error::SingularResponse)
}

/// Port outputs ε_out = C(ε_in − K†c) with C the antidiagonal phase e^{iφ_N};
/// returns (port-1 output, port-2 output).
pub fn classical_outputs(
    sys: &ClassicalSystem,
    e_in: (Complex64, Complex64),
) -> Result<(Complex64, Complex64)> {
    let amps = classical_steady_amplitudes(sys, e_in)?;
    let radiated = dagger(&sys.k_matrix) * amps;
    let net = (e_in.0 - radiated[0], e_in.1 - radiated[1]);
    let phase = Complex64::cis(sys.phi_n);
    Ok((phase * net.1, phase * net.0))
}

/// Two-port scattering matrix: column j is ε_out for a unit drive at port j.
/// S₂₁ is the forward transmission, S₁₂ the backward one.
pub fn scattering_matrix(sys: &ClassicalSystem) -> Result<ComplexMatrix> {
    let (s11, s21) = classical_outputs(sys, (c(1.0, 0.0), c(0.0, 0.0)))?;
    let (s12, s22) = classical_outputs(sys, (c(0.0, 0.0), c(1.0, 0.0)))?;
    let mut s = DMatrix::zeros(2, 2);
    s[(0, 0)] = s11;
    s[(1, 0)] = s21;
    s[(0, 1)] = s12;
    s[(1, 1)] = s22;
    Ok(s)
}
