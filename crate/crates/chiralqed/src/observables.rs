//! Output-field operators from the input-output relations and the scalar
//! statistics reported for each parameter point.

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::hilbert::{c, dagger, identity, lowering_operator, ComplexMatrix};
use crate::model::{Drive, EmitterChain};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// An output field O = scalar_part·I + operator_part, where operator_part is
/// a combination of single-site lowering operators (units √rate).
#[derive(Debug, Clone)]
pub struct OutputOperator {
    pub scalar_part: Complex64,
    pub operator_part: ComplexMatrix,
}

impl OutputOperator {
    /// The field as one dense matrix.
    pub fn full(&self) -> ComplexMatrix {
        identity(self.operator_part.nrows()) * self.scalar_part + &self.operator_part
    }
}

/// Right-moving output at port 2:
/// ε₂→ = e^{iφ_N} ε₁→ − Σ_i k_{i1}* e^{i(φ_N−φ_i)} S_i⁻.
pub fn output_operator_transmitted(chain: &EmitterChain, drive: &Drive) -> OutputOperator {
    let n = chain.n_atoms();
    let phi_n = chain.phi_n();
    let mut op: ComplexMatrix = DMatrix::zeros(chain.dim(), chain.dim());
    for (i, e) in chain.emitters().iter().enumerate() {
        op -= lowering_operator(i, n) * (e.k1.conj() * Complex64::cis(phi_n - e.phi));
    }
    OutputOperator {
        scalar_part: Complex64::cis(phi_n) * drive.forward,
        operator_part: op,
    }
}

/// Left-moving output at port 1:
/// ε₁← = e^{iφ_N} ε₂← − Σ_i k_{i2}* e^{iφ_i} S_i⁻.
pub fn output_operator_reflected(chain: &EmitterChain, drive: &Drive) -> OutputOperator {
    let n = chain.n_atoms();
    let phi_n = chain.phi_n();
    let mut op: ComplexMatrix = DMatrix::zeros(chain.dim(), chain.dim());
    for (i, e) in chain.emitters().iter().enumerate() {
        op -= lowering_operator(i, n) * (e.k2.conj() * Complex64::cis(e.phi));
    }
    OutputOperator {
        scalar_part: Complex64::cis(phi_n) * drive.backward,
        operator_part: op,
    }
}

/// ⟨O⟩, ⟨O†O⟩ and ⟨O†O†OO⟩ in the given state. The two power-like moments
/// must be real within 1e-10; the imaginary residue is discarded after the
/// check.
pub fn field_moments(rho: &DensityMatrix, o: &OutputOperator) -> Result<(Complex64, f64, f64)> {
    if o.operator_part.nrows() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}-dimensional, state is {}-dimensional",
            o.operator_part.nrows(),
            rho.dim()
        )));
    }
    let full = o.full();
    let full_dag = dagger(&full);
    let mean = (rho.matrix() * &full).trace();
    let power = (rho.matrix() * &full_dag * &full).trace();
    let two = (rho.matrix() * &full_dag * &full_dag * &full * &full).trace();
    for (name, v) in [("power", power), ("two_photon", two)] {
        if v.im.abs() > 1e-10 {
            return Err(Error::DimensionMismatch(format!(
                "{name} has imaginary residue {:.3e}",
                v.im
            )));
        }
    }
    Ok((mean, power.re, two.re))
}

/// One parameter point's worth of scalar observables, normalized by the
/// active input power p. For a backward drive the "transmitted" port is
/// ε₁← and the "reflected" port ε₂→.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputStats {
    /// Amplitude transmission ⟨ε_out,through⟩ / ε_in.
    pub t: Complex64,
    /// Amplitude reflection ⟨ε_out,back⟩ / ε_in.
    pub r: Complex64,
    /// Power transmission ⟨ε†ε⟩_through / p.
    pub big_t: f64,
    /// Power reflectivity ⟨ε†ε⟩_back / p.
    pub big_r: f64,
    /// Coherent and incoherent output powers, rate units (not divided by p).
    pub i_c_t: f64,
    pub i_inc_t: f64,
    pub i_c_r: f64,
    pub i_inc_r: f64,
    /// Second-order correlations at zero delay; absent when the output power
    /// underflows and the ratio is undefined.
    pub g2_t: Option<f64>,
    pub g2_r: Option<f64>,
    /// trace(ρ²).
    pub purity: f64,
    /// 1 − T − R, the fraction lost to intrinsic damping.
    pub leakage: f64,
}

/// Output power below this fraction of the input power makes g²(0) undefined.
const G2_UNDERFLOW: f64 = 1e-14;

/// Full statistics for a steady state under a single-port drive. A zero
/// drive is treated as the p → 0 forward case: all normalized quantities are
/// reported as 0 and both g² are absent. Errors with [`Error::AmbiguousDrive`]
/// when both ports are nonzero (the raw moments remain available through
/// [`field_moments`]).
pub fn compute_stats(chain: &EmitterChain, drive: &Drive, rho: &DensityMatrix) -> Result<OutputStats> {
    let fwd = drive.forward.norm_sqr() > 0.0;
    let bwd = drive.backward.norm_sqr() > 0.0;
    if fwd && bwd {
        return Err(Error::AmbiguousDrive);
    }
    let port2 = output_operator_transmitted(chain, drive);
    let port1 = output_operator_reflected(chain, drive);
    let (e_in, through, back) = if bwd {
        (drive.backward, port1, port2)
    } else {
        (drive.forward, port2, port1)
    };
    let p = e_in.norm_sqr();

    let (mean_t, power_t, two_t) = field_moments(rho, &through)?;
    let (mean_r, power_r, two_r) = field_moments(rho, &back)?;

    let i_c_t = mean_t.norm_sqr();
    let i_c_r = mean_r.norm_sqr();
    let g2 = |power: f64, two: f64| {
        if p == 0.0 || power < G2_UNDERFLOW * p {
            None
        } else {
            Some(two / (power * power))
        }
    };
    let norm = |x: Complex64| if p == 0.0 { c(0.0, 0.0) } else { x / e_in };
    let big_t = if p == 0.0 { 0.0 } else { power_t / p };
    let big_r = if p == 0.0 { 0.0 } else { power_r / p };

    Ok(OutputStats {
        t: norm(mean_t),
        r: norm(mean_r),
        big_t,
        big_r,
        i_c_t,
        i_inc_t: power_t - i_c_t,
        i_c_r,
        i_inc_r: power_r - i_c_r,
        g2_t: g2(power_t, two_t),
        g2_r: g2(power_r, two_r),
        purity: rho.purity(),
        leakage: if p == 0.0 { 0.0 } else { 1.0 - big_t - big_r },
    })
}

/// Two-atom state resolved in the collective basis
/// {|e⟩, |s⟩ = (|eg⟩+|ge⟩)/√2, |a⟩ = (|eg⟩−|ge⟩)/√2, |g⟩}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectivePopulations {
    pub p_e: f64,
    pub p_s: f64,
    pub p_a: f64,
    pub p_g: f64,
    pub rho_sg: Complex64,
    pub rho_ag: Complex64,
    pub rho_ea: Complex64,
    pub rho_es: Complex64,
}

pub fn collective_populations(rho: &DensityMatrix) -> Result<CollectivePopulations> {
    if rho.dim() != 4 {
        return Err(Error::WrongSystemSize(rho.dim().trailing_zeros() as usize));
    }
    let basis_vec = |coeffs: [Complex64; 4]| DVector::from_row_slice(&coeffs);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let e = basis_vec([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let sym = basis_vec([c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]);
    let asym = basis_vec([c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]);
    let g = basis_vec([c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let elem = |u: &DVector<Complex64>, v: &DVector<Complex64>| -> Complex64 {
        (u.adjoint() * rho.matrix() * v)[(0, 0)]
    };
    Ok(CollectivePopulations {
        p_e: elem(&e, &e).re,
        p_s: elem(&sym, &sym).re,
        p_a: elem(&asym, &asym).re,
        p_g: elem(&g, &g).re,
        rho_sg: elem(&sym, &g),
        rho_ag: elem(&asym, &g),
        rho_ea: elem(&e, &asym),
        rho_es: elem(&e, &sym),
    })
}
