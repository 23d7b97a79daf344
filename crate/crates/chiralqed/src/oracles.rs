//! Closed-form expressions used as independent ground truth for the numeric
//! pipeline: single-atom transmission, reflection, photon statistics and the
//! critical drive power; two-atom low-power expansions; the pure-state
//! elements at the transparency point; and the classical two-resonator
//! transmission.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Single atom at phase 0: detuning, intrinsic damping, the two chiral
/// couplings and the forward drive amplitude.
#[derive(Debug, Clone, Copy)]
pub struct SingleAtomParams {
    pub delta: f64,
    pub gamma: f64,
    pub k1: Complex64,
    pub k2: Complex64,
    pub alpha: Complex64,
}

impl SingleAtomParams {
    /// Γ = (|k₁|² + |k₂|²)/2, half the total waveguide emission rate.
    pub fn big_gamma(&self) -> f64 {
        (self.k1.norm_sqr() + self.k2.norm_sqr()) / 2.0
    }

    /// γ_c = (|k₁|² − |k₂|²)/2, the chirality rate.
    pub fn gamma_c(&self) -> f64 {
        (self.k1.norm_sqr() - self.k2.norm_sqr()) / 2.0
    }

    /// β = γ − γ_c; critical coupling needs β ≤ 0.
    pub fn beta(&self) -> f64 {
        self.gamma - self.gamma_c()
    }

    /// Input power p = |α|².
    pub fn power(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// Shared denominator D = Δ² + (Γ+γ)² + 2|k₁|²p.
    fn denom(&self) -> f64 {
        let g_tot = self.big_gamma() + self.gamma;
        self.delta * self.delta + g_tot * g_tot + 2.0 * self.k1.norm_sqr() * self.power()
    }
}

/// Amplitude transmission and reflection of the driven single atom:
/// t = 1 − (−iΔ+Γ+γ)|k₁|²/D, r = −(−iΔ+Γ+γ)k₁k₂*/D.
pub fn single_atom_amplitudes(p: &SingleAtomParams) -> (Complex64, Complex64) {
    let g_tot = Complex64::new(p.big_gamma() + p.gamma, -p.delta);
    let d = p.denom();
    let t = Complex64::new(1.0, 0.0) - g_tot * p.k1.norm_sqr() / d;
    let r = -g_tot * p.k1 * p.k2.conj() / d;
    (t, r)
}

/// Power transmission T, reflectivity R, the incoherent part T − |t|², and
/// the leakage 1 − T − R.
pub fn single_atom_powers(p: &SingleAtomParams) -> (f64, f64, f64, f64) {
    let d = p.denom();
    let beta = p.beta();
    let k1sq = p.k1.norm_sqr();
    let power = p.power();
    let big_t = (p.delta * p.delta + beta * beta + 2.0 * k1sq * power) / d;
    let big_r = k1sq * p.k2.norm_sqr() / d;
    let incoherent = 2.0 * k1sq.powi(3) * power / (d * d);
    let leakage = 2.0 * k1sq * p.gamma / d;
    (big_t, big_r, incoherent, leakage)
}

/// Drive power at which the coherent transmitted amplitude vanishes:
/// p = (Γ+γ)(γ_c−γ)/(2|k₁|²). Defined only on resonance with β ≤ 0.
pub fn critical_power(p: &SingleAtomParams) -> Option<f64> {
    if p.delta != 0.0 || p.beta() > 0.0 || p.k1.norm_sqr() == 0.0 {
        return None;
    }
    Some((p.big_gamma() + p.gamma) * (p.gamma_c() - p.gamma) / (2.0 * p.k1.norm_sqr()))
}

/// g²(0) of the transmitted field, (D − 4|k₁|²β)·D / (Δ² + β² + 2|k₁|²p)².
/// Grows without bound as β → 0 at the critical power; equals 1 for a
/// decoupled forward mode.
pub fn single_atom_g2_transmitted(p: &SingleAtomParams) -> Result<f64> {
    let d = p.denom();
    let beta = p.beta();
    let k1sq = p.k1.norm_sqr();
    let e = p.delta * p.delta + beta * beta + 2.0 * k1sq * p.power();
    if e == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((d - 4.0 * k1sq * beta) * d / (e * e))
}

/// Low-power limit of g²_R(0) for two atoms with antisymmetric detunings ±Δ
/// and no intrinsic damping. A p → 0 expansion: callers compare against
/// numerics at small p and expect a truncation-level mismatch.
pub fn two_atom_lowpower_g2_reflected(delta: f64, k1: Complex64, k2: Complex64) -> f64 {
    let a = k1.norm_sqr();
    let b = k2.norm_sqr();
    let num = b * b * (a * a + 6.0 * a * b + b * b + 4.0 * delta * delta).powi(2);
    let den = ((a + b).powi(3) + 4.0 * (a + b) * delta * delta).powi(2);
    num / den
}

/// Low-power limit of the two-atom reflectivity under the same configuration.
pub fn two_atom_lowpower_reflectivity(delta: f64, k1: Complex64, k2: Complex64) -> f64 {
    let a = k1.norm_sqr();
    let b = k2.norm_sqr();
    let num = 16.0 * a * b * (a * a + 2.0 * a * b + b * b + 4.0 * delta * delta);
    let den = (a * a + 6.0 * a * b + b * b + 4.0 * delta * delta).powi(2);
    num / den
}

/// Pure-state elements at the transparency point (antisymmetric detunings,
/// γ = 0, φ = nπ): for odd n the population of |s⟩ and the coherence ⟨s|ρ|g⟩;
/// for even n the same values appear as ρ_aa and ρ_ag.
///
/// pop = 8|k₁|²|α|²/D′, coh = 2√2 k₁α(|k₁|²−|k₂|²−2iΔ)/D′ with
/// D′ = (|k₁|²−|k₂|²)² + 8|k₁|²|α|² + 4Δ².
pub fn transparency_elements(
    delta: f64,
    k1: Complex64,
    k2: Complex64,
    alpha: Complex64,
) -> (f64, Complex64) {
    let a = k1.norm_sqr();
    let b = k2.norm_sqr();
    let p = alpha.norm_sqr();
    let d = (a - b) * (a - b) + 8.0 * a * p + 4.0 * delta * delta;
    let pop = 8.0 * a * p / d;
    let coh = k1 * alpha * Complex64::new(a - b, -2.0 * delta) * (2.0 * 2.0f64.sqrt() / d);
    (pop, coh)
}

/// Classical two-resonator power transmission for the structurally symmetric
/// configuration k_{a1} = k_{b2} = k_α, k_{b1} = k_{a2} = k_β, γ = 0; equal
/// in both directions:
/// |t|² = [Δ_a² + γ_c²][Δ_b² + γ_c²] / |Γ_{a→b}Γ_{b→a} − (iΔ_a+Γ)(iΔ_b+Γ)|²
/// with γ_c = (|k_α|²−|k_β|²)/2, Γ = (|k_α|²+|k_β|²)/2,
/// Γ_{a→b} = k_α*k_β e^{iφ}, Γ_{b→a} = k_β k_α* e^{iφ}.
pub fn classical_two_atom_transmission(
    delta_a: f64,
    delta_b: f64,
    k_alpha: Complex64,
    k_beta: Complex64,
    phi: f64,
) -> f64 {
    let gamma_c = (k_alpha.norm_sqr() - k_beta.norm_sqr()) / 2.0;
    let big_gamma = (k_alpha.norm_sqr() + k_beta.norm_sqr()) / 2.0;
    let num = (delta_a * delta_a + gamma_c * gamma_c) * (delta_b * delta_b + gamma_c * gamma_c);
    let g_ab = k_alpha.conj() * k_beta * Complex64::cis(phi);
    let g_ba = k_beta * k_alpha.conj() * Complex64::cis(phi);
    let den = (g_ab * g_ba
        - Complex64::new(big_gamma, delta_a) * Complex64::new(big_gamma, delta_b))
    .norm_sqr();
    num / den
}
