//! Scenario files: a TOML description of one emitter chain plus its drive.
//!
//! Complex quantities are written as two-element arrays `[re, im]`. Couplings
//! accept a shorthand: `k1_sq = 1.2` means a real coupling of `sqrt(1.2)`,
//! with negative values mapping to `-sqrt(|x|)`. Exactly one of `k1`/`k1_sq`
//! must be present per atom (same for `k2`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Drive, Emitter, EmitterChain};

/// Chains longer than this produce configs we refuse to run: the density
/// matrix solve is dense in 4^N and becomes useless past four atoms.
pub const MAX_ATOMS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Free-form label for the rate unit (documentation only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub atoms: Vec<AtomConfig>,
    #[serde(default)]
    pub drive: DriveConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1_sq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2_sq: Option<f64>,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    #[serde(default)]
    pub forward: [f64; 2],
    #[serde(default)]
    pub backward: [f64; 2],
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Builds the physical chain and drive, reporting the offending field on
    /// failure. No drive at all is allowed here (zero input is a valid
    /// steady-state problem); driving both ports at once is allowed too,
    /// since only the port-resolved observables need a single port.
    pub fn build(&self) -> Result<(EmitterChain, Drive)> {
        if self.atoms.len() > MAX_ATOMS {
            return Err(Error::Config(format!(
                "atoms: got {}, the dense solver is capped at {MAX_ATOMS}",
                self.atoms.len()
            )));
        }
        let mut emitters = Vec::with_capacity(self.atoms.len());
        for (i, atom) in self.atoms.iter().enumerate() {
            let k1 = resolve_coupling(i, "k1", atom.k1, atom.k1_sq)?;
            let k2 = resolve_coupling(i, "k2", atom.k2, atom.k2_sq)?;
            emitters.push(Emitter {
                delta: atom.delta,
                gamma: atom.gamma,
                k1,
                k2,
                phi: atom.phi,
            });
        }
        let chain = EmitterChain::new(emitters)?;
        let drive = Drive {
            forward: Complex64::new(self.drive.forward[0], self.drive.forward[1]),
            backward: Complex64::new(self.drive.backward[0], self.drive.backward[1]),
        };
        Ok((chain, drive))
    }
}

fn resolve_coupling(
    atom: usize,
    name: &str,
    direct: Option<[f64; 2]>,
    squared: Option<f64>,
) -> Result<Complex64> {
    match (direct, squared) {
        (Some([re, im]), None) => Ok(Complex64::new(re, im)),
        (None, Some(x)) => Ok(Complex64::new(x.signum() * x.abs().sqrt(), 0.0)),
        (Some(_), Some(_)) => Err(Error::Config(format!(
            "atoms[{atom}]: give {name} or {name}_sq, not both"
        ))),
        (None, None) => Err(Error::Config(format!(
            "atoms[{atom}]: missing {name} (or {name}_sq)"
        ))),
    }
}
