//! One-dimensional parameter sweeps over steady-state statistics.
//!
//! Points are independent steady-state solves, so they run in parallel; the
//! output order always follows the grid. Set `CHIRALQED_THREADS` to pin the
//! worker count. A point that fails to solve keeps its row, with the
//! statistics columns empty and the error text in the `diagnostic` column.

use num_complex::Complex64;
use rayon::prelude::*;
use std::io::Write;
use std::str::FromStr;

use crate::cli::config::ScenarioConfig;
use crate::dynamics::{assemble_liouvillian, solve_steady, SolvePath};
use crate::error::{Error, Result};
use crate::hilbert::c;
use crate::model::{Drive, Emitter, EmitterChain};
use crate::observables::{compute_stats, OutputStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Input power p = |ε_in|²; the driven amplitude becomes √x (real).
    Power,
    /// Total propagation phase x spread linearly over the chain:
    /// φ_i = x·i/(N−1). Needs at least two atoms.
    Phase,
    /// Common detuning: every Δ_i = x.
    DeltaCommon,
    /// Opposite detunings Δ = (x, −x). Two atoms only.
    DeltaAntisym,
    /// Common intrinsic damping: every γ_i = x.
    GammaCommon,
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(Self::Power),
            "phase" => Ok(Self::Phase),
            "delta_common" => Ok(Self::DeltaCommon),
            "delta_antisym" => Ok(Self::DeltaAntisym),
            "gamma_common" => Ok(Self::GammaCommon),
            other => Err(Error::Config(format!(
                "unknown sweep parameter '{other}' (expected power, phase, \
                 delta_common, delta_antisym or gamma_common)"
            ))),
        }
    }
}

impl std::fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::Power => "power",
            Self::Phase => "phase",
            Self::DeltaCommon => "delta_common",
            Self::DeltaAntisym => "delta_antisym",
            Self::GammaCommon => "gamma_common",
        };
        write!(f, "{name}")
    }
}

impl SweepParameter {
    /// Copies the base emitters with the swept value written in. Power is
    /// applied through the drive amplitude instead, so it leaves the chain
    /// untouched.
    fn apply(&self, base: &[Emitter], x: f64) -> Vec<Emitter> {
        let mut emitters = base.to_vec();
        match self {
            Self::Power => {}
            Self::Phase => {
                let n = emitters.len();
                for (i, e) in emitters.iter_mut().enumerate() {
                    e.phi = x * i as f64 / (n - 1) as f64;
                }
            }
            Self::DeltaCommon => {
                for e in &mut emitters {
                    e.delta = x;
                }
            }
            Self::DeltaAntisym => {
                emitters[0].delta = x;
                emitters[1].delta = -x;
            }
            Self::GammaCommon => {
                for e in &mut emitters {
                    e.gamma = x;
                }
            }
        }
        emitters
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Config("sweep needs at least 2 steps".into()));
        }
        if !(self.from < self.to) {
            return Err(Error::Config(format!(
                "sweep range is empty: from {} to {}",
                self.from, self.to
            )));
        }
        if self.scale == Scale::Log && self.from <= 0.0 {
            return Err(Error::Config("log sweeps need from > 0".into()));
        }
        if self.parameter == SweepParameter::Power && self.from < 0.0 {
            return Err(Error::Config("power cannot be negative".into()));
        }
        Ok(())
    }

    /// Grid of `steps` points including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.from + (self.to - self.from) * f,
                    Scale::Log => self.from * (self.to / self.from).powf(f),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveDirection {
    Forward,
    Backward,
}

impl FromStr for DriveDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Self::Forward),
            "backward" => Ok(Self::Backward),
            other => Err(Error::Config(format!(
                "unknown drive direction '{other}' (expected forward or backward)"
            ))),
        }
    }
}

/// Picks the driven port and its amplitude from the configured drive,
/// optionally overridden to the given direction (the amplitude moves with
/// it). Both ports active is ambiguous here because sweep statistics are
/// port-resolved.
pub fn resolve_drive(
    drive: &Drive,
    direction: Option<DriveDirection>,
) -> Result<(DriveDirection, Complex64)> {
    let fwd = drive.forward.norm_sqr() > 0.0;
    let bwd = drive.backward.norm_sqr() > 0.0;
    if fwd && bwd {
        return Err(Error::AmbiguousDrive);
    }
    let (configured, amp) = if bwd {
        (DriveDirection::Backward, drive.backward)
    } else {
        (DriveDirection::Forward, drive.forward)
    };
    Ok((direction.unwrap_or(configured), amp))
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub x: f64,
    pub stats: Option<OutputStats>,
    pub path: Option<SolvePath>,
    pub diagnostic: Option<String>,
}

/// Steady state plus its statistics for one chain and drive.
pub fn steady_point(chain: &EmitterChain, drive: &Drive) -> Result<(OutputStats, SolvePath)> {
    let liouvillian = assemble_liouvillian(chain, drive);
    let solution = solve_steady(&liouvillian)?;
    let stats = compute_stats(chain, drive, &solution.rho)?;
    Ok((stats, solution.path))
}

pub fn run_sweep(
    config: &ScenarioConfig,
    spec: &SweepSpec,
    direction: Option<DriveDirection>,
) -> Result<Vec<SweepRow>> {
    let (chain, drive) = config.build()?;
    let (dir, base_amp) = resolve_drive(&drive, direction)?;
    sweep_emitters(chain.emitters(), base_amp, dir, spec)
}

/// Sweep over an explicit emitter list; shared by config-driven sweeps and
/// the baked-in figure reproductions. `base_amp` feeds the driven port,
/// except in power sweeps where the amplitude is √x.
pub fn sweep_emitters(
    base: &[Emitter],
    base_amp: Complex64,
    dir: DriveDirection,
    spec: &SweepSpec,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let n = base.len();
    if spec.parameter == SweepParameter::Phase && n < 2 {
        return Err(Error::Config("phase sweeps need at least 2 atoms".into()));
    }
    if spec.parameter == SweepParameter::DeltaAntisym && n != 2 {
        return Err(Error::Config("delta_antisym sweeps need exactly 2 atoms".into()));
    }

    let base = base.to_vec();
    let point = |x: f64| -> Result<(OutputStats, SolvePath)> {
        let chain = EmitterChain::new(spec.parameter.apply(&base, x))?;
        let amp = match spec.parameter {
            SweepParameter::Power => c(x.sqrt(), 0.0),
            _ => base_amp,
        };
        let drive = match dir {
            DriveDirection::Forward => Drive::forward_only(amp),
            DriveDirection::Backward => Drive::backward_only(amp),
        };
        steady_point(&chain, &drive)
    };
    let to_row = |&x: &f64| match point(x) {
        Ok((stats, path)) => SweepRow { x, stats: Some(stats), path: Some(path), diagnostic: None },
        Err(e) => SweepRow { x, stats: None, path: None, diagnostic: Some(e.to_string()) },
    };

    let grid = spec.grid();
    let rows = match thread_pool() {
        Some(pool) => pool.install(|| grid.par_iter().map(to_row).collect()),
        None => grid.par_iter().map(to_row).collect(),
    };
    Ok(rows)
}

fn thread_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var("CHIRALQED_THREADS").ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()
}

/// Shortest decimal form that reparses to the same f64.
pub fn format_float(x: f64) -> String {
    format!("{x}")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const STATS_COLUMNS: &str =
    "path,t_re,t_im,r_re,r_im,T,R,I_c_T,I_inc_T,I_c_R,I_inc_R,g2_T,g2_R,purity,leakage,diagnostic";

/// Writes rows as CSV: `# `-prefixed header lines, a column-name line, then
/// one line per grid point. Optional-and-absent values stay empty cells.
pub fn write_csv<W: Write>(
    w: &mut W,
    param_name: &str,
    header: &[String],
    rows: &[SweepRow],
) -> std::io::Result<()> {
    for line in header {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "{param_name},{STATS_COLUMNS}")?;
    for row in rows {
        writeln!(w, "{}", row_cells(row).join(","))?;
    }
    Ok(())
}

fn row_cells(row: &SweepRow) -> Vec<String> {
    let mut cells = vec![format_float(row.x)];
    match (&row.stats, row.path) {
        (Some(s), Some(path)) => {
            cells.push(path.to_string());
            for v in [s.t.re, s.t.im, s.r.re, s.r.im, s.big_t, s.big_r, s.i_c_t, s.i_inc_t, s.i_c_r, s.i_inc_r] {
                cells.push(format_float(v));
            }
            cells.push(s.g2_t.map(format_float).unwrap_or_default());
            cells.push(s.g2_r.map(format_float).unwrap_or_default());
            cells.push(format_float(s.purity));
            cells.push(format_float(s.leakage));
            cells.push(String::new());
        }
        _ => {
            cells.extend(std::iter::repeat(String::new()).take(15));
            cells.push(csv_field(row.diagnostic.as_deref().unwrap_or("")));
        }
    }
    cells
}
