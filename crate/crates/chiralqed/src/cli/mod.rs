//! Command implementations behind the binary's subcommands. Everything here
//! returns [`Error`] values; the binary maps them to exit codes (bad inputs
//! 2, failures while solving 3, validation failures 4).

pub mod config;
pub mod figures;
pub mod sweep;
pub mod validate;

use num_complex::Complex64;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::EmitterChain;
use config::ScenarioConfig;
use sweep::{format_float, DriveDirection, Scale, SweepParameter, SweepSpec};

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::InvalidChain(_)
        | Error::AmbiguousDrive
        | Error::WrongSystemSize(_) => 2,
        _ => 3,
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn chain_header(chain: &EmitterChain) -> Vec<String> {
    chain
        .emitters()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            format!(
                "atom {i}: delta = {}, gamma = {}, k1 = {}, k2 = {}, phi = {}",
                format_float(e.delta),
                format_float(e.gamma),
                fmt_complex(e.k1),
                fmt_complex(e.k2),
                format_float(e.phi)
            )
        })
        .collect()
}

/// Solves one scenario and prints a labeled record of every statistic.
pub fn run_steady(config_path: &Path, out: &mut dyn Write) -> Result<()> {
    let cfg = ScenarioConfig::load(config_path)?;
    let (chain, drive) = cfg.build()?;
    for w in chain.warnings() {
        eprintln!("warning: {w}");
    }
    let (stats, path) = sweep::steady_point(&chain, &drive)?;
    let p = drive.forward.norm_sqr() + drive.backward.norm_sqr();
    writeln!(out, "atoms: {}", chain.n_atoms())?;
    writeln!(out, "p: {}", format_float(p))?;
    writeln!(out, "path: {path}")?;
    for (label, v) in [
        ("t_re", stats.t.re),
        ("t_im", stats.t.im),
        ("r_re", stats.r.re),
        ("r_im", stats.r.im),
        ("T", stats.big_t),
        ("R", stats.big_r),
        ("I_c_T", stats.i_c_t),
        ("I_inc_T", stats.i_inc_t),
        ("I_c_R", stats.i_c_r),
        ("I_inc_R", stats.i_inc_r),
    ] {
        writeln!(out, "{label}: {}", format_float(v))?;
    }
    for (label, v) in [("g2_T", stats.g2_t), ("g2_R", stats.g2_r)] {
        match v {
            Some(v) => writeln!(out, "{label}: {}", format_float(v))?,
            None => writeln!(out, "{label}: undefined")?,
        }
    }
    writeln!(out, "purity: {}", format_float(stats.purity))?;
    writeln!(out, "leakage: {}", format_float(stats.leakage))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn run_sweep_cmd(
    config_path: &Path,
    param: &str,
    from: f64,
    to: f64,
    steps: usize,
    log: bool,
    drive: Option<&str>,
    out_path: &Path,
) -> Result<()> {
    let cfg = ScenarioConfig::load(config_path)?;
    let parameter: SweepParameter = param.parse()?;
    let direction: Option<DriveDirection> = drive.map(str::parse).transpose()?;
    let spec = SweepSpec {
        parameter,
        from,
        to,
        steps,
        scale: if log { Scale::Log } else { Scale::Linear },
    };

    let (chain, configured_drive) = cfg.build()?;
    for w in chain.warnings() {
        eprintln!("warning: {w}");
    }
    let rows = sweep::run_sweep(&cfg, &spec, direction)?;

    let (dir, amp) = sweep::resolve_drive(&configured_drive, direction)?;
    let mut header = vec![format!(
        "sweep: {parameter}, {steps} {} points from {} to {}",
        if log { "log" } else { "linear" },
        format_float(from),
        format_float(to)
    )];
    let port = match dir {
        DriveDirection::Forward => "forward",
        DriveDirection::Backward => "backward",
    };
    if parameter == SweepParameter::Power {
        header.push(format!("drive: {port}, amplitude = sqrt(x)"));
    } else {
        header.push(format!("drive: {port}, amplitude = {}", fmt_complex(amp)));
    }
    header.extend(chain_header(&chain));

    let mut w = BufWriter::new(File::create(out_path)?);
    sweep::write_csv(&mut w, &parameter.to_string(), &header, &rows)?;
    w.flush()?;
    Ok(())
}

pub fn run_figure_cmd(id: &str, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    let paths = figures::run_figure(id, out_dir)?;
    for p in paths {
        writeln!(out, "wrote {}", p.display())?;
    }
    Ok(())
}

/// Runs every self-check; returns whether all passed.
pub fn run_validate(out: &mut dyn Write) -> Result<bool> {
    let results = validate::run_all_checks();
    let mut all = true;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {}: {}", r.name, r.detail)?;
        all &= r.passed;
    }
    let n_ok = results.iter().filter(|r| r.passed).count();
    writeln!(out, "{n_ok}/{} checks passed", results.len())?;
    Ok(all)
}
