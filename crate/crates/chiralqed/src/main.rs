use clap::{Parser, Subcommand};
use std::path::PathBuf;

use chiralqed::cli;

#[derive(Parser)]
#[command(
    name = "chiralqed",
    about = "Steady states and output-field statistics of two-level emitters chirally coupled to a waveguide"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and print its output statistics.
    Steady {
        #[arg(long)]
        config: PathBuf,
    },
    /// Sweep a parameter and write a CSV of statistics per grid point.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// power, phase, delta_common, delta_antisym or gamma_common.
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Log-spaced grid instead of linear.
        #[arg(long)]
        log: bool,
        /// Override the driven port: forward or backward.
        #[arg(long)]
        drive: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the data files for one baked-in reproduction figure.
    Figure {
        /// One of fig2a, fig2b, fig3, fig4, fig5a, fig5b, fig5c, fig6a, fig6b, fig7a, fig7b.
        id: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full self-check suite.
    Validate,
}

fn run(cli: Cli) -> chiralqed::Result<i32> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Steady { config } => {
            cli::run_steady(&config, &mut stdout)?;
            Ok(0)
        }
        Command::Sweep { config, param, from, to, steps, log, drive, out } => {
            cli::run_sweep_cmd(&config, &param, from, to, steps, log, drive.as_deref(), &out)?;
            Ok(0)
        }
        Command::Figure { id, out } => {
            cli::run_figure_cmd(&id, &out, &mut stdout)?;
            Ok(0)
        }
        Command::Validate => {
            let all_passed = cli::run_validate(&mut stdout)?;
            Ok(if all_passed { 0 } else { 4 })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            cli::exit_code(&e)
        }
    };
    std::process::exit(code);
}
