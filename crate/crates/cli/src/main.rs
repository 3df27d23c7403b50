use clap::{Parser, Subcommand};
use cuelab_cli::commands::{self, HybridCommand, Run, ZetaCommand};
use cuelab_cli::record::{emit, Format};
use cuelab_cli::selftest::{self, SelftestOptions};
use cuelab_cli::{exit, exit_code};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cuelab", version, about = "Moments of characteristic-polynomial derivatives and zeta at its zeros")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo, exact and leading-order mixed moments at eigenvalues.
    Rmt(commands::RmtArgs),
    #[command(subcommand)]
    Hybrid(HybridCommand),
    #[command(subcommand)]
    Zeta(ZetaCommand),
    /// Runs the acceptance suite and writes one row per check.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Zeros file with at least 10⁵ ordinates; generated when absent.
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn finish(run: Run, out: Option<&std::path::Path>) -> anyhow::Result<i32> {
    emit(&run.table.render(&run.config), out)?;
    Ok(match run.failure {
        Some(f) => {
            eprintln!("{f}");
            exit::ACCURACY
        }
        None => exit::OK,
    })
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Rmt(a) => finish(commands::cmd_rmt(&a)?, a.output.out.as_deref()),
        Command::Hybrid(HybridCommand::Smcheck(a)) => finish(commands::cmd_smcheck(&a)?, a.output.out.as_deref()),
        Command::Hybrid(HybridCommand::T13(a)) => finish(commands::cmd_t13(&a)?, a.output.out.as_deref()),
        Command::Zeta(ZetaCommand::Moments(a)) => finish(commands::cmd_moments(&a)?, a.output.out.as_deref()),
        Command::Zeta(ZetaCommand::Landau(a)) => finish(commands::cmd_landau(&a)?, a.output.out.as_deref()),
        Command::Zeta(ZetaCommand::Px(a)) => finish(commands::cmd_px(&a)?, a.output.out.as_deref()),
        Command::Zeta(ZetaCommand::GenZeros(a)) => commands::cmd_gen_zeros(&a).map(|_| exit::OK),
        Command::Selftest { seed, zeros, format, out } => {
            let opts = SelftestOptions { seed, zeros, format };
            let run = selftest::run(&opts, |s| eprintln!("{}", s.line()))?;
            emit(&run.table.render(&run.config), out.as_deref())?;
            Ok(if run.all_pass() { exit::OK } else { exit::ACCURACY })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
