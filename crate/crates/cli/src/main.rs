use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod config;

#[derive(Parser)]
#[command(
    name = "dqwalk",
    version,
    about = "Continuous-time quantum walks on directed graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory that receives all artifacts.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// Seed for randomized verification trials.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one walk and write its CSV (and heatmap, if configured).
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run one walk per configured alpha, in parallel.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Certify the configured properties and write a report.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Turn a walk CSV into an ASCII graymap.
    Render {
        csv: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
        scale: ScaleArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let ctx = commands::Context {
        out_dir: cli.out_dir,
        seed: cli.seed,
    };
    let result = match cli.command {
        Command::Simulate { config } => commands::simulate(&ctx, &config),
        Command::Sweep { config } => commands::sweep(&ctx, &config),
        Command::Verify { config } => commands::verify(&ctx, &config),
        Command::Render { csv, output, scale } => {
            let scale = match scale {
                ScaleArg::Linear => dqwalk::render::Scale::Linear,
                ScaleArg::Log => dqwalk::render::Scale::Log,
            };
            commands::render(&ctx, &csv, &output, scale)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
