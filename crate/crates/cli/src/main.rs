use std::process::ExitCode;

use blockfuse::Error;
use clap::Parser;

mod args;
mod commands;
mod output;

use args::{Cli, Command, Global};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 0 success, 1 I/O, 2 input contract, 3 degenerate statistics, 4 internal.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Io { .. }) => 1,
            CliError::Lib(
                Error::Parse { .. }
                | Error::Format(_)
                | Error::Argument(_)
                | Error::DimensionMismatch { .. }
                | Error::Divisibility { .. },
            ) => 2,
            CliError::Lib(Error::UndefinedMetric(_) | Error::Degenerate(_)) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

fn check_global(g: &Global) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&g.omega) {
        return Err(Error::Argument(format!("--omega {} outside [0, 1]", g.omega)).into());
    }
    if !(g.alpha > 0.0 && g.alpha < 1.0) {
        return Err(Error::Argument(format!("--alpha {} outside (0, 1)", g.alpha)).into());
    }
    if g.blocks.is_empty() || g.blocks.contains(&0) {
        return Err(Error::Argument("--blocks must list positive sizes".into()).into());
    }
    if let Some(n) = g.threads {
        if n == 0 {
            return Err(Error::Argument("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    check_global(g)?;
    match &cli.command {
        Command::Metrics { gt, pred, out } => commands::metrics(g, gt, pred, out.as_deref()),
        Command::Fuse {
            gt,
            candidates,
            block,
            out,
            winners,
            winner_pgm,
            depth,
        } => commands::fuse(
            g,
            commands::FuseArgs {
                gt,
                candidates,
                block: *block,
                out,
                winners,
                winner_pgm: winner_pgm.as_deref(),
                depth: depth
                    .as_deref()
                    .map(|d| d.parse().expect("clap restricts depth to 8 or 16")),
            },
        ),
        Command::Sweep {
            gt,
            candidates,
            dataset,
            out,
        } => commands::sweep(
            g,
            gt.as_deref(),
            candidates,
            dataset.as_deref(),
            out.as_deref(),
        ),
        Command::ClassifyEval {
            scores,
            threshold,
            out,
        } => commands::classify_eval(g, scores, *threshold, out.as_deref()),
        Command::Stats { groups, out } => commands::stats(g, groups, out.as_deref()),
        Command::Synth {
            seed,
            n,
            width,
            height,
            out_dir,
            items,
        } => commands::synth(commands::SynthArgs {
            seed: *seed,
            n: *n,
            width: *width,
            height: *height,
            out_dir,
            items: *items,
        }),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on malformed arguments, which matches the
    // input-contract code.
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(cli)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(CliError::Internal(msg))
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
