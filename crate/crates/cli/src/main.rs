use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use log::error;

use lochom::parallel::available_workers;
use lochom::pipeline::{
    run_sweep, EpsilonGrid, LinkTarget, SweepConfig, SweepParams, VectorFormat,
};
use lochom::{Error, PrimeField};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    #[value(name = "word2vec-bin")]
    Word2VecBin,
}

/// Sweep ε over a word-embedding cloud on the unit sphere, computing the
/// local homology of every word and edge of the Vietoris–Rips complex and
/// clustering words along local-homology-preserving paths.
#[derive(Debug, Parser)]
#[command(name = "lochom", version)]
struct Args {
    /// Word vectors file.
    #[arg(long, value_name = "PATH")]
    input: PathBuf,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Word list: one token per line, '#' comments and blank lines ignored.
    #[arg(long, value_name = "PATH")]
    words: PathBuf,

    /// First ε of the grid, in degrees.
    #[arg(long, value_name = "DEG")]
    eps_start: f64,

    /// Last ε of the grid (inclusive); defaults to --eps-start.
    #[arg(long, value_name = "DEG")]
    eps_end: Option<f64>,

    #[arg(long, value_name = "DEG", default_value_t = 1.0)]
    eps_step: f64,

    /// Highest degree of local homology to compute.
    #[arg(long, value_name = "N", default_value_t = 4)]
    max_degree: usize,

    /// Prime modulus of the coefficient field.
    #[arg(long = "mod", value_name = "P", default_value_t = 2)]
    modulus: u32,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Export the link graph of WORD at DEG degrees (repeatable).
    #[arg(long = "export-link", value_name = "WORD:DEG")]
    export_link: Vec<String>,

    /// Drop words missing from the embedding instead of failing.
    #[arg(long)]
    skip_missing: bool,
}

fn config(args: Args) -> Result<SweepConfig, Error> {
    let grid = EpsilonGrid::new(
        args.eps_start,
        args.eps_end.unwrap_or(args.eps_start),
        args.eps_step,
    )?;
    let workers = args.workers.unwrap_or_else(available_workers);
    if workers == 0 {
        return Err(Error::Config("--workers must be at least 1".into()));
    }
    let link_exports = args
        .export_link
        .iter()
        .map(|s| s.parse::<LinkTarget>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepConfig {
        input: args.input,
        format: match args.format {
            Format::Text => VectorFormat::Text,
            Format::Word2VecBin => VectorFormat::Word2VecBinary,
        },
        words: args.words,
        out_dir: args.out,
        skip_missing: args.skip_missing,
        params: SweepParams {
            grid,
            max_degree: args.max_degree,
            field: PrimeField::new(args.modulus)?,
            workers,
            link_exports,
        },
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();

    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = config(args).and_then(|c| run_sweep(&c));
    match result {
        Ok(summary) => {
            log::info!(
                "done: {} ε values, {} words, {:.1} ms",
                summary.runs.len(),
                summary.words,
                summary.total_ms
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            error!("{e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
