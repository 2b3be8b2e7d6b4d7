use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use contextuality::cli::commands::{exit_code, EXIT_INVALID_INPUT, EXIT_OK};
use contextuality::cli::{
    cmd_batch, cmd_figure_chain, cmd_measure, cmd_verify, emit_box, BoxSource, ChainSolver, ChainVariant, Format,
    Measure, MeasureOptions, Suite, WeightsSpec,
};

#[derive(Parser)]
#[command(name = "ctxq", version, about = "Contextuality measures of boxes on measurement hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 200_000)]
    max_iters: usize,
    /// uniform, optimize, or a file of context weights
    #[arg(long, default_value = "uniform")]
    weights: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reference xor-box for `beta` when the source has no family
    #[arg(long)]
    reference: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write zero wall times so output is reproducible byte for byte
    #[arg(long)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one measure on a box file or `builtin:NAME[:params]`
    Measure {
        source: String,
        #[arg(value_enum)]
        measure: MeasureArg,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Evaluate `SOURCE MEASURE` lines from a file
    Batch {
        file: PathBuf,
        #[arg(long, env = "CTXQ_WORKERS", default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// X_u of chain boxes as CSV
    FigureChain {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Max)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = SolverArg::Closedform)]
        solver: SolverArg,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Write a box as a box file
    Export { source: String, output: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Xu,
    Xmax,
    Cost,
    Beta,
    Consistency,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Plain,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Max,
    Quantum,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Closedform,
    Reduced,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Golden,
    Properties,
    Equivalence,
    Additivity,
}

impl SolveArgs {
    fn options(&self) -> contextuality::Result<MeasureOptions> {
        Ok(MeasureOptions {
            tol: self.tol,
            max_iters: self.max_iters,
            weights: self.weights.parse::<WeightsSpec>()?,
            seed: self.seed,
            reference: self.reference.clone(),
            format: match self.format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Plain => Format::Plain,
            },
            deterministic: self.deterministic,
        })
    }
}

fn run(cli: Cli) -> i32 {
    let stdout = io::stdout().lock();
    match cli.command {
        Command::Measure { source, measure, solve } => {
            let measure = match measure {
                MeasureArg::Xu => Measure::Xu,
                MeasureArg::Xmax => Measure::Xmax,
                MeasureArg::Cost => Measure::Cost,
                MeasureArg::Beta => Measure::Beta,
                MeasureArg::Consistency => Measure::Consistency,
            };
            match solve.options() {
                Ok(opts) => cmd_measure(stdout, &source, measure, &opts),
                Err(e) => fail(e),
            }
        }
        Command::Batch { file, workers, solve } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", file.display());
                    return EXIT_INVALID_INPUT;
                }
            };
            match solve.options() {
                Ok(opts) => cmd_batch(stdout, &text, &opts, workers),
                Err(e) => fail(e),
            }
        }
        Command::FigureChain { n_min, n_max, variant, solver } => {
            let variant = match variant {
                VariantArg::Max => ChainVariant::Max,
                VariantArg::Quantum => ChainVariant::Quantum,
                VariantArg::Both => ChainVariant::Both,
            };
            let solver = match solver {
                SolverArg::Closedform => ChainSolver::ClosedForm,
                SolverArg::Reduced => ChainSolver::Reduced,
                SolverArg::Both => ChainSolver::Both,
            };
            cmd_figure_chain(stdout, n_min, n_max, variant, solver)
        }
        Command::Verify { suite, seed, samples } => {
            let suite = match suite {
                SuiteArg::Golden => Suite::Golden,
                SuiteArg::Properties => Suite::Properties,
                SuiteArg::Equivalence => Suite::Equivalence,
                SuiteArg::Additivity => Suite::Additivity,
            };
            cmd_verify(stdout, suite, seed, samples)
        }
        Command::Export { source, output } => {
            match source.parse::<BoxSource>().and_then(|s| s.load()).and_then(|b| emit_box(&b, &output)) {
                Ok(()) => EXIT_OK,
                Err(e) => fail(e),
            }
        }
    }
}

fn fail(e: contextuality::Error) -> i32 {
    eprintln!("error: {e}");
    exit_code(&e)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    ExitCode::from(run(cli) as u8)
}
