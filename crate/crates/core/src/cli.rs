//! The `cc4` command-line tool.
//!
//! Exit codes: 0 on success, 1 on runtime or I/O failure, 2 on usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::encoding::{BitVector, SpreadUnaryCodec, UnaryCodec};
use crate::error::Error;
use crate::network::{CC4Network, TieBreaker, TiePolicy, TrainingSample};
use crate::oracle::oracle_classify;
use crate::pattern::{
    encode_point, run_experiment_with, sample_training_points, Engine, ExperimentConfig,
    GridPattern, SampleSize, Sampling, Scheme, TrainingMask,
};

#[derive(Debug, Parser)]
#[command(
    name = "cc4",
    version,
    about = "Instantly trained corner-classification networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the code string of a value
    Encode(EncodeArgs),
    /// Train a network on a pattern and write the model file
    Train(TrainArgs),
    /// Classify one input with a saved model
    Classify(ClassifyArgs),
    /// Run a radius sweep over a pattern
    Experiment(ExperimentArgs),
    /// Print a pattern or mask file in canonical form
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeKind {
    Unary,
    Spread,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieKind {
    Zero,
    One,
    Random,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    #[arg(long, value_enum, default_value = "unary")]
    scheme: SchemeKind,
    /// Bits per coordinate [default: 16 for unary, 16 + k - 1 for spread]
    #[arg(long)]
    width: Option<usize>,
    /// Run length of ones in spread-unary code
    #[arg(long, default_value_t = 3)]
    k: usize,
}

impl SchemeArgs {
    fn scheme(&self) -> Scheme {
        match self.scheme {
            SchemeKind::Unary => Scheme::Unary {
                width: self.width.unwrap_or(16),
            },
            SchemeKind::Spread => Scheme::Spread {
                k: self.k,
                width: self.width.unwrap_or(16 + self.k.saturating_sub(1)),
            },
        }
    }
}

#[derive(Debug, Args)]
struct TrainingSetArgs {
    /// Pattern file (`#`/`o` rows) [default: bundled 11x16 spiral]
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Mask file of learnt points (`#`, `o`, `.`)
    #[arg(long, conflicts_with = "sample_count")]
    mask: Option<PathBuf>,
    /// Draw this many training points at random (requires --seed)
    #[arg(long)]
    sample_count: Option<usize>,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Largest spread-unary value [default: width - k + 1]
    #[arg(long)]
    max_value: Option<usize>,
    #[arg(long)]
    value: usize,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    set: TrainingSetArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    radius: u32,
    #[arg(long, value_enum, default_value = "zero")]
    tie_policy: TieKind,
    /// Seed for point sampling and random tie-breaking
    #[arg(long)]
    seed: Option<u64>,
    /// Model file to write
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, requires = "col", conflicts_with = "input")]
    row: Option<usize>,
    #[arg(long, requires = "row")]
    col: Option<usize>,
    /// Raw input bits, leftmost most significant
    #[arg(long, required_unless_present = "row")]
    input: Option<String>,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Cross-check against the brute-force classifier on the training set
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    set: TrainingSetArgs,
    /// Seed used when sampling the training set
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[command(flatten)]
    set: TrainingSetArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Comma-separated radii
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    radii: Vec<u32>,
    #[arg(long, value_enum, default_value = "zero")]
    tie_policy: TieKind,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for maps, CSV and JSON report
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Also run the brute-force classifier and compare
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(long, conflicts_with = "mask")]
    pattern: Option<PathBuf>,
    #[arg(long)]
    mask: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl ToString) -> Failure {
    Failure::Runtime(e.to_string())
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| runtime(format!("{}: {e}", path.display()))
}

fn tie_policy(kind: TieKind, seed: Option<u64>) -> CliResult<TiePolicy> {
    match (kind, seed) {
        (TieKind::Zero, _) => Ok(TiePolicy::Zero),
        (TieKind::One, _) => Ok(TiePolicy::One),
        (TieKind::Random, Some(seed)) => Ok(TiePolicy::SeededRandom(seed)),
        (TieKind::Random, None) => Err(usage("--tie-policy random requires --seed")),
    }
}

impl TrainingSetArgs {
    fn pattern(&self) -> CliResult<GridPattern> {
        match &self.pattern {
            Some(path) => GridPattern::parse(&read_file(path)?).map_err(in_file(path)),
            None => Ok(GridPattern::spiral()),
        }
    }

    fn sampling(&self, seed: Option<u64>) -> CliResult<Sampling> {
        match (&self.mask, self.sample_count, seed) {
            (Some(path), _, _) => Ok(Sampling::Mask(
                TrainingMask::parse(&read_file(path)?).map_err(in_file(path))?,
            )),
            (None, Some(count), Some(seed)) => Ok(Sampling::Random {
                size: SampleSize::Count(count),
                seed,
            }),
            (None, Some(_), None) => Err(usage("--sample-count requires --seed")),
            (None, None, _) => Err(usage("one of --mask or --sample-count is required")),
        }
    }

    /// Pattern, mask and the encoded training samples.
    fn samples(
        &self,
        scheme: &Scheme,
        seed: Option<u64>,
    ) -> CliResult<(GridPattern, TrainingMask, Vec<TrainingSample>)> {
        let pattern = self.pattern()?;
        let mask = match self.sampling(seed)? {
            Sampling::Mask(mask) => {
                mask.check_against(&pattern).map_err(usage)?;
                mask
            }
            Sampling::Random {
                size: SampleSize::Count(n),
                seed,
            } => sample_training_points(&pattern, n, seed).map_err(usage)?,
            Sampling::Random { .. } => unreachable!("the CLI only samples by count"),
        };
        let samples = mask
            .entries()
            .map(|(r, c, label)| {
                Ok(TrainingSample::new(
                    encode_point(r + 1, c + 1, scheme).map_err(usage)?,
                    BitVector::from_lsb_bits([label]),
                ))
            })
            .collect::<CliResult<Vec<_>>>()?;
        if samples.is_empty() {
            return Err(usage("training mask is empty"));
        }
        Ok((pattern, mask, samples))
    }
}

fn cmd_encode(args: EncodeArgs, out: &mut dyn Write) -> CliResult<()> {
    let code = match args.scheme.scheme() {
        Scheme::Unary { width } => UnaryCodec::new(width)
            .and_then(|c| c.encode(args.value))
            .map_err(usage)?,
        Scheme::Spread { k, width } => {
            let max_value = args.max_value.unwrap_or((width + 1).saturating_sub(k));
            SpreadUnaryCodec::with_width(k, max_value, width)
                .and_then(|c| c.encode(args.value))
                .map_err(usage)?
        }
    };
    writeln!(out, "{code}").map_err(runtime)
}

fn cmd_train(args: TrainArgs, out: &mut dyn Write) -> CliResult<()> {
    let scheme = args.scheme.scheme();
    scheme.validate().map_err(usage)?;
    let policy = tie_policy(args.tie_policy, args.seed)?;
    let (_, _, samples) = args.set.samples(&scheme, args.seed)?;
    let start = Instant::now();
    let network = CC4Network::train(&samples, args.radius, policy).map_err(usage)?;
    let elapsed = start.elapsed();
    write_file(&args.out, &network.to_json())?;
    writeln!(
        out,
        "trained {} hidden units ({} input bits, radius {}) in {:.1} µs",
        network.hidden_units().len(),
        network.input_width(),
        network.radius(),
        elapsed.as_secs_f64() * 1e6
    )
    .map_err(runtime)?;
    writeln!(out, "model written to {}", args.out.display()).map_err(runtime)
}

fn cmd_classify(args: ClassifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let network = CC4Network::from_json(&read_file(&args.model)?).map_err(in_file(&args.model))?;
    let scheme = args.scheme.scheme();
    let input = match (&args.input, args.row, args.col) {
        (Some(bits), _, _) => bits.parse::<BitVector>().map_err(usage)?,
        (None, Some(row), Some(col)) => encode_point(row, col, &scheme).map_err(usage)?,
        _ => return Err(usage("either --input or --row with --col is required")),
    };
    if input.len() != network.input_width() {
        return Err(usage(format!(
            "input has {} bits, model expects {}",
            input.len(),
            network.input_width()
        )));
    }
    let predicted = network.classify(&input).map_err(usage)?;
    writeln!(out, "{predicted}").map_err(runtime)?;

    if args.oracle {
        let (_, _, samples) = args.set.samples(&scheme, args.seed)?;
        let mut ties = TieBreaker::new(network.tie_policy());
        let expected =
            oracle_classify(&samples, network.radius(), &input, &mut ties).map_err(usage)?;
        let verdict = if expected == predicted {
            "MATCH"
        } else {
            "MISMATCH"
        };
        writeln!(out, "oracle {expected} {verdict}").map_err(runtime)?;
    }
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs, out: &mut dyn Write) -> CliResult<()> {
    let config = ExperimentConfig {
        pattern: args.set.pattern()?,
        scheme: args.scheme.scheme(),
        radii: args.radii.clone(),
        sampling: args.set.sampling(args.seed)?,
        tie_policy: tie_policy(args.tie_policy, args.seed)?,
    };
    let result = run_experiment_with(&config, Engine::Network).map_err(usage)?;
    write!(out, "{}", result.table()).map_err(runtime)?;

    if args.oracle {
        let reference = run_experiment_with(&config, Engine::Oracle).map_err(usage)?;
        let verdict = if reference.runs == result.runs {
            "MATCH"
        } else {
            "MISMATCH"
        };
        writeln!(out, "oracle {verdict}").map_err(runtime)?;
    }

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))?;
        for run in &result.runs {
            write_file(
                &dir.join(format!("map_r{}.txt", run.radius)),
                &run.predicted.render(),
            )?;
        }
        write_file(&dir.join("mask.txt"), &result.mask.render())?;
        write_file(&dir.join("counts.csv"), &result.to_csv())?;
        write_file(&dir.join("report.json"), &result.to_json())?;
        writeln!(out, "report written to {}", dir.display()).map_err(runtime)?;
    }
    Ok(())
}

fn cmd_render(args: RenderArgs, out: &mut dyn Write) -> CliResult<()> {
    let text = match (&args.pattern, &args.mask) {
        (Some(path), _) => GridPattern::parse(&read_file(path)?)
            .map_err(in_file(path))?
            .render(),
        (None, Some(path)) => TrainingMask::parse(&read_file(path)?)
            .map_err(in_file(path))?
            .render(),
        (None, None) => GridPattern::spiral().render(),
    };
    write!(out, "{text}").map_err(runtime)
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Encode(a) => cmd_encode(a, out),
        Command::Train(a) => cmd_train(a, out),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Experiment(a) => cmd_experiment(a, out),
        Command::Render(a) => cmd_render(a, out),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
