use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ftsynth::analysis::{
    check_equivalence, minimal_cut_sets, EquivalenceOptions, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use ftsynth::depgraph::{dependencies_to_dot, dependencies_to_json, redundancy_to_json};
use ftsynth::kg::serialize_turtle_string;
use ftsynth::ontology::{ValidationReport, Vocabulary, DEFAULT_NAMESPACE, NAMESPACE_ENV};
use ftsynth::pipeline::{self, Model, PipelineError, Synthesis};
use ftsynth::synthesis::{
    to_dot, to_galileo, to_json, SynthesisError, SynthesisOptions, DEFAULT_PROBABILITY,
};

const EXIT_IO: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_COUNTEREXAMPLE: u8 = 3;
const EXIT_CYCLE: u8 = 4;
const EXIT_USAGE: u8 = 5;

/// Synthesize fault trees from component/function/resource knowledge graphs.
#[derive(Parser, Debug)]
#[command(name = "ftsynth", version)]
struct Cli {
    /// Namespace of the ontology vocabulary
    #[arg(long, global = true, env = NAMESPACE_ENV, default_value = DEFAULT_NAMESPACE)]
    ns: String,

    /// Write the result here instead of standard output
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse, infer and check the graph against the ontology
    Validate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Print the inference-closed graph as Turtle
    Infer {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = TurtleFormat::Turtle)]
        format: TurtleFormat,
    },
    /// Print the functional dependency graph
    Deps {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DepsFormat::Dot)]
        format: DepsFormat,
    },
    /// Print the redundancy groups
    Redundancy {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = JsonFormat::Json)]
        format: JsonFormat,
    },
    /// Synthesize the fault tree
    Synth {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = TreeFormat::Json)]
        format: TreeFormat,
        /// Placeholder probability written for every basic event (galileo)
        #[arg(long, value_parser = probability, default_value_t = DEFAULT_PROBABILITY)]
        default_prob: f64,
        #[command(flatten)]
        synth: SynthArgs,
    },
    /// Print the minimal cut sets, one per line
    Mcs {
        input: PathBuf,
        #[command(flatten)]
        synth: SynthArgs,
    },
    /// Compare the fault tree against failure propagation
    Check {
        input: PathBuf,
        /// Seed for subset sampling on large models
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of sampled subsets on large models
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        synth: SynthArgs,
    },
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Top event component (IRI, prefixed name or local name); defaults to the system
    #[arg(long)]
    top: Option<String>,
    /// Expand dependency cycles path by path instead of rejecting them
    #[arg(long)]
    break_cycles: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TurtleFormat {
    Turtle,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DepsFormat {
    Dot,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum JsonFormat {
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TreeFormat {
    Json,
    Dot,
    Galileo,
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(format!("{p} is not strictly between 0 and 1"))
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            PipelineError::Parse(_) => EXIT_IO,
            PipelineError::Invalid(report) => return invalid(report),
            PipelineError::System(_) => EXIT_INVALID,
            PipelineError::UnknownTop(_) => EXIT_USAGE,
            PipelineError::Synthesis(SynthesisError::CyclicDependency(_)) => EXIT_CYCLE,
            PipelineError::Synthesis(SynthesisError::TopNotFound(_)) => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

fn invalid(report: &ValidationReport) -> Failure {
    Failure::new(EXIT_INVALID, format!("validation failed\n{report}"))
}

fn warn(messages: impl IntoIterator<Item = impl AsRef<str>>) {
    let mut err = io::stderr().lock();
    for m in messages {
        let _ = writeln!(err, "warning: {}", m.as_ref());
    }
}

fn load(path: &Path, voc: Vocabulary) -> Result<Model, Failure> {
    let bytes =
        fs::read(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    Model::from_turtle(&bytes, voc)
        .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

/// Loads the model and refuses it on validation errors; validation
/// warnings go to standard error.
fn load_valid(path: &Path, voc: Vocabulary) -> Result<Model, Failure> {
    let model = load(path, voc)?;
    if !model.report.is_ok() {
        return Err(invalid(&model.report));
    }
    warn(model.report.warnings.iter().map(|w| w.to_string()));
    Ok(model)
}

fn synthesize(path: &Path, voc: Vocabulary, args: &SynthArgs) -> Result<Synthesis, Failure> {
    let model = load_valid(path, voc)?;
    let options = SynthesisOptions {
        break_cycles: args.break_cycles,
    };
    let s = pipeline::run(&model, args.top.as_deref(), options)?;
    warn(s.warnings());
    Ok(s)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::new(EXIT_IO, format!("stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let voc =
        Vocabulary::new(&cli.ns).map_err(|e| Failure::new(EXIT_USAGE, format!("--ns: {e}")))?;
    let output = cli.output.as_deref();
    match cli.command {
        Command::Validate { input, format } => {
            let model = load(&input, voc)?;
            let text = match format {
                ReportFormat::Text => format!("{}\n", model.report),
                ReportFormat::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&model.report).expect("report serializes");
                    s.push('\n');
                    s
                }
            };
            emit(output, &text)?;
            if !model.report.is_ok() {
                return Err(Failure::new(
                    EXIT_INVALID,
                    format!("{} validation error(s)", model.report.errors.len()),
                ));
            }
        }
        Command::Infer {
            input,
            format: TurtleFormat::Turtle,
        } => {
            let model = load(&input, voc)?;
            emit(output, &serialize_turtle_string(&model.graph))?;
        }
        Command::Deps { input, format } => {
            let model = load_valid(&input, voc)?;
            let d = model.dependencies();
            warn(d.warnings());
            let text = match format {
                DepsFormat::Dot => dependencies_to_dot(&d, &model.redundancy(&d)),
                DepsFormat::Json => dependencies_to_json(&d),
            };
            emit(output, &text)?;
        }
        Command::Redundancy {
            input,
            format: JsonFormat::Json,
        } => {
            let model = load_valid(&input, voc)?;
            let d = model.dependencies();
            warn(d.warnings());
            emit(output, &redundancy_to_json(&model.redundancy(&d)))?;
        }
        Command::Synth {
            input,
            format,
            default_prob,
            synth,
        } => {
            let s = synthesize(&input, voc, &synth)?;
            let text = match format {
                TreeFormat::Json => to_json(&s.tree),
                TreeFormat::Dot => to_dot(&s.tree),
                TreeFormat::Galileo => to_galileo(&s.tree, default_prob),
            };
            emit(output, &text)?;
        }
        Command::Mcs { input, synth } => {
            let s = synthesize(&input, voc, &synth)?;
            let sets =
                minimal_cut_sets(&s.tree).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
            let text: String = sets.iter().map(|cs| format!("{cs}\n")).collect();
            emit(output, &text)?;
        }
        Command::Check {
            input,
            seed,
            samples,
            synth,
        } => {
            let s = synthesize(&input, voc, &synth)?;
            let opts = EquivalenceOptions {
                seed,
                samples,
                ..EquivalenceOptions::default()
            };
            let report = check_equivalence(&s.dependencies, &s.redundancy, &s.tree, &s.top, &opts);
            emit(output, &format!("{report}\n"))?;
            if !report.is_equivalent() {
                return Err(Failure::new(
                    EXIT_COUNTEREXAMPLE,
                    format!("{} counterexample(s)", report.counterexamples.len()),
                ));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
