use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rgi::{cmd_analyze, cmd_eval, cmd_extract, cmd_generate, cmd_run_all, cmd_train};
use rgi::{CliError, ExperimentConfig, Preset};

#[derive(Parser)]
#[command(
    name = "rgi",
    about = "Regular-grammar induction: train a recurrent classifier on a regular language and extract the automaton it learned",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled corpus and the ground-truth automaton
    Generate(CommonArgs),
    /// Train the recurrent classifier on a generated corpus
    Train(CommonArgs),
    /// Extract, minimize and audit the automaton from trained parameters
    Extract(CommonArgs),
    /// Cycle, projection, error and augmentation reports
    Analyze(CommonArgs),
    /// Run every stage and write a summary
    RunAll(CommonArgs),
    /// Evaluate stored artifacts on one split
    Eval(EvalArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Built-in experiment: binary-a, binary-b, or pos
    #[arg(long)]
    preset: Option<String>,

    /// JSON config file with flat dotted keys (flags override it)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Pattern over the alphabet (literals, `|`, `*`, `?`, parentheses)
    #[arg(long)]
    regex: Option<String>,

    /// Space-separated alphabet tokens, e.g. "0 1"
    #[arg(long)]
    alphabet: Option<String>,

    /// Output directory for all artifacts
    #[arg(long)]
    out: PathBuf,

    /// Master seed; every stage derives its own seed from it
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    train_size: Option<usize>,
    #[arg(long)]
    validation_size: Option<usize>,
    #[arg(long)]
    test_size: Option<usize>,
    /// Negative sampling: random or perturb
    #[arg(long)]
    method: Option<String>,
    /// Star continuation probability in (0, 1)
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    max_len: Option<usize>,
    /// Deduplication: none or within-split
    #[arg(long)]
    dedup: Option<String>,

    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    hidden: Option<usize>,
    #[arg(long)]
    head: Option<usize>,
    /// Early-stop validation accuracy target
    #[arg(long)]
    target: Option<f64>,

    /// Minimum automaton-vs-network fidelity for the K search
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,

    #[arg(long)]
    eps_cycle: Option<f64>,
    #[arg(long)]
    max_error_len: Option<usize>,
    #[arg(long)]
    max_errors: Option<usize>,
    #[arg(long)]
    pump_count: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Which split to evaluate: train, validation, or test
    #[arg(long, default_value = "test")]
    split: String,
}

impl CommonArgs {
    /// defaults < preset < config file < flags
    fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let mut config = ExperimentConfig::default();
        if let Some(name) = &self.preset {
            let preset = Preset::parse(name)
                .ok_or_else(|| CliError::Usage(format!("unknown preset \"{name}\"")))?;
            config.apply_preset(preset);
        }
        if let Some(path) = &self.config {
            config.apply_json_file(path)?;
        }
        if let Some(regex) = self.regex {
            config.regex = regex;
        }
        if let Some(alphabet) = self.alphabet {
            config.alphabet = alphabet.split_whitespace().map(str::to_string).collect();
        }
        config.out_dir = self.out;
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        if let Some(v) = self.train_size {
            config.gen_config.train_size = v;
        }
        if let Some(v) = self.validation_size {
            config.gen_config.validation_size = v;
        }
        if let Some(v) = self.test_size {
            config.gen_config.test_size = v;
        }
        if let Some(name) = self.method {
            config.gen_config.method = rgi_datagen::NegativeMethod::parse(&name)
                .ok_or_else(|| CliError::Usage(format!("unknown method \"{name}\"")))?;
        }
        if let Some(v) = self.p {
            config.gen_config.continuation_prob = v;
        }
        if let Some(v) = self.max_len {
            config.gen_config.max_len = v;
        }
        if let Some(name) = self.dedup {
            config.gen_config.dedup = match name.as_str() {
                "none" => rgi_datagen::DedupPolicy::None,
                "within-split" => rgi_datagen::DedupPolicy::WithinSplit,
                other => return Err(CliError::Usage(format!("unknown dedup policy \"{other}\""))),
            };
        }
        if let Some(v) = self.epochs {
            config.train_config.epochs = v;
        }
        if let Some(v) = self.lr {
            config.train_config.learning_rate = v;
        }
        if let Some(v) = self.batch_size {
            config.train_config.batch_size = v;
        }
        if let Some(v) = self.hidden {
            config.train_config.hidden_width = v;
        }
        if let Some(v) = self.head {
            config.train_config.head_width = v;
        }
        if let Some(v) = self.target {
            config.train_config.target_accuracy = v;
        }
        if let Some(v) = self.threshold {
            config.extraction.threshold = v;
        }
        if let Some(v) = self.k_max {
            config.extraction.k_max = v;
        }
        if let Some(v) = self.restarts {
            config.extraction.restarts = v;
        }
        if let Some(v) = self.eps_cycle {
            config.eps_cycle = v;
        }
        if let Some(v) = self.max_error_len {
            config.max_error_len = v;
        }
        if let Some(v) = self.max_errors {
            config.max_errors_per_class = v;
        }
        if let Some(v) = self.pump_count {
            config.pump_count = v;
        }
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => cmd_generate(&args.into_config()?).map(|_| ()),
        Command::Train(args) => cmd_train(&args.into_config()?).map(|_| ()),
        Command::Extract(args) => cmd_extract(&args.into_config()?).map(|_| ()),
        Command::Analyze(args) => cmd_analyze(&args.into_config()?),
        Command::RunAll(args) => cmd_run_all(&args.into_config()?).map(|_| ()),
        Command::Eval(args) => {
            let split = args.split.clone();
            cmd_eval(&args.common.into_config()?, &split)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
