use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod error;
mod report;
mod store;

use config::RunConfig;
use error::{CliError, CliResult};

/// CEO personality regression from earnings calls and its use in
/// volatility regressions.
#[derive(Debug, Parser)]
#[command(name = "persona", version)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output directory (overrides `run_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    run_dir: Option<PathBuf>,

    /// Overrides `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides any configuration key, e.g. `--set svr.c=2` or `--set synth.n_ceos=40`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Log more (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpaceArg {
    Transformed,
    Label,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    All,
    Unlabeled,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded synthetic world under <run_dir>/world.
    Synth,
    /// Parse transcripts into per-call CEO documents and corpus statistics.
    Ingest,
    /// Turn crowd votes into MBTI labels, a label summary and Big 5 correlations.
    Labels,
    /// Inter-annotator agreement per MBTI scale.
    Iaa,
    /// Split labeled documents by CEO into train, validation and test parts.
    Split {
        /// Train, validation and test shares, e.g. 0.8,0.1,0.1.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        fractions: Option<Vec<f64>>,
    },
    /// Fit every candidate model and keep the best on validation data.
    Train {
        /// Comma-separated candidates such as svr+tfidf3,mlp+dictionary, or `grid`.
        #[arg(long, value_delimiter = ',')]
        candidates: Option<Vec<String>>,
    },
    /// Score the trained model on the test part.
    Eval {
        #[arg(long, value_enum)]
        space: Option<SpaceArg>,
    },
    /// Predict MBTI profiles for ingested documents.
    Predict {
        #[arg(long, value_enum)]
        scope: Option<ScopeArg>,
    },
    /// Volatility regressions with financial controls, with and without MBTI.
    Risk {
        /// Fit only the financial-controls model.
        #[arg(long)]
        no_mbti: bool,
    },
    /// Per-feature contributions of a linear model for one document.
    Explain {
        #[arg(long)]
        call_id: String,
        /// CEO name, when the call has several CEO speakers.
        #[arg(long)]
        ceo: Option<String>,
        /// Number of features listed per scale.
        #[arg(long)]
        top: Option<usize>,
    },
    /// synth, ingest, labels, iaa, split, train, eval, predict and risk in order.
    Pipeline,
}

fn overrides(cli: &Cli) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    if let Some(d) = &cli.run_dir {
        out.push(("run_dir".into(), toml_string(&d.display().to_string())));
    }
    if let Some(s) = cli.seed {
        out.push(("seed".into(), s.to_string()));
    }
    match &cli.command {
        Command::Split { fractions: Some(f) } => {
            let items: Vec<String> = f.iter().map(|v| format!("{v:?}")).collect();
            out.push(("split.fractions".into(), format!("[{}]", items.join(", "))));
        }
        Command::Train { candidates: Some(c) } => {
            let items: Vec<String> = c.iter().map(|v| toml_string(v)).collect();
            out.push(("train.candidates".into(), format!("[{}]", items.join(", "))));
        }
        Command::Eval { space: Some(s) } => {
            out.push(("eval.space".into(), toml_string(match s {
                SpaceArg::Transformed => "transformed",
                SpaceArg::Label => "label",
            })));
        }
        Command::Predict { scope: Some(s) } => {
            out.push(("predict.scope".into(), toml_string(match s {
                ScopeArg::All => "all",
                ScopeArg::Unlabeled => "unlabeled",
            })));
        }
        Command::Risk { no_mbti: true } => out.push(("risk.include_mbti".into(), "false".into())),
        Command::Explain { top: Some(k), .. } => out.push(("explain.top".into(), k.to_string())),
        _ => {}
    }
    Ok(out)
}

fn toml_string(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let cfg = RunConfig::load(cli.config.as_deref(), &overrides(cli)?)?;
    match &cli.command {
        Command::Synth => commands::synth(&cfg),
        Command::Ingest => commands::ingest(&cfg),
        Command::Labels => commands::labels(&cfg),
        Command::Iaa => commands::iaa(&cfg),
        Command::Split { .. } => commands::split(&cfg),
        Command::Train { .. } => commands::train(&cfg),
        Command::Eval { .. } => commands::eval(&cfg),
        Command::Predict { .. } => commands::predict(&cfg),
        Command::Risk { .. } => commands::risk(&cfg),
        Command::Explain { call_id, ceo, .. } => commands::explain(&cfg, call_id, ceo.as_deref()),
        Command::Pipeline => {
            let steps: [fn(&RunConfig) -> CliResult<Vec<PathBuf>>; 9] = [
                commands::synth,
                commands::ingest,
                commands::labels,
                commands::iaa,
                commands::split,
                commands::train,
                commands::eval,
                commands::predict,
                commands::risk,
            ];
            let mut all = Vec::new();
            for step in steps {
                all.extend(step(&cfg)?);
            }
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).format_timestamp(None).init();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("persona: {e}");
            ExitCode::from(e.class.exit_code() as u8)
        }
    }
}
