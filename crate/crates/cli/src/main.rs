//! `hashembed` command-line driver.

mod commands;
mod config;
mod fail;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use hashembed::Measure;

use crate::config::BuildArgs;

#[derive(Parser, Debug)]
#[command(
    name = "hashembed",
    version,
    about = "Hash-based streaming word embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a raw model from text, document and relation-tuple sources.
    Build {
        #[command(flatten)]
        args: BuildArgs,
        /// Model file to write; `.gz` compresses.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
        /// Sweep over these dimensionalities (comma separated).
        #[arg(long, value_delimiter = ',')]
        m_list: Vec<usize>,
        /// Sweep over these windows (comma separated, each L+R or N).
        #[arg(long, value_delimiter = ',', value_parser = config::parse_window)]
        window_list: Vec<hashembed::corpus::WindowConfig>,
        /// Relatedness tests scored for every sweep configuration.
        #[arg(long = "test", value_name = "PATH")]
        tests: Vec<PathBuf>,
        /// Write the sweep CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// PPMI-weight a raw model.
    Weight {
        input: PathBuf,
        #[arg(long, short = 'o')]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = LogBaseArg::E)]
        log_base: LogBaseArg,
    },
    /// Similarity of two words.
    Sim {
        model: PathBuf,
        word1: String,
        word2: String,
        /// Defaults to gamma for raw models and pearson for weighted ones.
        #[arg(long, value_parser = parse_measure)]
        measure: Option<Measure>,
    },
    /// Nearest neighbours of a word by exhaustive scan.
    Nn {
        model: PathBuf,
        word: String,
        #[arg(short = 'k', default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_parser = parse_measure)]
        measure: Option<Measure>,
    },
    /// Score a model on word-relatedness tests.
    Eval {
        model: PathBuf,
        #[arg(required = true)]
        tests: Vec<PathBuf>,
        #[arg(long, value_parser = parse_measure)]
        measure: Option<Measure>,
        /// Also write results as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sum raw models built with the same dimensionality.
    Merge {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[arg(long, short = 'o')]
        output: PathBuf,
    },
    /// Check a streaming build against the explicit count-matrix product.
    Verify {
        #[command(flatten)]
        args: BuildArgs,
        /// Check this model file instead of a fresh build.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Describe a model file.
    Info {
        model: PathBuf,
        /// Print the vector of this word.
        #[arg(long)]
        word: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LogBaseArg {
    E,
    #[value(name = "2")]
    Two,
    #[value(name = "10")]
    Ten,
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse().map_err(|e: hashembed::Error| e.to_string())
}

fn run(cli: Cli) -> fail::CmdResult {
    use hashembed::weighting::LogBase;
    match cli.command {
        Command::Build {
            args,
            output,
            m_list,
            window_list,
            tests,
            csv,
        } => {
            if m_list.is_empty() && window_list.is_empty() {
                if !tests.is_empty() || csv.is_some() {
                    return Err(fail::Fail::usage(anyhow::anyhow!(
                        "--test and --csv need --m-list or --window-list"
                    )));
                }
                commands::build(&args, output)
            } else {
                commands::sweep(&args, &m_list, &window_list, &tests, csv)
            }
        }
        Command::Weight {
            input,
            output,
            log_base,
        } => {
            let base = match log_base {
                LogBaseArg::E => LogBase::Natural,
                LogBaseArg::Two => LogBase::Two,
                LogBaseArg::Ten => LogBase::Ten,
            };
            commands::weight(&input, &output, base)
        }
        Command::Sim {
            model,
            word1,
            word2,
            measure,
        } => commands::sim(&model, &word1, &word2, measure),
        Command::Nn {
            model,
            word,
            k,
            measure,
        } => commands::nn(&model, &word, k as usize, measure),
        Command::Eval {
            model,
            tests,
            measure,
            csv,
        } => commands::eval(&model, &tests, measure, csv),
        Command::Merge { inputs, output } => commands::merge(&inputs, &output),
        Command::Verify { args, model } => commands::verify(&args, model),
        Command::Info { model, word } => commands::info(&model, &word),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(fail::Code::Usage as u8),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}
