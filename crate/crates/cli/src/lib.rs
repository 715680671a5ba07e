//! Command-line frontend: problem files, run reports and the `omt` subcommands.

pub mod commands;
pub mod problem;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use omt_core::omt::{Schema, Strategy};

use commands::{BenchArgs, CliError, SolveArgs};

#[derive(Parser, Debug)]
#[command(name = "omt", version, about = "Optimization modulo linear rational arithmetic and uninterpreted functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Algorithm {
    Offline,
    Inline,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Search {
    Lin,
    Bin,
    Ada,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Omt,
    Lgdp,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimize (or maximize) the objective of a problem file and print a report.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "inline")]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value = "lin")]
        search: Search,
        /// Overrides the file's lower bound (p/q).
        #[arg(long, allow_hyphen_values = true)]
        lower_bound: Option<String>,
        /// Overrides the file's upper bound (p/q).
        #[arg(long, allow_hyphen_values = true)]
        upper_bound: Option<String>,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Append solver statistics to the report.
        #[arg(long)]
        stats: bool,
    },
    /// Check an optimal report against its problem with two independent queries.
    Certify { file: PathBuf, report: PathBuf },
    /// Run every `.omt` file of a directory under several configurations and compare optima.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Per-run wall-clock limit in seconds.
        #[arg(long, default_value_t = 600.0)]
        timeout: f64,
        /// Comma-separated labels such as `inline-bin`; all five by default.
        #[arg(long, value_delimiter = ',')]
        configs: Vec<String>,
    },
    /// Emit generated or encoded problem files.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    StripPacking {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        height: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "omt")]
        format: Format,
    },
    Jobshop {
        #[arg(long)]
        jobs: usize,
        #[arg(long)]
        stages: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "omt")]
        format: Format,
    },
    EncodePb { file: PathBuf },
    EncodeMaxsmt { file: PathBuf },
    EncodeLgdp { file: PathBuf },
}

fn schema(a: Algorithm) -> Schema {
    match a {
        Algorithm::Offline => Schema::Offline,
        Algorithm::Inline => Schema::Inline,
    }
}

fn strategy(s: Search) -> Strategy {
    match s {
        Search::Lin => Strategy::Linear,
        Search::Bin => Strategy::Binary,
        Search::Ada => Strategy::Adaptive,
    }
}

pub fn execute(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Solve { file, algorithm, search, lower_bound, upper_bound, timeout, seed, stats } => commands::solve(&SolveArgs {
            file,
            schema: schema(algorithm),
            strategy: strategy(search),
            lower: lower_bound,
            upper: upper_bound,
            timeout,
            seed,
            stats,
        }),
        Command::Certify { file, report } => commands::certify_files(&file, &report),
        Command::Bench { dir, jobs, timeout, configs } => {
            let configs = if configs.is_empty() {
                commands::ALL_CONFIGS.to_vec()
            } else {
                configs
                    .iter()
                    .map(|c| commands::parse_config_label(c).ok_or_else(|| CliError::Usage(format!("unknown configuration `{}`", c))))
                    .collect::<Result<_, _>>()?
            };
            if !(timeout > 0.0 && timeout.is_finite()) {
                return Err(CliError::Usage(format!("--timeout must be positive, got {}", timeout)));
            }
            commands::bench(&BenchArgs { dir, jobs, timeout, configs })
        }
        Command::Gen(g) => match g {
            GenCommand::StripPacking { n, height, seed, format } => commands::gen_strip(n, &height, seed, matches!(format, Format::Lgdp)),
            GenCommand::Jobshop { jobs, stages, seed, format } => commands::gen_jobshop_text(jobs, stages, seed, matches!(format, Format::Lgdp)),
            GenCommand::EncodePb { file } => commands::encode_pb_file(&file),
            GenCommand::EncodeMaxsmt { file } => commands::encode_maxsmt_file(&file),
            GenCommand::EncodeLgdp { file } => commands::encode_lgdp_file(&file),
        },
    }
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(CliError::Failed(text)) => {
            let _ = out.write_all(text.as_bytes());
            1
        }
        Err(e) => {
            let _ = writeln!(err, "omt: {}", e);
            e.exit_code()
        }
    }
}
