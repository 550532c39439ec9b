use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use reprkit::functor::CARRIER_BUDGET;
use reprkit_cli::{execute, CliError, Command, Flags, Format, LinearityMode, Request};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Relations,
    Functions,
    Agree,
}

#[derive(Parser)]
#[command(
    name = "reprkit",
    version,
    about = "Check representations, reductions and their higher-order lifts"
)]
#[command(after_help = after_help())]
struct Cli {
    /// GROUP COMMAND [FILE] [NAME...]
    #[arg(required = true, num_args = 1.., value_name = "WORDS")]
    words: Vec<String>,

    /// Largest probe set for naturality and linearity checks.
    #[arg(long, default_value_t = 3)]
    probe_max: usize,

    /// Largest set whose powerset may be built.
    #[arg(long, default_value_t = 4)]
    powerset_cap: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Random samples for `laws relcore`.
    #[arg(long, default_value_t = 1000)]
    samples: usize,

    /// Largest carrier any command may enumerate.
    #[arg(long, default_value_t = CARRIER_BUDGET)]
    budget: u128,

    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Characterization used by `check linearity`.
    #[arg(long, value_enum, default_value_t = ModeArg::Relations)]
    mode: ModeArg,

    /// Print constructed HOR objects as declarations.
    #[arg(long)]
    emit: bool,
}

fn after_help() -> String {
    format!("Commands:\n{}", Command::usage())
}

fn run(cli: &Cli) -> Result<(String, u8), CliError> {
    let [group, name, ..] = cli.words.as_slice() else {
        return Err(CliError::Usage("expected GROUP COMMAND [FILE] [NAME...]".into()));
    };
    let command = Command::parse(group, name)?;
    let file = cli.words.get(2).map(String::as_str);
    let names: Vec<&str> = cli.words.iter().skip(3).map(String::as_str).collect();
    let text = match file {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })?),
        None => None,
    };
    let flags = Flags {
        probe_max: cli.probe_max,
        powerset_cap: cli.powerset_cap,
        seed: cli.seed,
        samples: cli.samples,
        budget: cli.budget,
        mode: match cli.mode {
            ModeArg::Relations => LinearityMode::Relations,
            ModeArg::Functions => LinearityMode::Functions,
            ModeArg::Agree => LinearityMode::Agree,
        },
        emit: cli.emit,
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    execute(&Request::new(command, file, &names), text.as_deref(), &flags, format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
