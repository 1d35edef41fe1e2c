use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use amortized::verify::gen::random_traces;
use amortized::verify::script::{self, parse_script, ScriptError};
use amortized::verify::{GenConfig, PotentialFns, Structure, VerifyRun};

/// Verify amortized bounds of a stack, a binomial heap and a finger tree.
#[derive(Parser)]
#[command(name = "amortized", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the bound, oracle and timing suites (all structures by default).
    Verify(VerifyArgs),
    /// Print the per-step ledger of one operation script.
    Trace(TraceArgs),
    /// Run every suite for every structure.
    All(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Largest heap and half the largest glued finger tree.
    #[arg(long, default_value_t = 64)]
    max_size: usize,
    /// Random traces per structure.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 50)]
    trace_len: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_structure)]
    structure: Option<Structure>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct TraceArgs {
    /// Operation script; without one, a random trace of `--structure` is used.
    #[arg(long)]
    script: Option<PathBuf>,
    #[arg(long, value_parser = parse_structure)]
    structure: Option<Structure>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_structure(s: &str) -> Result<Structure, String> {
    s.parse()
}

fn config(c: &CommonArgs, structure: Structure) -> GenConfig {
    GenConfig {
        structure,
        max_size: c.max_size,
        num_traces: c.trials,
        trace_len: c.trace_len,
        seed: c.seed,
    }
}

fn emit(c: &CommonArgs, text: &str) -> Result<(), String> {
    match &c.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(c: &CommonArgs, structures: &[Structure]) -> Result<bool, String> {
    let run = VerifyRun::execute(&config(c, Structure::Stack), structures);
    let text = match c.format {
        Format::Json => run.to_json() + "\n",
        Format::Text => run.to_text(),
    };
    emit(c, &text)?;
    Ok(run.passed)
}

fn trace(args: &TraceArgs) -> Result<bool, String> {
    let c = &args.common;
    let (structure, ops) = match &args.script {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let parsed = parse_script(&text).map_err(script_error)?;
            let structure = match (parsed.structure, args.structure) {
                (Some(found), Some(wanted)) if found != wanted => {
                    return Err(format!(
                        "MalformedScript: script holds {found} operations, not {wanted}"
                    ));
                }
                (found, wanted) => found.or(wanted).unwrap_or(Structure::Stack),
            };
            (structure, parsed.ops)
        }
        None => {
            let structure = args.structure.unwrap_or(Structure::Stack);
            let cfg = GenConfig {
                num_traces: 1,
                ..config(c, structure)
            };
            (structure, random_traces(&cfg).remove(0))
        }
    };
    let ledger = script::ledger(structure, &ops, PotentialFns::default()).map_err(script_error)?;
    let text = match c.format {
        Format::Json => ledger
            .rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("ledger rows serialize") + "\n")
            .collect(),
        Format::Text => ledger.to_text(),
    };
    emit(c, &text)?;
    Ok(ledger.telescope_holds && ledger.bound_violations == 0 && ledger.bank_solvent)
}

fn script_error(e: ScriptError) -> String {
    match e {
        ScriptError::Malformed { .. } => format!("MalformedScript: {e}"),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => match a.structure {
            Some(s) => verify(&a.common, &[s]),
            None => verify(&a.common, &Structure::ALL),
        },
        Command::All(c) => verify(c, &Structure::ALL),
        Command::Trace(a) => trace(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
