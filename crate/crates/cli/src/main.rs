use std::path::PathBuf;
use std::process::ExitCode;

use chaingeo_cli::{cmd_all, cmd_classify, cmd_verify, CliError, RunConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chaingeo", about = "Verify chain geometry theorems over quaternion skew fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one theorem suite.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Classify the chain with the given transversal, e.g. "1,0,0,0;0,1,0,1".
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trans: String,
    },
    /// Run every suite valid for the context.
    All {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify { config, theorem, seed, samples, json } => {
            let r = cmd_verify(&RunConfig::load(&config)?, &theorem, seed, samples)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
            } else {
                print!("{r}");
            }
            Ok(r.passed)
        }
        Command::Classify { config, trans } => {
            print!("{}", cmd_classify(&RunConfig::load(&config)?, &trans)?);
            Ok(true)
        }
        Command::All { config, seed, json } => {
            let s = cmd_all(&RunConfig::load(&config)?, seed)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&s).expect("serializable"));
            } else {
                print!("{s}");
            }
            Ok(s.passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
