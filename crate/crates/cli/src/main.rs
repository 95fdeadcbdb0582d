//! `nilcone`: JSON front end to the nilcone library.
//!
//! Every subcommand writes one JSON document to standard output. Exit
//! status is 0 on success, 2 for bad input and 1 for internal failures.

mod commands;

use std::io::Read;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command};
use serde_json::Value;

use commands::{CliError, Output, Subcommand};

fn document_args(cmd: Command) -> Command {
    cmd.arg(
        Arg::new("input")
            .long("input")
            .value_name("FILE")
            .help("Read the JSON document from FILE"),
    )
    .arg(
        Arg::new("json")
            .long("json")
            .value_name("TEXT")
            .help("JSON document given inline")
            .conflicts_with("input"),
    )
}

fn build_cli(registry: &[std::sync::Arc<dyn Subcommand>]) -> Command {
    let mut cli = Command::new("nilcone")
        .about("Nilpotent SL2 Higgs fields on the projective line, exactly")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for sub in registry {
        let mut cmd = Command::new(sub.name()).about(sub.about());
        if sub.reads_document() {
            cmd = document_args(cmd);
        }
        cli = cli.subcommand(sub.configure(cmd));
    }
    cli
}

fn read_document(args: &ArgMatches) -> Result<Value, CliError> {
    let text = if let Some(inline) = args.get_one::<String>("json") {
        inline.clone()
    } else if let Some(path) = args.get_one::<String>("input") {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?
    } else {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
        buf
    };
    Ok(nilcone::json::parse_document(&text)?)
}

fn run(argv: Vec<String>) -> Result<Output, CliError> {
    let registry = commands::registry();
    let matches = match build_cli(&registry).try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let (name, args) = matches.subcommand().expect("a subcommand is required");
    let sub = registry
        .iter()
        .find(|s| s.name() == name)
        .expect("clap only accepts registered names");
    let doc = if sub.reads_document() {
        Some(read_document(args)?)
    } else {
        None
    };
    sub.run(args, doc.as_ref())
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(Output::Json(v)) => {
            println!("{}", nilcone::json::render(&v));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
