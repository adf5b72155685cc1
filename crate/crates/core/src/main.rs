use clap::Parser;

use eigloc::cli::{canonical_json, run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", canonical_json(&outcome.json));
            std::process::exit(outcome.code as i32);
        }
        Err(e) => {
            eprintln!("eigloc: {e}");
            std::process::exit(e.code as i32);
        }
    }
}
