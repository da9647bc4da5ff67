use clap::Parser;
use projplane::cli::{exit_code, run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    if let Err(err) = run(&config) {
        eprintln!("projplane: {err}");
        std::process::exit(exit_code(&err));
    }
}
