//! `ringlab`: failure-rate tables, noise distributions, KEM experiments and
//! Rényi divergences from the command line.

use clap::Parser;
use ringlab_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = ringlab_cli::run(&cli) {
        eprintln!("ringlab: {e}");
        std::process::exit(e.exit_code());
    }
}
