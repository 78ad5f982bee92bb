//! Library side of the `ringlab` binary: argument definitions, command
//! runners and output formatting.
//!
//! Exit codes: 0 success, 2 usage, 3 precision failure, 4 I/O.

pub mod analyze;
pub mod args;
pub mod error;
pub mod kem;
pub mod montecarlo;
pub mod output;
pub mod renyi;

use args::{Analyze, Cli, Command, Kem};

pub fn run(cli: &Cli) -> error::Result<()> {
    match &cli.command {
        Command::Analyze(Analyze::Table(a)) => analyze::table(a),
        Command::Analyze(Analyze::Noise(a)) => analyze::noise(a),
        Command::Analyze(Analyze::Dfr(a)) => analyze::dfr(a),
        Command::Kem(Kem::Keygen(a)) => kem::keygen(a),
        Command::Kem(Kem::Encaps(a)) => kem::encaps(a),
        Command::Kem(Kem::Decaps(a)) => kem::decaps(a),
        Command::Kem(Kem::Roundtrip(a)) => kem::roundtrip(a),
        Command::Montecarlo(a) => montecarlo::run(a),
        Command::Renyi(a) => renyi::run(a),
    }
}
