use clap::Parser;
use dualbent::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
