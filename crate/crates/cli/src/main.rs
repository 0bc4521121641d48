use clap::Parser;
use vortfront_cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
