use clap::Parser;
use mismatch::cli;

fn main() {
    let args = cli::Cli::parse();
    std::process::exit(cli::run(args));
}
