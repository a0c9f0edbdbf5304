use clap::Parser;
use skeinseq::cli::{configure_threads, run, Cli, EXIT_INPUT};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("skeinseq: {e}");
        std::process::exit(EXIT_INPUT);
    }
    std::process::exit(run(&cli));
}
