use clap::Parser;
use subdiv::cli;

fn main() {
    let args = cli::Cli::parse();
    if let Err(e) = cli::run(args) {
        eprintln!("subdiv: {e}");
        std::process::exit(e.exit_code());
    }
}
