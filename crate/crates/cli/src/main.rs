use clap::Parser;

fn main() {
    std::process::exit(ncphase_cli::run(ncphase_cli::Cli::parse()));
}
