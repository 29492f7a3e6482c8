use clap::Parser;

fn main() {
    let cli = erasure_core::cli::Cli::parse();
    std::process::exit(erasure_core::cli::main_with(&cli));
}
