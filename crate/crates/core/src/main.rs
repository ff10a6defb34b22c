use clap::Parser;

fn main() {
    let cli = chistar::cli::Cli::parse();
    std::process::exit(chistar::cli::run(cli));
}
