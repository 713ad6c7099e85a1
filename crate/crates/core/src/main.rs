use clap::Parser;

fn main() {
    let args = envassist::cli::Args::parse();
    std::process::exit(envassist::cli::main_with(args));
}
