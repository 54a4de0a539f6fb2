use clap::Parser;

fn main() {
    std::process::exit(nodal_atlas::cli::main_with(nodal_atlas::cli::Cli::parse()));
}
