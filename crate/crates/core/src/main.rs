use clap::Parser;

use christoffel_disk::cli::JobConfig;

/// Forward and inverse solvers for disk-type first-order area measures of
/// convex bodies.
#[derive(Parser)]
#[command(name = "christoffel-disk", version, about)]
struct Cli {
    #[command(subcommand)]
    job: JobConfig,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(christoffel_disk::cli::run(&cli.job));
}
