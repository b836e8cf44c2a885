use clap::Parser;

fn main() -> anyhow::Result<()> {
    pfla_harness::cli::execute(pfla_harness::cli::Cli::parse())
}
