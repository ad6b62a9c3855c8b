use clap::Parser;
use curvop_cli::{run, Cli, WINDOW_ENV};
use std::io::Write;

fn main() {
    let cli = Cli::parse();
    let env = std::env::var(WINDOW_ENV).ok();
    let out = run(&cli, env.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
