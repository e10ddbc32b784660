use std::process::exit;

fn main() {
    exit(quadrant_returns::cli::run(std::env::args_os()));
}
