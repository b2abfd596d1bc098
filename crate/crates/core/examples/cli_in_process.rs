//! Drives the command-line front end without spawning a process.

use clap::Parser;
use kcanon::cli::{run_captured, Cli};

fn main() {
    let out = std::env::temp_dir().join("kcanon-example");
    let out = out.to_str().expect("utf-8 temp dir");
    for args in [
        vec!["kcanon", "list-metrics"],
        vec!["kcanon", "verify", "--metric", "fubini_study_chart:1,1", "--curvature", "--smoothness"],
        vec!["kcanon", "closed-form", "--eigenvalues", "1", "--n", "1", "--M", "5"],
        vec!["kcanon", "compare", "--metric", "fubini_study_chart:1,1", "--out", out, "--no-timestamp"],
    ] {
        let cli = Cli::parse_from(&args);
        let (code, text) = run_captured(&cli);
        println!("$ {}\n{text}exit {code}\n", args[1..].join(" "));
    }
}
