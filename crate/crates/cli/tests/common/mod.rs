#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn ifba() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ifba"));
    c.env_remove("IFBA_SEED");
    c
}

pub fn run(args: &[&str]) -> Output {
    ifba().args(args).output().expect("binary runs")
}

pub fn run_to(dir: &Path, name: &str, args: &[&str]) -> (Output, PathBuf) {
    let path = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--output", &p]);
    (run(&all), path)
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

/// One invocation per command, used by the determinism and schema checks.
pub const COMMAND_SUITE: &[&[&str]] = &[
    &["check-tnorm", "--tnorm", "product", "--grid", "11"],
    &["check-tnorm", "--tconorm", "bounded_sum"],
    &[
        "check-axioms",
        "--model",
        "matrix:n=2",
        "--samples",
        "2000",
        "--seed",
        "7",
    ],
    &[
        "converge",
        "--model",
        "scalar",
        "--sequence",
        "perturbed",
        "--x",
        "0",
        "--a",
        "1",
        "--r",
        "0.1",
        "--t",
        "1",
    ],
    &[
        "cauchy",
        "--model",
        "scalar",
        "--sequence",
        "partial-sums",
        "--x",
        "0.5",
        "--p-max",
        "10",
    ],
    &[
        "product-limit",
        "--model",
        "matrix:n=2",
        "--sequence",
        "perturbed",
        "--x",
        "e",
        "--a",
        "1,2;-1,0.5",
        "--y-sequence",
        "constant",
        "--y",
        "0,3;1,1",
    ],
    &[
        "neumann", "--model", "scalar", "--x", "0.5", "--tol", "1e-8",
    ],
    &["neumann", "--model", "scalar", "--x", "1.5"],
    &["inverse", "--model", "matrix:n=2", "--x", "0.9,0;0,1.1"],
    &[
        "resolvent",
        "--model",
        "scalar",
        "--x",
        "0.5",
        "--lambda",
        "2",
    ],
    &[
        "probe-open",
        "--model",
        "matrix:n=2",
        "--samples",
        "200",
        "--seed",
        "3",
    ],
    &[
        "probe-closed",
        "--model",
        "matrix:n=3",
        "--samples",
        "20",
        "--seed",
        "3",
    ],
    &[
        "probe-continuity",
        "--model",
        "scalar",
        "--x0",
        "0.01",
        "--samples",
        "100",
        "--seed",
        "3",
    ],
    &["tdz", "--model", "matrix:n=2", "--z", "1,0;0,0"],
    &[
        "tdz-population",
        "--model",
        "matrix:n=3",
        "--samples",
        "200",
        "--seed",
        "3",
    ],
];
