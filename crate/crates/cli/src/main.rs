use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use crossing_maxcut::oracle::{brute_cmc_bounded, brute_mc, brute_mc_bounded, suite_instance, OracleBounds};
use crossing_maxcut::rational::format_rational;
use crossing_maxcut::{io, solve, Error, InstanceFile, LoadedInstance, SolveOptions, SolveReport};

#[derive(Parser)]
#[command(name = "crossing-maxcut", version, about = "Exact maximum cut of graphs drawn with few crossings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print value, partition and statistics.
    Solve {
        input: PathBuf,
        /// Worker threads for the branch leaves.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write every branch leaf as a combinatorial file into DIR.
        #[arg(long, value_name = "DIR")]
        emit_branch_instances: Option<PathBuf>,
        /// Report wall_ms as 0 so the output depends only on the input.
        #[arg(long)]
        no_timing: bool,
    },
    /// Brute-force value of a small instance.
    Oracle {
        input: Option<PathBuf>,
        /// Also report the best cut separating the file's constraint pairs.
        #[arg(long)]
        constraints: bool,
        /// Compare solver and brute force on N seeded random instances.
        #[arg(long, value_name = "N")]
        seed_suite: Option<u64>,
    },
    /// Check a drawing and report its crossing count.
    Validate { input: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Json(_)
        | Error::Drawing(_)
        | Error::UnknownVertex(_)
        | Error::UnknownEdge(_)
        | Error::DuplicateId(_)
        | Error::Io(_) => 2,
        Error::OracleBound { .. } => 4,
        _ => 3,
    }
}

fn load(path: &Path) -> Result<LoadedInstance, Error> {
    io::read_instance(path)?.load()
}

fn cmd_solve(input: &Path, jobs: usize, dump: Option<PathBuf>, no_timing: bool) -> Result<String, Error> {
    let inst = load(input)?;
    if !inst.constraints.is_empty() {
        return Err(Error::Parse("constraints are only read by the oracle command".into()));
    }
    let start = Instant::now();
    let sol = solve(&inst.drawing, &SolveOptions { jobs, leaf_dump_dir: dump })?;
    let ms = if no_timing { 0 } else { start.elapsed().as_millis() as u64 };
    Ok(SolveReport::new(&sol, ms).to_json())
}

fn cmd_oracle(input: &Path, constraints: bool) -> Result<String, Error> {
    let inst = load(input)?;
    let g = inst.drawing.graph();
    let bounds = OracleBounds::from_env();
    if g.edge_count() > bounds.max_edges {
        return Err(Error::OracleBound { what: "edges", actual: g.edge_count(), limit: bounds.max_edges });
    }
    let mc = brute_mc_bounded(g, bounds.max_vertices)?;
    let mut out = json!({ "brute_mc": format_rational(&mc) });
    if constraints {
        let cmc = brute_cmc_bounded(g, &inst.constraints, bounds.max_vertices)?;
        out["brute_cmc"] = cmc.map_or(serde_json::Value::Null, |v| format_rational(&v).into());
    }
    Ok(serde_json::to_string_pretty(&out)? + "\n")
}

fn cmd_seed_suite(n: u64) -> Result<(String, bool), Error> {
    let mut passed = 0u64;
    let mut failures = Vec::new();
    for seed in 0..n {
        let d = suite_instance(seed);
        let ok = match solve(&d, &SolveOptions::default()) {
            Ok(sol) => sol.value == brute_mc(d.graph())?,
            Err(_) => false,
        };
        if ok {
            passed += 1;
        } else {
            failures.push(seed);
        }
    }
    let out = json!({ "checks": n, "passed": passed, "failed": n - passed, "failed_seeds": failures });
    Ok((serde_json::to_string_pretty(&out)? + "\n", passed == n))
}

fn cmd_validate(input: &Path) -> Result<String, Error> {
    let file = InstanceFile::parse(&std::fs::read_to_string(input)?)?;
    let d = file.load()?.drawing;
    d.validate()?;
    Ok(format!("ok, k={}, 1-planar={}\n", d.crossing_count(), d.is_one_planar()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { input, jobs, emit_branch_instances, no_timing } => {
            cmd_solve(&input, jobs, emit_branch_instances, no_timing).map(|s| (s, true))
        }
        Command::Oracle { seed_suite: Some(n), .. } => cmd_seed_suite(n),
        Command::Oracle { input: Some(input), constraints, .. } => cmd_oracle(&input, constraints).map(|s| (s, true)),
        Command::Oracle { .. } => Err(Error::Parse("oracle needs an input file or --seed-suite".into())),
        Command::Validate { input } => cmd_validate(&input).map(|s| (s, true)),
    };
    match result {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
