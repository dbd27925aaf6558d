//! Command-line front end: simulation runs, capacity checks, utility
//! maximization, the exact oracle, canned experiments, and the built-in
//! regression selftest.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dcswitch::capacity::{check_capacity, maximize_linear_utility, ConstraintKind};
use dcswitch::combinat::{
    determinant, frame_scheduling_constraint_matrix, greedy_iterative_mwm,
    solve_t_disjoint_max_weight,
};
use dcswitch::matrix::SquareMatrix;
use dcswitch::mdp::solve_num_lp;
use dcswitch::rational::{rational_from_f64_tol, to_f64, Rational, RationalSpec};
use dcswitch::sim::{
    build_policy, reproduce_experiment, run_simulation_with, write_trace_csv, ExperimentConfig,
    Manifest, RunSpec,
};
use dcswitch::switch::{RateMatrix, SwitchConfig};

/// Environment variable overriding every output directory.
const OUTPUT_DIR_ENV: &str = "DCSWITCH_OUTPUT_DIR";

const EXIT_VALIDATION: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(name = "dcswitch", version, about = "Delay-constrained input-queued switch tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the simulation described by a JSON config file.
    Simulate {
        /// Path to the experiment config (JSON).
        config: PathBuf,
    },
    /// Capacity-region queries.
    #[command(subcommand)]
    Capacity(CapacityCommand),
    /// Maximize a linear network utility over the capacity region.
    Num(NumArgs),
    /// Exact small-instance oracle.
    #[command(subcommand)]
    Mdp(MdpCommand),
    /// Regenerate a canned experiment (fig3a, fig3b, fig4, fig5).
    Reproduce {
        name: String,
        /// Output directory (default: ./out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in regression checks.
    Selftest,
}

#[derive(Subcommand)]
enum CapacityCommand {
    /// Test whether a rate matrix lies in the capacity region.
    Check {
        /// JSON file holding the N x N rate matrix.
        rate_file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
}

#[derive(Args)]
struct NumArgs {
    /// JSON file holding the N x N weight matrix.
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, value_enum, default_value_t = NumMethod::Combinatorial)]
    method: NumMethod,
}

#[derive(Clone, Copy, ValueEnum)]
enum NumMethod {
    Combinatorial,
    Mdp,
}

#[derive(Subcommand)]
enum MdpCommand {
    /// Solve the occupancy-measure LP for a linear utility.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        weights: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Simulate { config } => simulate(&config),
        Command::Capacity(CapacityCommand::Check { rate_file, n, t }) => {
            capacity_check(&rate_file, n, t)
        }
        Command::Num(args) => num(&args),
        Command::Mdp(MdpCommand::Solve { n, t, weights }) => mdp_solve(&weights, n, t),
        Command::Reproduce { name, out } => reproduce(&name, out),
        Command::Selftest => selftest(),
    }
}

/// Reads an N x N matrix of nonnegative rationals. Accepts bare integers,
/// {"num","den"} objects, and finite floats (snapped to the nearest small
/// rational within 1e-12).
fn read_matrix(path: &Path, n: usize) -> Result<SquareMatrix<Rational>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let rows = value
        .as_array()
        .with_context(|| "matrix file must be a JSON array of rows")?;
    if rows.len() != n {
        bail!("expected {n} rows, got {}", rows.len());
    }
    let mut parsed = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .with_context(|| format!("row {i} must be an array"))?;
        if cells.len() != n {
            bail!("row {i} has {} entries, expected {n}", cells.len());
        }
        let mut out = Vec::with_capacity(n);
        for (j, cell) in cells.iter().enumerate() {
            out.push(parse_cell(cell).with_context(|| format!("entry ({i},{j})"))?);
        }
        parsed.push(out);
    }
    Ok(SquareMatrix::from_rows(parsed)?)
}

fn parse_cell(value: &serde_json::Value) -> Result<Rational> {
    if let Ok(spec) = serde_json::from_value::<RationalSpec>(value.clone()) {
        if let Ok(r) = spec.to_rational("entry") {
            return Ok(r);
        }
    }
    if let Some(f) = value.as_f64() {
        return Ok(rational_from_f64_tol(f, 1e-12, "entry")?);
    }
    bail!("expected an integer, a float, or {{\"num\": .., \"den\": ..}}")
}

fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact form plus decimal, unless float ingestion produced an unwieldy
/// dyadic denominator.
fn format_value(r: &Rational) -> String {
    if *r.denom() <= 1_000_000 {
        format!("{} ({:.6})", format_rational(r), to_f64(r))
    } else {
        format!("{:.6}", to_f64(r))
    }
}

fn print_rate_matrix(rates: &RateMatrix) {
    for i in 0..rates.n() {
        let row: Vec<String> = (0..rates.n())
            .map(|j| format_rational(&rates.get(i, j)))
            .collect();
        println!("  [{}]", row.join(", "));
    }
}

fn output_dir(configured: Option<PathBuf>, fallback: PathBuf) -> PathBuf {
    if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
        return PathBuf::from(dir);
    }
    configured.unwrap_or(fallback)
}

fn simulate(config_path: &Path) -> Result<ExitCode> {
    let config = ExperimentConfig::from_json_file(config_path)
        .with_context(|| format!("loading {}", config_path.display()))?;
    config.validate()?;
    let switch = config.switch_config()?;
    let target = config.target_matrix()?;
    let dir = output_dir(config.output.clone(), PathBuf::from("out/simulate"));
    std::fs::create_dir_all(&dir)?;

    let started = std::time::Instant::now();
    let mut manifest = Manifest::new("simulate", config.seed, config.content_hash());
    for &policy in &config.policies {
        let spec = RunSpec {
            config: switch,
            target: target.clone(),
            policy,
            seed: config.seed,
            horizon_slots: config.horizon_slots,
            checkpoint_interval: config.checkpoint_interval,
        };
        let mut instance = build_policy(&spec)?;
        let trace = run_simulation_with(&spec, instance.as_mut())?;
        let file = format!("trace_{policy}.csv");
        write_trace_csv(&dir.join(&file), &trace)?;
        println!("{policy}: final gap {:.6} -> {file}", trace.final_gap());
        manifest.files.push(file);
        manifest.details.insert(
            format!("final_gap_{policy}"),
            serde_json::json!(trace.final_gap()),
        );
    }
    manifest.wall_clock_ms = started.elapsed().as_millis();
    manifest.write(&dir)?;
    println!("results in {}", dir.display());
    Ok(ExitCode::SUCCESS)
}

fn capacity_check(rate_file: &Path, n: usize, t: usize) -> Result<ExitCode> {
    let config = SwitchConfig::new(n, t)?;
    let rates = RateMatrix::new(read_matrix(rate_file, n)?)?;
    let verdict = check_capacity(&rates, &config);
    if verdict.feasible() {
        println!("feasible");
        return Ok(ExitCode::SUCCESS);
    }
    println!("infeasible ({} violations)", verdict.violations.len());
    for v in &verdict.violations {
        let what = match v.kind {
            ConstraintKind::Row => format!("row {} sum exceeds 1", v.index),
            ConstraintKind::Column => format!("column {} sum exceeds 1", v.index),
            ConstraintKind::EntryCap => format!(
                "entry ({},{}) exceeds 1/t = 1/{t}",
                v.index / n,
                v.index % n
            ),
        };
        println!("  {what} (slack {:.6})", v.slack);
    }
    Ok(ExitCode::from(EXIT_INFEASIBLE))
}

fn num(args: &NumArgs) -> Result<ExitCode> {
    let config = SwitchConfig::new(args.n, args.t)?;
    let weights = read_matrix(&args.weights, args.n)?;
    let (rates, value) = match args.method {
        NumMethod::Combinatorial => maximize_linear_utility(&weights, &config)?,
        NumMethod::Mdp => {
            let solution = solve_num_lp(&weights, &config)?;
            (solution.rates, solution.value)
        }
    };
    println!("optimal utility: {}", format_value(&value));
    println!("maximizing rate matrix:");
    print_rate_matrix(&rates);
    Ok(ExitCode::SUCCESS)
}

fn mdp_solve(weights_path: &Path, n: usize, t: usize) -> Result<ExitCode> {
    let config = SwitchConfig::new(n, t)?;
    let weights = read_matrix(weights_path, n)?;
    let solution = solve_num_lp(&weights, &config)?;
    println!("optimal utility: {}", format_value(&solution.value));
    println!("rate matrix:");
    print_rate_matrix(&solution.rates);
    for slot in 0..t {
        println!(
            "slot {}: {} reachable states, probability mass {}",
            slot + 1,
            solution.occupancy.slots()[slot].len(),
            format_rational(&solution.occupancy.slot_total(slot)),
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn reproduce(name: &str, out: Option<PathBuf>) -> Result<ExitCode> {
    let dir = output_dir(out, PathBuf::from("out").join(name));
    let files = reproduce_experiment(name, &dir)?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(ExitCode::SUCCESS)
}

/// The two pinned regression checks: the greedy-vs-optimal frame instance
/// and the non-total-unimodularity determinant witness.
fn selftest() -> Result<ExitCode> {
    let weights =
        SquareMatrix::from_rows(vec![vec![4i64, 4, 0], vec![4, 1, 4], vec![2, 1, 0]])?;
    let optimal = solve_t_disjoint_max_weight(&weights, 2)?.covered_weight(&weights);
    let greedy = greedy_iterative_mwm(&weights, 2)?.covered_weight(&weights);
    let ok_frame = optimal == 17 && greedy == 15;
    println!(
        "frame solver vs greedy: optimal {optimal}, greedy {greedy} ... {}",
        if ok_frame { "ok" } else { "FAILED" }
    );

    let c = frame_scheduling_constraint_matrix(2, 3);
    let sub = c.submatrix(&[0, 2, 5, 11, 13, 14, 15], &[0, 1, 2, 6, 7, 9, 11]);
    let det = determinant(&sub);
    let ok_det = det == -2;
    println!(
        "constraint-matrix unimodularity witness: det {det} ... {}",
        if ok_det { "ok" } else { "FAILED" }
    );

    if ok_frame && ok_det {
        println!("selftest passed");
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VALIDATION))
    }
}
