//! CLI driver: `run` executes one verification case, `resources` emits the
//! qubit/CNOT scaling table, `selftest` runs the built-in invariant suite.
//!
//! Exit codes: 0 on success, 1 when a numerical acceptance bound is missed,
//! 2 on validation/configuration failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qlb_core::harness::{
    default_config, emit_plot_script, parse_config_file, resolve_output_dir, run_case1, run_case2,
    run_resources, selftest, CaseKind, Mode, CASE1_FRONT_TOL_CELLS, CASE1_PLATEAU_TOL,
    CASE2_RMSE_TOL,
};
use qlb_core::lattice::LatticeName;
use qlb_core::operators::Variant;

#[derive(Parser)]
#[command(name = "qlb", version, about = "Operator-decomposed lattice Boltzmann solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification case.
    Run(RunArgs),
    /// Emit the qubit/CNOT scaling comparison.
    Resources(ResourcesArgs),
    /// Run the built-in invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Case name: discontinuity_1d, kolmogorov_2d or resources.
    #[arg(long)]
    case: Option<CaseKind>,
    /// Key=value configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Solver path: classical_bgk, classical_quadratic or quantum_emulated.
    #[arg(long)]
    mode: Option<Mode>,
    /// Operator block placement: layout_a or layout_b.
    #[arg(long)]
    variant: Option<Variant>,
    /// Output directory (takes precedence over QLB_OUT_DIR and the config).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ResourcesArgs {
    #[arg(long, default_value = "d2q9")]
    lattice: LatticeName,
    /// Smallest grid size (number of grid points).
    #[arg(long, default_value_t = 1e1)]
    grid_min: f64,
    /// Largest grid size.
    #[arg(long, default_value_t = 1e20)]
    grid_max: f64,
    /// Number of log-spaced sweep points.
    #[arg(long, default_value_t = 39)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

const EXIT_NUMERICAL: u8 = 1;
const EXIT_VALIDATION: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Resources(args) => cmd_resources(args),
        Command::Selftest(args) => Ok(cmd_selftest(args)),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}

fn cmd_run(args: RunArgs) -> anyhow::Result<ExitCode> {
    let mut cfg = match (&args.config, args.case) {
        (Some(path), _) => parse_config_file(path)?,
        (None, Some(case)) => default_config(case),
        (None, None) => anyhow::bail!("either --case or --config is required"),
    };
    if let Some(case) = args.case {
        if cfg.case != case {
            anyhow::bail!(
                "--case {case} conflicts with case {} from the config file",
                cfg.case
            );
        }
    }
    if let Some(mode) = args.mode {
        cfg.mode = mode;
    }
    if let Some(variant) = args.variant {
        cfg.variant = variant;
    }
    cfg.output_dir = resolve_output_dir(&cfg, args.out.as_deref());

    match cfg.case {
        CaseKind::Discontinuity1d => {
            let art = run_case1(&cfg)?;
            let m = &art.metrics;
            println!("case1: wrote {}", art.csv.display());
            if let Some(trace) = &art.trace_csv {
                println!("case1: wrote {}", trace.display());
            }
            println!(
                "case1: plateau max rel p* = {:.3e}, u = {:.3e} (tol {CASE1_PLATEAU_TOL})",
                m.plateau_max_rel_p, m.plateau_max_rel_u
            );
            println!(
                "case1: plateau l2 rel p* = {:.3e}, u = {:.3e}",
                m.plateau_l2_rel_p, m.plateau_l2_rel_u
            );
            println!(
                "case1: fronts sim ({:.2}, {:.2}) vs expected ({:.2}, {:.2}), tol +-{CASE1_FRONT_TOL_CELLS} cells",
                m.front_left_sim, m.front_right_sim, m.front_left_expected, m.front_right_expected
            );
            let mut csvs = vec![art.csv.clone()];
            csvs.extend(art.trace_csv.clone());
            let script = emit_plot_script(&cfg.output_dir, &csvs)?;
            println!("case1: wrote {}", script.display());
            Ok(verdict(art.passed))
        }
        CaseKind::Kolmogorov2d => {
            let art = run_case2(&cfg)?;
            println!("case2: wrote {}", art.summary_csv.display());
            println!("case2: wrote {}", art.detail_csv.display());
            for r in &art.rows {
                println!(
                    "case2: nu = {:.6}  mean RMSE = {:.3e}  (bound {CASE2_RMSE_TOL:.0e}, flagged {})",
                    r.viscosity, r.mean_rmse, r.flagged
                );
            }
            let script = emit_plot_script(&cfg.output_dir, std::slice::from_ref(&art.summary_csv))?;
            println!("case2: wrote {}", script.display());
            Ok(verdict(art.passed))
        }
        CaseKind::Resources => {
            let (path, _) =
                run_resources(cfg.lattice, 1e1, 1e20, 39, &cfg.output_dir)?;
            println!("resources: wrote {}", path.display());
            let script = emit_plot_script(&cfg.output_dir, &[path])?;
            println!("resources: wrote {}", script.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_resources(args: ResourcesArgs) -> anyhow::Result<ExitCode> {
    let out = args.out.unwrap_or_else(|| PathBuf::from("out"));
    let (path, report) =
        run_resources(args.lattice, args.grid_min, args.grid_max, args.points, &out)?;
    println!("resources: wrote {} ({} rows)", path.display(), report.rows.len());
    let script = emit_plot_script(&out, &[path])?;
    println!("resources: wrote {}", script.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(args: SelftestArgs) -> ExitCode {
    let checks = selftest(args.seed);
    let mut all_ok = true;
    for c in &checks {
        println!("{}  {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        all_ok &= c.passed;
    }
    verdict(all_ok)
}

fn verdict(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERICAL)
    }
}
