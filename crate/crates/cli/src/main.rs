use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use kva_core::fbsde::{fbsde_xva, RegressionGrid};
use kva_core::harness::{run_convergence, run_sweep, run_table3, to_csv, SweepParameter, TABLE3_SPOTS};
use kva_core::solver::{garcia_scaling_check, greeks, plot_grid, solve, xva_breakdown, BreakdownQuadrature};
use kva_core::{config, Error, MtmConvention, OptionKind, RunConfig};

#[derive(Parser)]
#[command(name = "kva", version, about = "XVA and KVA of European options by LDG-IMEX and regression Monte Carlo")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags below override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    option: Option<OptionArg>,
    #[arg(long, global = true, value_enum)]
    driver: Option<DriverArg>,
    #[arg(long, global = true)]
    cells: Option<usize>,
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Output directory for CSV and JSON files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OptionArg {
    Call,
    Put,
}

#[derive(Clone, Copy, ValueEnum)]
enum DriverArg {
    Linear,
    Nonlinear,
    Garcia,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParameterArg {
    Sigma,
    GammaK,
    RX,
}

#[derive(Serialize)]
struct BreakdownRow {
    spot: f64,
    cva: f64,
    fbva: f64,
    fcva: f64,
    cra: f64,
    kva: f64,
    total: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Single solve: Greeks at sample spots and the full value profile.
    Price {
        #[arg(long, value_delimiter = ',')]
        spots: Option<Vec<f64>>,
    },
    /// Refinement ladder against a fine reference solve.
    Converge {
        #[arg(long, value_delimiter = ',', default_value = "10,20,40,80,160,320,640")]
        ladder: Vec<usize>,
        #[arg(long, default_value_t = 1280)]
        reference_cells: usize,
        /// Reference step count; the CFL rule when omitted.
        #[arg(long)]
        reference_steps: Option<usize>,
    },
    /// PDE adjustments for the four option/driver columns; 1280 cells and
    /// 230 steps unless `--cells` is given.
    Table3 {
        /// Add regression Monte Carlo values at the default budget.
        #[arg(long)]
        with_fbsde: bool,
    },
    /// One solve per parameter value.
    Sweep {
        #[arg(long, value_enum)]
        parameter: ParameterArg,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        spots: Option<Vec<f64>>,
    },
    /// Regression Monte Carlo adjustment at sample spots.
    Fbsde {
        #[arg(long, value_delimiter = ',')]
        spots: Option<Vec<f64>>,
        #[arg(long, default_value_t = 500)]
        strata: usize,
        #[arg(long, default_value_t = 10_000)]
        paths_per_stratum: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 10)]
        batches: usize,
    },
    /// Quadrature split of the linear adjustment into its components.
    Breakdown {
        #[arg(long, value_delimiter = ',')]
        spots: Option<Vec<f64>>,
    },
    /// Hurdle-rate scaling identity for the capital-only adjustment.
    GarciaCheck,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(meta) => {
            let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let kind = match &e {
                Error::InvalidParameter { .. } => "invalid_parameter",
                Error::MisalignedStrike { .. } => "misaligned_strike",
                Error::NonNestedLadder(_) => "non_nested_ladder",
                Error::Parse(_) => "parse",
                Error::Io(_) => "io",
                _ => "numerical",
            };
            eprintln!("{}", json!({ "error": e.to_string(), "kind": kind }));
            ExitCode::FAILURE
        }
    }
}

fn resolve_config(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => config::load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(o) = common.option {
        cfg.option.kind = match o {
            OptionArg::Call => OptionKind::Call,
            OptionArg::Put => OptionKind::Put,
        };
    }
    if let Some(d) = common.driver {
        cfg.mtm = match d {
            DriverArg::Linear => MtmConvention::RiskFree,
            DriverArg::Nonlinear => MtmConvention::Risky,
            DriverArg::Garcia => MtmConvention::GarciaKva,
        };
    }
    if let Some(n) = common.cells {
        cfg.cells = n;
    }
    if let Some(k) = common.degree {
        cfg.degree = k;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write(dir: &Path, name: &str, contents: &str, written: &mut Vec<String>) -> Result<(), Error> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    written.push(path.display().to_string());
    Ok(())
}

fn run(cli: Cli) -> Result<Value, Error> {
    let started = Instant::now();
    let cfg = resolve_config(&cli.common)?;
    let out = &cli.common.out;
    fs::create_dir_all(out)?;
    let mut files = Vec::new();
    let default_spots = || TABLE3_SPOTS.to_vec();

    let (name, extra) = match cli.command {
        Command::Price { spots } => {
            let r = solve(&cfg)?;
            let spots = spots.unwrap_or_else(default_spots);
            write(out, "price.csv", &to_csv(&greeks(&r, &spots))?, &mut files)?;
            write(out, "profile.csv", &to_csv(&greeks(&r, &plot_grid(&r)))?, &mut files)?;
            ("price", json!({ "run": r.meta }))
        }
        Command::Converge {
            ladder,
            reference_cells,
            reference_steps,
        } => {
            let report = run_convergence(&cfg, &ladder, reference_cells, reference_steps)?;
            write(out, "convergence.csv", &report.to_csv()?, &mut files)?;
            eprint!("{}", report.to_text());
            let (l2, linf) = report.tail_eoc();
            (
                "converge",
                json!({
                    "reference_cells": report.reference_cells,
                    "reference_steps": report.reference_steps,
                    "tail_eoc_l2": l2,
                    "tail_eoc_linf": linf,
                }),
            )
        }
        Command::Table3 { with_fbsde } => {
            let mut cfg = cfg;
            if cli.common.cells.is_none() {
                cfg.cells = 1280;
                cfg.time_steps = Some(230);
            }
            let grid = RegressionGrid {
                maturity: cfg.option.maturity,
                ..RegressionGrid::default()
            };
            let table = run_table3(&cfg, with_fbsde.then_some((&grid, cli.common.seed)))?;
            write(out, "table3.csv", &table.to_csv()?, &mut files)?;
            (
                "table3",
                json!({
                    "cells": cfg.cells,
                    "steps": cfg.time_steps,
                    "with_fbsde": with_fbsde,
                    "seed": cli.common.seed,
                }),
            )
        }
        Command::Sweep {
            parameter,
            values,
            spots,
        } => {
            let parameter = match parameter {
                ParameterArg::Sigma => SweepParameter::Sigma,
                ParameterArg::GammaK => SweepParameter::GammaK,
                ParameterArg::RX => SweepParameter::RX,
            };
            let spots = spots.unwrap_or_else(default_spots);
            let sweep = run_sweep(&cfg, parameter, &values, &spots)?;
            write(out, &format!("sweep_{}.csv", parameter.name()), &sweep.to_csv()?, &mut files)?;
            (
                "sweep",
                json!({
                    "parameter": parameter.name(),
                    "values": values,
                    "xva_nonincreasing": sweep.xva_nonincreasing(0.0),
                }),
            )
        }
        Command::Fbsde {
            spots,
            strata,
            paths_per_stratum,
            steps,
            batches,
        } => {
            let grid = RegressionGrid {
                strata,
                paths_per_stratum,
                steps,
                batches,
                maturity: cfg.option.maturity,
                ..RegressionGrid::default()
            };
            let spots = spots.unwrap_or_else(default_spots);
            let rows = fbsde_xva(&cfg, &grid, cli.common.seed, &spots)?;
            write(out, "fbsde.csv", &to_csv(&rows)?, &mut files)?;
            ("fbsde", json!({ "grid": grid, "seed": cli.common.seed }))
        }
        Command::Breakdown { spots } => {
            let quad = BreakdownQuadrature::default();
            let spots = spots.unwrap_or_else(default_spots);
            let rows: Vec<BreakdownRow> = spots
                .iter()
                .map(|&spot| {
                    let b = xva_breakdown(spot, &cfg.option, &cfg.market, &cfg.capital, quad);
                    BreakdownRow {
                        spot,
                        cva: b.cva,
                        fbva: b.fbva,
                        fcva: b.fcva,
                        cra: b.cra,
                        kva: b.kva,
                        total: b.total(),
                    }
                })
                .collect();
            write(out, "breakdown.csv", &to_csv(&rows)?, &mut files)?;
            ("breakdown", json!({ "quadrature": quad }))
        }
        Command::GarciaCheck => {
            let check = garcia_scaling_check(&cfg)?;
            let rows: Vec<Value> = check
                .adjustment
                .value
                .space()
                .points()
                .iter()
                .zip(check.adjustment.value.values())
                .zip(check.reference.value.values())
                .map(|((&s, &u), &up)| json!({ "s": s, "adjustment": u, "scaled_reference": check.scale * up }))
                .collect();
            write(out, "garcia.json", &serde_json::to_string_pretty(&rows)?, &mut files)?;
            (
                "garcia-check",
                json!({ "scale": check.scale, "max_abs_diff": check.max_abs_diff }),
            )
        }
    };

    let meta = json!({
        "command": name,
        "config": cfg,
        "outputs": files,
        "runtime_secs": started.elapsed().as_secs_f64(),
        "result": extra,
    });
    let meta_path = out.join(format!("{name}.json"));
    fs::write(&meta_path, serde_json::to_string_pretty(&meta)?)?;
    Ok(meta)
}
