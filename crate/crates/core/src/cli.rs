//! Command-line driver.
//!
//! Exit codes: 0 success, 1 infeasible QKD allocation, 2 input error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::io::{emit_placement, emit_results, write_output, Format, LoadedScenario};
use crate::planner::{compare_policies, run_scenario, PlannerConfig};
use crate::spectrum::placement_sweep;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qnetplan",
    version,
    about = "Quantum-aware planning of CV-QKD and WDM traffic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Aggregate SpRS at every candidate quantum slot of a fully loaded grid.
    SweepPlacement(CommonArgs),
    /// Run the scenario's planner configurations over its offered-load sweep.
    Run(CommonArgs),
    /// Five-way comparison: naive/QAWA, 0/-10 dBm, margin, classical-only reference.
    Compare(CommonArgs),
    /// Load and check a scenario and every file it references.
    Validate(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e @ Error::Infeasible(_)) => {
            eprintln!("error: {e}");
            EXIT_INFEASIBLE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::SweepPlacement(args) => {
            let loaded = LoadedScenario::from_path(&args.scenario)?;
            let ctx = &loaded.context;
            let ps = &loaded.scenario.placement_sweep;
            let sweep = placement_sweep(
                &ctx.grid,
                &ctx.fiber,
                ps.length_km,
                ps.p_per_channel_dbm,
                ctx.cvqkd.b_q_ghz,
            )?;
            write_output(&emit_placement(&sweep, &ctx.grid, args.format)?, args.out.as_deref())
        }
        Command::Run(args) => {
            let loaded = LoadedScenario::from_path(&args.scenario)?;
            let seed = args.seed.unwrap_or(loaded.scenario.seed);
            let configs = if loaded.planners.is_empty() {
                vec![PlannerConfig {
                    q_placement: loaded.scenario.quantum.placement,
                    ..PlannerConfig::default()
                }]
            } else {
                loaded.planners.clone()
            };
            let mut reports = Vec::new();
            for config in &configs {
                reports.extend(run_scenario(
                    &loaded.context,
                    &loaded.qkd_demands,
                    &loaded.scenario.sweep.offered_lightpaths,
                    config,
                    seed,
                )?);
            }
            write_output(&emit_results(&reports, args.format)?, args.out.as_deref())
        }
        Command::Compare(args) => {
            let loaded = LoadedScenario::from_path(&args.scenario)?;
            let seed = args.seed.unwrap_or(loaded.scenario.seed);
            let reports = compare_policies(
                &loaded.context,
                &loaded.qkd_demands,
                &loaded.scenario.sweep.offered_lightpaths,
                seed,
                &loaded.compare_base(),
                loaded.scenario.compare.margin,
            )?;
            write_output(&emit_results(&reports, args.format)?, args.out.as_deref())
        }
        Command::Validate(args) => {
            let loaded = LoadedScenario::from_path(&args.scenario)?;
            eprintln!(
                "ok: {} nodes, {} links, {} slots, {} QKD demands, {} planner config(s)",
                loaded.context.topology.node_count(),
                loaded.context.topology.link_count(),
                loaded.context.grid.n_slots,
                loaded.qkd_demands.len(),
                loaded.planners.len()
            );
            Ok(())
        }
    }
}
