use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use swarmcov::harness::{export_csv, load_scenario, monte_carlo, render_svg, run_scenario, CampaignReport, Scenario};

/// Coverage control for non-cooperating swarms with reciprocal collision
/// avoidance.
#[derive(Debug, Parser)]
#[command(name = "swarmcov", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario to termination.
    Run(RunArgs),
    /// Run many seeded copies of a sampled scenario.
    Montecarlo(CampaignArgs),
    /// Check a scenario file without running it.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Write trajectory.csv.
    #[arg(long)]
    csv: bool,
    /// Write trajectory.svg.
    #[arg(long)]
    svg: bool,
    /// Disable collision avoidance regardless of the scenario.
    #[arg(long)]
    no_avoidance: bool,
}

#[derive(Debug, Args)]
struct CampaignArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write campaign.csv with one line per run.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Failures that map to distinct exit codes.
enum Outcome {
    Ok,
    Collision,
}

const EXIT_SCENARIO: u8 = 1;
const EXIT_COLLISION: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Montecarlo(args) => campaign(args),
        Command::Validate { scenario } => read_scenario(&scenario).map(|s| {
            let agents: usize =
                s.swarms.iter().map(|w| w.positions.as_ref().map_or(w.count.unwrap_or(0), Vec::len)).sum();
            println!("ok: {} swarms, {agents} agents, avoidance {}", s.swarms.len(), on_off(s.sim.avoidance));
            Outcome::Ok
        }),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Collision) => ExitCode::from(EXIT_COLLISION),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_SCENARIO)
        }
    }
}

fn on_off(b: bool) -> &'static str {
    if b {
        "on"
    } else {
        "off"
    }
}

fn read_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_scenario(&text).with_context(|| format!("in {}", path.display()))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(args: RunArgs) -> Result<Outcome> {
    let mut s = read_scenario(&args.scenario)?;
    if args.no_avoidance {
        s.sim.avoidance = false;
    }
    let log = run_scenario(&s)?;
    println!(
        "{:?} after {} iterations; min separation {:.6}; {} collision events; {} agents hit an infeasible program",
        log.termination,
        log.iterations(),
        log.min_separation(),
        log.collisions.len(),
        log.infeasible_agents.len()
    );
    for (k, cost) in log.records.last().map(|r| r.swarm_costs.clone()).unwrap_or_default().iter().enumerate() {
        println!("swarm {k}: final coverage cost {cost:.6}");
    }
    if args.csv {
        write(&args.out_dir, "trajectory.csv", &export_csv(&log))?;
    }
    if args.svg {
        write(&args.out_dir, "trajectory.svg", &render_svg(&log, &s))?;
    }
    Ok(if s.sim.avoidance && !log.collisions.is_empty() {
        eprintln!("collision detected with avoidance on");
        Outcome::Collision
    } else {
        Outcome::Ok
    })
}

fn campaign_csv(report: &CampaignReport) -> String {
    let mut out = String::from("run,seed,termination,iterations,min_separation,collisions,infeasible_agents,error\n");
    for o in &report.outcomes {
        let termination = o.termination.map(|t| format!("{t:?}")).unwrap_or_default();
        let gap = o.min_separation.map(|g| format!("{g:.9e}")).unwrap_or_default();
        let error = o.error.as_deref().unwrap_or("").replace(['"', '\n'], " ");
        out.push_str(&format!(
            "{},{},{termination},{},{gap},{},{},\"{error}\"\n",
            o.index, o.seed, o.iterations, o.collisions, o.infeasible_agents
        ));
    }
    out
}

fn campaign(args: CampaignArgs) -> Result<Outcome> {
    anyhow::ensure!(args.runs >= 1, "--runs must be at least 1");
    let s = read_scenario(&args.scenario)?;
    let report = monte_carlo(&s, args.runs, args.seed);
    println!(
        "{}/{} runs collision-free, {} failed; smallest separation {:.6}",
        report.collision_free_runs,
        report.runs,
        report.failed_runs,
        report.min_separation()
    );
    for o in report.outcomes.iter().filter(|o| o.error.is_some()) {
        eprintln!("run {} (seed {}): {}", o.index, o.seed, o.error.as_deref().unwrap_or(""));
    }
    if let Some(dir) = &args.out_dir {
        write(dir, "campaign.csv", &campaign_csv(&report))?;
    }
    let collided = report.outcomes.iter().any(|o| o.error.is_none() && o.collisions > 0);
    Ok(if s.sim.avoidance && collided { Outcome::Collision } else { Outcome::Ok })
}
