//! Scenario files, seeded sampling, full runs, Monte Carlo campaigns and
//! trajectory export.

mod campaign;
mod export;
mod run;
mod sampling;
mod scenario;

pub use campaign::{derive_seed, monte_carlo, CampaignReport, RunOutcome};
pub use export::{export_csv, format_sig9, render_svg, CSV_HEADER};
pub use run::{run_scenario, run_world, CollisionEvent, Record, TrajectoryLog};
pub use sampling::{sample_initial_positions, sample_positions_avoiding, MAX_ATTEMPTS};
pub use scenario::{default_regions, load_scenario, AgentSpec, ArenaSpec, Scenario, SimSpec, SwarmSpec};

/// Scenario documents shipped with the crate.
pub mod bundled {
    pub const EXAMPLE1: &str = include_str!("../../scenarios/example1.toml");
    pub const EXAMPLE2: &str = include_str!("../../scenarios/example2.toml");
    pub const MONTECARLO: &str = include_str!("../../scenarios/montecarlo.toml");
}
