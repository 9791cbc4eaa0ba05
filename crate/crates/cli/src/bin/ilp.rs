use std::path::PathBuf;
use std::time::Duration;

use anyhow::Result;
use clap::{Parser, Subcommand};
use tableqa::ilp::IlpProblem;
use tableqa::solver::{solve_ilp, SolveStatus};

#[derive(Parser)]
#[command(name = "ilp", about = "Solve 0/1 maximization problems stored as JSON")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print status, objective and the variables set to 1.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
    },
}

fn main() -> Result<()> {
    env_logger::init();
    let Command::Solve { file, time_limit } = Cli::parse().command;
    let problem = IlpProblem::load(&file)?;
    let s = solve_ilp(&problem, Duration::from_secs_f64(time_limit), 0.0)?;
    let status = match s.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Timeout => "timeout",
    };
    println!("status: {status}");
    if s.status != SolveStatus::Infeasible && s.objective.is_finite() {
        println!("objective: {}", s.objective);
    }
    println!("nodes: {} lp_iterations: {}", s.nodes_explored, s.lp_iterations);
    for name in s.active_names(&problem) {
        println!("{name} = 1");
    }
    Ok(())
}
