use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use willmore_cli::{run_convergence, run_oracle_dump, run_scenario, Check, Failure, RunOptions, Scenario};

/// Numerical checks of capacity/curvature inequalities and level-set
/// monotonicity for exterior harmonic potentials.
#[derive(Parser)]
#[command(name = "willmore", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the exterior problem and check the capacity.
    Solve(Common),
    /// Run every check listed in the config.
    Verify(Common),
    /// Scan the level-set functionals over the τ grid.
    Monotonicity(Common),
    /// Check harmonicity, the refined Kato inequality and div Z ≥ 0 at
    /// seeded exterior points.
    Divcheck(Common),
    /// Compare both sides of the divergence identity.
    Identity(Common),
    /// Repeat the solve over the configured refinements.
    Converge(Common),
    /// Write the closed-form and quadrature reference values.
    OracleDump(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Mesh refinement level; overrides the config.
    #[arg(long)]
    refinement: Option<u32>,
    /// Seed of the pointwise sample; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Skip SVG plots.
    #[arg(long)]
    no_plots: bool,
}

impl Common {
    fn load(&self) -> Result<(Scenario, RunOptions), Failure> {
        let mut s = Scenario::load(&self.config)?;
        if let Some(k) = self.refinement {
            s.refinement = k;
        }
        if let Some(seed) = self.seed {
            s.pointwise.seed = seed;
        }
        if let Some(dir) = &self.out {
            s.output.dir = dir.clone();
        }
        if self.no_plots {
            s.output.plots = false;
        }
        s.validate()?;
        let opts = RunOptions::from_scenario(&s);
        Ok((s, opts))
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("WILLMORE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| Failure::Config(format!("WILLMORE_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Run(e.to_string()))
}

fn with_checks(mut s: Scenario, checks: &[Check]) -> Scenario {
    s.checks = checks.to_vec();
    s
}

/// Ok(true) when every check passed.
fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    let (common, checks): (&Common, Option<&[Check]>) = match &cli.command {
        Command::Solve(c) => (c, Some(&[Check::Capacity])),
        Command::Verify(c) => (c, None),
        Command::Monotonicity(c) => (c, Some(&[Check::Monotonicity])),
        Command::Divcheck(c) => (c, Some(&[Check::Pointwise])),
        Command::Identity(c) => (c, Some(&[Check::Identity])),
        Command::Converge(c) => {
            let (s, opts) = c.load()?;
            let outcome = run_convergence(&s, &opts)?;
            println!("{}", outcome.line());
            return Ok(outcome.passed);
        }
        Command::OracleDump(c) => {
            let (s, opts) = c.load()?;
            run_oracle_dump(&s, &opts)?;
            println!("wrote {}", opts.out_dir.join("oracles.json").display());
            return Ok(true);
        }
    };
    let (s, opts) = common.load()?;
    let s = match checks {
        Some(c) => with_checks(s, c),
        None => s,
    };
    let summary = run_scenario(&s, &opts)?;
    for step in &summary.steps {
        println!("{}", step.line());
    }
    println!("{} ({} panels): {}", summary.name, summary.panels, if summary.passed { "PASS" } else { "FAIL" });
    Ok(summary.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
