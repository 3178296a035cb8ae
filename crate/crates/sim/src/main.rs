use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lipwalk::kick::{kick_components, KickParams};
use lipwalk_sim::batch::{run_batch, seeded_copies};
use lipwalk_sim::presets;
use lipwalk_sim::{run_scenario, write_trace, ScenarioConfig};
use nalgebra::Vector2;

#[derive(Parser)]
#[command(name = "lipwalk", version, about = "Closed-loop LIP walking scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Walk with the nominal gait.
    Walk(RunArgs),
    /// Take a pendulum push and report the survivable impact speed.
    PushRecovery {
        #[command(flatten)]
        run: RunArgs,
        /// Skip the impact speed bisection.
        #[arg(long)]
        no_threshold: bool,
    },
    /// Write swing curves for a far, an optimal and a close ball.
    KickDemo {
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Samples per curve.
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Kick three passed balls toward the goal.
    MovingBall(RunArgs),
    /// Run copies of a scenario with seeds seed, seed+1, ... concurrently.
    Batch {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        threads: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file; a built-in preset is used if omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Trace output (a directory for `batch`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    ticks_per_second: Option<u32>,
    /// Do not print the summary line.
    #[arg(long)]
    quiet: bool,
}

type CliResult = Result<(), Box<dyn std::error::Error>>;

fn load(args: &RunArgs, preset: impl FnOnce(u64) -> ScenarioConfig) -> Result<ScenarioConfig, Box<dyn std::error::Error>> {
    let mut config = match &args.scenario {
        Some(path) => ScenarioConfig::read(path)?,
        None => preset(args.seed.unwrap_or(0)),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(rate) = args.ticks_per_second {
        if rate == 0 {
            return Err("--ticks-per-second must be positive".into());
        }
        config.tick = 1.0 / f64::from(rate);
    }
    config.validate()?;
    Ok(config)
}

fn save_trace(path: &Path, trace: &[lipwalk_sim::TraceRecord]) -> CliResult {
    let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
    write_trace(trace, BufWriter::new(file))?;
    Ok(())
}

fn run_one(args: &RunArgs, config: &ScenarioConfig) -> Result<lipwalk_sim::RunResult, Box<dyn std::error::Error>> {
    let result = run_scenario(config)?;
    if let Some(out) = &args.out {
        save_trace(out, &result.trace)?;
    }
    if !args.quiet {
        println!("{}", result.summary);
    }
    Ok(result)
}

fn kick_demo(out: &Path, samples: usize) -> CliResult {
    if samples < 2 {
        return Err("--samples must be at least 2".into());
    }
    std::fs::create_dir_all(out)?;
    let params = KickParams::default();
    let cases = [
        ("far", params.optimal_distance + 0.1, 0.05),
        ("optimal", params.optimal_distance, 0.0),
        ("close", params.optimal_distance - 0.1, 0.05),
    ];
    for (name, ball_x, ball_y) in cases {
        let spec = params.swing_spec(&params.amplitudes(Vector2::new(ball_x, ball_y)));
        let path = out.join(format!("kick_{name}.csv"));
        let mut writer = csv::Writer::from_path(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        writer.write_record(["phi", "s_fw", "s_bw", "s_kick", "s_adj"])?;
        for i in 0..samples {
            let phi = i as f64 / (samples - 1) as f64;
            let c = kick_components(phi, &spec)?;
            writer.write_record([phi, c.forward, c.backward, c.kick, c.adjust].map(|x| format!("{x:.8e}")))?;
        }
        writer.flush()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: CliResult = (|| match &cli.command {
        Command::Walk(args) => {
            let config = load(args, presets::walk)?;
            run_one(args, &config).map(|_| ())
        }
        Command::PushRecovery { run, no_threshold } => {
            let config = load(run, |seed| {
                presets::push_recovery(seed, presets::HEAVY_PENDULUM, presets::DEFAULT_PUSH_SPEED)
            })?;
            run_one(run, &config)?;
            if !no_threshold && !config.events.push.is_empty() {
                match presets::push_threshold(&config, 0.0, 20.0, 20)? {
                    Some(t) => println!("threshold_survived={:.4} threshold_fell={:.4}", t.survived, t.fell),
                    None => println!("threshold=none"),
                }
            }
            Ok(())
        }
        Command::KickDemo { out, samples } => kick_demo(out, *samples),
        Command::MovingBall(args) => {
            let config = load(args, presets::moving_ball)?;
            run_one(args, &config).map(|_| ())
        }
        Command::Batch { run, count, threads } => {
            let config = load(run, presets::walk)?;
            if let Some(dir) = &run.out {
                std::fs::create_dir_all(dir)?;
            }
            let configs = seeded_copies(&config, *count);
            let mut failed = false;
            for (i, result) in run_batch(&configs, *threads).into_iter().enumerate() {
                match result {
                    Ok(r) => {
                        if let Some(dir) = &run.out {
                            save_trace(&dir.join(format!("trace_{i:03}.csv")), &r.trace)?;
                        }
                        if !run.quiet {
                            println!("index={i} {}", r.summary);
                        }
                    }
                    Err(e) => {
                        eprintln!("index={i} error: {e}");
                        failed = true;
                    }
                }
            }
            if failed {
                Err("some scenarios failed".into())
            } else {
                Ok(())
            }
        }
    })();
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
