//! Command-line front end: thresholds, best responses, equilibria, payoff
//! curves, Monte Carlo validation and the property-check suite, all driven
//! by one JSON config.
//!
//! Exit codes: 0 ok, 1 config or usage error, 2 degenerate parameters,
//! 3 unbounded ransom revenue, 4 simulation disagrees with the closed form,
//! 5 property violations.

mod checks;
mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ransom_game::best_response::{
    discard_threshold, pay_threshold, region_boundary, strategy_region, RansomRegime,
};
use ransom_game::equilibrium::{find_equilibrium, SearchConfig};
use ransom_game::hacker_payoff::{expected_revenue, payoff_curve, GridSpec};
use ransom_game::simulation::simulate;
use ransom_game::{best_response, GameError, GameVariant, HackerType};

use config::{GridSpecConfig, RunConfig};

#[derive(Parser)]
#[command(name = "ransom-game", version, about = "Ransomware game solver", max_term_width = 100)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Root seed override for simulation commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the primary artifact here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format of the primary artifact.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Override scalar config fields, e.g. --set params.p1=0.3 (repeatable).
    #[arg(long = "set", global = true, value_name = "PATH=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Valuation thresholds, regime membership and the regime boundary.
    Thresholds,
    /// The victim's dominant action per valuation; --sweep emits boundary curves.
    BestResponse {
        /// Emit the boundary-curve sweep over a ransom grid instead.
        #[arg(long)]
        sweep: bool,
    },
    /// Pure Bayesian Nash equilibrium per hacker type.
    Equilibrium,
    /// Expected-payoff curves of both hacker types over a ransom grid.
    PayoffCurve,
    /// Monte Carlo playouts cross-checked against the closed-form payoff.
    Simulate,
    /// Ordering, monotonicity and dominance property suite.
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<GameError>() {
                Some(GameError::DegenerateParams(_)) => 2,
                Some(GameError::UnboundedRevenue(_)) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| anyhow!("--config PATH is required; see configs/ for samples"))?;
    let config = config::load(path, &cli.set)?;
    let emit = Emitter { out: cli.out.clone(), format: cli.format };
    match cli.command {
        Command::Thresholds => cmd_thresholds(&config, &emit),
        Command::BestResponse { sweep } => cmd_best_response(&config, sweep, &emit),
        Command::Equilibrium => cmd_equilibrium(&config, &emit),
        Command::PayoffCurve => cmd_payoff_curve(&config, &emit),
        Command::Simulate => cmd_simulate(&config, cli.seed, &emit),
        Command::Check => cmd_check(&config, &emit),
    }
}

struct Emitter {
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
}

impl Emitter {
    fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }

    fn write(&self, content: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, content).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }

    fn write_json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(&text)
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct ThresholdRow {
    r: f64,
    u: f64,
    regime: RansomRegime,
    discard_below: f64,
    pay_below: Option<f64>,
    pay_threshold: f64,
    discard_threshold: f64,
}

#[derive(Serialize)]
struct ThresholdsReport {
    variant: GameVariant,
    boundary: f64,
    residual: f64,
    rows: Vec<ThresholdRow>,
}

fn cmd_thresholds(config: &RunConfig, emit: &Emitter) -> Result<ExitCode> {
    let block = config
        .thresholds
        .as_ref()
        .ok_or_else(|| anyhow!("config block `thresholds` is required for this command"))?;
    let (params, variant) = (&config.params, config.variant);
    let part = region_boundary(params, variant)?;
    let mut rows = Vec::new();
    for &r in &block.r {
        let region = strategy_region(params, variant, r)?;
        rows.push(ThresholdRow {
            r,
            u: 1.0 / (1.0 + r),
            regime: region.regime,
            discard_below: region.discard_below,
            pay_below: region.pay_below,
            pay_threshold: pay_threshold(params, variant, r)?,
            discard_threshold: discard_threshold(params, variant, r)?,
        });
    }
    let report =
        ThresholdsReport { variant, boundary: part.boundary, residual: part.residual, rows };
    match emit.format_or(OutputFormat::Json) {
        OutputFormat::Json => emit.write_json(&report)?,
        OutputFormat::Csv => {
            let mut text = String::from("r,u,regime,discard_below,pay_below,pay_threshold,discard_threshold\n");
            for row in &report.rows {
                let regime = match row.regime {
                    RansomRegime::Small => "small",
                    RansomRegime::Large => "large",
                };
                text.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    row.r,
                    row.u,
                    regime,
                    row.discard_below,
                    fmt_opt(row.pay_below),
                    row.pay_threshold,
                    row.discard_threshold
                ));
            }
            emit.write(&text)?;
        }
    }
    eprintln!("regime boundary {} (residual {})", part.boundary, part.residual);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ActionRow {
    x: f64,
    action: ransom_game::VictimAction,
}

fn cmd_best_response(config: &RunConfig, sweep: bool, emit: &Emitter) -> Result<ExitCode> {
    let (params, variant) = (&config.params, config.variant);
    if sweep {
        let grid: GridSpec = config
            .best_response
            .as_ref()
            .and_then(|b| b.sweep)
            .map(GridSpec::from)
            .unwrap_or(GridSpec::Transformed { points: 512 });
        let mut text = String::from("r,u,lower_D,upper_P,region\n");
        for r in grid.ransoms()? {
            let region = strategy_region(params, variant, r)?;
            let label = match region.regime {
                RansomRegime::Small => "small",
                RansomRegime::Large => "large",
            };
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                r,
                1.0 / (1.0 + r),
                region.discard_below,
                fmt_opt(region.pay_below),
                label
            ));
        }
        emit.write(&text)?;
        return Ok(ExitCode::SUCCESS);
    }

    let block = config
        .best_response
        .as_ref()
        .ok_or_else(|| anyhow!("config block `best_response` is required for this command"))?;
    if block.x.is_empty() {
        bail!("config block `best_response` lists no valuations in `x`");
    }
    let mut rows = Vec::new();
    for &x in &block.x {
        rows.push(ActionRow { x, action: best_response::best_response(params, variant, x, block.r)? });
    }
    match emit.format_or(OutputFormat::Json) {
        OutputFormat::Json => emit.write_json(&rows)?,
        OutputFormat::Csv => {
            let mut text = String::from("x,action\n");
            for row in &rows {
                text.push_str(&format!("{},{}\n", row.x, row.action));
            }
            emit.write(&text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_equilibrium(config: &RunConfig, emit: &Emitter) -> Result<ExitCode> {
    let (params, variant) = (&config.params, config.variant);
    let search = SearchConfig {
        grid_points: config.equilibrium.as_ref().map(|e| e.grid_points).unwrap_or(4096),
        ..SearchConfig::default()
    };
    let mut results = Vec::new();
    for hacker_type in HackerType::ALL {
        let eq = find_equilibrium(params, variant, hacker_type, &search)?;
        eprintln!(
            "{hacker_type}: ransom {} launched {} payoff {} ({} tied maximizer{})",
            eq.ransom,
            eq.launched,
            eq.payoff,
            eq.argmax_set.len(),
            if eq.argmax_set.len() == 1 { "" } else { "s" }
        );
        results.push(eq);
    }
    emit.write_json(&results)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_payoff_curve(config: &RunConfig, emit: &Emitter) -> Result<ExitCode> {
    let (params, variant) = (&config.params, config.variant);
    let grid: GridSpec = config
        .payoff_curve
        .as_ref()
        .map(|b| GridSpec::from(b.grid))
        .unwrap_or(GridSpecConfig::Transformed { points: 512 }.into());
    let curves: Vec<_> = HackerType::ALL
        .into_iter()
        .map(|t| payoff_curve(params, variant, t, &grid))
        .collect::<ransom_game::Result<_>>()?;
    match emit.format_or(OutputFormat::Csv) {
        OutputFormat::Json => emit.write_json(&curves)?,
        OutputFormat::Csv => {
            let mut text = String::from("variant,hacker_type,r,u,eta_minus_c4,launched\n");
            for curve in &curves {
                for pt in &curve.points {
                    text.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        curve.variant, curve.hacker_type, pt.r, pt.u, pt.revenue_minus_cost, pt.launched
                    ));
                }
            }
            emit.write(&text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SimulateReport {
    r: f64,
    seed: u64,
    summary: ransom_game::SimulationSummary,
    /// Closed-form mean payoff, mixed over the hacker-type prior.
    expected_mean: f64,
    deviation: f64,
    deviation_std_errors: f64,
    agrees_within_3se: bool,
}

fn cmd_simulate(config: &RunConfig, seed_flag: Option<u64>, emit: &Emitter) -> Result<ExitCode> {
    let block = config
        .simulate
        .as_ref()
        .ok_or_else(|| anyhow!("config block `simulate` is required for this command"))?;
    let seed = seed_flag
        .or(block.seed)
        .or(config.seed)
        .ok_or_else(|| anyhow!("a seed is required: set simulate.seed, seed, or pass --seed"))?;
    let (params, variant) = (&config.params, config.variant);

    if let Some(dump) = &block.dump {
        write_playout_dump(params, variant, block.r, block.n, seed, Path::new(dump))?;
    }
    let summary = simulate(params, variant, block.r, block.n, seed)?;
    let expected_mean = params.p
        * (expected_revenue(params, variant, HackerType::Genuine, block.r)? - params.c4)
        + (1.0 - params.p) * (expected_revenue(params, variant, HackerType::Fake, block.r)? - params.c4);
    let deviation = (summary.mean_hacker_payoff - expected_mean).abs();
    // guard for degenerate zero-variance runs
    let scale = summary.std_error.max(1e-12 * (1.0 + expected_mean.abs()));
    let sigmas = deviation / scale;
    let report = SimulateReport {
        r: block.r,
        seed,
        summary,
        expected_mean,
        deviation,
        deviation_std_errors: sigmas,
        agrees_within_3se: sigmas <= 3.0,
    };
    emit.write_json(&report)?;
    eprintln!(
        "simulated mean {} vs closed form {}: {:.2} standard errors -> {}",
        report.summary.mean_hacker_payoff,
        report.expected_mean,
        report.deviation_std_errors,
        if report.agrees_within_3se { "pass" } else { "FAIL" }
    );
    if sigmas > 4.0 {
        eprintln!("oracle failure: simulation deviates beyond 4 standard errors");
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

/// Replays the same sub-streams `simulate` uses, one CSV row per playout.
fn write_playout_dump(
    params: &ransom_game::GameParams,
    variant: GameVariant,
    r: f64,
    n: u64,
    seed: u64,
    path: &Path,
) -> Result<()> {
    use ransom_game::simulation::playout;
    use ransom_game::stochastics::RngStream;
    let base = RngStream::from_seed(seed);
    let mut text = String::from(
        "index,valuation,hacker_type,action,recovery_succeeded,crack_succeeded,paid_after_crack_fail,victim_payoff,hacker_payoff\n",
    );
    let fmt_flag = |f: Option<bool>| f.map(|b| b.to_string()).unwrap_or_default();
    for i in 0..n {
        let mut stream = base.substream(i);
        let rec = playout(params, variant, r, &mut stream)?;
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            i,
            rec.valuation,
            rec.hacker_type,
            rec.action,
            fmt_flag(rec.recovery_succeeded),
            fmt_flag(rec.crack_succeeded),
            fmt_flag(rec.paid_after_crack_fail),
            rec.victim_payoff,
            rec.hacker_payoff
        ));
    }
    fs::write(path, text).with_context(|| format!("writing playout dump {}", path.display()))
}

fn cmd_check(config: &RunConfig, emit: &Emitter) -> Result<ExitCode> {
    let points = config.check.as_ref().map(|c| c.points).unwrap_or_else(|| {
        config::CheckConfig::default().points
    });
    let report = checks::run(&config.params, config.variant, points)?;
    report.print_summary();
    match emit.format_or(OutputFormat::Json) {
        OutputFormat::Json => emit.write_json(&report)?,
        OutputFormat::Csv => {
            let mut text = String::from("parameter,hacker_type,mode,value,payoff,ransom,regime\n");
            for sweep in &report.sweeps {
                for point in &sweep.points {
                    let regime = match point.regime {
                        RansomRegime::Small => "small",
                        RansomRegime::Large => "large",
                    };
                    let mode = match sweep.mode {
                        ransom_game::equilibrium::EvalMode::FixedRansom(_) => "fixed_ransom",
                        ransom_game::equilibrium::EvalMode::Equilibrium => "equilibrium",
                    };
                    text.push_str(&format!(
                        "{},{},{mode},{},{},{},{regime}\n",
                        sweep.parameter, sweep.hacker_type, point.value, point.payoff, point.ransom
                    ));
                }
            }
            emit.write(&text)?;
        }
    }
    if report.violations > 0 {
        return Ok(ExitCode::from(5));
    }
    Ok(ExitCode::SUCCESS)
}
