use std::fs;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use aoi_cli::plot::render_svg;
use aoi_cli::runner::{run, to_csv};
use aoi_cli::scenario::{NuHatChoice, Scenario, SweepVariable};
use aoi_core::oracle::trajectory_from_log;
use aoi_core::sample_path::{simulate_with, EventLog, LogDetail, SystemSpec};
use aoi_core::{Discipline, Dist64};

/// Age-of-Information toolkit: sweep scenarios, exact curves, bounds.
#[derive(Parser)]
#[command(name = "aoi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep scenario and emit a CSV table (and optionally an SVG).
    Run {
        /// Scenario file (TOML key/value).
        #[arg(long)]
        scenario: PathBuf,
        /// Write the result table here; stdout when omitted.
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Render the table as an SVG chart.
        #[arg(long)]
        out_svg: Option<PathBuf>,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the peaks per simulation (0 skips simulation).
        #[arg(long)]
        peaks: Option<usize>,
        /// Override the departure-rate choice: exact, min-rate or a number.
        #[arg(long, value_name = "MODE")]
        nu_hat: Option<String>,
        /// Override the discipline: gg11, gg12star or zero-wait.
        #[arg(long)]
        system: Option<String>,
    },
    /// Simulate one system and export its event log as CSV.
    Simulate {
        /// gg11, gg12star or zero-wait.
        #[arg(long)]
        system: String,
        /// Inter-arrival law (omit for zero-wait).
        #[arg(long)]
        arrival: Option<String>,
        /// Service law.
        #[arg(long)]
        service: String,
        #[arg(long, default_value_t = 1000)]
        peaks: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `full` logs every generated arrival (drops/replacements
        /// included); `updates` logs served packets only.
        #[arg(long, default_value = "full")]
        detail: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate the age process of an event-log CSV.
    Oracle {
        /// Event-log CSV (columns event,time,packet_id).
        #[arg(long)]
        log: PathBuf,
        /// Age limits to evaluate.
        #[arg(short = 'd', long = "limit")]
        limits: Vec<f64>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            scenario,
            out_csv,
            out_svg,
            seed,
            peaks,
            nu_hat,
            system,
        } => {
            let text = fs::read_to_string(&scenario)
                .with_context(|| format!("reading {}", scenario.display()))?;
            let mut sc = Scenario::from_toml(&text)?;
            if let Some(seed) = seed {
                sc.seed = seed;
            }
            if let Some(peaks) = peaks {
                sc.peaks = peaks;
            }
            if let Some(mode) = nu_hat {
                sc.nu_hat = NuHatChoice::parse(&mode)?;
            }
            if let Some(name) = system {
                let discipline: Discipline = name.parse().map_err(anyhow::Error::msg)?;
                let arrival = if discipline == Discipline::ZeroWait {
                    None
                } else {
                    Some(sc.system.arrival.context(
                        "cannot switch to an arrival-driven system: the scenario has no arrival law",
                    )?)
                };
                sc.system = SystemSpec::new(discipline, arrival, sc.system.service)
                    .map_err(anyhow::Error::msg)?;
            }

            let rows = run(&sc)?;
            let csv = to_csv(&rows);
            match &out_csv {
                Some(path) => {
                    fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
                    eprintln!("wrote {} rows to {}", rows.len(), path.display());
                }
                None => print!("{csv}"),
            }
            if let Some(path) = &out_svg {
                let label = match sc.sweep {
                    SweepVariable::Lambda => "arrival rate",
                    SweepVariable::AgeLimit => "age limit",
                };
                let svg = render_svg(&rows, label)?;
                fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
                eprintln!("wrote chart to {}", path.display());
            }
            Ok(())
        }
        Command::Simulate {
            system,
            arrival,
            service,
            peaks,
            seed,
            detail,
            out,
        } => {
            let discipline: Discipline = system.parse().map_err(anyhow::Error::msg)?;
            let arrival: Option<Dist64> = arrival
                .map(|s| s.parse().map_err(anyhow::Error::msg))
                .transpose()?;
            let service: Dist64 = service.parse().map_err(anyhow::Error::msg)?;
            let spec = SystemSpec::new(discipline, arrival, service).map_err(anyhow::Error::msg)?;
            let detail = match detail.as_str() {
                "full" => LogDetail::Full,
                "updates" => LogDetail::Updates,
                other => anyhow::bail!("detail must be `full` or `updates`, got `{other}`"),
            };
            let path = simulate_with(&spec, peaks, seed, detail).map_err(anyhow::Error::msg)?;
            let mut buf = Vec::new();
            path.log.write_csv(&mut buf)?;
            fs::write(&out, buf).with_context(|| format!("writing {}", out.display()))?;
            eprintln!(
                "wrote {} events ({} peaks) to {}",
                path.log.events.len(),
                path.peaks.len(),
                out.display()
            );
            Ok(())
        }
        Command::Oracle { log, limits } => {
            let file = fs::File::open(&log).with_context(|| format!("opening {}", log.display()))?;
            let events = EventLog::<f64>::read_csv(BufReader::new(file)).map_err(anyhow::Error::msg)?;
            let traj = trajectory_from_log(&events).map_err(anyhow::Error::msg)?;
            for d in limits {
                println!("time_above({d}) = {:.9}", traj.time_above(d));
            }
            println!("mean_age = {:.9}", traj.mean_age());
            Ok(())
        }
    }
}
