//! Sweep execution: one result row per sweep point.

use anyhow::{bail, Result};
use rayon::prelude::*;

use aoi_core::analytic::{
    bufferless_violation, dm11_violation, expected_ceil, mm11_violation, zero_wait_exp_violation,
    IdleModel,
};
use aoi_core::bounds::{lower_bound_from_path, phi1, phi2, BoundConfig};
use aoi_core::oracle::trajectory_from_log;
use aoi_core::sample_path::{simulate_with, LogDetail};
use aoi_core::{Discipline, Dist64, DistributionSpec, System64};

use crate::scenario::{NuHatChoice, Scenario, SweepVariable};

/// Row state: simulated/analytic columns are filled where they apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// Deterministic arrivals with an age limit below one inter-arrival
    /// gap: the limiting violation probability does not exist. The row
    /// keeps its pathwise (time-average) columns.
    Nonexistent,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Nonexistent => "nonexistent",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub sweep: f64,
    pub sim_p: Option<f64>,
    pub sim_stderr: Option<f64>,
    pub analytic_p: Option<f64>,
    pub phi: Option<f64>,
    pub lower_bound: Option<f64>,
    pub eta: Option<f64>,
    pub nu_hat_eta: Option<f64>,
    pub oracle_p: Option<f64>,
    pub status: RowStatus,
}

pub const CSV_HEADER: &str =
    "sweep,sim_p,sim_stderr,analytic_p,phi,lower_bound,eta,nu_hat_eta,oracle_p,status";

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Deterministic per-(point, replication) seed derivation.
pub fn derive_seed(base: u64, point: u64, rep: u64) -> u64 {
    splitmix(splitmix(base ^ point.wrapping_mul(0xA076_1D64_78BD_642F)) ^ rep)
}

/// Closed-form update departure rate of a bufferless system, where known.
fn exact_departure_rate(arrival: &Dist64, service: &Dist64) -> Option<f64> {
    match arrival {
        DistributionSpec::Exponential { .. } => {
            Some(1.0 / (1.0 / arrival.rate() + 1.0 / service.rate()))
        }
        DistributionSpec::Deterministic { .. } => {
            let lam = arrival.rate();
            Some(lam / expected_ceil(service, lam))
        }
        _ => None,
    }
}

fn analytic_value(system: &System64, d: f64) -> Option<f64> {
    let service = system.service;
    match system.discipline {
        Discipline::ZeroWait => match service {
            DistributionSpec::Exponential { rate } => {
                Some(zero_wait_exp_violation(rate, d).value)
            }
            _ => None,
        },
        Discipline::Gg11 => {
            let arrival = system.arrival?;
            let lam = arrival.rate();
            match (arrival, service) {
                (DistributionSpec::Exponential { .. }, DistributionSpec::Exponential { rate }) => {
                    Some(mm11_violation(lam, rate, d).value)
                }
                (
                    DistributionSpec::Deterministic { .. },
                    DistributionSpec::Exponential { rate },
                ) => dm11_violation(lam, rate, d).ok().map(|r| r.value),
                _ => {
                    let idle = IdleModel::for_arrival(&arrival).ok()?;
                    bufferless_violation(&service, &idle, d).ok().map(|r| r.value)
                }
            }
        }
        Discipline::Gg12Star => None,
    }
}

fn resolve_nu_hat(scenario: &Scenario, system: &System64) -> Result<Option<BoundSetup>> {
    let Some(arrival) = system.arrival else {
        return Ok(None); // zero-wait: no gap law to sample, bounds skipped
    };
    let nu_hat = match scenario.nu_hat {
        NuHatChoice::MinRate => None,
        NuHatChoice::Value(v) => Some(NuHatKind::Given(v)),
        NuHatChoice::Exact => {
            if system.discipline != Discipline::Gg11 {
                bail!(
                    "exact departure rate is only known for bufferless systems; \
                     use `min-rate` or a numeric nu_hat"
                );
            }
            match exact_departure_rate(&arrival, &system.service) {
                Some(v) => Some(NuHatKind::Exact(v)),
                None => bail!(
                    "exact departure rate is not known for arrival law {arrival}; \
                     use `min-rate` or a numeric nu_hat"
                ),
            }
        }
    };
    Ok(Some(BoundSetup { nu_hat }))
}

enum NuHatKind {
    Exact(f64),
    Given(f64),
}

struct BoundSetup {
    /// None selects min(lambda, mu).
    nu_hat: Option<NuHatKind>,
}

/// Runs every sweep point (concurrently) and assembles rows in sweep order.
pub fn run(scenario: &Scenario) -> Result<Vec<Row>> {
    // Fail early if the bound configuration cannot be resolved for this
    // system; per-point rescaling never changes the law family.
    resolve_nu_hat(scenario, &scenario.system)?;

    let rows: Result<Vec<Row>> = scenario
        .values
        .par_iter()
        .enumerate()
        .map(|(idx, &value)| run_point(scenario, idx as u64, value))
        .collect();
    rows
}

fn run_point(scenario: &Scenario, point: u64, value: f64) -> Result<Row> {
    let (system, d) = match scenario.sweep {
        SweepVariable::AgeLimit => (scenario.system, value),
        SweepVariable::Lambda => {
            let base = scenario
                .system
                .arrival
                .expect("lambda sweeps validated to carry an arrival law");
            let arrival = base.with_mean(1.0 / value).map_err(anyhow::Error::msg)?;
            let mut system = scenario.system;
            system.arrival = Some(arrival);
            (system, scenario.d.expect("lambda sweeps validated to fix d"))
        }
    };

    let status = match system.arrival {
        Some(DistributionSpec::Deterministic { .. }) => {
            let lam = system.arrival.unwrap().rate();
            if lam * d < 1.0 - 1e-9 {
                RowStatus::Nonexistent
            } else {
                RowStatus::Ok
            }
        }
        _ => RowStatus::Ok,
    };

    let analytic_p = if status == RowStatus::Ok {
        analytic_value(&system, d)
    } else {
        None
    };

    // Upper bound. One seed for the whole sweep: common random numbers
    // keep the bound curve smooth and monotone across d.
    let mut phi = None;
    let mut eta = None;
    let mut nu_hat_eta = None;
    if let Some(setup) = resolve_nu_hat(scenario, &system)? {
        let arrival = system.arrival.expect("bounds need an arrival law");
        let bound_seed = derive_seed(scenario.seed, u64::MAX, u64::MAX);
        let cfg = match setup.nu_hat {
            None => BoundConfig::min_rate(scenario.bound_samples, bound_seed),
            Some(NuHatKind::Exact(v)) => {
                BoundConfig::exact(v, scenario.bound_samples, bound_seed)
            }
            Some(NuHatKind::Given(v)) => {
                BoundConfig::user(v, scenario.bound_samples, bound_seed)
            }
        };
        let report = match system.discipline {
            Discipline::Gg12Star => phi2(&arrival, &system.service, d, &cfg),
            _ => phi1(&arrival, &system.service, d, &cfg),
        };
        phi = Some(report.phi);
        eta = Some(report.eta);
        nu_hat_eta = Some(report.worst_case_budget);
    }

    // Simulation, oracle and the pathwise lower bound. Replications run
    // concurrently on their own seeds; assembly stays in replication order.
    let mut sim_p = None;
    let mut sim_stderr = None;
    let mut oracle_p = None;
    let mut lower_bound = None;
    if scenario.peaks > 0 {
        struct Rep {
            value: f64,
            batch_stderr: f64,
            extras: Option<(f64, f64)>,
        }
        let reps: Result<Vec<Rep>> = (0..scenario.replications)
            .into_par_iter()
            .map(|rep| {
                let seed = derive_seed(scenario.seed, point, rep as u64);
                let detail = if rep == 0 {
                    LogDetail::Updates
                } else {
                    LogDetail::Off
                };
                let path = simulate_with(&system, scenario.peaks, seed, detail)
                    .map_err(anyhow::Error::msg)?;
                let est = path.violation_estimate(d);
                let extras = if rep == 0 {
                    let traj = trajectory_from_log(&path.log).map_err(anyhow::Error::msg)?;
                    let oracle = traj.time_above_window(d, path.window_start_time(), path.horizon);
                    let lower = lower_bound_from_path(&path).estimate(d).value;
                    Some((oracle, lower))
                } else {
                    None
                };
                Ok(Rep {
                    value: est.value,
                    batch_stderr: est.std_error,
                    extras,
                })
            })
            .collect();
        let reps = reps?;
        if let Some((oracle, lower)) = reps[0].extras {
            oracle_p = Some(oracle);
            lower_bound = Some(lower);
        }
        let n = reps.len() as f64;
        let mean = reps.iter().map(|r| r.value).sum::<f64>() / n;
        let stderr = if reps.len() >= 2 {
            let var = reps.iter().map(|r| (r.value - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            reps[0].batch_stderr
        };
        sim_p = Some(mean);
        sim_stderr = Some(stderr);
    }

    Ok(Row {
        sweep: value,
        sim_p,
        sim_stderr,
        analytic_p,
        phi,
        lower_bound,
        eta,
        nu_hat_eta,
        oracle_p,
        status,
    })
}

fn cell(v: Option<f64>) -> String {
    // 9 significant digits, `.` decimal separator
    v.map(|x| format!("{x:.8e}")).unwrap_or_default()
}

/// Renders rows as CSV (header plus one line per sweep point).
pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{:.8e},{},{},{},{},{},{},{},{},{}\n",
            r.sweep,
            cell(r.sim_p),
            cell(r.sim_stderr),
            cell(r.analytic_p),
            cell(r.phi),
            cell(r.lower_bound),
            cell(r.eta),
            cell(r.nu_hat_eta),
            cell(r.oracle_p),
            r.status.as_str()
        ));
    }
    out
}
