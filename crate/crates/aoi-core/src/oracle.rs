//! Ground-truth age integration from the raw event log.
//!
//! Independent of the peak machinery: the age process is rebuilt directly
//! from matched arrival/departure pairs (age at time t is t minus the
//! arrival time of the freshest delivered packet) and integrated exactly
//! per linear segment. No peaks, rewards or renewal structure enter, so
//! this module can arbitrate the estimators it checks.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::sample_path::{EventKind, EventLog};

/// Piecewise-linear age trajectory: slope one everywhere, dropping at each
/// departure to the departing packet's system delay.
#[derive(Debug, Clone)]
pub struct AoiTrajectory<R> {
    /// (departure time, age immediately after) per departure, time-sorted.
    drops: Vec<(R, R)>,
}

/// Rebuilds the trajectory from a time-sorted log with matched
/// arrival/departure pairs.
pub fn trajectory_from_log<R: Real>(log: &EventLog<R>) -> Result<AoiTrajectory<R>> {
    let mut arrivals: HashMap<u64, R> = HashMap::new();
    let mut drops = Vec::new();
    let mut last_time = R::neg_infinity();
    for (i, e) in log.events.iter().enumerate() {
        // rejects NaN times as well as regressions
        match e.time.partial_cmp(&last_time) {
            Some(std::cmp::Ordering::Less) | None => {
                return Err(Error::MalformedLog(format!(
                    "event {} at time {} is earlier than its predecessor",
                    i, e.time
                )));
            }
            _ => {}
        }
        last_time = e.time;
        match e.kind {
            EventKind::Arrival => {
                arrivals.insert(e.packet, e.time);
            }
            EventKind::Departure => {
                let arrival = arrivals.remove(&e.packet).ok_or_else(|| {
                    Error::MalformedLog(format!(
                        "packet {} departs at {} without an arrival",
                        e.packet, e.time
                    ))
                })?;
                if arrival > e.time {
                    return Err(Error::MalformedLog(format!(
                        "packet {} departs at {} before its arrival at {}",
                        e.packet, e.time, arrival
                    )));
                }
                drops.push((e.time, e.time - arrival));
            }
            EventKind::ServiceStart | EventKind::Drop | EventKind::Replace => {}
        }
    }
    if drops.is_empty() {
        return Err(Error::MalformedLog("log contains no departures".into()));
    }
    Ok(AoiTrajectory { drops })
}

impl<R: Real> AoiTrajectory<R> {
    /// First departure: the age is only defined once something arrived.
    pub fn start(&self) -> R {
        self.drops[0].0
    }

    /// Last departure; the trajectory is observed up to here.
    pub fn end(&self) -> R {
        self.drops[self.drops.len() - 1].0
    }

    /// Age at time `t` in [start, end]: time since the arrival of the
    /// freshest packet delivered by `t`.
    pub fn age_at(&self, t: R) -> R {
        let idx = self.drops.partition_point(|&(dt, _)| dt <= t);
        debug_assert!(idx > 0, "age undefined before the first departure");
        let (dt, age) = self.drops[idx - 1];
        age + (t - dt)
    }

    /// Fraction of [start, end] with age above `d`.
    pub fn time_above(&self, d: R) -> R {
        self.time_above_window(d, self.start(), self.end())
    }

    /// Fraction of [t0, t1] with age above `d`, exactly per linear segment.
    pub fn time_above_window(&self, d: R, t0: R, t1: R) -> R {
        debug_assert!(t0 >= self.start() && t1 <= self.end() && t0 < t1);
        let mut above = R::zero();
        for (i, &(dt, age)) in self.drops[..self.drops.len() - 1].iter().enumerate() {
            let seg_end = self.drops[i + 1].0;
            let lo = dt.max(t0);
            let hi = seg_end.min(t1);
            if hi <= lo {
                continue;
            }
            // age(t) = age + (t - dt) crosses d at dt + (d - age)
            let crossing = dt + (d - age);
            above += (hi - crossing.max(lo)).max(R::zero());
        }
        (above / (t1 - t0)).min(R::one()).max(R::zero())
    }

    /// Time-average age over [start, end].
    pub fn mean_age(&self) -> R {
        self.mean_age_window(self.start(), self.end())
    }

    /// Time-average age over [t0, t1], exact trapezoid per linear segment.
    pub fn mean_age_window(&self, t0: R, t1: R) -> R {
        debug_assert!(t0 >= self.start() && t1 <= self.end() && t0 < t1);
        let half = R::from_f64(0.5);
        let mut area = R::zero();
        for (i, &(dt, age)) in self.drops[..self.drops.len() - 1].iter().enumerate() {
            let seg_end = self.drops[i + 1].0;
            let lo = dt.max(t0);
            let hi = seg_end.min(t1);
            if hi <= lo {
                continue;
            }
            let age_lo = age + (lo - dt);
            let age_hi = age + (hi - dt);
            area += (hi - lo) * (age_lo + age_hi) * half;
        }
        area / (t1 - t0)
    }
}
