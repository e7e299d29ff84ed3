//! Event-driven simulation of the three disciplines and the peak-based
//! estimators built on the resulting sample paths.
//!
//! The simulator produces one [`PeakRecord`] per information-update
//! departure. Age peaks immediately before each departure, so the record
//! carries everything the renewal-reward estimators need: service time,
//! idle time before service, waiting time, the age peak itself and the
//! inter-departure gap. A time-sorted event log rides along for the
//! independent oracle and for CSV export.

use std::fmt;
use std::str::FromStr;

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::rng::RngStream;
use crate::stats::{batch_ratio_std_error, lag_correlation};

/// Default number of batches for batch-means standard errors.
pub const BATCH_COUNT: usize = 100;

/// Number of leading peaks discarded before estimation, to wash out the
/// empty-system start. Short paths keep at least half their peaks.
pub fn warmup_len(n_peaks: usize) -> usize {
    100.min(n_peaks / 2)
}

/// Queueing discipline of the single-server system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discipline {
    /// Bufferless: arrivals finding the server busy are discarded.
    Gg11,
    /// Unit buffer holding only the freshest waiting packet: a new arrival
    /// replaces whatever is queued.
    Gg12Star,
    /// A fresh packet is generated exactly at each departure.
    ZeroWait,
}

impl fmt::Display for Discipline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Discipline::Gg11 => "gg11",
            Discipline::Gg12Star => "gg12star",
            Discipline::ZeroWait => "zero-wait",
        };
        f.write_str(s)
    }
}

impl FromStr for Discipline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gg11" => Ok(Discipline::Gg11),
            "gg12star" | "gg12*" => Ok(Discipline::Gg12Star),
            "zero-wait" | "zerowait" | "zero_wait" => Ok(Discipline::ZeroWait),
            other => Err(Error::Parse(format!(
                "unknown system `{other}`; expected gg11, gg12star or zero-wait"
            ))),
        }
    }
}

/// A discipline plus its input laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec<R: Real> {
    pub discipline: Discipline,
    /// Inter-arrival law; absent exactly for the zero-wait policy.
    pub arrival: Option<DistributionSpec<R>>,
    pub service: DistributionSpec<R>,
}

impl<R: Real> SystemSpec<R> {
    pub fn gg11(arrival: DistributionSpec<R>, service: DistributionSpec<R>) -> Self {
        Self {
            discipline: Discipline::Gg11,
            arrival: Some(arrival),
            service,
        }
    }

    pub fn gg12_star(arrival: DistributionSpec<R>, service: DistributionSpec<R>) -> Self {
        Self {
            discipline: Discipline::Gg12Star,
            arrival: Some(arrival),
            service,
        }
    }

    pub fn zero_wait(service: DistributionSpec<R>) -> Self {
        Self {
            discipline: Discipline::ZeroWait,
            arrival: None,
            service,
        }
    }

    pub fn new(
        discipline: Discipline,
        arrival: Option<DistributionSpec<R>>,
        service: DistributionSpec<R>,
    ) -> Result<Self> {
        match (discipline, arrival) {
            (Discipline::ZeroWait, None) => Ok(Self::zero_wait(service)),
            (Discipline::ZeroWait, Some(_)) => Err(Error::InvalidParameter(
                "zero-wait systems carry no arrival law".into(),
            )),
            (_, None) => Err(Error::InvalidParameter(format!(
                "{discipline} requires an arrival law"
            ))),
            (Discipline::Gg11, Some(a)) => Ok(Self::gg11(a, service)),
            (Discipline::Gg12Star, Some(a)) => Ok(Self::gg12_star(a, service)),
        }
    }

    /// Mean arrival rate, when an arrival law is present.
    pub fn arrival_rate(&self) -> Option<R> {
        self.arrival.map(|a| a.rate())
    }

    /// Mean service rate.
    pub fn service_rate(&self) -> R {
        self.service.rate()
    }
}

/// What happened at a log timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Arrival,
    ServiceStart,
    Departure,
    /// Bufferless discard of an arrival that found the server busy.
    Drop,
    /// Unit-buffer displacement of the queued packet by a fresher arrival.
    Replace,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::Arrival => "arrival",
            EventKind::ServiceStart => "service_start",
            EventKind::Departure => "departure",
            EventKind::Drop => "drop",
            EventKind::Replace => "replace",
        }
    }

    // Ordering of simultaneous events: departures are processed first so a
    // coincident arrival can enter service immediately.
    fn tie_rank(&self) -> u8 {
        match self {
            EventKind::Departure => 0,
            EventKind::Arrival => 1,
            EventKind::Drop => 2,
            EventKind::Replace => 2,
            EventKind::ServiceStart => 3,
        }
    }
}

impl FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arrival" => Ok(EventKind::Arrival),
            "service_start" => Ok(EventKind::ServiceStart),
            "departure" => Ok(EventKind::Departure),
            "drop" => Ok(EventKind::Drop),
            "replace" => Ok(EventKind::Replace),
            other => Err(Error::Parse(format!("unknown event kind `{other}`"))),
        }
    }
}

/// One log entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event<R> {
    pub kind: EventKind,
    pub time: R,
    pub packet: u64,
}

/// Time-sorted event log of a simulation run.
#[derive(Debug, Clone, Default)]
pub struct EventLog<R> {
    pub events: Vec<Event<R>>,
}

impl<R: Real> EventLog<R> {
    /// Writes the log as CSV with columns `event,time,packet_id`.
    ///
    /// Times use the shortest decimal representation that parses back to
    /// the same float, so a write/read round trip is lossless.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "event,time,packet_id")?;
        for e in &self.events {
            writeln!(out, "{},{},{}", e.kind.as_str(), e.time, e.packet)?;
        }
        Ok(())
    }

    /// Parses a CSV log produced by [`Self::write_csv`].
    pub fn read_csv<Rd: std::io::BufRead>(input: Rd) -> Result<Self> {
        let mut events = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line == "event,time,packet_id") {
                continue;
            }
            let mut fields = line.split(',');
            let (kind, time, packet) = match (fields.next(), fields.next(), fields.next()) {
                (Some(k), Some(t), Some(p)) if fields.next().is_none() => (k, t, p),
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected `event,time,packet_id`, got `{line}`",
                        lineno + 1
                    )))
                }
            };
            let kind: EventKind = kind.parse()?;
            let time = time
                .parse::<f64>()
                .map(R::from_f64)
                .map_err(|_| Error::Parse(format!("line {}: bad time `{time}`", lineno + 1)))?;
            let packet = packet
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("line {}: bad packet id `{packet}`", lineno + 1)))?;
            events.push(Event { kind, time, packet });
        }
        Ok(Self { events })
    }
}

/// How much the simulator logs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogDetail {
    /// No events; peak records only. For bulk estimation runs.
    Off,
    /// Arrival, service start and departure of served packets only. Enough
    /// for the oracle; memory stays proportional to the number of peaks.
    #[default]
    Updates,
    /// Every generated arrival plus drop/replace events. Proportional to
    /// the arrival count, so only suitable for moderate runs.
    Full,
}

struct LogBuilder<R> {
    detail: LogDetail,
    events: Vec<Event<R>>,
}

impl<R: Real> LogBuilder<R> {
    fn new(detail: LogDetail, capacity: usize) -> Self {
        Self {
            detail,
            events: Vec::with_capacity(if detail == LogDetail::Off { 0 } else { capacity }),
        }
    }

    fn push(&mut self, kind: EventKind, time: R, packet: u64) {
        if self.detail != LogDetail::Off {
            self.events.push(Event { kind, time, packet });
        }
    }

    fn push_full(&mut self, kind: EventKind, time: R, packet: u64) {
        if self.detail == LogDetail::Full {
            self.push(kind, time, packet);
        }
    }

    fn finish(mut self) -> EventLog<R> {
        self.events.sort_by(|a, b| {
            a.time
                .partial_cmp(&b.time)
                .expect("finite event times")
                .then(a.kind.tie_rank().cmp(&b.kind.tie_rank()))
        });
        EventLog {
            events: self.events,
        }
    }
}

/// Per-departure record of the quantities driving the age process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakRecord<R> {
    /// 1-based index among the recorded peaks.
    pub index: u64,
    /// Arrival time of the departing packet.
    pub arrival: R,
    /// Departure time; equals arrival + waiting + service.
    pub departure: R,
    /// Service time.
    pub service: R,
    /// Server idle time immediately before this packet's service.
    pub idle: R,
    /// Time the packet spent queued before service (bufferless and
    /// zero-wait systems never queue, so it is zero there).
    pub waiting: R,
    /// Age immediately before the departure: departure time minus the
    /// previous served packet's arrival time. Stored as the component sum
    /// (previous service + idle + service + previous waiting) so the
    /// pathwise identities hold exactly.
    pub peak_age: R,
    /// Gap to the previous departure, stored as idle + service.
    pub inter_departure: R,
}

impl<R: Real> PeakRecord<R> {
    /// Time the age spends above `d` between the previous departure and
    /// this one: min{(peak_age - d)^+, inter_departure}.
    pub fn time_above_limit(&self, d: R) -> R {
        (self.peak_age - d).max(R::zero()).min(self.inter_departure)
    }

    /// System delay of this packet (the age value right after it departs).
    pub fn delay(&self) -> R {
        self.departure - self.arrival
    }
}

/// An ordered run of peak records plus the event log they came from.
#[derive(Debug, Clone)]
pub struct SamplePath<R> {
    pub discipline: Discipline,
    pub peaks: Vec<PeakRecord<R>>,
    /// Departure time of the packet preceding `peaks[0]`; anchors the
    /// observation window.
    pub first_departure: R,
    /// Total observed time (the last departure).
    pub horizon: R,
    pub log: EventLog<R>,
}

/// A point estimate with a batch-means standard error.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<R> {
    pub value: R,
    pub std_error: R,
    /// Number of peaks the estimate used.
    pub n: usize,
}

/// Fixed-lag independence diagnostic for the estimator's reward sequence.
#[derive(Debug, Clone, Copy)]
pub struct LagIndependenceReport<R> {
    /// Lag the correlations are measured at.
    pub lag: usize,
    /// Peaks used.
    pub n: usize,
    /// Acceptance band 4/sqrt(n) for a correlation of independent terms.
    pub band: R,
    pub reward_corr: R,
    pub inter_departure_corr: R,
    /// Correlation outside the band (never set for degenerate sequences).
    pub reward_flagged: bool,
    pub inter_departure_flagged: bool,
    /// Sequence was (numerically) constant, so correlation is undefined.
    pub reward_degenerate: bool,
    pub inter_departure_degenerate: bool,
}

/// Simulates `n_peaks` information-update departures (default log detail).
///
/// Deterministic in `(spec, seed)`: arrivals draw from substream 0 of the
/// seed and services from substream 1.
pub fn simulate<R: Real>(spec: &SystemSpec<R>, n_peaks: usize, seed: u64) -> Result<SamplePath<R>> {
    simulate_with(spec, n_peaks, seed, LogDetail::Updates)
}

/// [`simulate`] with explicit log detail.
pub fn simulate_with<R: Real>(
    spec: &SystemSpec<R>,
    n_peaks: usize,
    seed: u64,
    detail: LogDetail,
) -> Result<SamplePath<R>> {
    if n_peaks < 2 {
        return Err(Error::TooFewPeaks {
            got: n_peaks,
            min: 2,
        });
    }
    let mut arrivals = RngStream::substream(seed, 0);
    let mut services = RngStream::substream(seed, 1);
    let mut log = LogBuilder::new(detail, 3 * (n_peaks + 1));
    let svc = spec.service;

    let mut peaks = Vec::with_capacity(n_peaks);

    // Serve the first packet, then record one peak per later departure so
    // every record has a valid predecessor.
    let (first_departure, log) = match spec.discipline {
        Discipline::ZeroWait => {
            let mut next_id: u64 = 0;
            let x0 = svc.sample(&mut services);
            let mut prev_departure = x0;
            let mut prev_service = x0;
            log.push(EventKind::Arrival, R::zero(), next_id);
            log.push(EventKind::ServiceStart, R::zero(), next_id);
            log.push(EventKind::Departure, prev_departure, next_id);
            next_id += 1;
            let first_departure = prev_departure;
            for k in 1..=n_peaks {
                let arrival = prev_departure;
                let x = svc.sample(&mut services);
                let departure = arrival + x;
                log.push(EventKind::Arrival, arrival, next_id);
                log.push(EventKind::ServiceStart, arrival, next_id);
                log.push(EventKind::Departure, departure, next_id);
                next_id += 1;
                peaks.push(PeakRecord {
                    index: k as u64,
                    arrival,
                    departure,
                    service: x,
                    idle: R::zero(),
                    waiting: R::zero(),
                    peak_age: prev_service + x,
                    inter_departure: x,
                });
                prev_service = x;
                prev_departure = departure;
            }
            (first_departure, log)
        }
        Discipline::Gg11 => {
            let arr = spec.arrival.expect("gg11 carries an arrival law");
            let mut next_id: u64 = 0;
            let mut next_arrival = arr.sample(&mut arrivals);

            let take_arrival = |arrivals: &mut RngStream,
                                    log: &mut LogBuilder<R>,
                                    after: R,
                                    na: &mut R,
                                    id: &mut u64|
             -> (R, u64) {
                // Discard arrivals that land strictly before the server
                // frees up; a tie counts as after the departure.
                while *na < after {
                    log.push_full(EventKind::Arrival, *na, *id);
                    log.push_full(EventKind::Drop, *na, *id);
                    *id += 1;
                    *na += arr.sample(arrivals);
                }
                let t = *na;
                let pid = *id;
                *id += 1;
                *na += arr.sample(arrivals);
                (t, pid)
            };

            let (ta0, id0) =
                take_arrival(&mut arrivals, &mut log, R::zero(), &mut next_arrival, &mut next_id);
            let x0 = svc.sample(&mut services);
            let td0 = ta0 + x0;
            log.push(EventKind::Arrival, ta0, id0);
            log.push(EventKind::ServiceStart, ta0, id0);
            log.push(EventKind::Departure, td0, id0);
            let first_departure = td0;
            let mut prev_departure = td0;
            let mut prev_service = x0;
            for k in 1..=n_peaks {
                let (arrival, id) = take_arrival(
                    &mut arrivals,
                    &mut log,
                    prev_departure,
                    &mut next_arrival,
                    &mut next_id,
                );
                let idle = arrival - prev_departure;
                let x = svc.sample(&mut services);
                let departure = arrival + x;
                log.push(EventKind::Arrival, arrival, id);
                log.push(EventKind::ServiceStart, arrival, id);
                log.push(EventKind::Departure, departure, id);
                peaks.push(PeakRecord {
                    index: k as u64,
                    arrival,
                    departure,
                    service: x,
                    idle,
                    waiting: R::zero(),
                    peak_age: prev_service + idle + x,
                    inter_departure: idle + x,
                });
                prev_service = x;
                prev_departure = departure;
            }
            (first_departure, log)
        }
        Discipline::Gg12Star => {
            let arr = spec.arrival.expect("gg12star carries an arrival law");
            let mut next_id: u64 = 0;
            let mut next_arrival = arr.sample(&mut arrivals);
            // Freshest waiting packet, if any.
            let mut queue: Option<(R, u64)> = None;

            // Move arrivals strictly before `until` into the queue; each one
            // displaces the previous occupant.
            let fill_queue = |arrivals: &mut RngStream,
                                  log: &mut LogBuilder<R>,
                                  queue: &mut Option<(R, u64)>,
                                  until: R,
                                  na: &mut R,
                                  id: &mut u64| {
                while *na < until {
                    if let Some((_, qid)) = queue.take() {
                        log.push_full(EventKind::Replace, *na, qid);
                    }
                    log.push_full(EventKind::Arrival, *na, *id);
                    *queue = Some((*na, *id));
                    *id += 1;
                    *na += arr.sample(arrivals);
                }
            };

            // First packet: server idle, queue empty, so it is served on arrival.
            let ta0 = next_arrival;
            let id0 = next_id;
            next_id += 1;
            next_arrival += arr.sample(&mut arrivals);
            let x0 = svc.sample(&mut services);
            let td0 = ta0 + x0;
            log.push(EventKind::Arrival, ta0, id0);
            log.push(EventKind::ServiceStart, ta0, id0);
            fill_queue(
                &mut arrivals,
                &mut log,
                &mut queue,
                td0,
                &mut next_arrival,
                &mut next_id,
            );
            log.push(EventKind::Departure, td0, id0);

            let first_departure = td0;
            let mut prev_departure = td0;
            let mut prev_service = x0;
            let mut prev_waiting = R::zero();
            for k in 1..=n_peaks {
                let (arrival, id, idle, waiting, service_start) = match queue.take() {
                    Some((qt, qid)) => {
                        // Queued packet enters service the moment the server frees.
                        let start = prev_departure;
                        (qt, qid, R::zero(), start - qt, start)
                    }
                    None => {
                        // Queue empty: the next arrival is served immediately.
                        let t = next_arrival;
                        let pid = next_id;
                        next_id += 1;
                        next_arrival += arr.sample(&mut arrivals);
                        log.push_full(EventKind::Arrival, t, pid);
                        (t, pid, t - prev_departure, R::zero(), t)
                    }
                };
                if detail == LogDetail::Updates {
                    log.push(EventKind::Arrival, arrival, id);
                }
                log.push(EventKind::ServiceStart, service_start, id);
                let x = svc.sample(&mut services);
                let departure = service_start + x;
                fill_queue(
                    &mut arrivals,
                    &mut log,
                    &mut queue,
                    departure,
                    &mut next_arrival,
                    &mut next_id,
                );
                log.push(EventKind::Departure, departure, id);
                peaks.push(PeakRecord {
                    index: k as u64,
                    arrival,
                    departure,
                    service: x,
                    idle,
                    waiting,
                    peak_age: prev_service + idle + x + prev_waiting,
                    inter_departure: idle + x,
                });
                prev_service = x;
                prev_waiting = waiting;
                prev_departure = departure;
            }
            (first_departure, log)
        }
    };

    let horizon = peaks.last().map(|p| p.departure).unwrap_or(first_departure);
    Ok(SamplePath {
        discipline: spec.discipline,
        peaks,
        first_departure,
        horizon,
        log: log.finish(),
    })
}

impl<R: Real> SamplePath<R> {
    /// Number of leading peaks excluded from estimation.
    pub fn warmup_len(&self) -> usize {
        warmup_len(self.peaks.len())
    }

    /// Peaks entering the estimators.
    pub fn window(&self) -> &[PeakRecord<R>] {
        &self.peaks[self.warmup_len()..]
    }

    /// Departure time anchoring the estimation window: the window covers
    /// exactly (window_start_time, last departure].
    pub fn window_start_time(&self) -> R {
        let w = self.warmup_len();
        if w == 0 {
            self.first_departure
        } else {
            self.peaks[w - 1].departure
        }
    }

    /// Length of the estimation window in time.
    pub fn window_duration(&self) -> R {
        self.horizon - self.window_start_time()
    }

    /// Fraction of the observation window with age above `d`: the summed
    /// per-peak rewards over the window duration.
    pub fn violation_estimate(&self, d: R) -> Estimate<R> {
        let w = self.window();
        let rewards: Vec<R> = w.iter().map(|p| p.time_above_limit(d)).collect();
        let gaps: Vec<R> = w.iter().map(|p| p.inter_departure).collect();
        let total: R = rewards.iter().copied().sum();
        Estimate {
            value: (total / self.window_duration()).min(R::one()).max(R::zero()),
            std_error: batch_ratio_std_error(&rewards, &gaps, BATCH_COUNT),
            n: w.len(),
        }
    }

    /// Renewal-reward form of the violation estimate: the empirical
    /// departure rate of the window times the mean per-peak reward.
    ///
    /// The rate counts the window's peaks over the elapsed time from the
    /// departure anchoring the window to the last departure, so the same
    /// span feeds both factors and the product agrees with
    /// [`Self::violation_estimate`] up to evaluation order.
    pub fn renewal_reward_estimate(&self, d: R) -> Estimate<R> {
        let w = self.window();
        let rewards: Vec<R> = w.iter().map(|p| p.time_above_limit(d)).collect();
        let gaps: Vec<R> = w.iter().map(|p| p.inter_departure).collect();
        let m = R::from_f64(w.len() as f64);
        let rate = m / self.window_duration();
        let mean_reward = rewards.iter().copied().sum::<R>() / m;
        Estimate {
            value: rate * mean_reward,
            std_error: batch_ratio_std_error(&rewards, &gaps, BATCH_COUNT),
            n: w.len(),
        }
    }

    /// Time-average age over the observation window, by exact trapezoid
    /// integration of the piecewise-linear age process.
    pub fn mean_age_estimate(&self) -> Estimate<R> {
        let w = self.window();
        let half = R::from_f64(0.5);
        let areas: Vec<R> = w
            .iter()
            .map(|p| {
                let age_after_prev = p.peak_age - p.inter_departure;
                p.inter_departure * (age_after_prev + p.peak_age) * half
            })
            .collect();
        let gaps: Vec<R> = w.iter().map(|p| p.inter_departure).collect();
        let total: R = areas.iter().copied().sum();
        Estimate {
            value: total / self.window_duration(),
            std_error: batch_ratio_std_error(&areas, &gaps, BATCH_COUNT),
            n: w.len(),
        }
    }

    /// Lag-2 correlation check of the reward and inter-departure sequences.
    ///
    /// The renewal-reward estimator relies on terms two peaks apart being
    /// independent; this measures that on the realized path and flags
    /// correlations outside 4/sqrt(n). Not available for the unit-buffer
    /// system, where the waiting time breaks the lag structure.
    pub fn lag_independence_diagnostic(&self, d: R) -> Result<LagIndependenceReport<R>> {
        if self.discipline == Discipline::Gg12Star {
            return Err(Error::UnsupportedDiscipline(
                Discipline::Gg12Star.to_string(),
            ));
        }
        if self.peaks.len() < 10_000 {
            return Err(Error::TooFewPeaks {
                got: self.peaks.len(),
                min: 10_000,
            });
        }
        let lag = 2;
        let w = self.window();
        let rewards: Vec<R> = w.iter().map(|p| p.time_above_limit(d)).collect();
        let gaps: Vec<R> = w.iter().map(|p| p.inter_departure).collect();
        let band = R::from_f64(4.0) / R::from_f64(w.len() as f64).sqrt();
        let reward_corr = lag_correlation(&rewards, lag);
        let gap_corr = lag_correlation(&gaps, lag);
        Ok(LagIndependenceReport {
            lag,
            n: w.len(),
            band,
            reward_corr: reward_corr.unwrap_or(R::zero()),
            inter_departure_corr: gap_corr.unwrap_or(R::zero()),
            reward_flagged: reward_corr.is_some_and(|c| c.abs() > band),
            inter_departure_flagged: gap_corr.is_some_and(|c| c.abs() > band),
            reward_degenerate: reward_corr.is_none(),
            inter_departure_degenerate: gap_corr.is_none(),
        })
    }
}
