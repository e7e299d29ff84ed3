//! Scenario files: TOML key/value with the distribution grammar.
//!
//! ```toml
//! system = "gg11"                 # gg11 | gg12star | zero-wait
//! arrival = "deterministic(2.5)"  # omit for zero-wait
//! service = "exp(1)"
//! sweep = "lambda"                # sweep variable: "lambda" | "d"
//! values = [0.2, 0.3, 0.45]       # strictly increasing, positive
//! d = 5.0                         # fixed age limit (lambda sweeps)
//! peaks = 1000000                 # 0 skips simulation (analytic/bounds only)
//! replications = 5
//! seed = 42
//! nu_hat = "exact"                # "exact" | "min-rate" | a number
//! bound_samples = 1000000
//! ```
//!
//! For `sweep = "d"` the arrival law is used as given (an optional
//! `lambda` rescales it); for `sweep = "lambda"` the arrival law is
//! rescaled to mean 1/lambda at every sweep point.

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use aoi_core::{Discipline, Dist64, System64, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Lambda,
    AgeLimit,
}

/// Departure-rate choice for the upper bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuHatChoice {
    /// Closed-form departure rate (Poisson or deterministic arrivals,
    /// bufferless only).
    Exact,
    MinRate,
    Value(f64),
}

impl NuHatChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(NuHatChoice::Exact),
            "min-rate" => Ok(NuHatChoice::MinRate),
            other => other
                .parse::<f64>()
                .map(NuHatChoice::Value)
                .map_err(|_| anyhow!("nu_hat must be `exact`, `min-rate` or a number, got `{other}`")),
        }
    }
}

/// A validated sweep scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub system: System64,
    pub sweep: SweepVariable,
    pub values: Vec<f64>,
    /// Fixed age limit (lambda sweeps).
    pub d: Option<f64>,
    pub peaks: usize,
    pub replications: usize,
    pub seed: u64,
    pub nu_hat: NuHatChoice,
    pub bound_samples: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    system: String,
    arrival: Option<String>,
    service: String,
    sweep: String,
    values: Vec<f64>,
    d: Option<f64>,
    lambda: Option<f64>,
    peaks: Option<usize>,
    replications: Option<usize>,
    seed: Option<u64>,
    nu_hat: Option<toml::Value>,
    bound_samples: Option<usize>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).context("invalid scenario file")?;

        let discipline: Discipline = file
            .system
            .parse()
            .map_err(|e| anyhow!("system: {e}"))?;
        let mut arrival: Option<Dist64> = file
            .arrival
            .as_deref()
            .map(|s| s.parse().map_err(|e| anyhow!("arrival: {e}")))
            .transpose()?;
        let service: Dist64 = file
            .service
            .parse()
            .map_err(|e| anyhow!("service: {e}"))?;

        if let Some(lambda) = file.lambda {
            let base = arrival
                .ok_or_else(|| anyhow!("`lambda` given but the scenario has no arrival law"))?;
            arrival = Some(base.with_mean(1.0 / lambda).map_err(|e| anyhow!("{e}"))?);
        }

        let system = SystemSpec::new(discipline, arrival, service).map_err(|e| anyhow!("{e}"))?;

        let sweep = match file.sweep.as_str() {
            "lambda" => SweepVariable::Lambda,
            "d" => SweepVariable::AgeLimit,
            other => bail!("sweep must be `lambda` or `d`, got `{other}`"),
        };
        if sweep == SweepVariable::Lambda && discipline == Discipline::ZeroWait {
            bail!("zero-wait systems have no arrival rate to sweep");
        }
        if sweep == SweepVariable::Lambda && file.d.is_none() {
            bail!("lambda sweeps need a fixed `d`");
        }

        if file.values.is_empty() {
            bail!("`values` must list at least one sweep point");
        }
        for w in file.values.windows(2) {
            if w[1] <= w[0] {
                bail!("`values` must be strictly increasing, got {} then {}", w[0], w[1]);
            }
        }
        if file.values[0] <= 0.0 {
            bail!("`values` must be positive, got {}", file.values[0]);
        }

        let nu_hat = match &file.nu_hat {
            None => NuHatChoice::MinRate,
            Some(toml::Value::String(s)) => NuHatChoice::parse(s)?,
            Some(toml::Value::Float(v)) => NuHatChoice::Value(*v),
            Some(toml::Value::Integer(v)) => NuHatChoice::Value(*v as f64),
            Some(other) => bail!("nu_hat must be a string or number, got {other}"),
        };

        Ok(Scenario {
            system,
            sweep,
            values: file.values,
            d: file.d,
            peaks: file.peaks.unwrap_or(1_000_000),
            replications: file.replications.unwrap_or(5).max(1),
            seed: file.seed.unwrap_or(0),
            nu_hat,
            bound_samples: file.bound_samples.unwrap_or(1_000_000),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
        system = "gg11"
        arrival = "deterministic(2.5)"
        service = "exp(1)"
        sweep = "d"
        values = [2.5, 5.0, 10.0]
    "#;

    #[test]
    fn parses_with_defaults() {
        let s = Scenario::from_toml(BASE).unwrap();
        assert_eq!(s.peaks, 1_000_000);
        assert_eq!(s.replications, 5);
        assert_eq!(s.nu_hat, NuHatChoice::MinRate);
        assert_eq!(s.system.discipline, Discipline::Gg11);
    }

    #[test]
    fn lambda_rescales_the_arrival_law() {
        let text = format!("{BASE}\nlambda = 0.4");
        let s = Scenario::from_toml(&text).unwrap();
        assert!((s.system.arrival.unwrap().mean() - 2.5).abs() < 1e-12);
        let text = format!("{BASE}\nlambda = 0.5");
        let s = Scenario::from_toml(&text).unwrap();
        assert!((s.system.arrival.unwrap().mean() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_sweeps() {
        let bad = BASE.replace("[2.5, 5.0, 10.0]", "[5.0, 5.0]");
        assert!(Scenario::from_toml(&bad).is_err());
        let bad = BASE.replace("[2.5, 5.0, 10.0]", "[]");
        assert!(Scenario::from_toml(&bad).is_err());
        let bad = BASE.replace("\"d\"", "\"mu\"");
        assert!(Scenario::from_toml(&bad).is_err());
        // lambda sweep without a fixed d
        let bad = BASE.replace("\"d\"", "\"lambda\"");
        assert!(Scenario::from_toml(&bad).is_err());
    }

    #[test]
    fn zero_wait_requires_no_arrival() {
        let text = r#"
            system = "zero-wait"
            service = "exp(1)"
            sweep = "d"
            values = [1.0, 3.0]
        "#;
        let s = Scenario::from_toml(text).unwrap();
        assert!(s.system.arrival.is_none());
        let bad = text.replace("sweep = \"d\"", "sweep = \"lambda\"\nd = 5.0");
        assert!(Scenario::from_toml(&bad).is_err());
    }

    #[test]
    fn nu_hat_forms() {
        for (text, expect) in [
            ("nu_hat = \"exact\"", NuHatChoice::Exact),
            ("nu_hat = \"min-rate\"", NuHatChoice::MinRate),
            ("nu_hat = \"0.5\"", NuHatChoice::Value(0.5)),
            ("nu_hat = 0.5", NuHatChoice::Value(0.5)),
        ] {
            let s = Scenario::from_toml(&format!("{BASE}\n{text}")).unwrap();
            assert_eq!(s.nu_hat, expect, "{text}");
        }
    }
}
