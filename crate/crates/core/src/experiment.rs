//! Experiment grid: configuration parsing, parallel execution, CSV output and
//! the per-cell comparison summary.
//!
//! Configuration is flat `key = value` text. `#` starts a comment, lists are
//! comma separated and seeds additionally accept inclusive ranges (`1..10`).

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io;
use std::path::Path;

use rayon::prelude::*;

use crate::arma::{fit_batch, stationarity_check, ArmaError, ArmaParams, StationarityReport};
use crate::protocols::Protocol;
use crate::sim::{run_scenario, MetricsReport, ScenarioConfig, SimError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: String, message: String },
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("{protocol} nodes={nodes} speed={speed} seed={seed}: {source}")]
    Scenario {
        protocol: Protocol,
        nodes: usize,
        speed: f64,
        seed: u64,
        source: SimError,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentMatrix {
    pub protocols: Vec<Protocol>,
    pub node_counts: Vec<usize>,
    pub speeds: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Template for every cell; node count, speed, seed and protocol are
    /// overwritten per cell.
    pub base: ScenarioConfig,
}

impl Default for ExperimentMatrix {
    fn default() -> Self {
        Self {
            protocols: vec![Protocol::Orion, Protocol::Prophet],
            node_counts: vec![30, 50, 70],
            speeds: vec![5.0, 10.0, 15.0, 20.0],
            seeds: (1..=10).collect(),
            base: ScenarioConfig::default(),
        }
    }
}

fn list<T>(key: &str, value: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, ConfigError> {
    let invalid = |message: String| ConfigError::Invalid {
        key: key.to_string(),
        message,
    };
    let out = value
        .split(',')
        .map(str::trim)
        .map(|s| item(s).ok_or_else(|| invalid(format!("cannot parse `{s}`"))))
        .collect::<Result<Vec<T>, _>>()?;
    if out.is_empty() {
        return Err(invalid("empty list".into()));
    }
    Ok(out)
}

fn scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Invalid {
        key: key.to_string(),
        message: format!("cannot parse `{value}`"),
    })
}

fn seeds(key: &str, value: &str) -> Result<Vec<u64>, ConfigError> {
    let mut out = Vec::new();
    for part in list(key, value, |s| Some(s.to_string()))? {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u64, u64) = (scalar(key, a.trim())?, scalar(key, b.trim())?);
            if a > b {
                return Err(ConfigError::Invalid {
                    key: key.to_string(),
                    message: format!("empty range `{part}`"),
                });
            }
            out.extend(a..=b);
        } else {
            out.push(scalar(key, &part)?);
        }
    }
    Ok(out)
}

impl ExperimentMatrix {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        let b = &mut self.base;
        match key {
            "protocols" | "protocol" => self.protocols = list(key, value, |s| s.parse().ok())?,
            "nodes" | "node_counts" => self.node_counts = list(key, value, |s| s.parse().ok())?,
            "speeds" | "speed" => self.speeds = list(key, value, |s| s.parse().ok())?,
            "seeds" | "seed" => self.seeds = seeds(key, value)?,
            "duration" => b.duration = scalar(key, value)?,
            "area_width" => b.area_width = scalar(key, value)?,
            "area_height" => b.area_height = scalar(key, value)?,
            "radio_range" => b.radio_range = scalar(key, value)?,
            "delta_t" => b.delta_t = scalar(key, value)?,
            "traffic_period" => b.traffic_period = scalar(key, value)?,
            "regular_fraction" => b.regular_fraction = scalar(key, value)?,
            "fixed_count" => b.fixed_count = scalar(key, value)?,
            "ttl_hops" => b.ttl_hops = scalar(key, value)?,
            "orion.weight_speed" => b.routing.orion.weight_speed = scalar(key, value)?,
            "orion.confidence_k" => b.routing.orion.confidence_k = scalar(key, value)?,
            "orion.patience_periods" => b.routing.orion.patience_periods = scalar(key, value)?,
            "orion.patience_fraction" => b.routing.orion.patience_fraction = scalar(key, value)?,
            "prophet.l_encounter" => b.routing.prophet.l_encounter = scalar(key, value)?,
            "prophet.gamma" => b.routing.prophet.gamma = scalar(key, value)?,
            "prophet.beta" => b.routing.prophet.beta = scalar(key, value)?,
            "prophet.time_unit" => b.routing.prophet.time_unit = scalar(key, value)?,
            _ => {
                return Err(ConfigError::Invalid {
                    key: key.to_string(),
                    message: "unknown key".into(),
                })
            }
        }
        Ok(())
    }

    /// Checks every cell of the grid.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key: &str, message: String| ConfigError::Invalid {
            key: key.to_string(),
            message,
        };
        if let Some(&n) = self.node_counts.iter().find(|&&n| n < 2) {
            return Err(invalid("nodes", format!("node count {n} is below 2")));
        }
        if let Some(&v) = self.speeds.iter().find(|&&v| !(v.is_finite() && v > 0.0)) {
            return Err(invalid("speeds", format!("speed {v} is not positive")));
        }
        for (key, empty) in [
            ("protocols", self.protocols.is_empty()),
            ("nodes", self.node_counts.is_empty()),
            ("speeds", self.speeds.is_empty()),
            ("seeds", self.seeds.is_empty()),
        ] {
            if empty {
                return Err(invalid(key, "empty list".into()));
            }
        }
        for &n in &self.node_counts {
            let cell = ScenarioConfig {
                node_count: n,
                speed: self.speeds[0],
                ..self.base.clone()
            };
            cell.validate().map_err(|e| invalid("scenario", e.to_string()))?;
        }
        Ok(())
    }

    /// Every cell's scenario, in output order.
    pub fn cells(&self) -> Vec<ScenarioConfig> {
        let mut protocols = self.protocols.clone();
        protocols.sort();
        protocols.dedup();
        let mut nodes = self.node_counts.clone();
        nodes.sort();
        nodes.dedup();
        let mut speeds = self.speeds.clone();
        speeds.sort_by(f64::total_cmp);
        speeds.dedup();
        let mut seeds = self.seeds.clone();
        seeds.sort();
        seeds.dedup();

        let mut out = Vec::new();
        for &protocol in &protocols {
            for &node_count in &nodes {
                for &speed in &speeds {
                    for &seed in &seeds {
                        out.push(ScenarioConfig {
                            protocol,
                            node_count,
                            speed,
                            seed,
                            ..self.base.clone()
                        });
                    }
                }
            }
        }
        out
    }
}

/// Parses configuration text on top of the defaults.
pub fn parse_config(text: &str) -> Result<ExperimentMatrix, ConfigError> {
    let mut m = ExperimentMatrix::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Parse {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Parse {
                line: i + 1,
                message: "missing key".into(),
            });
        }
        m.set(key, value)?;
    }
    m.validate()?;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub protocol: Protocol,
    pub nodes: usize,
    pub speed: f64,
    pub seed: u64,
    pub metrics: MetricsReport,
}

/// Runs every cell in parallel; rows come back sorted by
/// (protocol, nodes, speed, seed).
pub fn run_matrix(matrix: &ExperimentMatrix) -> Result<Vec<ResultRow>, ExperimentError> {
    matrix
        .cells()
        .into_par_iter()
        .map(|cfg| {
            let metrics = run_scenario(&cfg).map_err(|source| ExperimentError::Scenario {
                protocol: cfg.protocol,
                nodes: cfg.node_count,
                speed: cfg.speed,
                seed: cfg.seed,
                source,
            })?;
            Ok(ResultRow {
                protocol: cfg.protocol,
                nodes: cfg.node_count,
                speed: cfg.speed,
                seed: cfg.seed,
                metrics,
            })
        })
        .collect()
}

pub const RESULTS_HEADER: [&str; 10] = [
    "protocol",
    "nodes",
    "speed_mps",
    "seed",
    "sent",
    "delivered",
    "psr",
    "avg_hop_count",
    "first_arrival_s",
    "avg_e2e_delay_s",
];

fn na(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub fn write_results_csv<W: io::Write>(rows: &[ResultRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        let m = &r.metrics;
        w.write_record([
            r.protocol.to_string(),
            r.nodes.to_string(),
            r.speed.to_string(),
            r.seed.to_string(),
            m.sent.to_string(),
            m.delivered.to_string(),
            m.psr.to_string(),
            na(m.avg_hop_count),
            na(m.first_packet_arrival),
            na(m.avg_e2e_delay),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    HopCount,
    Psr,
    FirstArrival,
    EndToEndDelay,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::HopCount,
        Metric::Psr,
        Metric::FirstArrival,
        Metric::EndToEndDelay,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Metric::HopCount => "hops",
            Metric::Psr => "psr",
            Metric::FirstArrival => "fpa_s",
            Metric::EndToEndDelay => "eed_s",
        }
    }

    pub fn higher_is_better(self) -> bool {
        self == Metric::Psr
    }

    pub fn value(self, m: &MetricsReport) -> Option<f64> {
        match self {
            Metric::HopCount => m.avg_hop_count,
            Metric::Psr => Some(m.psr),
            Metric::FirstArrival => m.first_packet_arrival,
            Metric::EndToEndDelay => m.avg_e2e_delay,
        }
    }
}

/// Mean and sample standard deviation over the seeds that produced a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl Stat {
    fn of(xs: &[f64]) -> Option<Stat> {
        if xs.is_empty() {
            return None;
        }
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Stat { mean, std, n })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub nodes: usize,
    pub speed: f64,
    pub stats: BTreeMap<Protocol, BTreeMap<Metric, Option<Stat>>>,
}

impl CellSummary {
    pub fn mean(&self, p: Protocol, metric: Metric) -> Option<f64> {
        self.stats.get(&p)?.get(&metric).copied().flatten().map(|s| s.mean)
    }

    /// Protocol with the best mean for `metric`; ties go to the first in
    /// protocol order.
    pub fn winner(&self, metric: Metric) -> Option<Protocol> {
        let mut best: Option<(Protocol, f64)> = None;
        for &p in self.stats.keys() {
            let Some(v) = self.mean(p, metric) else { continue };
            let better = match best {
                None => true,
                Some((_, b)) if metric.higher_is_better() => v > b,
                Some((_, b)) => v < b,
            };
            if better {
                best = Some((p, v));
            }
        }
        best.map(|(p, _)| p)
    }

    /// Whether ORION strictly beats PRoPHET on `metric`; `None` if either
    /// is missing.
    pub fn orion_beats_prophet(&self, metric: Metric) -> Option<bool> {
        let o = self.mean(Protocol::Orion, metric)?;
        let p = self.mean(Protocol::Prophet, metric)?;
        Some(if metric.higher_is_better() { o > p } else { o < p })
    }
}

/// Groups rows by (nodes, speed) and aggregates each metric across seeds.
pub fn summarize(rows: &[ResultRow]) -> Vec<CellSummary> {
    let mut groups: BTreeMap<(usize, u64), BTreeMap<Protocol, Vec<&MetricsReport>>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.nodes, r.speed.to_bits()))
            .or_default()
            .entry(r.protocol)
            .or_default()
            .push(&r.metrics);
    }
    let mut out: Vec<CellSummary> = groups
        .into_iter()
        .map(|((nodes, speed_bits), per)| CellSummary {
            nodes,
            speed: f64::from_bits(speed_bits),
            stats: per
                .into_iter()
                .map(|(p, ms)| {
                    let by_metric = Metric::ALL
                        .into_iter()
                        .map(|metric| {
                            let xs: Vec<f64> = ms.iter().filter_map(|m| metric.value(m)).collect();
                            (metric, Stat::of(&xs))
                        })
                        .collect();
                    (p, by_metric)
                })
                .collect(),
        })
        .collect();
    out.sort_by(|a, b| a.nodes.cmp(&b.nodes).then(a.speed.total_cmp(&b.speed)));
    out
}

/// Plain-text comparison table, one block per (nodes, speed) cell.
pub fn render_summary(cells: &[CellSummary]) -> String {
    let mut s = String::new();
    for cell in cells {
        let _ = writeln!(s, "nodes={} speed={} m/s", cell.nodes, cell.speed);
        let _ = write!(s, "  {:<10}", "protocol");
        for m in Metric::ALL {
            let _ = write!(s, " {:>18}", m.label());
        }
        s.push('\n');
        for (p, stats) in &cell.stats {
            let _ = write!(s, "  {:<10}", p.name());
            for m in Metric::ALL {
                let text = match stats[&m] {
                    Some(st) => format!("{:.3} ± {:.3}", st.mean, st.std),
                    None => "NA".into(),
                };
                let _ = write!(s, " {text:>18}");
            }
            s.push('\n');
        }
        let _ = write!(s, "  {:<10}", "best");
        for m in Metric::ALL {
            let w = cell.winner(m).map_or("NA", Protocol::name);
            let _ = write!(s, " {w:>18}");
        }
        s.push('\n');
        let failed: Vec<&str> = Metric::ALL
            .into_iter()
            .filter(|&m| cell.orion_beats_prophet(m) == Some(false))
            .map(Metric::label)
            .collect();
        if !failed.is_empty() {
            let _ = writeln!(s, "  FLAG orion does not beat prophet on: {}", failed.join(", "));
        }
    }
    s
}

#[derive(Debug, thiserror::Error)]
pub enum FitError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("row {row}: cannot parse `{value}` as a number")]
    Parse { row: usize, value: String },
    #[error(transparent)]
    Arma(#[from] ArmaError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub n: usize,
    pub params: ArmaParams,
    pub stationarity: StationarityReport,
}

impl fmt::Display for FitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "n      = {}", self.n)?;
        writeln!(f, "mu     = {:.6}", p.mu)?;
        writeln!(f, "phi1   = {:.6}", p.phi1)?;
        writeln!(f, "phi2   = {:.6}", p.phi2)?;
        writeln!(f, "theta1 = {:.6}", p.theta1)?;
        writeln!(f, "sigma2 = {:.6}", p.sigma2)?;
        let st = &self.stationarity;
        writeln!(f, "stationarity: mean_stable={} autocov_stable={} passed={}", st.mean_stable, st.autocov_stable, st.passed)
    }
}

/// Windows and tolerance used by [`fit_series`] for the stationarity check.
pub const FIT_WINDOWS: usize = 4;
pub const FIT_TOLERANCE: f64 = 3.0;

/// Reads one numeric column from a headed CSV file.
pub fn read_column(path: &Path, column: &str) -> Result<Vec<f64>, FitError> {
    let mut rdr = csv::Reader::from_path(path)?;
    let idx = rdr
        .headers()?
        .iter()
        .position(|h| h.trim() == column)
        .ok_or_else(|| FitError::MissingColumn(column.to_string()))?;
    let mut values = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let raw = rec.get(idx).unwrap_or("").trim();
        let v: f64 = raw.parse().map_err(|_| FitError::Parse {
            row: i + 2,
            value: raw.to_string(),
        })?;
        values.push(v);
    }
    Ok(values)
}

/// Fits ARMA(2,1) to one column and runs the stationarity check.
pub fn fit_series(path: &Path, column: &str) -> Result<FitReport, FitError> {
    let values = read_column(path, column)?;
    let params = fit_batch(&values)?;
    let stationarity = stationarity_check(&values, FIT_WINDOWS, FIT_TOLERANCE)?;
    Ok(FitReport {
        n: values.len(),
        params,
        stationarity,
    })
}
