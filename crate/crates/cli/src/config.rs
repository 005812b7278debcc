//! Scenario files. Values are read in the units named by the `units` block
//! and converted to bits, seconds and bits per second on load.

use std::path::{Path, PathBuf};

use ncdelay_core::{
    drr_service_curve, AffinePiece, ConcaveArrivalCurve, FlowSpec, SchedulerPolicy, ServerSpec,
};
use serde::Deserialize;

use crate::error::CliError;
use crate::units::Units;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub units: Units,
    pub alpha: RawAlpha,
    pub server: RawServer,
    #[serde(default)]
    pub lengths: Vec<f64>,
    #[serde(default)]
    pub flows: Vec<RawFlow>,
    #[serde(rename = "L_max", default)]
    pub l_max: Option<f64>,
    #[serde(default)]
    pub sim: Option<RawSim>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAlpha {
    pub pieces: Vec<RawPiece>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPiece {
    pub burst: f64,
    pub rate: f64,
}

/// Exactly one of `{R, T, c}`, `drr` or `cbs`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawServer {
    #[serde(rename = "R", default)]
    pub rate: Option<f64>,
    #[serde(rename = "T", default)]
    pub latency: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub drr: Option<RawDrr>,
    #[serde(default)]
    pub cbs: Option<RawCbs>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDrr {
    pub n: usize,
    pub c: f64,
    #[serde(rename = "L")]
    pub max_length: f64,
    #[serde(rename = "Q")]
    pub quantum: f64,
}

/// Credit-based shaper class: `R = idle_slope * c`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCbs {
    pub idle_slope: f64,
    #[serde(rename = "T", default)]
    pub latency: f64,
    pub c: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFlow {
    pub name: String,
    pub min_length: f64,
    pub max_length: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RawPolicies {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSim {
    #[serde(default)]
    pub policy: Option<RawPolicies>,
    #[serde(default = "one")]
    pub seeds: u64,
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub include_worst_case: bool,
    #[serde(default)]
    pub trace: Option<PathBuf>,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    Greedy,
    MaxLazy,
    Jittered,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] = [
        PolicyKind::Greedy,
        PolicyKind::MaxLazy,
        PolicyKind::Jittered,
    ];

    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "greedy" => Ok(PolicyKind::Greedy),
            "max_lazy" => Ok(PolicyKind::MaxLazy),
            "jittered" => Ok(PolicyKind::Jittered),
            other => Err(CliError::Config(format!(
                "unknown policy `{other}`, expected greedy, max_lazy or jittered"
            ))),
        }
    }

    pub fn with_seed(self, seed: u64) -> SchedulerPolicy {
        match self {
            PolicyKind::Greedy => SchedulerPolicy::Greedy,
            PolicyKind::MaxLazy => SchedulerPolicy::MaxLazy,
            PolicyKind::Jittered => SchedulerPolicy::Jittered { seed },
        }
    }

    pub fn name(self) -> &'static str {
        self.with_seed(0).name()
    }
}

/// Simulation settings, in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub policies: Vec<PolicyKind>,
    pub seeds: u64,
    pub horizon: f64,
    pub include_worst_case: bool,
    /// Resolved against the config file's directory.
    pub trace: Option<PathBuf>,
}

/// A loaded scenario, in bits, seconds and bits per second.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub units: Units,
    pub alpha: ConcaveArrivalCurve,
    pub server: ServerSpec,
    pub lengths: Vec<f64>,
    pub flows: Vec<FlowSpec>,
    pub max_length: Option<f64>,
    pub sim: Option<SimSettings>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let fallback = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, &fallback, base)
    }

    /// Parse `text`; `fallback_name` is used when the file has no `name`
    /// and relative trace paths are resolved against `base`.
    pub fn parse(text: &str, fallback_name: &str, base: &Path) -> Result<Self, CliError> {
        let raw: RawScenario =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        raw.resolve(fallback_name, base)
    }

    /// The packet-length ceiling: explicit `L_max`, else the largest flow
    /// length, else `α+(0)`.
    pub fn effective_max_length(&self) -> f64 {
        self.max_length
            .or_else(|| self.flows.iter().map(FlowSpec::max_length).reduce(f64::max))
            .unwrap_or(self.alpha.burst())
    }
}

fn config<T>(r: ncdelay_core::Result<T>, what: &str) -> Result<T, CliError> {
    r.map_err(|e| CliError::Config(format!("{what}: {e}")))
}

impl RawScenario {
    pub fn resolve(self, fallback_name: &str, base: &Path) -> Result<Scenario, CliError> {
        let u = self.units;
        if self.alpha.pieces.is_empty() {
            return Err(CliError::Config("alpha.pieces must not be empty".into()));
        }
        let pieces = self
            .alpha
            .pieces
            .iter()
            .map(|p| AffinePiece::new(u.to_bits(p.burst), u.to_bps(p.rate)))
            .collect::<ncdelay_core::Result<Vec<_>>>();
        let alpha = config(ConcaveArrivalCurve::new(config(pieces, "alpha")?), "alpha")?;
        let server = self.server.resolve(&u)?;

        let lengths: Vec<f64> = self.lengths.iter().map(|&l| u.to_bits(l)).collect();
        let flows = self
            .flows
            .iter()
            .map(|f| {
                config(
                    FlowSpec::new(&f.name, u.to_bits(f.min_length), u.to_bits(f.max_length)),
                    "flow",
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let max_length = self.l_max.map(|l| u.to_bits(l));
        if let Some(l) = max_length {
            if !(l.is_finite() && l > 0.0) {
                return Err(CliError::Config(format!("L_max must be positive, got {l}")));
            }
        }

        let sim = self
            .sim
            .map(|s| -> Result<SimSettings, CliError> {
                let policies = match s.policy {
                    None => PolicyKind::ALL.to_vec(),
                    Some(RawPolicies::One(p)) => vec![PolicyKind::parse(&p)?],
                    Some(RawPolicies::Many(ps)) => ps
                        .iter()
                        .map(|p| PolicyKind::parse(p))
                        .collect::<Result<_, _>>()?,
                };
                let horizon = s.horizon.map(|h| u.to_seconds(h)).unwrap_or(0.0);
                if !(horizon.is_finite() && horizon >= 0.0) {
                    return Err(CliError::Config(format!(
                        "sim.horizon must be nonnegative, got {horizon}"
                    )));
                }
                if s.trace.is_none() && s.horizon.is_none() && s.seeds > 0 {
                    return Err(CliError::Config("sim needs `horizon` or `trace`".into()));
                }
                Ok(SimSettings {
                    policies,
                    seeds: s.seeds,
                    horizon,
                    include_worst_case: s.include_worst_case,
                    trace: s.trace.map(|t| base.join(t)),
                })
            })
            .transpose()?;

        Ok(Scenario {
            name: self.name.unwrap_or_else(|| fallback_name.to_string()),
            units: u,
            alpha,
            server,
            lengths,
            flows,
            max_length,
            sim,
        })
    }
}

impl RawServer {
    fn resolve(&self, u: &Units) -> Result<ServerSpec, CliError> {
        let explicit = self.rate.is_some() || self.latency.is_some() || self.c.is_some();
        let forms = [explicit, self.drr.is_some(), self.cbs.is_some()];
        if forms.iter().filter(|&&f| f).count() != 1 {
            return Err(CliError::Config(
                "server needs exactly one of {R, T, c}, {drr: ...} or {cbs: ...}".into(),
            ));
        }
        if explicit {
            let (Some(r), Some(t), Some(c)) = (self.rate, self.latency, self.c) else {
                return Err(CliError::Config("server needs all of R, T and c".into()));
            };
            return config(
                ServerSpec::new(u.to_bps(r), u.to_seconds(t), u.to_bps(c)),
                "server",
            );
        }
        if let Some(d) = &self.drr {
            return config(
                drr_service_curve(
                    d.n,
                    u.to_bps(d.c),
                    u.to_bits(d.max_length),
                    u.to_bits(d.quantum),
                ),
                "server.drr",
            );
        }
        let cbs = self.cbs.as_ref().expect("one form present");
        if !(cbs.idle_slope > 0.0 && cbs.idle_slope <= 1.0) {
            return Err(CliError::Config(format!(
                "server.cbs.idle_slope is a fraction of c in (0, 1], got {}",
                cbs.idle_slope
            )));
        }
        let c = u.to_bps(cbs.c);
        config(
            ServerSpec::new(cbs.idle_slope * c, u.to_seconds(cbs.latency), c),
            "server.cbs",
        )
    }
}
