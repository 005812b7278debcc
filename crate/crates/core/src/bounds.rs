//! Classic and per-packet delay bounds for a FIFO rate-latency server.
//!
//! With arrival curve `α`, service curve `β(t) = max(0, R (t - T))` and line
//! rate `c >= R`, the classic bound is the horizontal deviation
//! `Δ = T + sup_t (α(t)/R - t)`. Because a packet of length `l` is sent at
//! rate `c` once it is selected, its response time is also bounded by
//! `Δ_l = Δ - l (1/R - 1/c)`.

use std::fmt;

use crate::curve::{sup_deviation, ConcaveArrivalCurve, Deviation, RateLatencyCurve};
use crate::{slack, Error, Result};

/// A delay bound in seconds, or the marker for an infinite supremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    Unbounded,
}

impl Bound {
    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            Bound::Finite(v) => Some(v),
            Bound::Unbounded => None,
        }
    }

    /// Value with `Unbounded` mapped to `+inf`.
    pub fn or_infinity(&self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Rate-latency service curve together with the line rate `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServerSpec {
    service: RateLatencyCurve,
    line_rate: f64,
}

impl ServerSpec {
    pub fn new(rate: f64, latency: f64, line_rate: f64) -> Result<Self> {
        Self::from_curve(RateLatencyCurve::new(rate, latency)?, line_rate)
    }

    pub fn from_curve(service: RateLatencyCurve, line_rate: f64) -> Result<Self> {
        if !(line_rate.is_finite() && line_rate >= service.rate()) {
            return Err(Error::Domain(format!(
                "line rate c = {line_rate} must be at least the service rate R = {}",
                service.rate()
            )));
        }
        Ok(ServerSpec { service, line_rate })
    }

    pub fn service(&self) -> &RateLatencyCurve {
        &self.service
    }

    pub fn rate(&self) -> f64 {
        self.service.rate()
    }

    pub fn latency(&self) -> f64 {
        self.service.latency()
    }

    pub fn line_rate(&self) -> f64 {
        self.line_rate
    }
}

/// `Δ = T + sup_{t >= 0} (α(t)/R - t)`.
pub fn classic_bound(alpha: &ConcaveArrivalCurve, server: &ServerSpec) -> Bound {
    match sup_deviation(alpha, server.rate()).expect("server rate is positive") {
        Deviation::Bounded { sup, .. } => Bound::Finite(server.latency() + sup / server.rate()),
        Deviation::Unbounded => Bound::Unbounded,
    }
}

/// `l (1/R - 1/c)`: how much the per-packet bound improves on `Δ`.
pub fn improvement(server: &ServerSpec, length: f64) -> f64 {
    length * (1.0 / server.rate() - 1.0 / server.line_rate())
}

/// `Δ_l = Δ - l (1/R - 1/c)` for a packet of length `l`.
///
/// `l` must lie in `[0, α+(0)]`: a longer packet cannot conform to `α`.
pub fn improved_bound(
    alpha: &ConcaveArrivalCurve,
    server: &ServerSpec,
    length: f64,
) -> Result<Bound> {
    check_length(alpha, length)?;
    Ok(match classic_bound(alpha, server) {
        Bound::Finite(delta) => Bound::Finite(delta - improvement(server, length)),
        Bound::Unbounded => Bound::Unbounded,
    })
}

fn check_length(alpha: &ConcaveArrivalCurve, length: f64) -> Result<()> {
    let burst = alpha.burst();
    if !(length >= 0.0 && length <= burst + slack(burst)) {
        return Err(Error::Domain(format!(
            "packet length {length} outside [0, α+(0) = {burst}]"
        )));
    }
    Ok(())
}

/// `Δ`, `Δ_l` for each requested length and the critical time `t'`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub delta: Bound,
    pub delta_l: Vec<(f64, Bound)>,
    pub critical_time: Option<f64>,
}

pub fn bound_report(
    alpha: &ConcaveArrivalCurve,
    server: &ServerSpec,
    lengths: &[f64],
) -> Result<BoundReport> {
    let critical_time = match sup_deviation(alpha, server.rate())? {
        Deviation::Bounded { at, .. } => Some(at),
        Deviation::Unbounded => None,
    };
    let delta_l = lengths
        .iter()
        .map(|&l| Ok((l, improved_bound(alpha, server, l)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport {
        delta: classic_bound(alpha, server),
        delta_l,
        critical_time,
    })
}

/// One flow of an aggregate, identified by its packet-length range.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSpec {
    pub name: String,
    min_length: f64,
    max_length: f64,
}

impl FlowSpec {
    pub fn new(name: impl Into<String>, min_length: f64, max_length: f64) -> Result<Self> {
        let name = name.into();
        if !(min_length > 0.0 && min_length <= max_length && max_length.is_finite()) {
            return Err(Error::Domain(format!(
                "flow {name}: need 0 < min length ({min_length}) <= max length ({max_length})"
            )));
        }
        Ok(FlowSpec {
            name,
            min_length,
            max_length,
        })
    }

    pub fn min_length(&self) -> f64 {
        self.min_length
    }

    pub fn max_length(&self) -> f64 {
        self.max_length
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowBound {
    pub name: String,
    pub bound: Bound,
}

/// Per-flow bounds for flows sharing one FIFO queue: `Δ_l` decreases in `l`,
/// so the worst packet of flow `f` is its shortest one.
pub fn per_flow_bounds(
    alpha: &ConcaveArrivalCurve,
    server: &ServerSpec,
    flows: &[FlowSpec],
) -> Result<Vec<FlowBound>> {
    flows
        .iter()
        .map(|f| {
            Ok(FlowBound {
                name: f.name.clone(),
                bound: improved_bound(alpha, server, f.min_length)?,
            })
        })
        .collect()
}

fn positive(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive, got {v}")))
    }
}

/// Service curve offered to one of `n_flows` DRR queues that all use
/// quantum `quantum` and maximum packet length `max_length`.
///
/// `R = c / n` and `T = (n - 1)(L + Q)/c + L (1/R - 1/c)`, which is
/// `3 L (n - 1) / c` when `Q = L`.
pub fn drr_service_curve(
    n_flows: usize,
    line_rate: f64,
    max_length: f64,
    quantum: f64,
) -> Result<ServerSpec> {
    if n_flows == 0 {
        return Err(Error::Domain("DRR needs at least one flow".into()));
    }
    positive("quantum", quantum)?;
    positive("max packet length", max_length)?;
    let quanta = vec![quantum; n_flows];
    let lengths = vec![max_length; n_flows];
    drr_service_curve_weighted(&quanta, &lengths, 0, line_rate)
}

/// DRR service curve for queue `flow` with per-queue quanta and maximum
/// packet lengths: `R_i = Q_i c / Σ Q_j` and
/// `T_i = Σ_{j != i} (L_j + Q_j)/c + L_i (1/R_i - 1/c)`.
pub fn drr_service_curve_weighted(
    quanta: &[f64],
    max_lengths: &[f64],
    flow: usize,
    line_rate: f64,
) -> Result<ServerSpec> {
    positive("line rate", line_rate)?;
    if quanta.len() != max_lengths.len() || flow >= quanta.len() {
        return Err(Error::Domain(format!(
            "flow index {flow} with {} quanta and {} lengths",
            quanta.len(),
            max_lengths.len()
        )));
    }
    for (&q, &l) in quanta.iter().zip(max_lengths) {
        positive("quantum", q)?;
        positive("max packet length", l)?;
    }
    let total: f64 = quanta.iter().sum();
    let rate = quanta[flow] / total * line_rate;
    let others: f64 = quanta
        .iter()
        .zip(max_lengths)
        .enumerate()
        .filter(|&(j, _)| j != flow)
        .map(|(_, (q, l))| l + q)
        .sum();
    let own = max_lengths[flow];
    let latency = others / line_rate + own * (1.0 / rate - 1.0 / line_rate);
    // R = c exactly when n = 1; guard the rounding in Q c / ΣQ.
    ServerSpec::new(rate.min(line_rate), latency.max(0.0), line_rate)
}
