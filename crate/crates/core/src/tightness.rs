//! Worst-case execution trace for a concave arrival curve.
//!
//! The construction picks the critical time `t'` that attains the classic
//! bound, feeds the fluid input `min(α(t), α+(t'))` through a packetizer
//! whose last packet has the length `l` of interest, and schedules packet
//! `i` at `Q_i = T + Σ_{j<i} l_j / R`, transmitting it at line rate. The
//! last packet then sees a response time of exactly `Δ_l`.

use crate::bounds::{classic_bound, improved_bound, Bound, ServerSpec};
use crate::curve::{
    min_plus_convolve, sup_deviation, ConcaveArrivalCurve, CumulativeFunction, Deviation,
};
use crate::sim::{assemble, verify_arrival_conformance, SimResult, Trace};
use crate::{approx_eq, approx_le, slack, Error, Result};

/// Packet lengths `l_1 .. l_n` with cumulative sums `L(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketLengthSequence {
    lengths: Vec<f64>,
    max_length: f64,
}

impl PacketLengthSequence {
    pub fn new(lengths: Vec<f64>, max_length: f64) -> Result<Self> {
        for (i, &l) in lengths.iter().enumerate() {
            if !(l > 0.0 && approx_le(l, max_length)) {
                return Err(Error::Domain(format!(
                    "packet {} length {l} outside (0, L_max = {max_length}]",
                    i + 1
                )));
            }
        }
        Ok(PacketLengthSequence {
            lengths,
            max_length,
        })
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn max_length(&self) -> f64 {
        self.max_length
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// `L(j) = Σ_{i <= j} l_i` for `j = 1..n`.
    pub fn cumulative(&self) -> Vec<f64> {
        self.lengths
            .iter()
            .scan(0.0, |acc, &l| {
                *acc += l;
                Some(*acc)
            })
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.lengths.iter().sum()
    }
}

/// Inputs of the worst-case construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TightnessScenario {
    pub alpha: ConcaveArrivalCurve,
    pub server: ServerSpec,
    /// Length of the packet of interest.
    pub length: f64,
    pub max_length: f64,
}

impl TightnessScenario {
    pub fn new(
        alpha: ConcaveArrivalCurve,
        server: ServerSpec,
        length: f64,
        max_length: f64,
    ) -> Result<Self> {
        let burst = alpha.burst();
        if !approx_le(max_length, burst) {
            return Err(Error::Infeasible(format!(
                "hypothesis α+(0) ≥ L_max violated: α+(0) = {burst}, L_max = {max_length}"
            )));
        }
        if !(length > 0.0 && length <= max_length) {
            return Err(Error::Infeasible(format!(
                "packet of interest needs 0 < l ≤ L_max, got l = {length}, L_max = {max_length}"
            )));
        }
        if !classic_bound(&alpha, &server).is_finite() {
            return Err(Error::Infeasible(format!(
                "classic bound is unbounded: long-run arrival rate {} exceeds R = {}",
                alpha.long_run_rate(),
                server.rate()
            )));
        }
        Ok(TightnessScenario {
            alpha,
            server,
            length,
            max_length,
        })
    }
}

/// The constructed execution.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseTrace {
    pub trace: Trace,
    pub t_prime: f64,
    /// `(Q_j, D_j)` per packet.
    pub schedule: Vec<(f64, f64)>,
    /// `Ĩ(t) = min(α(t), α+(t'))`.
    pub fluid_input: CumulativeFunction,
    /// `F = I ⊗ β` for the packetized input `I`.
    pub fluid_output: CumulativeFunction,
    pub line_rate: f64,
    /// Response time of the last packet.
    pub response: f64,
    pub bound: f64,
}

impl WorstCaseTrace {
    /// The execution as a simulator result, with `I` and `O`.
    pub fn to_sim_result(&self) -> SimResult {
        assemble(&self.trace, &self.schedule, self.line_rate).expect("validated schedule")
    }
}

/// Smallest `t' >= 0` with `Δ = T + α+(t')/R - t'`.
pub fn critical_time(alpha: &ConcaveArrivalCurve, server: &ServerSpec) -> Result<f64> {
    match sup_deviation(alpha, server.rate())? {
        Deviation::Bounded { at, .. } => Ok(at),
        Deviation::Unbounded => Err(Error::Infeasible(format!(
            "classic bound is unbounded: long-run arrival rate {} exceeds R = {}",
            alpha.long_run_rate(),
            server.rate()
        ))),
    }
}

/// `Ĩ(t) = min(α(t), α+(t'))`, with the initial burst as a jump at 0.
pub fn fluid_input(alpha: &ConcaveArrivalCurve, t_prime: f64) -> Result<CumulativeFunction> {
    if !(t_prime.is_finite() && t_prime >= 0.0) {
        return Err(Error::NegativeTime(t_prime));
    }
    let pieces = alpha.pieces();
    let starts = alpha.starts();
    let mut segments = vec![(0.0, pieces[0].burst, pieces[0].rate)];
    for (p, &s) in pieces.iter().zip(starts).skip(1) {
        if s >= t_prime {
            break;
        }
        segments.push((s, 0.0, p.rate));
    }
    segments.push((t_prime, 0.0, 0.0));
    CumulativeFunction::from_segments(segments)
}

/// `n = ⌈(total - l)/L_max⌉ + 1` packets: `n - 2` of length `L_max`, one
/// remainder, and the packet of interest `l` last.
pub fn packet_lengths(total: f64, length: f64, max_length: f64) -> Result<PacketLengthSequence> {
    if !(length > 0.0 && length <= max_length) {
        return Err(Error::Domain(format!(
            "need 0 < l ≤ L_max, got l = {length}, L_max = {max_length}"
        )));
    }
    if !approx_le(length, total) {
        return Err(Error::Domain(format!(
            "l = {length} exceeds the total {total}"
        )));
    }
    let rest = total - length;
    if rest <= slack(total) {
        return PacketLengthSequence::new(vec![length], max_length);
    }
    if !approx_le(max_length, total) {
        return Err(Error::Domain(format!(
            "L_max = {max_length} exceeds the total {total}"
        )));
    }
    let full = ((rest / max_length) - crate::TOLERANCE).ceil().max(1.0) as usize - 1;
    let remainder = rest - full as f64 * max_length;
    let mut lengths = vec![max_length; full];
    lengths.push(remainder.min(max_length));
    lengths.push(length);
    PacketLengthSequence::new(lengths, max_length)
}

/// Arrival times `A_j = inf { t >= 0 | Ĩ+(t) >= L(j) }`.
pub fn packetize(fluid: &CumulativeFunction, lengths: &PacketLengthSequence) -> Result<Vec<f64>> {
    let mass = fluid
        .limit()
        .ok_or_else(|| Error::Domain("fluid input must level off to a finite total".into()))?;
    let total = lengths.total();
    if !approx_eq(mass, total) {
        return Err(Error::Domain(format!(
            "packet lengths sum to {total} but the fluid input carries {mass}"
        )));
    }
    lengths
        .cumulative()
        .into_iter()
        .map(|x| {
            fluid
                .inverse_right_limit(x.min(mass))
                .ok_or_else(|| Error::Domain(format!("fluid input never reaches {x}")))
        })
        .collect()
}

/// `Q_i = T + Σ_{j<i} l_j / R`, `D_i = Q_i + l_i / c`.
pub fn worst_case_schedule(lengths: &PacketLengthSequence, server: &ServerSpec) -> Vec<(f64, f64)> {
    let mut sent = 0.0;
    lengths
        .lengths()
        .iter()
        .map(|&l| {
            let start = server.latency() + sent / server.rate();
            sent += l;
            (start, start + l / server.line_rate())
        })
        .collect()
}

fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Construction(what()))
    }
}

/// Builds the worst-case execution and checks it: FIFO order, no
/// overlapping transmissions, arrival conformance, `O >= I ⊗ β`, and a
/// response time of exactly `Δ_l` for the last packet.
pub fn build_worst_case(scenario: &TightnessScenario) -> Result<WorstCaseTrace> {
    let TightnessScenario {
        alpha,
        server,
        length,
        max_length,
    } = scenario;
    let t_prime = critical_time(alpha, server)?;
    let fluid = fluid_input(alpha, t_prime)?;
    let total = alpha.right_value(t_prime);
    let lengths = packet_lengths(total, *length, *max_length)?;
    let mut arrivals = packetize(&fluid, &lengths)?;

    let last = arrivals.len() - 1;
    invariant(approx_eq(arrivals[last], t_prime), || {
        format!(
            "packet of interest arrives at {} instead of t' = {t_prime}",
            arrivals[last]
        )
    })?;
    arrivals[last] = t_prime;

    let trace = Trace::new(
        arrivals
            .iter()
            .copied()
            .zip(lengths.lengths().iter().copied()),
        *max_length,
    )?;
    let schedule = worst_case_schedule(&lengths, server);
    for (j, w) in schedule.windows(2).enumerate() {
        invariant(w[0].1 <= w[1].0 + slack(w[1].0), || {
            format!(
                "packet {} still transmitting when packet {} starts",
                j + 1,
                j + 2
            )
        })?;
    }
    for (p, &(q, _)) in trace.packets().iter().zip(&schedule) {
        invariant(p.arrival <= q + slack(q), || {
            format!(
                "packet {} starts at {q} before arriving at {}",
                p.index, p.arrival
            )
        })?;
    }

    let conformance = verify_arrival_conformance(&trace, alpha);
    invariant(conformance.conforms, || {
        format!(
            "packetized input breaks the arrival curve: {:?}",
            conformance.violation
        )
    })?;

    let result = assemble(&trace, &schedule, server.line_rate())?;
    let fluid_output = min_plus_convolve(&result.input, server.service())?;
    if let Some(s) = result.output.first_shortfall(&fluid_output) {
        return Err(Error::Construction(format!(
            "output {} below the fluid output {} at t = {}",
            s.value, s.lower, s.time
        )));
    }

    let (_, departure) = schedule[last];
    let response = departure - t_prime;
    let bound = match improved_bound(alpha, server, *length)? {
        Bound::Finite(b) => b,
        Bound::Unbounded => unreachable!("scenario guarantees a finite bound"),
    };
    invariant(approx_eq(response, bound), || {
        format!("packet of interest response {response} differs from Δ_l = {bound}")
    })?;

    Ok(WorstCaseTrace {
        trace,
        t_prime,
        schedule,
        fluid_input: fluid,
        fluid_output,
        line_rate: server.line_rate(),
        response,
        bound,
    })
}
