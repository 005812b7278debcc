//! FIFO simulation and the verifiers used to gate it.
//!
//! A packet `n` arrives at `A_n`, is selected at `Q_n >= max(A_n, D_{n-1})`
//! and leaves at `D_n = Q_n + l_n / c`. The scheduler that decides `Q_n`
//! is abstracted by a [`SchedulerPolicy`]; whether the resulting execution
//! really offers the service curve is checked afterwards by
//! [`verify_service_curve`], not assumed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{improved_bound, Bound, ServerSpec};
use crate::curve::{min_plus_convolve, ConcaveArrivalCurve, CumulativeFunction, RateLatencyCurve};
use crate::{approx_eq, approx_le, slack, Error, Result, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    /// 1-based position in arrival order.
    pub index: usize,
    pub arrival: f64,
    pub length: f64,
}

/// Packetized arrivals in FIFO order. Packets arriving at the same instant
/// are served in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    packets: Vec<Packet>,
    max_length: f64,
}

impl Trace {
    pub fn new<I>(arrivals: I, max_length: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        if !(max_length.is_finite() && max_length > 0.0) {
            return Err(Error::Domain(format!(
                "L_max must be positive, got {max_length}"
            )));
        }
        let mut packets = Vec::new();
        let mut last = 0.0f64;
        for (i, (arrival, length)) in arrivals.into_iter().enumerate() {
            let index = i + 1;
            if !(arrival.is_finite() && arrival >= 0.0) {
                return Err(Error::Domain(format!(
                    "packet {index}: bad arrival time {arrival}"
                )));
            }
            if arrival < last {
                return Err(Error::Domain(format!(
                    "packet {index}: arrival {arrival} precedes the previous arrival {last}"
                )));
            }
            if !(length > 0.0 && approx_le(length, max_length)) {
                return Err(Error::Domain(format!(
                    "packet {index}: length {length} outside (0, L_max = {max_length}]"
                )));
            }
            last = arrival;
            packets.push(Packet {
                index,
                arrival,
                length,
            });
        }
        Ok(Trace {
            packets,
            max_length,
        })
    }

    pub fn empty(max_length: f64) -> Result<Self> {
        Self::new(std::iter::empty(), max_length)
    }

    pub fn packets(&self) -> &[Packet] {
        &self.packets
    }

    pub fn max_length(&self) -> f64 {
        self.max_length
    }

    pub fn len(&self) -> usize {
        self.packets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packets.is_empty()
    }

    pub fn total_bits(&self) -> f64 {
        self.packets.iter().map(|p| p.length).sum()
    }

    /// `I(t)`: bits that arrived strictly before `t`.
    pub fn cumulative_input(&self) -> CumulativeFunction {
        CumulativeFunction::from_segments(self.packets.iter().map(|p| (p.arrival, p.length, 0.0)))
            .expect("validated trace")
    }
}

/// `O(t)` for packets transmitted at rate `c` on `[Q_n, D_n]`.
///
/// Back-to-back transmissions may overlap by an ulp after rounding; event
/// times are clamped to be nondecreasing.
pub(crate) fn cumulative_output(
    schedule: &[(f64, f64)],
    line_rate: f64,
) -> Result<CumulativeFunction> {
    let mut clock = 0.0f64;
    CumulativeFunction::from_segments(schedule.iter().flat_map(|&(start, end)| {
        let start = start.max(clock);
        clock = end.max(start);
        [(start, 0.0, line_rate), (clock, 0.0, 0.0)]
    }))
}

/// How the simulated scheduler picks start times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulerPolicy {
    /// Work-conserving: `Q_n = max(A_n, D_{n-1})`.
    Greedy,
    /// Latest start the rate-latency guarantee tolerates from an initially
    /// empty system: `Q_n = max(A_n, D_{n-1}, T + Σ_{i<n} l_i / R)`.
    MaxLazy,
    /// Uniformly random start between the greedy and max-lazy choices.
    Jittered { seed: u64 },
}

impl SchedulerPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            SchedulerPolicy::Greedy => "greedy",
            SchedulerPolicy::MaxLazy => "max_lazy",
            SchedulerPolicy::Jittered { .. } => "jittered",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketRecord {
    pub index: usize,
    pub arrival: f64,
    pub length: f64,
    pub start: f64,
    pub departure: f64,
}

impl PacketRecord {
    pub fn response(&self) -> f64 {
        self.departure - self.arrival
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub packets: Vec<PacketRecord>,
    pub input: CumulativeFunction,
    pub output: CumulativeFunction,
}

impl SimResult {
    pub fn max_response(&self) -> Option<f64> {
        self.packets
            .iter()
            .map(PacketRecord::response)
            .reduce(f64::max)
    }

    pub fn schedule(&self) -> Vec<(f64, f64)> {
        self.packets
            .iter()
            .map(|p| (p.start, p.departure))
            .collect()
    }
}

pub(crate) fn assemble(
    trace: &Trace,
    schedule: &[(f64, f64)],
    line_rate: f64,
) -> Result<SimResult> {
    let packets = trace
        .packets()
        .iter()
        .zip(schedule)
        .map(|(p, &(start, departure))| PacketRecord {
            index: p.index,
            arrival: p.arrival,
            length: p.length,
            start,
            departure,
        })
        .collect();
    Ok(SimResult {
        packets,
        input: trace.cumulative_input(),
        output: cumulative_output(schedule, line_rate)?,
    })
}

pub fn simulate(trace: &Trace, policy: SchedulerPolicy, server: &ServerSpec) -> SimResult {
    let c = server.line_rate();
    let rate = server.rate();
    let latency = server.latency();
    let mut rng = match policy {
        SchedulerPolicy::Jittered { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };

    let mut schedule = Vec::with_capacity(trace.len());
    let mut prev_departure = 0.0f64;
    let mut served = 0.0f64;
    for p in trace.packets() {
        let earliest = p.arrival.max(prev_departure);
        let latest = earliest.max(latency + served / rate);
        let start = match policy {
            SchedulerPolicy::Greedy => earliest,
            SchedulerPolicy::MaxLazy => latest,
            SchedulerPolicy::Jittered { .. } => {
                let u: f64 = rng.as_mut().expect("seeded").gen();
                earliest + u * (latest - earliest)
            }
        };
        let departure = start + p.length / c;
        schedule.push((start, departure));
        prev_departure = departure;
        served += p.length;
    }
    assemble(trace, &schedule, c).expect("schedule times are nondecreasing")
}

/// Rebuild a result from an externally supplied `(Q_n, D_n)` schedule.
///
/// Rejects schedules that start a packet before it arrives, overlap
/// transmissions, or whose `D_n - Q_n` differs from `l_n / c`.
pub fn replay(trace: &Trace, schedule: &[(f64, f64)], line_rate: f64) -> Result<SimResult> {
    if schedule.len() != trace.len() {
        return Err(Error::Domain(format!(
            "schedule has {} entries for {} packets",
            schedule.len(),
            trace.len()
        )));
    }
    let mut prev_departure = 0.0f64;
    for (p, &(start, departure)) in trace.packets().iter().zip(schedule) {
        if !approx_le(p.arrival, start) {
            return Err(Error::Domain(format!(
                "packet {} starts at {start} before arriving at {}",
                p.index, p.arrival
            )));
        }
        if !approx_le(prev_departure, start) {
            return Err(Error::Domain(format!(
                "packet {} starts at {start} while the previous one leaves at {prev_departure}",
                p.index
            )));
        }
        if !approx_eq(departure - start, p.length / line_rate) {
            return Err(Error::Domain(format!(
                "packet {} takes {} to transmit, expected {}",
                p.index,
                departure - start,
                p.length / line_rate
            )));
        }
        prev_departure = departure;
    }
    assemble(trace, schedule, line_rate)
}

/// Pair `(m, n)` breaking `Σ_{k=m}^{n} l_k <= α+(A_n - A_m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalViolation {
    pub m: usize,
    pub n: usize,
    pub bits: f64,
    pub allowance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformanceVerdict {
    pub conforms: bool,
    pub violation: Option<ArrivalViolation>,
}

/// Checks the max-plus form of the arrival constraint over every pair
/// `m <= n`.
pub fn verify_arrival_conformance(
    trace: &Trace,
    alpha: &ConcaveArrivalCurve,
) -> ConformanceVerdict {
    let packets = trace.packets();
    for n in 0..packets.len() {
        let mut bits = 0.0;
        for m in (0..=n).rev() {
            bits += packets[m].length;
            let window = packets[n].arrival - packets[m].arrival;
            let allowance = alpha.right_value(window);
            if bits > allowance + slack(allowance) {
                return ConformanceVerdict {
                    conforms: false,
                    violation: Some(ArrivalViolation {
                        m: packets[m].index,
                        n: packets[n].index,
                        bits,
                        allowance,
                    }),
                };
            }
        }
    }
    ConformanceVerdict {
        conforms: true,
        violation: None,
    }
}

/// Instant where `O(t) < inf_s (I(s) + β(t - s))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceViolation {
    pub time: f64,
    pub output: f64,
    pub required: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceVerdict {
    pub compliant: bool,
    pub violation: Option<ServiceViolation>,
}

/// Checks `O >= I ⊗ β` at every breakpoint of both functions. `O` and
/// `I ⊗ β` are piecewise linear, so this is exhaustive.
pub fn verify_service_curve(result: &SimResult, beta: &RateLatencyCurve) -> ServiceVerdict {
    let fluid = min_plus_convolve(&result.input, beta).expect("simulated input starts at 0");
    match result.output.first_shortfall(&fluid) {
        None => ServiceVerdict {
            compliant: true,
            violation: None,
        },
        Some(s) => ServiceVerdict {
            compliant: false,
            violation: Some(ServiceViolation {
                time: s.time,
                output: s.value,
                required: s.lower,
            }),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacklogWitnessVerdict {
    pub holds: bool,
    /// Per packet, the smallest `m` with `β(Q_n - A_m) <= Σ_{k=m}^{n-1} l_k`.
    pub witnesses: Vec<Option<usize>>,
}

/// For every packet `n`, looks for an earlier (or equal) packet `m` with
/// `β(Q_n - A_m) <= Σ_{k=m}^{n-1} l_k`.
pub fn verify_backlog_witness(result: &SimResult, beta: &RateLatencyCurve) -> BacklogWitnessVerdict {
    let packets = &result.packets;
    let mut prefix = Vec::with_capacity(packets.len() + 1);
    prefix.push(0.0f64);
    for p in packets {
        prefix.push(prefix[prefix.len() - 1] + p.length);
    }
    let witnesses: Vec<Option<usize>> = packets
        .iter()
        .enumerate()
        .map(|(n, pn)| {
            (0..=n)
                .find(|&m| {
                    let backlog = prefix[n] - prefix[m];
                    approx_le(beta.at(pn.start - packets[m].arrival), backlog)
                })
                .map(|m| packets[m].index)
        })
        .collect();
    BacklogWitnessVerdict {
        holds: witnesses.iter().all(Option::is_some),
        witnesses,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSlack {
    pub index: usize,
    pub length: f64,
    pub response: f64,
    pub bound: Bound,
    /// `Δ_{l_n} - (D_n - A_n)`; `+inf` when the bound is unbounded.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelayCheck {
    pub delta: Bound,
    pub max_response: Option<f64>,
    pub packets: Vec<PacketSlack>,
    /// Indices whose response time exceeds `Δ_{l_n} + 1e-9 Δ`.
    pub violations: Vec<usize>,
}

impl DelayCheck {
    pub fn min_slack(&self) -> Option<f64> {
        self.packets.iter().map(|p| p.slack).reduce(f64::min)
    }

    /// `max_n (D_n - A_n) / Δ_{l_n}`.
    pub fn attained_fraction(&self) -> Option<f64> {
        self.packets
            .iter()
            .filter_map(|p| p.bound.value().map(|b| p.response / b))
            .reduce(f64::max)
    }
}

pub fn check_delay_bounds(
    result: &SimResult,
    alpha: &ConcaveArrivalCurve,
    server: &ServerSpec,
) -> Result<DelayCheck> {
    let delta = crate::bounds::classic_bound(alpha, server);
    let tolerance = TOLERANCE * delta.value().unwrap_or(0.0);
    let mut packets = Vec::with_capacity(result.packets.len());
    let mut violations = Vec::new();
    for p in &result.packets {
        let bound = improved_bound(alpha, server, p.length)?;
        let response = p.response();
        let slack = bound.or_infinity() - response;
        if slack < -tolerance {
            violations.push(p.index);
        }
        packets.push(PacketSlack {
            index: p.index,
            length: p.length,
            response,
            bound,
            slack,
        });
    }
    Ok(DelayCheck {
        delta,
        max_response: result.max_response(),
        packets,
        violations,
    })
}

/// Random packet stream that conforms to `α` by construction.
///
/// Each packet gets a random length in `(0, L_max]` and a random idle gap
/// (zero more often than not), then is admitted at the earliest instant
/// where `Σ_{k=m}^{n} l_k <= α+(A_n - A_m)` holds for every earlier `m`.
/// Generation stops at the first admission time at or past `horizon`, or
/// when `α` is bounded and exhausted.
pub fn random_conforming_trace(
    alpha: &ConcaveArrivalCurve,
    max_length: f64,
    horizon: f64,
    seed: u64,
) -> Result<Trace> {
    if !(max_length > 0.0 && max_length <= alpha.burst()) {
        return Err(Error::Domain(format!(
            "need 0 < L_max = {max_length} <= α+(0) = {}",
            alpha.burst()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arrivals: Vec<f64> = Vec::new();
    let mut lengths: Vec<f64> = Vec::new();
    // Mean gap: the time α needs to replenish one maximum-size packet.
    let mean_gap = match alpha.long_run_rate() {
        r if r > 0.0 => max_length / r,
        _ => horizon.max(1.0),
    };
    loop {
        let length = match rng.gen_range(0..4) {
            0 => max_length,
            _ => max_length * rng.gen_range(0.05..=1.0),
        };
        let gap = if rng.gen_bool(0.6) {
            0.0
        } else {
            rng.gen_range(0.0..2.0 * mean_gap)
        };
        let mut at = arrivals.last().map_or(0.0, |&a| a + gap);

        let mut bits = length;
        let mut feasible = true;
        for m in (0..arrivals.len()).rev() {
            bits += lengths[m];
            match alpha.inverse_right_limit(bits) {
                Some(window) => at = at.max(arrivals[m] + window),
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if !feasible || at >= horizon {
            break;
        }
        arrivals.push(at);
        lengths.push(length);
    }
    Trace::new(arrivals.into_iter().zip(lengths), max_length)
}
