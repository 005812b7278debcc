//! Delay bounds for a FIFO element that offers a rate-latency service curve
//! and transmits packets without pre-emption at a known line rate.
//!
//! The crate is organised bottom-up:
//!
//! * [`curve`]: concave arrival curves, rate-latency service curves,
//!   left-continuous cumulative functions and their min-plus convolution.
//! * [`bounds`]: the classic horizontal-deviation bound, the per-packet
//!   bound that accounts for the line rate, per-flow bounds and DRR
//!   service-curve parameters.
//! * [`tightness`]: the worst-case execution trace that attains the
//!   per-packet bound for a concave arrival curve.
//! * [`sim`]: a FIFO simulator with pluggable start-time policies and
//!   verifiers for arrival conformance, service-curve compliance and the
//!   delay bounds themselves.
//!
//! All quantities are `f64` in bits, seconds and bits per second.

pub mod bounds;
pub mod curve;
mod error;
pub mod sim;
pub mod tightness;

pub use bounds::{
    bound_report, classic_bound, drr_service_curve, drr_service_curve_weighted, improved_bound,
    improvement, per_flow_bounds, Bound, BoundReport, FlowBound, FlowSpec, ServerSpec,
};
pub use curve::{
    min_plus_convolve, sup_deviation, upper_pseudo_inverse, AffinePiece, Breakpoint,
    ConcaveArrivalCurve, CumulativeFunction, Curve, Deviation, RateLatencyCurve, Shortfall,
};
pub use error::{Error, Result};
pub use sim::{
    check_delay_bounds, random_conforming_trace, replay, simulate, verify_arrival_conformance,
    verify_backlog_witness, verify_service_curve, Packet, PacketRecord, SchedulerPolicy, SimResult, Trace,
};
pub use tightness::{
    build_worst_case, critical_time, fluid_input, packet_lengths, packetize, worst_case_schedule,
    PacketLengthSequence, TightnessScenario, WorstCaseTrace,
};

/// Relative tolerance used by every comparison in the crate.
pub const TOLERANCE: f64 = 1e-9;

/// Hybrid absolute/relative slack around `reference`.
#[inline]
pub fn slack(reference: f64) -> f64 {
    TOLERANCE * (1.0 + reference.abs())
}

/// `a <= b` up to [`slack`]`(b)`.
#[inline]
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + slack(b)
}

/// `a == b` up to a relative tolerance of [`TOLERANCE`].
#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOLERANCE * (1.0 + a.abs().max(b.abs()))
}
