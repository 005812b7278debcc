//! Random instance generators and brute-force oracles shared by the
//! integration tests. Oracles work from the raw generated pieces, never
//! through the library's normalized curve types.

#![allow(dead_code)]

use ncdelay_core::{AffinePiece, ConcaveArrivalCurve, CumulativeFunction, ServerSpec};
use rand::Rng;

/// Quarter-second lattice for breakpoints; grids below are dyadic so that
/// every candidate extremum is a grid point.
pub const LATTICE: f64 = 0.25;

/// Concave curve with integer bursts and rates and breakpoints on the
/// quarter-second lattice. Returns the raw pieces as well, with the
/// occasional dominated piece mixed in.
pub fn lattice_curve<R: Rng>(
    rng: &mut R,
    min_burst: f64,
) -> (Vec<(f64, f64)>, ConcaveArrivalCurve) {
    let k = rng.gen_range(1..=4);
    let mut rate = rng.gen_range(200..6000) as f64;
    let mut burst = (min_burst + rng.gen_range(0..5000) as f64)
        .floor()
        .max(min_burst);
    let mut t = 0.0;
    let mut raw = vec![(burst, rate)];
    for _ in 1..k {
        if rate < 2.0 {
            break;
        }
        t += rng.gen_range(1..=16) as f64 * LATTICE;
        let next_rate = rng.gen_range(0..rate as u64) as f64;
        burst += (rate - next_rate) * t;
        rate = next_rate;
        raw.push((burst, rate));
    }
    if rng.gen_bool(0.3) {
        let (b, r) = raw[0];
        raw.push((b + 10.0, r + 100.0));
    }
    let curve = ConcaveArrivalCurve::new(
        raw.iter()
            .map(|&(b, r)| AffinePiece::new(b, r).unwrap())
            .collect(),
    )
    .unwrap();
    (raw, curve)
}

/// `α(t)` from raw pieces.
pub fn alpha_oracle(raw: &[(f64, f64)], t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        alpha_plus_oracle(raw, t)
    }
}

/// `α+(t)` from raw pieces.
pub fn alpha_plus_oracle(raw: &[(f64, f64)], t: f64) -> f64 {
    raw.iter()
        .map(|&(b, r)| b + r * t)
        .fold(f64::INFINITY, f64::min)
}

/// Random `(time, jump, slope)` segments with at most `max_points`
/// breakpoints on the lattice, starting at 0.
pub fn lattice_segments<R: Rng>(rng: &mut R, max_points: usize) -> Vec<(f64, f64, f64)> {
    let n = rng.gen_range(1..=max_points);
    let mut t = 0.0;
    let mut segs = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            t += rng.gen_range(1..=8) as f64 * LATTICE;
        }
        let jump = if rng.gen_bool(0.6) {
            rng.gen_range(0..3000) as f64
        } else {
            0.0
        };
        let slope = if rng.gen_bool(0.5) {
            rng.gen_range(0..3000) as f64
        } else {
            0.0
        };
        segs.push((t, jump, slope));
    }
    segs
}

/// Left-continuous evaluation of raw segments.
pub fn segments_oracle(segs: &[(f64, f64, f64)], s: f64) -> f64 {
    let mut v = 0.0;
    for (k, &(t, jump, slope)) in segs.iter().enumerate() {
        if t < s {
            v += jump;
            let end = segs.get(k + 1).map_or(f64::INFINITY, |n| n.0).min(s);
            v += slope * (end - t);
        }
    }
    v
}

pub fn cumulative(segs: &[(f64, f64, f64)]) -> CumulativeFunction {
    CumulativeFunction::from_segments(segs.iter().copied()).unwrap()
}

/// Random server that keeps the classic bound finite for `alpha`.
pub fn bounded_server<R: Rng>(rng: &mut R, alpha: &ConcaveArrivalCurve) -> ServerSpec {
    let floor = alpha.long_run_rate().max(50.0);
    let rate = floor * rng.gen_range(1.0..3.0);
    let latency = if rng.gen_bool(0.2) {
        0.0
    } else {
        rng.gen_range(0.0..1.0)
    };
    let line_rate = if rng.gen_bool(0.15) {
        rate
    } else {
        rate * rng.gen_range(1.0..20.0)
    };
    ServerSpec::new(rate, latency, line_rate).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

use ncdelay_core::{
    build_worst_case, check_delay_bounds, classic_bound, random_conforming_trace, simulate,
    verify_arrival_conformance, verify_backlog_witness, verify_service_curve, SchedulerPolicy,
    TightnessScenario, WorstCaseTrace,
};

/// Random valid worst-case scenario.
pub fn tightness_scenario<R: Rng>(rng: &mut R) -> TightnessScenario {
    let (_, alpha) = lattice_curve(rng, 100.0);
    let server = bounded_server(rng, &alpha);
    let max_length = alpha.burst() * rng.gen_range(0.05..=1.0);
    let length = if rng.gen_bool(0.2) {
        max_length
    } else {
        max_length * rng.gen_range(0.01..=1.0)
    };
    TightnessScenario::new(alpha, server, length, max_length).unwrap()
}

/// Outcome of one gated soundness run.
pub struct SweepRun {
    pub policy: SchedulerPolicy,
    pub packets: usize,
    pub compliant: bool,
    pub violations: usize,
    pub witness_holds: bool,
    pub strict_improvement: bool,
    pub attained: f64,
}

pub fn sweep_run(seed: u64) -> SweepRun {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let (_, alpha) = lattice_curve(&mut rng, 100.0);
    let server = bounded_server(&mut rng, &alpha);
    let max_length = alpha.burst() * rng.gen_range(0.1..=1.0);
    let mean_gap = max_length / alpha.long_run_rate().max(1.0);
    let horizon = mean_gap * rng.gen_range(5.0..40.0);
    let trace = random_conforming_trace(&alpha, max_length, horizon, seed).unwrap();
    assert!(
        verify_arrival_conformance(&trace, &alpha).conforms,
        "seed {seed}"
    );
    let policy = match seed % 3 {
        0 => SchedulerPolicy::Greedy,
        1 => SchedulerPolicy::MaxLazy,
        _ => SchedulerPolicy::Jittered { seed },
    };
    let result = simulate(&trace, policy, &server);
    let compliant = verify_service_curve(&result, server.service()).compliant;
    let mut run = SweepRun {
        policy,
        packets: trace.len(),
        compliant,
        violations: 0,
        witness_holds: true,
        strict_improvement: true,
        attained: 0.0,
    };
    if !compliant {
        return run;
    }
    let check = check_delay_bounds(&result, &alpha, &server).unwrap();
    run.violations = check.violations.len();
    run.witness_holds = verify_backlog_witness(&result, server.service()).holds;
    run.attained = check.attained_fraction().unwrap_or(0.0);
    if server.line_rate() > server.rate() {
        let delta = classic_bound(&alpha, &server).value().unwrap();
        run.strict_improvement = check
            .packets
            .iter()
            .all(|p| p.bound.value().unwrap() < delta);
    }
    run
}

/// Builds the worst case and runs both verifiers on it.
pub fn verified_worst_case(s: &TightnessScenario) -> (WorstCaseTrace, bool, bool) {
    let w = build_worst_case(s).unwrap();
    let conforms = verify_arrival_conformance(&w.trace, &s.alpha).conforms;
    let compliant = verify_service_curve(&w.to_sim_result(), s.server.service()).compliant;
    (w, conforms, compliant)
}
