//! The subcommands. Each writes a human-readable report to `out`, in the
//! scenario's units, and optionally a CSV file in bits and seconds.

use std::io::Write;
use std::path::Path;

use ncdelay_core::{
    bound_report, build_worst_case, check_delay_bounds, classic_bound, drr_service_curve,
    improved_bound, improvement, per_flow_bounds, random_conforming_trace, replay, simulate,
    verify_arrival_conformance, verify_backlog_witness, verify_service_curve, Bound, ConcaveArrivalCurve,
    ServerSpec, SimResult, TightnessScenario, Trace,
};
use serde::Serialize;

use crate::config::Scenario;
use crate::error::CliError;
use crate::trace_file::TraceFile;

type Out<'a> = &'a mut dyn Write;

/// Shortest decimal that survives rounding to 12 significant digits, so
/// unit conversions print as `0.3` rather than `0.30000000000000004`.
pub fn num(v: f64) -> String {
    if v.is_infinite() {
        return "unbounded".into();
    }
    let rounded: f64 = format!("{v:.11e}")
        .parse()
        .expect("float formatting parses");
    format!("{rounded}")
}

fn bound_str(b: Bound, scale: impl Fn(f64) -> f64) -> String {
    match b {
        Bound::Finite(v) => num(scale(v)),
        Bound::Unbounded => "unbounded".into(),
    }
}

fn csv_bound(b: Bound) -> String {
    match b {
        Bound::Finite(v) => format!("{v}"),
        Bound::Unbounded => "unbounded".into(),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn describe_server(out: Out, s: &Scenario) -> std::io::Result<()> {
    let u = &s.units;
    writeln!(
        out,
        "server: R = {} {r}, T = {} {t}, c = {} {r}",
        num(u.from_bps(s.server.rate())),
        num(u.from_seconds(s.server.latency())),
        num(u.from_bps(s.server.line_rate())),
        r = u.rate,
        t = u.time
    )?;
    writeln!(
        out,
        "arrival curve: {} piece(s), α+(0) = {} {}, long-run rate {} {}",
        s.alpha.pieces().len(),
        num(u.from_bits(s.alpha.burst())),
        u.data,
        num(u.from_bps(s.alpha.long_run_rate())),
        u.rate
    )
}

/// One row of `ncdelay bound`, in bits and seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub length: f64,
    pub delta: Bound,
    pub delta_l: Bound,
    pub improvement: f64,
}

impl BoundRow {
    pub fn improvement_pct(&self) -> f64 {
        match self.delta {
            Bound::Finite(d) if d > 0.0 => 100.0 * self.improvement / d,
            _ => 0.0,
        }
    }
}

pub const BOUND_HEADER: [&str; 6] = [
    "scenario",
    "length_bits",
    "delta_s",
    "delta_l_s",
    "improvement_s",
    "improvement_pct",
];

/// Lengths to report on: `lengths`, else each flow's shortest packet.
fn report_lengths(s: &Scenario) -> Result<Vec<f64>, CliError> {
    if !s.lengths.is_empty() {
        return Ok(s.lengths.clone());
    }
    if !s.flows.is_empty() {
        return Ok(s.flows.iter().map(|f| f.min_length()).collect());
    }
    Err(CliError::Config(
        "nothing to bound: give `lengths` or `flows`".into(),
    ))
}

pub fn bound_rows(s: &Scenario) -> Result<Vec<BoundRow>, CliError> {
    let report = bound_report(&s.alpha, &s.server, &report_lengths(s)?)?;
    Ok(report
        .delta_l
        .iter()
        .map(|&(length, delta_l)| BoundRow {
            length,
            delta: report.delta,
            delta_l,
            improvement: match report.delta {
                Bound::Finite(_) => improvement(&s.server, length),
                Bound::Unbounded => 0.0,
            },
        })
        .collect())
}

pub fn bound(s: &Scenario, csv_path: Option<&Path>, out: Out) -> Result<(), CliError> {
    let rows = bound_rows(s)?;
    let report = bound_report(&s.alpha, &s.server, &[])?;
    let flows = per_flow_bounds(&s.alpha, &s.server, &s.flows)?;
    let u = &s.units;
    let secs = |v: f64| u.from_seconds(v);

    writeln!(out, "scenario {}", s.name)?;
    describe_server(out, s)?;
    match report.critical_time {
        Some(t) => writeln!(
            out,
            "Δ = {} {t_u} (critical time t' = {} {t_u})",
            bound_str(report.delta, secs),
            num(secs(t)),
            t_u = u.time
        )?,
        None => writeln!(out, "Δ = unbounded: long-run arrival rate exceeds R")?,
    }
    writeln!(out)?;
    writeln!(
        out,
        "{:>16}  {:>16}  {:>16}  {:>16}",
        format!("length ({})", u.data),
        format!("Δ_l ({})", u.time),
        format!("gain ({})", u.time),
        "gain (%)"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:>16}  {:>16}  {:>16}  {:>16}",
            num(u.from_bits(r.length)),
            bound_str(r.delta_l, secs),
            num(secs(r.improvement)),
            num(r.improvement_pct())
        )?;
    }
    if !flows.is_empty() {
        writeln!(out)?;
        writeln!(out, "per-flow bounds (shortest packet of each flow):")?;
        for (f, spec) in flows.iter().zip(&s.flows) {
            writeln!(
                out,
                "  {:<12} lengths [{}, {}] {}  bound {} {}",
                f.name,
                num(u.from_bits(spec.min_length())),
                num(u.from_bits(spec.max_length())),
                u.data,
                bound_str(f.bound, secs),
                u.time
            )?;
        }
    }

    if let Some(path) = csv_path {
        let records: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    s.name.clone(),
                    format!("{}", r.length),
                    csv_bound(r.delta),
                    csv_bound(r.delta_l),
                    format!("{}", r.improvement),
                    format!("{}", r.improvement_pct()),
                ]
            })
            .collect();
        write_csv(path, &BOUND_HEADER, &records)?;
    }
    Ok(())
}

/// The worst-case execution for the scenario's first length, verified.
pub struct TightnessOutcome {
    pub worst: ncdelay_core::WorstCaseTrace,
    pub delta: f64,
    pub conforms: bool,
    pub compliant: bool,
}

pub fn tightness_outcome(s: &Scenario) -> Result<TightnessOutcome, CliError> {
    let length = *s.lengths.first().ok_or_else(|| {
        CliError::Config("tightness needs the packet of interest as `lengths[0]`".into())
    })?;
    let scenario =
        TightnessScenario::new(s.alpha.clone(), s.server, length, s.effective_max_length())?;
    let worst = build_worst_case(&scenario)?;
    let result = worst.to_sim_result();
    let conforms = verify_arrival_conformance(&worst.trace, &s.alpha).conforms;
    let compliant = verify_service_curve(&result, s.server.service()).compliant;
    let delta = classic_bound(&s.alpha, &s.server)
        .value()
        .ok_or_else(|| CliError::Infeasible("classic bound is unbounded".into()))?;
    Ok(TightnessOutcome {
        worst,
        delta,
        conforms,
        compliant,
    })
}

pub fn tightness(s: &Scenario, trace_out: Option<&Path>, out: Out) -> Result<(), CliError> {
    let t = tightness_outcome(s)?;
    let u = &s.units;
    let w = &t.worst;
    let length = w
        .trace
        .packets()
        .last()
        .map(|p| p.length)
        .unwrap_or_default();

    writeln!(out, "scenario {}", s.name)?;
    describe_server(out, s)?;
    writeln!(
        out,
        "packet of interest: l = {} {}, L_max = {} {}",
        num(u.from_bits(length)),
        u.data,
        num(u.from_bits(w.trace.max_length())),
        u.data
    )?;
    writeln!(
        out,
        "critical time t' = {} {}",
        num(u.from_seconds(w.t_prime)),
        u.time
    )?;
    writeln!(
        out,
        "packets: {} ({} {} in total)",
        w.trace.len(),
        num(u.from_bits(w.trace.total_bits())),
        u.data
    )?;
    if w.trace.len() <= 20 {
        writeln!(
            out,
            "{:>6}  {:>14}  {:>14}  {:>14}  {:>14}",
            "n",
            format!("A ({})", u.time),
            format!("l ({})", u.data),
            format!("Q ({})", u.time),
            format!("D ({})", u.time)
        )?;
        for (p, &(q, d)) in w.trace.packets().iter().zip(&w.schedule) {
            writeln!(
                out,
                "{:>6}  {:>14}  {:>14}  {:>14}  {:>14}",
                p.index,
                num(u.from_seconds(p.arrival)),
                num(u.from_bits(p.length)),
                num(u.from_seconds(q)),
                num(u.from_seconds(d))
            )?;
        }
    }
    writeln!(
        out,
        "response of the last packet: {} {t} (Δ_l = {} {t}, Δ = {} {t})",
        num(u.from_seconds(w.response)),
        num(u.from_seconds(w.bound)),
        num(u.from_seconds(t.delta)),
        t = u.time
    )?;
    writeln!(out, "arrival conformance: {}", verdict(t.conforms))?;
    writeln!(out, "service-curve compliance: {}", verdict(t.compliant))?;
    if let Some(path) = trace_out {
        TraceFile::from_trace(&w.trace, Some(&w.schedule)).save(path)?;
        writeln!(out, "trace written to {}", path.display())?;
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// One simulated execution and its verdicts.
#[derive(Debug, Clone)]
pub struct RunSummary {
    /// `None` for runs that do not depend on a seed.
    pub seed: Option<u64>,
    pub policy: &'static str,
    pub packets: usize,
    pub conforms: bool,
    pub compliant: bool,
    pub witness: bool,
    pub max_response: Option<f64>,
    pub attained: Option<f64>,
    pub min_slack: Option<f64>,
    pub violations: usize,
}

impl RunSummary {
    pub fn gated(&self) -> bool {
        self.conforms && self.compliant
    }
}

pub const SIMULATE_HEADER: [&str; 11] = [
    "seed",
    "policy",
    "packets",
    "conforms",
    "compliant",
    "backlog_witness",
    "max_response_s",
    "attained_fraction",
    "min_slack_s",
    "violations",
    "gated",
];

#[derive(Debug, Serialize)]
struct Witness {
    scenario: String,
    seed: Option<u64>,
    policy: String,
    index: usize,
    arrival: f64,
    length: f64,
    start: f64,
    departure: f64,
    response: f64,
    bound: f64,
    trace: TraceFile,
}

/// Per-packet `response / Δ_l` histogram: ten bins of width 0.1 and one
/// overflow bin for anything above 1 by more than the tolerance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SlackHistogram {
    pub bins: [u64; 11],
}

impl SlackHistogram {
    fn add(&mut self, fraction: f64) {
        let k = if fraction > 1.0 + ncdelay_core::TOLERANCE {
            10
        } else {
            ((fraction * 10.0).floor().max(0.0) as usize).min(9)
        };
        self.bins[k] += 1;
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }
}

/// Maximum response among packets whose length lies in one tenth of
/// `(0, L_max]`, against the bound for the shortest length of that class.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthClass {
    pub lower: f64,
    pub upper: f64,
    pub packets: u64,
    pub max_response: Option<f64>,
    pub bound: Bound,
}

#[derive(Debug, Clone)]
pub struct SimulateReport {
    pub runs: Vec<RunSummary>,
    pub histogram: SlackHistogram,
    pub classes: Vec<LengthClass>,
}

struct Collector<'a> {
    s: &'a Scenario,
    report: SimulateReport,
    witness: Option<Witness>,
}

impl Collector<'_> {
    fn record(
        &mut self,
        seed: Option<u64>,
        policy: &'static str,
        trace: &Trace,
        result: &SimResult,
    ) -> Result<(), CliError> {
        let s = self.s;
        let beta = s.server.service();
        let conforms = verify_arrival_conformance(trace, &s.alpha).conforms;
        let compliant = verify_service_curve(result, beta).compliant;
        let mut summary = RunSummary {
            seed,
            policy,
            packets: result.packets.len(),
            conforms,
            compliant,
            witness: false,
            max_response: result.max_response(),
            attained: None,
            min_slack: None,
            violations: 0,
        };
        if summary.gated() {
            summary.witness = verify_backlog_witness(result, beta).holds;
            let check = check_delay_bounds(result, &s.alpha, &s.server)?;
            summary.attained = check.attained_fraction();
            summary.min_slack = check.min_slack();
            summary.violations = check.violations.len();
            for p in &check.packets {
                if let Bound::Finite(b) = p.bound {
                    if b > 0.0 {
                        self.report.histogram.add(p.response / b);
                    }
                }
                if let Some(class) = self
                    .report
                    .classes
                    .iter_mut()
                    .find(|c| p.length > c.lower && p.length <= c.upper)
                {
                    class.packets += 1;
                    class.max_response =
                        Some(class.max_response.map_or(p.response, |m| m.max(p.response)));
                }
            }
            if self.witness.is_none() {
                if let Some(&index) = check.violations.first() {
                    let rec = result.packets[index - 1];
                    let bound = check.packets[index - 1].bound.or_infinity();
                    self.witness = Some(Witness {
                        scenario: s.name.clone(),
                        seed,
                        policy: policy.to_string(),
                        index,
                        arrival: rec.arrival,
                        length: rec.length,
                        start: rec.start,
                        departure: rec.departure,
                        response: rec.response(),
                        bound,
                        trace: TraceFile::from_trace(trace, Some(&result.schedule())),
                    });
                }
            }
        }
        self.report.runs.push(summary);
        Ok(())
    }
}

/// Run every seed and policy, gated by the verifiers. Returns the report
/// and, if some packet broke its bound, a JSON witness. With zero seeds
/// nothing runs, though a user trace is still checked for conformance.
pub fn simulate_report(
    s: &Scenario,
    seeds: Option<u64>,
) -> Result<(SimulateReport, Option<String>), CliError> {
    let settings = s
        .sim
        .clone()
        .ok_or_else(|| CliError::Config("simulate needs a `sim` block".into()))?;
    let seeds = seeds.unwrap_or(settings.seeds);
    let max_length = s.effective_max_length();

    let classes = (0..10)
        .map(|k| {
            let lower = max_length * k as f64 / 10.0;
            let bound = improved_bound(&s.alpha, &s.server, lower.min(s.alpha.burst()))
                .map_err(CliError::from)?;
            Ok(LengthClass {
                lower,
                upper: max_length * (k + 1) as f64 / 10.0,
                packets: 0,
                max_response: None,
                bound,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut collector = Collector {
        s,
        report: SimulateReport {
            runs: Vec::new(),
            histogram: SlackHistogram::default(),
            classes,
        },
        witness: None,
    };

    let user = match &settings.trace {
        Some(path) => {
            let file = TraceFile::load(path)?;
            let trace = file.to_trace()?;
            let verdict = verify_arrival_conformance(&trace, &s.alpha);
            if let Some(v) = verdict.violation {
                return Err(CliError::Gate(format!(
                    "{} does not conform to α: packets {}..={} carry {} bits, α allows {}",
                    path.display(),
                    v.m,
                    v.n,
                    v.bits,
                    v.allowance
                )));
            }
            if let Some(schedule) = file.schedule_pairs() {
                let result = replay(&trace, &schedule, s.server.line_rate())
                    .map_err(|e| CliError::Gate(format!("{}: {e}", path.display())))?;
                if let Some(v) = verify_service_curve(&result, s.server.service()).violation {
                    return Err(CliError::Gate(format!(
                        "{}: schedule breaks the service curve at t = {}: output {} < {}",
                        path.display(),
                        v.time,
                        v.output,
                        v.required
                    )));
                }
                if seeds > 0 {
                    collector.record(None, "replay", &trace, &result)?;
                }
            }
            Some(trace)
        }
        None => None,
    };

    if settings.include_worst_case && seeds > 0 {
        let t = tightness_outcome(s)?;
        collector.record(None, "worst_case", &t.worst.trace, &t.worst.to_sim_result())?;
    }

    for seed in 0..seeds {
        let trace = match &user {
            Some(t) => t.clone(),
            None => random_conforming_trace(&s.alpha, max_length, settings.horizon, seed)
                .map_err(|e| CliError::Config(format!("trace generation: {e}")))?,
        };
        for &policy in &settings.policies {
            let result = simulate(&trace, policy.with_seed(seed), &s.server);
            collector.record(Some(seed), policy.name(), &trace, &result)?;
        }
    }

    let witness = collector
        .witness
        .map(|w| serde_json::to_string_pretty(&w).expect("plain data serializes"));
    Ok((collector.report, witness))
}

pub fn simulate_cmd(
    s: &Scenario,
    seeds: Option<u64>,
    csv_path: Option<&Path>,
    out: Out,
) -> Result<(), CliError> {
    let (report, witness) = simulate_report(s, seeds)?;
    let u = &s.units;
    let secs = |v: f64| u.from_seconds(v);

    writeln!(out, "scenario {}", s.name)?;
    describe_server(out, s)?;
    let delta = classic_bound(&s.alpha, &s.server);
    writeln!(out, "Δ = {} {}", bound_str(delta, secs), u.time)?;
    writeln!(out)?;
    if report.runs.is_empty() {
        writeln!(out, "no runs")?;
    } else {
        writeln!(
            out,
            "{:<12} {:>6} {:>8} {:>10} {:>9} {:>16} {:>10} {:>10}",
            "policy",
            "runs",
            "gated",
            "discarded",
            "packets",
            format!("max resp ({})", u.time),
            "attained",
            "violations"
        )?;
        let mut names: Vec<&str> = Vec::new();
        for r in &report.runs {
            if !names.contains(&r.policy) {
                names.push(r.policy);
            }
        }
        for name in names {
            let runs: Vec<&RunSummary> = report.runs.iter().filter(|r| r.policy == name).collect();
            let gated: Vec<&&RunSummary> = runs.iter().filter(|r| r.gated()).collect();
            let max_resp = gated.iter().filter_map(|r| r.max_response).reduce(f64::max);
            let attained = gated.iter().filter_map(|r| r.attained).reduce(f64::max);
            writeln!(
                out,
                "{:<12} {:>6} {:>8} {:>10} {:>9} {:>16} {:>10} {:>10}",
                name,
                runs.len(),
                gated.len(),
                runs.len() - gated.len(),
                gated.iter().map(|r| r.packets).sum::<usize>(),
                max_resp.map(|v| num(secs(v))).unwrap_or_else(|| "-".into()),
                attained
                    .map(|v| format!("{v:.4}"))
                    .unwrap_or_else(|| "-".into()),
                gated.iter().map(|r| r.violations).sum::<usize>()
            )?;
        }
        let witnesses = report.runs.iter().filter(|r| r.gated()).all(|r| r.witness);
        writeln!(out, "backlog witnesses: {}", verdict(witnesses))?;
    }

    writeln!(out)?;
    writeln!(
        out,
        "response / Δ_l per packet ({} packets):",
        report.histogram.total()
    )?;
    for (k, count) in report.histogram.bins.iter().enumerate() {
        let label = if k == 10 {
            "     > 1.0".to_string()
        } else {
            format!(
                "[{:.1}, {:.1}{}",
                k as f64 / 10.0,
                (k + 1) as f64 / 10.0,
                if k == 9 { "]" } else { ")" }
            )
        };
        writeln!(out, "  {label:<12} {count}")?;
    }

    writeln!(out)?;
    writeln!(out, "max response by length class:")?;
    for c in &report.classes {
        writeln!(
            out,
            "  ({:>10}, {:>10}] {}  packets {:>7}  max {:>14}  bound {:>14} {}",
            num(u.from_bits(c.lower)),
            num(u.from_bits(c.upper)),
            u.data,
            c.packets,
            c.max_response
                .map(|v| num(secs(v)))
                .unwrap_or_else(|| "-".into()),
            bound_str(c.bound, secs),
            u.time
        )?;
    }

    if let Some(path) = csv_path {
        let rows: Vec<Vec<String>> = report
            .runs
            .iter()
            .map(|r| {
                vec![
                    r.seed.map(|v| v.to_string()).unwrap_or_default(),
                    r.policy.to_string(),
                    r.packets.to_string(),
                    r.conforms.to_string(),
                    r.compliant.to_string(),
                    r.witness.to_string(),
                    opt(r.max_response),
                    opt(r.attained),
                    opt(r.min_slack),
                    r.violations.to_string(),
                    r.gated().to_string(),
                ]
            })
            .collect();
        write_csv(path, &SIMULATE_HEADER, &rows)?;
    }

    match witness {
        Some(w) => Err(CliError::BoundViolation(w)),
        None => Ok(()),
    }
}

/// `key=value` overrides for the case studies.
pub fn parse_params(params: &[String], allowed: &[&str]) -> Result<Vec<(String, f64)>, CliError> {
    params
        .iter()
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--param expects key=value, got `{p}`")))?;
            if !allowed.contains(&k) {
                return Err(CliError::Config(format!(
                    "unknown parameter `{k}`, expected one of {}",
                    allowed.join(", ")
                )));
            }
            let v: f64 = v.parse().map_err(|_| {
                CliError::Config(format!("parameter `{k}` needs a number, got `{v}`"))
            })?;
            Ok((k.to_string(), v))
        })
        .collect()
}

fn param(params: &[(String, f64)], key: &str) -> Option<f64> {
    params.iter().rev().find(|(k, _)| k == key).map(|&(_, v)| v)
}

/// One line of the DRR case study, in bits and seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct DrrCase {
    pub n: usize,
    pub server: ServerSpec,
    pub delta: f64,
    pub delta_l: f64,
}

impl DrrCase {
    pub fn ratio(&self) -> f64 {
        (self.delta - self.delta_l) / self.delta
    }
}

/// DRR queue with a burst-`L` token bucket at rate `R`.
pub fn drr_case(
    n: usize,
    c: f64,
    max_length: f64,
    quantum: f64,
    length: f64,
) -> Result<DrrCase, CliError> {
    let server = drr_service_curve(n, c, max_length, quantum)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let alpha = ConcaveArrivalCurve::token_bucket(max_length, server.rate())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let delta = classic_bound(&alpha, &server).or_infinity();
    let delta_l = improved_bound(&alpha, &server, length)?.or_infinity();
    Ok(DrrCase {
        n,
        server,
        delta,
        delta_l,
    })
}

pub fn casestudy_drr(params: &[String], out: Out) -> Result<(), CliError> {
    let p = parse_params(params, &["n", "c", "L", "Q", "l"])?;
    let c = param(&p, "c").unwrap_or(1e6);
    let max_length = param(&p, "L").unwrap_or(1000.0);
    let quantum = param(&p, "Q").unwrap_or(max_length);
    let length = param(&p, "l").unwrap_or(max_length);
    let ns: Vec<usize> = match param(&p, "n") {
        Some(n) if n >= 1.0 && n.fract() == 0.0 => vec![n as usize],
        Some(n) => {
            return Err(CliError::Config(format!(
                "n must be a positive integer, got {n}"
            )))
        }
        None => vec![2, 4, 8, 16, 100],
    };
    writeln!(
        out,
        "DRR, c = {} bps, L = {} bits, Q = {} bits, packet of interest l = {} bits",
        num(c),
        num(max_length),
        num(quantum),
        num(length)
    )?;
    writeln!(out, "arrival curve: token bucket with burst L at rate R")?;
    writeln!(
        out,
        "{:>5}  {:>12}  {:>12}  {:>12}  {:>12}  {:>12}  {:>8}",
        "n", "R (bps)", "T (s)", "Δ (s)", "Δ_l (s)", "gain (s)", "gain (%)"
    )?;
    for n in ns {
        let case = drr_case(n, c, max_length, quantum, length)?;
        writeln!(
            out,
            "{:>5}  {:>12}  {:>12}  {:>12}  {:>12}  {:>12}  {:>8.3}",
            n,
            num(case.server.rate()),
            num(case.server.latency()),
            num(case.delta),
            num(case.delta_l),
            num(case.delta - case.delta_l),
            100.0 * case.ratio()
        )?;
    }
    Ok(())
}

/// Gain of one CBS class, in seconds.
pub fn cbs_gain(c: f64, idle_slope: f64, length: f64) -> Result<f64, CliError> {
    let server =
        ServerSpec::new(idle_slope * c, 0.0, c).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(improvement(&server, length))
}

pub fn casestudy_cbs(params: &[String], out: Out) -> Result<(), CliError> {
    let p = parse_params(params, &["c", "slope_a", "slope_b", "l_a", "l_b"])?;
    let rates: Vec<f64> = match param(&p, "c") {
        Some(c) => vec![c],
        None => vec![1e9, 1e8],
    };
    let classes = [
        (
            "A",
            param(&p, "slope_a").unwrap_or(0.6),
            param(&p, "l_a").unwrap_or(11992.0),
        ),
        (
            "B",
            param(&p, "slope_b").unwrap_or(0.15),
            param(&p, "l_b").unwrap_or(11504.0),
        ),
    ];
    writeln!(out, "credit-based shaper classes, R = idle slope × c")?;
    writeln!(
        out,
        "{:>5}  {:>12}  {:>10}  {:>12}  {:>10}  {:>10}",
        "class", "c (bps)", "idle slope", "R (bps)", "l (bits)", "gain (µs)"
    )?;
    for &c in &rates {
        for &(class, slope, length) in &classes {
            let gain = cbs_gain(c, slope, length)?;
            writeln!(
                out,
                "{:>5}  {:>12}  {:>10}  {:>12}  {:>10}  {:>10.3}",
                class,
                num(c),
                num(slope),
                num(slope * c),
                num(length),
                gain * 1e6
            )?;
        }
    }
    Ok(())
}
