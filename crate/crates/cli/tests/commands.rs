use std::path::Path;

use ncdelay::commands::{
    bound_rows, cbs_gain, drr_case, simulate_report, tightness_outcome, BOUND_HEADER,
};
use ncdelay::{Scenario, TraceFile};
use ncdelay_core::{replay, Bound};

fn bundled(name: &str) -> Scenario {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name);
    Scenario::load(&path).unwrap()
}

fn inline(text: &str) -> Scenario {
    Scenario::parse(text, "inline", Path::new(".")).unwrap()
}

#[test]
fn drr_n4_gains_three_thirteenths() {
    let rows = bound_rows(&bundled("drr_n4.json")).unwrap();
    let full = &rows[0];
    assert_eq!(full.length, 1000.0);
    assert!((full.improvement_pct() - 300.0 / 13.0).abs() < 1e-9);
    assert!((full.improvement_pct() - 23.08).abs() < 0.005);
    assert!((full.delta.value().unwrap() - 0.013).abs() < 1e-15);
    assert!((full.delta_l.value().unwrap() - 0.010).abs() < 1e-15);
}

#[test]
fn drr_case_matches_closed_forms() {
    for n in [2usize, 4, 8, 16, 100] {
        let case = drr_case(n, 1e6, 1000.0, 1000.0, 1000.0).unwrap();
        let nf = n as f64;
        assert!((case.delta - (4.0 * nf - 3.0) * 1e-3).abs() < 1e-12);
        assert!((case.ratio() - (nf - 1.0) / (4.0 * nf - 3.0)).abs() < 1e-12);
    }
}

#[test]
fn cbs_configs_reproduce_class_gains() {
    for (name, want) in [("cbs_class_a.json", 8e-6), ("cbs_class_b.json", 66e-6)] {
        let rows = bound_rows(&bundled(name)).unwrap();
        assert!(
            (rows[0].improvement / want - 1.0).abs() <= 0.02,
            "{name}: {}",
            rows[0].improvement
        );
    }
    assert!((cbs_gain(1e9, 0.6, 11992.0).unwrap() - 7.9947e-6).abs() < 1e-9);
    assert!((cbs_gain(1e9, 0.15, 11504.0).unwrap() - 65.189e-6).abs() < 1e-9);
}

#[test]
fn unbounded_rows_report_unbounded() {
    let s = inline(
        r#"{"alpha": {"pieces": [{"burst": 100, "rate": 50}]}, "server": {"R": 10, "T": 1, "c": 20},
            "lengths": [50]}"#,
    );
    let rows = bound_rows(&s).unwrap();
    assert_eq!(rows[0].delta, Bound::Unbounded);
    assert_eq!(rows[0].delta_l, Bound::Unbounded);
}

#[test]
fn tightness_example_has_three_packets() {
    let t = tightness_outcome(&bundled("worst_case.json")).unwrap();
    let w = &t.worst;
    assert_eq!(w.trace.len(), 3);
    let lengths: Vec<f64> = w.trace.packets().iter().map(|p| p.length).collect();
    assert_eq!(lengths, vec![2000.0, 1000.0, 1000.0]);
    assert!(w.trace.packets().iter().all(|p| p.arrival == 0.0));
    assert!((w.response - 1.61).abs() < 1e-12);
    assert!((t.delta - 2.01).abs() < 1e-12);
    assert!(t.conforms && t.compliant);
}

#[test]
fn tightness_flags_short_bursts() {
    let s = inline(
        r#"{"alpha": {"pieces": [{"burst": 1000, "rate": 10}]}, "server": {"R": 20, "T": 0, "c": 100},
            "lengths": [500], "L_max": 1500}"#,
    );
    let err = tightness_outcome(&s).err().unwrap();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("α+(0) ≥ L_max"), "{err}");
}

#[test]
fn trace_file_round_trip_reproduces_the_result() {
    let t = tightness_outcome(&bundled("two_slopes.json")).unwrap();
    let original = t.worst.to_sim_result();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.json");
    TraceFile::from_trace(&t.worst.trace, Some(&t.worst.schedule))
        .save(&path)
        .unwrap();
    let file = TraceFile::load(&path).unwrap();
    let trace = file.to_trace().unwrap();
    assert_eq!(trace, t.worst.trace);
    let again = replay(&trace, &file.schedule_pairs().unwrap(), t.worst.line_rate).unwrap();
    assert_eq!(again, original);
}

#[test]
fn simulated_traces_round_trip_too() {
    let s = bundled("two_slopes.json");
    let trace = ncdelay_core::random_conforming_trace(&s.alpha, 12000.0, 0.2, 11).unwrap();
    let result = ncdelay_core::simulate(
        &trace,
        ncdelay_core::SchedulerPolicy::Jittered { seed: 11 },
        &s.server,
    );
    let file = TraceFile::from_result(&result, trace.max_length()).unwrap();
    let text = serde_json::to_string(&file).unwrap();
    let back: TraceFile = serde_json::from_str(&text).unwrap();
    assert_eq!(back, file);
    let rebuilt = back.to_trace().unwrap();
    let replayed = replay(
        &rebuilt,
        &back.schedule_pairs().unwrap(),
        s.server.line_rate(),
    )
    .unwrap();
    assert_eq!(replayed, result);
}

#[test]
fn simulate_sweeps_without_violations() {
    for name in ["drr_n4.json", "worst_case.json", "two_slopes.json"] {
        let s = bundled(name);
        let (report, witness) = simulate_report(&s, None).unwrap();
        assert!(witness.is_none(), "{name}");
        assert!(report.runs.iter().all(|r| r.violations == 0));
        assert!(report.runs.iter().filter(|r| r.gated()).all(|r| r.witness));
        assert_eq!(report.histogram.bins[10], 0);
        let worst = report
            .runs
            .iter()
            .find(|r| r.policy == "worst_case")
            .unwrap();
        assert!((worst.attained.unwrap() - 1.0).abs() < 1e-9, "{name}");
    }
}

#[test]
fn zero_seeds_give_empty_statistics() {
    let (report, witness) = simulate_report(&bundled("drr_n4.json"), Some(0)).unwrap();
    assert!(report.runs.is_empty());
    assert_eq!(report.histogram.total(), 0);
    assert!(report
        .classes
        .iter()
        .all(|c| c.packets == 0 && c.max_response.is_none()));
    assert!(witness.is_none());
}

#[test]
fn user_trace_must_conform() {
    let dir = tempfile::tempdir().unwrap();
    let bad = TraceFile::from_trace(
        &ncdelay_core::Trace::new([(0.0, 1000.0), (0.0, 1000.0), (0.1, 1000.0)], 1000.0).unwrap(),
        None,
    );
    bad.save(&dir.path().join("bad.json")).unwrap();
    let s = Scenario::parse(
        r#"{"alpha": {"pieces": [{"burst": 1000, "rate": 250000}]},
            "server": {"drr": {"n": 4, "c": 1000000, "L": 1000, "Q": 1000}},
            "sim": {"trace": "bad.json", "seeds": 3}}"#,
        "x",
        dir.path(),
    )
    .unwrap();
    let err = simulate_report(&s, None).err().unwrap();
    assert_eq!(err.exit_code(), 5, "{err}");
}

#[test]
fn user_trace_with_schedule_is_replayed() {
    let dir = tempfile::tempdir().unwrap();
    let base = bundled("worst_case.json");
    let t = tightness_outcome(&base).unwrap();
    TraceFile::from_trace(&t.worst.trace, Some(&t.worst.schedule))
        .save(&dir.path().join("wc.json"))
        .unwrap();
    let s = Scenario::parse(
        r#"{"alpha": {"pieces": [{"burst": 4000, "rate": 1000}]}, "server": {"R": 2000, "T": 0.01, "c": 10000},
            "lengths": [1000], "L_max": 2000, "sim": {"trace": "wc.json", "seeds": 2, "policy": "greedy"}}"#,
        "x",
        dir.path(),
    )
    .unwrap();
    let (report, _) = simulate_report(&s, None).unwrap();
    let policies: Vec<&str> = report.runs.iter().map(|r| r.policy).collect();
    assert_eq!(policies, vec!["replay", "greedy", "greedy"]);
    assert!((report.runs[0].max_response.unwrap() - 1.61).abs() < 1e-12);
}

#[test]
fn late_schedule_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let trace = ncdelay_core::Trace::new([(0.0, 1000.0)], 1000.0).unwrap();
    TraceFile::from_trace(&trace, Some(&[(5.0, 5.1)]))
        .save(&dir.path().join("late.json"))
        .unwrap();
    let s = Scenario::parse(
        r#"{"alpha": {"pieces": [{"burst": 1000, "rate": 10}]}, "server": {"R": 2000, "T": 0.01, "c": 10000},
            "sim": {"trace": "late.json"}}"#,
        "x",
        dir.path(),
    )
    .unwrap();
    assert_eq!(simulate_report(&s, None).err().unwrap().exit_code(), 5);
}

#[test]
fn bound_header_is_fixed() {
    assert_eq!(
        BOUND_HEADER.join(","),
        "scenario,length_bits,delta_s,delta_l_s,improvement_s,improvement_pct"
    );
}
