mod common;

use common::*;
use ncdelay_core::{
    build_worst_case, check_delay_bounds, improved_bound, simulate, verify_backlog_witness,
    ConcaveArrivalCurve, SchedulerPolicy, ServerSpec, TightnessScenario,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn randomized_constructions_attain_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let s = tightness_scenario(&mut rng);
        let (w, conforms, compliant) = verified_worst_case(&s);
        let bound = improved_bound(&s.alpha, &s.server, s.length)
            .unwrap()
            .value()
            .unwrap();
        assert!(rel_close(w.response, bound, 1e-9), "case {case}");
        assert!(conforms && compliant, "case {case}");

        let packets = w.trace.packets();
        assert_eq!(packets.last().unwrap().length, s.length);
        assert_eq!(packets.last().unwrap().arrival, w.t_prime);
        assert!(packets
            .iter()
            .all(|p| p.length > 0.0 && p.length <= s.max_length * (1.0 + 1e-9)));
        for (a, b) in packets.iter().zip(&packets[1..]) {
            assert!(a.arrival <= b.arrival);
        }
        for (a, b) in w.schedule.iter().zip(&w.schedule[1..]) {
            assert!(a.0 <= b.0);
            assert!(a.1 <= b.0 + 1e-9 * (1.0 + b.0));
        }
        let total: f64 = packets.iter().map(|p| p.length).sum();
        assert!(rel_close(total, w.fluid_input.limit().unwrap(), 1e-9));
    }
}

#[test]
fn max_lazy_replays_the_constructed_schedule() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let s = tightness_scenario(&mut rng);
        let w = build_worst_case(&s).unwrap();
        let replay = simulate(&w.trace, SchedulerPolicy::MaxLazy, &s.server);
        for (got, want) in replay.schedule().iter().zip(&w.schedule) {
            assert!(rel_close(got.0, want.0, 1e-12) && rel_close(got.1, want.1, 1e-12));
        }
    }
}

#[test]
fn constructed_trace_slack_and_backlog_witnesses() {
    let alpha = ConcaveArrivalCurve::token_bucket(4000.0, 1000.0).unwrap();
    let server = ServerSpec::new(2000.0, 0.01, 10_000.0).unwrap();
    let s = TightnessScenario::new(alpha.clone(), server, 1000.0, 2000.0).unwrap();
    let w = build_worst_case(&s).unwrap();
    let result = w.to_sim_result();

    let check = check_delay_bounds(&result, &alpha, &server).unwrap();
    assert!(check.packets.last().unwrap().slack.abs() < 1e-12);
    assert!(check.violations.is_empty());

    let witness = verify_backlog_witness(&result, server.service());
    assert!(witness.holds);
    assert!(witness.witnesses.iter().all(|m| *m == Some(1)));

    let greedy = simulate(&w.trace, SchedulerPolicy::Greedy, &server);
    let check = check_delay_bounds(&greedy, &alpha, &server).unwrap();
    assert!(check.packets.last().unwrap().slack > 0.0);
}
