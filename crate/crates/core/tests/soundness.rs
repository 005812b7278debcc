mod common;

use common::*;

#[test]
fn no_bound_violation_on_verified_runs() {
    let mut gated = 0;
    for seed in 0..300 {
        let run = sweep_run(seed);
        if !run.compliant {
            continue;
        }
        gated += 1;
        assert_eq!(run.violations, 0, "seed {seed} ({:?})", run.policy);
        assert!(run.witness_holds, "seed {seed}");
        assert!(run.strict_improvement, "seed {seed}");
        assert!(run.attained <= 1.0 + 1e-9);
    }
    assert!(
        gated > 150,
        "only {gated} runs passed the service-curve gate"
    );
}
