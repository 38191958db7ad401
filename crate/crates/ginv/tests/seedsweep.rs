use ginv::harness::{all_theorem_ids, run_campaign};
use ginv::Tolerance;

#[test]
fn campaigns_across_many_seeds() {
    let tol = Tolerance::default();
    for seed in [0u64, 1, 2, 3, 7, 13, 42, 99, 1234, 0xdeadbeef, u64::MAX] {
        for id in all_theorem_ids() {
            let r = run_campaign(id, 100, seed, &tol).unwrap();
            assert_eq!(
                r.violations, 0,
                "{id} seed {seed}: {:?}",
                r.counterexample.map(|c| c.detail)
            );
        }
    }
}
