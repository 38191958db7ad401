use ginv::harness::{all_theorem_ids, run_campaign};
use ginv::Tolerance;

#[test]
fn full_scale_campaigns() {
    let tol = Tolerance::default();
    let t0 = std::time::Instant::now();
    for id in all_theorem_ids() {
        let start = std::time::Instant::now();
        let r = run_campaign(id, 200, 42, &tol).unwrap();
        println!(
            "{id:32} trials={:4} violations={} worst={:.3e}  ({:?})",
            r.trials, r.violations, r.worst_residual, start.elapsed()
        );
        if let Some(ce) = &r.counterexample {
            println!("   detail: {}", ce.detail);
            println!("   A = {:?}", ce.a);
            if let Some(b) = &ce.b { println!("   B = {:?}", b); }
        }
        assert_eq!(r.violations, 0, "{id}");
    }
    println!("total: {:?}", t0.elapsed());
}
