use euler_core::critpoints::{all_critical_points, critical_system};
use euler_core::critpoints::homotopy::{track_all, TrackedSystem, PathOutcome};
use euler_core::laurent::moduli_minors;
use euler_core::spec::{IntegralSpec, Scalar};
use rand::Rng;

fn main() {
    let polys = moduli_minors(6).unwrap();
    let vars: Vec<String> = (1..=3).map(|j| format!("x{j}")).collect();
    for trial in 0..5u64 {
        let mut rng = euler_core::rng::stream(46, &[0xE777, trial]);
        let mut draw = || {
            let num = rng.gen_range(1..=400i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let den = rng.gen_range(1..=97i64);
            Scalar::from_ratio(num, den)
        };
        let s: Vec<Scalar> = (0..6).map(|_| draw()).collect();
        let nu: Vec<Scalar> = (0..3).map(|_| draw()).collect();
        let spec = IntegralSpec::new(vars.clone(), polys.clone(), s, nu).unwrap();
        let system = critical_system(&spec);
        let tracked = TrackedSystem::new(&system.cleared);
        let report = track_all(&tracked, euler_core::rng::derive_seed(46, &[trial]));
        let mut endpoints = 0; let mut diverged = 0; let mut failed = 0; let mut singular = 0;
        for o in &report.outcomes {
            match o {
                PathOutcome::Endpoint{..} => endpoints += 1,
                PathOutcome::Diverged => diverged += 1,
                PathOutcome::Failed => failed += 1,
                PathOutcome::SingularEndpoint{..} => singular += 1,
            }
        }
        let set = all_critical_points(&spec, euler_core::rng::derive_seed(46, &[trial]));
        println!("trial {trial}: paths={} endpoints={endpoints} diverged={diverged} failed={failed} singular={singular} -> count={:?}",
            tracked.bezout_count(), set.map(|s| (s.count, s.warnings)));
    }
}
