//! End-to-end checks of the staged optimisation chain against the
//! exhaustive reference on small weeks.

mod common;

use chemoplan::{
    brute_force_lexico, evaluate, procedure1, procedure2, stage1, validate_schedule, KOptParams,
    SolveOptions, StageLimits,
};
use common::{micro, tiny_instance};

fn opts() -> SolveOptions {
    SolveOptions::internal(30.0)
}

#[test]
fn chain_reproduces_the_reference_on_tiny_weeks() {
    let limits = StageLimits::default();
    let kopt = KOptParams::default();
    let mut chair_matches = 0usize;
    for seed in 0..12u64 {
        let inst = tiny_instance(seed);
        let reference = brute_force_lexico(&inst).expect("tiny weeks fit the reference solver");

        let s1 = stage1(&inst, &opts()).unwrap();
        assert!(s1.optimal, "seed {seed}: treated-count stage must prove optimality");
        assert_eq!(s1.v1, reference.v1, "seed {seed}: treated count");

        let p1 = procedure1(&inst, &limits, &opts()).unwrap();
        assert_eq!(p1.v1, reference.v1, "seed {seed}");
        assert_eq!(
            p1.v2.iter().sum::<usize>(),
            reference.v2.iter().sum::<usize>(),
            "seed {seed}: wait sums must agree at the optimum"
        );

        let outcome = procedure2(&inst, &limits, &kopt, &opts()).unwrap();
        assert_eq!(outcome.v1, reference.v1, "seed {seed}");
        assert_eq!(
            outcome.v2.iter().sum::<usize>(),
            reference.v2.iter().sum::<usize>(),
            "seed {seed}"
        );
        assert!(
            outcome.phi3 <= reference.phi3,
            "seed {seed}: chair count {} cannot beat the reference {} under tighter caps",
            outcome.phi3,
            reference.phi3
        );
        if outcome.phi3 == reference.phi3 {
            chair_matches += 1;
        }

        // The outcome metrics must be exactly the evaluated metrics of
        // the shipped schedule.
        assert!(validate_schedule(&outcome.schedule, &inst).is_empty(), "seed {seed}");
        let metrics = evaluate(&outcome.schedule, &inst).unwrap();
        assert_eq!(outcome.v1, metrics.phi1, "seed {seed}");
        assert_eq!(outcome.v2, metrics.phi2, "seed {seed}");
        assert_eq!(outcome.phi3, metrics.phi3, "seed {seed}");

        // Lexicographic safety relative to the chain's own caps.
        assert!(metrics.phi1 >= p1.v1, "seed {seed}");
        for (day0, (&wait, &cap)) in metrics.phi2.iter().zip(&p1.v2).enumerate() {
            assert!(wait <= cap, "seed {seed}: day {} wait {wait} over cap {cap}", day0 + 1);
        }
    }
    println!("chair optimum matched on {chair_matches}/12 tiny weeks");
    assert!(chair_matches > 0, "the chain should hit the chair optimum somewhere");
}

#[test]
fn micro_week_chain_is_frozen() {
    let inst = micro();
    let outcome =
        procedure2(&inst, &StageLimits::default(), &KOptParams::default(), &opts()).unwrap();
    assert_eq!((outcome.v1, outcome.phi3), (2, 1));
    assert_eq!(outcome.v2, vec![0]);

    let stages: Vec<&str> = outcome.stage_logs.iter().map(|l| l.stage.as_str()).collect();
    assert_eq!(stages[0], "af1", "the chain starts with the treated-count stage");
    assert!(stages.contains(&"af2-warm"), "the whole-week wait stage must run");
    let json = serde_json::to_string(&outcome.stage_logs[0]).unwrap();
    assert!(json.contains("\"stage\":\"af1\""));
}
