//! End-to-end agreement between the exact internal solver, the model
//! builders, and the exhaustive reference search on tiny instances.

mod common;

use std::collections::BTreeMap;

use chemoplan::{
    aggregate_from_assignment, brute_force_lexico, build_af1, build_af2, build_af3,
    build_f1_complete, disaggregate, evaluate, solve, validate_schedule, Instance, SolveOptions,
    SolveStatus, VarKey, VarMap,
};

use common::{micro, tiny_instance};

fn opts() -> SolveOptions {
    SolveOptions::internal(60.0)
}

/// Per-day wait ceiling chosen by a wait-minimisation assignment.
fn day_waits(map: &VarMap, inst: &Instance, assignment: &BTreeMap<u32, i64>) -> Vec<usize> {
    let mut v2 = vec![0usize; inst.days];
    for (key, id) in map.iter() {
        if let VarKey::W { t } = key {
            v2[t - 1] = assignment.get(&id).copied().unwrap_or(0) as usize;
        }
    }
    v2
}

#[test]
fn micro_chain_matches_the_frozen_optimum() {
    let inst = micro();

    let (af1, _) = build_af1(&inst);
    let r1 = solve(&af1, &opts()).expect("stage 1 solves");
    assert_eq!(r1.status, SolveStatus::Optimal);
    assert_eq!(r1.objective, Some(2));

    let (af2, map2) = build_af2(&inst, 2);
    let r2 = solve(&af2, &opts()).expect("stage 2 solves");
    assert_eq!(r2.status, SolveStatus::Optimal);
    assert_eq!(r2.objective, Some(0));
    let v2 = day_waits(&map2, &inst, r2.assignment.as_ref().expect("assignment"));
    assert_eq!(v2, vec![0]);

    let (af3, map3) = build_af3(&inst, 2, &v2);
    let r3 = solve(&af3, &opts()).expect("stage 3 solves");
    assert_eq!(r3.status, SolveStatus::Optimal);
    assert_eq!(r3.objective, Some(1));

    let (complete, _) = build_f1_complete(&inst);
    let rc = solve(&complete, &opts()).expect("complete model solves");
    assert_eq!(rc.objective, Some(2));

    let agg = aggregate_from_assignment(&map3, &inst, r3.assignment.as_ref().expect("assignment"));
    let cs = disaggregate(&agg, &inst).expect("disaggregation succeeds");
    assert!(validate_schedule(&cs, &inst).is_empty());
    let metrics = evaluate(&cs, &inst).expect("schedule evaluates");
    assert_eq!((metrics.phi1, metrics.phi2.clone(), metrics.phi3), (2, vec![0], 1));
}

#[test]
fn staged_solves_match_the_exhaustive_reference_on_tiny_instances() {
    for seed in 0..24u64 {
        let inst = tiny_instance(seed);
        let reference = brute_force_lexico(&inst).expect("reference search");

        // Stage 1: the patient count must agree exactly.
        let (af1, _) = build_af1(&inst);
        let r1 = solve(&af1, &opts()).expect("stage 1 solves");
        assert_eq!(r1.status, SolveStatus::Optimal, "seed {seed}");
        let v1 = r1.objective.expect("objective") as usize;
        assert_eq!(v1, reference.v1, "seed {seed}: patient count diverges");

        // Stage 2: the summed wait must agree exactly (per-day splits
        // may differ between optima).
        let (af2, map2) = build_af2(&inst, v1);
        let r2 = solve(&af2, &opts()).expect("stage 2 solves");
        assert_eq!(r2.status, SolveStatus::Optimal, "seed {seed}");
        let total_wait = r2.objective.expect("objective") as usize;
        let reference_wait: usize = reference.v2.iter().sum();
        assert_eq!(total_wait, reference_wait, "seed {seed}: wait sum diverges");
        let v2 = day_waits(&map2, &inst, r2.assignment.as_ref().expect("assignment"));
        assert_eq!(v2.iter().sum::<usize>(), total_wait, "seed {seed}");

        // Stage 3: chair count is capped by the reference optimum
        // (our per-day split restricts the tie set).
        let (af3, map3) = build_af3(&inst, v1, &v2);
        let r3 = solve(&af3, &opts()).expect("stage 3 solves");
        assert_eq!(r3.status, SolveStatus::Optimal, "seed {seed}");
        let phi3 = r3.objective.expect("objective") as usize;
        assert!(
            phi3 <= reference.phi3,
            "seed {seed}: chair count {phi3} exceeds the reference {}",
            reference.phi3
        );

        // The stage-3 solution must disaggregate into a clean concrete
        // schedule that reproduces every metric.
        let assignment = r3.assignment.as_ref().expect("assignment");
        let agg = aggregate_from_assignment(&map3, &inst, assignment);
        let cs = disaggregate(&agg, &inst).expect("disaggregation succeeds");
        let violations = validate_schedule(&cs, &inst);
        assert!(violations.is_empty(), "seed {seed}: {violations:?}");
        let metrics = evaluate(&cs, &inst).expect("schedule evaluates");
        assert_eq!(metrics.phi1, v1, "seed {seed}");
        assert_eq!(metrics.phi2_total, total_wait, "seed {seed}");
        assert_eq!(metrics.phi3, phi3, "seed {seed}");
        for (t, (&realised, &cap)) in metrics.phi2.iter().zip(v2.iter()).enumerate() {
            assert!(
                realised <= cap,
                "seed {seed}: day {} wait {realised} beyond cap {cap}",
                t + 1
            );
        }
    }
}

#[test]
fn complete_and_aggregate_formulations_agree_on_tiny_instances() {
    for seed in 0..12u64 {
        let inst = tiny_instance(seed);
        let (af1, _) = build_af1(&inst);
        let (complete, _) = build_f1_complete(&inst);
        let r_agg = solve(&af1, &opts()).expect("aggregate solves");
        let r_full = solve(&complete, &opts()).expect("complete solves");
        assert_eq!(
            r_agg.objective, r_full.objective,
            "seed {seed}: formulations disagree on the patient count"
        );
    }
}
