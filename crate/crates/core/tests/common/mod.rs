//! Shared helpers for integration tests: deterministic tiny instances
//! small enough for exhaustive reference checks.

use chemoplan::{generate, GeneratorParams, GroupParams, Instance};

/// The canonical two-patient smoke instance: one day of six slots
/// (four for visits), one pathology in one always-open room, one
/// chair, one bed, a non-critical and a critical patient.
pub fn micro() -> Instance {
    use chemoplan::Patient;
    Instance {
        days: 1,
        slots_per_day: 6,
        visit_slots: 4,
        pathologies: vec!["K1".into()],
        rooms: 1,
        beds: 1,
        chairs: 1,
        mcp: vec![vec![vec![1]]],
        patients: vec![
            Patient { id: "p1".into(), pathology: "K1".into(), visit: 1, infusion: 2, critical: false },
            Patient { id: "p2".into(), pathology: "K1".into(), visit: 1, infusion: 3, critical: true },
        ],
    }
}

/// Generator parameters for a seeded tiny instance. Dimensions vary
/// with the seed but stay inside the exhaustive-search guards:
/// at most 6 patients, 8 slots, 2 rooms.
pub fn tiny_params(seed: u64) -> GeneratorParams {
    let pick = |m: u64, k: u64| ((seed / m) % k) as usize;
    let days = 1 + pick(1, 2); // 1..=2
    let rooms = 1 + pick(2, 2); // 1..=2
    let two_groups = rooms * days >= 2 && pick(4, 2) == 1;
    let mut groups = vec![GroupParams {
        name: "G1".into(),
        share: 2.0,
        visit: 1 + pick(8, 2), // 1..=2
        infusion_min: 1,
        infusion_max: 3,
    }];
    if two_groups {
        groups.push(GroupParams {
            name: "G2".into(),
            share: 1.0,
            visit: 1,
            infusion_min: 2,
            infusion_max: 4,
        });
    }
    GeneratorParams {
        seed,
        total_patients: 3 + pick(16, 4), // 3..=6
        critical_fraction: [0.0, 0.3, 0.6][pick(64, 3)],
        groups,
        days,
        slots_per_day: 6 + pick(192, 3), // 6..=8
        visit_slots: 4 + pick(576, 2),   // 4..=5
        rooms,
        beds: 1 + pick(1152, 2),  // 1..=2
        chairs: pick(2304, 3),    // 0..=2
        first_group_rooms: 0,
    }
}

/// A seeded tiny instance; generation must always succeed because the
/// parameter ranges above are self-consistent.
pub fn tiny_instance(seed: u64) -> Instance {
    generate(&tiny_params(seed)).expect("tiny generator parameters are valid")
}
