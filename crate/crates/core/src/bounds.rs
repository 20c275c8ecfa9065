//! Combinatorial upper bounds on the chair-assignment objective.
//!
//! Two relaxations bracket from above how many patients can receive
//! their infusion on a chair:
//!
//! * [`ub1`] flattens the week into a multiple knapsack: every chair
//!   offers `|T| · (|H| − min visit)` slots, every non-critical
//!   patient is an item of weight `f_p` and profit 1.
//! * [`ub2`] keeps the day structure: patients take a (day, resource)
//!   pair under per-resource capacities reduced by visit time, and
//!   every resource must close its day on one of the idle-suffix
//!   levels predicted by [`compute_empty_slot_profile`].
//!
//! Both models are solved with the in-process exact backend. A solve
//! that hits its time limit reports the solver's *proven* bound — the
//! incumbent of a maximisation is a lower bound and therefore never a
//! valid upper bound on the objective.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::instance::Instance;
use crate::model::{Build, MilpModel, Rel, Sense, VarKey, VarKind, VarMap};
use crate::solver::{solve, SolveOptions, SolveStatus};

/// Default wall-clock budget for one bound model, in seconds.
pub const BOUND_TIME_LIMIT: f64 = 60.0;

/// Which computation produced a bound value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundMethod {
    /// Weekly multiple-knapsack relaxation.
    #[serde(rename = "UB1")]
    Ub1,
    /// Per-day assignment with reduced capacities and idle suffixes.
    #[serde(rename = "UB2")]
    Ub2,
    /// The non-critical patient count, with no model behind it.
    #[serde(rename = "trivial")]
    Trivial,
}

/// Whether a value is the relaxation's optimum or only the bound
/// proven before the time limit struck.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    Exact,
    TimeLimit,
}

/// One upper bound on the number of chair-hosted infusions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    /// Upper bound on chair assignments; never exceeds the number of
    /// non-critical patients.
    pub value: usize,
    pub method: BoundMethod,
    pub status: BoundStatus,
    /// Wall-clock seconds spent building and solving the model.
    pub runtime: f64,
}

/// Failure modes of the day-structured bound.
#[derive(Debug, Error)]
pub enum BoundError {
    /// The requested totals admit no day-level assignment at all: the
    /// treated-patient count cannot coexist with the daily wait caps
    /// on this instance.
    #[error("no day-level assignment schedules {v1} patients under the given daily wait caps")]
    Inconsistent { v1: usize },
}

/// Which resource pool an empty-slot profile describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileSide {
    /// Chairs: only non-critical patients may occupy them.
    Chairs,
    /// Beds: every patient may occupy them.
    Beds,
}

/// How many resources of one pool can be idle for exactly the last
/// `i` slots of each day, given the patients able to reach that pool
/// and the per-day wait caps.
///
/// `n[i][t-1]` counts resources idle for exactly the last `i` slots
/// of day `t` (`i` runs from 0 to the full day length). The
/// intermediates mirror the derivation: `l[ℓ-1][r][t-1]` counts pool
/// patients with infusion length `ℓ` admissible in room `r` on day
/// `t`, and `m[ℓ-1][r][t-1][i]` caps how many resources that class
/// can hold at idle level `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptySlotProfile {
    pub side: ProfileSide,
    pub n: Vec<Vec<usize>>,
    pub l: Vec<Vec<Vec<usize>>>,
    pub m: Vec<Vec<Vec<Vec<usize>>>>,
}

/// The bound that needs no model: every non-critical patient ends up
/// on a chair.
pub fn trivial_bound(inst: &Instance) -> BoundResult {
    BoundResult {
        value: non_critical(inst).count(),
        method: BoundMethod::Trivial,
        status: BoundStatus::Exact,
        runtime: 0.0,
    }
}

/// Weekly multiple-knapsack bound under the default time budget.
pub fn ub1(inst: &Instance) -> BoundResult {
    ub1_limited(inst, BOUND_TIME_LIMIT)
}

/// Weekly multiple-knapsack bound: chairs are knapsacks of capacity
/// `|T| · (|H| − min visit over non-critical patients)` slots, each
/// non-critical patient an item of weight `f_p` and profit 1. The
/// optimum bounds the chair count because any real schedule puts at
/// most that much infusion time on each chair per week.
pub fn ub1_limited(inst: &Instance, time_limit: f64) -> BoundResult {
    let start = Instant::now();
    let items: Vec<usize> = non_critical(inst).collect();
    let done = |value: usize, status: BoundStatus| BoundResult {
        value,
        method: BoundMethod::Ub1,
        status,
        runtime: start.elapsed().as_secs_f64(),
    };
    if items.is_empty() || inst.chairs == 0 {
        return done(0, BoundStatus::Exact);
    }

    let (model, _) = ub1_model(inst);
    let result = solve(&model, &SolveOptions::internal(time_limit))
        .expect("the knapsack model is well-formed by construction");
    match result.status {
        SolveStatus::Optimal => {
            let value = result.objective.expect("optimal solves carry an objective");
            done(value as usize, BoundStatus::Exact)
        }
        SolveStatus::FeasibleTimeLimit | SolveStatus::NoSolutionTimeLimit => {
            let bound = result
                .best_bound
                .expect("interrupted solves carry a proven bound")
                .max(0) as usize;
            done(bound.min(items.len()), BoundStatus::TimeLimit)
        }
        SolveStatus::Infeasible => {
            unreachable!("the empty assignment satisfies every knapsack row")
        }
    }
}

/// The weekly knapsack model behind [`ub1`]: binary patient→chair
/// assignments, at most one per patient, each chair carrying the
/// whole week's reduced slot budget. Warm-started with a first-fit
/// packing over ascending infusion lengths. Empty (always optimal at
/// zero) when no non-critical patient or no chair exists.
pub fn ub1_model(inst: &Instance) -> (MilpModel, VarMap) {
    let items: Vec<usize> = non_critical(inst).collect();
    if items.is_empty() || inst.chairs == 0 {
        return Build::new(Sense::Maximize).finish();
    }

    let min_visit = items
        .iter()
        .map(|&p| inst.patients[p].visit)
        .min()
        .expect("non-critical patients exist");
    let capacity = (inst.days * inst.slots_per_day.saturating_sub(min_visit)) as i64;

    let mut b = Build::new(Sense::Maximize);
    for &p in &items {
        for s in 0..inst.chairs {
            b.add_var(VarKey::MuKnap { p, s }, VarKind::Binary);
        }
    }
    let id = |b: &Build, p: usize, s: usize| {
        b.map
            .id(&VarKey::MuKnap { p, s })
            .expect("knapsack variables are fully materialised")
    };
    for &p in &items {
        let row: Vec<_> = (0..inst.chairs).map(|s| (id(&b, p, s), 1)).collect();
        b.row(row, Rel::Le, 1);
    }
    for s in 0..inst.chairs {
        let row: Vec<_> = items
            .iter()
            .map(|&p| (id(&b, p, s), inst.patients[p].infusion as i64))
            .collect();
        b.row(row, Rel::Le, capacity);
    }
    let objective: Vec<_> = items
        .iter()
        .flat_map(|&p| (0..inst.chairs).map(move |s| (p, s)))
        .map(|(p, s)| (id(&b, p, s), 1))
        .collect();
    b.objective(objective);

    // First-fit over ascending weights seeds the incumbent; when
    // everything fits, the optimum is proven at the root.
    let mut warm = BTreeMap::new();
    let mut loads = vec![0i64; inst.chairs];
    let mut order = items.clone();
    order.sort_by_key(|&p| (inst.patients[p].infusion, p));
    for &p in &order {
        let f = inst.patients[p].infusion as i64;
        if let Some(s) = (0..inst.chairs).find(|&s| loads[s] + f <= capacity) {
            loads[s] += f;
            warm.insert(id(&b, p, s), 1);
        }
    }
    let (mut model, map) = b.finish();
    model.warm_start = Some(warm);
    (model, map)
}

/// Day-structured bound under the default time budget.
pub fn ub2(inst: &Instance, v1: usize, v2: &[usize]) -> Result<BoundResult, BoundError> {
    ub2_limited(inst, v1, v2, BOUND_TIME_LIMIT)
}

/// Day-structured bound: exactly `v1` patients take a (day, resource)
/// pair — critical ones a bed, the others a bed or a chair, only on
/// days where their pathology has a room. Each resource-day carries a
/// reduced slot capacity (visit time is charged per room-sized group
/// of resources) and must close on exactly one idle-suffix level, the
/// per-level counts matching the empty-slot profile for the wait caps
/// `v2`. The optimum over chair assignments bounds the third
/// objective for any schedule realising `(v1, v2)`.
///
/// An infeasible model means the `(v1, v2)` pair itself is
/// inconsistent with the instance.
pub fn ub2_limited(
    inst: &Instance,
    v1: usize,
    v2: &[usize],
    time_limit: f64,
) -> Result<BoundResult, BoundError> {
    let start = Instant::now();
    let non_crit_count = non_critical(inst).count();
    let (model, _) = ub2_model(inst, v1, v2);
    let result = solve(&model, &SolveOptions::internal(time_limit))
        .expect("the day-assignment model is well-formed by construction");
    let done = |value: usize, status: BoundStatus| BoundResult {
        value,
        method: BoundMethod::Ub2,
        status,
        runtime: start.elapsed().as_secs_f64(),
    };
    match result.status {
        SolveStatus::Optimal => {
            let value = result.objective.expect("optimal solves carry an objective");
            debug_assert!(value as usize <= non_crit_count);
            Ok(done(value as usize, BoundStatus::Exact))
        }
        SolveStatus::FeasibleTimeLimit | SolveStatus::NoSolutionTimeLimit => {
            let bound = result
                .best_bound
                .expect("interrupted solves carry a proven bound")
                .max(0) as usize;
            Ok(done(bound.min(non_crit_count), BoundStatus::TimeLimit))
        }
        SolveStatus::Infeasible => Err(BoundError::Inconsistent { v1 }),
    }
}

/// The day-structured model behind [`ub2`]: per-day resource
/// assignments with reduced capacities and idle-suffix levels pinned
/// to the empty-slot profiles for the wait caps `v2`.
pub fn ub2_model(inst: &Instance, v1: usize, v2: &[usize]) -> (MilpModel, VarMap) {
    assert_eq!(v2.len(), inst.days, "one wait cap per day");
    let h = inst.slots_per_day;

    // Capacity reductions: chairs lose visit time of the patients who
    // can use them (the non-critical), beds of every patient.
    let min_visit_chair = non_critical(inst)
        .map(|p| inst.patients[p].visit)
        .min()
        .unwrap_or(0);
    let min_visit_bed = inst.patients.iter().map(|p| p.visit).min().unwrap_or(0);
    let chair_base: Vec<i64> = (0..inst.chairs)
        .map(|s| reduced_capacity(h, s, inst.rooms, min_visit_chair))
        .collect();
    let bed_base: Vec<i64> = (0..inst.beds)
        .map(|bed| reduced_capacity(h, bed, inst.rooms, min_visit_bed))
        .collect();

    let chair_profile = compute_empty_slot_profile(inst, v2, ProfileSide::Chairs);
    let bed_profile = compute_empty_slot_profile(inst, v2, ProfileSide::Beds);

    let mut b = Build::new(Sense::Maximize);

    // Assignment variables, suppressed on days where the patient's
    // pathology has no room.
    for (p, pat) in inst.patients.iter().enumerate() {
        let k = inst.patient_pathology(p).expect("validated instance");
        for t in 1..=inst.days {
            if !inst.day_has_room(k, t) {
                continue;
            }
            for bed in 0..inst.beds {
                if pat.critical {
                    b.add_var(VarKey::Lambda { p, t, b: bed }, VarKind::Binary);
                } else {
                    b.add_var(VarKey::MuBed { p, t, b: bed }, VarKind::Binary);
                }
            }
            if !pat.critical {
                for s in 0..inst.chairs {
                    b.add_var(VarKey::MuChair { p, t, s }, VarKind::Binary);
                }
            }
        }
    }
    // Idle-level variables, only for levels the profile can populate.
    for t in 1..=inst.days {
        for i in 0..=h {
            if chair_profile.n[i][t - 1] > 0 {
                for s in 0..inst.chairs {
                    b.add_var(VarKey::RhoChair { i, t, s }, VarKind::Binary);
                }
            }
            if bed_profile.n[i][t - 1] > 0 {
                for bed in 0..inst.beds {
                    b.add_var(VarKey::RhoBed { i, t, b: bed }, VarKind::Binary);
                }
            }
        }
    }

    // Exactly v1 patients are assigned, each at most once.
    let mut total: Vec<(u32, i64)> = Vec::new();
    for (p, pat) in inst.patients.iter().enumerate() {
        let mut own: Vec<(u32, i64)> = Vec::new();
        for t in 1..=inst.days {
            for bed in 0..inst.beds {
                let key = if pat.critical {
                    VarKey::Lambda { p, t, b: bed }
                } else {
                    VarKey::MuBed { p, t, b: bed }
                };
                if let Some(id) = b.map.id(&key) {
                    own.push((id, 1));
                }
            }
            for s in 0..inst.chairs {
                if let Some(id) = b.map.id(&VarKey::MuChair { p, t, s }) {
                    own.push((id, 1));
                }
            }
        }
        total.extend(own.iter().copied());
        b.row(own, Rel::Le, 1);
    }
    b.row(total, Rel::Eq, v1 as i64);

    // Chair capacity: infusion time plus the declared idle suffix fit
    // into the reduced day.
    for t in 1..=inst.days {
        for s in 0..inst.chairs {
            let mut row: Vec<(u32, i64)> = Vec::new();
            for p in non_critical(inst) {
                if let Some(id) = b.map.id(&VarKey::MuChair { p, t, s }) {
                    row.push((id, inst.patients[p].infusion as i64));
                }
            }
            for i in 0..=h {
                if let Some(id) = b.map.id(&VarKey::RhoChair { i, t, s }) {
                    row.push((id, (i as i64).min(chair_base[s])));
                }
            }
            b.row(row, Rel::Le, chair_base[s]);
        }
    }
    // Bed capacity, same shape over every patient.
    for t in 1..=inst.days {
        for bed in 0..inst.beds {
            let mut row: Vec<(u32, i64)> = Vec::new();
            for (p, pat) in inst.patients.iter().enumerate() {
                let key = if pat.critical {
                    VarKey::Lambda { p, t, b: bed }
                } else {
                    VarKey::MuBed { p, t, b: bed }
                };
                if let Some(id) = b.map.id(&key) {
                    row.push((id, pat.infusion as i64));
                }
            }
            for i in 0..=h {
                if let Some(id) = b.map.id(&VarKey::RhoBed { i, t, b: bed }) {
                    row.push((id, (i as i64).min(bed_base[bed])));
                }
            }
            b.row(row, Rel::Le, bed_base[bed]);
        }
    }

    // Every resource closes its day on exactly one idle level, and
    // each level hosts exactly as many resources as the profile says.
    for t in 1..=inst.days {
        for s in 0..inst.chairs {
            let row: Vec<(u32, i64)> = (0..=h)
                .filter_map(|i| b.map.id(&VarKey::RhoChair { i, t, s }).map(|id| (id, 1)))
                .collect();
            b.row(row, Rel::Eq, 1);
        }
        for bed in 0..inst.beds {
            let row: Vec<(u32, i64)> = (0..=h)
                .filter_map(|i| b.map.id(&VarKey::RhoBed { i, t, b: bed }).map(|id| (id, 1)))
                .collect();
            b.row(row, Rel::Eq, 1);
        }
        for i in 0..=h {
            if chair_profile.n[i][t - 1] > 0 {
                let row: Vec<(u32, i64)> = (0..inst.chairs)
                    .map(|s| {
                        let id = b
                            .map
                            .id(&VarKey::RhoChair { i, t, s })
                            .expect("populated levels are materialised");
                        (id, 1)
                    })
                    .collect();
                b.row(row, Rel::Eq, chair_profile.n[i][t - 1] as i64);
            }
            if bed_profile.n[i][t - 1] > 0 {
                let row: Vec<(u32, i64)> = (0..inst.beds)
                    .map(|bed| {
                        let id = b
                            .map
                            .id(&VarKey::RhoBed { i, t, b: bed })
                            .expect("populated levels are materialised");
                        (id, 1)
                    })
                    .collect();
                b.row(row, Rel::Eq, bed_profile.n[i][t - 1] as i64);
            }
        }
    }

    let objective: Vec<(u32, i64)> = b
        .map
        .iter()
        .filter(|(key, _)| matches!(key, VarKey::MuChair { .. }))
        .map(|(_, id)| (id, 1))
        .collect();
    b.objective(objective);
    b.finish()
}

/// Empty-slot profile of one resource pool for the wait caps `v2`
/// (one cap per day).
///
/// Three phases:
///
/// 1. count, per (infusion length ℓ, room r, day t), the pool
///    patients admissible there (`l`);
/// 2. cap, per class and idle level `i`, how many resources the class
///    can leave idle for exactly the last `i` slots (`m`) — a class
///    reaches level `i` only when an infusion started as late as the
///    visit window plus the wait cap allow still runs into the last
///    `i + 1` slots;
/// 3. hand out the pool greedily from the fullest level up (`n`);
///    resources no class can reach at all idle the whole day.
pub fn compute_empty_slot_profile(
    inst: &Instance,
    v2: &[usize],
    side: ProfileSide,
) -> EmptySlotProfile {
    assert_eq!(v2.len(), inst.days, "one wait cap per day");
    let h = inst.slots_per_day;
    let hv = inst.visit_slots;
    let days = inst.days;
    let rooms = inst.rooms;
    let resources = match side {
        ProfileSide::Chairs => inst.chairs,
        ProfileSide::Beds => inst.beds,
    };

    let mut l = vec![vec![vec![0usize; days]; rooms]; h];
    for (p, pat) in inst.patients.iter().enumerate() {
        if side == ProfileSide::Chairs && pat.critical {
            continue;
        }
        // Patients who cannot complete a visit plus infusion in any
        // day never occupy a resource.
        if pat.visit > hv || pat.visit + pat.infusion > h {
            continue;
        }
        let k = inst.patient_pathology(p).expect("validated instance");
        for r in 0..rooms {
            for t0 in 0..days {
                if inst.mcp[r][k][t0] == 1 {
                    l[pat.infusion - 1][r][t0] += 1;
                }
            }
        }
    }

    let mut m = vec![vec![vec![vec![0usize; h + 1]; days]; rooms]; h];
    for l0 in 0..h {
        let len = l0 + 1;
        for r in 0..rooms {
            for t0 in 0..days {
                let count = l[l0][r][t0];
                // Level 0: the class keeps a resource busy to the very
                // end. Possible only when the latest legal infusion
                // still covers the last slot; the count caps at one
                // busy tail per distinct late start.
                if len + hv + v2[t0] >= h {
                    let late_starts = v2[t0] + 1 + len + hv - h;
                    m[l0][r][t0][0] = count.min(late_starts).min(v2[t0] + 1);
                }
                let mut used = m[l0][r][t0][0];
                for i in 1..=h {
                    if len + hv + v2[t0] + i >= h && used < count {
                        m[l0][r][t0][i] = 1;
                        used += 1;
                    }
                }
            }
        }
    }

    let mut n = vec![vec![0usize; days]; h + 1];
    for t0 in 0..days {
        let mut pool = resources;
        for i in 0..=h {
            if pool == 0 {
                break;
            }
            let reachable: usize = (0..h)
                .map(|l0| (0..rooms).map(|r| m[l0][r][t0][i]).sum::<usize>())
                .sum();
            let taken = pool.min(reachable);
            n[i][t0] = taken;
            pool -= taken;
        }
        // Resources no patient class can reach idle the whole day.
        n[h][t0] += pool;
    }

    EmptySlotProfile { side, n, l, m }
}

/// 0-based indices of the non-critical patients.
fn non_critical(inst: &Instance) -> impl Iterator<Item = usize> + '_ {
    inst.patients
        .iter()
        .enumerate()
        .filter(|(_, pat)| !pat.critical)
        .map(|(p, _)| p)
}

/// Reduced day capacity of the resource with 0-based index `idx`:
/// resources are split into consecutive groups of `rooms` many, and
/// the g-th group loses `g` times the smallest visit duration
/// (clamped at an empty day).
fn reduced_capacity(h: usize, idx: usize, rooms: usize, min_visit: usize) -> i64 {
    (h as i64 - (subset_index(idx, rooms) * min_visit) as i64).max(0)
}

/// 1-based capacity-reduction group of resource `idx` when the pool
/// is cut into consecutive groups of `rooms` resources.
fn subset_index(idx: usize, rooms: usize) -> usize {
    if rooms == 0 {
        1
    } else {
        idx / rooms + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate, GeneratorParams, Patient};

    /// One pathology, every room open every day.
    fn line_instance(
        days: usize,
        slots_per_day: usize,
        visit_slots: usize,
        rooms: usize,
        chairs: usize,
        beds: usize,
        patients: &[(usize, usize, bool)],
    ) -> Instance {
        Instance {
            days,
            slots_per_day,
            visit_slots,
            pathologies: vec!["K1".to_owned()],
            rooms,
            beds,
            chairs,
            mcp: vec![vec![vec![1; days]]; rooms],
            patients: patients
                .iter()
                .enumerate()
                .map(|(i, &(visit, infusion, critical))| Patient {
                    id: format!("p{}", i + 1),
                    pathology: "K1".to_owned(),
                    visit,
                    infusion,
                    critical,
                })
                .collect(),
        }
    }

    #[test]
    fn subset_index_follows_room_count() {
        let groups: Vec<usize> = (0..6).map(|s| subset_index(s, 2)).collect();
        assert_eq!(groups, vec![1, 1, 2, 2, 3, 3]);
        assert_eq!(subset_index(0, 0), 1);
        assert_eq!(subset_index(3, 4), 1);
        assert_eq!(subset_index(4, 4), 2);
    }

    #[test]
    fn reduced_capacities_step_down_per_group() {
        let bases: Vec<i64> = (0..6).map(|s| reduced_capacity(10, s, 2, 2)).collect();
        assert_eq!(bases, vec![8, 8, 6, 6, 4, 4]);
        // Deep groups clamp at an empty day instead of going negative.
        assert_eq!(reduced_capacity(3, 5, 1, 1), 0);
    }

    #[test]
    fn short_infusions_idle_exactly_the_tail() {
        // One patient, infusion 2, day of 10 with a 3-slot visit
        // window and no wait allowed: the infusion ends by slot 5, so
        // the chair's first reachable idle level is 10 − (3+0+2) = 5.
        let inst = line_instance(1, 10, 3, 1, 1, 1, &[(1, 2, false)]);
        let prof = compute_empty_slot_profile(&inst, &[0], ProfileSide::Chairs);
        assert_eq!(prof.l[1][0][0], 1);
        assert_eq!(prof.m[1][0][0][0], 0);
        for i in 1..5 {
            assert_eq!(prof.m[1][0][0][i], 0, "level {i} is unreachable");
        }
        assert_eq!(prof.m[1][0][0][5], 1);
        // The lone patient is spent; deeper levels get nothing.
        assert_eq!(prof.m[1][0][0][6], 0);
        assert_eq!(prof.n[0][0], 0);
        assert_eq!(prof.n[5][0], 1);
        assert_eq!(prof.n.iter().map(|row| row[0]).sum::<usize>(), 1);
    }

    #[test]
    fn long_infusions_can_fill_the_day() {
        // Visit window 4, no wait, infusion 2 on a 6-slot day: the
        // latest infusion covers the last slot, so level 0 is live.
        let inst = line_instance(1, 6, 4, 1, 1, 1, &[(1, 2, false), (1, 3, true)]);
        let chairs = compute_empty_slot_profile(&inst, &[0], ProfileSide::Chairs);
        // Only the non-critical patient counts for chairs.
        assert_eq!(chairs.l[1][0][0], 1);
        assert_eq!(chairs.l[2][0][0], 0);
        assert_eq!(chairs.n[0][0], 1);
        assert_eq!(chairs.n.iter().map(|row| row[0]).sum::<usize>(), 1);
        // Both patients count for beds.
        let beds = compute_empty_slot_profile(&inst, &[0], ProfileSide::Beds);
        assert_eq!(beds.l[1][0][0], 1);
        assert_eq!(beds.l[2][0][0], 1);
        assert_eq!(beds.n[0][0], 1);
    }

    #[test]
    fn unreachable_resources_idle_the_whole_day() {
        // Three chairs but a single short-infusion patient: one chair
        // can be busy to the end, the other two see nobody.
        let inst = line_instance(1, 6, 4, 1, 3, 0, &[(1, 2, false)]);
        let prof = compute_empty_slot_profile(&inst, &[0], ProfileSide::Chairs);
        assert_eq!(prof.n[0][0], 1);
        assert_eq!(prof.n[6][0], 2);
        assert_eq!(prof.n.iter().map(|row| row[0]).sum::<usize>(), 3);
    }

    #[test]
    fn wait_caps_widen_level_zero() {
        // Allowing one slot of wait adds one more late start, so two
        // same-class patients can both finish at the day's end.
        let inst = line_instance(1, 6, 4, 1, 2, 0, &[(1, 2, false), (1, 2, false)]);
        let strict = compute_empty_slot_profile(&inst, &[0], ProfileSide::Chairs);
        assert_eq!(strict.m[1][0][0][0], 1);
        assert_eq!(strict.n[0][0], 1);
        let relaxed = compute_empty_slot_profile(&inst, &[1], ProfileSide::Chairs);
        assert_eq!(relaxed.m[1][0][0][0], 2);
        assert_eq!(relaxed.n[0][0], 2);
    }

    #[test]
    fn knapsack_capacity_binds_before_the_patient_count() {
        // One chair over five 54-slot days, shortest visit 1: capacity
        // 5·53 = 265 slots. Six 50-slot infusions cannot all fit.
        let inst = line_instance(5, 54, 36, 1, 1, 0, &[(1, 50, false); 6]);
        let bound = ub1(&inst);
        assert_eq!(bound.status, BoundStatus::Exact);
        assert_eq!(bound.method, BoundMethod::Ub1);
        assert_eq!(bound.value, 5);
    }

    #[test]
    fn reference_week_capacity_and_bound() {
        // The default generator's week: 54-slot days, shortest visit
        // 1 slot, so each chair offers 5·(54−1) = 265 slots.
        let inst = generate(&GeneratorParams::default()).expect("reference parameters generate");
        let min_visit = inst
            .patients
            .iter()
            .filter(|p| !p.critical)
            .map(|p| p.visit)
            .min()
            .expect("non-critical patients exist");
        assert_eq!(min_visit, 1);
        assert_eq!(inst.days * (inst.slots_per_day - min_visit), 265);
        let non_crit = inst.patients.iter().filter(|p| !p.critical).count();
        let bound = ub1(&inst);
        assert_eq!(bound.status, BoundStatus::Exact);
        assert_eq!(bound.value, non_crit);
    }

    #[test]
    fn no_chairs_or_no_candidates_bound_at_zero() {
        let no_chairs = line_instance(1, 6, 4, 1, 0, 1, &[(1, 2, false)]);
        assert_eq!(ub1(&no_chairs).value, 0);
        let all_critical = line_instance(1, 6, 4, 1, 1, 1, &[(1, 2, true)]);
        assert_eq!(ub1(&all_critical).value, 0);
        assert_eq!(trivial_bound(&all_critical).value, 0);
        assert_eq!(trivial_bound(&no_chairs).value, 1);
    }
}
