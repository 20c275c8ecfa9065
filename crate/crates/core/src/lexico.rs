//! Lexicographic optimisation chain over the weekly scheduling
//! objectives: maximise the number of treated patients, then minimise
//! the sum of the daily maximum waits, then maximise chair
//! assignments, each stage constrained by the levels fixed before it.
//!
//! [`stage1`] solves the treated-count model alone, seeded with a
//! deterministic greedy schedule.  [`procedure1`] continues with
//! per-day wait minimisation over the fixed day rosters and a
//! warm-started whole-week wait model.  [`procedure2`] adds the chair
//! stage: per-day chair maximisation under the fixed wait caps,
//! followed by a bounded-radius improvement search ([`kopt_search`])
//! over the whole week.  Every solve is appended to a [`StageLog`]
//! list so callers can stream progress as JSON lines.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::disaggregate::{
    disaggregate, AggregateSchedule, CompleteSchedule, DisaggregateError, InfusionClass,
    PatientStart,
};
use crate::instance::Instance;
use crate::model::{
    add_kopt_constraints, aggregate_from_assignment, assignment_from_aggregate, build_af1,
    build_af2, build_af3, build_single_day, DayObjective, KOptRadii, MilpModel, VarMap,
};
use crate::report::{evaluate, ReportError};
use crate::solver::{solve, SolveOptions, SolveResult, SolveStatus, SolverError};

/// Per-stage wall-clock budgets in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageLimits {
    /// Whole-week treated-count model.
    pub af1: f64,
    /// Each per-day wait-minimisation model.
    pub af2_day: f64,
    /// Warm-started whole-week wait model.
    pub af2_warm: f64,
    /// Each per-day chair-maximisation model.
    pub p3_day: f64,
    /// Each improvement-search iteration.
    pub kopt_iter: f64,
    /// The whole improvement search, and the optional final
    /// whole-week chair solve.
    pub p3_overall: f64,
}

impl Default for StageLimits {
    fn default() -> Self {
        StageLimits {
            af1: 300.0,
            af2_day: 60.0,
            af2_warm: 300.0,
            p3_day: 90.0,
            kopt_iter: 60.0,
            p3_overall: 600.0,
        }
    }
}

/// Configuration of the bounded-radius improvement search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KOptParams {
    /// Per-family flip budgets around the incumbent.
    pub radii: KOptRadii,
    /// Wall-clock budget per iteration, seconds (> 0).
    pub iteration_time_limit: f64,
    /// Wall-clock budget for the whole search, seconds (> 0).
    pub overall_time_limit: f64,
}

impl Default for KOptParams {
    fn default() -> Self {
        KOptParams {
            radii: KOptRadii::uniform(20),
            iteration_time_limit: 60.0,
            overall_time_limit: 600.0,
        }
    }
}

/// One solver call of the chain, in the shape written to stage logs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageLog {
    /// Which stage ran: `af1`, `af2-day`, `af2-warm`, `af3-day`,
    /// `kopt`, or `af3-full`.
    pub stage: String,
    /// Day of a per-day stage, 1-based; absent for weekly stages.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub day: Option<usize>,
    /// Final solver status: `optimal`, `feasible-time-limit`,
    /// `infeasible`, or `no-solution-time-limit`.
    pub status: String,
    /// Objective of the returned solution, if any.
    pub objective: Option<i64>,
    /// Best proven bound on the stage optimum, if any.
    pub bound: Option<i64>,
    /// Wall-clock seconds spent.
    pub runtime: f64,
}

/// Result of the treated-count stage.
#[derive(Debug, Clone)]
pub struct Stage1Result {
    /// Treated patients in the returned schedule.
    pub v1: usize,
    /// The stage's schedule, aggregate level.
    pub schedule: AggregateSchedule,
    /// Whether `v1` is the proven maximum.
    pub optimal: bool,
    /// Solver calls made, in order.
    pub logs: Vec<StageLog>,
}

/// Result of the first two stages.
#[derive(Debug, Clone)]
pub struct Procedure1Result {
    /// Treated-count floor maintained through the chain (the
    /// stage-one objective value).
    pub v1: usize,
    /// Realised maximum wait per day, day 1 first.
    pub v2: Vec<usize>,
    /// The wait-stage schedule, aggregate level.
    pub schedule: AggregateSchedule,
    /// Solver calls made, in order.
    pub logs: Vec<StageLog>,
}

/// Final outcome of the whole chain.
#[derive(Debug, Clone)]
pub struct LexicoOutcome {
    /// Treated patients in the final schedule.
    pub v1: usize,
    /// Maximum wait per day of the final schedule, day 1 first.
    pub v2: Vec<usize>,
    /// Chair-infused non-critical patients in the final schedule.
    pub phi3: usize,
    /// The final schedule, down to rooms and numbered resources.
    pub schedule: CompleteSchedule,
    /// Every solver call of the chain, in order.
    pub stage_logs: Vec<StageLog>,
    /// Dual bounds on the chair objective, when a caller attaches
    /// them; the chain itself leaves this empty.
    pub bound_info: Option<Vec<crate::bounds::BoundResult>>,
}

/// Errors of the optimisation chain.
#[derive(Debug, Error)]
pub enum LexicoError {
    /// A stage ended with no feasible point at all.  The warm starts
    /// make this unreachable for the internal engine; an external one
    /// may discard them.
    #[error("stage {stage} found no feasible point within its budget")]
    Stalled {
        stage: &'static str,
        /// Logs of the calls made before the chain stopped.
        logs: Vec<StageLog>,
    },
    /// The solving layer itself failed (malformed model or external
    /// engine failure).
    #[error("stage {stage} failed: {source}")]
    Solver {
        stage: &'static str,
        source: SolverError,
        /// Logs of the calls made before the chain stopped.
        logs: Vec<StageLog>,
    },
    /// The final aggregate could not be realised on concrete
    /// resources; indicates a bug, not an input condition.
    #[error(transparent)]
    Disaggregate(#[from] DisaggregateError),
    /// The final schedule failed validation; indicates a bug.
    #[error(transparent)]
    Report(#[from] ReportError),
}

impl LexicoError {
    /// Logs collected before the chain stopped, when the error
    /// carries them.
    pub fn partial_logs(&self) -> &[StageLog] {
        match self {
            LexicoError::Stalled { logs, .. } | LexicoError::Solver { logs, .. } => logs,
            _ => &[],
        }
    }
}

fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::FeasibleTimeLimit => "feasible-time-limit",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::NoSolutionTimeLimit => "no-solution-time-limit",
    }
}

fn with_limit(opts: &SolveOptions, time_limit: f64) -> SolveOptions {
    SolveOptions { time_limit, ..opts.clone() }
}

/// Solve one stage model, append its log line, and propagate solver
/// failures with the logs collected so far.
fn run_stage(
    stage: &'static str,
    day: Option<usize>,
    model: &MilpModel,
    opts: &SolveOptions,
    logs: &mut Vec<StageLog>,
) -> Result<SolveResult, LexicoError> {
    match solve(model, opts) {
        Ok(result) => {
            logs.push(StageLog {
                stage: stage.to_owned(),
                day,
                status: status_name(result.status).to_owned(),
                objective: result.objective,
                bound: result.best_bound,
                runtime: result.runtime,
            });
            Ok(result)
        }
        Err(source) => Err(LexicoError::Solver { stage, source, logs: std::mem::take(logs) }),
    }
}

fn take_assignment(
    stage: &'static str,
    result: SolveResult,
    logs: &mut Vec<StageLog>,
) -> Result<BTreeMap<u32, i64>, LexicoError> {
    result
        .assignment
        .ok_or_else(|| LexicoError::Stalled { stage, logs: std::mem::take(logs) })
}

/// Maximise the number of treated patients.
///
/// The model is seeded with a deterministic greedy schedule
/// (longest infusions first, zero-wait chair-first placement, then a
/// second pass allowing waits), so even a timed-out solve returns at
/// least the greedy treated count.
pub fn stage1(inst: &Instance, opts: &SolveOptions) -> Result<Stage1Result, LexicoError> {
    let mut logs = Vec::new();
    let (mut model, map) = build_af1(inst);
    let seed = greedy_schedule(inst);
    model.warm_start = Some(assignment_from_aggregate(&map, inst, &seed));
    let result = run_stage("af1", None, &model, opts, &mut logs)?;
    let optimal = result.status == SolveStatus::Optimal;
    let assignment = take_assignment("af1", result, &mut logs)?;
    let schedule = aggregate_from_assignment(&map, inst, &assignment);
    let v1 = schedule.treated();
    Ok(Stage1Result { v1, schedule, optimal, logs })
}

/// Stages one and two: fix the treated count, then minimise the sum
/// of the daily maximum waits.
///
/// After the treated-count solve, each day's roster is frozen and its
/// wait minimised in isolation; the union of the day solutions then
/// warm-starts one whole-week wait model that may still move patients
/// across days.  `v2` reports the realised per-day maximum waits of
/// the returned schedule.
pub fn procedure1(
    inst: &Instance,
    limits: &StageLimits,
    opts: &SolveOptions,
) -> Result<Procedure1Result, LexicoError> {
    let s1 = stage1(inst, &with_limit(opts, limits.af1))?;
    let mut logs = s1.logs;
    let v1 = s1.v1;

    let mut union = AggregateSchedule::empty(inst.patients.len());
    for day in 1..=inst.days {
        let roster = day_roster(&s1.schedule, day);
        if roster.is_empty() {
            continue;
        }
        let (mut model, map) = build_single_day(inst, day, &roster, DayObjective::MinWait);
        let restricted = restrict_to_day(&s1.schedule, day);
        model.warm_start = Some(assignment_from_aggregate(&map, inst, &restricted));
        let result = run_stage(
            "af2-day",
            Some(day),
            &model,
            &with_limit(opts, limits.af2_day),
            &mut logs,
        )?;
        let assignment = take_assignment("af2-day", result, &mut logs)?;
        merge_into(&mut union, &aggregate_from_assignment(&map, inst, &assignment));
    }

    let (mut model, map) = build_af2(inst, v1);
    model.warm_start = Some(assignment_from_aggregate(&map, inst, &union));
    let result = run_stage("af2-warm", None, &model, &with_limit(opts, limits.af2_warm), &mut logs)?;
    let assignment = take_assignment("af2-warm", result, &mut logs)?;
    let schedule = aggregate_from_assignment(&map, inst, &assignment);
    let v2 = daily_waits(inst, &schedule);
    Ok(Procedure1Result { v1, v2, schedule, logs })
}

/// The full chain: fix treated count and per-day wait caps, then
/// maximise chair assignments.
///
/// Each day's roster from the wait stage is frozen and its chair
/// count maximised under that day's wait cap; the union of the day
/// solutions is then improved by [`kopt_search`].  The final
/// aggregate is realised on concrete resources and evaluated; the
/// outcome's `v1`/`v2`/`phi3` are the evaluated metrics of that
/// schedule.
pub fn procedure2(
    inst: &Instance,
    limits: &StageLimits,
    kopt: &KOptParams,
    opts: &SolveOptions,
) -> Result<LexicoOutcome, LexicoError> {
    procedure2_impl(inst, limits, kopt, opts, false)
}

/// [`procedure2`] plus one final warm-started whole-week chair solve
/// after the improvement search, budgeted at `limits.p3_overall`.
pub fn procedure2_extended(
    inst: &Instance,
    limits: &StageLimits,
    kopt: &KOptParams,
    opts: &SolveOptions,
) -> Result<LexicoOutcome, LexicoError> {
    procedure2_impl(inst, limits, kopt, opts, true)
}

fn procedure2_impl(
    inst: &Instance,
    limits: &StageLimits,
    kopt: &KOptParams,
    opts: &SolveOptions,
    final_solve: bool,
) -> Result<LexicoOutcome, LexicoError> {
    let p1 = procedure1(inst, limits, opts)?;
    let mut logs = p1.logs;
    let v1 = p1.v1;
    let v2 = p1.v2;

    let mut union = AggregateSchedule::empty(inst.patients.len());
    for day in 1..=inst.days {
        let roster = day_roster(&p1.schedule, day);
        if roster.is_empty() {
            continue;
        }
        let objective = DayObjective::MaxChairs { wait_cap: v2[day - 1] };
        let (mut model, map) = build_single_day(inst, day, &roster, objective);
        let restricted = restrict_to_day(&p1.schedule, day);
        model.warm_start = Some(assignment_from_aggregate(&map, inst, &restricted));
        let result = run_stage(
            "af3-day",
            Some(day),
            &model,
            &with_limit(opts, limits.p3_day),
            &mut logs,
        )?;
        let assignment = take_assignment("af3-day", result, &mut logs)?;
        merge_into(&mut union, &aggregate_from_assignment(&map, inst, &assignment));
    }

    let (mut incumbent, kopt_logs) = kopt_search(inst, &union, v1, &v2, kopt, opts);
    logs.extend(kopt_logs);

    if final_solve {
        let (mut model, map) = build_af3(inst, v1, &v2);
        add_warm(&mut model, &map, inst, &incumbent);
        let result = run_stage(
            "af3-full",
            None,
            &model,
            &with_limit(opts, limits.p3_overall),
            &mut logs,
        )?;
        if let Some(assignment) = result.assignment {
            let candidate = aggregate_from_assignment(&map, inst, &assignment);
            if chair_count(&candidate) > chair_count(&incumbent) {
                incumbent = candidate;
            }
        }
    }

    let schedule = disaggregate(&incumbent, inst)?;
    let metrics = evaluate(&schedule, inst)?;
    assert!(
        metrics.phi1 >= v1,
        "chair stage dropped below the treated-count floor: {} < {v1}",
        metrics.phi1
    );
    for (t0, (&wait, &cap)) in metrics.phi2.iter().zip(&v2).enumerate() {
        assert!(wait <= cap, "day {} wait {wait} exceeds its cap {cap}", t0 + 1);
    }
    Ok(LexicoOutcome {
        v1: metrics.phi1,
        v2: metrics.phi2,
        phi3: metrics.phi3,
        schedule,
        stage_logs: logs,
        bound_info: None,
    })
}

/// Bounded-radius improvement search on the chair objective.
///
/// Repeatedly solves the whole-week chair model restricted to the
/// Hamming ball of `kopt.radii` around the incumbent, warm-started
/// with the incumbent itself, and accepts strictly better solutions
/// only.  Stops at the first non-improving iteration, when
/// `overall_time_limit` runs out, or — degrading to the incumbent —
/// on any solver failure.  All-zero radii return `start` unchanged
/// without solving.
pub fn kopt_search(
    inst: &Instance,
    start: &AggregateSchedule,
    v1: usize,
    v2: &[usize],
    kopt: &KOptParams,
    opts: &SolveOptions,
) -> (AggregateSchedule, Vec<StageLog>) {
    assert!(
        kopt.iteration_time_limit > 0.0 && kopt.overall_time_limit > 0.0,
        "improvement-search limits must be positive"
    );
    let mut logs = Vec::new();
    let mut incumbent = start.clone();
    let r = &kopt.radii;
    if r.k_x == 0 && r.k_y == 0 && r.k_z_bed == 0 && r.k_z_chair == 0 {
        return (incumbent, logs);
    }

    let started = Instant::now();
    loop {
        let remaining = kopt.overall_time_limit - started.elapsed().as_secs_f64();
        if remaining <= 0.0 {
            break;
        }
        let current = chair_count(&incumbent);
        let (mut model, map) = build_af3(inst, v1, v2);
        add_kopt_constraints(&mut model, &map, inst, &incumbent, &kopt.radii);
        add_warm(&mut model, &map, inst, &incumbent);
        let budget = kopt.iteration_time_limit.min(remaining);
        let Ok(result) = solve(&model, &with_limit(opts, budget)) else {
            break;
        };
        logs.push(StageLog {
            stage: "kopt".to_owned(),
            day: None,
            status: status_name(result.status).to_owned(),
            objective: result.objective,
            bound: result.best_bound,
            runtime: result.runtime,
        });
        let Some(assignment) = result.assignment else {
            break;
        };
        let candidate = aggregate_from_assignment(&map, inst, &assignment);
        if chair_count(&candidate) > current {
            incumbent = candidate;
        } else {
            break;
        }
    }
    (incumbent, logs)
}

fn add_warm(model: &mut MilpModel, map: &VarMap, inst: &Instance, agg: &AggregateSchedule) {
    model.warm_start = Some(assignment_from_aggregate(map, inst, agg));
}

/// Patients treated on `day` by an aggregate schedule.
fn day_roster(agg: &AggregateSchedule, day: usize) -> BTreeSet<usize> {
    agg.starts
        .iter()
        .enumerate()
        .filter_map(|(p, s)| (s.as_ref()?.day == day).then_some(p))
        .collect()
}

/// The day-`day` restriction of an aggregate schedule: identical
/// starts on that day, untreated everywhere else.
fn restrict_to_day(agg: &AggregateSchedule, day: usize) -> AggregateSchedule {
    let starts = agg
        .starts
        .iter()
        .map(|s| s.filter(|start| start.day == day))
        .collect();
    AggregateSchedule { starts }
}

/// Copy every start of `part` into `whole` (patients are disjoint
/// across per-day solutions, so nothing is overwritten).
fn merge_into(whole: &mut AggregateSchedule, part: &AggregateSchedule) {
    for (p, start) in part.starts.iter().enumerate() {
        let Some(s) = start else { continue };
        debug_assert!(whole.starts[p].is_none(), "per-day rosters are disjoint");
        whole.starts[p] = Some(*s);
    }
}

/// Realised maximum wait per day, day 1 first.
fn daily_waits(inst: &Instance, agg: &AggregateSchedule) -> Vec<usize> {
    let mut waits = vec![0usize; inst.days];
    for (p, start) in agg.starts.iter().enumerate() {
        let Some(s) = start else { continue };
        let wait = s.infusion_start - s.visit_start - inst.patients[p].visit;
        let slot = &mut waits[s.day - 1];
        *slot = (*slot).max(wait);
    }
    waits
}

/// Non-critical patients infused on chairs.
fn chair_count(agg: &AggregateSchedule) -> usize {
    agg.starts
        .iter()
        .flatten()
        .filter(|s| s.class == InfusionClass::Chair)
        .count()
}

/// Deterministic greedy seed schedule: patients in descending
/// infusion length (ties by index), first pass placing only zero-wait
/// appointments, second pass allowing waits; chairs are tried before
/// beds for non-critical patients.  Placement is simulated on
/// concrete per-day room, chair and bed grids, so the result is
/// realisable and in particular feasible for every aggregate model.
fn greedy_schedule(inst: &Instance) -> AggregateSchedule {
    let mut rooms = OccupancyGrid::new(inst.days, inst.rooms, inst.visit_slots);
    let mut chairs = OccupancyGrid::new(inst.days, inst.chairs, inst.slots_per_day);
    let mut beds = OccupancyGrid::new(inst.days, inst.beds, inst.slots_per_day);

    let mut order: Vec<usize> = (0..inst.patients.len()).collect();
    order.sort_by_key(|&p| (std::cmp::Reverse(inst.patients[p].infusion), p));

    let mut agg = AggregateSchedule::empty(inst.patients.len());
    for allow_wait in [false, true] {
        for &p in &order {
            if agg.starts[p].is_none() {
                agg.starts[p] = try_place(inst, p, allow_wait, &mut rooms, &mut chairs, &mut beds);
            }
        }
    }
    agg
}

/// Busy flags per (day, unit, slot), all 1-based except the unit.
struct OccupancyGrid {
    busy: Vec<Vec<Vec<bool>>>,
}

impl OccupancyGrid {
    fn new(days: usize, units: usize, slots: usize) -> Self {
        OccupancyGrid { busy: vec![vec![vec![false; slots]; units]; days] }
    }

    fn free(&self, day: usize, unit: usize, from: usize, len: usize) -> bool {
        self.busy[day - 1][unit][from - 1..from - 1 + len].iter().all(|&b| !b)
    }

    fn occupy(&mut self, day: usize, unit: usize, from: usize, len: usize) {
        for slot in &mut self.busy[day - 1][unit][from - 1..from - 1 + len] {
            *slot = true;
        }
    }
}

/// First placement of patient `p` in day order, visit start order,
/// then infusion start order; `None` when nothing fits.
fn try_place(
    inst: &Instance,
    p: usize,
    allow_wait: bool,
    rooms: &mut OccupancyGrid,
    chairs: &mut OccupancyGrid,
    beds: &mut OccupancyGrid,
) -> Option<PatientStart> {
    let pat = &inst.patients[p];
    let k = inst.patient_pathology(p)?;
    let h = inst.slots_per_day;
    let hv = inst.visit_slots;
    if pat.visit > hv || pat.visit + pat.infusion > h {
        return None;
    }
    for day in 1..=inst.days {
        if !inst.day_has_room(k, day) {
            continue;
        }
        for visit_start in 1..=hv - pat.visit + 1 {
            let earliest = visit_start + pat.visit;
            if earliest + pat.infusion - 1 > h {
                break;
            }
            let Some(room) = (0..inst.rooms).find(|&r| {
                inst.mcp[r][k][day - 1] != 0 && rooms.free(day, r, visit_start, pat.visit)
            }) else {
                continue;
            };
            let latest = if allow_wait { h - pat.infusion + 1 } else { earliest };
            for infusion_start in earliest..=latest {
                let spot = if pat.critical {
                    free_unit(beds, day, infusion_start, pat.infusion)
                        .map(|b| (InfusionClass::Bed, b))
                } else {
                    free_unit(chairs, day, infusion_start, pat.infusion)
                        .map(|s| (InfusionClass::Chair, s))
                        .or_else(|| {
                            free_unit(beds, day, infusion_start, pat.infusion)
                                .map(|b| (InfusionClass::Bed, b))
                        })
                };
                let Some((class, unit)) = spot else { continue };
                rooms.occupy(day, room, visit_start, pat.visit);
                let grid = if class == InfusionClass::Chair { chairs } else { beds };
                grid.occupy(day, unit, infusion_start, pat.infusion);
                return Some(PatientStart { day, visit_start, infusion_start, class });
            }
        }
    }
    None
}

fn free_unit(grid: &OccupancyGrid, day: usize, from: usize, len: usize) -> Option<usize> {
    (0..grid.busy[day - 1].len()).find(|&u| grid.free(day, u, from, len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate, GeneratorParams, Patient};
    use crate::report::validate_schedule;

    fn micro() -> Instance {
        Instance {
            days: 1,
            slots_per_day: 6,
            visit_slots: 4,
            pathologies: vec!["K1".to_owned()],
            rooms: 1,
            beds: 1,
            chairs: 1,
            mcp: vec![vec![vec![1]]],
            patients: vec![
                Patient { id: "p1".to_owned(), pathology: "K1".to_owned(), visit: 1, infusion: 2, critical: false },
                Patient { id: "p2".to_owned(), pathology: "K1".to_owned(), visit: 1, infusion: 3, critical: true },
            ],
        }
    }

    fn quick() -> SolveOptions {
        SolveOptions::internal(30.0)
    }

    #[test]
    fn greedy_seed_is_realisable() {
        let params = GeneratorParams { total_patients: 40, seed: 7, ..GeneratorParams::default() };
        let inst = generate(&params).unwrap();
        let agg = greedy_schedule(&inst);
        assert!(agg.treated() > 0, "greedy must place someone on a 40-patient week");
        let cs = disaggregate(&agg, &inst).expect("greedy schedules are realisable");
        assert!(validate_schedule(&cs, &inst).is_empty());
    }

    #[test]
    fn micro_chain_reaches_the_known_optimum() {
        let inst = micro();
        let outcome =
            procedure2(&inst, &StageLimits::default(), &KOptParams::default(), &quick()).unwrap();
        assert_eq!(outcome.v1, 2);
        assert_eq!(outcome.v2, vec![0]);
        assert_eq!(outcome.phi3, 1);
        assert!(outcome.stage_logs.iter().any(|l| l.stage == "af1"));
        assert!(outcome.stage_logs.iter().any(|l| l.stage == "af2-day"));
        assert!(outcome.stage_logs.iter().any(|l| l.stage == "af3-day"));
    }

    #[test]
    fn stage_one_reports_optimality_on_the_micro_week() {
        let inst = micro();
        let s1 = stage1(&inst, &quick()).unwrap();
        assert_eq!(s1.v1, 2);
        assert!(s1.optimal);
        assert_eq!(s1.logs.len(), 1);
        assert_eq!(s1.logs[0].stage, "af1");
        assert_eq!(s1.logs[0].status, "optimal");
    }

    #[test]
    fn zero_radii_return_the_start_unchanged() {
        let inst = micro();
        let p1 = procedure1(&inst, &StageLimits::default(), &quick()).unwrap();
        let kopt = KOptParams { radii: KOptRadii::uniform(0), ..KOptParams::default() };
        let (out, logs) = kopt_search(&inst, &p1.schedule, p1.v1, &p1.v2, &kopt, &quick());
        assert_eq!(out, p1.schedule);
        assert!(logs.is_empty());
    }

    #[test]
    fn stage_logs_serialise_without_an_empty_day_field() {
        let log = StageLog {
            stage: "af1".to_owned(),
            day: None,
            status: "optimal".to_owned(),
            objective: Some(2),
            bound: Some(2),
            runtime: 0.25,
        };
        let line = serde_json::to_string(&log).unwrap();
        assert!(!line.contains("day"));
        let daily = StageLog { day: Some(3), stage: "af2-day".to_owned(), ..log };
        assert!(serde_json::to_string(&daily).unwrap().contains("\"day\":3"));
    }
}
