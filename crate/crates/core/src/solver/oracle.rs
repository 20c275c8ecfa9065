//! Exhaustive lexicographic reference for tiny instances.
//!
//! [`brute_force_lexico`] enumerates complete schedules patient by
//! patient — every day, visit start, infusion start, resource class
//! and concrete resource, plus the option of leaving the patient
//! unscheduled — and keeps the best schedule under the engine's
//! lexicographic order: most patients scheduled, then smallest summed
//! per-day maximum waiting time, then most infusions on chairs.
//!
//! Two exact reductions keep the tree small without losing optima:
//!
//! * resources of one class whose occupancy pattern on the chosen day
//!   is identical are interchangeable, so only one per distinct
//!   pattern is tried (resources carry no state across days);
//! * a node is cut when even the most optimistic completion — every
//!   remaining placeable patient scheduled at zero extra wait, every
//!   remaining chair-eligible patient on a chair — cannot beat the
//!   incumbent lexicographically. Waits only grow as patients are
//!   added, so the current wait sum is a valid optimistic component.
//!
//! Guards reject instances big enough to blow up the enumeration;
//! this module is a correctness yardstick, not a solver.

use crate::disaggregate::{Appointment, CompleteSchedule, Resource};
use crate::instance::Instance;

use super::SolverError;

/// Hard ceiling on search nodes; trips as an error rather than
/// letting a mis-sized instance hang a test run.
const NODE_BUDGET: u64 = 200_000_000;

/// Guard limits: enumeration is exponential, so everything beyond
/// this is refused outright.
const MAX_PATIENTS: usize = 8;
const MAX_SLOTS_PER_DAY: usize = 12;
const MAX_ROOMS: usize = 2;

/// The lexicographic optimum of an instance, with one witness.
#[derive(Debug, Clone)]
pub struct LexicoOptimum {
    /// Most patients schedulable.
    pub v1: usize,
    /// Per-day maximum waits of the witness schedule (its wait sum is
    /// the optimum given `v1`).
    pub v2: Vec<usize>,
    /// Most chair infusions given `v1` and the per-day waits.
    pub phi3: usize,
    /// A schedule attaining all three values.
    pub schedule: CompleteSchedule,
}

/// Bitmask of slots `a..=b` (1-based, inclusive).
fn span(a: usize, b: usize) -> u64 {
    ((1u64 << (b - a + 1)) - 1) << (a - 1)
}

struct Dfs<'a> {
    inst: &'a Instance,
    /// Pathology index per patient.
    pk: Vec<usize>,
    /// Occupancy bitmask per resource and day, indexed `r * days + (t-1)`.
    room_busy: Vec<u64>,
    chair_busy: Vec<u64>,
    bed_busy: Vec<u64>,
    day_wait: Vec<usize>,
    wait_total: usize,
    treated: usize,
    on_chairs: usize,
    choice: Vec<Option<Appointment>>,
    /// How many of patients `p..` can be scheduled at all / on a chair,
    /// ignoring resource contention (optimistic).
    suffix_treatable: Vec<usize>,
    suffix_chairable: Vec<usize>,
    best: Option<(usize, i64, usize)>,
    best_schedule: Vec<Appointment>,
    best_day_wait: Vec<usize>,
    nodes: u64,
}

impl<'a> Dfs<'a> {
    fn objective(&self) -> (usize, i64, usize) {
        (self.treated, -(self.wait_total as i64), self.on_chairs)
    }

    fn dfs(&mut self, p: usize) -> Result<(), SolverError> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(SolverError::OracleGuard(format!(
                "search exceeded {NODE_BUDGET} nodes; the instance is too large for enumeration"
            )));
        }
        if p == self.inst.patients.len() {
            let cand = self.objective();
            if self.best.map_or(true, |b| cand > b) {
                self.best = Some(cand);
                self.best_schedule = self.choice.iter().flatten().cloned().collect();
                self.best_day_wait = self.day_wait.clone();
            }
            return Ok(());
        }
        if let Some(b) = self.best {
            let optimistic = (
                self.treated + self.suffix_treatable[p],
                -(self.wait_total as i64),
                self.on_chairs + self.suffix_chairable[p],
            );
            if optimistic <= b {
                return Ok(());
            }
        }

        let inst = self.inst;
        let days = inst.days;
        let h = inst.slots_per_day;
        let hv = inst.visit_slots;
        let pat = &inst.patients[p];
        let (v, f, critical) = (pat.visit, pat.infusion, pat.critical);
        let k = self.pk[p];

        for t in 1..=days {
            if v > hv {
                break;
            }
            for h_v in 1..=hv - v + 1 {
                let vmask = span(h_v, h_v + v - 1);
                let mut seen_rooms: Vec<u64> = Vec::new();
                for r in 0..inst.rooms {
                    if inst.mcp[r][k][t - 1] != 1 {
                        continue;
                    }
                    let room_occ = self.room_busy[r * days + (t - 1)];
                    if room_occ & vmask != 0 || seen_rooms.contains(&room_occ) {
                        continue;
                    }
                    seen_rooms.push(room_occ);
                    let first_infusion = h_v + v;
                    if first_infusion + f - 1 > h {
                        continue;
                    }
                    for h_i in first_infusion..=h - f + 1 {
                        let imask = span(h_i, h_i + f - 1);
                        // Chairs first so chair-heavy schedules surface
                        // early; beds afterwards (always for criticals).
                        if !critical {
                            self.try_class(p, t, h_v, r, h_i, vmask, imask, false)?;
                        }
                        self.try_class(p, t, h_v, r, h_i, vmask, imask, true)?;
                    }
                }
            }
        }

        // Leaving the patient out comes last: good schedules first.
        self.dfs(p + 1)
    }

    /// Try every distinct resource of one class for a fixed placement.
    #[allow(clippy::too_many_arguments)]
    fn try_class(
        &mut self,
        p: usize,
        t: usize,
        h_v: usize,
        r: usize,
        h_i: usize,
        vmask: u64,
        imask: u64,
        bed: bool,
    ) -> Result<(), SolverError> {
        let days = self.inst.days;
        let count = if bed { self.inst.beds } else { self.inst.chairs };
        let mut seen: Vec<u64> = Vec::new();
        for s in 0..count {
            let idx = s * days + (t - 1);
            let occ = if bed { self.bed_busy[idx] } else { self.chair_busy[idx] };
            if occ & imask != 0 || seen.contains(&occ) {
                continue;
            }
            seen.push(occ);

            // Apply.
            self.room_busy[r * days + (t - 1)] |= vmask;
            if bed {
                self.bed_busy[idx] |= imask;
            } else {
                self.chair_busy[idx] |= imask;
                self.on_chairs += 1;
            }
            self.treated += 1;
            let pat = &self.inst.patients[p];
            let wait = h_i - h_v - pat.visit;
            let old_wait = self.day_wait[t - 1];
            if wait > old_wait {
                self.wait_total += wait - old_wait;
                self.day_wait[t - 1] = wait;
            }
            self.choice[p] = Some(Appointment {
                patient: p,
                day: t,
                visit_start: h_v,
                room: r,
                infusion_start: h_i,
                resource: if bed { Resource::Bed(s) } else { Resource::Chair(s) },
            });

            let result = self.dfs(p + 1);

            // Undo.
            self.choice[p] = None;
            if wait > old_wait {
                self.wait_total -= wait - old_wait;
                self.day_wait[t - 1] = old_wait;
            }
            self.treated -= 1;
            if bed {
                self.bed_busy[idx] &= !imask;
            } else {
                self.chair_busy[idx] &= !imask;
                self.on_chairs -= 1;
            }
            self.room_busy[r * days + (t - 1)] &= !vmask;

            result?;
        }
        Ok(())
    }
}

/// Exhaustively compute the lexicographic optimum of a tiny instance.
///
/// Errors with [`SolverError::OracleGuard`] when the instance exceeds
/// the enumeration guards (more than 8 patients, more than 12 slots
/// per day, or more than 2 rooms) or the node budget.
pub fn brute_force_lexico(inst: &Instance) -> Result<LexicoOptimum, SolverError> {
    if inst.patients.len() > MAX_PATIENTS {
        return Err(SolverError::OracleGuard(format!(
            "{} patients exceed the enumeration limit of {MAX_PATIENTS}",
            inst.patients.len()
        )));
    }
    if inst.slots_per_day > MAX_SLOTS_PER_DAY {
        return Err(SolverError::OracleGuard(format!(
            "{} slots per day exceed the enumeration limit of {MAX_SLOTS_PER_DAY}",
            inst.slots_per_day
        )));
    }
    if inst.rooms > MAX_ROOMS {
        return Err(SolverError::OracleGuard(format!(
            "{} rooms exceed the enumeration limit of {MAX_ROOMS}",
            inst.rooms
        )));
    }

    let n = inst.patients.len();
    let days = inst.days;
    let pk: Vec<usize> = inst
        .patients
        .iter()
        .map(|p| {
            inst.pathology_index(&p.pathology)
                .expect("validated instance: known pathology")
        })
        .collect();

    // Optimistic per-patient placeability on an empty calendar.
    let mut treatable = vec![false; n];
    let mut chairable = vec![false; n];
    for (i, pat) in inst.patients.iter().enumerate() {
        let time_ok = pat.visit <= inst.visit_slots
            && pat.visit + pat.infusion <= inst.slots_per_day;
        let room_ok = (1..=days).any(|t| inst.day_has_room(pk[i], t));
        let resource_ok = if pat.critical {
            inst.beds > 0
        } else {
            inst.beds > 0 || inst.chairs > 0
        };
        treatable[i] = time_ok && room_ok && resource_ok;
        chairable[i] = treatable[i] && !pat.critical && inst.chairs > 0;
    }
    let mut suffix_treatable = vec![0usize; n + 1];
    let mut suffix_chairable = vec![0usize; n + 1];
    for i in (0..n).rev() {
        suffix_treatable[i] = suffix_treatable[i + 1] + usize::from(treatable[i]);
        suffix_chairable[i] = suffix_chairable[i + 1] + usize::from(chairable[i]);
    }

    let mut dfs = Dfs {
        inst,
        pk,
        room_busy: vec![0; inst.rooms * days],
        chair_busy: vec![0; inst.chairs * days],
        bed_busy: vec![0; inst.beds * days],
        day_wait: vec![0; days],
        wait_total: 0,
        treated: 0,
        on_chairs: 0,
        choice: vec![None; n],
        suffix_treatable,
        suffix_chairable,
        best: None,
        best_schedule: Vec::new(),
        best_day_wait: vec![0; days],
        nodes: 0,
    };
    dfs.dfs(0)?;

    let (v1, _, phi3) = dfs.best.expect("the all-skip schedule always reaches the leaf");
    let schedule = CompleteSchedule { appointments: dfs.best_schedule };
    let v2 = dfs.best_day_wait;

    #[cfg(debug_assertions)]
    {
        let violations = crate::report::validate_schedule(&schedule, inst);
        debug_assert!(violations.is_empty(), "oracle witness must validate: {violations:?}");
        let metrics = crate::report::evaluate(&schedule, inst)
            .expect("oracle witness must evaluate");
        debug_assert_eq!(metrics.phi1, v1);
        debug_assert_eq!(metrics.phi2, v2);
        debug_assert_eq!(metrics.phi3, phi3);
    }

    Ok(LexicoOptimum { v1, v2, phi3, schedule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Patient;
    use crate::report::{evaluate, validate_schedule};

    /// One day, six slots (four for visits), one pathology in one
    /// always-open room, one chair, one bed; a non-critical and a
    /// critical patient.
    fn micro() -> Instance {
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
                Patient {
                    id: "p1".into(),
                    pathology: "K1".into(),
                    visit: 1,
                    infusion: 2,
                    critical: false,
                },
                Patient {
                    id: "p2".into(),
                    pathology: "K1".into(),
                    visit: 1,
                    infusion: 3,
                    critical: true,
                },
            ],
        }
    }

    fn check_witness(inst: &Instance, opt: &LexicoOptimum) {
        assert!(validate_schedule(&opt.schedule, inst).is_empty());
        let metrics = evaluate(&opt.schedule, inst).expect("witness evaluates");
        assert_eq!(metrics.phi1, opt.v1);
        assert_eq!(metrics.phi2, opt.v2);
        assert_eq!(metrics.phi3, opt.phi3);
    }

    #[test]
    fn micro_optimum_is_two_zero_one() {
        let inst = micro();
        let opt = brute_force_lexico(&inst).expect("oracle");
        assert_eq!(opt.v1, 2);
        assert_eq!(opt.v2, vec![0]);
        assert_eq!(opt.phi3, 1);
        check_witness(&inst, &opt);
    }

    #[test]
    fn micro_without_chair_loses_only_the_chair_count() {
        let mut inst = micro();
        inst.chairs = 0;
        let opt = brute_force_lexico(&inst).expect("oracle");
        assert_eq!(opt.v1, 2);
        assert_eq!(opt.v2, vec![0]);
        assert_eq!(opt.phi3, 0);
        check_witness(&inst, &opt);
    }

    #[test]
    fn empty_instance_has_the_empty_optimum() {
        let mut inst = micro();
        inst.patients.clear();
        let opt = brute_force_lexico(&inst).expect("oracle");
        assert_eq!(opt.v1, 0);
        assert_eq!(opt.v2, vec![0]);
        assert_eq!(opt.phi3, 0);
        assert!(opt.schedule.appointments.is_empty());
    }

    #[test]
    fn contended_bed_forces_one_slot_of_wait() {
        // Two criticals share one bed: the second infusion must wait
        // for the first to finish.
        let inst = Instance {
            days: 1,
            slots_per_day: 6,
            visit_slots: 2,
            pathologies: vec!["K1".into()],
            rooms: 1,
            beds: 1,
            chairs: 0,
            mcp: vec![vec![vec![1]]],
            patients: vec![
                Patient {
                    id: "p1".into(),
                    pathology: "K1".into(),
                    visit: 1,
                    infusion: 2,
                    critical: true,
                },
                Patient {
                    id: "p2".into(),
                    pathology: "K1".into(),
                    visit: 1,
                    infusion: 2,
                    critical: true,
                },
            ],
        };
        let opt = brute_force_lexico(&inst).expect("oracle");
        assert_eq!(opt.v1, 2);
        assert_eq!(opt.v2, vec![1]);
        assert_eq!(opt.phi3, 0);
        check_witness(&inst, &opt);
    }

    #[test]
    fn patient_without_room_days_is_left_out() {
        let mut inst = micro();
        inst.pathologies.push("K2".into());
        inst.mcp = vec![vec![vec![1], vec![0]]];
        inst.patients.push(Patient {
            id: "p3".into(),
            pathology: "K2".into(),
            visit: 1,
            infusion: 2,
            critical: false,
        });
        let opt = brute_force_lexico(&inst).expect("oracle");
        assert_eq!(opt.v1, 2);
        check_witness(&inst, &opt);
    }

    #[test]
    fn guards_reject_oversized_instances() {
        let mut inst = micro();
        inst.patients = (0..9)
            .map(|i| Patient {
                id: format!("p{i}"),
                pathology: "K1".into(),
                visit: 1,
                infusion: 1,
                critical: false,
            })
            .collect();
        assert!(matches!(
            brute_force_lexico(&inst),
            Err(SolverError::OracleGuard(_))
        ));
    }
}
