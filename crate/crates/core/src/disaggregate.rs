//! From aggregate start times to concrete resources.
//!
//! The aggregate formulations decide *when* each patient is visited
//! and infused but not *where*. This module realises the constructive
//! argument behind that aggregation: three slot-sweep algorithms that
//! assign exam rooms, chairs, and beds without ever failing on a
//! feasible aggregate solution, preserving every metric.
//!
//! Each sweep walks one day at a time, slots ascending, releasing
//! resources whose occupant just finished *before* seating the
//! patients that start in the slot; a patient may therefore reuse a
//! resource in the very slot its previous occupant freed it. Free
//! resources are taken lowest-index-first, which keeps the whole
//! pipeline deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::Instance;

/// Which kind of infusion seat an aggregate solution chose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfusionClass {
    /// Infusion on a chair (non-critical patients only).
    Chair,
    /// Infusion on a bed.
    Bed,
}

/// Visit/infusion start times of one treated patient.
///
/// Both appointments fall on the same day; slots are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatientStart {
    /// Day of treatment, 1-based.
    pub day: usize,
    /// First slot of the visit.
    pub visit_start: usize,
    /// First slot of the infusion.
    pub infusion_start: usize,
    /// Seat class of the infusion.
    pub class: InfusionClass,
}

/// An aggregate solution: start times without resource identities.
///
/// `starts[p]` is `None` when patient `p` (by position in
/// [`Instance::patients`]) is not treated this week.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateSchedule {
    /// Per-patient optional start times, indexed like `inst.patients`.
    pub starts: Vec<Option<PatientStart>>,
}

impl AggregateSchedule {
    /// Schedule in which none of the `n` patients is treated.
    pub fn empty(n: usize) -> Self {
        AggregateSchedule { starts: vec![None; n] }
    }

    /// Number of treated patients.
    pub fn treated(&self) -> usize {
        self.starts.iter().flatten().count()
    }
}

/// A concrete infusion seat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Resource {
    /// Chair by 0-based index.
    Chair(usize),
    /// Bed by 0-based index.
    Bed(usize),
}

/// One patient's fully specified week: where and when both
/// appointments happen. Slots and days are 1-based; room and resource
/// indices are 0-based (displayed 1-based by the report module).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Appointment {
    /// Patient index into `inst.patients`.
    pub patient: usize,
    /// Day of treatment, 1-based.
    pub day: usize,
    /// First slot of the visit.
    pub visit_start: usize,
    /// Exam room hosting the visit, 0-based.
    pub room: usize,
    /// First slot of the infusion.
    pub infusion_start: usize,
    /// Seat hosting the infusion.
    pub resource: Resource,
}

/// A complete schedule: one appointment per treated patient.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CompleteSchedule {
    /// Appointments sorted by patient index.
    pub appointments: Vec<Appointment>,
}

/// Why an aggregate solution could not be disaggregated.
///
/// These only fire on inputs that break the aggregate feasibility
/// invariants; on feasible inputs the sweeps always succeed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DisaggregateError {
    /// A per-patient invariant (windows, precedence, class) is broken.
    #[error("aggregate start for patient {patient} is malformed: {reason}")]
    BadStart { patient: String, reason: String },
    /// The start vector does not cover exactly the instance's patients.
    #[error("aggregate schedule covers {found} patients, instance has {expected}")]
    WrongPatientCount { expected: usize, found: usize },
    /// More concurrent appointments than resources at some slot.
    #[error("no free {what} on day {day}, slot {slot}")]
    CapacityExceeded { what: String, day: usize, slot: usize },
}

/// Check the aggregate feasibility invariants that the assignment
/// sweeps rely on: window bounds, same-day precedence, seat class, and
/// per-slot capacity counts.
fn check_aggregate(agg: &AggregateSchedule, inst: &Instance) -> Result<(), DisaggregateError> {
    if agg.starts.len() != inst.patients.len() {
        return Err(DisaggregateError::WrongPatientCount {
            expected: inst.patients.len(),
            found: agg.starts.len(),
        });
    }
    for (p, start) in agg.starts.iter().enumerate() {
        let Some(s) = start else { continue };
        let pat = &inst.patients[p];
        let fail = |reason: String| {
            Err(DisaggregateError::BadStart { patient: pat.id.clone(), reason })
        };
        if s.day == 0 || s.day > inst.days {
            return fail(format!("day {} outside 1..={}", s.day, inst.days));
        }
        if s.visit_start == 0 || s.visit_start + pat.visit - 1 > inst.visit_slots {
            return fail(format!(
                "visit {}..{} leaves the visit window 1..={}",
                s.visit_start,
                s.visit_start + pat.visit - 1,
                inst.visit_slots
            ));
        }
        if s.infusion_start < s.visit_start + pat.visit {
            return fail(format!(
                "infusion starts at {} before the visit ends at {}",
                s.infusion_start,
                s.visit_start + pat.visit - 1
            ));
        }
        if s.infusion_start + pat.infusion - 1 > inst.slots_per_day {
            return fail(format!(
                "infusion {}..{} leaves the day 1..={}",
                s.infusion_start,
                s.infusion_start + pat.infusion - 1,
                inst.slots_per_day
            ));
        }
        if pat.critical && s.class != InfusionClass::Bed {
            return fail("critical patient assigned to a chair".into());
        }
        let k = inst.patient_pathology(p).ok_or_else(|| DisaggregateError::BadStart {
            patient: pat.id.clone(),
            reason: format!("unknown pathology {:?}", pat.pathology),
        })?;
        if !inst.day_has_room(k, s.day) {
            return fail(format!("no room hosts pathology {:?} on day {}", pat.pathology, s.day));
        }
    }

    // Per-slot concurrency counts against capacities.
    for t in 1..=inst.days {
        for h in 1..=inst.slots_per_day {
            for k in 0..inst.pathologies.len() {
                let visits = treated(agg)
                    .filter(|&(p, s)| {
                        s.day == t
                            && inst.patient_pathology(p) == Some(k)
                            && covers(s.visit_start, inst.patients[p].visit, h)
                    })
                    .count();
                if visits > inst.rooms_open(k, t) {
                    return Err(DisaggregateError::CapacityExceeded {
                        what: format!("room for pathology {:?}", inst.pathologies[k]),
                        day: t,
                        slot: h,
                    });
                }
            }
            let chairs = treated(agg)
                .filter(|&(p, s)| {
                    s.day == t
                        && s.class == InfusionClass::Chair
                        && covers(s.infusion_start, inst.patients[p].infusion, h)
                })
                .count();
            if chairs > inst.chairs {
                return Err(DisaggregateError::CapacityExceeded {
                    what: "chair".into(),
                    day: t,
                    slot: h,
                });
            }
            let beds = treated(agg)
                .filter(|&(p, s)| {
                    s.day == t
                        && s.class == InfusionClass::Bed
                        && covers(s.infusion_start, inst.patients[p].infusion, h)
                })
                .count();
            if beds > inst.beds {
                return Err(DisaggregateError::CapacityExceeded {
                    what: "bed".into(),
                    day: t,
                    slot: h,
                });
            }
        }
    }
    Ok(())
}

/// Iterator over `(patient, start)` pairs of treated patients.
fn treated(agg: &AggregateSchedule) -> impl Iterator<Item = (usize, &PatientStart)> {
    agg.starts
        .iter()
        .enumerate()
        .filter_map(|(p, s)| s.as_ref().map(|s| (p, s)))
}

/// Whether an appointment starting at `start` with `duration` slots
/// occupies slot `h`.
fn covers(start: usize, duration: usize, h: usize) -> bool {
    start <= h && h < start + duration
}

/// Generic slot sweep: seat every `(patient, start_slot, duration)`
/// request of one day on the eligible resource with the lowest index,
/// releasing resources before acquiring within each slot.
///
/// `eligible(r)` restricts the pool (rooms of the right pathology);
/// `release[r] <= h` encodes "free at slot h", since an occupant
/// starting at `s` with duration `d` holds the resource through slot
/// `s + d - 1` and releases it at `s + d`.
fn sweep_day(
    requests: &mut [(usize, usize, usize)],
    resources: usize,
    eligible: impl Fn(usize) -> bool,
    what: &str,
    day: usize,
) -> Result<Vec<(usize, usize)>, DisaggregateError> {
    requests.sort_by_key(|&(p, start, _)| (start, p));
    let mut release = vec![0usize; resources];
    let mut out = Vec::with_capacity(requests.len());
    for &(p, start, duration) in requests.iter() {
        let seat = (0..resources).find(|&r| eligible(r) && release[r] <= start);
        match seat {
            Some(r) => {
                release[r] = start + duration;
                out.push((p, r));
            }
            None => {
                return Err(DisaggregateError::CapacityExceeded {
                    what: what.into(),
                    day,
                    slot: start,
                })
            }
        }
    }
    Ok(out)
}

/// Assign an exam room to every treated patient.
///
/// Returns a map patient index → room index (0-based). Every patient
/// receives a room that hosts their pathology on their day, and no
/// two visits overlap in a room.
pub fn assign_rooms(
    agg: &AggregateSchedule,
    inst: &Instance,
) -> Result<BTreeMap<usize, usize>, DisaggregateError> {
    check_aggregate(agg, inst)?;
    let mut map = BTreeMap::new();
    for t in 1..=inst.days {
        // On a fixed day each room serves one pathology, so the room
        // pools of different pathologies are disjoint: sweep each
        // pathology independently over its own pool.
        for k in 0..inst.pathologies.len() {
            let mut reqs: Vec<(usize, usize, usize)> = treated(agg)
                .filter(|&(p, s)| s.day == t && inst.patient_pathology(p) == Some(k))
                .map(|(p, s)| (p, s.visit_start, inst.patients[p].visit))
                .collect();
            if reqs.is_empty() {
                continue;
            }
            let seated = sweep_day(
                &mut reqs,
                inst.rooms,
                |r| inst.mcp[r][k][t - 1] == 1,
                &format!("room for pathology {:?}", inst.pathologies[k]),
                t,
            )?;
            map.extend(seated);
        }
    }
    Ok(map)
}

/// Assign a chair to every chair-class patient.
pub fn assign_chairs(
    agg: &AggregateSchedule,
    inst: &Instance,
) -> Result<BTreeMap<usize, usize>, DisaggregateError> {
    check_aggregate(agg, inst)?;
    let mut map = BTreeMap::new();
    for t in 1..=inst.days {
        let mut reqs: Vec<(usize, usize, usize)> = treated(agg)
            .filter(|&(_, s)| s.day == t && s.class == InfusionClass::Chair)
            .map(|(p, s)| (p, s.infusion_start, inst.patients[p].infusion))
            .collect();
        map.extend(sweep_day(&mut reqs, inst.chairs, |_| true, "chair", t)?);
    }
    Ok(map)
}

/// Assign a bed to every bed-class patient (critical patients and
/// non-critical patients routed to beds share the same pool).
pub fn assign_beds(
    agg: &AggregateSchedule,
    inst: &Instance,
) -> Result<BTreeMap<usize, usize>, DisaggregateError> {
    check_aggregate(agg, inst)?;
    let mut map = BTreeMap::new();
    for t in 1..=inst.days {
        let mut reqs: Vec<(usize, usize, usize)> = treated(agg)
            .filter(|&(_, s)| s.day == t && s.class == InfusionClass::Bed)
            .map(|(p, s)| (p, s.infusion_start, inst.patients[p].infusion))
            .collect();
        map.extend(sweep_day(&mut reqs, inst.beds, |_| true, "bed", t)?);
    }
    Ok(map)
}

/// Turn a feasible aggregate solution into a complete schedule.
///
/// Composes the three assignment sweeps; the result treats exactly the
/// same patients at exactly the same times, so every metric carries
/// over unchanged.
pub fn disaggregate(
    agg: &AggregateSchedule,
    inst: &Instance,
) -> Result<CompleteSchedule, DisaggregateError> {
    let rooms = assign_rooms(agg, inst)?;
    let chairs = assign_chairs(agg, inst)?;
    let beds = assign_beds(agg, inst)?;
    let mut appointments = Vec::with_capacity(rooms.len());
    for (p, s) in treated(agg) {
        let resource = match s.class {
            InfusionClass::Chair => Resource::Chair(chairs[&p]),
            InfusionClass::Bed => Resource::Bed(beds[&p]),
        };
        appointments.push(Appointment {
            patient: p,
            day: s.day,
            visit_start: s.visit_start,
            room: rooms[&p],
            infusion_start: s.infusion_start,
            resource,
        });
    }
    appointments.sort_by_key(|a| a.patient);
    Ok(CompleteSchedule { appointments })
}

/// Collapse a complete schedule back to its aggregate form (drop
/// resource identities, keep start times and seat classes).
pub fn collapse(cs: &CompleteSchedule, inst: &Instance) -> AggregateSchedule {
    let mut agg = AggregateSchedule::empty(inst.patients.len());
    for a in &cs.appointments {
        let class = match a.resource {
            Resource::Chair(_) => InfusionClass::Chair,
            Resource::Bed(_) => InfusionClass::Bed,
        };
        agg.starts[a.patient] = Some(PatientStart {
            day: a.day,
            visit_start: a.visit_start,
            infusion_start: a.infusion_start,
            class,
        });
    }
    agg
}
