//! Schedule metrics, feasibility audits, and exports.
//!
//! The three weekly metrics are:
//!
//! * `phi1` — number of patients treated;
//! * `phi2[t]` — the day's largest visit→infusion wait in slots (the
//!   wait of a patient is `infusion_start − visit_start − visit`, and
//!   a day with no treated patients scores 0);
//! * `phi3` — number of non-critical patients infused on chairs.
//!
//! [`validate_schedule`] replays a complete schedule on a slot
//! timeline and reports every broken rule; [`evaluate`] computes the
//! metrics of a valid schedule; [`emit`] renders JSON, CSV, or a
//! fixed-width text Gantt.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disaggregate::{Appointment, CompleteSchedule, Resource};
use crate::instance::Instance;

/// Metrics of a complete schedule, including the unscheduled-patient
/// breakdown by pathology and by criticality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    /// Number of treated patients.
    pub phi1: usize,
    /// Per-day maximum wait in slots, indexed day 1 first.
    pub phi2: Vec<usize>,
    /// Sum of the per-day maximum waits.
    pub phi2_total: usize,
    /// Number of non-critical patients infused on chairs.
    pub phi3: usize,
    /// Patients left unscheduled.
    pub unscheduled_total: usize,
    /// Per-pathology unscheduled count and percentage of the group.
    pub unscheduled_by_pathology: Vec<GroupShare>,
    /// Unscheduled critical patients (count, percentage of criticals).
    pub unscheduled_critical: GroupShare,
    /// Unscheduled non-critical patients (count, percentage).
    pub unscheduled_non_critical: GroupShare,
}

/// An unscheduled tally for one patient group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupShare {
    /// Group label ("HE", "critical", ...).
    pub group: String,
    /// Patients of the group in the instance.
    pub total: usize,
    /// Of those, patients left unscheduled.
    pub unscheduled: usize,
    /// `unscheduled / total` as a percentage (0 for empty groups).
    pub percent: f64,
}

impl GroupShare {
    fn new(group: &str, total: usize, unscheduled: usize) -> Self {
        let percent = if total == 0 {
            0.0
        } else {
            100.0 * unscheduled as f64 / total as f64
        };
        GroupShare { group: group.to_owned(), total, unscheduled, percent }
    }
}

/// A broken scheduling rule found by [`validate_schedule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleViolation {
    /// Appointment references a patient index outside the instance.
    UnknownPatient { index: usize },
    /// More than one appointment for the same patient.
    DuplicatePatient { patient: String },
    /// Day outside the planning horizon.
    DayOutOfRange { patient: String, day: usize },
    /// Room or seat index outside the instance.
    UnknownResource { patient: String, what: &'static str, index: usize },
    /// Visit starts or ends outside the visit window.
    VisitOutsideWindow { patient: String, start: usize, end: usize },
    /// Infusion ends after the day closes.
    InfusionOutsideDay { patient: String, start: usize, end: usize },
    /// Infusion starts before the visit ends.
    PrecedenceBroken { patient: String, visit_end: usize, infusion_start: usize },
    /// The room does not host the patient's pathology that day.
    RoomPathologyMismatch { patient: String, room: usize, day: usize },
    /// A critical patient seated on a chair.
    CriticalOnChair { patient: String },
    /// Two visits overlap in a room (first offending slot).
    RoomOverlap { room: usize, day: usize, slot: usize },
    /// Two infusions overlap on a chair.
    ChairOverlap { chair: usize, day: usize, slot: usize },
    /// Two infusions overlap on a bed.
    BedOverlap { bed: usize, day: usize, slot: usize },
}

impl std::fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use ScheduleViolation::*;
        match self {
            UnknownPatient { index } => write!(f, "appointment references patient #{index} outside the instance"),
            DuplicatePatient { patient } => write!(f, "patient {patient} has more than one appointment"),
            DayOutOfRange { patient, day } => write!(f, "patient {patient}: day {day} outside the horizon"),
            UnknownResource { patient, what, index } => {
                write!(f, "patient {patient}: {what} {} does not exist", index + 1)
            }
            VisitOutsideWindow { patient, start, end } => {
                write!(f, "patient {patient}: visit {start}..{end} leaves the visit window")
            }
            InfusionOutsideDay { patient, start, end } => {
                write!(f, "patient {patient}: infusion {start}..{end} leaves the day")
            }
            PrecedenceBroken { patient, visit_end, infusion_start } => write!(
                f,
                "patient {patient}: infusion starts at slot {infusion_start} before the visit ends at slot {visit_end}"
            ),
            RoomPathologyMismatch { patient, room, day } => write!(
                f,
                "patient {patient}: room {} does not host their pathology on day {day}",
                room + 1
            ),
            CriticalOnChair { patient } => write!(f, "critical patient {patient} seated on a chair"),
            RoomOverlap { room, day, slot } => {
                write!(f, "room {} double-booked on day {day}, slot {slot}", room + 1)
            }
            ChairOverlap { chair, day, slot } => {
                write!(f, "chair {} double-booked on day {day}, slot {slot}", chair + 1)
            }
            BedOverlap { bed, day, slot } => {
                write!(f, "bed {} double-booked on day {day}, slot {slot}", bed + 1)
            }
        }
    }
}

/// Errors of the reporting layer.
#[derive(Debug, Error)]
pub enum ReportError {
    /// A metric or export was requested for an infeasible schedule.
    #[error("schedule is infeasible: {summary}")]
    InvalidSchedule {
        summary: String,
        violations: Vec<ScheduleViolation>,
    },
    /// A schedule document could not be parsed.
    #[error("schedule parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    /// A schedule document references an unknown patient id.
    #[error("schedule references unknown patient id {id:?}")]
    UnknownPatientId { id: String },
}

/// Replay a complete schedule on a slot timeline and report every
/// broken rule: single appointment per patient, window bounds,
/// same-day visit→infusion precedence, room pathology eligibility,
/// exclusive rooms/chairs/beds, and bed-only criticals.
pub fn validate_schedule(cs: &CompleteSchedule, inst: &Instance) -> Vec<ScheduleViolation> {
    let mut out = Vec::new();
    let mut seen = vec![false; inst.patients.len()];

    for a in &cs.appointments {
        let Some(pat) = inst.patients.get(a.patient) else {
            out.push(ScheduleViolation::UnknownPatient { index: a.patient });
            continue;
        };
        let id = || pat.id.clone();
        if seen[a.patient] {
            out.push(ScheduleViolation::DuplicatePatient { patient: id() });
            continue;
        }
        seen[a.patient] = true;
        if a.day == 0 || a.day > inst.days {
            out.push(ScheduleViolation::DayOutOfRange { patient: id(), day: a.day });
            continue;
        }
        if a.room >= inst.rooms {
            out.push(ScheduleViolation::UnknownResource {
                patient: id(),
                what: "room",
                index: a.room,
            });
            continue;
        }
        match a.resource {
            Resource::Chair(s) if s >= inst.chairs => {
                out.push(ScheduleViolation::UnknownResource {
                    patient: id(),
                    what: "chair",
                    index: s,
                });
                continue;
            }
            Resource::Bed(b) if b >= inst.beds => {
                out.push(ScheduleViolation::UnknownResource {
                    patient: id(),
                    what: "bed",
                    index: b,
                });
                continue;
            }
            _ => {}
        }
        let visit_end = a.visit_start + pat.visit - 1;
        if a.visit_start == 0 || visit_end > inst.visit_slots {
            out.push(ScheduleViolation::VisitOutsideWindow {
                patient: id(),
                start: a.visit_start,
                end: visit_end,
            });
        }
        let infusion_end = a.infusion_start + pat.infusion - 1;
        if a.infusion_start == 0 || infusion_end > inst.slots_per_day {
            out.push(ScheduleViolation::InfusionOutsideDay {
                patient: id(),
                start: a.infusion_start,
                end: infusion_end,
            });
        }
        if a.infusion_start < a.visit_start + pat.visit {
            out.push(ScheduleViolation::PrecedenceBroken {
                patient: id(),
                visit_end,
                infusion_start: a.infusion_start,
            });
        }
        match inst.patient_pathology(a.patient) {
            Some(k) if inst.mcp[a.room][k][a.day - 1] == 1 => {}
            _ => out.push(ScheduleViolation::RoomPathologyMismatch {
                patient: id(),
                room: a.room,
                day: a.day,
            }),
        }
        if pat.critical && matches!(a.resource, Resource::Chair(_)) {
            out.push(ScheduleViolation::CriticalOnChair { patient: id() });
        }
    }

    // Exclusivity by timeline simulation. Out-of-range indices were
    // reported above; clamp the replay to in-range appointments.
    let occupancy = |hits: &mut Vec<Vec<usize>>, idx: usize, day: usize, from: usize, len: usize| {
        for h in from..from + len {
            if h >= 1 && h <= inst.slots_per_day {
                hits[idx][(day - 1) * inst.slots_per_day + h - 1] += 1;
            }
        }
    };
    let slots = inst.days * inst.slots_per_day;
    let mut rooms = vec![vec![0usize; slots]; inst.rooms];
    let mut chairs = vec![vec![0usize; slots]; inst.chairs];
    let mut beds = vec![vec![0usize; slots]; inst.beds];
    for a in &cs.appointments {
        let Some(pat) = inst.patients.get(a.patient) else { continue };
        if a.day == 0 || a.day > inst.days {
            continue;
        }
        if a.room < inst.rooms {
            occupancy(&mut rooms, a.room, a.day, a.visit_start, pat.visit);
        }
        match a.resource {
            Resource::Chair(s) if s < inst.chairs => {
                occupancy(&mut chairs, s, a.day, a.infusion_start, pat.infusion)
            }
            Resource::Bed(b) if b < inst.beds => {
                occupancy(&mut beds, b, a.day, a.infusion_start, pat.infusion)
            }
            _ => {}
        }
    }
    let mut push_overlaps = |grid: &[Vec<usize>], make: &dyn Fn(usize, usize, usize) -> ScheduleViolation| {
        for (idx, row) in grid.iter().enumerate() {
            let mut in_overlap = false;
            for (i, &count) in row.iter().enumerate() {
                if count > 1 && !in_overlap {
                    let day = i / inst.slots_per_day + 1;
                    let slot = i % inst.slots_per_day + 1;
                    out.push(make(idx, day, slot));
                }
                in_overlap = count > 1;
            }
        }
    };
    push_overlaps(&rooms, &|room, day, slot| ScheduleViolation::RoomOverlap { room, day, slot });
    push_overlaps(&chairs, &|chair, day, slot| ScheduleViolation::ChairOverlap {
        chair,
        day,
        slot,
    });
    push_overlaps(&beds, &|bed, day, slot| ScheduleViolation::BedOverlap { bed, day, slot });
    out
}

/// Compute the metrics of a valid complete schedule.
///
/// Fails with [`ReportError::InvalidSchedule`] when the schedule
/// breaks any rule, carrying the full violation list.
pub fn evaluate(cs: &CompleteSchedule, inst: &Instance) -> Result<MetricsRecord, ReportError> {
    let violations = validate_schedule(cs, inst);
    if !violations.is_empty() {
        return Err(ReportError::InvalidSchedule {
            summary: format!("{} violation(s), first: {}", violations.len(), violations[0]),
            violations,
        });
    }
    Ok(evaluate_unchecked(cs, inst))
}

/// Metric computation without the feasibility audit; callers must
/// know the schedule is valid (e.g. it just passed the audit).
pub(crate) fn evaluate_unchecked(cs: &CompleteSchedule, inst: &Instance) -> MetricsRecord {
    let mut phi2 = vec![0usize; inst.days];
    let mut phi3 = 0usize;
    let mut scheduled = vec![false; inst.patients.len()];
    for a in &cs.appointments {
        let pat = &inst.patients[a.patient];
        scheduled[a.patient] = true;
        let wait = a.infusion_start - a.visit_start - pat.visit;
        phi2[a.day - 1] = phi2[a.day - 1].max(wait);
        if matches!(a.resource, Resource::Chair(_)) {
            phi3 += 1;
        }
    }
    let phi1 = cs.appointments.len();
    let phi2_total = phi2.iter().sum();

    let tally = |keep: &dyn Fn(usize) -> bool, label: &str| {
        let total = (0..inst.patients.len()).filter(|&p| keep(p)).count();
        let missed = (0..inst.patients.len())
            .filter(|&p| keep(p) && !scheduled[p])
            .count();
        GroupShare::new(label, total, missed)
    };
    let unscheduled_by_pathology = inst
        .pathologies
        .iter()
        .enumerate()
        .map(|(k, name)| tally(&|p| inst.patient_pathology(p) == Some(k), name))
        .collect();
    MetricsRecord {
        phi1,
        phi2,
        phi2_total,
        phi3,
        unscheduled_total: inst.patients.len() - phi1,
        unscheduled_by_pathology,
        unscheduled_critical: tally(&|p| inst.patients[p].critical, "critical"),
        unscheduled_non_critical: tally(&|p| !inst.patients[p].critical, "non-critical"),
    }
}

/// Output format of [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    /// Canonical machine form (round-trips through [`parse_schedule_json`]).
    Json,
    /// One row per appointment.
    Csv,
    /// Per-day, per-resource slot strips.
    GanttText,
}

/// One appointment in the external JSON schedule document. All
/// indices are 1-based in the file.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AppointmentDoc {
    patient_id: String,
    day: usize,
    visit_start: usize,
    room: usize,
    infusion_start: usize,
    resource_type: String,
    resource_id: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct ScheduleDoc {
    appointments: Vec<AppointmentDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<MetricsRecord>,
}

/// Render a schedule (and its metrics) to the requested format.
pub fn emit(
    cs: &CompleteSchedule,
    metrics: &MetricsRecord,
    inst: &Instance,
    format: EmitFormat,
) -> String {
    match format {
        EmitFormat::Json => emit_json(cs, Some(metrics), inst),
        EmitFormat::Csv => emit_csv(cs, inst),
        EmitFormat::GanttText => emit_gantt(cs, inst),
    }
}

fn emit_json(cs: &CompleteSchedule, metrics: Option<&MetricsRecord>, inst: &Instance) -> String {
    let doc = ScheduleDoc {
        appointments: cs
            .appointments
            .iter()
            .map(|a| {
                let (resource_type, resource_id) = match a.resource {
                    Resource::Chair(s) => ("chair", s + 1),
                    Resource::Bed(b) => ("bed", b + 1),
                };
                AppointmentDoc {
                    patient_id: inst.patients[a.patient].id.clone(),
                    day: a.day,
                    visit_start: a.visit_start,
                    room: a.room + 1,
                    infusion_start: a.infusion_start,
                    resource_type: resource_type.into(),
                    resource_id,
                }
            })
            .collect(),
        metrics: metrics.cloned(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("schedule serialization is total");
    text.push('\n');
    text
}

fn emit_csv(cs: &CompleteSchedule, inst: &Instance) -> String {
    let mut out = String::from(
        "patient_id,pathology,critical,day,visit_start,visit_end,room,infusion_start,infusion_end,resource_type,resource_id,wait_slots\n",
    );
    for a in &cs.appointments {
        let pat = &inst.patients[a.patient];
        let (resource_type, resource_id) = match a.resource {
            Resource::Chair(s) => ("chair", s + 1),
            Resource::Bed(b) => ("bed", b + 1),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            pat.id,
            pat.pathology,
            pat.critical,
            a.day,
            a.visit_start,
            a.visit_start + pat.visit - 1,
            a.room + 1,
            a.infusion_start,
            a.infusion_start + pat.infusion - 1,
            resource_type,
            resource_id,
            a.infusion_start - a.visit_start - pat.visit,
        ));
    }
    out
}

fn emit_gantt(cs: &CompleteSchedule, inst: &Instance) -> String {
    let width = cs
        .appointments
        .iter()
        .map(|a| inst.patients[a.patient].id.len())
        .max()
        .unwrap_or(2)
        .max(2);
    let free = ".".repeat(width);
    let mut out = String::new();
    for t in 1..=inst.days {
        out.push_str(&format!("Day {t}\n"));
        let mut strip = |label: String, occupant: &dyn Fn(usize) -> Option<usize>| {
            out.push_str(&format!("{label:>4}:"));
            for h in 1..=inst.slots_per_day {
                let cell = match occupant(h) {
                    Some(p) => format!("{:>width$}", inst.patients[p].id),
                    None => free.clone(),
                };
                out.push(' ');
                out.push_str(&cell);
            }
            out.push('\n');
        };
        for r in 0..inst.rooms {
            strip(format!("R{}", r + 1), &|h| {
                cs.appointments
                    .iter()
                    .find(|a| {
                        a.day == t
                            && a.room == r
                            && a.visit_start <= h
                            && h < a.visit_start + inst.patients[a.patient].visit
                    })
                    .map(|a| a.patient)
            });
        }
        for s in 0..inst.chairs {
            strip(format!("S{}", s + 1), &|h| {
                cs.appointments
                    .iter()
                    .find(|a| {
                        a.day == t
                            && a.resource == Resource::Chair(s)
                            && a.infusion_start <= h
                            && h < a.infusion_start + inst.patients[a.patient].infusion
                    })
                    .map(|a| a.patient)
            });
        }
        for b in 0..inst.beds {
            strip(format!("B{}", b + 1), &|h| {
                cs.appointments
                    .iter()
                    .find(|a| {
                        a.day == t
                            && a.resource == Resource::Bed(b)
                            && a.infusion_start <= h
                            && h < a.infusion_start + inst.patients[a.patient].infusion
                    })
                    .map(|a| a.patient)
            });
        }
    }
    out
}

/// Parse the canonical JSON schedule document back into a
/// [`CompleteSchedule`] (indices converted back to 0-based).
pub fn parse_schedule_json(text: &str, inst: &Instance) -> Result<CompleteSchedule, ReportError> {
    let doc: ScheduleDoc = serde_json::from_str(text).map_err(|e| ReportError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut appointments = Vec::with_capacity(doc.appointments.len());
    for a in doc.appointments {
        let patient = inst
            .patients
            .iter()
            .position(|p| p.id == a.patient_id)
            .ok_or(ReportError::UnknownPatientId { id: a.patient_id.clone() })?;
        let resource = match (a.resource_type.as_str(), a.resource_id) {
            (_, 0) => {
                return Err(ReportError::Parse {
                    line: 0,
                    column: 0,
                    message: format!("patient {}: resource_id must be ≥ 1", a.patient_id),
                })
            }
            ("chair", id) => Resource::Chair(id - 1),
            ("bed", id) => Resource::Bed(id - 1),
            (other, _) => {
                return Err(ReportError::Parse {
                    line: 0,
                    column: 0,
                    message: format!(
                        "patient {}: resource_type {other:?} is neither \"chair\" nor \"bed\"",
                        a.patient_id
                    ),
                })
            }
        };
        if a.room == 0 {
            return Err(ReportError::Parse {
                line: 0,
                column: 0,
                message: format!("patient {}: room must be ≥ 1", a.patient_id),
            });
        }
        appointments.push(Appointment {
            patient,
            day: a.day,
            visit_start: a.visit_start,
            room: a.room - 1,
            infusion_start: a.infusion_start,
            resource,
        });
    }
    appointments.sort_by_key(|a| a.patient);
    Ok(CompleteSchedule { appointments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Instance, Patient};

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

    fn micro_schedule() -> CompleteSchedule {
        CompleteSchedule {
            appointments: vec![
                Appointment {
                    patient: 0,
                    day: 1,
                    visit_start: 1,
                    room: 0,
                    infusion_start: 2,
                    resource: Resource::Chair(0),
                },
                Appointment {
                    patient: 1,
                    day: 1,
                    visit_start: 2,
                    room: 0,
                    infusion_start: 3,
                    resource: Resource::Bed(0),
                },
            ],
        }
    }

    #[test]
    fn micro_schedule_is_valid_and_scores_2_0_1() {
        let inst = micro();
        let cs = micro_schedule();
        assert_eq!(validate_schedule(&cs, &inst), Vec::new());
        let m = evaluate(&cs, &inst).unwrap();
        assert_eq!(m.phi1, 2);
        assert_eq!(m.phi2, vec![0]);
        assert_eq!(m.phi2_total, 0);
        assert_eq!(m.phi3, 1);
        assert_eq!(m.unscheduled_total, 0);
    }

    #[test]
    fn empty_schedule_scores_zero_everywhere() {
        let inst = micro();
        let m = evaluate(&CompleteSchedule::default(), &inst).unwrap();
        assert_eq!(m.phi1, 0);
        assert_eq!(m.phi2_total, 0);
        assert_eq!(m.phi3, 0);
        assert_eq!(m.unscheduled_total, 2);
        assert_eq!(m.unscheduled_critical.unscheduled, 1);
        assert_eq!(m.unscheduled_non_critical.unscheduled, 1);
    }

    #[test]
    fn single_waiting_patient_drives_the_day_maximum() {
        let inst = Instance { days: 2, ..micro() };
        let mut inst = inst;
        inst.mcp = vec![vec![vec![1, 1]]];
        let cs = CompleteSchedule {
            appointments: vec![Appointment {
                patient: 0,
                day: 2,
                visit_start: 1,
                room: 0,
                infusion_start: 5,
                resource: Resource::Chair(0),
            }],
        };
        let m = evaluate(&cs, &inst).unwrap();
        assert_eq!(m.phi2, vec![0, 3]);
        assert_eq!(m.phi2_total, 3);
    }

    #[test]
    fn overlap_on_a_chair_is_one_violation_with_slot() {
        let mut inst = micro();
        inst.patients[1].critical = false;
        let mut cs = micro_schedule();
        cs.appointments[1].resource = Resource::Chair(0);
        let violations = validate_schedule(&cs, &inst);
        assert_eq!(
            violations,
            vec![ScheduleViolation::ChairOverlap { chair: 0, day: 1, slot: 3 }]
        );
    }

    #[test]
    fn infusion_before_visit_end_is_a_precedence_violation() {
        let inst = micro();
        let mut cs = micro_schedule();
        cs.appointments[0].infusion_start = 1;
        let violations = validate_schedule(&cs, &inst);
        assert!(violations
            .iter()
            .any(|v| matches!(v, ScheduleViolation::PrecedenceBroken { .. })));
    }

    #[test]
    fn evaluate_rejects_invalid_schedules() {
        let inst = micro();
        let mut cs = micro_schedule();
        cs.appointments[1].room = 5;
        assert!(matches!(
            evaluate(&cs, &inst),
            Err(ReportError::InvalidSchedule { .. })
        ));
    }

    #[test]
    fn json_round_trip_preserves_the_schedule() {
        let inst = micro();
        let cs = micro_schedule();
        let m = evaluate(&cs, &inst).unwrap();
        let text = emit(&cs, &m, &inst, EmitFormat::Json);
        let back = parse_schedule_json(&text, &inst).unwrap();
        assert_eq!(back, cs);
    }

    #[test]
    fn csv_has_one_row_per_appointment_with_wait() {
        let inst = micro();
        let cs = micro_schedule();
        let m = evaluate(&cs, &inst).unwrap();
        let text = emit(&cs, &m, &inst, EmitFormat::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("patient_id,pathology,critical,day"));
        assert_eq!(lines[1], "p1,K1,false,1,1,1,1,2,3,chair,1,0");
        assert_eq!(lines[2], "p2,K1,true,1,2,2,1,3,5,bed,1,0");
    }

    #[test]
    fn gantt_shows_occupied_and_free_slots() {
        let inst = micro();
        let cs = micro_schedule();
        let m = evaluate(&cs, &inst).unwrap();
        let text = emit(&cs, &m, &inst, EmitFormat::GanttText);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "Day 1");
        assert_eq!(lines[1], "  R1: p1 p2 .. .. .. ..");
        assert_eq!(lines[2], "  S1: .. p1 p1 .. .. ..");
        assert_eq!(lines[3], "  B1: .. .. p2 p2 p2 ..");
    }

    #[test]
    fn empty_schedule_emits_headers_only() {
        let inst = micro();
        let cs = CompleteSchedule::default();
        let m = evaluate(&cs, &inst).unwrap();
        let csv = emit(&cs, &m, &inst, EmitFormat::Csv);
        assert_eq!(csv.lines().count(), 1);
        let gantt = emit(&cs, &m, &inst, EmitFormat::GanttText);
        assert!(gantt.starts_with("Day 1"));
    }
}
