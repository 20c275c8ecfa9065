//! Problem instances: patients, ward resources, and the room/pathology
//! calendar, together with validation, JSON persistence, and a
//! deterministic synthetic generator.
//!
//! Conventions used across the whole crate:
//!
//! * Time slots are 1-based: a day has slots `1..=slots_per_day`, and
//!   visits may only start in `1..=visit_slots`.
//! * Days are 1-based in every public report; internal storage such as
//!   the `mcp` tensor is 0-indexed (`mcp[room][pathology][day - 1]`).
//! * A patient occupies slots `h..=h+d-1` when an appointment of
//!   duration `d` starts at slot `h`.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One patient requiring a consultation visit followed, on the same
/// day, by an infusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Patient {
    /// Opaque identifier, unique within an instance.
    pub id: String,
    /// Pathology group; must name an entry of [`Instance::pathologies`].
    pub pathology: String,
    /// Visit duration in slots (≥ 1).
    pub visit: usize,
    /// Infusion duration in slots (≥ 1).
    pub infusion: usize,
    /// Critical patients must receive the infusion on a bed; the
    /// others prefer a chair but accept a bed.
    pub critical: bool,
}

/// A weekly scheduling instance.
///
/// `mcp[r][k][t]` is 1 when room `r` hosts pathology `k` on day `t`
/// (0-indexed storage); each room serves at most one pathology per day.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    /// Number of working days in the planning horizon.
    pub days: usize,
    /// Slots per day (the full opening horizon `H`).
    pub slots_per_day: usize,
    /// Slots in which visits may start (`H_V`, a prefix of the day).
    pub visit_slots: usize,
    /// Pathology group identifiers.
    pub pathologies: Vec<String>,
    /// Number of exam rooms.
    pub rooms: usize,
    /// Number of beds.
    pub beds: usize,
    /// Number of chairs.
    pub chairs: usize,
    /// Room/pathology calendar, `mcp[room][pathology][day]` ∈ {0, 1}.
    pub mcp: Vec<Vec<Vec<u8>>>,
    /// The patients to schedule.
    pub patients: Vec<Patient>,
}

impl Instance {
    /// Index of a pathology name in [`Instance::pathologies`].
    pub fn pathology_index(&self, name: &str) -> Option<usize> {
        self.pathologies.iter().position(|k| k == name)
    }

    /// Pathology index of patient `p` (by position in `patients`).
    pub fn patient_pathology(&self, p: usize) -> Option<usize> {
        self.patients
            .get(p)
            .and_then(|pat| self.pathology_index(&pat.pathology))
    }

    /// Number of rooms hosting pathology `k` on day `t` (1-based day).
    pub fn rooms_open(&self, k: usize, t: usize) -> usize {
        self.mcp
            .iter()
            .filter(|room| room[k][t - 1] == 1)
            .count()
    }

    /// Whether any room hosts pathology `k` on day `t` (1-based day).
    pub fn day_has_room(&self, k: usize, t: usize) -> bool {
        self.rooms_open(k, t) > 0
    }
}

/// A broken instance invariant. Violations are data, not faults: a
/// full audit of an instance returns every violation at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `visit_slots` exceeds `slots_per_day`.
    VisitWindowTooLarge { visit_slots: usize, slots_per_day: usize },
    /// The calendar tensor does not have shape rooms × pathologies × days.
    McpShape { expected: (usize, usize, usize), found: String },
    /// A calendar entry is neither 0 nor 1 (1-based room/day).
    McpEntryNotBinary { room: usize, pathology: usize, day: usize, value: u8 },
    /// A room is assigned more than one pathology on a day (1-based).
    RoomMultiplePathologies { room: usize, day: usize },
    /// Two patients share an identifier.
    DuplicatePatientId { id: String },
    /// A patient references a pathology missing from the instance.
    UnknownPathology { patient: String, pathology: String },
    /// Visit duration is zero or longer than the visit window.
    VisitDurationOutOfRange { patient: String, visit: usize, visit_slots: usize },
    /// Infusion duration is zero.
    InfusionDurationZero { patient: String },
    /// Visit plus infusion can never fit inside one day.
    UnschedulableDurations {
        patient: String,
        visit: usize,
        infusion: usize,
        slots_per_day: usize,
    },
    /// No room ever hosts the patient's pathology during the horizon.
    UnschedulableNoRoom { patient: String, pathology: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VisitWindowTooLarge { visit_slots, slots_per_day } => write!(
                f,
                "visit window ({visit_slots} slots) exceeds the day length ({slots_per_day} slots)"
            ),
            Violation::McpShape { expected, found } => write!(
                f,
                "room calendar must have shape {} rooms × {} pathologies × {} days, found {found}",
                expected.0, expected.1, expected.2
            ),
            Violation::McpEntryNotBinary { room, pathology, day, value } => write!(
                f,
                "room calendar entry for room {room}, pathology {pathology}, day {day} is {value}, expected 0 or 1"
            ),
            Violation::RoomMultiplePathologies { room, day } => write!(
                f,
                "room {room} is assigned more than one pathology on day {day}"
            ),
            Violation::DuplicatePatientId { id } => {
                write!(f, "patient id {id:?} appears more than once")
            }
            Violation::UnknownPathology { patient, pathology } => write!(
                f,
                "patient {patient}: pathology {pathology:?} is not declared by the instance"
            ),
            Violation::VisitDurationOutOfRange { patient, visit, visit_slots } => write!(
                f,
                "patient {patient}: visit duration {visit} is outside 1..={visit_slots}"
            ),
            Violation::InfusionDurationZero { patient } => {
                write!(f, "patient {patient}: infusion duration must be at least 1 slot")
            }
            Violation::UnschedulableDurations { patient, visit, infusion, slots_per_day } => {
                write!(
                    f,
                    "unschedulable patient {patient}: visit ({visit}) plus infusion ({infusion}) \
                     exceeds the day length ({slots_per_day})"
                )
            }
            Violation::UnschedulableNoRoom { patient, pathology } => write!(
                f,
                "unschedulable patient {patient}: no room ever hosts pathology {pathology:?}"
            ),
        }
    }
}

/// Errors raised while loading, saving, or generating instances.
#[derive(Debug, Error)]
pub enum InstanceError {
    /// Filesystem failure while reading or writing an instance file.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// The file is not a syntactically/typewise valid instance; the
    /// position points at the offending token.
    #[error("parse error in {path} at line {line}, column {column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    /// Generator parameters that cannot yield a well-formed instance.
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// Audit every instance invariant and return all violations found.
///
/// An empty result means the instance is well formed: consistent
/// calendar shape, binary single-pathology room assignments, known
/// pathologies, unique patient ids, and durations that let every
/// patient fit inside some day of the horizon.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();

    if inst.visit_slots > inst.slots_per_day {
        out.push(Violation::VisitWindowTooLarge {
            visit_slots: inst.visit_slots,
            slots_per_day: inst.slots_per_day,
        });
    }

    let n_k = inst.pathologies.len();
    let mut shape_ok = inst.mcp.len() == inst.rooms;
    'shape: for room in &inst.mcp {
        if room.len() != n_k {
            shape_ok = false;
            break;
        }
        for row in room {
            if row.len() != inst.days {
                shape_ok = false;
                break 'shape;
            }
        }
    }
    if !shape_ok {
        let found = format!(
            "{} rooms × {} pathologies × {} days",
            inst.mcp.len(),
            inst.mcp.first().map_or(0, |r| r.len()),
            inst.mcp.first().and_then(|r| r.first()).map_or(0, |x| x.len()),
        );
        out.push(Violation::McpShape {
            expected: (inst.rooms, n_k, inst.days),
            found,
        });
        // Per-entry checks below assume the declared shape.
        return out;
    }

    for (r, room) in inst.mcp.iter().enumerate() {
        for t in 0..inst.days {
            let mut assigned = 0usize;
            for (k, row) in room.iter().enumerate() {
                let v = row[t];
                if v > 1 {
                    out.push(Violation::McpEntryNotBinary {
                        room: r + 1,
                        pathology: k + 1,
                        day: t + 1,
                        value: v,
                    });
                } else {
                    assigned += v as usize;
                }
            }
            if assigned > 1 {
                out.push(Violation::RoomMultiplePathologies { room: r + 1, day: t + 1 });
            }
        }
    }

    let mut seen = HashSet::new();
    for pat in &inst.patients {
        if !seen.insert(pat.id.as_str()) {
            out.push(Violation::DuplicatePatientId { id: pat.id.clone() });
        }
    }

    for pat in &inst.patients {
        let k = match inst.pathology_index(&pat.pathology) {
            Some(k) => k,
            None => {
                out.push(Violation::UnknownPathology {
                    patient: pat.id.clone(),
                    pathology: pat.pathology.clone(),
                });
                continue;
            }
        };
        if pat.visit == 0 || pat.visit > inst.visit_slots {
            out.push(Violation::VisitDurationOutOfRange {
                patient: pat.id.clone(),
                visit: pat.visit,
                visit_slots: inst.visit_slots,
            });
        }
        if pat.infusion == 0 {
            out.push(Violation::InfusionDurationZero { patient: pat.id.clone() });
        }
        if pat.visit + pat.infusion > inst.slots_per_day {
            out.push(Violation::UnschedulableDurations {
                patient: pat.id.clone(),
                visit: pat.visit,
                infusion: pat.infusion,
                slots_per_day: inst.slots_per_day,
            });
        }
        let has_room = (1..=inst.days).any(|t| inst.day_has_room(k, t));
        if !has_room {
            out.push(Violation::UnschedulableNoRoom {
                patient: pat.id.clone(),
                pathology: pat.pathology.clone(),
            });
        }
    }

    out
}

/// Per-pathology-group synthesis parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupParams {
    /// Group identifier, becomes the pathology name.
    pub name: String,
    /// Relative share of the patient population (normalised internally).
    pub share: f64,
    /// Visit duration for every patient of the group, in slots.
    pub visit: usize,
    /// Smallest infusion duration, in slots.
    pub infusion_min: usize,
    /// Largest infusion duration, in slots (inclusive).
    pub infusion_max: usize,
}

impl GroupParams {
    fn new(name: &str, share: f64, visit: usize, infusion: (usize, usize)) -> Self {
        GroupParams {
            name: name.to_owned(),
            share,
            visit,
            infusion_min: infusion.0,
            infusion_max: infusion.1,
        }
    }
}

/// Parameters of the synthetic instance generator.
///
/// The defaults reproduce the reference ward: 6 exam rooms of which 3
/// are reserved for the dominant hematology group every day while the
/// rest rotate round-robin over the remaining groups, 27 beds, 26
/// chairs, a 54-slot day whose first 36 slots admit visit starts, a
/// 5-day week, and 614 patients with the observed group mix, visit
/// durations, and a uniform 6–24 slot infusion duration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    /// RNG seed; the generator is a pure function of the whole struct.
    pub seed: u64,
    /// Number of patients to draw.
    pub total_patients: usize,
    /// Probability that a patient is critical (bed-only).
    pub critical_fraction: f64,
    /// Pathology groups with sampling weights and durations.
    pub groups: Vec<GroupParams>,
    /// Number of working days.
    pub days: usize,
    /// Slots per day.
    pub slots_per_day: usize,
    /// Visit-start window length (prefix of the day).
    pub visit_slots: usize,
    /// Number of exam rooms.
    pub rooms: usize,
    /// Number of beds.
    pub beds: usize,
    /// Number of chairs.
    pub chairs: usize,
    /// Rooms pinned to the first group on every day; the remaining
    /// rooms rotate over the other groups (over all groups when 0).
    pub first_group_rooms: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            seed: 0,
            total_patients: 614,
            critical_fraction: 0.2848,
            groups: vec![
                GroupParams::new("HE", 32.31, 2, (6, 24)),
                GroupParams::new("GI", 11.90, 1, (6, 24)),
                GroupParams::new("UR", 6.95, 1, (6, 24)),
                GroupParams::new("GY", 4.09, 1, (6, 24)),
                GroupParams::new("BR", 30.81, 1, (6, 24)),
                GroupParams::new("OT", 14.58, 1, (6, 24)),
                GroupParams::new("LU", 15.69, 1, (6, 24)),
            ],
            days: 5,
            slots_per_day: 54,
            visit_slots: 36,
            rooms: 6,
            beds: 27,
            chairs: 26,
            first_group_rooms: 3,
        }
    }
}

/// Generate a synthetic instance; deterministic for fixed parameters.
///
/// Patients are drawn independently: pathology from the normalised
/// group shares, critical flag as a Bernoulli draw, infusion duration
/// uniform on the group's range. The room calendar pins
/// `first_group_rooms` rooms to the first group daily and rotates the
/// remaining rooms day-major over the other groups, so the weekly
/// calendar is a pure function of the counts.
pub fn generate(params: &GeneratorParams) -> Result<Instance, InstanceError> {
    let invalid = |msg: String| Err(InstanceError::InvalidParams(msg));

    if params.days == 0 {
        return invalid("at least one working day is required".into());
    }
    if params.visit_slots == 0 || params.visit_slots > params.slots_per_day {
        return invalid(format!(
            "visit window must satisfy 1 ≤ visit_slots ≤ slots_per_day, got {} and {}",
            params.visit_slots, params.slots_per_day
        ));
    }
    if params.groups.is_empty() {
        return invalid("at least one pathology group is required".into());
    }
    if params.first_group_rooms > params.rooms {
        return invalid(format!(
            "first_group_rooms ({}) exceeds the room count ({})",
            params.first_group_rooms, params.rooms
        ));
    }
    if !(0.0..=1.0).contains(&params.critical_fraction) {
        return invalid(format!(
            "critical_fraction must lie in [0, 1], got {}",
            params.critical_fraction
        ));
    }
    let mut total_share = 0.0f64;
    for g in &params.groups {
        if !g.share.is_finite() || g.share < 0.0 {
            return invalid(format!("group {}: share must be a finite weight ≥ 0", g.name));
        }
        total_share += g.share;
        if g.visit == 0 || g.visit > params.visit_slots {
            return invalid(format!(
                "group {}: visit duration {} is outside 1..={}",
                g.name, g.visit, params.visit_slots
            ));
        }
        if g.infusion_min == 0 || g.infusion_min > g.infusion_max {
            return invalid(format!(
                "group {}: infusion range [{}, {}] is empty or starts at 0",
                g.name, g.infusion_min, g.infusion_max
            ));
        }
        if g.visit + g.infusion_max > params.slots_per_day {
            return invalid(format!(
                "group {}: visit ({}) plus maximal infusion ({}) exceeds the day ({} slots)",
                g.name, g.visit, g.infusion_max, params.slots_per_day
            ));
        }
    }
    if params.total_patients > 0 && total_share <= 0.0 {
        return invalid("group shares must not all be zero".into());
    }
    let mut names = HashSet::new();
    for g in &params.groups {
        if !names.insert(g.name.as_str()) {
            return invalid(format!("group name {:?} appears more than once", g.name));
        }
    }

    let n_k = params.groups.len();
    let mut mcp = vec![vec![vec![0u8; params.days]; n_k]; params.rooms];
    for room in mcp.iter_mut().take(params.first_group_rooms) {
        for t in 0..params.days {
            room[0][t] = 1;
        }
    }
    // Rooms not pinned to the first group rotate over the remaining
    // groups (or all groups when nothing is pinned), day-major so a
    // group's service days spread across the week.
    let rotation: Vec<usize> = if params.first_group_rooms > 0 && n_k > 1 {
        (1..n_k).collect()
    } else {
        (0..n_k).collect()
    };
    let rotating_rooms = params.rooms - params.first_group_rooms;
    for t in 0..params.days {
        for j in 0..rotating_rooms {
            let k = rotation[(t * rotating_rooms + j) % rotation.len()];
            mcp[params.first_group_rooms + j][k][t] = 1;
        }
    }

    if params.total_patients > 0 {
        for (k, g) in params.groups.iter().enumerate() {
            let served = (0..params.days).any(|t| mcp.iter().any(|room| room[k][t] == 1));
            if g.share > 0.0 && !served {
                return invalid(format!(
                    "group {} has positive share but no room ever hosts it; \
                     adjust rooms, first_group_rooms, or shares",
                    g.name
                ));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let width = params.total_patients.to_string().len().max(1);
    let mut patients = Vec::with_capacity(params.total_patients);
    for i in 0..params.total_patients {
        let mut pick = rng.gen::<f64>() * total_share;
        let mut chosen = n_k - 1;
        for (k, g) in params.groups.iter().enumerate() {
            if pick < g.share {
                chosen = k;
                break;
            }
            pick -= g.share;
        }
        let g = &params.groups[chosen];
        let critical = rng.gen_bool(params.critical_fraction);
        let infusion = rng.gen_range(g.infusion_min..=g.infusion_max);
        patients.push(Patient {
            id: format!("p{:0width$}", i + 1),
            pathology: g.name.clone(),
            visit: g.visit,
            infusion,
            critical,
        });
    }

    Ok(Instance {
        days: params.days,
        slots_per_day: params.slots_per_day,
        visit_slots: params.visit_slots,
        pathologies: params.groups.iter().map(|g| g.name.clone()).collect(),
        rooms: params.rooms,
        beds: params.beds,
        chairs: params.chairs,
        mcp,
        patients,
    })
}

/// Load an instance from its canonical JSON form.
pub fn load(path: &Path) -> Result<Instance, InstanceError> {
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| InstanceError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Save an instance in its canonical JSON form (pretty-printed,
/// stable field order, integers only).
pub fn save(inst: &Instance, path: &Path) -> Result<(), InstanceError> {
    let mut text = serde_json::to_string_pretty(inst).expect("instance serialization is total");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| InstanceError::Io {
        path: path.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two patients, one room/chair/bed, 6-slot day with a 4-slot
    /// visit window — small enough to reason about by hand.
    pub(crate) fn micro() -> Instance {
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

    #[test]
    fn micro_instance_validates_cleanly() {
        assert_eq!(validate_instance(&micro()), Vec::new());
    }

    #[test]
    fn room_with_two_pathologies_is_flagged() {
        let mut inst = micro();
        inst.pathologies.push("K2".into());
        inst.mcp[0].push(vec![1]);
        let violations = validate_instance(&inst);
        assert_eq!(
            violations,
            vec![Violation::RoomMultiplePathologies { room: 1, day: 1 }]
        );
    }

    #[test]
    fn oversized_durations_are_unschedulable() {
        let mut inst = micro();
        inst.patients[0].visit = 2;
        inst.patients[0].infusion = 5;
        let violations = validate_instance(&inst);
        assert_eq!(
            violations,
            vec![Violation::UnschedulableDurations {
                patient: "p1".into(),
                visit: 2,
                infusion: 5,
                slots_per_day: 6,
            }]
        );
    }

    #[test]
    fn patient_without_any_room_is_unschedulable() {
        let mut inst = micro();
        inst.mcp[0][0][0] = 0;
        let violations = validate_instance(&inst);
        assert_eq!(violations.len(), 2);
        assert!(violations
            .iter()
            .all(|v| matches!(v, Violation::UnschedulableNoRoom { .. })));
    }

    #[test]
    fn mcp_shape_mismatch_is_flagged() {
        let mut inst = micro();
        inst.mcp[0][0].clear();
        let violations = validate_instance(&inst);
        assert!(matches!(violations[0], Violation::McpShape { .. }));
    }

    #[test]
    fn duplicate_ids_are_flagged() {
        let mut inst = micro();
        inst.patients[1].id = "p1".into();
        let violations = validate_instance(&inst);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicatePatientId { .. })));
    }

    #[test]
    fn default_generator_matches_reference_ward() {
        let params = GeneratorParams {
            seed: 7,
            ..GeneratorParams::default()
        };
        let inst = generate(&params).unwrap();
        assert_eq!(inst.patients.len(), 614);
        assert_eq!(inst.rooms, 6);
        assert_eq!(inst.beds, 27);
        assert_eq!(inst.chairs, 26);
        assert_eq!(inst.slots_per_day, 54);
        assert_eq!(inst.visit_slots, 36);
        assert_eq!(inst.days, 5);
        assert_eq!(validate_instance(&inst), Vec::new());

        // Expected criticals: 614 × 0.2848 ≈ 175; allow wide
        // multinomial slack so the test is seed-robust.
        let critical = inst.patients.iter().filter(|p| p.critical).count() as f64;
        assert!((critical - 174.9).abs() < 40.0, "critical count {critical}");

        // Hematology keeps 3 rooms every day under the default calendar.
        for t in 1..=inst.days {
            assert_eq!(inst.rooms_open(0, t), 3);
        }
        // Every group is served at least once during the week.
        for k in 0..inst.pathologies.len() {
            assert!((1..=inst.days).any(|t| inst.day_has_room(k, t)));
        }

        // Visit durations follow the group table: HE 2 slots, rest 1.
        for p in &inst.patients {
            let expected = if p.pathology == "HE" { 2 } else { 1 };
            assert_eq!(p.visit, expected, "patient {}", p.id);
            assert!((6..=24).contains(&p.infusion));
        }
    }

    #[test]
    fn generator_is_deterministic_per_seed() {
        let params = GeneratorParams {
            seed: 42,
            ..GeneratorParams::default()
        };
        let a = generate(&params).unwrap();
        let b = generate(&params).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let other = generate(&GeneratorParams {
            seed: 43,
            ..GeneratorParams::default()
        })
        .unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn empty_patient_list_validates_cleanly() {
        let params = GeneratorParams {
            total_patients: 0,
            ..GeneratorParams::default()
        };
        let inst = generate(&params).unwrap();
        assert!(inst.patients.is_empty());
        assert_eq!(validate_instance(&inst), Vec::new());
    }

    #[test]
    fn group_mix_tracks_requested_shares() {
        // Desk-scale χ² sanity check on the multinomial sampler.
        let params = GeneratorParams {
            seed: 1,
            total_patients: 10_000,
            ..GeneratorParams::default()
        };
        let inst = generate(&params).unwrap();
        let total_share: f64 = params.groups.iter().map(|g| g.share).sum();
        let mut chi2 = 0.0;
        for g in &params.groups {
            let expected = 10_000.0 * g.share / total_share;
            let observed = inst
                .patients
                .iter()
                .filter(|p| p.pathology == g.name)
                .count() as f64;
            chi2 += (observed - expected).powi(2) / expected;
        }
        // 6 degrees of freedom; the 0.1% critical value is ≈ 22.5.
        assert!(chi2 < 22.5, "chi-square statistic {chi2}");
    }

    #[test]
    fn starved_group_params_are_rejected() {
        let params = GeneratorParams {
            rooms: 1,
            first_group_rooms: 1,
            ..GeneratorParams::default()
        };
        let err = generate(&params).unwrap_err();
        assert!(matches!(err, InstanceError::InvalidParams(_)), "{err}");
    }

    #[test]
    fn zero_pinned_rooms_rotate_over_all_groups() {
        let params = GeneratorParams {
            rooms: 1,
            first_group_rooms: 0,
            days: 7,
            ..GeneratorParams::default()
        };
        let inst = generate(&params).unwrap();
        // 7 rotation slots over 7 groups: each served exactly once.
        for k in 0..inst.pathologies.len() {
            let served: usize = (1..=inst.days).map(|t| inst.rooms_open(k, t)).sum();
            assert_eq!(served, 1);
        }
    }

    #[test]
    fn save_load_round_trip_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("micro.json");
        let inst = micro();
        save(&inst, &path).unwrap();
        let loaded = load(&path).unwrap();
        assert_eq!(inst, loaded);
    }

    #[test]
    fn truncated_file_reports_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.json");
        let full = serde_json::to_string(&micro()).unwrap();
        std::fs::write(&path, &full[..full.len() / 2]).unwrap();
        match load(&path) {
            Err(InstanceError::Parse { line, column, .. }) => {
                assert!(line >= 1 && column >= 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn negative_duration_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("neg.json");
        let text = serde_json::to_string(&micro())
            .unwrap()
            .replace("\"infusion\":2", "\"infusion\":-2");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(load(&path), Err(InstanceError::Parse { .. })));
    }
}
