//! Weekly scheduling engine for chemotherapy wards with linked
//! visit/infusion appointments.
//!
//! The crate is organised around a lexicographic optimisation pipeline:
//!
//! 1. maximise the number of patients treated during the week,
//! 2. minimise the sum over days of the largest visit→infusion wait,
//! 3. maximise the number of infusions hosted on chairs rather than beds.
//!
//! Modules:
//!
//! * [`instance`] — problem data: patients, resources, room/pathology
//!   calendars, plus a deterministic synthetic generator.
//! * [`model`] — integer linear models for the complete and aggregate
//!   formulations, day restrictions, and neighbourhood searches.
//! * [`solver`] — backends that optimise a model: an exact in-process
//!   branch-and-bound, an external MPS-based solver bridge, and an
//!   exhaustive reference oracle for tiny instances.
//! * [`disaggregate`] — turns aggregate start times into concrete
//!   room/chair/bed assignments by slot-sweep algorithms.
//! * [`lexico`] — the staged pipeline with day decomposition, warm
//!   starts, and a k-opt improvement search.
//! * [`bounds`] — combinatorial upper bounds on the chair objective.
//! * [`report`] — schedule metrics, feasibility audits, and exports.

pub mod bounds;
pub mod disaggregate;
pub mod instance;
pub mod lexico;
pub mod model;
pub mod report;
pub mod solver;

pub use bounds::{
    compute_empty_slot_profile, trivial_bound, ub1, ub1_limited, ub1_model, ub2, ub2_limited,
    ub2_model, BoundError, BoundMethod, BoundResult, BoundStatus, EmptySlotProfile, ProfileSide,
};
pub use disaggregate::{
    assign_beds, assign_chairs, assign_rooms, collapse, disaggregate, AggregateSchedule,
    Appointment, CompleteSchedule, DisaggregateError, InfusionClass, PatientStart, Resource,
};
pub use lexico::{
    kopt_search, procedure1, procedure2, procedure2_extended, stage1, KOptParams, LexicoError,
    LexicoOutcome, Procedure1Result, Stage1Result, StageLimits, StageLog,
};
pub use instance::{
    generate, load, save, validate_instance, GeneratorParams, GroupParams, Instance,
    InstanceError, Patient, Violation,
};
pub use model::{
    add_kopt_constraints, aggregate_from_assignment, assignment_from_aggregate,
    assignment_from_complete, build_af1, build_af2, build_af3, build_f1_complete,
    build_single_day, Constraint, DayObjective, KOptRadii, MilpModel, Rel, Sense, VarKey, VarKind,
    VarMap,
};
pub use report::{
    emit, evaluate, parse_schedule_json, validate_schedule, EmitFormat, GroupShare,
    MetricsRecord, ReportError, ScheduleViolation,
};
pub use solver::{
    brute_force_lexico, check_assignment, read_solution, solve, write_model, Backend,
    LexicoOptimum, SolveOptions, SolveResult, SolveStatus, SolverError,
};
