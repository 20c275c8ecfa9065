//! Integer linear models of the scheduling problem.
//!
//! Two families of formulations are built here:
//!
//! * the **complete** formulation over room/bed/chair-indexed start
//!   variables (`alpha`, `beta`, `gB`, `gS`), used for exports and as
//!   the ground truth that the validator mirrors;
//! * the **aggregate** formulation over resource-anonymous start
//!   variables (`x`, `y`, `zB`, `zS`) plus per-day integer auxiliaries
//!   `W_t` that linearise the daily maximum wait. Aggregate optima
//!   disaggregate losslessly (module [`crate::disaggregate`]), which
//!   is what makes the week-scale models tractable.
//!
//! Builders only materialise variables that could ever be 1: a visit
//! start needs a room serving the patient's pathology that day and
//! enough window left to finish the visit; an infusion start needs
//! enough day left to finish the infusion. All data is integral.

use std::collections::{BTreeMap, BTreeSet};

use crate::disaggregate::{AggregateSchedule, CompleteSchedule, InfusionClass, PatientStart, Resource};
use crate::instance::Instance;

/// Variable domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// 0/1 variable.
    Binary,
    /// Nonnegative integer variable.
    IntNonNeg,
}

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Row relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

/// One linear row: `Σ coef·var  rel  rhs`, all integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Sparse terms, strictly increasing var ids, no zero coefficients.
    pub terms: Vec<(u32, i64)>,
    pub rel: Rel,
    pub rhs: i64,
}

/// A solver-neutral integer linear model.
#[derive(Debug, Clone, Default)]
pub struct MilpModel {
    /// Variable names by id; unique, stable, parseable.
    pub names: Vec<String>,
    /// Variable domains by id.
    pub kinds: Vec<VarKind>,
    /// Objective direction (defaults to Maximize for empty models).
    pub sense: Sense,
    /// Sparse objective, strictly increasing var ids.
    pub objective: Vec<(u32, i64)>,
    /// All rows.
    pub constraints: Vec<Constraint>,
    /// Optional incumbent seed: var id → value; absent ids are 0.
    pub warm_start: Option<BTreeMap<u32, i64>>,
}

impl Default for Sense {
    fn default() -> Self {
        Sense::Maximize
    }
}

impl MilpModel {
    /// Number of variables.
    pub fn num_vars(&self) -> usize {
        self.names.len()
    }
}

/// Structured identity of a model variable.
///
/// Patients `p`, rooms `r`, beds `b`, and chairs `s` are 0-based
/// instance indices; days `t` and slots `h` are 1-based; `i` is an
/// unused-slot level and may be 0. Rendered names are fully 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarKey {
    /// Aggregate visit start.
    X { p: usize, t: usize, h: usize },
    /// Aggregate bed infusion start of a critical patient.
    Y { p: usize, t: usize, h: usize },
    /// Aggregate bed infusion start of a non-critical patient.
    ZBed { p: usize, t: usize, h: usize },
    /// Aggregate chair infusion start of a non-critical patient.
    ZChair { p: usize, t: usize, h: usize },
    /// Daily maximum-wait auxiliary.
    W { t: usize },
    /// Complete visit start in room `r`.
    Alpha { p: usize, t: usize, h: usize, r: usize },
    /// Complete bed infusion start of a critical patient.
    Beta { p: usize, t: usize, h: usize, b: usize },
    /// Complete bed infusion start of a non-critical patient.
    GammaBed { p: usize, t: usize, h: usize, b: usize },
    /// Complete chair infusion start of a non-critical patient.
    GammaChair { p: usize, t: usize, h: usize, s: usize },
    /// Knapsack assignment patient → chair (first chair bound).
    MuKnap { p: usize, s: usize },
    /// Day-assignment of a critical patient to a bed (second bound).
    Lambda { p: usize, t: usize, b: usize },
    /// Day-assignment of a non-critical patient to a bed.
    MuBed { p: usize, t: usize, b: usize },
    /// Day-assignment of a non-critical patient to a chair.
    MuChair { p: usize, t: usize, s: usize },
    /// Bed `b` idles exactly the last `i` slots of day `t`.
    RhoBed { i: usize, t: usize, b: usize },
    /// Chair `s` idles exactly the last `i` slots of day `t`.
    RhoChair { i: usize, t: usize, s: usize },
}

impl VarKey {
    /// Stable textual name (`x_p_t_h`, `alpha_p_t_h_r`, ... with all
    /// indices 1-based).
    pub fn name(&self) -> String {
        use VarKey::*;
        match *self {
            X { p, t, h } => format!("x_{}_{}_{}", p + 1, t, h),
            Y { p, t, h } => format!("y_{}_{}_{}", p + 1, t, h),
            ZBed { p, t, h } => format!("zB_{}_{}_{}", p + 1, t, h),
            ZChair { p, t, h } => format!("zS_{}_{}_{}", p + 1, t, h),
            W { t } => format!("W_{t}"),
            Alpha { p, t, h, r } => format!("alpha_{}_{}_{}_{}", p + 1, t, h, r + 1),
            Beta { p, t, h, b } => format!("beta_{}_{}_{}_{}", p + 1, t, h, b + 1),
            GammaBed { p, t, h, b } => format!("gB_{}_{}_{}_{}", p + 1, t, h, b + 1),
            GammaChair { p, t, h, s } => format!("gS_{}_{}_{}_{}", p + 1, t, h, s + 1),
            MuKnap { p, s } => format!("mu_{}_{}", p + 1, s + 1),
            Lambda { p, t, b } => format!("lam_{}_{}_{}", p + 1, t, b + 1),
            MuBed { p, t, b } => format!("muB_{}_{}_{}", p + 1, t, b + 1),
            MuChair { p, t, s } => format!("muS_{}_{}_{}", p + 1, t, s + 1),
            RhoBed { i, t, b } => format!("rhoB_{}_{}_{}", i, t, b + 1),
            RhoChair { i, t, s } => format!("rhoS_{}_{}_{}", i, t, s + 1),
        }
    }
}

/// Bidirectional map between structured keys and dense var ids.
#[derive(Debug, Clone, Default)]
pub struct VarMap {
    forward: BTreeMap<VarKey, u32>,
    reverse: Vec<VarKey>,
}

impl VarMap {
    /// Id of a materialised key, if any.
    pub fn id(&self, key: &VarKey) -> Option<u32> {
        self.forward.get(key).copied()
    }

    /// Key of an id (ids are dense, 0-based).
    pub fn key(&self, id: u32) -> VarKey {
        self.reverse[id as usize]
    }

    /// Number of materialised variables.
    pub fn len(&self) -> usize {
        self.reverse.len()
    }

    /// True when no variable is materialised.
    pub fn is_empty(&self) -> bool {
        self.reverse.is_empty()
    }

    /// Iterate `(key, id)` pairs in id order.
    pub fn iter(&self) -> impl Iterator<Item = (VarKey, u32)> + '_ {
        self.reverse.iter().enumerate().map(|(i, k)| (*k, i as u32))
    }
}

/// Incremental model construction.
pub(crate) struct Build {
    pub(crate) model: MilpModel,
    pub(crate) map: VarMap,
}

impl Build {
    pub(crate) fn new(sense: Sense) -> Self {
        Build {
            model: MilpModel { sense, ..MilpModel::default() },
            map: VarMap::default(),
        }
    }

    pub(crate) fn add_var(&mut self, key: VarKey, kind: VarKind) -> u32 {
        debug_assert!(self.map.id(&key).is_none(), "duplicate variable {key:?}");
        let id = self.map.reverse.len() as u32;
        self.map.forward.insert(key, id);
        self.map.reverse.push(key);
        self.model.names.push(key.name());
        self.model.kinds.push(kind);
        id
    }

    /// Push a row, coalescing duplicate terms and skipping rows that
    /// hold trivially (no terms and satisfied at zero). Rows with no
    /// terms that are *violated* are kept so solvers report
    /// infeasibility instead of silently dropping the contradiction.
    pub(crate) fn row(&mut self, terms: impl IntoIterator<Item = (u32, i64)>, rel: Rel, rhs: i64) {
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        for (v, c) in terms {
            if c != 0 {
                *acc.entry(v).or_insert(0) += c;
            }
        }
        acc.retain(|_, c| *c != 0);
        if acc.is_empty() {
            let holds = match rel {
                Rel::Le => 0 <= rhs,
                Rel::Eq => 0 == rhs,
                Rel::Ge => 0 >= rhs,
            };
            if holds {
                return;
            }
        }
        self.model.constraints.push(Constraint {
            terms: acc.into_iter().collect(),
            rel,
            rhs,
        });
    }

    pub(crate) fn objective(&mut self, terms: impl IntoIterator<Item = (u32, i64)>) {
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        for (v, c) in terms {
            if c != 0 {
                *acc.entry(v).or_insert(0) += c;
            }
        }
        self.model.objective = acc.into_iter().collect();
    }

    pub(crate) fn finish(self) -> (MilpModel, VarMap) {
        (self.model, self.map)
    }
}

/// Legal visit starts for patient `p` on day `t`: the pathology has a
/// room that day and the visit finishes inside the visit window.
fn visit_starts(inst: &Instance, p: usize, t: usize) -> impl Iterator<Item = usize> {
    let k = inst.patient_pathology(p).expect("validated instance");
    let open = inst.day_has_room(k, t);
    let v = inst.patients[p].visit;
    let hi = if open && v <= inst.visit_slots {
        inst.visit_slots - v + 1
    } else {
        0
    };
    1..=hi
}

/// Legal infusion starts for patient `p`: the infusion finishes
/// inside the day. (No room condition: the visit variables carry it.)
fn infusion_starts(inst: &Instance, p: usize) -> impl Iterator<Item = usize> {
    let f = inst.patients[p].infusion;
    let hi = if f <= inst.slots_per_day {
        inst.slots_per_day - f + 1
    } else {
        0
    };
    1..=hi
}

/// Starts `q` whose appointment of duration `dur` would cover slot
/// `h`: `max(1, h+1−dur) ..= h`, clipped to the legal start range.
fn covering_starts(h: usize, dur: usize, max_start: usize) -> impl Iterator<Item = usize> {
    let lo = (h + 1).saturating_sub(dur).max(1);
    lo..=h.min(max_start)
}

/// Aggregate variable scope: which days and patients to materialise.
struct Scope {
    /// 1-based days.
    days: Vec<usize>,
    /// 0-based patient indices.
    patients: Vec<usize>,
}

impl Scope {
    fn full(inst: &Instance) -> Self {
        Scope {
            days: (1..=inst.days).collect(),
            patients: (0..inst.patients.len()).collect(),
        }
    }
}

/// Materialise the aggregate variables and core rows shared by every
/// aggregate formulation: one visit per patient, per-slot room
/// capacity by pathology, same-day visit↔infusion links, precedence,
/// and chair/bed capacities.
fn aggregate_core(inst: &Instance, scope: &Scope) -> Build {
    let mut b = Build::new(Sense::Maximize);

    for &p in &scope.patients {
        for &t in &scope.days {
            for h in visit_starts(inst, p, t) {
                b.add_var(VarKey::X { p, t, h }, VarKind::Binary);
            }
            let critical = inst.patients[p].critical;
            for h in infusion_starts(inst, p) {
                if critical {
                    b.add_var(VarKey::Y { p, t, h }, VarKind::Binary);
                } else {
                    b.add_var(VarKey::ZBed { p, t, h }, VarKind::Binary);
                    b.add_var(VarKey::ZChair { p, t, h }, VarKind::Binary);
                }
            }
        }
    }

    // At most one visit per patient across the horizon.
    for &p in &scope.patients {
        let terms: Vec<_> = scope
            .days
            .iter()
            .flat_map(|&t| visit_starts(inst, p, t).map(move |h| (t, h)))
            .filter_map(|(t, h)| b.map.id(&VarKey::X { p, t, h }))
            .map(|id| (id, 1))
            .collect();
        b.row(terms, Rel::Le, 1);
    }

    // Room capacity: per (day, slot in the visit window, pathology),
    // the visits in progress fit into the rooms open for it.
    for &t in &scope.days {
        for h in 1..=inst.visit_slots {
            for k in 0..inst.pathologies.len() {
                let mut terms = Vec::new();
                for &p in &scope.patients {
                    if inst.patient_pathology(p) != Some(k) {
                        continue;
                    }
                    let v = inst.patients[p].visit;
                    let max_start = if v <= inst.visit_slots { inst.visit_slots - v + 1 } else { 0 };
                    for q in covering_starts(h, v, max_start) {
                        if let Some(id) = b.map.id(&VarKey::X { p, t, h: q }) {
                            terms.push((id, 1));
                        }
                    }
                }
                b.row(terms, Rel::Le, inst.rooms_open(k, t) as i64);
            }
        }
    }

    // Same-day link and precedence per (patient, day).
    for &p in &scope.patients {
        let pat = &inst.patients[p];
        for &t in &scope.days {
            let xs: Vec<(u32, usize)> = visit_starts(inst, p, t)
                .filter_map(|h| b.map.id(&VarKey::X { p, t, h }).map(|id| (id, h)))
                .collect();
            let infusions: Vec<(u32, usize)> = infusion_starts(inst, p)
                .flat_map(|h| {
                    if pat.critical {
                        vec![(VarKey::Y { p, t, h }, h)]
                    } else {
                        vec![(VarKey::ZBed { p, t, h }, h), (VarKey::ZChair { p, t, h }, h)]
                    }
                })
                .filter_map(|(key, h)| b.map.id(&key).map(|id| (id, h)))
                .collect();
            // Link: visiting on day t ⇔ infusing on day t.
            let link = xs
                .iter()
                .map(|&(id, _)| (id, 1))
                .chain(infusions.iter().map(|&(id, _)| (id, -1)));
            b.row(link, Rel::Eq, 0);
            // Precedence: infusion starts no earlier than visit end.
            let prec = xs
                .iter()
                .map(|&(id, h)| (id, (h + pat.visit) as i64))
                .chain(infusions.iter().map(|&(id, h)| (id, -(h as i64))));
            b.row(prec, Rel::Le, 0);
        }
    }

    // Chair and bed capacity per (day, slot).
    for &t in &scope.days {
        for h in 1..=inst.slots_per_day {
            let mut chair_terms = Vec::new();
            let mut bed_terms = Vec::new();
            for &p in &scope.patients {
                let pat = &inst.patients[p];
                let f = pat.infusion;
                let max_start = if f <= inst.slots_per_day { inst.slots_per_day - f + 1 } else { 0 };
                for q in covering_starts(h, f, max_start) {
                    if pat.critical {
                        if let Some(id) = b.map.id(&VarKey::Y { p, t, h: q }) {
                            bed_terms.push((id, 1));
                        }
                    } else {
                        if let Some(id) = b.map.id(&VarKey::ZBed { p, t, h: q }) {
                            bed_terms.push((id, 1));
                        }
                        if let Some(id) = b.map.id(&VarKey::ZChair { p, t, h: q }) {
                            chair_terms.push((id, 1));
                        }
                    }
                }
            }
            b.row(chair_terms, Rel::Le, inst.chairs as i64);
            b.row(bed_terms, Rel::Le, inst.beds as i64);
        }
    }

    b
}

/// Terms of the treated-patient count `F1 = Σ x`.
fn f1_terms(b: &Build) -> Vec<(u32, i64)> {
    b.map
        .iter()
        .filter_map(|(key, id)| matches!(key, VarKey::X { .. }).then_some((id, 1)))
        .collect()
}

/// Per-(patient, day) signed wait expression: `Σ_h h·(infusion
/// starts) − Σ_h (h+v_p)·(visit starts)`. Equals the patient's wait
/// when treated that day, 0 otherwise.
fn wait_terms(inst: &Instance, b: &Build, p: usize, t: usize) -> Vec<(u32, i64)> {
    let pat = &inst.patients[p];
    let mut terms = Vec::new();
    for h in infusion_starts(inst, p) {
        let keys = if pat.critical {
            vec![VarKey::Y { p, t, h }]
        } else {
            vec![VarKey::ZBed { p, t, h }, VarKey::ZChair { p, t, h }]
        };
        for key in keys {
            if let Some(id) = b.map.id(&key) {
                terms.push((id, h as i64));
            }
        }
    }
    for h in visit_starts(inst, p, t) {
        if let Some(id) = b.map.id(&VarKey::X { p, t, h }) {
            terms.push((id, -((h + pat.visit) as i64)));
        }
    }
    terms
}

/// Build the aggregate week model maximising the number of treated
/// patients.
pub fn build_af1(inst: &Instance) -> (MilpModel, VarMap) {
    let mut b = aggregate_core(inst, &Scope::full(inst));
    let obj = f1_terms(&b);
    b.objective(obj);
    b.model.sense = Sense::Maximize;
    b.finish()
}

/// Build the aggregate wait-minimisation model: all core rows, the
/// treated-count floor `F1 ≥ v1`, and one integer `W_t` per day that
/// dominates every patient's wait; objective `min Σ_t W_t`.
pub fn build_af2(inst: &Instance, v1: usize) -> (MilpModel, VarMap) {
    let mut b = aggregate_core(inst, &Scope::full(inst));
    b.model.sense = Sense::Minimize;
    let f1 = f1_terms(&b);
    b.row(f1, Rel::Ge, v1 as i64);
    let mut obj = Vec::new();
    for t in 1..=inst.days {
        let w = b.add_var(VarKey::W { t }, VarKind::IntNonNeg);
        obj.push((w, 1));
        // A wait can never exceed the day, which also gives the
        // integer a finite domain.
        b.row([(w, 1)], Rel::Le, inst.slots_per_day as i64);
        for p in 0..inst.patients.len() {
            let mut terms = wait_terms(inst, &b, p, t);
            if terms.is_empty() {
                continue;
            }
            terms.push((w, -1));
            b.row(terms, Rel::Le, 0);
        }
    }
    b.objective(obj);
    b.finish()
}

/// Build the aggregate chair-maximisation model: all core rows, the
/// treated-count floor `F1 ≥ v1`, per-(patient, day) wait caps
/// `wait ≤ v2[t-1]`, and objective `max Σ zChair`.
pub fn build_af3(inst: &Instance, v1: usize, v2: &[usize]) -> (MilpModel, VarMap) {
    assert_eq!(v2.len(), inst.days, "one wait cap per day");
    let mut b = aggregate_core(inst, &Scope::full(inst));
    b.model.sense = Sense::Maximize;
    let f1 = f1_terms(&b);
    b.row(f1, Rel::Ge, v1 as i64);
    for t in 1..=inst.days {
        for p in 0..inst.patients.len() {
            let terms = wait_terms(inst, &b, p, t);
            b.row(terms, Rel::Le, v2[t - 1] as i64);
        }
    }
    let obj: Vec<_> = b
        .map
        .iter()
        .filter_map(|(key, id)| matches!(key, VarKey::ZChair { .. }).then_some((id, 1)))
        .collect();
    b.objective(obj);
    b.finish()
}

/// Objective of a one-day restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DayObjective {
    /// Minimise the day's maximum wait, treating the whole roster.
    MinWait,
    /// Maximise chair infusions under a wait cap, treating the roster.
    MaxChairs {
        /// The day's wait cap in slots.
        wait_cap: usize,
    },
}

/// Build a one-day restriction over a fixed roster of patients.
///
/// Variables are limited to the roster and the single day; the roster
/// must be treatable that day (each patient's pathology has a room).
/// Both objectives keep the full roster treated (`F1 ≥ |roster|`).
pub fn build_single_day(
    inst: &Instance,
    day: usize,
    roster: &BTreeSet<usize>,
    objective: DayObjective,
) -> (MilpModel, VarMap) {
    let scope = Scope {
        days: vec![day],
        patients: roster.iter().copied().collect(),
    };
    let mut b = aggregate_core(inst, &scope);
    let f1 = f1_terms(&b);
    b.row(f1, Rel::Ge, roster.len() as i64);
    match objective {
        DayObjective::MinWait => {
            b.model.sense = Sense::Minimize;
            let w = b.add_var(VarKey::W { t: day }, VarKind::IntNonNeg);
            b.row([(w, 1)], Rel::Le, inst.slots_per_day as i64);
            for &p in roster {
                let mut terms = wait_terms(inst, &b, p, day);
                if terms.is_empty() {
                    continue;
                }
                terms.push((w, -1));
                b.row(terms, Rel::Le, 0);
            }
            b.objective([(w, 1)]);
        }
        DayObjective::MaxChairs { wait_cap } => {
            b.model.sense = Sense::Maximize;
            for &p in roster {
                let terms = wait_terms(inst, &b, p, day);
                b.row(terms, Rel::Le, wait_cap as i64);
            }
            let obj: Vec<_> = b
                .map
                .iter()
                .filter_map(|(key, id)| matches!(key, VarKey::ZChair { .. }).then_some((id, 1)))
                .collect();
            b.objective(obj);
        }
    }
    b.finish()
}

/// Per-family flip budgets of a k-opt neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KOptRadii {
    /// Budget for visit starts `x`.
    pub k_x: usize,
    /// Budget for critical bed starts `y`.
    pub k_y: usize,
    /// Budget for non-critical bed starts `zB`.
    pub k_z_bed: usize,
    /// Budget for chair starts `zS`.
    pub k_z_chair: usize,
}

impl KOptRadii {
    /// Uniform budget across all four families.
    pub fn uniform(k: usize) -> Self {
        KOptRadii { k_x: k, k_y: k, k_z_bed: k, k_z_chair: k }
    }
}

/// Append the four Hamming-ball rows around `current` to an aggregate
/// model: per variable family, the number of flipped variables is at
/// most the family's budget. With `Σ_{cur=1}(1−v) + Σ_{cur=0}v ≤ k`
/// rewritten linearly, the row is `Σ_{cur=0}v − Σ_{cur=1}v ≤ k − n1`.
///
/// `current` must be feasible for the model's base constraints, so
/// every variable it sets is materialised.
pub fn add_kopt_constraints(
    model: &mut MilpModel,
    map: &VarMap,
    inst: &Instance,
    current: &AggregateSchedule,
    radii: &KOptRadii,
) {
    let mut ones: BTreeSet<VarKey> = BTreeSet::new();
    for (p, start) in current.starts.iter().enumerate() {
        let Some(s) = start else { continue };
        ones.insert(VarKey::X { p, t: s.day, h: s.visit_start });
        let infusion = match s.class {
            InfusionClass::Bed if inst.patients[p].critical => {
                VarKey::Y { p, t: s.day, h: s.infusion_start }
            }
            InfusionClass::Bed => VarKey::ZBed { p, t: s.day, h: s.infusion_start },
            InfusionClass::Chair => VarKey::ZChair { p, t: s.day, h: s.infusion_start },
        };
        ones.insert(infusion);
    }

    let mut family_row = |keep: &dyn Fn(&VarKey) -> bool, budget: usize| {
        let mut terms = Vec::new();
        let mut n1 = 0i64;
        for (key, id) in map.iter() {
            if !keep(&key) {
                continue;
            }
            if ones.contains(&key) {
                debug_assert!(
                    map.id(&key).is_some(),
                    "incumbent sets a variable the model does not materialise"
                );
                terms.push((id, -1));
                n1 += 1;
            } else {
                terms.push((id, 1));
            }
        }
        model.constraints.push(Constraint {
            terms,
            rel: Rel::Le,
            rhs: budget as i64 - n1,
        });
    };
    family_row(&|k| matches!(k, VarKey::X { .. }), radii.k_x);
    family_row(&|k| matches!(k, VarKey::Y { .. }), radii.k_y);
    family_row(&|k| matches!(k, VarKey::ZBed { .. }), radii.k_z_bed);
    family_row(&|k| matches!(k, VarKey::ZChair { .. }), radii.k_z_chair);
}

/// Build the complete week model over room/seat-indexed variables,
/// maximising the number of treated patients. Constraint families:
/// one visit per patient; per-(day, slot, room) visit exclusivity;
/// same-day visit↔infusion links; precedence; per-(day, slot, chair)
/// and per-(day, slot, bed) infusion exclusivity.
pub fn build_f1_complete(inst: &Instance) -> (MilpModel, VarMap) {
    let mut b = Build::new(Sense::Maximize);
    let n = inst.patients.len();

    for p in 0..n {
        let k = inst.patient_pathology(p).expect("validated instance");
        let pat = &inst.patients[p];
        for t in 1..=inst.days {
            for r in 0..inst.rooms {
                if inst.mcp[r][k][t - 1] != 1 {
                    continue;
                }
                for h in 1..=(inst.visit_slots + 1).saturating_sub(pat.visit) {
                    b.add_var(VarKey::Alpha { p, t, h, r }, VarKind::Binary);
                }
            }
            for h in infusion_starts(inst, p) {
                if pat.critical {
                    for bed in 0..inst.beds {
                        b.add_var(VarKey::Beta { p, t, h, b: bed }, VarKind::Binary);
                    }
                } else {
                    for bed in 0..inst.beds {
                        b.add_var(VarKey::GammaBed { p, t, h, b: bed }, VarKind::Binary);
                    }
                    for s in 0..inst.chairs {
                        b.add_var(VarKey::GammaChair { p, t, h, s }, VarKind::Binary);
                    }
                }
            }
        }
    }

    // One visit per patient.
    for p in 0..n {
        let terms: Vec<_> = b
            .map
            .iter()
            .filter_map(|(key, id)| match key {
                VarKey::Alpha { p: q, .. } if q == p => Some((id, 1)),
                _ => None,
            })
            .collect();
        b.row(terms, Rel::Le, 1);
    }

    // Room exclusivity per (day, slot, room).
    for t in 1..=inst.days {
        for h in 1..=inst.visit_slots {
            for r in 0..inst.rooms {
                let mut terms = Vec::new();
                for p in 0..n {
                    let v = inst.patients[p].visit;
                    let max_start = (inst.visit_slots + 1).saturating_sub(v);
                    for q in covering_starts(h, v, max_start) {
                        if let Some(id) = b.map.id(&VarKey::Alpha { p, t, h: q, r }) {
                            terms.push((id, 1));
                        }
                    }
                }
                b.row(terms, Rel::Le, 1);
            }
        }
    }

    // Links and precedence per (patient, day).
    for p in 0..n {
        let pat = &inst.patients[p];
        for t in 1..=inst.days {
            let alphas: Vec<(u32, usize)> = b
                .map
                .iter()
                .filter_map(|(key, id)| match key {
                    VarKey::Alpha { p: q, t: tt, h, .. } if q == p && tt == t => Some((id, h)),
                    _ => None,
                })
                .collect();
            let infusions: Vec<(u32, usize)> = b
                .map
                .iter()
                .filter_map(|(key, id)| match key {
                    VarKey::Beta { p: q, t: tt, h, .. }
                    | VarKey::GammaBed { p: q, t: tt, h, .. }
                    | VarKey::GammaChair { p: q, t: tt, h, .. }
                        if q == p && tt == t =>
                    {
                        Some((id, h))
                    }
                    _ => None,
                })
                .collect();
            let link = alphas
                .iter()
                .map(|&(id, _)| (id, 1))
                .chain(infusions.iter().map(|&(id, _)| (id, -1)));
            b.row(link, Rel::Eq, 0);
            let prec = alphas
                .iter()
                .map(|&(id, h)| (id, (h + pat.visit) as i64))
                .chain(infusions.iter().map(|&(id, h)| (id, -(h as i64))));
            b.row(prec, Rel::Le, 0);
        }
    }

    // Chair exclusivity per (day, slot, chair) and bed exclusivity
    // per (day, slot, bed); beds host both betas and bed-gammas.
    for t in 1..=inst.days {
        for h in 1..=inst.slots_per_day {
            for s in 0..inst.chairs {
                let mut terms = Vec::new();
                for p in 0..n {
                    let f = inst.patients[p].infusion;
                    let max_start = (inst.slots_per_day + 1).saturating_sub(f);
                    for q in covering_starts(h, f, max_start) {
                        if let Some(id) = b.map.id(&VarKey::GammaChair { p, t, h: q, s }) {
                            terms.push((id, 1));
                        }
                    }
                }
                b.row(terms, Rel::Le, 1);
            }
            for bed in 0..inst.beds {
                let mut terms = Vec::new();
                for p in 0..n {
                    let f = inst.patients[p].infusion;
                    let max_start = (inst.slots_per_day + 1).saturating_sub(f);
                    for q in covering_starts(h, f, max_start) {
                        if let Some(id) = b.map.id(&VarKey::Beta { p, t, h: q, b: bed }) {
                            terms.push((id, 1));
                        }
                        if let Some(id) = b.map.id(&VarKey::GammaBed { p, t, h: q, b: bed }) {
                            terms.push((id, 1));
                        }
                    }
                }
                b.row(terms, Rel::Le, 1);
            }
        }
    }

    let obj: Vec<_> = b
        .map
        .iter()
        .filter_map(|(key, id)| matches!(key, VarKey::Alpha { .. }).then_some((id, 1)))
        .collect();
    b.objective(obj);
    b.finish()
}

/// Read an aggregate solution out of a solver assignment (absent
/// variables are 0). The assignment must satisfy the model rows; in
/// particular every treated patient has exactly one visit start and
/// one same-day infusion start.
pub fn aggregate_from_assignment(
    map: &VarMap,
    inst: &Instance,
    assignment: &BTreeMap<u32, i64>,
) -> AggregateSchedule {
    let mut agg = AggregateSchedule::empty(inst.patients.len());
    let mut infusion: BTreeMap<usize, (usize, usize, InfusionClass)> = BTreeMap::new();
    for (key, id) in map.iter() {
        if assignment.get(&id).copied().unwrap_or(0) != 1 {
            continue;
        }
        match key {
            VarKey::Y { p, t, h } | VarKey::ZBed { p, t, h } => {
                infusion.insert(p, (t, h, InfusionClass::Bed));
            }
            VarKey::ZChair { p, t, h } => {
                infusion.insert(p, (t, h, InfusionClass::Chair));
            }
            _ => {}
        }
    }
    for (key, id) in map.iter() {
        if assignment.get(&id).copied().unwrap_or(0) != 1 {
            continue;
        }
        if let VarKey::X { p, t, h } = key {
            let (ti, hi, class) = *infusion
                .get(&p)
                .expect("feasible assignment links every visit to an infusion");
            debug_assert_eq!(t, ti, "same-day link");
            agg.starts[p] = Some(PatientStart {
                day: t,
                visit_start: h,
                infusion_start: hi,
                class,
            });
        }
    }
    agg
}

/// Express an aggregate solution as a warm start / replay assignment
/// for a model over `map`: chosen binaries at 1, and any `W_t`
/// present set to the day's realised maximum wait.
pub fn assignment_from_aggregate(
    map: &VarMap,
    inst: &Instance,
    agg: &AggregateSchedule,
) -> BTreeMap<u32, i64> {
    let mut a = BTreeMap::new();
    let mut day_wait: BTreeMap<usize, i64> = BTreeMap::new();
    for (p, start) in agg.starts.iter().enumerate() {
        let Some(s) = start else { continue };
        let pat = &inst.patients[p];
        let x = map
            .id(&VarKey::X { p, t: s.day, h: s.visit_start })
            .expect("aggregate start must be materialised");
        a.insert(x, 1);
        let infusion = match s.class {
            InfusionClass::Bed if pat.critical => VarKey::Y { p, t: s.day, h: s.infusion_start },
            InfusionClass::Bed => VarKey::ZBed { p, t: s.day, h: s.infusion_start },
            InfusionClass::Chair => VarKey::ZChair { p, t: s.day, h: s.infusion_start },
        };
        let inf = map.id(&infusion).expect("aggregate start must be materialised");
        a.insert(inf, 1);
        let wait = (s.infusion_start - s.visit_start - pat.visit) as i64;
        let w = day_wait.entry(s.day).or_insert(0);
        *w = (*w).max(wait);
    }
    for (key, id) in map.iter() {
        if let VarKey::W { t } = key {
            a.insert(id, day_wait.get(&t).copied().unwrap_or(0));
        }
    }
    a
}

/// Express a complete schedule as an assignment for a complete-model
/// `map` (used to replay known schedules through exported files).
pub fn assignment_from_complete(
    map: &VarMap,
    inst: &Instance,
    cs: &CompleteSchedule,
) -> BTreeMap<u32, i64> {
    let mut a = BTreeMap::new();
    for app in &cs.appointments {
        let p = app.patient;
        let critical = inst.patients[p].critical;
        let alpha = map
            .id(&VarKey::Alpha { p, t: app.day, h: app.visit_start, r: app.room })
            .expect("appointment must be materialised");
        a.insert(alpha, 1);
        let infusion = match app.resource {
            Resource::Bed(bed) if critical => {
                VarKey::Beta { p, t: app.day, h: app.infusion_start, b: bed }
            }
            Resource::Bed(bed) => VarKey::GammaBed { p, t: app.day, h: app.infusion_start, b: bed },
            Resource::Chair(s) => VarKey::GammaChair { p, t: app.day, h: app.infusion_start, s },
        };
        let inf = map.id(&infusion).expect("appointment must be materialised");
        a.insert(inf, 1);
    }
    a
}
