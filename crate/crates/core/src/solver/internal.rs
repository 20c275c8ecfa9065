//! Exact depth-first branch-and-bound over integer linear models.
//!
//! The search works on a canonical maximisation copy of the model and
//! keeps, per constraint row, the minimum and maximum activity
//! reachable under the current variable bounds. Fixing a variable
//! updates those activities incrementally and re-queues the touched
//! rows; propagation then tightens variable bounds row by row
//! (conflict as soon as a row's reachable interval misses its
//! right-hand side). The node bound sums each objective
//! coefficient's best reachable contribution, with one refinement:
//! binaries that share a `≤ 1` (or `= 1`) row and a common positive
//! coefficient form an exclusive group counted once, which keeps the
//! root bound tight on assignment-shaped models. At an all-fixed
//! point the bound equals the objective, so pruning is exact.
//!
//! Shape rules, checked at ingestion:
//!
//! * every row references declared variables only, each at most once;
//! * a row contains at most one integer (non-binary) variable, which
//!   lets the search branch on binaries alone and resolve integers
//!   at the leaves from their propagated intervals;
//! * every integer variable appears in some single-variable `≤` row
//!   with a positive coefficient, giving it a finite domain.
//!
//! Branching is deterministic: variables in descending canonical
//! objective coefficient (ties by id), value 1 first when the
//! coefficient is non-negative. A feasible warm start seeds the
//! incumbent before the search begins, so interrupted runs are never
//! worse than their starting point.

use std::collections::{BTreeMap, VecDeque};
use std::time::Instant;

use crate::model::{MilpModel, Rel, Sense, VarKind};

use super::{check_assignment, SolveOptions, SolveResult, SolveStatus, SolverError};

/// Nodes between two deadline checks; keeps the clock off the hot path.
const TIMEOUT_CHECK_MASK: u64 = 0x3FF;

/// Floor division on i64 (rounds toward negative infinity).
fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if a % b != 0 && (a < 0) != (b < 0) {
        q - 1
    } else {
        q
    }
}

/// Ceiling division on i64 (rounds toward positive infinity).
fn div_ceil(a: i64, b: i64) -> i64 {
    let q = a / b;
    if a % b != 0 && (a < 0) == (b < 0) {
        q + 1
    } else {
        q
    }
}

struct Row {
    terms: Vec<(u32, i64)>,
    /// Lower side of the row (`i64::MIN` when the row is `≤` only).
    lo: i64,
    /// Upper side of the row (`i64::MAX` when the row is `≥` only).
    hi: i64,
    /// Smallest activity reachable under current variable bounds.
    min_act: i64,
    /// Largest activity reachable under current variable bounds.
    max_act: i64,
    /// Static cap on how much one variable can move the activity;
    /// lets propagation skip rows whose slack exceeds it.
    max_step: i64,
}

struct Frame {
    trail_mark: usize,
    var: u32,
    first: i64,
    second_tried: bool,
    /// Position in the branching order where the children resume
    /// scanning for an unfixed variable.
    cursor: usize,
}

struct Search {
    /// Canonical (maximise) objective, dense by variable id.
    obj: Vec<i64>,
    rows: Vec<Row>,
    /// Per variable: the rows it appears in and its coefficient there.
    occ: Vec<Vec<(u32, i64)>>,
    lb: Vec<i64>,
    ub: Vec<i64>,
    /// Bound change log: (variable, previous lb, previous ub).
    trail: Vec<(u32, i64, i64)>,
    /// Best reachable objective under the current bounds: ungrouped
    /// variables contribute their best reachable value, exclusive
    /// groups their shared coefficient while any member is live. At
    /// an all-fixed point this equals the objective.
    bound: i64,
    queue: VecDeque<u32>,
    in_queue: Vec<bool>,
    /// Binaries in branching order.
    branch_order: Vec<u32>,
    /// Integer variables, resolved at binary leaves.
    int_vars: Vec<u32>,
    /// Exclusive-group id per variable (`u32::MAX` when ungrouped).
    /// A group's members come from one `≤ 1`/`= 1` unit row and share
    /// one positive objective coefficient, so at most one of them can
    /// score and the bound charges that coefficient once.
    group_of: Vec<u32>,
    /// Per group: members whose upper bound is still 1.
    g_cnt: Vec<u32>,
    /// Per group: the shared objective coefficient.
    g_obj: Vec<i64>,
}

impl Search {
    fn new(model: &MilpModel) -> Result<Search, SolverError> {
        let n = model.num_vars();
        let mut obj = vec![0i64; n];
        for &(v, c) in &model.objective {
            if v as usize >= n {
                return Err(SolverError::MalformedModel(format!(
                    "objective references undeclared variable id {v}"
                )));
            }
            obj[v as usize] += c;
        }
        if model.sense == Sense::Minimize {
            for c in &mut obj {
                *c = -*c;
            }
        }

        // Finite domains: binaries are 0..1, integers take their
        // tightest single-variable `≤` row.
        let mut ub0 = vec![1i64; n];
        for (i, kind) in model.kinds.iter().enumerate() {
            if *kind == VarKind::IntNonNeg {
                ub0[i] = i64::MIN; // sentinel: not yet bounded
            }
        }
        for c in &model.constraints {
            if c.rel == Rel::Le && c.terms.len() == 1 {
                let (v, coef) = c.terms[0];
                if (v as usize) < n && coef > 0 && model.kinds[v as usize] == VarKind::IntNonNeg {
                    let implied = div_floor(c.rhs, coef);
                    let slot = &mut ub0[v as usize];
                    if *slot == i64::MIN || implied < *slot {
                        *slot = implied;
                    }
                }
            }
        }
        for (i, kind) in model.kinds.iter().enumerate() {
            if *kind == VarKind::IntNonNeg && ub0[i] == i64::MIN {
                return Err(SolverError::MalformedModel(format!(
                    "integer variable {} has no finite upper bound row",
                    model.names[i]
                )));
            }
        }

        let mut rows = Vec::with_capacity(model.constraints.len());
        let mut occ: Vec<Vec<(u32, i64)>> = vec![Vec::new(); n];
        for (ri, c) in model.constraints.iter().enumerate() {
            let mut ints_in_row = 0usize;
            let mut seen: Option<u32> = None;
            for &(v, coef) in &c.terms {
                if v as usize >= n {
                    return Err(SolverError::MalformedModel(format!(
                        "constraint #{ri} references undeclared variable id {v}"
                    )));
                }
                if coef == 0 {
                    return Err(SolverError::MalformedModel(format!(
                        "constraint #{ri} carries a zero coefficient"
                    )));
                }
                if let Some(prev) = seen {
                    if v <= prev {
                        return Err(SolverError::MalformedModel(format!(
                            "constraint #{ri} terms must be sorted by variable id without repeats"
                        )));
                    }
                }
                seen = Some(v);
                if model.kinds[v as usize] == VarKind::IntNonNeg {
                    ints_in_row += 1;
                }
            }
            if ints_in_row > 1 {
                return Err(SolverError::MalformedModel(format!(
                    "constraint #{ri} holds {ints_in_row} integer variables; at most one is supported"
                )));
            }
            let (lo, hi) = match c.rel {
                Rel::Le => (i64::MIN, c.rhs),
                Rel::Ge => (c.rhs, i64::MAX),
                Rel::Eq => (c.rhs, c.rhs),
            };
            let mut min_act = 0i64;
            let mut max_act = 0i64;
            let mut max_step = 0i64;
            for &(v, coef) in &c.terms {
                let width = ub0[v as usize]; // lb is 0 everywhere at root
                if coef > 0 {
                    max_act += coef * width;
                } else {
                    min_act += coef * width;
                }
                max_step = max_step.max(coef.abs() * width);
                occ[v as usize].push((ri as u32, coef));
            }
            rows.push(Row { terms: c.terms.clone(), lo, hi, min_act, max_act, max_step });
        }

        // Exclusive groups: inside a `≤ 1` (or `= 1`) row over
        // binaries with unit coefficients, at most one member can take
        // value 1. Members sharing one positive objective coefficient
        // therefore contribute it to the bound once, not once each.
        // Requiring a *common* coefficient keeps the bound equal to
        // the objective at all-fixed points, where incumbents are read
        // straight from it.
        let mut group_of = vec![u32::MAX; n];
        let mut g_cnt: Vec<u32> = Vec::new();
        let mut g_obj: Vec<i64> = Vec::new();
        for c in &model.constraints {
            if c.rhs != 1 || c.rel == Rel::Ge || c.terms.len() < 2 {
                continue;
            }
            let exclusive = c
                .terms
                .iter()
                .all(|&(v, coef)| coef == 1 && model.kinds[v as usize] == VarKind::Binary);
            if !exclusive {
                continue;
            }
            let mut shared: Option<i64> = None;
            let mut members: Vec<u32> = Vec::new();
            for &(v, _) in &c.terms {
                let i = v as usize;
                if group_of[i] != u32::MAX || obj[i] <= 0 {
                    continue;
                }
                match shared {
                    None => shared = Some(obj[i]),
                    Some(s) if s != obj[i] => continue,
                    Some(_) => {}
                }
                members.push(v);
            }
            if members.len() >= 2 {
                let g = g_cnt.len() as u32;
                for &v in &members {
                    group_of[v as usize] = g;
                }
                g_cnt.push(members.len() as u32);
                g_obj.push(shared.expect("group coefficient"));
            }
        }

        let mut bound = 0i64;
        for (i, &c) in obj.iter().enumerate() {
            if c > 0 && group_of[i] == u32::MAX {
                bound += c * ub0[i];
            }
            // negative coefficients contribute c * lb = 0 at the root
        }
        bound += g_obj.iter().sum::<i64>();

        let mut branch_order: Vec<u32> = (0..n as u32)
            .filter(|&v| model.kinds[v as usize] == VarKind::Binary)
            .collect();
        branch_order.sort_by_key(|&v| (-obj[v as usize], v));
        let int_vars: Vec<u32> = (0..n as u32)
            .filter(|&v| model.kinds[v as usize] == VarKind::IntNonNeg)
            .collect();

        let mut search = Search {
            obj,
            rows,
            occ,
            lb: vec![0; n],
            ub: ub0,
            trail: Vec::new(),
            bound,
            queue: VecDeque::new(),
            in_queue: vec![false; model.constraints.len()],
            branch_order,
            int_vars,
            group_of,
            g_cnt,
            g_obj,
        };
        // Variables that touch nothing cannot matter; pin them so the
        // search never branches on them.
        for v in 0..n as u32 {
            if search.occ[v as usize].is_empty() && search.obj[v as usize] == 0 {
                search.lb[v as usize] = 0;
                search.ub[v as usize] = 0;
            }
        }
        // Seed the queue with every row once so the root propagation
        // performs a full initial check.
        for r in 0..search.rows.len() {
            search.queue.push_back(r as u32);
            search.in_queue[r] = true;
        }
        Ok(search)
    }

    fn mark_dirty(&mut self, r: u32) {
        if !self.in_queue[r as usize] {
            self.in_queue[r as usize] = true;
            self.queue.push_back(r);
        }
    }

    fn drain_queue(&mut self) {
        while let Some(r) = self.queue.pop_front() {
            self.in_queue[r as usize] = false;
        }
    }

    /// Raise a lower bound; false on empty domain.
    fn set_lb(&mut self, v: u32, new: i64) -> bool {
        let i = v as usize;
        if new <= self.lb[i] {
            return true;
        }
        if new > self.ub[i] {
            return false;
        }
        self.trail.push((v, self.lb[i], self.ub[i]));
        let delta = new - self.lb[i];
        self.lb[i] = new;
        for k in 0..self.occ[i].len() {
            let (r, coef) = self.occ[i][k];
            if coef > 0 {
                self.rows[r as usize].min_act += coef * delta;
            } else {
                self.rows[r as usize].max_act += coef * delta;
            }
            self.mark_dirty(r);
        }
        if self.obj[i] < 0 {
            self.bound += self.obj[i] * delta;
        }
        true
    }

    /// Lower an upper bound; false on empty domain.
    fn set_ub(&mut self, v: u32, new: i64) -> bool {
        let i = v as usize;
        if new >= self.ub[i] {
            return true;
        }
        if new < self.lb[i] {
            return false;
        }
        self.trail.push((v, self.lb[i], self.ub[i]));
        let delta = new - self.ub[i]; // negative
        self.ub[i] = new;
        for k in 0..self.occ[i].len() {
            let (r, coef) = self.occ[i][k];
            if coef > 0 {
                self.rows[r as usize].max_act += coef * delta;
            } else {
                self.rows[r as usize].min_act += coef * delta;
            }
            self.mark_dirty(r);
        }
        self.bound_ub_delta(i, delta);
        true
    }

    /// Fold an upper-bound change of `delta` on variable `i` into the
    /// node bound. A grouped variable moves its group's live count and
    /// charges the shared coefficient only when that count crosses
    /// zero; anything else contributes coefficient × width directly.
    fn bound_ub_delta(&mut self, i: usize, delta: i64) {
        if delta == 0 {
            return;
        }
        let g = self.group_of[i];
        if g != u32::MAX {
            let g = g as usize;
            if delta < 0 {
                self.g_cnt[g] -= 1;
                if self.g_cnt[g] == 0 {
                    self.bound -= self.g_obj[g];
                }
            } else {
                if self.g_cnt[g] == 0 {
                    self.bound += self.g_obj[g];
                }
                self.g_cnt[g] += 1;
            }
        } else if self.obj[i] >= 0 {
            self.bound += self.obj[i] * delta;
        }
    }

    /// Rewind every bound change made after `mark`.
    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, old_lb, old_ub) = self.trail.pop().expect("trail underflow");
            let i = v as usize;
            let dlb = old_lb - self.lb[i]; // ≤ 0
            let dub = old_ub - self.ub[i]; // ≥ 0
            for k in 0..self.occ[i].len() {
                let (r, coef) = self.occ[i][k];
                if coef > 0 {
                    self.rows[r as usize].min_act += coef * dlb;
                    self.rows[r as usize].max_act += coef * dub;
                } else {
                    self.rows[r as usize].min_act += coef * dub;
                    self.rows[r as usize].max_act += coef * dlb;
                }
            }
            if self.obj[i] < 0 {
                self.bound += self.obj[i] * dlb;
            } else {
                self.bound_ub_delta(i, dub);
            }
            self.lb[i] = old_lb;
            self.ub[i] = old_ub;
        }
    }

    /// Fixpoint bounds propagation; false on conflict.
    fn propagate(&mut self) -> bool {
        while let Some(r) = self.queue.pop_front() {
            self.in_queue[r as usize] = false;
            let (lo, hi, min_act, max_act, max_step) = {
                let row = &self.rows[r as usize];
                (row.lo, row.hi, row.min_act, row.max_act, row.max_step)
            };
            if min_act > hi || max_act < lo {
                self.drain_queue();
                return false;
            }
            // No single variable can bridge a slack this wide, so the
            // row cannot tighten anything right now.
            let le_can_tighten = hi != i64::MAX && hi - min_act < max_step;
            let ge_can_tighten = lo != i64::MIN && max_act - lo < max_step;
            if !le_can_tighten && !ge_can_tighten {
                continue;
            }
            let len = self.rows[r as usize].terms.len();
            for k in 0..len {
                let (v, coef) = self.rows[r as usize].terms[k];
                let i = v as usize;
                if self.lb[i] == self.ub[i] {
                    continue;
                }
                if le_can_tighten {
                    let row = &self.rows[r as usize];
                    let rest_min = row.min_act
                        - if coef > 0 { coef * self.lb[i] } else { coef * self.ub[i] };
                    let ok = if coef > 0 {
                        let new_ub = div_floor(hi - rest_min, coef);
                        new_ub >= self.ub[i] || self.set_ub(v, new_ub)
                    } else {
                        let new_lb = div_ceil(hi - rest_min, coef);
                        new_lb <= self.lb[i] || self.set_lb(v, new_lb)
                    };
                    if !ok {
                        self.drain_queue();
                        return false;
                    }
                }
                if ge_can_tighten && self.lb[i] != self.ub[i] {
                    let row = &self.rows[r as usize];
                    let rest_max = row.max_act
                        - if coef > 0 { coef * self.ub[i] } else { coef * self.lb[i] };
                    let ok = if coef > 0 {
                        let new_lb = div_ceil(lo - rest_max, coef);
                        new_lb <= self.lb[i] || self.set_lb(v, new_lb)
                    } else {
                        let new_ub = div_floor(lo - rest_max, coef);
                        new_ub >= self.ub[i] || self.set_ub(v, new_ub)
                    };
                    if !ok {
                        self.drain_queue();
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Fix remaining integers to their objective-best feasible value.
    /// Returns false when that completion conflicts.
    fn resolve_integers(&mut self) -> bool {
        for k in 0..self.int_vars.len() {
            let v = self.int_vars[k];
            let i = v as usize;
            if self.lb[i] == self.ub[i] {
                continue;
            }
            let val = if self.obj[i] >= 0 { self.ub[i] } else { self.lb[i] };
            if !(self.set_lb(v, val) && self.set_ub(v, val)) {
                return false;
            }
            if !self.propagate() {
                return false;
            }
        }
        true
    }
}

pub(super) fn internal_exact(
    model: &MilpModel,
    opts: &SolveOptions,
) -> Result<SolveResult, SolverError> {
    let start = Instant::now();
    let mut s = Search::new(model)?;
    let n = model.num_vars();

    // A feasible warm start becomes the first incumbent.
    let mut best: Option<i64> = None;
    let mut best_values: Option<Vec<i64>> = None;
    if let Some(ws) = &model.warm_start {
        if let Ok(obj) = check_assignment(model, ws) {
            let canon = super::canonical_objective(model.sense, obj);
            let mut values = vec![0i64; n];
            for (&v, &x) in ws {
                if (v as usize) < n {
                    values[v as usize] = x;
                }
            }
            best = Some(canon);
            best_values = Some(values);
        }
    }

    let root_feasible = s.propagate();
    let root_bound = s.bound;
    let mut exhausted = true;
    let mut timed_out = false;

    if root_feasible {
        let mut decisions: Vec<Frame> = Vec::new();
        let mut nodes: u64 = 0;
        let mut needs_propagate = false;

        // Take the second value of the deepest pending decision, or
        // report the tree exhausted.
        macro_rules! backtrack {
            () => {{
                let mut moved = false;
                while let Some(frame) = decisions.last_mut() {
                    if frame.second_tried {
                        let mark = frame.trail_mark;
                        decisions.pop();
                        s.undo_to(mark);
                    } else {
                        let mark = frame.trail_mark;
                        frame.second_tried = true;
                        let var = frame.var;
                        let second = 1 - frame.first;
                        s.undo_to(mark);
                        let ok = s.set_lb(var, second) && s.set_ub(var, second);
                        debug_assert!(ok, "branch value must fit a fresh binary domain");
                        moved = true;
                        break;
                    }
                }
                moved
            }};
        }

        loop {
            nodes += 1;
            if nodes & TIMEOUT_CHECK_MASK == 0
                && start.elapsed().as_secs_f64() >= opts.time_limit
            {
                exhausted = false;
                timed_out = true;
                break;
            }
            if needs_propagate && !s.propagate() {
                if backtrack!() {
                    continue;
                }
                break;
            }
            needs_propagate = true;
            if let Some(b) = best {
                if (s.bound as f64) <= b as f64 + opts.gap_tolerance {
                    if backtrack!() {
                        continue;
                    }
                    break;
                }
            }
            let cursor_start = decisions.last().map_or(0, |f| f.cursor);
            let mut chosen = None;
            for idx in cursor_start..s.branch_order.len() {
                let v = s.branch_order[idx];
                if s.lb[v as usize] < s.ub[v as usize] {
                    chosen = Some((idx, v));
                    break;
                }
            }
            match chosen {
                Some((idx, v)) => {
                    let first = if s.obj[v as usize] >= 0 { 1 } else { 0 };
                    let frame = Frame {
                        trail_mark: s.trail.len(),
                        var: v,
                        first,
                        second_tried: false,
                        cursor: idx,
                    };
                    decisions.push(frame);
                    let ok = s.set_lb(v, first) && s.set_ub(v, first);
                    debug_assert!(ok, "branch value must fit an unfixed binary domain");
                }
                None => {
                    // Binary leaf: complete the integers, then record.
                    let mark = s.trail.len();
                    if s.resolve_integers() {
                        debug_assert!(
                            s.lb == s.ub,
                            "leaf must have every variable fixed"
                        );
                        debug_assert_eq!(
                            s.bound,
                            s.lb.iter().zip(&s.obj).map(|(&x, &c)| c * x).sum::<i64>(),
                            "bound must equal the objective once everything is fixed"
                        );
                        if best.map_or(true, |b| s.bound > b) {
                            best = Some(s.bound);
                            best_values = Some(s.lb.clone());
                        }
                    }
                    s.undo_to(mark);
                    if backtrack!() {
                        continue;
                    }
                    break;
                }
            }
        }
    }

    let runtime = start.elapsed().as_secs_f64();
    let de_canon = |canon: i64| match model.sense {
        Sense::Maximize => canon,
        Sense::Minimize => -canon,
    };

    let result = match (best, exhausted) {
        (Some(canon), true) => SolveResult {
            status: SolveStatus::Optimal,
            assignment: Some(values_to_map(best_values.as_ref().expect("incumbent values"))),
            objective: Some(de_canon(canon)),
            best_bound: Some(de_canon(canon)),
            runtime,
        },
        (None, true) => SolveResult {
            status: SolveStatus::Infeasible,
            assignment: None,
            objective: None,
            best_bound: None,
            runtime,
        },
        (Some(canon), false) => SolveResult {
            status: SolveStatus::FeasibleTimeLimit,
            assignment: Some(values_to_map(best_values.as_ref().expect("incumbent values"))),
            objective: Some(de_canon(canon)),
            best_bound: Some(de_canon(root_bound)),
            runtime,
        },
        (None, false) => SolveResult {
            status: SolveStatus::NoSolutionTimeLimit,
            assignment: None,
            objective: None,
            best_bound: Some(de_canon(root_bound)),
            runtime,
        },
    };
    debug_assert!(timed_out || exhausted);

    // Paranoia: anything we hand back must satisfy every row.
    if let Some(map) = &result.assignment {
        if let Err(row) = check_assignment(model, map) {
            return Err(SolverError::InvalidSolution { row });
        }
    }
    Ok(result)
}

fn values_to_map(values: &[i64]) -> BTreeMap<u32, i64> {
    values
        .iter()
        .enumerate()
        .filter(|&(_, &x)| x != 0)
        .map(|(v, &x)| (v as u32, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{solve, SolveOptions, SolveStatus};
    use super::*;
    use crate::model::{Constraint, MilpModel};

    fn model(
        kinds: Vec<VarKind>,
        sense: Sense,
        objective: Vec<(u32, i64)>,
        constraints: Vec<(Vec<(u32, i64)>, Rel, i64)>,
    ) -> MilpModel {
        MilpModel {
            names: (0..kinds.len()).map(|i| format!("v{i}")).collect(),
            kinds,
            sense,
            objective,
            constraints: constraints
                .into_iter()
                .map(|(terms, rel, rhs)| Constraint { terms, rel, rhs })
                .collect(),
            warm_start: None,
        }
    }

    #[test]
    fn maximizes_a_packing() {
        // max 3a + 2b + 2c  s.t.  a + b ≤ 1, b + c ≤ 1  →  a=c=1, obj 5
        let m = model(
            vec![VarKind::Binary; 3],
            Sense::Maximize,
            vec![(0, 3), (1, 2), (2, 2)],
            vec![
                (vec![(0, 1), (1, 1)], Rel::Le, 1),
                (vec![(1, 1), (2, 1)], Rel::Le, 1),
            ],
        );
        let r = solve(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective, Some(5));
        assert_eq!(r.best_bound, Some(5));
        let a = r.assignment.expect("assignment");
        assert_eq!(a.get(&0), Some(&1));
        assert_eq!(a.get(&1), None);
        assert_eq!(a.get(&2), Some(&1));
    }

    #[test]
    fn proves_infeasibility() {
        // a + b ≥ 3 over two binaries is impossible.
        let m = model(
            vec![VarKind::Binary; 2],
            Sense::Maximize,
            vec![(0, 1), (1, 1)],
            vec![(vec![(0, 1), (1, 1)], Rel::Ge, 3)],
        );
        let r = solve(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert_eq!(r.assignment, None);
        assert_eq!(r.best_bound, None);
    }

    #[test]
    fn minimizes_an_integer_under_cover_constraints() {
        // min w  s.t.  w ≥ 2a, w ≥ 3b, a + b ≥ 2 (both on), w ≤ 10.
        let m = model(
            vec![VarKind::Binary, VarKind::Binary, VarKind::IntNonNeg],
            Sense::Minimize,
            vec![(2, 1)],
            vec![
                (vec![(0, 2), (2, -1)], Rel::Le, 0),
                (vec![(1, 3), (2, -1)], Rel::Le, 0),
                (vec![(0, 1), (1, 1)], Rel::Ge, 2),
                (vec![(2, 1)], Rel::Le, 10),
            ],
        );
        let r = solve(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective, Some(3));
        assert_eq!(r.assignment.expect("assignment").get(&2), Some(&3));
    }

    #[test]
    fn equality_rows_hold() {
        // max a + b + c  s.t.  a + b + c = 2, a = c (via a − c = 0).
        let m = model(
            vec![VarKind::Binary; 3],
            Sense::Maximize,
            vec![(0, 1), (1, 1), (2, 1)],
            vec![
                (vec![(0, 1), (1, 1), (2, 1)], Rel::Eq, 2),
                (vec![(0, 1), (2, -1)], Rel::Eq, 0),
            ],
        );
        let r = solve(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective, Some(2));
        let a = r.assignment.expect("assignment");
        // a = c = 1, b = 0 is the only way to reach 2 with a = c.
        assert_eq!(a.get(&0), Some(&1));
        assert_eq!(a.get(&2), Some(&1));
        assert_eq!(a.get(&1), None);
    }

    #[test]
    fn unbounded_integer_is_rejected() {
        let m = model(
            vec![VarKind::IntNonNeg],
            Sense::Maximize,
            vec![(0, 1)],
            vec![],
        );
        assert!(matches!(
            solve(&m, &SolveOptions::default()),
            Err(SolverError::MalformedModel(_))
        ));
    }

    #[test]
    fn two_integers_in_a_row_are_rejected() {
        let m = model(
            vec![VarKind::IntNonNeg, VarKind::IntNonNeg],
            Sense::Maximize,
            vec![(0, 1), (1, 1)],
            vec![
                (vec![(0, 1)], Rel::Le, 5),
                (vec![(1, 1)], Rel::Le, 5),
                (vec![(0, 1), (1, 1)], Rel::Le, 7),
            ],
        );
        assert!(matches!(
            solve(&m, &SolveOptions::default()),
            Err(SolverError::MalformedModel(_))
        ));
    }

    #[test]
    fn warm_start_survives_a_tiny_time_limit() {
        // Wide feasible region; the warm start must come back even
        // when the clock leaves no room to search. One pair is left
        // open so the optimum cannot be proven before the deadline.
        let k = 2000u32;
        let mut constraints = Vec::new();
        for i in 0..k {
            constraints.push((vec![(2 * i, 1), (2 * i + 1, 1)], Rel::Le, 1));
        }
        let mut m = model(
            vec![VarKind::Binary; 2 * k as usize],
            Sense::Maximize,
            (0..2 * k).map(|v| (v, 1)).collect(),
            constraints,
        );
        let ws: BTreeMap<u32, i64> = (0..k - 1).map(|i| (2 * i, 1)).collect();
        m.warm_start = Some(ws);
        let r = solve(&m, &SolveOptions::internal(1e-9)).expect("solve");
        assert_eq!(r.status, SolveStatus::FeasibleTimeLimit);
        assert_eq!(r.objective, Some((k - 1) as i64));
        // Root bound: each exclusive pair is counted once.
        assert_eq!(r.best_bound, Some(k as i64));
    }

    #[test]
    fn exclusive_groups_prove_optimality_at_the_root() {
        // Six items pick at most one of two personal slots; each slot
        // column holds three items. A full warm start meets the
        // grouped root bound, so optimality is proven without search
        // even under a vanishing time budget.
        let items = 6u32;
        let mut constraints = Vec::new();
        for p in 0..items {
            constraints.push((vec![(2 * p, 1), (2 * p + 1, 1)], Rel::Le, 1));
        }
        for s in 0..2u32 {
            let row: Vec<(u32, i64)> = (0..items).map(|p| (2 * p + s, 1)).collect();
            constraints.push((row, Rel::Le, 3));
        }
        let mut m = model(
            vec![VarKind::Binary; 2 * items as usize],
            Sense::Maximize,
            (0..2 * items).map(|v| (v, 1)).collect(),
            constraints,
        );
        let ws: BTreeMap<u32, i64> = (0..items).map(|p| (2 * p + (p & 1), 1)).collect();
        m.warm_start = Some(ws);
        let r = solve(&m, &SolveOptions::internal(1e-9)).expect("solve");
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective, Some(items as i64));
        assert_eq!(r.best_bound, Some(items as i64));
    }

    #[test]
    fn mixed_coefficient_rows_stay_ungrouped_and_exact() {
        // max 5a + 2b + 2c with a + b ≤ 1 (mixed coefficients) and
        // b + c ≤ 1 (groupable). The optimum takes a and c; the
        // grouped bound must not misprice the mixed row.
        let m = model(
            vec![VarKind::Binary; 3],
            Sense::Maximize,
            vec![(0, 5), (1, 2), (2, 2)],
            vec![
                (vec![(0, 1), (1, 1)], Rel::Le, 1),
                (vec![(1, 1), (2, 1)], Rel::Le, 1),
            ],
        );
        let r = solve(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective, Some(7));
        let a = r.assignment.expect("assignment");
        assert_eq!(a.get(&0), Some(&1));
        assert_eq!(a.get(&2), Some(&1));
    }

    #[test]
    fn infeasible_warm_start_is_ignored() {
        let mut m = model(
            vec![VarKind::Binary; 2],
            Sense::Maximize,
            vec![(0, 1), (1, 1)],
            vec![(vec![(0, 1), (1, 1)], Rel::Le, 1)],
        );
        m.warm_start = Some([(0, 1), (1, 1)].into_iter().collect());
        let r = solve(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective, Some(1));
    }

    #[test]
    fn empty_model_is_optimal_at_zero() {
        let m = model(vec![], Sense::Maximize, vec![], vec![]);
        let r = solve(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective, Some(0));
        assert_eq!(r.assignment, Some(BTreeMap::new()));
    }

    #[test]
    fn violated_empty_row_is_infeasible() {
        let m = model(
            vec![VarKind::Binary],
            Sense::Maximize,
            vec![(0, 1)],
            vec![(vec![], Rel::Ge, 1)],
        );
        let r = solve(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(r.status, SolveStatus::Infeasible);
    }

    #[test]
    fn negative_objective_variables_stay_low() {
        // max a − 2b  s.t.  a − b ≤ 0  →  a=b=0 beats a=b=1.
        let m = model(
            vec![VarKind::Binary; 2],
            Sense::Maximize,
            vec![(0, 1), (1, -2)],
            vec![(vec![(0, 1), (1, -1)], Rel::Le, 0)],
        );
        let r = solve(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective, Some(0));
    }

    #[test]
    fn division_helpers_round_as_documented() {
        assert_eq!(div_floor(7, 2), 3);
        assert_eq!(div_floor(-7, 2), -4);
        assert_eq!(div_floor(7, -2), -4);
        assert_eq!(div_ceil(7, 2), 4);
        assert_eq!(div_ceil(-7, 2), -3);
        assert_eq!(div_ceil(-7, -2), 4);
    }
}
