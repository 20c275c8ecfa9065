//! Solving [`MilpModel`]s through a uniform contract.
//!
//! Three backends share the same result type:
//!
//! * [`Backend::Internal`] — an exact depth-first branch-and-bound
//!   with integer bounds propagation, suitable for small models and
//!   for squeezing incumbents out of large ones under a time limit;
//! * [`Backend::External`] — any MILP solver reachable as a process
//!   that reads MPS and writes `name value` solution lines;
//! * [`Backend::Oracle`] — not a model solver: the exhaustive
//!   schedule-space reference lives in [`brute_force_lexico`] and
//!   works on whole instances, so asking `solve` for it is an error.
//!
//! Every assignment handed back, whatever the backend, has been
//! re-checked row by row with [`check_assignment`].

mod internal;
mod mps;
mod oracle;

pub use mps::{read_solution, write_model};
pub use oracle::{brute_force_lexico, LexicoOptimum};

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

use crate::model::{MilpModel, Rel, Sense, VarKind};

/// Which engine optimises the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    /// In-process exact branch-and-bound.
    Internal,
    /// External process: `command <model.mps> <solution.out>
    /// <time_limit_seconds>`, exit 0 = solved/feasible, 2 =
    /// infeasible, anything else = failure.
    External(String),
    /// Reference oracle; only valid for whole-instance calls.
    Oracle,
}

/// Options common to all solve calls.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Wall-clock budget in seconds (> 0).
    pub time_limit: f64,
    /// Engine selection.
    pub backend: Backend,
    /// Allowed absolute objective gap when pruning; 0 = exact.
    pub gap_tolerance: f64,
    /// Reserved for randomised strategies; the internal backend is
    /// deterministic and ignores it.
    pub deterministic_seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            time_limit: 300.0,
            backend: Backend::Internal,
            gap_tolerance: 0.0,
            deterministic_seed: 0,
        }
    }
}

impl SolveOptions {
    /// Internal backend with the given time limit.
    pub fn internal(time_limit: f64) -> Self {
        SolveOptions { time_limit, ..SolveOptions::default() }
    }
}

/// How a solve call ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Proven optimum returned.
    Optimal,
    /// Time ran out with a feasible incumbent in hand.
    FeasibleTimeLimit,
    /// Proven infeasible.
    Infeasible,
    /// Time ran out before any feasible point was found.
    NoSolutionTimeLimit,
}

/// Result of a solve call.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Nonzero variable values of the returned solution; absent
    /// variables are 0. `None` when no solution exists or was found.
    pub assignment: Option<BTreeMap<u32, i64>>,
    /// Objective of the returned solution.
    pub objective: Option<i64>,
    /// Best proven bound on the optimum (equals `objective` when
    /// optimal; `None` when infeasible).
    pub best_bound: Option<i64>,
    /// Wall-clock seconds spent.
    pub runtime: f64,
}

/// Errors of the solving layer.
#[derive(Debug, Error)]
pub enum SolverError {
    /// The model breaks a shape rule of the internal backend.
    #[error("malformed model: {0}")]
    MalformedModel(String),
    /// The external process failed or returned an unusable solution.
    #[error("external solver failed{}: {stderr}", code.map(|c| format!(" (exit {c})")).unwrap_or_default())]
    Backend { code: Option<i32>, stderr: String },
    /// A solution file could not be parsed.
    #[error("solution file {path} line {line}: {message}")]
    SolutionParse { path: PathBuf, line: usize, message: String },
    /// A returned assignment violates a model row.
    #[error("solution violates constraint #{row}")]
    InvalidSolution { row: usize },
    /// Filesystem failure in the external bridge.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// The oracle enumerates whole instances, not models.
    #[error("the oracle backend solves instances exhaustively; use brute_force_lexico")]
    OracleNotAModelSolver,
    /// The instance is too large for exhaustive enumeration.
    #[error("oracle guard: {0}")]
    OracleGuard(String),
}

/// Independently evaluate an assignment against every row.
///
/// Missing variables count as 0. Returns the objective value, or the
/// index of the first violated row (binary domain violations are
/// reported as a violation of an implicit row after the last one).
pub fn check_assignment(
    model: &MilpModel,
    assignment: &BTreeMap<u32, i64>,
) -> Result<i64, usize> {
    let value = |v: u32| assignment.get(&v).copied().unwrap_or(0);
    for (v, kind) in model.kinds.iter().enumerate() {
        let x = value(v as u32);
        let ok = match kind {
            VarKind::Binary => x == 0 || x == 1,
            VarKind::IntNonNeg => x >= 0,
        };
        if !ok {
            return Err(model.constraints.len());
        }
    }
    for (i, c) in model.constraints.iter().enumerate() {
        let lhs: i64 = c.terms.iter().map(|&(v, coef)| coef * value(v)).sum();
        let ok = match c.rel {
            Rel::Le => lhs <= c.rhs,
            Rel::Eq => lhs == c.rhs,
            Rel::Ge => lhs >= c.rhs,
        };
        if !ok {
            return Err(i);
        }
    }
    Ok(model.objective.iter().map(|&(v, coef)| coef * value(v)).sum())
}

/// Optimise a model with the configured backend.
///
/// A present `warm_start` is evaluated first and, when feasible,
/// seeds the incumbent, so even a zero-ish time limit returns at
/// least that solution. Internal solves are deterministic.
pub fn solve(model: &MilpModel, opts: &SolveOptions) -> Result<SolveResult, SolverError> {
    if !(opts.time_limit > 0.0) {
        return Err(SolverError::MalformedModel(format!(
            "time limit must be positive, got {}",
            opts.time_limit
        )));
    }
    match &opts.backend {
        Backend::Internal => internal::internal_exact(model, opts),
        Backend::External(command) => external_solve(model, opts, command),
        Backend::Oracle => Err(SolverError::OracleNotAModelSolver),
    }
}

/// Exact in-process solve, exported for direct use and tests.
pub fn internal_exact(model: &MilpModel, opts: &SolveOptions) -> Result<SolveResult, SolverError> {
    internal::internal_exact(model, opts)
}

/// Bridge to an external MILP solver process.
fn external_solve(
    model: &MilpModel,
    opts: &SolveOptions,
    command: &str,
) -> Result<SolveResult, SolverError> {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|source| SolverError::Io {
        path: std::env::temp_dir(),
        source,
    })?;
    let model_path = dir.path().join("model.mps");
    let solution_path = dir.path().join("solution.out");
    write_model(model, &model_path)?;

    let mut parts = command.split_whitespace();
    let program = parts.next().ok_or_else(|| SolverError::Backend {
        code: None,
        stderr: "empty external solver command".into(),
    })?;
    let output = std::process::Command::new(program)
        .args(parts)
        .arg(&model_path)
        .arg(&solution_path)
        .arg(format!("{}", opts.time_limit))
        .output()
        .map_err(|source| SolverError::Io { path: PathBuf::from(program), source })?;

    let runtime = start.elapsed().as_secs_f64();
    match output.status.code() {
        Some(0) => {
            let assignment = read_solution(&solution_path, model)?;
            let objective = match check_assignment(model, &assignment) {
                Ok(obj) => obj,
                Err(row) => return Err(SolverError::InvalidSolution { row }),
            };
            Ok(SolveResult {
                status: SolveStatus::Optimal,
                assignment: Some(assignment),
                objective: Some(objective),
                best_bound: Some(objective),
                runtime,
            })
        }
        Some(2) => Ok(SolveResult {
            status: SolveStatus::Infeasible,
            assignment: None,
            objective: None,
            best_bound: None,
            runtime,
        }),
        code => Err(SolverError::Backend {
            code,
            stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
        }),
    }
}

/// Canonical maximised objective value of a result for comparisons:
/// negates minimisation objectives.
pub(crate) fn canonical_objective(sense: Sense, objective: i64) -> i64 {
    match sense {
        Sense::Maximize => objective,
        Sense::Minimize => -objective,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constraint, MilpModel, Rel, Sense, VarKind};

    fn tiny_model() -> MilpModel {
        // max x0 + x1  s.t.  x0 + x1 ≤ 1
        MilpModel {
            names: vec!["a".into(), "b".into()],
            kinds: vec![VarKind::Binary, VarKind::Binary],
            sense: Sense::Maximize,
            objective: vec![(0, 1), (1, 1)],
            constraints: vec![Constraint {
                terms: vec![(0, 1), (1, 1)],
                rel: Rel::Le,
                rhs: 1,
            }],
            warm_start: None,
        }
    }

    #[test]
    fn checker_accepts_feasible_and_rejects_violations() {
        let model = tiny_model();
        let feasible: BTreeMap<u32, i64> = [(0, 1)].into_iter().collect();
        assert_eq!(check_assignment(&model, &feasible), Ok(1));
        let infeasible: BTreeMap<u32, i64> = [(0, 1), (1, 1)].into_iter().collect();
        assert_eq!(check_assignment(&model, &infeasible), Err(0));
        let fractionalish: BTreeMap<u32, i64> = [(0, 2)].into_iter().collect();
        assert!(check_assignment(&model, &fractionalish).is_err());
    }

    #[test]
    fn oracle_backend_is_rejected_for_models() {
        let model = tiny_model();
        let opts = SolveOptions { backend: Backend::Oracle, ..SolveOptions::default() };
        assert!(matches!(
            solve(&model, &opts),
            Err(SolverError::OracleNotAModelSolver)
        ));
    }

    #[test]
    fn nonpositive_time_limit_is_rejected() {
        let model = tiny_model();
        let opts = SolveOptions { time_limit: 0.0, ..SolveOptions::default() };
        assert!(matches!(solve(&model, &opts), Err(SolverError::MalformedModel(_))));
    }
}
