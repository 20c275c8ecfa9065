//! MPS export and solution-file import for external solvers.
//!
//! [`write_model`] emits a whitespace-separated MPS file: an
//! `OBJSENSE MAX` section for maximisation models (minimisation is
//! the MPS default and gets no section), one `N` objective row named
//! `COST`, constraint rows `c0, c1, …` in model order, all columns
//! wrapped in `'INTORG'`/`'INTEND'` markers (every variable here is
//! integral), `BV` bounds for binaries and `UP` bounds for integers
//! whose ceiling is implied by a single-variable `≤` row (`PL`
//! otherwise). Variable names longer than eight characters rely on
//! whitespace separation, which contemporary readers accept.
//!
//! [`read_solution`] parses the counterpart `name value` lines:
//! unknown names are ignored, missing variables default to 0, values
//! may be written as floats but must sit within a small tolerance of
//! an integer — and of 0 or 1 for binaries — or the file is rejected
//! with its line number.

use std::collections::{BTreeMap, HashMap};
use std::io::Write as _;
use std::path::Path;

use crate::model::{MilpModel, Rel, Sense, VarKind};

use super::SolverError;

/// How far a reported value may stray from the integer it rounds to.
const VALUE_TOLERANCE: f64 = 1e-4;

/// Write a model as an MPS file.
pub fn write_model(model: &MilpModel, path: &Path) -> Result<(), SolverError> {
    let io_err = |source| SolverError::Io { path: path.to_path_buf(), source };

    // Column-wise view: objective coefficient then row coefficients,
    // in row order, per variable.
    let n = model.num_vars();
    let mut obj = vec![0i64; n];
    for &(v, c) in &model.objective {
        obj[v as usize] += c;
    }
    let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (ri, row) in model.constraints.iter().enumerate() {
        for &(v, c) in &row.terms {
            columns[v as usize].push((ri, c));
        }
    }
    // Tightest upper bound implied by a one-variable `≤` row, used to
    // give integer columns a finite MPS domain.
    let mut implied_ub: Vec<Option<i64>> = vec![None; n];
    for row in &model.constraints {
        if row.rel == Rel::Le && row.terms.len() == 1 {
            let (v, c) = row.terms[0];
            if c > 0 {
                let ub = row.rhs.div_euclid(c);
                let slot = &mut implied_ub[v as usize];
                if slot.map_or(true, |old| ub < old) {
                    *slot = Some(ub);
                }
            }
        }
    }

    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut out = std::io::BufWriter::new(file);
    let mut w = |line: String| out.write_all(line.as_bytes()).map_err(io_err);

    w("NAME          MODEL\n".into())?;
    if model.sense == Sense::Maximize {
        w("OBJSENSE\n    MAX\n".into())?;
    }
    w("ROWS\n".into())?;
    w(" N  COST\n".into())?;
    for (ri, row) in model.constraints.iter().enumerate() {
        let kind = match row.rel {
            Rel::Le => 'L',
            Rel::Eq => 'E',
            Rel::Ge => 'G',
        };
        w(format!(" {kind}  c{ri}\n"))?;
    }
    w("COLUMNS\n".into())?;
    w("    MARKER                 'MARKER'                 'INTORG'\n".into())?;
    for v in 0..n {
        let name = &model.names[v];
        // Every column needs at least one entry to be declared.
        if obj[v] != 0 || columns[v].is_empty() {
            w(format!("    {name}  COST  {}\n", obj[v]))?;
        }
        for &(ri, c) in &columns[v] {
            w(format!("    {name}  c{ri}  {c}\n"))?;
        }
    }
    w("    MARKER                 'MARKER'                 'INTEND'\n".into())?;
    w("RHS\n".into())?;
    for (ri, row) in model.constraints.iter().enumerate() {
        if row.rhs != 0 {
            w(format!("    RHS  c{ri}  {}\n", row.rhs))?;
        }
    }
    w("BOUNDS\n".into())?;
    for v in 0..n {
        let name = &model.names[v];
        match model.kinds[v] {
            VarKind::Binary => w(format!(" BV BND  {name}\n"))?,
            VarKind::IntNonNeg => match implied_ub[v] {
                Some(ub) => w(format!(" UP BND  {name}  {ub}\n"))?,
                None => w(format!(" PL BND  {name}\n"))?,
            },
        }
    }
    w("ENDATA\n".into())?;
    out.flush().map_err(io_err)
}

/// Read a `name value` solution file against a model's name table.
///
/// Returns the nonzero assignment; see the module docs for the line
/// grammar and rejection rules.
pub fn read_solution(path: &Path, model: &MilpModel) -> Result<BTreeMap<u32, i64>, SolverError> {
    let text = std::fs::read_to_string(path).map_err(|source| SolverError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let ids: HashMap<&str, u32> = model
        .names
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), i as u32))
        .collect();

    let mut assignment = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let parse_err = |message: String| SolverError::SolutionParse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut tokens = raw.split_whitespace();
        let Some(name) = tokens.next() else { continue };
        let Some(value_token) = tokens.next() else {
            return Err(parse_err(format!("expected `name value`, got `{}`", raw.trim())));
        };
        if tokens.next().is_some() {
            return Err(parse_err(format!(
                "expected `name value`, got extra tokens in `{}`",
                raw.trim()
            )));
        }
        let Some(&id) = ids.get(name) else { continue };
        let value: f64 = value_token
            .parse()
            .map_err(|_| parse_err(format!("`{value_token}` is not a number")))?;
        let rounded = value.round();
        if (value - rounded).abs() > VALUE_TOLERANCE || !rounded.is_finite() {
            return Err(parse_err(format!(
                "`{value_token}` for {name} is not within tolerance of an integer"
            )));
        }
        let int = rounded as i64;
        let domain_ok = match model.kinds[id as usize] {
            VarKind::Binary => int == 0 || int == 1,
            VarKind::IntNonNeg => int >= 0,
        };
        if !domain_ok {
            return Err(parse_err(format!(
                "value {int} for {name} is outside the variable's domain"
            )));
        }
        if int != 0 {
            assignment.insert(id, int);
        } else {
            assignment.remove(&id);
        }
    }
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constraint, MilpModel};

    fn sample() -> MilpModel {
        // max a + 2w  s.t.  a + w ≤ 5 (c0), w ≤ 3 (c1), a − w ≥ −1 (c2)
        MilpModel {
            names: vec!["a".into(), "w".into()],
            kinds: vec![VarKind::Binary, VarKind::IntNonNeg],
            sense: Sense::Maximize,
            objective: vec![(0, 1), (1, 2)],
            constraints: vec![
                Constraint { terms: vec![(0, 1), (1, 1)], rel: Rel::Le, rhs: 5 },
                Constraint { terms: vec![(1, 1)], rel: Rel::Le, rhs: 3 },
                Constraint { terms: vec![(0, 1), (1, -1)], rel: Rel::Ge, rhs: -1 },
            ],
            warm_start: None,
        }
    }

    #[test]
    fn writes_the_documented_layout() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("m.mps");
        write_model(&sample(), &path).expect("write");
        let text = std::fs::read_to_string(&path).expect("read back");
        let expected = "\
NAME          MODEL
OBJSENSE
    MAX
ROWS
 N  COST
 L  c0
 L  c1
 G  c2
COLUMNS
    MARKER                 'MARKER'                 'INTORG'
    a  COST  1
    a  c0  1
    a  c2  1
    w  COST  2
    w  c0  1
    w  c1  1
    w  c2  -1
    MARKER                 'MARKER'                 'INTEND'
RHS
    RHS  c0  5
    RHS  c1  3
    RHS  c2  -1
BOUNDS
 BV BND  a
 UP BND  w  3
ENDATA
";
        assert_eq!(text, expected);
    }

    #[test]
    fn minimisation_omits_objsense() {
        let mut m = sample();
        m.sense = Sense::Minimize;
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("m.mps");
        write_model(&m, &path).expect("write");
        let text = std::fs::read_to_string(&path).expect("read back");
        assert!(!text.contains("OBJSENSE"));
    }

    #[test]
    fn reads_values_ignores_unknowns_and_drops_zeros() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("s.out");
        std::fs::write(&path, "a 1\nnot_a_var 7\nw 2.00000001\n\n").expect("write");
        let got = read_solution(&path, &sample()).expect("parse");
        assert_eq!(got, [(0u32, 1i64), (1, 2)].into_iter().collect());

        std::fs::write(&path, "a 0.00000001\n").expect("write");
        let got = read_solution(&path, &sample()).expect("parse");
        assert!(got.is_empty());
    }

    #[test]
    fn rejects_fractional_binaries_with_line_numbers() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("s.out");
        std::fs::write(&path, "w 3\na 0.5\n").expect("write");
        match read_solution(&path, &sample()) {
            Err(SolverError::SolutionParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_domain_violations_and_bad_tokens() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("s.out");
        std::fs::write(&path, "w -1\n").expect("write");
        assert!(matches!(
            read_solution(&path, &sample()),
            Err(SolverError::SolutionParse { .. })
        ));
        std::fs::write(&path, "a 2\n").expect("write");
        assert!(matches!(
            read_solution(&path, &sample()),
            Err(SolverError::SolutionParse { .. })
        ));
        std::fs::write(&path, "lonely\n").expect("write");
        assert!(matches!(
            read_solution(&path, &sample()),
            Err(SolverError::SolutionParse { .. })
        ));
        std::fs::write(&path, "a 1 extra\n").expect("write");
        assert!(matches!(
            read_solution(&path, &sample()),
            Err(SolverError::SolutionParse { .. })
        ));
        std::fs::write(&path, "a one\n").expect("write");
        assert!(matches!(
            read_solution(&path, &sample()),
            Err(SolverError::SolutionParse { .. })
        ));
    }
}
