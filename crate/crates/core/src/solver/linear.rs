use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::constraints::{Constraint, ConstraintSet, Origin};
use crate::param::{IntParam, LinComb};

use super::boolean::BoolSolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowKind {
    Eq,
    Geq,
}

/// `comb = rhs` or `comb >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub comb: LinComb,
    pub kind: RowKind,
    pub rhs: i64,
    pub origin: Option<Origin>,
}

impl Row {
    pub fn new(comb: LinComb, kind: RowKind, rhs: i64, origin: Option<Origin>) -> Self {
        Self { comb, kind, rhs, origin }
    }

    pub fn holds(&self, values: &BTreeMap<IntParam, i64>) -> bool {
        let lhs: i64 = self.comb.terms().map(|(p, c)| c * values.get(&p).copied().unwrap_or(0)).sum();
        match self.kind {
            RowKind::Eq => lhs == self.rhs,
            RowKind::Geq => lhs >= self.rhs,
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            RowKind::Eq => "=",
            RowKind::Geq => ">=",
        };
        write!(f, "L {} {op} {}", self.comb, self.rhs)
    }
}

/// The integer problem left after the boolean phase. Door parameters are
/// sign-free, exponents are nonnegative. The objective gives a weight to each
/// parameter; a door contributes its weight times its absolute value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub vars: BTreeSet<IntParam>,
    pub rows: Vec<Row>,
    pub objective: BTreeMap<IntParam, i64>,
}

impl LinearSystem {
    /// Unit weight on every variable.
    pub fn new<I: IntoIterator<Item = IntParam>>(vars: I, rows: Vec<Row>) -> Self {
        let mut vars: BTreeSet<IntParam> = vars.into_iter().collect();
        for r in &rows {
            vars.extend(r.comb.params());
        }
        let objective = vars.iter().map(|p| (*p, 1)).collect();
        Self { vars, rows, objective }
    }

    pub fn holds(&self, values: &BTreeMap<IntParam, i64>) -> bool {
        self.rows.iter().all(|r| r.holds(values))
            && self.vars.iter().all(|p| p.is_door() || values.get(p).copied().unwrap_or(0) >= 0)
    }

    pub fn objective_value(&self, values: &BTreeMap<IntParam, i64>) -> i64 {
        self.objective.iter().map(|(p, w)| w * values.get(p).copied().unwrap_or(0).abs()).sum()
    }
}

/// Specialize the linear and mixed constraints with a boolean assignment.
/// Mixed constraints whose boolean is 0 disappear.
pub fn apply_bool<I>(psi: &BoolSolution, s: &ConstraintSet, vars: I) -> LinearSystem
where
    I: IntoIterator<Item = IntParam>,
{
    let mut rows = Vec::new();
    for (c, o) in s.iter() {
        let row = match c {
            Constraint::LinEq(a, b) => Row::new(a - b, RowKind::Eq, 0, Some(o.clone())),
            Constraint::LinEq0(a) => Row::new(a.clone(), RowKind::Eq, 0, Some(o.clone())),
            Constraint::LinGeq0(a) => Row::new(a.clone(), RowKind::Geq, 0, Some(o.clone())),
            Constraint::MixedEq0(b, a) if psi.get(*b) => Row::new(a.clone(), RowKind::Eq, 0, Some(o.clone())),
            Constraint::MixedGeq1(b, a) if psi.get(*b) => Row::new(a.clone(), RowKind::Geq, 1, Some(o.clone())),
            _ => continue,
        };
        rows.push(row);
    }
    let mut all: BTreeSet<IntParam> = vars.into_iter().collect();
    for c in s.constraints() {
        all.extend(c.int_params());
    }
    LinearSystem::new(all, rows)
}
