//! Constraint resolution: boolean saturation, then an exact rational linear
//! program, then scaling to integers.

mod boolean;
mod linear;
mod lp;
mod num;
mod presolve;
mod simplex;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::constraints::{ConstraintSet, Origin};
use crate::param::{BoolParam, Instantiation, IntParam, ParamSource};

pub use boolean::{solve_bool, BoolClash, BoolSolution};
pub use linear::{apply_bool, LinearSystem, Row, RowKind};
pub use lp::{parse_comb_text, parse_lp, parse_solution, write_lp, write_solution, LpError};
pub use presolve::{presolve, Infeasible, Presolved, Resolved};
pub use simplex::{solve_lp, LpOutcome, Rational, SimplexStats};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub bool_params: usize,
    pub bool_ones: usize,
    pub linear_rows: usize,
    pub presolved_rows: usize,
    pub eliminated: usize,
    pub simplex: SimplexStats,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub instantiation: Instantiation,
    /// Rational optimum before scaling.
    pub rational: BTreeMap<IntParam, Rational>,
    pub scale: BigInt,
    pub objective: i64,
}

#[derive(Clone, Debug)]
pub enum Unsat {
    Boolean(BoolClash),
    /// Rows of an infeasibility certificate, with the rows that eliminated
    /// their variables during presolve.
    Linear {
        kernel: Vec<Origin>,
    },
    /// A supplied rational solution violates a row.
    External {
        row: Row,
    },
    /// The scaled solution does not fit machine integers.
    Overflow,
}

impl std::fmt::Display for Unsat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Unsat::Boolean(c) => write!(f, "boolean constraints force {} to both 0 and 1", c.param),
            Unsat::Linear { kernel } => write!(f, "linear constraints infeasible ({} rows in kernel)", kernel.len()),
            Unsat::External { row } => write!(f, "supplied solution violates `{row}`"),
            Unsat::Overflow => f.write_str("scaled solution overflows 64-bit integers"),
        }
    }
}

impl Unsat {
    pub fn kernel(&self) -> Vec<String> {
        match self {
            Unsat::Boolean(c) => c.kernel.iter().map(|(c, o)| format!("{c}  # origin: {o}")).collect(),
            Unsat::Linear { kernel } => kernel.iter().map(|o| o.to_string()).collect(),
            Unsat::External { row } => vec![row.to_string()],
            Unsat::Overflow => Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub outcome: Result<Solution, Unsat>,
    pub boolean: Option<BoolSolution>,
    /// The linear system handed to the rational phase, if it was reached.
    pub linear: Option<LinearSystem>,
    pub stats: SolverStats,
}

/// Where the rational solution comes from.
#[derive(Clone, Debug, Default)]
pub enum RationalSource {
    #[default]
    Simplex,
    Supplied(BTreeMap<IntParam, Rational>),
}

/// Multiply by the least common multiple of the denominators.
pub fn scale_to_integers(values: &BTreeMap<IntParam, Rational>) -> (BTreeMap<IntParam, BigInt>, BigInt) {
    let mut l = BigInt::one();
    for v in values.values() {
        l = l.lcm(v.denom());
    }
    let scaled = values.iter().map(|(p, v)| (*p, (v * Rational::from_integer(l.clone())).to_integer())).collect();
    (scaled, l)
}

fn rational_row_holds(row: &Row, values: &BTreeMap<IntParam, Rational>) -> bool {
    let mut lhs = Rational::zero();
    for (p, k) in row.comb.terms() {
        if let Some(v) = values.get(&p) {
            lhs += v * Rational::from_integer(k.into());
        }
    }
    let rhs = Rational::from_integer(row.rhs.into());
    match row.kind {
        RowKind::Eq => lhs == rhs,
        RowKind::Geq => lhs >= rhs,
    }
}

/// Solve with every parameter of `s`, plus those of `src`, in the universe.
pub fn solve_detailed(s: &ConstraintSet, src: Option<&ParamSource>, source: &RationalSource) -> SolveReport {
    let mut bools: BTreeSet<BoolParam> = BTreeSet::new();
    let mut ints: BTreeSet<IntParam> = BTreeSet::new();
    if let Some(src) = src {
        bools.extend(src.bool_params());
        ints.extend(src.int_params());
    }
    for c in s.constraints() {
        bools.extend(c.bool_params());
        ints.extend(c.int_params());
    }
    let mut stats = SolverStats { bool_params: bools.len(), ..Default::default() };
    let psi = match solve_bool(s, bools.iter().copied()) {
        Ok(psi) => psi,
        Err(clash) => {
            return SolveReport { outcome: Err(Unsat::Boolean(clash)), boolean: None, linear: None, stats };
        }
    };
    stats.bool_ones = psi.ones().count();
    let sys = apply_bool(&psi, s, ints.iter().copied());
    stats.linear_rows = sys.rows.len();
    let outcome = match source {
        RationalSource::Simplex => solve_linear(&sys, &mut stats),
        RationalSource::Supplied(values) => {
            let full: BTreeMap<IntParam, Rational> =
                sys.vars.iter().map(|p| (*p, values.get(p).cloned().unwrap_or_else(Rational::zero))).collect();
            match sys.rows.iter().find(|r| !rational_row_holds(r, &full)) {
                Some(row) => Err(Unsat::External { row: row.clone() }),
                None => match full.iter().find(|(p, v)| !p.is_door() && *v < &Rational::zero()) {
                    Some((p, _)) => {
                        Err(Unsat::External { row: Row::new(crate::param::LinComb::param(*p), RowKind::Geq, 0, None) })
                    }
                    None => Ok(full),
                },
            }
        }
    }
    .and_then(|rational| finish(&psi, &sys, rational));
    SolveReport { outcome, boolean: Some(psi), linear: Some(sys), stats }
}

/// Presolve and run the simplex, returning a rational optimum over the
/// original variables.
pub fn solve_linear(sys: &LinearSystem, stats: &mut SolverStats) -> Result<BTreeMap<IntParam, Rational>, Unsat> {
    let pre = match presolve(sys) {
        Ok(p) => p,
        Err(Infeasible { row }) => {
            let mut kernel: Vec<Origin> = row.origin.clone().into_iter().collect();
            kernel.extend(Presolved::empty_explain(sys, &row));
            return Err(Unsat::Linear { kernel });
        }
    };
    stats.presolved_rows = pre.system.rows.len();
    stats.eliminated = pre.eliminated;
    let (out, simplex_stats) = solve_lp(&pre.system);
    stats.simplex = simplex_stats;
    match out {
        LpOutcome::Infeasible { rows } => {
            let mut kernel: Vec<Origin> = Vec::new();
            let mut vars = BTreeSet::new();
            for &r in &rows {
                let row = &pre.system.rows[r];
                kernel.extend(row.origin.clone());
                vars.extend(row.comb.params());
            }
            // Variables of the reduced rows stand for their whole class.
            let members: Vec<IntParam> = pre
                .map
                .iter()
                .filter(|(_, r)| matches!(r, Resolved::Scaled(_, q) if vars.contains(q)))
                .map(|(p, _)| *p)
                .collect();
            for o in pre.explain(members) {
                if !kernel.contains(&o) {
                    kernel.push(o);
                }
            }
            Err(Unsat::Linear { kernel })
        }
        LpOutcome::Optimal { values, .. } => Ok(sys
            .vars
            .iter()
            .map(|p| {
                let v = match pre.resolve(*p) {
                    Resolved::Zero => Rational::zero(),
                    Resolved::Scaled(s, q) => {
                        values.get(&q).cloned().unwrap_or_else(Rational::zero) * Rational::from_integer(s.into())
                    }
                };
                (*p, v)
            })
            .collect()),
    }
}

impl Presolved {
    /// Presolve failed on a constant row: without the elimination record,
    /// report every origin mentioning the row's variables.
    fn empty_explain(sys: &LinearSystem, row: &Row) -> Vec<Origin> {
        let vars: BTreeSet<IntParam> = row.comb.params().collect();
        sys.rows
            .iter()
            .filter(|r| r.kind == RowKind::Eq && r.comb.params().any(|p| vars.contains(&p)))
            .filter_map(|r| r.origin.clone())
            .collect()
    }
}

fn finish(psi: &BoolSolution, sys: &LinearSystem, rational: BTreeMap<IntParam, Rational>) -> Result<Solution, Unsat> {
    let (scaled, scale) = scale_to_integers(&rational);
    let mut phi = Instantiation::new();
    for (b, v) in &psi.0 {
        phi.set_bool(*b, *v);
    }
    for (p, v) in &scaled {
        phi.set_int(*p, v.to_i64().ok_or(Unsat::Overflow)?);
    }
    let objective = sys.objective_value(&phi.ints);
    Ok(Solution { instantiation: phi, rational, scale, objective })
}

/// Minimal boolean part, optimal rational linear part scaled to integers.
/// `None` when the constraints have no solution.
pub fn solve(s: &ConstraintSet) -> Option<Instantiation> {
    solve_detailed(s, None, &RationalSource::Simplex).outcome.ok().map(|sol| sol.instantiation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{Constraint, Family};
    use crate::param::LinComb;

    fn o() -> Origin {
        Origin::new(Family::Ltype, "test", "root")
    }

    #[test]
    fn mixed_rows_follow_booleans() {
        let b = BoolParam(1);
        let n1 = IntParam::exponent(1);
        let mut s = ConstraintSet::new();
        s.insert(Constraint::BoolConst(b, true), o());
        s.insert(Constraint::MixedGeq1(b, LinComb::param(n1)), o());
        let phi = solve(&s).unwrap();
        assert_eq!(phi.int(n1).unwrap(), 1);
        assert!(s.iter().all(|(c, _)| c.holds(&phi).unwrap()));
    }

    #[test]
    fn linear_kernel_names_rows() {
        let (b, n1, m1) = (BoolParam(1), IntParam::exponent(1), IntParam::door(1));
        let mut s = ConstraintSet::new();
        s.insert(Constraint::BoolConst(b, true), o());
        s.insert(Constraint::MixedGeq1(b, LinComb::param(n1)), Origin::new(Family::Bang, "ii", "0"));
        s.insert(Constraint::LinEq0(LinComb::param(n1)), Origin::new(Family::Bracket, "i", "1"));
        s.insert(Constraint::LinGeq0(LinComb::param(m1)), o());
        let r = solve_detailed(&s, None, &RationalSource::Simplex);
        let Err(Unsat::Linear { kernel }) = r.outcome else { panic!("{:?}", r.outcome) };
        assert_eq!(kernel.len(), 2);
    }

    #[test]
    fn scaling_clears_denominators() {
        let mut v = BTreeMap::new();
        v.insert(IntParam::exponent(1), Rational::new(1.into(), 2.into()));
        v.insert(IntParam::exponent(2), Rational::new(2.into(), 3.into()));
        let (s, l) = scale_to_integers(&v);
        assert_eq!(l, BigInt::from(6));
        assert_eq!(s[&IntParam::exponent(1)], BigInt::from(3));
        assert_eq!(s[&IntParam::exponent(2)], BigInt::from(4));
    }
}
