//! Exact two-phase primal simplex with Bland's rule.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::param::IntParam;

use super::linear::{LinearSystem, RowKind};
use super::num::Q;

pub type Rational = BigRational;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplexStats {
    pub rows: usize,
    pub columns: usize,
    pub pivots: usize,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal {
        values: BTreeMap<IntParam, Rational>,
        objective: Rational,
    },
    /// Indices of the rows carrying a nonzero Phase-1 dual.
    Infeasible {
        rows: Vec<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Col {
    Plus(usize),
    Minus(usize),
    Slack(usize),
    Artificial(usize),
}

struct Tableau {
    a: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.a[r][c].recip();
        if !inv.is_one() {
            for v in self.a[r].iter_mut().filter(|v| !v.is_zero()) {
                *v = v.mul(&inv);
            }
            self.rhs[r] = self.rhs[r].mul(&inv);
        }
        let support: Vec<usize> = (0..self.a[r].len()).filter(|&j| !self.a[r][j].is_zero()).collect();
        let prow: Vec<Q> = support.iter().map(|&j| self.a[r][j].clone()).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            let row = &mut self.a[i];
            for (k, &j) in support.iter().enumerate() {
                row[j] = row[j].sub(&f.mul(&prow[k]));
            }
            if !prhs.is_zero() {
                self.rhs[i] = self.rhs[i].sub(&f.mul(&prhs));
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn reduced_costs(&self, cost: &[Q]) -> Vec<Q> {
        let mut d = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (j, v) in self.a[i].iter().enumerate() {
                if !v.is_zero() {
                    d[j] = d[j].sub(&cost[b].mul(v));
                }
            }
        }
        d
    }

    /// Minimize `cost` from the current feasible basis. Columns with
    /// `allowed[j] == false` never enter.
    fn optimize(&mut self, cost: &[Q], allowed: &[bool]) -> Vec<Q> {
        let mut d = self.reduced_costs(cost);
        loop {
            let Some(e) = (0..d.len()).find(|&j| allowed[j] && d[j].is_negative()) else { return d };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][e].is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].div(&self.a[i][e]);
                let better = match &best {
                    None => true,
                    Some((bi, br)) => match ratio.cmp(br) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*bi],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            // Costs are nonnegative on nonnegative variables, so the problem is bounded.
            let (r, _) = best.expect("bounded objective");
            // After the pivot, row `r` is normalized so that its entry in column `e` is 1.
            self.pivot(r, e);
            let f = d[e].clone();
            for (j, v) in self.a[r].iter().enumerate() {
                if !v.is_zero() {
                    d[j] = d[j].sub(&f.mul(v));
                }
            }
        }
    }
}

/// Solve `min sum w_p |p|` subject to the rows, doors free, exponents nonnegative.
pub fn solve_lp(sys: &LinearSystem) -> (LpOutcome, SimplexStats) {
    let vars: Vec<IntParam> = sys.vars.iter().copied().collect();
    let index: BTreeMap<IntParam, usize> = vars.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut cols = Vec::new();
    let mut plus = vec![0; vars.len()];
    let mut minus = vec![usize::MAX; vars.len()];
    for (i, p) in vars.iter().enumerate() {
        plus[i] = cols.len();
        cols.push(Col::Plus(i));
        if p.is_door() {
            minus[i] = cols.len();
            cols.push(Col::Minus(i));
        }
    }
    let m = sys.rows.len();
    // Per row: sign normalization so that rhs >= 0, and slack / artificial columns.
    let mut rows: Vec<(Vec<(usize, i64)>, i64)> = Vec::with_capacity(m);
    let mut slack = vec![None; m];
    let mut artificial = vec![None; m];
    let mut basis = vec![0; m];
    for (r, row) in sys.rows.iter().enumerate() {
        let mut entries = Vec::new();
        for (p, k) in row.comb.terms() {
            let i = index[&p];
            entries.push((plus[i], k));
            if minus[i] != usize::MAX {
                entries.push((minus[i], -k));
            }
        }
        let mut rhs = row.rhs;
        if row.kind == RowKind::Geq {
            slack[r] = Some(cols.len());
            entries.push((cols.len(), -1));
            cols.push(Col::Slack(r));
        }
        if rhs < 0 || (rhs == 0 && row.kind == RowKind::Geq) {
            for e in entries.iter_mut() {
                e.1 = -e.1;
            }
            rhs = -rhs;
        }
        if row.kind == RowKind::Geq && (rhs == 0 || row.rhs < 0) {
            basis[r] = slack[r].unwrap();
        } else {
            artificial[r] = Some(cols.len());
            basis[r] = cols.len();
            entries.push((cols.len(), 1));
            cols.push(Col::Artificial(r));
        }
        rows.push((entries, rhs));
    }
    let n = cols.len();
    let mut t = Tableau {
        a: rows
            .iter()
            .map(|(entries, _)| {
                let mut v = vec![Q::zero(); n];
                for (j, k) in entries {
                    v[*j] = v[*j].add(&Q::int(*k));
                }
                v
            })
            .collect(),
        rhs: rows.iter().map(|(_, b)| Q::int(*b)).collect(),
        basis,
        pivots: 0,
    };
    let is_art: Vec<bool> = cols.iter().map(|c| matches!(c, Col::Artificial(_))).collect();
    let allowed: Vec<bool> = is_art.iter().map(|a| !a).collect();

    if is_art.iter().any(|a| *a) {
        let cost: Vec<Q> = is_art.iter().map(|a| if *a { Q::one() } else { Q::zero() }).collect();
        let d = t.optimize(&cost, &allowed);
        let infeasible = t.basis.iter().zip(&t.rhs).any(|(b, v)| is_art[*b] && v.is_positive());
        if infeasible {
            // y_r from the reduced cost of the column that started as +e_r.
            let duals = (0..m)
                .filter(|&r| match (artificial[r], slack[r]) {
                    (Some(a), _) => !d[a].is_one(),
                    (None, Some(s)) => !d[s].is_zero(),
                    (None, None) => false,
                })
                .collect();
            let stats = SimplexStats { rows: m, columns: n, pivots: t.pivots };
            return (LpOutcome::Infeasible { rows: duals }, stats);
        }
        // Drive remaining artificials (at level zero) out of the basis when possible.
        for r in 0..m {
            if is_art[t.basis[r]] {
                if let Some(c) = (0..n).find(|&j| !is_art[j] && !t.a[r][j].is_zero()) {
                    t.pivot(r, c);
                }
            }
        }
    }

    let cost: Vec<Q> = cols
        .iter()
        .map(|c| match c {
            Col::Plus(i) | Col::Minus(i) => Q::int(sys.objective.get(&vars[*i]).copied().unwrap_or(0)),
            _ => Q::zero(),
        })
        .collect();
    t.optimize(&cost, &allowed);
    let mut value = vec![Rational::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        value[b] = t.rhs[r].to_big();
    }
    let mut values = BTreeMap::new();
    let mut objective = Rational::zero();
    for (i, p) in vars.iter().enumerate() {
        let mut v = value[plus[i]].clone();
        if minus[i] != usize::MAX {
            v -= &value[minus[i]];
        }
        objective += v.abs() * Rational::from_integer(sys.objective.get(p).copied().unwrap_or(0).into());
        values.insert(*p, v);
    }
    let stats = SimplexStats { rows: m, columns: n, pivots: t.pivots };
    (LpOutcome::Optimal { values, objective }, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::LinComb;
    use crate::solver::linear::Row;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn fractional_optimum() {
        // 2 n1 >= 1, minimize n1.
        let mut c = LinComb::zero();
        c.add_term(IntParam::exponent(1), 2);
        let sys = LinearSystem::new([], vec![Row::new(c, RowKind::Geq, 1, None)]);
        let (out, _) = solve_lp(&sys);
        match out {
            LpOutcome::Optimal { values, objective } => {
                assert_eq!(values[&IntParam::exponent(1)], r(1, 2));
                assert_eq!(objective, r(1, 2));
            }
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn free_door_goes_negative() {
        // m1 + n1 = 0, n1 >= 1: m1 = -1.
        let (m1, n1) = (IntParam::door(1), IntParam::exponent(1));
        let rows = vec![
            Row::new(LinComb::sum([m1, n1]), RowKind::Eq, 0, None),
            Row::new(LinComb::param(n1), RowKind::Geq, 1, None),
        ];
        let (out, _) = solve_lp(&LinearSystem::new([], rows));
        let LpOutcome::Optimal { values, .. } = out else { panic!() };
        assert_eq!(values[&m1], r(-1, 1));
        assert_eq!(values[&n1], r(1, 1));
    }

    #[test]
    fn infeasible_kernel() {
        // n1 + n2 = 0 and n1 >= 1 conflict; n3 >= 1 is irrelevant.
        let (n1, n2, n3) = (IntParam::exponent(1), IntParam::exponent(2), IntParam::exponent(3));
        let rows = vec![
            Row::new(LinComb::param(n3), RowKind::Geq, 1, None),
            Row::new(LinComb::sum([n1, n2]), RowKind::Eq, 0, None),
            Row::new(LinComb::param(n1), RowKind::Geq, 1, None),
        ];
        let (out, _) = solve_lp(&LinearSystem::new([], rows));
        let LpOutcome::Infeasible { rows } = out else { panic!() };
        assert_eq!(rows, vec![1, 2]);
    }
}
