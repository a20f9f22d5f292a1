//! Elimination of parameters fixed to zero and of parameters equal up to sign.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::constraints::Origin;
use crate::param::{IntParam, LinComb};

use super::linear::{LinearSystem, Row, RowKind};

/// How an eliminated variable is recovered from the reduced system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolved {
    Zero,
    Scaled(i64, IntParam),
}

#[derive(Clone, Debug)]
pub struct Presolved {
    pub system: LinearSystem,
    pub map: BTreeMap<IntParam, Resolved>,
    /// Rows that caused each elimination.
    pub because: BTreeMap<IntParam, Vec<Origin>>,
    pub eliminated: usize,
}

impl Presolved {
    pub fn resolve(&self, p: IntParam) -> Resolved {
        self.map.get(&p).copied().unwrap_or(Resolved::Scaled(1, p))
    }

    /// Origins of the rows that eliminated any of the given original variables.
    pub fn explain<I: IntoIterator<Item = IntParam>>(&self, vars: I) -> Vec<Origin> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for p in vars {
            for o in self.because.get(&p).into_iter().flatten() {
                if seen.insert(o.clone()) {
                    out.push(o.clone());
                }
            }
        }
        out
    }
}

/// A constant row that cannot hold. `vars` lists the original variables of the row.
#[derive(Clone, Debug)]
pub struct Infeasible {
    pub row: Row,
}

struct Uf {
    parent: BTreeMap<IntParam, (IntParam, i64)>,
    zero: BTreeSet<IntParam>,
    because: BTreeMap<IntParam, Vec<Origin>>,
}

impl Uf {
    /// `(rep, sign)` with `p = sign * rep`.
    fn find(&mut self, p: IntParam) -> (IntParam, i64) {
        let Some(&(q, s)) = self.parent.get(&p) else { return (p, 1) };
        let (r, t) = self.find(q);
        self.parent.insert(p, (r, s * t));
        (r, s * t)
    }

    fn resolve(&mut self, p: IntParam) -> Resolved {
        let (r, s) = self.find(p);
        if self.zero.contains(&r) {
            Resolved::Zero
        } else {
            Resolved::Scaled(s, r)
        }
    }

    fn note(&mut self, p: IntParam, o: &Option<Origin>) {
        if let Some(o) = o {
            self.because.entry(p).or_default().push(o.clone());
        }
    }

    fn set_zero(&mut self, p: IntParam, o: &Option<Origin>) {
        let (r, _) = self.find(p);
        self.note(r, o);
        self.zero.insert(r);
    }

    /// Record `p = sign * q`.
    fn union(&mut self, p: IntParam, sign: i64, q: IntParam, o: &Option<Origin>) {
        let (rp, sp) = self.find(p);
        let (rq, sq) = self.find(q);
        let s = sp * sign * sq;
        if rp == rq {
            if s == -1 {
                self.set_zero(rp, o);
            }
            return;
        }
        // Keep the smaller parameter as representative for stable output.
        let (child, root) = if rq < rp { (rp, rq) } else { (rq, rp) };
        self.note(child, o);
        self.parent.insert(child, (root, s));
        if self.zero.remove(&child) {
            self.zero.insert(root);
        }
    }

    fn substitute(&mut self, c: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (p, k) in c.terms() {
            if let Resolved::Scaled(s, r) = self.resolve(p) {
                out.add_term(r, s * k);
            }
        }
        out
    }
}

pub fn presolve(sys: &LinearSystem) -> Result<Presolved, Infeasible> {
    let mut uf = Uf { parent: BTreeMap::new(), zero: BTreeSet::new(), because: BTreeMap::new() };
    let mut rows: Vec<Row> = sys.rows.clone();
    loop {
        let mut changed = false;
        let mut kept = Vec::with_capacity(rows.len());
        for row in rows {
            let comb = uf.substitute(&row.comb);
            if comb.is_zero() {
                let ok = match row.kind {
                    RowKind::Eq => row.rhs == 0,
                    RowKind::Geq => row.rhs <= 0,
                };
                if !ok {
                    return Err(Infeasible { row });
                }
                continue;
            }
            let terms: Vec<(IntParam, i64)> = comb.terms().collect();
            let all_exp_same_sign = terms.iter().all(|(p, _)| !p.is_door())
                && (terms.iter().all(|(_, k)| *k > 0) || terms.iter().all(|(_, k)| *k < 0));
            match (row.kind, row.rhs) {
                (RowKind::Eq, 0) if terms.len() == 1 || all_exp_same_sign => {
                    for (p, _) in &terms {
                        uf.set_zero(*p, &row.origin);
                    }
                    changed = true;
                    continue;
                }
                (RowKind::Eq, 0)
                    if terms.len() == 2
                        && terms[0].1.abs() == terms[1].1.abs()
                        && terms[0].0.kind == terms[1].0.kind =>
                {
                    let (p, q) = (terms[0].0, terms[1].0);
                    let sign = if terms[0].1 == terms[1].1 { -1 } else { 1 };
                    uf.union(p, sign, q, &row.origin);
                    changed = true;
                    continue;
                }
                (RowKind::Geq, r) if r <= 0 && terms.iter().all(|(p, k)| !p.is_door() && *k > 0) => continue,
                _ => {}
            }
            kept.push(Row { comb, ..row });
        }
        rows = kept;
        if !changed {
            break;
        }
    }
    // Deduplicate rows, keeping the first origin.
    let mut seen = HashSet::new();
    rows.retain(|r| seen.insert((r.comb.clone(), r.kind, r.rhs)));

    let mut map = BTreeMap::new();
    let mut objective: BTreeMap<IntParam, i64> = BTreeMap::new();
    let mut eliminated = 0;
    for (&p, &w) in &sys.objective {
        let r = uf.resolve(p);
        match r {
            Resolved::Zero => eliminated += 1,
            Resolved::Scaled(_, q) => {
                *objective.entry(q).or_default() += w;
                if q != p {
                    eliminated += 1;
                }
            }
        }
        map.insert(p, r);
    }
    for &p in &sys.vars {
        map.entry(p).or_insert_with(|| uf.resolve(p));
    }
    let vars: BTreeSet<IntParam> =
        map.values().filter_map(|r| if let Resolved::Scaled(_, q) = r { Some(*q) } else { None }).collect();
    let mut because = BTreeMap::new();
    for &p in map.keys() {
        let mut why = Vec::new();
        let mut cur = p;
        loop {
            why.extend(uf.because.get(&cur).cloned().unwrap_or_default());
            match uf.parent.get(&cur) {
                Some(&(q, _)) => cur = q,
                None => break,
            }
        }
        if !why.is_empty() {
            because.insert(p, why);
        }
    }
    Ok(Presolved { system: LinearSystem { vars, rows, objective }, map, because, eliminated })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(i: u32) -> IntParam {
        IntParam::door(i)
    }

    #[test]
    fn signed_union_and_zero() {
        let rows = vec![
            Row::new(LinComb::sum([m(1), m(2)]), RowKind::Eq, 0, None),
            Row::new(LinComb::param(m(3)), RowKind::Eq, 0, None),
            Row::new(LinComb::sum([m(1), m(3)]), RowKind::Geq, 1, None),
        ];
        let p = presolve(&LinearSystem::new([], rows)).unwrap();
        assert_eq!(p.resolve(m(2)), Resolved::Scaled(-1, m(1)));
        assert_eq!(p.resolve(m(3)), Resolved::Zero);
        assert_eq!(p.system.rows.len(), 1);
        assert_eq!(p.system.objective[&m(1)], 2);
    }

    #[test]
    fn constant_clash() {
        let rows = vec![
            Row::new(LinComb::param(m(1)), RowKind::Eq, 0, None),
            Row::new(LinComb::param(m(1)), RowKind::Geq, 1, None),
        ];
        assert!(presolve(&LinearSystem::new([], rows)).is_err());
    }
}
