use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::constraints::{Constraint, ConstraintSet, Origin};
use crate::param::BoolParam;

/// Assignment of the boolean parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoolSolution(pub BTreeMap<BoolParam, bool>);

impl BoolSolution {
    pub fn get(&self, b: BoolParam) -> bool {
        self.0.get(&b).copied().unwrap_or(false)
    }

    pub fn ones(&self) -> impl Iterator<Item = BoolParam> + '_ {
        self.0.iter().filter(|(_, v)| **v).map(|(b, _)| *b)
    }
}

/// Some `b` is forced to 1 and required to be 0. The kernel is the chain of
/// constraints that forces it, followed by the clashing `b = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolClash {
    pub param: BoolParam,
    pub kernel: Vec<(Constraint, Origin)>,
}

/// Saturate `b = 1` facts along equalities and implications, then set every
/// parameter not forced to 1 to 0. This is the pointwise least solution
/// whenever one exists.
pub fn solve_bool<I>(bc: &ConstraintSet, universe: I) -> Result<BoolSolution, BoolClash>
where
    I: IntoIterator<Item = BoolParam>,
{
    let items: Vec<&(Constraint, Origin)> = bc.iter().collect();
    let mut succ: BTreeMap<BoolParam, Vec<(BoolParam, usize)>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    // why[b] = (constraint index, predecessor) for derived facts.
    let mut why: BTreeMap<BoolParam, (usize, Option<BoolParam>)> = BTreeMap::new();
    for (k, (c, _)) in items.iter().enumerate() {
        match c {
            Constraint::BoolEq(a, b) => {
                succ.entry(*a).or_default().push((*b, k));
                succ.entry(*b).or_default().push((*a, k));
            }
            Constraint::BoolImp(a, b) => succ.entry(*a).or_default().push((*b, k)),
            Constraint::BoolConst(b, true) if !why.contains_key(b) => {
                why.insert(*b, (k, None));
                queue.push_back(*b);
            }
            _ => {}
        }
    }
    while let Some(a) = queue.pop_front() {
        for &(b, k) in succ.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
            if let std::collections::btree_map::Entry::Vacant(e) = why.entry(b) {
                e.insert((k, Some(a)));
                queue.push_back(b);
            }
        }
    }
    for (c, o) in &items {
        if let Constraint::BoolConst(b, false) = c {
            if why.contains_key(b) {
                let mut kernel = Vec::new();
                let mut cur = Some(*b);
                while let Some(p) = cur {
                    let (idx, prev) = why[&p];
                    kernel.push(items[idx].clone());
                    cur = prev;
                }
                kernel.reverse();
                kernel.push((c.clone(), o.clone()));
                return Err(BoolClash { param: *b, kernel });
            }
        }
    }
    let mut all: BTreeSet<BoolParam> = universe.into_iter().collect();
    for (c, _) in &items {
        all.extend(c.bool_params());
    }
    Ok(BoolSolution(all.into_iter().map(|b| (b, why.contains_key(&b))).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::Family;

    fn set(cs: Vec<Constraint>) -> ConstraintSet {
        cs.into_iter().map(|c| (c, Origin::new(Family::Ltype, "test", "here"))).collect()
    }

    #[test]
    fn equality_propagates() {
        let (b1, b2) = (BoolParam(1), BoolParam(2));
        let s = solve_bool(&set(vec![Constraint::BoolEq(b1, b2), Constraint::BoolConst(b2, true)]), []).unwrap();
        assert!(s.get(b1) && s.get(b2));
    }

    #[test]
    fn clash_detected() {
        let (b, b2) = (BoolParam(1), BoolParam(2));
        let r = solve_bool(
            &set(vec![Constraint::BoolConst(b, false), Constraint::BoolImp(b2, b), Constraint::BoolConst(b2, true)]),
            [],
        );
        let clash = r.unwrap_err();
        assert_eq!(clash.param, b);
        assert_eq!(clash.kernel.len(), 3);
    }

    #[test]
    fn empty_is_all_zero() {
        let s = solve_bool(&ConstraintSet::new(), [BoolParam(1)]).unwrap();
        assert!(!s.get(BoolParam(1)));
        assert_eq!(s.0.len(), 1);
    }
}
