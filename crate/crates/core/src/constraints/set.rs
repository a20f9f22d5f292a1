use std::collections::HashSet;
use std::fmt;

use crate::param::{BoolParam, Instantiation, InstantiationError, IntParam, LinComb};

/// The eight constraint shapes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    BoolEq(BoolParam, BoolParam),
    BoolConst(BoolParam, bool),
    /// `b = 1 => b' = 1`
    BoolImp(BoolParam, BoolParam),
    LinEq(LinComb, LinComb),
    LinGeq0(LinComb),
    LinEq0(LinComb),
    /// `b = 1 => c = 0`
    MixedEq0(BoolParam, LinComb),
    /// `b = 1 => c >= 1`
    MixedGeq1(BoolParam, LinComb),
}

/// Coarse classification used by the solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Boolean,
    Linear,
    Mixed,
}

impl Constraint {
    pub fn lin_eq(a: LinComb, b: LinComb) -> Self {
        Constraint::LinEq(a, b)
    }

    pub fn sort(&self) -> Sort {
        match self {
            Constraint::BoolEq(..) | Constraint::BoolConst(..) | Constraint::BoolImp(..) => Sort::Boolean,
            Constraint::LinEq(..) | Constraint::LinGeq0(_) | Constraint::LinEq0(_) => Sort::Linear,
            Constraint::MixedEq0(..) | Constraint::MixedGeq1(..) => Sort::Mixed,
        }
    }

    /// Canonical form, or `None` when the constraint holds for every instantiation.
    pub fn normalize(self) -> Option<Constraint> {
        match self {
            Constraint::BoolEq(a, b) if a == b => None,
            Constraint::BoolEq(a, b) => Some(Constraint::BoolEq(a.min(b), a.max(b))),
            Constraint::BoolImp(a, b) if a == b => None,
            Constraint::LinEq(a, b) => {
                if a == b {
                    None
                } else if b.is_zero() {
                    Some(Constraint::LinEq0(a))
                } else if a.is_zero() {
                    Some(Constraint::LinEq0(b))
                } else if a <= b {
                    Some(Constraint::LinEq(a, b))
                } else {
                    Some(Constraint::LinEq(b, a))
                }
            }
            Constraint::LinGeq0(c) if c.is_zero() => None,
            Constraint::LinEq0(c) if c.is_zero() => None,
            Constraint::MixedEq0(_, c) if c.is_zero() => None,
            Constraint::MixedGeq1(b, c) if c.is_zero() => Some(Constraint::BoolConst(b, false)),
            other => Some(other),
        }
    }

    pub fn bool_params(&self) -> Vec<BoolParam> {
        match self {
            Constraint::BoolEq(a, b) | Constraint::BoolImp(a, b) => vec![*a, *b],
            Constraint::BoolConst(b, _) | Constraint::MixedEq0(b, _) | Constraint::MixedGeq1(b, _) => vec![*b],
            _ => Vec::new(),
        }
    }

    pub fn int_params(&self) -> Vec<IntParam> {
        match self {
            Constraint::LinEq(a, b) => a.params().chain(b.params()).collect(),
            Constraint::LinGeq0(c)
            | Constraint::LinEq0(c)
            | Constraint::MixedEq0(_, c)
            | Constraint::MixedGeq1(_, c) => c.params().collect(),
            _ => Vec::new(),
        }
    }

    /// Whether `phi` satisfies the constraint.
    pub fn holds(&self, phi: &Instantiation) -> Result<bool, InstantiationError> {
        Ok(match self {
            Constraint::BoolEq(a, b) => phi.boolean(*a)? == phi.boolean(*b)?,
            Constraint::BoolConst(b, v) => phi.boolean(*b)? == *v,
            Constraint::BoolImp(a, b) => !phi.boolean(*a)? || phi.boolean(*b)?,
            Constraint::LinEq(a, b) => a.eval(phi)? == b.eval(phi)?,
            Constraint::LinGeq0(c) => c.eval(phi)? >= 0,
            Constraint::LinEq0(c) => c.eval(phi)? == 0,
            Constraint::MixedEq0(b, c) => !phi.boolean(*b)? || c.eval(phi)? == 0,
            Constraint::MixedGeq1(b, c) => !phi.boolean(*b)? || c.eval(phi)? >= 1,
        })
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::BoolEq(a, b) => write!(f, "B {a} = {b}"),
            Constraint::BoolConst(b, v) => write!(f, "B {b} = {}", u8::from(*v)),
            Constraint::BoolImp(a, b) => write!(f, "B {a} -> {b}"),
            Constraint::LinEq(a, b) => write!(f, "L {a} = {b}"),
            Constraint::LinGeq0(c) => write!(f, "L {c} >= 0"),
            Constraint::LinEq0(c) => write!(f, "L {c} = 0"),
            Constraint::MixedEq0(b, c) => write!(f, "M {b} -> {c} = 0"),
            Constraint::MixedGeq1(b, c) => write!(f, "M {b} -> {c} >= 1"),
        }
    }
}

/// Which generator produced a constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Ltype,
    Bracket,
    Bang,
    Scope,
    Domain,
    Pin,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::Ltype, Family::Bracket, Family::Bang, Family::Scope, Family::Domain, Family::Pin];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Ltype => "ltype",
            Family::Bracket => "bracket",
            Family::Bang => "bang",
            Family::Scope => "scope",
            Family::Domain => "domain",
            Family::Pin => "pin",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Origin {
    pub family: Family,
    pub rule: &'static str,
    pub site: String,
}

impl Origin {
    pub fn new(family: Family, rule: &'static str, site: impl Into<String>) -> Self {
        Self { family, rule, site: site.into() }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} at {}", self.family.name(), self.rule, self.site)
    }
}

/// Ordered, deduplicated constraints. The first origin of a duplicate wins.
#[derive(Clone, Debug, Default)]
pub struct ConstraintSet {
    items: Vec<(Constraint, Origin)>,
    seen: HashSet<Constraint>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert after normalization. Returns whether the set grew.
    pub fn insert(&mut self, c: Constraint, origin: Origin) -> bool {
        let Some(c) = c.normalize() else { return false };
        if self.seen.contains(&c) {
            return false;
        }
        self.seen.insert(c.clone());
        self.items.push((c, origin));
        true
    }

    pub fn extend<I: IntoIterator<Item = (Constraint, Origin)>>(&mut self, iter: I) {
        for (c, o) in iter {
            self.insert(c, o);
        }
    }

    pub fn union(&mut self, other: ConstraintSet) {
        self.extend(other.items);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        match c.clone().normalize() {
            Some(n) => self.seen.contains(&n),
            None => true,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Constraint, Origin)> {
        self.items.iter()
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.items.iter().map(|(c, _)| c)
    }

    pub fn count_by_family(&self, family: Family) -> usize {
        self.items.iter().filter(|(_, o)| o.family == family).count()
    }

    /// Dump format: one constraint per line followed by its origin.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (c, o) in &self.items {
            out.push_str(&format!("{c}  # origin: {o}\n"));
        }
        out
    }
}

impl IntoIterator for ConstraintSet {
    type Item = (Constraint, Origin);
    type IntoIter = std::vec::IntoIter<(Constraint, Origin)>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

impl FromIterator<(Constraint, Origin)> for ConstraintSet {
    fn from_iter<T: IntoIterator<Item = (Constraint, Origin)>>(iter: T) -> Self {
        let mut s = ConstraintSet::new();
        s.extend(iter);
        s
    }
}
