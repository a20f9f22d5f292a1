//! Parameterized types and terms, free decorations and instantiations.

mod dump;
mod pterm;
mod ptype;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

pub use dump::{dump_pterm, parse_instantiation, parse_pterm_dump, write_instantiation, DumpError};
pub(crate) use pterm::path_string;
pub use pterm::{
    free_decorate_term, instantiate_term, Decorated, FlatNode, FlatTerm, NodeKind, PNode, PTerm, PVar, Part, SubtermPos,
};
pub use ptype::{adm_constraints, free_decorate_type, BangPType, DecorationKind, LinPType, PType, PF};

/// Integer parameters are either door counts on term nodes or exponents in types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamKind {
    Door,
    Exponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntParam {
    pub kind: ParamKind,
    pub id: u32,
}

impl IntParam {
    pub fn door(id: u32) -> Self {
        Self { kind: ParamKind::Door, id }
    }

    pub fn exponent(id: u32) -> Self {
        Self { kind: ParamKind::Exponent, id }
    }

    pub fn is_door(&self) -> bool {
        self.kind == ParamKind::Door
    }
}

impl fmt::Display for IntParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ParamKind::Door => write!(f, "m{}", self.id),
            ParamKind::Exponent => write!(f, "n{}", self.id),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoolParam(pub u32);

impl fmt::Display for BoolParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.0)
    }
}

/// Integer linear combination of parameters without constant term.
/// Generated combinations are sums with unit coefficients; the data-type
/// rows also need differences, hence signed coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinComb(BTreeMap<IntParam, i64>);

impl LinComb {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn param(p: IntParam) -> Self {
        let mut m = BTreeMap::new();
        m.insert(p, 1);
        Self(m)
    }

    pub fn sum<I: IntoIterator<Item = IntParam>>(params: I) -> Self {
        let mut c = Self::zero();
        for p in params {
            c.add_term(p, 1);
        }
        c
    }

    pub fn add_term(&mut self, p: IntParam, coeff: i64) {
        let e = self.0.entry(p).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.0.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (IntParam, i64)> + '_ {
        self.0.iter().map(|(p, c)| (*p, *c))
    }

    pub fn params(&self) -> impl Iterator<Item = IntParam> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, p: IntParam) -> i64 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    /// A single parameter with coefficient one, if that is all there is.
    pub fn as_single(&self) -> Option<IntParam> {
        match self.0.iter().next() {
            Some((p, 1)) if self.0.len() == 1 => Some(*p),
            _ => None,
        }
    }

    pub fn eval(&self, phi: &Instantiation) -> Result<i64, InstantiationError> {
        let mut total = 0i64;
        for (p, c) in self.terms() {
            total += c * phi.int(p)?;
        }
        Ok(total)
    }
}

impl Add for &LinComb {
    type Output = LinComb;
    fn add(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (p, c) in rhs.terms() {
            out.add_term(p, c);
        }
        out
    }
}

impl Sub for &LinComb {
    type Output = LinComb;
    fn sub(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (p, c) in rhs.terms() {
            out.add_term(p, -c);
        }
        out
    }
}

impl Neg for &LinComb {
    type Output = LinComb;
    fn neg(self) -> LinComb {
        LinComb(self.0.iter().map(|(p, c)| (*p, -c)).collect())
    }
}

impl fmt::Display for LinComb {
    /// Positive terms first, so `n7 - n4` reads naturally.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let ordered = self.0.iter().filter(|(_, c)| **c > 0).chain(self.0.iter().filter(|(_, c)| **c < 0));
        for (i, (p, c)) in ordered.enumerate() {
            let mag = c.abs();
            match (i, *c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Where a parameter was introduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamOrigin {
    pub description: String,
}

/// Fresh-parameter source for one inference job, with origin metadata.
#[derive(Clone, Debug, Default)]
pub struct ParamSource {
    doors: Vec<ParamOrigin>,
    exponents: Vec<ParamOrigin>,
    bools: Vec<ParamOrigin>,
}

impl ParamSource {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn door(&mut self, origin: impl Into<String>) -> IntParam {
        self.doors.push(ParamOrigin { description: origin.into() });
        IntParam::door(self.doors.len() as u32)
    }

    pub fn exponent(&mut self, origin: impl Into<String>) -> IntParam {
        self.exponents.push(ParamOrigin { description: origin.into() });
        IntParam::exponent(self.exponents.len() as u32)
    }

    pub fn boolean(&mut self, origin: impl Into<String>) -> BoolParam {
        self.bools.push(ParamOrigin { description: origin.into() });
        BoolParam(self.bools.len() as u32)
    }

    pub fn door_count(&self) -> usize {
        self.doors.len()
    }

    pub fn exponent_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn bool_count(&self) -> usize {
        self.bools.len()
    }

    pub fn int_params(&self) -> impl Iterator<Item = IntParam> + '_ {
        (1..=self.doors.len() as u32)
            .map(IntParam::door)
            .chain((1..=self.exponents.len() as u32).map(IntParam::exponent))
    }

    pub fn bool_params(&self) -> impl Iterator<Item = BoolParam> + '_ {
        (1..=self.bools.len() as u32).map(BoolParam)
    }

    pub fn origin_int(&self, p: IntParam) -> Option<&ParamOrigin> {
        let list = match p.kind {
            ParamKind::Door => &self.doors,
            ParamKind::Exponent => &self.exponents,
        };
        list.get((p.id as usize).checked_sub(1)?)
    }

    pub fn origin_bool(&self, b: BoolParam) -> Option<&ParamOrigin> {
        self.bools.get((b.0 as usize).checked_sub(1)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiationError {
    #[error("no value for integer parameter {0}")]
    MissingInt(IntParam),
    #[error("no value for boolean parameter {0}")]
    MissingBool(BoolParam),
    #[error("inadmissible: exponent {comb} evaluates to {value} < 0")]
    NegativeExponent { comb: String, value: i64 },
    #[error("inadmissible: {bang} = 1 but exponent {comb} evaluates to {value} < 1")]
    BangWithoutExponent { bang: BoolParam, comb: String, value: i64 },
}

/// Values for boolean and integer parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Instantiation {
    pub bools: BTreeMap<BoolParam, bool>,
    pub ints: BTreeMap<IntParam, i64>,
}

impl Instantiation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn int(&self, p: IntParam) -> Result<i64, InstantiationError> {
        self.ints.get(&p).copied().ok_or(InstantiationError::MissingInt(p))
    }

    pub fn boolean(&self, b: BoolParam) -> Result<bool, InstantiationError> {
        self.bools.get(&b).copied().ok_or(InstantiationError::MissingBool(b))
    }

    pub fn set_int(&mut self, p: IntParam, v: i64) {
        self.ints.insert(p, v);
    }

    pub fn set_bool(&mut self, b: BoolParam, v: bool) {
        self.bools.insert(b, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lincomb_display() {
        let n4 = IntParam::exponent(4);
        let n7 = IntParam::exponent(7);
        let c = &LinComb::param(n7) - &LinComb::param(n4);
        assert_eq!(c.to_string(), "n7 - n4");
        assert_eq!((-&c).to_string(), "n4 - n7");
        let m = LinComb::sum([IntParam::door(1), IntParam::door(2)]);
        assert_eq!(m.to_string(), "m1 + m2");
        assert_eq!(LinComb::zero().to_string(), "0");
    }

    #[test]
    fn lincomb_cancels() {
        let n1 = IntParam::exponent(1);
        let c = &LinComb::param(n1) - &LinComb::param(n1);
        assert!(c.is_zero());
    }

    #[test]
    fn separate_counters() {
        let mut src = ParamSource::new();
        assert_eq!(src.door("a").to_string(), "m1");
        assert_eq!(src.exponent("b").to_string(), "n1");
        assert_eq!(src.boolean("c").to_string(), "b1");
        assert_eq!(src.door("d").to_string(), "m2");
        assert_eq!(src.origin_int(IntParam::door(2)).unwrap().description, "d");
    }
}
