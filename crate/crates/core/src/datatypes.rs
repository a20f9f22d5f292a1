//! Constraint sets characterizing the decorations of the Church types for
//! unary integers and binary words, and domain specifications.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::constraints::{Constraint, ConstraintSet, Family, Origin};
use crate::fsyntax::{FType, IdGen, TyVar};
use crate::param::{BangPType, BoolParam, FlatTerm, LinComb, LinPType, NodeKind, PF};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Nat,
    Word,
}

impl Sort {
    pub fn system_f_type(&self) -> FType {
        let mut gen = IdGen::new();
        match self {
            Sort::Nat => FType::nat(&mut gen),
            Sort::Word => FType::word(&mut gen),
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Nat => "N",
            Sort::Word => "W",
        })
    }
}

impl FromStr for Sort {
    type Err = DomainError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "N" | "Nat" => Ok(Sort::Nat),
            "W" | "Word" => Ok(Sort::Word),
            other => Err(DomainError::Syntax(format!("unknown sort `{other}`, expected N or W"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("domain specification: {0}")]
    Syntax(String),
    #[error("no abstraction binds `{0}`")]
    UnknownVariable(String),
    #[error("`{var}` has type {found}, not the Church type for sort {sort}")]
    SortMismatch { var: String, sort: Sort, found: String },
}

/// `x1:N,x2:W`: each variable must be bound in the subject term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DomainSpec(pub Vec<(String, Sort)>);

impl DomainSpec {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for DomainSpec {
    type Err = DomainError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (var, sort) = item
                .split_once(':')
                .ok_or_else(|| DomainError::Syntax(format!("`{item}` is not of the form var:N or var:W")))?;
            let var = var.trim();
            if var.is_empty() {
                return Err(DomainError::Syntax(format!("missing variable in `{item}`")));
            }
            out.push((var.to_string(), sort.parse()?));
        }
        Ok(DomainSpec(out))
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|(v, s)| format!("{v}:{s}")).collect();
        f.write_str(&items.join(","))
    }
}

/// Decorated positions of the integer type, numbered in preorder from the root.
struct NatShape {
    exps: [LinComb; 9],
    b3: BoolParam,
    b4: BoolParam,
    b7: BoolParam,
}

/// Decorated positions of the word type.
struct WordShape {
    exps: [LinComb; 13],
    b3: BoolParam,
    b4: BoolParam,
    b7: BoolParam,
    b8: BoolParam,
    b11: BoolParam,
}

fn forall(t: &LinPType) -> Option<(&TyVar, &LinPType)> {
    match &t.body {
        PF::Forall(a, b) => Some((a, b)),
        _ => None,
    }
}

fn arrow(t: &PF) -> Option<(&BangPType, &LinPType)> {
    match t {
        PF::Arrow(d, b) => Some((d, b)),
        _ => None,
    }
}

fn is_var(t: &PF, a: &TyVar) -> bool {
    matches!(t, PF::Var(v) if v == a)
}

/// `$^{b,c} a -o $^{c'} a` as a bang domain.
fn endo<'a>(d: &'a BangPType, a: &TyVar) -> Option<(&'a BangPType, &'a LinPType)> {
    let (x, y) = arrow(&d.body)?;
    (is_var(&x.body, a) && is_var(&y.body, a)).then_some((x, y))
}

fn nat_shape(t: &LinPType) -> Option<NatShape> {
    let (a, l2) = forall(t)?;
    let (d3, l6) = arrow(&l2.body)?;
    let (d4, l5) = endo(d3, a)?;
    let (d7, l8) = arrow(&l6.body)?;
    if !(is_var(&d7.body, a) && is_var(&l8.body, a)) {
        return None;
    }
    let z = LinComb::zero;
    Some(NatShape {
        exps: [
            z(),
            t.exps.clone(),
            l2.exps.clone(),
            d3.exps.clone(),
            d4.exps.clone(),
            l5.exps.clone(),
            l6.exps.clone(),
            d7.exps.clone(),
            l8.exps.clone(),
        ],
        b3: d3.bang,
        b4: d4.bang,
        b7: d7.bang,
    })
}

fn word_shape(t: &LinPType) -> Option<WordShape> {
    let (a, l2) = forall(t)?;
    let (d3, l6) = arrow(&l2.body)?;
    let (d4, l5) = endo(d3, a)?;
    let (d7, l10) = arrow(&l6.body)?;
    let (d8, l9) = endo(d7, a)?;
    let (d11, l12) = arrow(&l10.body)?;
    if !(is_var(&d11.body, a) && is_var(&l12.body, a)) {
        return None;
    }
    let z = LinComb::zero;
    Some(WordShape {
        exps: [
            z(),
            t.exps.clone(),
            l2.exps.clone(),
            d3.exps.clone(),
            d4.exps.clone(),
            l5.exps.clone(),
            l6.exps.clone(),
            d7.exps.clone(),
            d8.exps.clone(),
            l9.exps.clone(),
            l10.exps.clone(),
            d11.exps.clone(),
            l12.exps.clone(),
        ],
        b3: d3.bang,
        b4: d4.bang,
        b7: d7.bang,
        b8: d8.bang,
        b11: d11.bang,
    })
}

/// The bang flag on the step argument of an integer-shaped decoration.
pub fn nat_step_bang(t: &LinPType) -> Option<BoolParam> {
    nat_shape(t).map(|s| s.b3)
}

fn mismatch(var: &str, sort: Sort, t: &LinPType) -> DomainError {
    DomainError::SortMismatch { var: var.to_string(), sort, found: t.to_string() }
}

fn sum(a: &LinComb, b: &LinComb) -> LinComb {
    a + b
}

/// The integer rows on a linear decoration of the Church integer type.
pub fn nat_constraints(t: &LinPType, site: &str) -> Result<ConstraintSet, DomainError> {
    let s = nat_shape(t).ok_or_else(|| mismatch(site, Sort::Nat, t))?;
    let o = Origin::new(Family::Domain, "nat", site);
    let n = &s.exps;
    let mut rows = vec![
        Constraint::BoolConst(s.b3, true),
        Constraint::BoolConst(s.b4, false),
        Constraint::BoolConst(s.b7, false),
        Constraint::lin_eq(n[4].clone(), n[5].clone()),
        Constraint::lin_eq(n[7].clone(), n[8].clone()),
        Constraint::lin_eq(sum(&n[3], &n[4]), sum(&n[6], &n[7])),
        Constraint::LinGeq0(&n[7] - &n[4]),
    ];
    rows.extend(n[1..].iter().map(|c| Constraint::LinGeq0(c.clone())));
    rows.push(Constraint::MixedGeq1(s.b3, n[3].clone()));
    Ok(rows.into_iter().map(|c| (c, o.clone())).collect())
}

/// The word rows on a linear decoration of the Church word type.
pub fn word_constraints(t: &LinPType, site: &str) -> Result<ConstraintSet, DomainError> {
    let s = word_shape(t).ok_or_else(|| mismatch(site, Sort::Word, t))?;
    let o = Origin::new(Family::Domain, "word", site);
    let n = &s.exps;
    let mut rows = vec![
        Constraint::BoolConst(s.b3, true),
        Constraint::BoolConst(s.b7, true),
        Constraint::BoolConst(s.b4, false),
        Constraint::BoolConst(s.b8, false),
        Constraint::BoolConst(s.b11, false),
        Constraint::lin_eq(n[4].clone(), n[5].clone()),
        Constraint::lin_eq(n[8].clone(), n[9].clone()),
        Constraint::lin_eq(n[11].clone(), n[12].clone()),
        Constraint::lin_eq(sum(&n[3], &n[4]), &sum(&n[6], &n[7]) + &n[8]),
        Constraint::lin_eq(sum(&n[7], &n[8]), sum(&n[10], &n[11])),
        Constraint::LinGeq0(&n[11] - &n[8]),
        Constraint::LinGeq0(&n[11] - &n[4]),
    ];
    rows.extend(n[1..].iter().map(|c| Constraint::LinGeq0(c.clone())));
    rows.push(Constraint::MixedGeq1(s.b3, n[3].clone()));
    rows.push(Constraint::MixedGeq1(s.b7, n[7].clone()));
    Ok(rows.into_iter().map(|c| (c, o.clone())).collect())
}

pub fn sort_constraints(sort: Sort, t: &LinPType, site: &str) -> Result<ConstraintSet, DomainError> {
    match sort {
        Sort::Nat => nat_constraints(t, site),
        Sort::Word => word_constraints(t, site),
    }
}

/// `p = 0` on the positions that separate the standard DLAL type from the
/// other solutions: every exponent except n3, n6 for integers and except
/// n3, n7, n10 for words.
pub fn strict_pins(sort: Sort, t: &LinPType, site: &str) -> Result<ConstraintSet, DomainError> {
    let (exps, keep): (Vec<LinComb>, &[usize]) = match sort {
        Sort::Nat => (nat_shape(t).ok_or_else(|| mismatch(site, sort, t))?.exps.to_vec(), &[0, 3, 6]),
        Sort::Word => (word_shape(t).ok_or_else(|| mismatch(site, sort, t))?.exps.to_vec(), &[0, 3, 7, 10]),
    };
    let o = Origin::new(Family::Pin, "strict", site);
    Ok(exps
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !keep.contains(i))
        .map(|(_, c)| (Constraint::LinEq0(c), o.clone()))
        .collect())
}

/// Union of the sort constraints on each listed variable's declaration,
/// taking the first abstraction with that name in preorder.
pub fn domain_constraints(flat: &FlatTerm, spec: &DomainSpec, strict: bool) -> Result<ConstraintSet, DomainError> {
    let mut out = ConstraintSet::new();
    for (name, sort) in &spec.0 {
        let decl = flat
            .nodes
            .iter()
            .find_map(|n| match &n.kind {
                NodeKind::Lam(v) if v.var.name() == name => Some(v.decl.clone()),
                _ => None,
            })
            .ok_or_else(|| DomainError::UnknownVariable(name.clone()))?;
        if !decl.erase().alpha_eq(&sort.system_f_type()) {
            return Err(DomainError::SortMismatch {
                var: name.clone(),
                sort: *sort,
                found: crate::fsyntax::print_type(&decl.erase()),
            });
        }
        let lin = decl.linear();
        out.union(sort_constraints(*sort, &lin, name)?);
        if strict {
            out.union(strict_pins(*sort, &lin, name)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::{free_decorate_type, DecorationKind, Instantiation, ParamSource};

    fn nat_decoration() -> (LinPType, ParamSource) {
        let mut src = ParamSource::new();
        let t = Sort::Nat.system_f_type();
        let crate::param::PType::Linear(l) = free_decorate_type(&t, DecorationKind::Linear, &mut src, "n") else {
            panic!()
        };
        (l, src)
    }

    #[test]
    fn spec_parsing() {
        let d: DomainSpec = "n:N, l:W".parse().unwrap();
        assert_eq!(d.0, vec![("n".to_string(), Sort::Nat), ("l".to_string(), Sort::Word)]);
        assert!("n".parse::<DomainSpec>().is_err());
        assert!("n:Q".parse::<DomainSpec>().is_err());
        assert!("".parse::<DomainSpec>().unwrap().is_empty());
    }

    #[test]
    fn nat_row_count() {
        let (l, _) = nat_decoration();
        let s = nat_constraints(&l, "n").unwrap();
        // 3 boolean, 3 equalities, 1 difference, 8 nonnegativity, 1 mixed.
        assert_eq!(s.len(), 16);
        assert!(s.constraints().any(|c| c.to_string() == "L n7 - n4 >= 0"));
    }

    #[test]
    fn word_rejects_nat() {
        let (l, _) = nat_decoration();
        assert!(word_constraints(&l, "n").is_err());
    }

    #[test]
    fn standard_solution_satisfies_nat() {
        let (l, src) = nat_decoration();
        let mut phi = Instantiation::new();
        for b in src.bool_params() {
            phi.set_bool(b, b == BoolParam(1));
        }
        for p in src.int_params() {
            phi.set_int(p, i64::from(p.to_string() == "n3" || p.to_string() == "n6"));
        }
        let s = nat_constraints(&l, "n").unwrap();
        assert!(s.constraints().all(|c| c.holds(&phi).unwrap()));
        assert_eq!(l.instantiate(&phi).unwrap().unstar().to_string(), "forall a. (a -o a) => $(a -o a)");
    }
}
