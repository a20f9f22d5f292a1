use std::fmt;

use crate::constraints::{Constraint, ConstraintSet, Family, Origin};
use crate::dlal_types::{StarDecl, StarType};
use crate::fsyntax::{FType, TyVar};

use super::{BoolParam, Instantiation, InstantiationError, LinComb, ParamSource};

/// `F ::= a | D -o A | forall a. A`
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PF {
    Var(TyVar),
    Arrow(Box<BangPType>, Box<LinPType>),
    Forall(TyVar, Box<LinPType>),
}

/// `A ::= $^c F`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinPType {
    pub exps: LinComb,
    pub body: PF,
}

/// `D ::= $^{b,c} F`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BangPType {
    pub bang: BoolParam,
    pub exps: LinComb,
    pub body: PF,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PType {
    Linear(LinPType),
    Bang(BangPType),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecorationKind {
    Linear,
    Bang,
}

/// Free decoration of a System F type with fresh, pairwise distinct parameters.
pub fn free_decorate_type(t: &FType, kind: DecorationKind, src: &mut ParamSource, origin: &str) -> PType {
    match kind {
        DecorationKind::Linear => PType::Linear(LinPType::free(t, src, origin)),
        DecorationKind::Bang => PType::Bang(BangPType::free(t, src, origin)),
    }
}

impl PF {
    fn free(t: &FType, src: &mut ParamSource, origin: &str) -> PF {
        match t {
            FType::Var(v) => PF::Var(v.clone()),
            FType::Arrow(a, b) => {
                let dom = BangPType::free(a, src, origin);
                let cod = LinPType::free(b, src, origin);
                PF::Arrow(Box::new(dom), Box::new(cod))
            }
            FType::Forall(v, body) => PF::Forall(v.clone(), Box::new(LinPType::free(body, src, origin))),
        }
    }

    pub fn erase(&self) -> FType {
        match self {
            PF::Var(v) => FType::var(v),
            PF::Arrow(d, a) => FType::arrow(d.erase(), a.erase()),
            PF::Forall(v, a) => FType::forall(v.clone(), a.erase()),
        }
    }

    pub fn occurs_free(&self, v: &TyVar) -> bool {
        match self {
            PF::Var(w) => w == v,
            PF::Arrow(d, a) => d.body.occurs_free(v) || a.body.occurs_free(v),
            PF::Forall(w, a) => w != v && a.body.occurs_free(v),
        }
    }

    fn free_tyvars(&self, bound: &mut Vec<u32>, out: &mut Vec<TyVar>) {
        match self {
            PF::Var(v) => {
                if !bound.contains(&v.id()) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
            PF::Arrow(d, a) => {
                d.body.free_tyvars(bound, out);
                a.body.free_tyvars(bound, out);
            }
            PF::Forall(w, a) => {
                bound.push(w.id());
                a.body.free_tyvars(bound, out);
                bound.pop();
            }
        }
    }

    fn max_id(&self) -> u32 {
        match self {
            PF::Var(v) => v.id(),
            PF::Arrow(d, a) => d.body.max_id().max(a.body.max_id()),
            PF::Forall(w, a) => w.id().max(a.body.max_id()),
        }
    }

    fn rename(&self, from: &TyVar, to: &TyVar) -> PF {
        match self {
            PF::Var(v) if v == from => PF::Var(to.clone()),
            PF::Var(_) => self.clone(),
            PF::Arrow(d, a) => PF::Arrow(
                Box::new(BangPType { bang: d.bang, exps: d.exps.clone(), body: d.body.rename(from, to) }),
                Box::new(LinPType { exps: a.exps.clone(), body: a.body.rename(from, to) }),
            ),
            PF::Forall(w, _) if w == from => self.clone(),
            PF::Forall(w, a) => {
                PF::Forall(w.clone(), Box::new(LinPType { exps: a.exps.clone(), body: a.body.rename(from, to) }))
            }
        }
    }

    /// Replace each `$^{c'} var` by `$^{c'+c} F` where `with = $^c F`.
    /// Returns the extra exponent to add at the enclosing layer and the new body.
    fn subst(&self, var: &TyVar, with: &LinPType, fv: &[TyVar], next_id: &mut u32) -> (LinComb, PF) {
        match self {
            PF::Var(v) if v == var => (with.exps.clone(), with.body.clone()),
            PF::Var(_) => (LinComb::zero(), self.clone()),
            PF::Arrow(d, a) => {
                let d2 = d.subst(var, with, fv, next_id);
                let a2 = a.subst_with(var, with, fv, next_id);
                (LinComb::zero(), PF::Arrow(Box::new(d2), Box::new(a2)))
            }
            PF::Forall(w, _) if w == var => (LinComb::zero(), self.clone()),
            PF::Forall(w, a) => {
                if fv.contains(w) && a.body.occurs_free(var) {
                    let fresh = TyVar::new(*next_id, format!("{}'", w.name()));
                    *next_id += 1;
                    let renamed = LinPType { exps: a.exps.clone(), body: a.body.rename(w, &fresh) };
                    let inner = renamed.subst_with(var, with, fv, next_id);
                    (LinComb::zero(), PF::Forall(fresh, Box::new(inner)))
                } else {
                    (LinComb::zero(), PF::Forall(w.clone(), Box::new(a.subst_with(var, with, fv, next_id))))
                }
            }
        }
    }

    fn collect_adm(&self, out: &mut Vec<Constraint>) {
        match self {
            PF::Var(_) => {}
            PF::Arrow(d, a) => {
                d.collect_adm(out);
                a.collect_adm(out);
            }
            PF::Forall(_, a) => a.collect_adm(out),
        }
    }

    pub fn instantiate(&self, phi: &Instantiation) -> Result<StarType, InstantiationError> {
        Ok(match self {
            PF::Var(v) => StarType::Var(v.clone()),
            PF::Arrow(d, a) => {
                let dom = d.instantiate(phi)?;
                StarType::arrow(dom.bang, dom.ty, a.instantiate(phi)?)
            }
            PF::Forall(v, a) => StarType::Forall(v.clone(), Box::new(a.instantiate(phi)?)),
        })
    }
}

impl LinPType {
    pub fn new(exps: LinComb, body: PF) -> Self {
        Self { exps, body }
    }

    pub fn free(t: &FType, src: &mut ParamSource, origin: &str) -> Self {
        let exps = LinComb::param(src.exponent(origin));
        Self { exps, body: PF::free(t, src, origin) }
    }

    pub fn erase(&self) -> FType {
        self.body.erase()
    }

    pub fn free_tyvars(&self) -> Vec<TyVar> {
        let mut out = Vec::new();
        self.body.free_tyvars(&mut Vec::new(), &mut out);
        out
    }

    pub fn max_tyvar_id(&self) -> u32 {
        self.body.max_id()
    }

    /// `self[with/var]`, capture-avoiding. Fresh binder ids start at `next_id`.
    pub fn subst(&self, var: &TyVar, with: &LinPType, next_id: &mut u32) -> LinPType {
        let fv = with.free_tyvars();
        self.subst_with(var, with, &fv, next_id)
    }

    fn subst_with(&self, var: &TyVar, with: &LinPType, fv: &[TyVar], next_id: &mut u32) -> LinPType {
        let (extra, body) = self.body.subst(var, with, fv, next_id);
        LinPType { exps: &self.exps + &extra, body }
    }

    pub fn adm(&self) -> Vec<Constraint> {
        let mut out = Vec::new();
        self.collect_adm(&mut out);
        out
    }

    fn collect_adm(&self, out: &mut Vec<Constraint>) {
        out.push(Constraint::LinGeq0(self.exps.clone()));
        self.body.collect_adm(out);
    }

    pub fn instantiate(&self, phi: &Instantiation) -> Result<StarType, InstantiationError> {
        let k = self.exps.eval(phi)?;
        if k < 0 {
            return Err(InstantiationError::NegativeExponent { comb: self.exps.to_string(), value: k });
        }
        Ok(StarType::paras(k as usize, self.body.instantiate(phi)?))
    }
}

impl BangPType {
    pub fn free(t: &FType, src: &mut ParamSource, origin: &str) -> Self {
        let bang = src.boolean(origin);
        let exps = LinComb::param(src.exponent(origin));
        Self { bang, exps, body: PF::free(t, src, origin) }
    }

    /// `D°`: drop the boolean.
    pub fn linear(&self) -> LinPType {
        LinPType { exps: self.exps.clone(), body: self.body.clone() }
    }

    pub fn erase(&self) -> FType {
        self.body.erase()
    }

    fn subst(&self, var: &TyVar, with: &LinPType, fv: &[TyVar], next_id: &mut u32) -> BangPType {
        let (extra, body) = self.body.subst(var, with, fv, next_id);
        BangPType { bang: self.bang, exps: &self.exps + &extra, body }
    }

    pub fn adm(&self) -> Vec<Constraint> {
        let mut out = Vec::new();
        self.collect_adm(&mut out);
        out
    }

    fn collect_adm(&self, out: &mut Vec<Constraint>) {
        out.push(Constraint::LinGeq0(self.exps.clone()));
        out.push(Constraint::MixedGeq1(self.bang, self.exps.clone()));
        self.body.collect_adm(out);
    }

    pub fn instantiate(&self, phi: &Instantiation) -> Result<StarDecl, InstantiationError> {
        let k = self.exps.eval(phi)?;
        if k < 0 {
            return Err(InstantiationError::NegativeExponent { comb: self.exps.to_string(), value: k });
        }
        let body = self.body.instantiate(phi)?;
        if phi.boolean(self.bang)? {
            if k < 1 {
                return Err(InstantiationError::BangWithoutExponent {
                    bang: self.bang,
                    comb: self.exps.to_string(),
                    value: k,
                });
            }
            Ok(StarDecl { bang: true, ty: StarType::paras(k as usize - 1, body) })
        } else {
            Ok(StarDecl { bang: false, ty: StarType::paras(k as usize, body) })
        }
    }
}

impl PType {
    pub fn erase(&self) -> FType {
        match self {
            PType::Linear(a) => a.erase(),
            PType::Bang(d) => d.erase(),
        }
    }

    pub fn adm(&self) -> Vec<Constraint> {
        match self {
            PType::Linear(a) => a.adm(),
            PType::Bang(d) => d.adm(),
        }
    }
}

/// `Adm(E)` as a constraint set.
pub fn adm_constraints(e: &PType) -> ConstraintSet {
    e.adm().into_iter().map(|c| (c, Origin::new(Family::Ltype, "adm", "type"))).collect()
}

// ---------------------------------------------------------------- display

fn write_exps(out: &mut fmt::Formatter<'_>, bang: Option<BoolParam>, exps: &LinComb) -> fmt::Result {
    let comb = exps.to_string().replace(' ', "");
    match bang {
        Some(b) => write!(out, "$^{{{b},{comb}}}"),
        None => write!(out, "$^{{{comb}}}"),
    }
}

impl fmt::Display for PF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PF::Var(v) => write!(f, "{}", v.name()),
            PF::Arrow(d, a) => write!(f, "({d} -o {a})"),
            PF::Forall(v, a) => write!(f, "(forall {}. {a})", v.name()),
        }
    }
}

impl fmt::Display for LinPType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_exps(f, None, &self.exps)?;
        write!(f, " {}", self.body)
    }
}

impl fmt::Display for BangPType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_exps(f, Some(self.bang), &self.exps)?;
        write!(f, " {}", self.body)
    }
}

impl fmt::Display for PType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PType::Linear(a) => a.fmt(f),
            PType::Bang(d) => d.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsyntax::{parse_type, IdGen};
    use crate::param::IntParam;

    #[test]
    fn linear_variable() {
        let mut src = ParamSource::new();
        let t = parse_type("a").unwrap();
        let d = free_decorate_type(&t, DecorationKind::Linear, &mut src, "t");
        assert_eq!(d.to_string(), "$^{n1} a");
    }

    #[test]
    fn bang_arrow() {
        let mut src = ParamSource::new();
        let t = parse_type("a -> a").unwrap();
        let d = free_decorate_type(&t, DecorationKind::Bang, &mut src, "t");
        assert_eq!(d.to_string(), "$^{b1,n1} ($^{b2,n2} a -o $^{n3} a)");
        assert!(d.erase() == t);
    }

    #[test]
    fn nat_skeleton_has_eight_exponents() {
        let mut src = ParamSource::new();
        let t = parse_type("N").unwrap();
        let d = free_decorate_type(&t, DecorationKind::Linear, &mut src, "t");
        assert_eq!(src.exponent_count(), 8);
        assert_eq!(src.bool_count(), 3);
        assert_eq!(
            d.to_string(),
            "$^{n1} (forall a. $^{n2} ($^{b1,n3} ($^{b2,n4} a -o $^{n5} a) -o $^{n6} ($^{b3,n7} a -o $^{n8} a)))"
        );
    }

    #[test]
    fn substitution_adds_exponents() {
        let mut g = IdGen::new();
        let a = g.tyvar("a");
        let b = g.tyvar("b");
        let c1 = LinComb::param(IntParam::exponent(1));
        let c2 = LinComb::param(IntParam::exponent(2));
        let target = LinPType::new(c1.clone(), PF::Var(a.clone()));
        let with = LinPType::new(c2.clone(), PF::Var(b.clone()));
        let mut next = 100;
        let got = target.subst(&a, &with, &mut next);
        assert_eq!(got.exps, &c1 + &c2);
        assert_eq!(got.body, PF::Var(b.clone()));

        let bang = BangPType { bang: BoolParam(1), exps: c1.clone(), body: PF::Var(a.clone()) };
        let arrow = LinPType::new(LinComb::zero(), PF::Arrow(Box::new(bang), Box::new(target.clone())));
        let got = arrow.subst(&a, &with, &mut next);
        match got.body {
            PF::Arrow(d, _) => assert_eq!(d.exps, &c1 + &c2),
            other => panic!("{other:?}"),
        }

        let other = g.tyvar("c");
        let untouched = LinPType::new(c1.clone(), PF::Var(other));
        assert_eq!(untouched.subst(&a, &with, &mut next), untouched);
    }

    #[test]
    fn adm_sets() {
        let mut src = ParamSource::new();
        let a = parse_type("a").unwrap();
        let lin = free_decorate_type(&a, DecorationKind::Linear, &mut src, "t");
        let set = adm_constraints(&lin);
        assert_eq!(
            set.dump().lines().map(|l| l.split("  #").next().unwrap().to_string()).collect::<Vec<_>>(),
            ["L n1 >= 0"]
        );
        let bang = free_decorate_type(&a, DecorationKind::Bang, &mut src, "t");
        let set = adm_constraints(&bang);
        let lines: Vec<String> = set.constraints().map(|c| c.to_string()).collect();
        assert_eq!(lines, ["L n2 >= 0", "M b1 -> n2 >= 1"]);
    }

    #[test]
    fn instantiate_bang_decl() {
        let mut g = IdGen::new();
        let a = g.tyvar("a");
        let n = IntParam::exponent(1);
        let d = BangPType { bang: BoolParam(1), exps: LinComb::param(n), body: PF::Var(a) };
        let mut phi = Instantiation::new();
        phi.set_int(n, 2);
        phi.set_bool(BoolParam(1), true);
        let got = d.instantiate(&phi).unwrap();
        assert!(got.bang);
        assert_eq!(got.to_string(), "!$a");
        phi.set_bool(BoolParam(1), false);
        assert_eq!(d.instantiate(&phi).unwrap().to_string(), "$$a");
        phi.set_bool(BoolParam(1), true);
        phi.set_int(n, 0);
        assert!(matches!(d.instantiate(&phi), Err(InstantiationError::BangWithoutExponent { .. })));
    }
}
