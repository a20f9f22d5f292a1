use std::collections::BTreeMap;
use std::fmt;

use super::types::{FType, TermVar, TyVar};

/// Church-style System F terms. Every variable occurrence carries the
/// annotation of its binder.
#[derive(Clone, Debug)]
pub enum FTerm {
    Var(TermVar, FType),
    Lam(TermVar, FType, Box<FTerm>),
    App(Box<FTerm>, Box<FTerm>),
    TyLam(TyVar, Box<FTerm>),
    TyApp(Box<FTerm>, FType),
}

/// Structural size: one per AST node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeMetric(pub usize);

impl fmt::Display for SizeMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FTerm {
    pub fn app(f: FTerm, a: FTerm) -> Self {
        FTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: TermVar, ty: FType, body: FTerm) -> Self {
        FTerm::Lam(x, ty, Box::new(body))
    }

    pub fn tylam(a: TyVar, body: FTerm) -> Self {
        FTerm::TyLam(a, Box::new(body))
    }

    pub fn tyapp(f: FTerm, ty: FType) -> Self {
        FTerm::TyApp(Box::new(f), ty)
    }

    pub fn size(&self) -> SizeMetric {
        SizeMetric(self.count_nodes())
    }

    fn count_nodes(&self) -> usize {
        match self {
            FTerm::Var(..) => 1,
            FTerm::Lam(_, _, b) | FTerm::TyLam(_, b) | FTerm::TyApp(b, _) => 1 + b.count_nodes(),
            FTerm::App(f, a) => 1 + f.count_nodes() + a.count_nodes(),
        }
    }

    /// Free term variables with the annotation of their occurrences.
    pub fn free_vars(&self) -> BTreeMap<TermVar, FType> {
        let mut out = BTreeMap::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<u32>, out: &mut BTreeMap<TermVar, FType>) {
        match self {
            FTerm::Var(x, ty) => {
                if !bound.contains(&x.id()) {
                    out.entry(x.clone()).or_insert_with(|| ty.clone());
                }
            }
            FTerm::Lam(x, _, body) => {
                bound.push(x.id());
                body.collect_free(bound, out);
                bound.pop();
            }
            FTerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            FTerm::TyLam(_, b) | FTerm::TyApp(b, _) => b.collect_free(bound, out),
        }
    }

    /// Largest identifier (term or type) mentioned in the term.
    pub fn max_id(&self) -> u32 {
        match self {
            FTerm::Var(x, t) => x.id().max(t.max_id()),
            FTerm::Lam(x, t, b) => x.id().max(t.max_id()).max(b.max_id()),
            FTerm::App(f, a) => f.max_id().max(a.max_id()),
            FTerm::TyLam(a, b) => a.id().max(b.max_id()),
            FTerm::TyApp(b, t) => b.max_id().max(t.max_id()),
        }
    }

    /// Structural equality up to renaming of bound term and type variables.
    pub fn alpha_eq(&self, other: &FTerm) -> bool {
        fn go(a: &FTerm, b: &FTerm, terms: &mut Vec<(u32, u32)>, types: &mut Vec<(TyVar, TyVar)>) -> bool {
            match (a, b) {
                (FTerm::Var(x, t1), FTerm::Var(y, t2)) => {
                    let mut matched = None;
                    for &(l, r) in terms.iter().rev() {
                        if l == x.id() || r == y.id() {
                            matched = Some(l == x.id() && r == y.id());
                            break;
                        }
                    }
                    matched.unwrap_or(x == y) && ty_eq(t1, t2, types)
                }
                (FTerm::Lam(x, t1, b1), FTerm::Lam(y, t2, b2)) => {
                    if !ty_eq(t1, t2, types) {
                        return false;
                    }
                    terms.push((x.id(), y.id()));
                    let ok = go(b1, b2, terms, types);
                    terms.pop();
                    ok
                }
                (FTerm::App(f1, a1), FTerm::App(f2, a2)) => go(f1, f2, terms, types) && go(a1, a2, terms, types),
                (FTerm::TyLam(x, b1), FTerm::TyLam(y, b2)) => {
                    types.push((x.clone(), y.clone()));
                    let ok = go(b1, b2, terms, types);
                    types.pop();
                    ok
                }
                (FTerm::TyApp(b1, t1), FTerm::TyApp(b2, t2)) => go(b1, b2, terms, types) && ty_eq(t1, t2, types),
                _ => false,
            }
        }
        // Close over the type binders in scope by wrapping both sides in foralls.
        fn ty_eq(t1: &FType, t2: &FType, types: &[(TyVar, TyVar)]) -> bool {
            let mut l = t1.clone();
            let mut r = t2.clone();
            for (x, y) in types.iter().rev() {
                l = FType::forall(x.clone(), l);
                r = FType::forall(y.clone(), r);
            }
            l.alpha_eq(&r)
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsyntax::types::IdGen;

    #[test]
    fn size_counts_every_node() {
        let mut g = IdGen::new();
        let a = g.tyvar("a");
        let x = g.termvar("x");
        let var = FTerm::Var(x.clone(), FType::var(&a));
        assert_eq!(var.size(), SizeMetric(1));
        let id = FTerm::lam(x, FType::var(&a), var);
        assert_eq!(id.size(), SizeMetric(2));
    }
}
