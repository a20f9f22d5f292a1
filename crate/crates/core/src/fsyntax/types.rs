use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

macro_rules! ident_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug)]
        pub struct $name {
            id: u32,
            name: Arc<str>,
        }

        impl $name {
            pub fn new(id: u32, name: impl Into<Arc<str>>) -> Self {
                Self { id, name: name.into() }
            }

            /// Internal identifier; unique within one parse.
            pub fn id(&self) -> u32 {
                self.id
            }

            /// Source-level name, used only for display.
            pub fn name(&self) -> &str {
                &self.name
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                self.id == other.id
            }
        }

        impl Eq for $name {}

        impl Hash for $name {
            fn hash<H: Hasher>(&self, state: &mut H) {
                self.id.hash(state);
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }

        impl Ord for $name {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                self.id.cmp(&other.id)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.name)
            }
        }
    };
}

ident_type!(
    /// A type variable. Equality and hashing use the internal id only.
    TyVar
);
ident_type!(
    /// A term variable. Equality and hashing use the internal id only.
    TermVar
);

/// Source of fresh identifiers, confined to one parse or one construction job.
#[derive(Debug, Clone, Default)]
pub struct IdGen {
    next: u32,
}

impl IdGen {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn starting_at(next: u32) -> Self {
        Self { next }
    }

    pub fn fresh(&mut self) -> u32 {
        let id = self.next;
        self.next += 1;
        id
    }

    pub fn tyvar(&mut self, name: &str) -> TyVar {
        TyVar::new(self.fresh(), name)
    }

    pub fn termvar(&mut self, name: &str) -> TermVar {
        TermVar::new(self.fresh(), name)
    }
}

/// System F types. `PartialEq` is alpha-equivalence.
#[derive(Clone, Debug)]
pub enum FType {
    Var(TyVar),
    Arrow(Box<FType>, Box<FType>),
    Forall(TyVar, Box<FType>),
}

impl FType {
    pub fn var(v: &TyVar) -> Self {
        FType::Var(v.clone())
    }

    pub fn arrow(dom: FType, cod: FType) -> Self {
        FType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn forall(v: TyVar, body: FType) -> Self {
        FType::Forall(v, Box::new(body))
    }

    /// `forall a. (a -> a) -> (a -> a)`
    pub fn nat(gen: &mut IdGen) -> Self {
        let a = gen.tyvar("a");
        let endo = FType::arrow(FType::var(&a), FType::var(&a));
        FType::forall(a, FType::arrow(endo.clone(), endo))
    }

    /// `forall a. (a -> a) -> (a -> a) -> (a -> a)`
    pub fn word(gen: &mut IdGen) -> Self {
        let a = gen.tyvar("a");
        let endo = FType::arrow(FType::var(&a), FType::var(&a));
        FType::forall(a, FType::arrow(endo.clone(), FType::arrow(endo.clone(), endo)))
    }

    pub fn is_nat(&self) -> bool {
        let mut gen = IdGen::starting_at(self.max_id() + 1);
        *self == FType::nat(&mut gen)
    }

    pub fn is_word(&self) -> bool {
        let mut gen = IdGen::starting_at(self.max_id() + 1);
        *self == FType::word(&mut gen)
    }

    pub fn free_vars(&self) -> BTreeSet<TyVar> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<TyVar>) {
        match self {
            FType::Var(v) => {
                if !bound.contains(&v.id()) {
                    out.insert(v.clone());
                }
            }
            FType::Arrow(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FType::Forall(v, body) => {
                bound.push(v.id());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn occurs_free(&self, v: &TyVar) -> bool {
        match self {
            FType::Var(w) => w == v,
            FType::Arrow(a, b) => a.occurs_free(v) || b.occurs_free(v),
            FType::Forall(w, body) => w != v && body.occurs_free(v),
        }
    }

    /// Largest identifier mentioned anywhere in the type.
    pub fn max_id(&self) -> u32 {
        match self {
            FType::Var(v) => v.id(),
            FType::Arrow(a, b) => a.max_id().max(b.max_id()),
            FType::Forall(v, body) => v.id().max(body.max_id()),
        }
    }

    pub fn alpha_eq(&self, other: &FType) -> bool {
        fn go(a: &FType, b: &FType, env: &mut Vec<(u32, u32)>) -> bool {
            match (a, b) {
                (FType::Var(x), FType::Var(y)) => {
                    for &(l, r) in env.iter().rev() {
                        if l == x.id() || r == y.id() {
                            return l == x.id() && r == y.id();
                        }
                    }
                    x == y
                }
                (FType::Arrow(a1, b1), FType::Arrow(a2, b2)) => go(a1, a2, env) && go(b1, b2, env),
                (FType::Forall(x, b1), FType::Forall(y, b2)) => {
                    env.push((x.id(), y.id()));
                    let ok = go(b1, b2, env);
                    env.pop();
                    ok
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Capture-avoiding substitution `self[with/var]`. Binders of `self`
    /// that occur free in `with` are renamed with fresh identifiers.
    pub fn subst(&self, var: &TyVar, with: &FType) -> FType {
        let mut gen = IdGen::starting_at(self.max_id().max(with.max_id()).max(var.id()) + 1);
        let fv = with.free_vars();
        self.subst_with(var, with, &fv, &mut gen)
    }

    fn subst_with(&self, var: &TyVar, with: &FType, fv: &BTreeSet<TyVar>, gen: &mut IdGen) -> FType {
        match self {
            FType::Var(v) if v == var => with.clone(),
            FType::Var(_) => self.clone(),
            FType::Arrow(a, b) => FType::arrow(a.subst_with(var, with, fv, gen), b.subst_with(var, with, fv, gen)),
            FType::Forall(v, _) if v == var => self.clone(),
            FType::Forall(v, body) => {
                if !body.occurs_free(var) {
                    return self.clone();
                }
                if fv.contains(v) {
                    let taken: BTreeSet<String> =
                        fv.iter().chain(body.free_vars().iter()).map(|t| t.name().to_string()).collect();
                    let fresh = TyVar::new(gen.fresh(), fresh_name(v.name(), &taken));
                    let renamed = body.rename(v, &fresh);
                    FType::forall(fresh, renamed.subst_with(var, with, fv, gen))
                } else {
                    FType::forall(v.clone(), body.subst_with(var, with, fv, gen))
                }
            }
        }
    }

    /// Replace free occurrences of `from` by `to` (no capture check; `to` must be fresh).
    pub fn rename(&self, from: &TyVar, to: &TyVar) -> FType {
        match self {
            FType::Var(v) if v == from => FType::Var(to.clone()),
            FType::Var(_) => self.clone(),
            FType::Arrow(a, b) => FType::arrow(a.rename(from, to), b.rename(from, to)),
            FType::Forall(v, _) if v == from => self.clone(),
            FType::Forall(v, body) => FType::forall(v.clone(), body.rename(from, to)),
        }
    }
}

pub(crate) fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

impl PartialEq for FType {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for FType {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_equivalent_foralls_are_equal() {
        let mut g = IdGen::new();
        assert_eq!(FType::nat(&mut g), FType::nat(&mut g));
        assert_ne!(FType::nat(&mut g), FType::word(&mut g));
    }

    #[test]
    fn subst_replaces_free_occurrences() {
        let mut g = IdGen::new();
        let a = g.tyvar("a");
        let b = g.tyvar("b");
        let endo_a = FType::arrow(FType::var(&a), FType::var(&a));
        let endo_b = FType::arrow(FType::var(&b), FType::var(&b));
        let got = endo_a.subst(&a, &endo_b);
        assert_eq!(got, FType::arrow(endo_b.clone(), endo_b));
    }

    #[test]
    fn subst_respects_shadowing() {
        let mut g = IdGen::new();
        let a = g.tyvar("a");
        let b = g.tyvar("b");
        let t = FType::forall(a.clone(), FType::var(&a));
        assert_eq!(t.subst(&a, &FType::var(&b)), t);
    }

    #[test]
    fn subst_avoids_capture() {
        let mut g = IdGen::new();
        let a = g.tyvar("a");
        let b = g.tyvar("b");
        // (forall b. a -> b)[a := b]
        let t = FType::forall(b.clone(), FType::arrow(FType::var(&a), FType::var(&b)));
        let got = t.subst(&a, &FType::var(&b));
        match &got {
            FType::Forall(v, body) => {
                assert_ne!(v, &b);
                assert_eq!(v.name(), "b'");
                assert_eq!(**body, FType::arrow(FType::var(&b), FType::var(v)));
            }
            other => panic!("expected forall, got {other:?}"),
        }
        assert!(got.occurs_free(&b));
    }
}
