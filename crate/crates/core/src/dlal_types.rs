//! DLAL and DLAL* types: erasure, the `!`-decomposition, depth and display.

use std::collections::HashMap;
use std::fmt;

use crate::fsyntax::lexer::{tokenize, Cursor, Tok};
use crate::fsyntax::{FType, IdGen, ParseError, TyVar};

/// Surface DLAL types.
#[derive(Clone, Debug)]
pub enum DlalType {
    Var(TyVar),
    Lolli(Box<DlalType>, Box<DlalType>),
    Imp(Box<DlalType>, Box<DlalType>),
    Para(Box<DlalType>),
    Forall(TyVar, Box<DlalType>),
}

/// DLAL* types. A `!` can only sit on an arrow domain, so it is a flag there.
#[derive(Clone, Debug)]
pub enum StarType {
    Var(TyVar),
    Arrow { bang: bool, dom: Box<StarType>, cod: Box<StarType> },
    Para(Box<StarType>),
    Forall(TyVar, Box<StarType>),
}

impl DlalType {
    pub fn var(v: &TyVar) -> Self {
        DlalType::Var(v.clone())
    }
    pub fn lolli(a: DlalType, b: DlalType) -> Self {
        DlalType::Lolli(Box::new(a), Box::new(b))
    }
    pub fn imp(a: DlalType, b: DlalType) -> Self {
        DlalType::Imp(Box::new(a), Box::new(b))
    }
    pub fn para(a: DlalType) -> Self {
        DlalType::Para(Box::new(a))
    }
    pub fn paras(k: usize, mut a: DlalType) -> Self {
        for _ in 0..k {
            a = DlalType::para(a);
        }
        a
    }
    pub fn forall(v: TyVar, a: DlalType) -> Self {
        DlalType::Forall(v, Box::new(a))
    }

    /// `forall a. (a -o a) => $(a -o a)`
    pub fn nat(gen: &mut IdGen) -> Self {
        let a = gen.tyvar("a");
        let endo = DlalType::lolli(DlalType::var(&a), DlalType::var(&a));
        DlalType::forall(a, DlalType::imp(endo.clone(), DlalType::para(endo)))
    }

    /// `forall a. (a -o a) => ($a -o $a)`
    pub fn nat_prime(gen: &mut IdGen) -> Self {
        let a = gen.tyvar("a");
        let endo = DlalType::lolli(DlalType::var(&a), DlalType::var(&a));
        let p = DlalType::para(DlalType::var(&a));
        DlalType::forall(a, DlalType::imp(endo, DlalType::lolli(p.clone(), p)))
    }

    /// `forall a. (a -o a) => (a -o a) => $(a -o a)`
    pub fn word(gen: &mut IdGen) -> Self {
        let a = gen.tyvar("a");
        let endo = DlalType::lolli(DlalType::var(&a), DlalType::var(&a));
        DlalType::forall(a, DlalType::imp(endo.clone(), DlalType::imp(endo.clone(), DlalType::para(endo))))
    }

    pub fn erase(&self) -> FType {
        match self {
            DlalType::Var(v) => FType::var(v),
            DlalType::Lolli(a, b) | DlalType::Imp(a, b) => FType::arrow(a.erase(), b.erase()),
            DlalType::Para(a) => a.erase(),
            DlalType::Forall(v, a) => FType::forall(v.clone(), a.erase()),
        }
    }

    pub fn star(&self) -> StarType {
        match self {
            DlalType::Var(v) => StarType::Var(v.clone()),
            DlalType::Lolli(a, b) => StarType::arrow(false, a.star(), b.star()),
            DlalType::Imp(a, b) => StarType::arrow(true, a.star(), b.star()),
            DlalType::Para(a) => StarType::Para(Box::new(a.star())),
            DlalType::Forall(v, a) => StarType::Forall(v.clone(), Box::new(a.star())),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DlalType::Var(_) => 0,
            DlalType::Forall(_, b) => b.depth(),
            DlalType::Lolli(a, b) => a.depth().max(b.depth()),
            DlalType::Para(a) => a.depth() + 1,
            DlalType::Imp(a, b) => (a.depth() + 1).max(b.depth()),
        }
    }

    /// No `forall` in negative position.
    pub fn is_pi1(&self) -> bool {
        fn go(t: &DlalType, positive: bool) -> bool {
            match t {
                DlalType::Var(_) => true,
                DlalType::Forall(_, b) => positive && go(b, positive),
                DlalType::Lolli(a, b) | DlalType::Imp(a, b) => go(a, !positive) && go(b, positive),
                DlalType::Para(a) => go(a, positive),
            }
        }
        go(self, true)
    }

    pub fn alpha_eq(&self, other: &DlalType) -> bool {
        fn go(a: &DlalType, b: &DlalType, env: &mut Vec<(u32, u32)>) -> bool {
            match (a, b) {
                (DlalType::Var(x), DlalType::Var(y)) => {
                    for &(l, r) in env.iter().rev() {
                        if l == x.id() || r == y.id() {
                            return l == x.id() && r == y.id();
                        }
                    }
                    x == y
                }
                (DlalType::Lolli(a1, b1), DlalType::Lolli(a2, b2)) | (DlalType::Imp(a1, b1), DlalType::Imp(a2, b2)) => {
                    go(a1, a2, env) && go(b1, b2, env)
                }
                (DlalType::Para(a1), DlalType::Para(a2)) => go(a1, a2, env),
                (DlalType::Forall(x, a1), DlalType::Forall(y, a2)) => {
                    env.push((x.id(), y.id()));
                    let ok = go(a1, a2, env);
                    env.pop();
                    ok
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    fn max_id(&self) -> u32 {
        match self {
            DlalType::Var(v) => v.id(),
            DlalType::Lolli(a, b) | DlalType::Imp(a, b) => a.max_id().max(b.max_id()),
            DlalType::Para(a) => a.max_id(),
            DlalType::Forall(v, a) => v.id().max(a.max_id()),
        }
    }

    fn abbreviation(&self) -> Option<&'static str> {
        let mut gen = IdGen::starting_at(self.max_id() + 1);
        if self.alpha_eq(&DlalType::nat(&mut gen)) {
            Some("N")
        } else if self.alpha_eq(&DlalType::nat_prime(&mut gen)) {
            Some("N'")
        } else if self.alpha_eq(&DlalType::word(&mut gen)) {
            Some("W")
        } else {
            None
        }
    }

    /// Display with `N`, `N'` and `W` substituted for the standard data types.
    pub fn display_abbrev(&self) -> String {
        let mut out = String::new();
        write_dlal(self, true, &mut out);
        out
    }
}

impl PartialEq for DlalType {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq(other)
    }
}

impl StarType {
    pub fn arrow(bang: bool, dom: StarType, cod: StarType) -> Self {
        StarType::Arrow { bang, dom: Box::new(dom), cod: Box::new(cod) }
    }

    pub fn para(a: StarType) -> Self {
        StarType::Para(Box::new(a))
    }

    pub fn paras(k: usize, mut a: StarType) -> Self {
        for _ in 0..k {
            a = StarType::para(a);
        }
        a
    }

    pub fn erase(&self) -> FType {
        match self {
            StarType::Var(v) => FType::var(v),
            StarType::Arrow { dom, cod, .. } => FType::arrow(dom.erase(), cod.erase()),
            StarType::Para(a) => a.erase(),
            StarType::Forall(v, a) => FType::forall(v.clone(), a.erase()),
        }
    }

    pub fn unstar(&self) -> DlalType {
        match self {
            StarType::Var(v) => DlalType::Var(v.clone()),
            StarType::Arrow { bang: false, dom, cod } => DlalType::lolli(dom.unstar(), cod.unstar()),
            StarType::Arrow { bang: true, dom, cod } => DlalType::imp(dom.unstar(), cod.unstar()),
            StarType::Para(a) => DlalType::para(a.unstar()),
            StarType::Forall(v, a) => DlalType::forall(v.clone(), a.unstar()),
        }
    }

    pub fn depth(&self) -> usize {
        self.unstar().depth()
    }

    pub fn free_vars(&self) -> Vec<TyVar> {
        fn go(t: &StarType, bound: &mut Vec<u32>, out: &mut Vec<TyVar>) {
            match t {
                StarType::Var(v) => {
                    if !bound.contains(&v.id()) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                StarType::Arrow { dom, cod, .. } => {
                    go(dom, bound, out);
                    go(cod, bound, out);
                }
                StarType::Para(a) => go(a, bound, out),
                StarType::Forall(v, a) => {
                    bound.push(v.id());
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn occurs_free(&self, v: &TyVar) -> bool {
        match self {
            StarType::Var(w) => w == v,
            StarType::Arrow { dom, cod, .. } => dom.occurs_free(v) || cod.occurs_free(v),
            StarType::Para(a) => a.occurs_free(v),
            StarType::Forall(w, a) => w != v && a.occurs_free(v),
        }
    }

    pub fn max_id(&self) -> u32 {
        match self {
            StarType::Var(v) => v.id(),
            StarType::Arrow { dom, cod, .. } => dom.max_id().max(cod.max_id()),
            StarType::Para(a) => a.max_id(),
            StarType::Forall(v, a) => v.id().max(a.max_id()),
        }
    }

    /// Strip the leading paragraphs: `$^k F` gives `(k, F)`.
    pub fn split_paras(&self) -> (usize, &StarType) {
        let mut k = 0;
        let mut t = self;
        while let StarType::Para(inner) = t {
            k += 1;
            t = inner;
        }
        (k, t)
    }

    pub fn alpha_eq(&self, other: &StarType) -> bool {
        fn go(a: &StarType, b: &StarType, env: &mut Vec<(u32, u32)>) -> bool {
            match (a, b) {
                (StarType::Var(x), StarType::Var(y)) => {
                    for &(l, r) in env.iter().rev() {
                        if l == x.id() || r == y.id() {
                            return l == x.id() && r == y.id();
                        }
                    }
                    x == y
                }
                (StarType::Arrow { bang: b1, dom: d1, cod: c1 }, StarType::Arrow { bang: b2, dom: d2, cod: c2 }) => {
                    b1 == b2 && go(d1, d2, env) && go(c1, c2, env)
                }
                (StarType::Para(a1), StarType::Para(a2)) => go(a1, a2, env),
                (StarType::Forall(x, a1), StarType::Forall(y, a2)) => {
                    env.push((x.id(), y.id()));
                    let ok = go(a1, a2, env);
                    env.pop();
                    ok
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Capture-avoiding `self[with/var]`.
    pub fn subst(&self, var: &TyVar, with: &StarType) -> StarType {
        let mut gen = IdGen::starting_at(self.max_id().max(with.max_id()).max(var.id()) + 1);
        let fv = with.free_vars();
        self.subst_with(var, with, &fv, &mut gen)
    }

    fn subst_with(&self, var: &TyVar, with: &StarType, fv: &[TyVar], gen: &mut IdGen) -> StarType {
        match self {
            StarType::Var(v) if v == var => with.clone(),
            StarType::Var(_) => self.clone(),
            StarType::Arrow { bang, dom, cod } => {
                StarType::arrow(*bang, dom.subst_with(var, with, fv, gen), cod.subst_with(var, with, fv, gen))
            }
            StarType::Para(a) => StarType::para(a.subst_with(var, with, fv, gen)),
            StarType::Forall(v, _) if v == var => self.clone(),
            StarType::Forall(v, body) => {
                if fv.contains(v) && body.occurs_free(var) {
                    let fresh = TyVar::new(gen.fresh(), format!("{}'", v.name()));
                    let renamed = body.subst(v, &StarType::Var(fresh.clone()));
                    StarType::Forall(fresh, Box::new(renamed.subst_with(var, with, fv, gen)))
                } else {
                    StarType::Forall(v.clone(), Box::new(body.subst_with(var, with, fv, gen)))
                }
            }
        }
    }
}

impl PartialEq for StarType {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq(other)
    }
}

/// A variable declaration `D ::= A | !A`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarDecl {
    pub bang: bool,
    pub ty: StarType,
}

impl StarDecl {
    pub fn linear(ty: StarType) -> Self {
        Self { bang: false, ty }
    }

    pub fn banged(ty: StarType) -> Self {
        Self { bang: true, ty }
    }

    /// The type without the bang.
    pub fn underlying(&self) -> &StarType {
        &self.ty
    }

    /// The type of an occurrence: `$A` for `!A`, `A` otherwise.
    pub fn circ(&self) -> StarType {
        if self.bang {
            StarType::para(self.ty.clone())
        } else {
            self.ty.clone()
        }
    }
}

impl fmt::Display for StarDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bang {
            let atomic = matches!(self.ty, StarType::Var(_) | StarType::Para(_));
            if atomic {
                write!(f, "!{}", self.ty)
            } else {
                write!(f, "!({})", self.ty)
            }
        } else {
            self.ty.fmt(f)
        }
    }
}

/// Depth and symbolic normalization bound for a type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub depth: usize,
    pub bound: String,
    pub pi1: bool,
}

pub fn complexity_bound(ty: &DlalType, size: usize) -> BoundReport {
    let depth = ty.depth();
    BoundReport { depth, bound: format!("{size}^(2^{depth})"), pi1: ty.is_pi1() }
}

pub fn erase_dlal(ty: &DlalType) -> FType {
    ty.erase()
}

pub fn star(ty: &DlalType) -> StarType {
    ty.star()
}

pub fn unstar(ty: &StarType) -> DlalType {
    ty.unstar()
}

pub fn depth(ty: &DlalType) -> usize {
    ty.depth()
}

// ---------------------------------------------------------------- display

fn write_dlal(t: &DlalType, abbrev: bool, out: &mut String) {
    if abbrev {
        if let Some(name) = t.abbreviation() {
            out.push_str(name);
            return;
        }
    }
    match t {
        DlalType::Var(v) => out.push_str(v.name()),
        DlalType::Lolli(a, b) | DlalType::Imp(a, b) => {
            let atomic_dom =
                matches!(**a, DlalType::Var(_) | DlalType::Para(_)) || (abbrev && a.abbreviation().is_some());
            if !atomic_dom {
                out.push('(');
            }
            write_dlal(a, abbrev, out);
            if !atomic_dom {
                out.push(')');
            }
            out.push_str(if matches!(t, DlalType::Lolli(..)) { " -o " } else { " => " });
            write_dlal(b, abbrev, out);
        }
        DlalType::Para(a) => {
            out.push('$');
            write_dlal_prefixed(a, abbrev, out);
        }
        DlalType::Forall(v, a) => {
            out.push_str("forall ");
            out.push_str(v.name());
            out.push_str(". ");
            write_dlal(a, abbrev, out);
        }
    }
}

fn write_dlal_prefixed(a: &DlalType, abbrev: bool, out: &mut String) {
    let atomic = matches!(a, DlalType::Var(_) | DlalType::Para(_)) || (abbrev && a.abbreviation().is_some());
    if !atomic {
        out.push('(');
    }
    write_dlal(a, abbrev, out);
    if !atomic {
        out.push(')');
    }
}

impl fmt::Display for DlalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_dlal(self, false, &mut out);
        f.write_str(&out)
    }
}

fn write_star(t: &StarType, out: &mut String) {
    match t {
        StarType::Var(v) => out.push_str(v.name()),
        StarType::Arrow { bang, dom, cod } => {
            if *bang {
                out.push('!');
            }
            let atomic = matches!(**dom, StarType::Var(_) | StarType::Para(_));
            if !atomic {
                out.push('(');
            }
            write_star(dom, out);
            if !atomic {
                out.push(')');
            }
            out.push_str(" -o ");
            write_star(cod, out);
        }
        StarType::Para(a) => {
            out.push('$');
            let atomic = matches!(**a, StarType::Var(_) | StarType::Para(_));
            if !atomic {
                out.push('(');
            }
            write_star(a, out);
            if !atomic {
                out.push(')');
            }
        }
        StarType::Forall(v, a) => {
            out.push_str("forall ");
            out.push_str(v.name());
            out.push_str(". ");
            write_star(a, out);
        }
    }
}

impl fmt::Display for StarType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_star(self, &mut out);
        f.write_str(&out)
    }
}

// ---------------------------------------------------------------- parsing

/// Type-variable scope shared by the DLAL type parser and the pseudo-term
/// parser, so that free variables keep one identity across a whole input.
#[derive(Debug, Default)]
pub struct TyScope {
    pub ids: IdGen,
    free: HashMap<String, TyVar>,
    bound: Vec<TyVar>,
}

impl TyScope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str) -> TyVar {
        let v = self.ids.tyvar(name);
        self.bound.push(v.clone());
        v
    }

    pub fn pop(&mut self) {
        self.bound.pop();
    }

    pub fn lookup(&mut self, name: &str) -> TyVar {
        if let Some(v) = self.bound.iter().rev().find(|v| v.name() == name) {
            return v.clone();
        }
        let ids = &mut self.ids;
        self.free.entry(name.to_string()).or_insert_with(|| ids.tyvar(name)).clone()
    }
}

/// Parse a DLAL type (`-o`, `=>`, `$`, `forall`, and the `N`, `N'`, `W` abbreviations).
pub fn parse_dlal(text: &str) -> Result<DlalType, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut scope = TyScope::new();
    let t = parse_dlal_in(&mut cur, &mut scope)?;
    if *cur.peek() != Tok::Eof {
        return Err(cur.unexpected("end of input"));
    }
    Ok(t)
}

/// Parse a DLAL* type. `A => B` is accepted and read as `!A -o B`.
pub fn parse_star(text: &str) -> Result<StarType, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut scope = TyScope::new();
    let t = parse_star_in(&mut cur, &mut scope)?;
    if *cur.peek() != Tok::Eof {
        return Err(cur.unexpected("end of input"));
    }
    Ok(t)
}

pub(crate) fn parse_dlal_in(cur: &mut Cursor, scope: &mut TyScope) -> Result<DlalType, ParseError> {
    let (line, col) = cur.here();
    let raw = raw_type(cur, scope)?;
    raw_to_dlal(raw).map_err(|m| ParseError::new(line, col, m))
}

pub(crate) fn parse_star_in(cur: &mut Cursor, scope: &mut TyScope) -> Result<StarType, ParseError> {
    let (line, col) = cur.here();
    let raw = raw_type(cur, scope)?;
    raw_to_star(raw).map_err(|m| ParseError::new(line, col, m))
}

/// A declaration: a DLAL* type with an optional leading `!`.
pub(crate) fn parse_star_decl_in(cur: &mut Cursor, scope: &mut TyScope) -> Result<StarDecl, ParseError> {
    let (line, col) = cur.here();
    let raw = raw_type(cur, scope)?;
    let decl = match raw {
        Raw::Bang(inner) => raw_to_star(*inner).map(StarDecl::banged),
        other => raw_to_star(other).map(StarDecl::linear),
    };
    decl.map_err(|m| ParseError::new(line, col, m))
}

enum Raw {
    Dlal(DlalType),
    Bang(Box<Raw>),
    Lolli(Box<Raw>, Box<Raw>),
    Imp(Box<Raw>, Box<Raw>),
    Para(Box<Raw>),
    Forall(TyVar, Box<Raw>),
}

fn raw_type(cur: &mut Cursor, scope: &mut TyScope) -> Result<Raw, ParseError> {
    if cur.eat(&Tok::Forall) {
        let name = cur.ident()?;
        cur.expect(&Tok::Dot)?;
        let v = scope.push(&name);
        let body = raw_type(cur, scope);
        scope.pop();
        return Ok(Raw::Forall(v, Box::new(body?)));
    }
    let lhs = raw_prefix(cur, scope)?;
    if cur.eat(&Tok::Lolli) {
        Ok(Raw::Lolli(Box::new(lhs), Box::new(raw_type(cur, scope)?)))
    } else if cur.eat(&Tok::FatArrow) {
        Ok(Raw::Imp(Box::new(lhs), Box::new(raw_type(cur, scope)?)))
    } else {
        Ok(lhs)
    }
}

fn raw_prefix(cur: &mut Cursor, scope: &mut TyScope) -> Result<Raw, ParseError> {
    match cur.peek() {
        Tok::Dollar => {
            cur.bump();
            if cur.eat(&Tok::Caret) {
                let k = match cur.bump() {
                    Tok::Int(k) if k >= 0 => k as usize,
                    _ => return Err(cur.unexpected("a non-negative exponent")),
                };
                let mut t = raw_prefix(cur, scope)?;
                for _ in 0..k {
                    t = Raw::Para(Box::new(t));
                }
                return Ok(t);
            }
            Ok(Raw::Para(Box::new(raw_prefix(cur, scope)?)))
        }
        Tok::Bang => {
            cur.bump();
            Ok(Raw::Bang(Box::new(raw_prefix(cur, scope)?)))
        }
        Tok::Forall => raw_type(cur, scope),
        Tok::LParen => {
            cur.bump();
            let t = raw_type(cur, scope)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        Tok::Ident(name) => {
            let name = name.clone();
            cur.bump();
            let shadowed = scope.bound.iter().any(|v| v.name() == name);
            let t = match name.as_str() {
                "N" if !shadowed => DlalType::nat(&mut scope.ids),
                "N'" if !shadowed => DlalType::nat_prime(&mut scope.ids),
                "W" if !shadowed => DlalType::word(&mut scope.ids),
                _ => DlalType::Var(scope.lookup(&name)),
            };
            Ok(Raw::Dlal(t))
        }
        _ => Err(cur.unexpected("a type")),
    }
}

fn raw_to_dlal(r: Raw) -> Result<DlalType, String> {
    Ok(match r {
        Raw::Dlal(t) => t,
        Raw::Bang(_) => return Err("`!` is not part of the DLAL type syntax; use `=>`".into()),
        Raw::Lolli(a, b) => DlalType::lolli(raw_to_dlal(*a)?, raw_to_dlal(*b)?),
        Raw::Imp(a, b) => DlalType::imp(raw_to_dlal(*a)?, raw_to_dlal(*b)?),
        Raw::Para(a) => DlalType::para(raw_to_dlal(*a)?),
        Raw::Forall(v, a) => DlalType::forall(v, raw_to_dlal(*a)?),
    })
}

fn raw_to_star(r: Raw) -> Result<StarType, String> {
    Ok(match r {
        Raw::Dlal(t) => t.star(),
        Raw::Bang(_) => return Err("`!` may only appear on the domain of `-o`".into()),
        Raw::Lolli(a, b) => match *a {
            Raw::Bang(inner) => StarType::arrow(true, raw_to_star(*inner)?, raw_to_star(*b)?),
            other => StarType::arrow(false, raw_to_star(other)?, raw_to_star(*b)?),
        },
        Raw::Imp(a, b) => StarType::arrow(true, raw_to_star(*a)?, raw_to_star(*b)?),
        Raw::Para(a) => StarType::para(raw_to_star(*a)?),
        Raw::Forall(v, a) => StarType::Forall(v, Box::new(raw_to_star(*a)?)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erasure_of_paragraph() {
        let t = parse_dlal("$(a -o a)").unwrap();
        assert_eq!(crate::fsyntax::print_type(&t.erase()), "a -> a");
    }

    #[test]
    fn word_erases_to_word() {
        let mut g = IdGen::new();
        assert!(DlalType::word(&mut g).erase().is_word());
        assert!(DlalType::nat(&mut g).erase().is_nat());
    }

    #[test]
    fn star_of_nat() {
        let mut g = IdGen::new();
        let n = DlalType::nat(&mut g);
        assert_eq!(n.star().to_string(), "forall a. !(a -o a) -o $(a -o a)");
        assert!(n.star().unstar().alpha_eq(&n));
    }

    #[test]
    fn star_of_imp() {
        let t = parse_dlal("a => a").unwrap();
        assert_eq!(t.star().to_string(), "!a -o a");
        assert_eq!(parse_star("!a -o a").unwrap().unstar().to_string(), "a => a");
    }

    #[test]
    fn depths() {
        assert_eq!(parse_dlal("a").unwrap().depth(), 0);
        assert_eq!(parse_dlal("$a").unwrap().depth(), 1);
        assert_eq!(parse_dlal("N").unwrap().depth(), 1);
        assert_eq!(parse_dlal("W").unwrap().depth(), 1);
        assert_eq!(parse_dlal("$$a").unwrap().depth(), 2);
    }

    #[test]
    fn bounds() {
        let n = parse_dlal("N").unwrap();
        assert_eq!(complexity_bound(&n, 10).bound, "10^(2^1)");
        assert_eq!(complexity_bound(&parse_dlal("a").unwrap(), 5).bound, "5^(2^0)");
        let r = complexity_bound(&parse_dlal("$$a").unwrap(), 3);
        assert_eq!((r.depth, r.bound.as_str()), (2, "3^(2^2)"));
    }

    #[test]
    fn pi1_detection() {
        assert!(parse_dlal("W").unwrap().is_pi1());
        assert!(!parse_dlal("W -o W").unwrap().is_pi1());
        assert!(parse_dlal("a -o forall b. b").unwrap().is_pi1());
    }

    #[test]
    fn abbreviated_display() {
        let t = parse_dlal("N -o $$N'").unwrap();
        assert_eq!(t.display_abbrev(), "N -o $$N'");
        let w = parse_dlal("forall b. (b -o b) => (b -o b) => $(b -o b)").unwrap();
        assert_eq!(w.display_abbrev(), "W");
    }

    #[test]
    fn bang_rejected_outside_domains() {
        assert!(parse_star("!a").is_err());
        assert!(parse_dlal("!a -o a").is_err());
    }
}
