//! Regular pseudo-terms: System F terms with signed door counts and DLAL* annotations.

use std::fmt;

use crate::dlal_types::{parse_star_decl_in, parse_star_in, StarDecl, StarType, TyScope};
use crate::fsyntax::lexer::{tokenize, Cursor, Tok};
use crate::fsyntax::{FTerm, ParseError, TermVar, TyVar};

/// `t ::= $^k u` with `k` a signed count: positive opens, negative closes.
/// One count per node keeps the term regular by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoTerm {
    pub doors: i64,
    pub node: PseudoNode,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PseudoNode {
    Var(TermVar, StarDecl),
    Lam(TermVar, StarDecl, Box<PseudoTerm>),
    App(Box<PseudoTerm>, Box<PseudoTerm>),
    TyLam(TyVar, Box<PseudoTerm>),
    TyApp(Box<PseudoTerm>, StarType),
}

impl PseudoTerm {
    pub fn new(doors: i64, node: PseudoNode) -> Self {
        Self { doors, node }
    }

    pub fn var(x: TermVar, decl: StarDecl) -> Self {
        Self::new(0, PseudoNode::Var(x, decl))
    }

    pub fn lam(x: TermVar, decl: StarDecl, body: PseudoTerm) -> Self {
        Self::new(0, PseudoNode::Lam(x, decl, Box::new(body)))
    }

    pub fn app(f: PseudoTerm, a: PseudoTerm) -> Self {
        Self::new(0, PseudoNode::App(Box::new(f), Box::new(a)))
    }

    pub fn tylam(a: TyVar, body: PseudoTerm) -> Self {
        Self::new(0, PseudoNode::TyLam(a, Box::new(body)))
    }

    pub fn tyapp(f: PseudoTerm, ty: StarType) -> Self {
        Self::new(0, PseudoNode::TyApp(Box::new(f), ty))
    }

    /// Add doors in front of the term.
    pub fn with_doors(mut self, k: i64) -> Self {
        self.doors += k;
        self
    }

    pub fn children(&self) -> Vec<&PseudoTerm> {
        match &self.node {
            PseudoNode::Var(..) => vec![],
            PseudoNode::Lam(_, _, b) | PseudoNode::TyLam(_, b) | PseudoNode::TyApp(b, _) => vec![b],
            PseudoNode::App(f, a) => vec![f, a],
        }
    }

    /// Drop doors, `!` and paragraphs.
    pub fn erase(&self) -> FTerm {
        match &self.node {
            PseudoNode::Var(x, d) => FTerm::Var(x.clone(), d.ty.erase()),
            PseudoNode::Lam(x, d, b) => FTerm::lam(x.clone(), d.ty.erase(), b.erase()),
            PseudoNode::App(f, a) => FTerm::app(f.erase(), a.erase()),
            PseudoNode::TyLam(a, b) => FTerm::tylam(a.clone(), b.erase()),
            PseudoNode::TyApp(f, ty) => FTerm::tyapp(f.erase(), ty.erase()),
        }
    }

    /// Number of opening and closing doors.
    pub fn door_counts(&self) -> (u64, u64) {
        let (mut open, mut close) =
            if self.doors >= 0 { (self.doors as u64, 0) } else { (0, self.doors.unsigned_abs()) };
        for c in self.children() {
            let (o, cl) = c.door_counts();
            open += o;
            close += cl;
        }
        (open, close)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

// ---------------------------------------------------------------- display

fn write_doors(f: &mut fmt::Formatter<'_>, k: i64) -> fmt::Result {
    let sym = if k > 0 { "$" } else { "~" };
    for _ in 0..k.unsigned_abs() {
        f.write_str(sym)?;
    }
    Ok(())
}

fn is_compound(t: &PseudoTerm) -> bool {
    !matches!(t.node, PseudoNode::Var(..))
}

/// Write the term so that it parses back as a single application item.
fn write_item(f: &mut fmt::Formatter<'_>, t: &PseudoTerm) -> fmt::Result {
    write_doors(f, t.doors)?;
    if is_compound(t) {
        f.write_str("(")?;
        write_head(f, t)?;
        f.write_str(")")
    } else {
        write_head(f, t)
    }
}

fn write_head(f: &mut fmt::Formatter<'_>, t: &PseudoTerm) -> fmt::Result {
    match &t.node {
        PseudoNode::Var(x, _) => write!(f, "{}", x.name()),
        PseudoNode::Lam(x, d, b) => {
            write!(f, "\\{}:{}. ", x.name(), d)?;
            write_term(f, b)
        }
        PseudoNode::TyLam(a, b) => {
            write!(f, "/\\{}. ", a.name())?;
            write_term(f, b)
        }
        PseudoNode::App(fun, arg) => {
            write_fun(f, fun)?;
            f.write_str(" ")?;
            write_item(f, arg)
        }
        PseudoNode::TyApp(fun, ty) => {
            write_fun(f, fun)?;
            write!(f, " [{ty}]")
        }
    }
}

fn write_fun(f: &mut fmt::Formatter<'_>, fun: &PseudoTerm) -> fmt::Result {
    if fun.doors == 0 && matches!(fun.node, PseudoNode::App(..) | PseudoNode::TyApp(..)) {
        write_head(f, fun)
    } else {
        write_item(f, fun)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &PseudoTerm) -> fmt::Result {
    if t.doors == 0 {
        write_head(f, t)
    } else {
        write_item(f, t)
    }
}

impl fmt::Display for PseudoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self)
    }
}

// ---------------------------------------------------------------- parsing

/// A pseudo-term with the declarations of its free variables.
#[derive(Clone, Debug)]
pub struct ParsedPseudo {
    pub context: Vec<(TermVar, StarDecl)>,
    pub term: PseudoTerm,
}

/// Parse `x:D, ... |- t`. Doors are written `$` (open) and `~` (close),
/// optionally with a count `$^k`; they attach to the next atom or binder.
/// Adjacent opening and closing doors cancel, so the result is regular.
pub fn parse_pseudo(text: &str) -> Result<ParsedPseudo, ParseError> {
    let mut p = PseudoParser { cur: Cursor::new(tokenize(text)?), scope: TyScope::new(), vars: Vec::new() };
    let context = p.context()?;
    let term = p.term()?;
    if *p.cur.peek() != Tok::Eof {
        return Err(p.cur.unexpected("end of input"));
    }
    Ok(ParsedPseudo { context, term })
}

struct PseudoParser {
    cur: Cursor,
    scope: TyScope,
    vars: Vec<(String, TermVar, StarDecl)>,
}

impl PseudoParser {
    fn context(&mut self) -> Result<Vec<(TermVar, StarDecl)>, ParseError> {
        let has_ctx = (0..).map(|i| self.cur.peek_at(i)).take_while(|t| **t != Tok::Eof).any(|t| *t == Tok::Turnstile);
        let mut out = Vec::new();
        if !has_ctx {
            return Ok(out);
        }
        if !self.cur.eat(&Tok::Turnstile) {
            loop {
                let name = self.cur.ident()?;
                self.cur.expect(&Tok::Colon)?;
                let decl = parse_star_decl_in(&mut self.cur, &mut self.scope)?;
                let x = self.scope.ids.termvar(&name);
                self.vars.push((name, x.clone(), decl.clone()));
                out.push((x, decl));
                if !self.cur.eat(&Tok::Comma) {
                    break;
                }
            }
            self.cur.expect(&Tok::Turnstile)?;
        }
        Ok(out)
    }

    fn doors(&mut self) -> Result<Option<i64>, ParseError> {
        let mut total: Option<i64> = None;
        loop {
            let sign = match self.cur.peek() {
                Tok::Dollar => 1,
                Tok::Tilde => -1,
                _ => return Ok(total),
            };
            self.cur.bump();
            let mut k = 1;
            if self.cur.eat(&Tok::Caret) {
                k = match self.cur.bump() {
                    Tok::Int(k) if k >= 0 => k,
                    _ => return Err(self.cur.unexpected("a non-negative door count")),
                };
            }
            let add = sign * k;
            total = Some(total.unwrap_or(0) + add);
        }
    }

    fn attach(&self, t: PseudoTerm, k: Option<i64>) -> PseudoTerm {
        match k {
            None => t,
            Some(k) => t.with_doors(k),
        }
    }

    fn term(&mut self) -> Result<PseudoTerm, ParseError> {
        let save = self.cur_pos_is_binder_with_doors();
        if save {
            let k = self.doors()?;
            let t = self.binder()?;
            return Ok(self.attach(t, k));
        }
        match self.cur.peek() {
            Tok::Lambda | Tok::BigLambda => self.binder(),
            _ => self.application(),
        }
    }

    /// Whether the next tokens are door prefixes followed by a binder.
    fn cur_pos_is_binder_with_doors(&self) -> bool {
        let mut i = 0;
        loop {
            match self.cur.peek_at(i) {
                Tok::Dollar | Tok::Tilde => i += 1,
                Tok::Caret => i += 2,
                Tok::Lambda | Tok::BigLambda => return i > 0,
                _ => return false,
            }
        }
    }

    fn binder(&mut self) -> Result<PseudoTerm, ParseError> {
        if self.cur.eat(&Tok::Lambda) {
            let name = self.cur.ident()?;
            self.cur.expect(&Tok::Colon)?;
            let decl = parse_star_decl_in(&mut self.cur, &mut self.scope)?;
            self.cur.expect(&Tok::Dot)?;
            let x = self.scope.ids.termvar(&name);
            self.vars.push((name, x.clone(), decl.clone()));
            let body = self.term();
            self.vars.pop();
            Ok(PseudoTerm::lam(x, decl, body?))
        } else {
            self.cur.expect(&Tok::BigLambda)?;
            let name = self.cur.ident()?;
            self.cur.expect(&Tok::Dot)?;
            let a = self.scope.push(&name);
            let body = self.term();
            self.scope.pop();
            Ok(PseudoTerm::tylam(a, body?))
        }
    }

    fn application(&mut self) -> Result<PseudoTerm, ParseError> {
        let mut head = self.item()?.ok_or_else(|| self.cur.unexpected("a pseudo-term"))?;
        loop {
            if self.cur.eat(&Tok::LBracket) {
                let ty = parse_star_in(&mut self.cur, &mut self.scope)?;
                self.cur.expect(&Tok::RBracket)?;
                head = PseudoTerm::tyapp(head, ty);
                continue;
            }
            if self.cur_pos_is_binder_with_doors() || matches!(self.cur.peek(), Tok::Lambda | Tok::BigLambda) {
                let arg = self.term()?;
                head = PseudoTerm::app(head, arg);
                break;
            }
            match self.item()? {
                Some(arg) => head = PseudoTerm::app(head, arg),
                None => break,
            }
        }
        Ok(head)
    }

    fn item(&mut self) -> Result<Option<PseudoTerm>, ParseError> {
        let at = self.cur.here();
        let k = self.doors()?;
        let t = match self.cur.peek().clone() {
            Tok::Ident(name) => {
                self.cur.bump();
                let (_, x, d) = self
                    .vars
                    .iter()
                    .rev()
                    .find(|(n, _, _)| *n == name)
                    .cloned()
                    .ok_or_else(|| ParseError::new(at.0, at.1, format!("unbound variable `{name}`")))?;
                PseudoTerm::var(x, d)
            }
            Tok::LParen => {
                self.cur.bump();
                let t = self.term()?;
                self.cur.expect(&Tok::RParen)?;
                t
            }
            _ if k.is_some() => return Err(self.cur.unexpected("a term after doors")),
            _ => return Ok(None),
        };
        Ok(Some(self.attach(t, k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_parses() {
        let p = parse_pseudo("x:$a, g:!(a -o a) |- (\\f:!(a -o a). $((~f) ((~f) ~x))) $((\\h:a -o a. h) ~g)").unwrap();
        assert_eq!(p.context.len(), 2);
        assert_eq!(p.term.door_counts(), (2, 4));
        let again = parse_pseudo(&format!("x:$a, g:!(a -o a) |- {}", p.term)).unwrap();
        assert_eq!(again.term.door_counts(), (2, 4));
        assert!(again.term.erase().alpha_eq(&p.term.erase()));
    }

    #[test]
    fn opposite_doors_cancel() {
        for src in ["\\x:$a. $~x", "\\x:$a. $(~x)", "\\x:$a. ~$^2 x"] {
            let p = parse_pseudo(src).unwrap();
            let PseudoNode::Lam(_, _, b) = p.term.node else { panic!() };
            assert_eq!(b.doors, if src.contains('2') { 1 } else { 0 }, "{src}");
        }
    }

    #[test]
    fn counted_doors() {
        let p = parse_pseudo("\\x:a. $^3 x").unwrap();
        match p.term.node {
            PseudoNode::Lam(_, _, b) => assert_eq!(b.doors, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn doors_on_binders() {
        let p = parse_pseudo("\\x:$forall a. a. /\\a. $((~x) [a])").unwrap();
        let t = parse_pseudo("\\x:forall a. $a. $/\\a. ~(x [a])").unwrap();
        assert!(p.term.erase().alpha_eq(&t.term.erase()));
        match t.term.node {
            PseudoNode::Lam(_, _, b) => assert_eq!(b.doors, 1),
            other => panic!("{other:?}"),
        }
    }
}
