use std::collections::HashMap;

use super::lexer::{tokenize, Cursor, Tok};
use super::types::{FType, IdGen, TermVar, TyVar};
use super::{FTerm, ParseError};

/// Parsed term together with the declared context of free variables.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub context: Vec<(TermVar, FType)>,
    pub term: FTerm,
    /// Identifier source positioned after every id used by the parse.
    pub ids: IdGen,
}

/// Parse a closed term. A leading `x:T, y:U |-` context is rejected here;
/// use [`parse_open_term`] to accept one.
pub fn parse_term(text: &str) -> Result<FTerm, ParseError> {
    let parsed = parse_open_term(text)?;
    if let Some((x, _)) = parsed.context.first() {
        return Err(ParseError::new(
            1,
            1,
            format!("unexpected context declaration for `{x}`; a closed term is required"),
        ));
    }
    Ok(parsed.term)
}

/// Parse a term with an optional context prefix `x:T, y:U |- term`.
pub fn parse_open_term(text: &str) -> Result<Parsed, ParseError> {
    let mut p = Parser::new(text)?;
    let context = p.context()?;
    let term = p.term()?;
    if *p.cur.peek() != Tok::Eof {
        return Err(p.cur.unexpected("end of input"));
    }
    Ok(Parsed { context, term, ids: p.ids })
}

/// Parse a System F type.
pub fn parse_type(text: &str) -> Result<FType, ParseError> {
    let mut p = Parser::new(text)?;
    let ty = p.ty()?;
    if *p.cur.peek() != Tok::Eof {
        return Err(p.cur.unexpected("end of input"));
    }
    Ok(ty)
}

struct Parser {
    cur: Cursor,
    ids: IdGen,
    free_tyvars: HashMap<String, TyVar>,
    ty_scope: Vec<TyVar>,
    term_scope: Vec<(TermVar, FType)>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Self {
            cur: Cursor::new(tokenize(text)?),
            ids: IdGen::new(),
            free_tyvars: HashMap::new(),
            ty_scope: Vec::new(),
            term_scope: Vec::new(),
        })
    }

    fn context(&mut self) -> Result<Vec<(TermVar, FType)>, ParseError> {
        // A context is present iff a `|-` token occurs before any binder syntax.
        let has_ctx = (0..).map(|i| self.cur.peek_at(i)).take_while(|t| **t != Tok::Eof).any(|t| *t == Tok::Turnstile);
        if !has_ctx {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        if !self.cur.eat(&Tok::Turnstile) {
            loop {
                let name = self.cur.ident()?;
                self.cur.expect(&Tok::Colon)?;
                let ty = self.ty()?;
                let x = self.ids.termvar(&name);
                self.term_scope.push((x.clone(), ty.clone()));
                out.push((x, ty));
                if !self.cur.eat(&Tok::Comma) {
                    break;
                }
            }
            self.cur.expect(&Tok::Turnstile)?;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<FTerm, ParseError> {
        match self.cur.peek() {
            Tok::Lambda => self.lambda(),
            Tok::BigLambda => self.tylambda(),
            _ => self.application(),
        }
    }

    fn lambda(&mut self) -> Result<FTerm, ParseError> {
        self.cur.expect(&Tok::Lambda)?;
        let name = self.cur.ident()?;
        self.cur.expect(&Tok::Colon)?;
        let ty = self.ty()?;
        self.cur.expect(&Tok::Dot)?;
        let x = self.ids.termvar(&name);
        self.term_scope.push((x.clone(), ty.clone()));
        let body = self.term();
        self.term_scope.pop();
        Ok(FTerm::lam(x, ty, body?))
    }

    fn tylambda(&mut self) -> Result<FTerm, ParseError> {
        self.cur.expect(&Tok::BigLambda)?;
        let name = self.cur.ident()?;
        self.cur.expect(&Tok::Dot)?;
        let a = self.ids.tyvar(&name);
        self.ty_scope.push(a.clone());
        let body = self.term();
        self.ty_scope.pop();
        Ok(FTerm::tylam(a, body?))
    }

    fn application(&mut self) -> Result<FTerm, ParseError> {
        let mut head = self.atom()?;
        loop {
            match self.cur.peek() {
                Tok::LBracket => {
                    self.cur.bump();
                    let ty = self.ty()?;
                    self.cur.expect(&Tok::RBracket)?;
                    head = FTerm::tyapp(head, ty);
                }
                Tok::Lambda | Tok::BigLambda => {
                    let arg = self.term()?;
                    return Ok(FTerm::app(head, arg));
                }
                Tok::Ident(_) | Tok::LParen => {
                    let arg = self.atom()?;
                    head = FTerm::app(head, arg);
                }
                _ => return Ok(head),
            }
        }
    }

    fn atom(&mut self) -> Result<FTerm, ParseError> {
        let (line, col) = self.cur.here();
        match self.cur.peek().clone() {
            Tok::Ident(name) => {
                self.cur.bump();
                let found = self.term_scope.iter().rev().find(|(x, _)| x.name() == name);
                match found {
                    Some((x, ty)) => Ok(FTerm::Var(x.clone(), ty.clone())),
                    None => Err(ParseError::new(line, col, format!("unbound variable `{name}`"))),
                }
            }
            Tok::LParen => {
                self.cur.bump();
                let t = self.term()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.cur.unexpected("a term")),
        }
    }

    fn ty(&mut self) -> Result<FType, ParseError> {
        if self.cur.eat(&Tok::Forall) {
            let name = self.cur.ident()?;
            self.cur.expect(&Tok::Dot)?;
            let a = self.ids.tyvar(&name);
            self.ty_scope.push(a.clone());
            let body = self.ty();
            self.ty_scope.pop();
            return Ok(FType::forall(a, body?));
        }
        let dom = self.ty_atom()?;
        if self.cur.eat(&Tok::Arrow) {
            let cod = self.ty()?;
            Ok(FType::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn ty_atom(&mut self) -> Result<FType, ParseError> {
        match self.cur.peek().clone() {
            Tok::LParen => {
                self.cur.bump();
                let t = self.ty()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) => {
                self.cur.bump();
                if let Some(a) = self.ty_scope.iter().rev().find(|a| a.name() == name) {
                    return Ok(FType::var(a));
                }
                match name.as_str() {
                    "N" => Ok(FType::nat(&mut self.ids)),
                    "W" => Ok(FType::word(&mut self.ids)),
                    _ => {
                        let ids = &mut self.ids;
                        let a = self.free_tyvars.entry(name.clone()).or_insert_with(|| ids.tyvar(&name));
                        Ok(FType::var(a))
                    }
                }
            }
            _ => Err(self.cur.unexpected("a type")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_shape() {
        let t = parse_term("/\\a. \\x:a. x").unwrap();
        match t {
            FTerm::TyLam(a, body) => match *body {
                FTerm::Lam(x, FType::Var(ref b), ref inner) => {
                    assert_eq!(&a, b);
                    assert!(matches!(**inner, FTerm::Var(ref y, _) if *y == x));
                }
                ref other => panic!("unexpected body {other:?}"),
            },
            other => panic!("unexpected term {other:?}"),
        }
    }

    #[test]
    fn binders_get_unique_ids() {
        let t = parse_term("/\\a. \\x:a. /\\a. \\x:a. x").unwrap();
        let mut ids = Vec::new();
        fn walk(t: &FTerm, ids: &mut Vec<u32>) {
            match t {
                FTerm::Lam(x, _, b) => {
                    ids.push(x.id());
                    walk(b, ids)
                }
                FTerm::TyLam(a, b) => {
                    ids.push(a.id());
                    walk(b, ids)
                }
                _ => {}
            }
        }
        walk(&t, &mut ids);
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
    }

    #[test]
    fn nat_abbreviation() {
        let t = parse_term("\\n:N. n").unwrap();
        match t {
            FTerm::Lam(_, ty, _) => assert!(ty.is_nat()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbound_variable_reports_position() {
        let err = parse_term("\\x:a.\n  y").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
        assert!(err.message.contains("unbound variable `y`"));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_term("\\x a. x").unwrap_err();
        assert_eq!((err.line, err.col), (1, 4));
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_term("\\f:a->a->a. \\x:a. f x x").unwrap();
        let FTerm::Lam(_, _, b) = t else { panic!() };
        let FTerm::Lam(_, _, b) = *b else { panic!() };
        let FTerm::App(f, _) = *b else { panic!() };
        assert!(matches!(*f, FTerm::App(..)));
    }

    #[test]
    fn context_prefix() {
        let p = parse_open_term("x:a, f:a -> a |- f x").unwrap();
        assert_eq!(p.context.len(), 2);
        assert!(parse_term("x:a |- x").is_err());
    }
}
