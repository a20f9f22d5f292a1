use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::fsyntax::lexer::{tokenize, Cursor, Tok};
use crate::fsyntax::{IdGen, ParseError, TyVar};

use super::ptype::{BangPType, LinPType, PF};
use super::{BoolParam, Decorated, Instantiation, IntParam, LinComb, PNode, PTerm, PVar, ParamSource};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DumpError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

fn err(line: usize, message: impl Into<String>) -> DumpError {
    DumpError::Syntax { line, message: message.into() }
}

fn lift(line: usize, e: ParseError) -> DumpError {
    err(line, format!("column {}: {}", e.col, e.message))
}

/// Indented one-node-per-line dump of a decorated term. Free variables
/// come first as `free x : D` lines.
pub fn dump_pterm(d: &Decorated) -> String {
    let mut out = String::new();
    for v in &d.free {
        let _ = writeln!(out, "free {} : {}", v.var.name(), v.decl);
    }
    dump_node(&d.term, 0, &mut out);
    out
}

fn dump_node(t: &PTerm, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent * 2);
    let door = t.door;
    match &t.node {
        PNode::Var(v) => {
            let _ = writeln!(out, "{pad}^{door} var {}", v.var.name());
        }
        PNode::Lam(v, b) => {
            let _ = writeln!(out, "{pad}^{door} lam {} : {}", v.var.name(), v.decl);
            dump_node(b, indent + 1, out);
        }
        PNode::App(f, a) => {
            let _ = writeln!(out, "{pad}^{door} app");
            dump_node(f, indent + 1, out);
            dump_node(a, indent + 1, out);
        }
        PNode::TyLam(a, b) => {
            let _ = writeln!(out, "{pad}^{door} tylam {}", a.name());
            dump_node(b, indent + 1, out);
        }
        PNode::TyApp(f, ty) => {
            let _ = writeln!(out, "{pad}^{door} tyapp {ty}");
            dump_node(f, indent + 1, out);
        }
    }
}

struct Line<'a> {
    number: usize,
    indent: usize,
    text: &'a str,
}

struct DumpReader<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    ids: IdGen,
    tyvars: Vec<TyVar>,
    free_tyvars: HashMap<String, TyVar>,
    vars: Vec<PVar>,
    free: Vec<PVar>,
    max_door: u32,
    max_exp: u32,
    max_bool: u32,
}

/// Read back the output of [`dump_pterm`].
pub fn parse_pterm_dump(text: &str) -> Result<Decorated, DumpError> {
    let lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            let trimmed = l.trim_start();
            Line { number: i + 1, indent: l.len() - trimmed.len(), text: trimmed.trim_end() }
        })
        .collect();
    let mut r = DumpReader {
        lines,
        pos: 0,
        ids: IdGen::new(),
        tyvars: Vec::new(),
        free_tyvars: HashMap::new(),
        vars: Vec::new(),
        free: Vec::new(),
        max_door: 0,
        max_exp: 0,
        max_bool: 0,
    };
    while r.pos < r.lines.len() && r.lines[r.pos].text.starts_with("free ") {
        let line = &r.lines[r.pos];
        let (number, rest) = (line.number, &line.text[5..]);
        let (name, ty) = rest.split_once(':').ok_or_else(|| err(number, "expected `free x : D`"))?;
        let mut cur = Cursor::new(tokenize(ty).map_err(|e| lift(number, e))?);
        let decl = r.bang(&mut cur, number)?;
        r.end(&cur, number)?;
        let x = r.ids.termvar(name.trim());
        r.free.push(PVar { var: x, decl: Arc::new(decl) });
        r.pos += 1;
    }
    let indent = r.lines.get(r.pos).map(|l| l.indent).ok_or_else(|| err(0, "empty dump"))?;
    let term = r.node(indent)?;
    if let Some(l) = r.lines.get(r.pos) {
        return Err(err(l.number, "trailing lines after the term"));
    }
    let mut params = ParamSource::new();
    for _ in 0..r.max_door {
        params.door("read from dump");
    }
    for _ in 0..r.max_exp {
        params.exponent("read from dump");
    }
    for _ in 0..r.max_bool {
        params.boolean("read from dump");
    }
    let next_id = r.ids.fresh();
    Ok(Decorated { term, free: r.free, params, next_id })
}

impl DumpReader<'_> {
    fn node(&mut self, indent: usize) -> Result<PTerm, DumpError> {
        let line = self.lines.get(self.pos).ok_or_else(|| err(0, "unexpected end of dump"))?;
        let number = line.number;
        if line.indent != indent {
            return Err(err(number, format!("expected indentation {indent}, found {}", line.indent)));
        }
        let text = line.text;
        self.pos += 1;
        let (door_tok, rest) = text.split_once(' ').unwrap_or((text, ""));
        let door = door_tok
            .strip_prefix("^m")
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| err(number, format!("expected a door `^m<k>`, found `{door_tok}`")))?;
        self.max_door = self.max_door.max(door);
        let door = IntParam::door(door);
        let (kind, arg) = rest.split_once(' ').unwrap_or((rest, ""));
        let child = indent + 2;
        let node = match kind {
            "var" => {
                let name = arg.trim();
                let v = self
                    .vars
                    .iter()
                    .rev()
                    .chain(self.free.iter())
                    .find(|v| v.var.name() == name)
                    .cloned()
                    .ok_or_else(|| err(number, format!("unbound variable `{name}`")))?;
                PNode::Var(v)
            }
            "lam" => {
                let (name, ty) = arg.split_once(':').ok_or_else(|| err(number, "expected `lam x : D`"))?;
                let mut cur = Cursor::new(tokenize(ty).map_err(|e| lift(number, e))?);
                let decl = self.bang(&mut cur, number)?;
                self.end(&cur, number)?;
                let v = PVar { var: self.ids.termvar(name.trim()), decl: Arc::new(decl) };
                self.vars.push(v.clone());
                let body = self.node(child);
                self.vars.pop();
                PNode::Lam(v, Box::new(body?))
            }
            "app" => {
                let f = self.node(child)?;
                let a = self.node(child)?;
                PNode::App(Box::new(f), Box::new(a))
            }
            "tylam" => {
                let a = self.ids.tyvar(arg.trim());
                self.tyvars.push(a.clone());
                let body = self.node(child);
                self.tyvars.pop();
                PNode::TyLam(a, Box::new(body?))
            }
            "tyapp" => {
                let mut cur = Cursor::new(tokenize(arg).map_err(|e| lift(number, e))?);
                let ty = self.lin(&mut cur, number)?;
                self.end(&cur, number)?;
                PNode::TyApp(Box::new(self.node(child)?), ty)
            }
            other => return Err(err(number, format!("unknown node kind `{other}`"))),
        };
        Ok(PTerm { door, node })
    }

    fn end(&self, cur: &Cursor, number: usize) -> Result<(), DumpError> {
        if *cur.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(lift(number, cur.unexpected("end of line")))
        }
    }

    fn lin(&mut self, cur: &mut Cursor, number: usize) -> Result<LinPType, DumpError> {
        let (bang, exps) = self.prefix(cur, number)?;
        if bang.is_some() {
            return Err(err(number, "a linear p-type cannot carry a boolean parameter"));
        }
        let body = self.pf(cur, number)?;
        Ok(LinPType::new(exps, body))
    }

    fn bang(&mut self, cur: &mut Cursor, number: usize) -> Result<BangPType, DumpError> {
        let (bang, exps) = self.prefix(cur, number)?;
        let bang = bang.ok_or_else(|| err(number, "a declaration needs a boolean parameter `$^{b,c}`"))?;
        let body = self.pf(cur, number)?;
        Ok(BangPType { bang, exps, body })
    }

    /// `$^{c}` or `$^{b,c}`.
    fn prefix(&mut self, cur: &mut Cursor, number: usize) -> Result<(Option<BoolParam>, LinComb), DumpError> {
        for t in [Tok::Dollar, Tok::Caret, Tok::LBrace] {
            cur.expect(&t).map_err(|e| lift(number, e))?;
        }
        let mut bang = None;
        if let (Tok::Ident(s), Tok::Comma) = (cur.peek().clone(), cur.peek_at(1).clone()) {
            let id = s
                .strip_prefix('b')
                .and_then(|k| k.parse::<u32>().ok())
                .ok_or_else(|| err(number, format!("expected a boolean parameter, found `{s}`")))?;
            self.max_bool = self.max_bool.max(id);
            bang = Some(BoolParam(id));
            cur.bump();
            cur.bump();
        }
        let comb = self.comb(cur, number)?;
        cur.expect(&Tok::RBrace).map_err(|e| lift(number, e))?;
        Ok((bang, comb))
    }

    fn comb(&mut self, cur: &mut Cursor, number: usize) -> Result<LinComb, DumpError> {
        let comb = parse_comb(cur).map_err(|e| lift(number, e))?;
        for p in comb.params() {
            match p.kind {
                super::ParamKind::Door => self.max_door = self.max_door.max(p.id),
                super::ParamKind::Exponent => self.max_exp = self.max_exp.max(p.id),
            }
        }
        Ok(comb)
    }

    fn pf(&mut self, cur: &mut Cursor, number: usize) -> Result<PF, DumpError> {
        match cur.peek().clone() {
            Tok::Ident(name) => {
                cur.bump();
                let v = match self.tyvars.iter().rev().find(|v| v.name() == name) {
                    Some(v) => v.clone(),
                    None => {
                        let ids = &mut self.ids;
                        self.free_tyvars.entry(name.clone()).or_insert_with(|| ids.tyvar(&name)).clone()
                    }
                };
                Ok(PF::Var(v))
            }
            Tok::LParen => {
                cur.bump();
                let f = if cur.eat(&Tok::Forall) {
                    let name = cur.ident().map_err(|e| lift(number, e))?;
                    cur.expect(&Tok::Dot).map_err(|e| lift(number, e))?;
                    let a = self.ids.tyvar(&name);
                    self.tyvars.push(a.clone());
                    let body = self.lin(cur, number);
                    self.tyvars.pop();
                    PF::Forall(a, Box::new(body?))
                } else {
                    let d = self.bang(cur, number)?;
                    cur.expect(&Tok::Lolli).map_err(|e| lift(number, e))?;
                    let a = self.lin(cur, number)?;
                    PF::Arrow(Box::new(d), Box::new(a))
                };
                cur.expect(&Tok::RParen).map_err(|e| lift(number, e))?;
                Ok(f)
            }
            _ => Err(lift(number, cur.unexpected("a p-type"))),
        }
    }
}

fn parse_param(name: &str) -> Option<IntParam> {
    if let Some(k) = name.strip_prefix('m') {
        return k.parse().ok().map(IntParam::door);
    }
    name.strip_prefix('n').and_then(|k| k.parse().ok()).map(IntParam::exponent)
}

/// `0`, or a signed sum of `k*p` terms.
pub(crate) fn parse_comb(cur: &mut Cursor) -> Result<LinComb, ParseError> {
    let mut comb = LinComb::zero();
    if matches!(cur.peek(), Tok::Int(0)) {
        cur.bump();
        return Ok(comb);
    }
    let mut sign = 1;
    if cur.eat(&Tok::Minus) {
        sign = -1;
    }
    loop {
        let mut coeff = 1;
        if let Tok::Int(k) = cur.peek().clone() {
            cur.bump();
            cur.expect(&Tok::Star)?;
            coeff = k;
        }
        let name = cur.ident()?;
        let p = parse_param(&name).ok_or_else(|| cur.unexpected("an integer parameter `m<k>` or `n<k>`"))?;
        comb.add_term(p, sign * coeff);
        if cur.eat(&Tok::Plus) {
            sign = 1;
        } else if cur.eat(&Tok::Minus) {
            sign = -1;
        } else {
            return Ok(comb);
        }
    }
}

/// `param = value` lines, booleans first.
pub fn write_instantiation(phi: &Instantiation) -> String {
    let mut out = String::new();
    for (b, v) in &phi.bools {
        let _ = writeln!(out, "{b} = {}", u8::from(*v));
    }
    for (p, v) in &phi.ints {
        let _ = writeln!(out, "{p} = {v}");
    }
    out
}

/// Read `b3 = 1`, `m2 = -1`, `n4 = 0` lines; `#` starts a comment.
pub fn parse_instantiation(text: &str) -> Result<Instantiation, DumpError> {
    let mut phi = Instantiation::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, value) = line.split_once('=').ok_or_else(|| err(number, "expected `param = value`"))?;
        let (name, value) = (name.trim(), value.trim());
        let v: i64 = value.parse().map_err(|_| err(number, format!("not an integer: `{value}`")))?;
        if let Some(id) = name.strip_prefix('b').and_then(|k| k.parse::<u32>().ok()) {
            match v {
                0 | 1 => phi.set_bool(BoolParam(id), v == 1),
                _ => return Err(err(number, format!("boolean {name} must be 0 or 1"))),
            }
        } else if let Some(p) = parse_param(name) {
            phi.set_int(p, v);
        } else {
            return Err(err(number, format!("unknown parameter `{name}`")));
        }
    }
    Ok(phi)
}
