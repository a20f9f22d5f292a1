use std::collections::{BTreeSet, HashMap};

use super::types::{fresh_name, FType, TermVar, TyVar};
use super::FTerm;

/// Names in scope while printing. Binders whose source name is already
/// visible get primed so that the output re-parses to the same AST.
#[derive(Default)]
struct Names {
    ty: HashMap<u32, String>,
    term: HashMap<u32, String>,
    taken: BTreeSet<String>,
}

impl Names {
    fn bind(&mut self, base: &str) -> String {
        let name = if self.taken.contains(base) { fresh_name(base, &self.taken) } else { base.to_string() };
        self.taken.insert(name.clone());
        name
    }

    fn ty_name(&self, v: &TyVar) -> String {
        self.ty.get(&v.id()).cloned().unwrap_or_else(|| v.name().to_string())
    }

    fn term_name(&self, x: &TermVar) -> String {
        self.term.get(&x.id()).cloned().unwrap_or_else(|| x.name().to_string())
    }
}

fn reserved() -> BTreeSet<String> {
    ["N", "W", "forall"].iter().map(|s| s.to_string()).collect()
}

pub fn print_type(ty: &FType) -> String {
    let mut names = Names { taken: reserved(), ..Default::default() };
    for v in ty.free_vars() {
        names.taken.insert(v.name().to_string());
    }
    let mut out = String::new();
    write_type(ty, &mut names, &mut out);
    out
}

fn write_type(ty: &FType, names: &mut Names, out: &mut String) {
    if ty.free_vars().is_empty() {
        if ty.is_nat() {
            out.push('N');
            return;
        }
        if ty.is_word() {
            out.push('W');
            return;
        }
    }
    match ty {
        FType::Var(v) => out.push_str(&names.ty_name(v)),
        FType::Arrow(a, b) => {
            let paren = matches!(**a, FType::Arrow(..) | FType::Forall(..)) && !is_abbrev(a);
            if paren {
                out.push('(');
            }
            write_type(a, names, out);
            if paren {
                out.push(')');
            }
            out.push_str(" -> ");
            write_type(b, names, out);
        }
        FType::Forall(v, body) => {
            let name = names.bind(v.name());
            let saved = names.ty.insert(v.id(), name.clone());
            out.push_str("forall ");
            out.push_str(&name);
            out.push_str(". ");
            write_type(body, names, out);
            restore(&mut names.ty, v.id(), saved);
            names.taken.remove(&name);
        }
    }
}

fn is_abbrev(ty: &FType) -> bool {
    ty.free_vars().is_empty() && (ty.is_nat() || ty.is_word())
}

fn restore(map: &mut HashMap<u32, String>, id: u32, saved: Option<String>) {
    match saved {
        Some(s) => map.insert(id, s),
        None => map.remove(&id),
    };
}

/// Print a term in the concrete syntax accepted by the parser.
pub fn print_term(term: &FTerm) -> String {
    let mut names = Names { taken: reserved(), ..Default::default() };
    for x in term.free_vars().keys() {
        names.taken.insert(x.name().to_string());
    }
    collect_free_tyvar_names(term, &mut names.taken);
    let mut out = String::new();
    write_term(term, &mut names, &mut out);
    out
}

/// Print an open term with its context prefix.
pub fn print_open_term(context: &[(TermVar, FType)], term: &FTerm) -> String {
    if context.is_empty() {
        return print_term(term);
    }
    let decls: Vec<String> = context.iter().map(|(x, t)| format!("{x}:{}", print_type(t))).collect();
    format!("{} |- {}", decls.join(", "), print_term(term))
}

fn collect_free_tyvar_names(term: &FTerm, out: &mut BTreeSet<String>) {
    fn go(t: &FTerm, bound: &mut Vec<u32>, out: &mut BTreeSet<String>) {
        let mut note = |ty: &FType, bound: &Vec<u32>| {
            for v in ty.free_vars() {
                if !bound.contains(&v.id()) {
                    out.insert(v.name().to_string());
                }
            }
        };
        match t {
            FTerm::Var(_, ty) => note(ty, bound),
            FTerm::Lam(_, ty, b) => {
                note(ty, bound);
                go(b, bound, out);
            }
            FTerm::App(f, a) => {
                go(f, bound, out);
                go(a, bound, out);
            }
            FTerm::TyLam(a, b) => {
                bound.push(a.id());
                go(b, bound, out);
                bound.pop();
            }
            FTerm::TyApp(b, ty) => {
                note(ty, bound);
                go(b, bound, out);
            }
        }
    }
    go(term, &mut Vec::new(), out);
}

fn write_term(t: &FTerm, names: &mut Names, out: &mut String) {
    match t {
        FTerm::Var(x, _) => out.push_str(&names.term_name(x)),
        FTerm::Lam(x, ty, body) => {
            out.push('\\');
            let name = names.bind(x.name());
            out.push_str(&name);
            out.push(':');
            write_type(ty, names, out);
            out.push_str(". ");
            let saved = names.term.insert(x.id(), name.clone());
            write_term(body, names, out);
            restore(&mut names.term, x.id(), saved);
            names.taken.remove(&name);
        }
        FTerm::TyLam(a, body) => {
            out.push_str("/\\");
            let name = names.bind(a.name());
            out.push_str(&name);
            out.push_str(". ");
            let saved = names.ty.insert(a.id(), name.clone());
            write_term(body, names, out);
            restore(&mut names.ty, a.id(), saved);
            names.taken.remove(&name);
        }
        FTerm::App(f, a) => {
            write_fun(f, names, out);
            out.push(' ');
            let paren = matches!(**a, FTerm::App(..) | FTerm::TyApp(..) | FTerm::Lam(..) | FTerm::TyLam(..));
            if paren {
                out.push('(');
            }
            write_term(a, names, out);
            if paren {
                out.push(')');
            }
        }
        FTerm::TyApp(f, ty) => {
            write_fun(f, names, out);
            out.push_str(" [");
            write_type(ty, names, out);
            out.push(']');
        }
    }
}

fn write_fun(f: &FTerm, names: &mut Names, out: &mut String) {
    let paren = matches!(f, FTerm::Lam(..) | FTerm::TyLam(..));
    if paren {
        out.push('(');
    }
    write_term(f, names, out);
    if paren {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsyntax::parse::parse_term;

    #[test]
    fn round_trip_simple_terms() {
        for src in [
            "/\\a. \\x:a. x",
            "\\n:N. n",
            "\\f:a -> a. \\x:a. f (f x)",
            "\\l:W. /\\b. \\s:b -> b. l [b -> b] s s",
            "(\\x:a. x) (\\y:a. y)",
        ] {
            let t = parse_term(src).unwrap();
            let printed = print_term(&t);
            let back = parse_term(&printed).unwrap();
            assert!(t.alpha_eq(&back), "{src} -> {printed}");
        }
    }

    #[test]
    fn shadowed_binders_are_primed() {
        let t = parse_term("\\x:a. \\x:a. x").unwrap();
        assert_eq!(print_term(&t), "\\x:a. \\x':a. x'");
    }

    #[test]
    fn prints_abbreviations() {
        let t = parse_term("\\n:forall a. (a -> a) -> a -> a. n").unwrap();
        assert_eq!(print_term(&t), "\\n:N. n");
    }
}
