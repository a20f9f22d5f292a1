//! Graphviz rendering of pseudo-terms: one node per constructor, one node
//! per door, opening doors drawn as triangles and closing doors upside down.

use std::fmt::Write;

use crate::pseudo::{PseudoNode, PseudoTerm};

pub const OPEN_STYLE: &str = "shape=triangle, style=filled, fillcolor=lightblue";
pub const CLOSE_STYLE: &str = "shape=invtriangle, style=filled, fillcolor=lightsalmon";

struct Builder {
    out: String,
    next: usize,
    binders: Vec<(String, String)>,
}

impl Builder {
    fn fresh(&mut self, prefix: char) -> String {
        let id = format!("{prefix}{}", self.next);
        self.next += 1;
        id
    }

    /// Emit the doors and constructor of `t`, returning the id of the
    /// topmost node so that the caller can link to it.
    fn term(&mut self, t: &PseudoTerm) -> String {
        let mut doors = Vec::new();
        for _ in 0..t.doors.unsigned_abs() {
            let id = self.fresh('d');
            let (label, style) = if t.doors > 0 { ("§", OPEN_STYLE) } else { ("§̄", CLOSE_STYLE) };
            writeln!(self.out, "  {id} [label=\"{label}\", {style}];").unwrap();
            doors.push(id);
        }
        let id = self.fresh('n');
        let label = match &t.node {
            PseudoNode::Var(x, _) => x.name().to_string(),
            PseudoNode::Lam(x, d, _) => format!("λ{}:{d}", x.name()),
            PseudoNode::App(..) => "@".to_string(),
            PseudoNode::TyLam(a, _) => format!("Λ{}", a.name()),
            PseudoNode::TyApp(_, ty) => format!("@[{ty}]"),
        };
        writeln!(self.out, "  {id} [label=\"{}\"];", escape(&label)).unwrap();
        match &t.node {
            PseudoNode::Var(x, _) => {
                if let Some((_, b)) = self.binders.iter().rev().find(|(n, _)| n == x.name()) {
                    writeln!(self.out, "  {id} -> {b} [style=dashed, constraint=false];").unwrap();
                }
            }
            PseudoNode::Lam(x, _, body) => {
                self.binders.push((x.name().to_string(), id.clone()));
                let c = self.term(body);
                self.binders.pop();
                writeln!(self.out, "  {id} -> {c};").unwrap();
            }
            PseudoNode::App(f, a) => {
                let cf = self.term(f);
                let ca = self.term(a);
                writeln!(self.out, "  {id} -> {cf} [label=\"fun\"];").unwrap();
                writeln!(self.out, "  {id} -> {ca} [label=\"arg\"];").unwrap();
            }
            PseudoNode::TyLam(_, body) | PseudoNode::TyApp(body, _) => {
                let c = self.term(body);
                writeln!(self.out, "  {id} -> {c};").unwrap();
            }
        }
        let mut below = id;
        for d in doors.into_iter().rev() {
            writeln!(self.out, "  {d} -> {below};").unwrap();
            below = d;
        }
        below
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn export_dot(t: &PseudoTerm) -> String {
    let mut b = Builder { out: String::new(), next: 0, binders: Vec::new() };
    b.out.push_str("digraph pseudo {\n  node [fontname=\"monospace\"];\n");
    b.term(t);
    b.out.push_str("}\n");
    b.out
}

/// Number of opening and closing door nodes in a rendered graph.
pub fn count_doors(dot: &str) -> (usize, usize) {
    let open = dot.lines().filter(|l| l.contains(OPEN_STYLE)).count();
    let close = dot.lines().filter(|l| l.contains(CLOSE_STYLE)).count();
    (open, close)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo::parse_pseudo;

    fn dot(src: &str) -> String {
        export_dot(&parse_pseudo(src).unwrap().term)
    }

    #[test]
    fn identity_has_no_doors() {
        let g = dot("/\\a. \\x:a. x");
        assert_eq!(count_doors(&g), (0, 0));
        assert!(g.starts_with("digraph"));
    }

    #[test]
    fn doors_are_counted_per_sign() {
        let g = dot("x:$a, g:!(a -o a) |- (\\f:!(a -o a). $((~f) ((~f) ~x))) $((\\h:a -o a. h) ~g)");
        assert_eq!(count_doors(&g), (2, 4));
    }

    #[test]
    fn numeral_one_is_a_chain() {
        let g = dot("/\\a. \\f:a -o a. \\x:a. f x");
        let edges = g.lines().filter(|l| l.contains("->") && !l.contains("dashed")).count();
        let nodes = g.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
        assert_eq!(edges, nodes - 1);
    }
}
