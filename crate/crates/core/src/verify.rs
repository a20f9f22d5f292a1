//! Well-structuredness checker for instantiated pseudo-terms.
//!
//! Works on the pseudo-term alone, with concrete signed door counts. It shares
//! no code with constraint generation so that the two can validate each other.

use std::collections::HashMap;
use std::fmt;

use crate::dlal_types::{StarDecl, StarType};
use crate::fsyntax::TermVar;
use crate::par::{map_items, Strategy};
use crate::pseudo::{PseudoNode, PseudoTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    LocalTyping,
    Bracketing,
    Bang,
    Scope,
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Condition::LocalTyping => "local-typing",
            Condition::Bracketing => "bracketing",
            Condition::Bang => "bang",
            Condition::Scope => "scope",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub condition: Condition,
    /// Clause within the condition, such as `ii.b`.
    pub clause: &'static str,
    pub position: String,
    pub explanation: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}) at {}: {}", self.condition, self.clause, self.position, self.explanation)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub failures: Vec<Failure>,
    pub output_type: Option<StarType>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn fails(&self, condition: Condition) -> bool {
        self.failures.iter().any(|f| f.condition == condition)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::Pass => writeln!(f, "pass")?,
            Verdict::Fail => writeln!(f, "fail")?,
        }
        if let Some(t) = &self.output_type {
            writeln!(f, "type: {t}")?;
        }
        for x in &self.failures {
            writeln!(f, "  {x}")?;
        }
        Ok(())
    }
}

struct Node<'a> {
    term: &'a PseudoTerm,
    parent: Option<usize>,
    children: Vec<usize>,
    end: usize,
    path: Vec<usize>,
    /// For variables: the index of the binding abstraction, if bound.
    binder: Option<usize>,
}

/// Preorder view of a pseudo-term.
struct Tree<'a> {
    nodes: Vec<Node<'a>>,
}

impl<'a> Tree<'a> {
    fn new(t: &'a PseudoTerm) -> Self {
        let mut tree = Tree { nodes: Vec::new() };
        let mut scope: Vec<(TermVar, usize)> = Vec::new();
        tree.push(t, None, Vec::new(), &mut scope);
        tree
    }

    fn push(&mut self, t: &'a PseudoTerm, parent: Option<usize>, path: Vec<usize>, scope: &mut Vec<(TermVar, usize)>) {
        let i = self.nodes.len();
        let binder = match &t.node {
            PseudoNode::Var(x, _) => scope.iter().rev().find(|(y, _)| y == x).map(|(_, b)| *b),
            _ => None,
        };
        self.nodes.push(Node { term: t, parent, children: Vec::new(), end: 0, path: path.clone(), binder });
        if let PseudoNode::Lam(x, _, _) = &t.node {
            scope.push((x.clone(), i));
        }
        for (k, c) in t.children().into_iter().enumerate() {
            let j = self.nodes.len();
            self.nodes[i].children.push(j);
            let mut p = path.clone();
            p.push(k);
            self.push(c, Some(i), p, scope);
        }
        if let PseudoNode::Lam(..) = &t.node {
            scope.pop();
        }
        self.nodes[i].end = self.nodes.len();
    }

    fn pos(&self, i: usize) -> String {
        let p = &self.nodes[i].path;
        if p.is_empty() {
            "root".to_string()
        } else {
            p.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(".")
        }
    }

    fn doors(&self, i: usize) -> i64 {
        self.nodes[i].term.doors
    }

    /// Door counts of the nodes from `from` down to `to`, both included.
    fn word(&self, from: usize, to: usize) -> Vec<i64> {
        let mut w = Vec::new();
        let mut cur = Some(to);
        while let Some(c) = cur {
            w.push(self.doors(c));
            if c == from {
                break;
            }
            cur = self.nodes[c].parent;
        }
        w.reverse();
        w
    }

    fn free_occurrences(&self, root: usize) -> Vec<usize> {
        let end = self.nodes[root].end;
        (root..end)
            .filter(|&j| {
                matches!(self.nodes[j].term.node, PseudoNode::Var(..))
                    && self.nodes[j].binder.is_none_or(|b| b < root || b >= end)
            })
            .collect()
    }
}

/// Minimum over all prefix sums, expanding each count into unit doors, and
/// the total. Since a count is single-signed, node boundaries suffice.
fn prefix_profile(word: &[i64]) -> (i64, i64) {
    let mut sum = 0;
    let mut min = 0;
    for k in word {
        sum += k;
        min = min.min(sum);
    }
    (min, sum)
}

fn weakly_well_bracketed(word: &[i64]) -> bool {
    prefix_profile(word).0 >= 0
}

fn well_bracketed(word: &[i64]) -> bool {
    let (min, sum) = prefix_profile(word);
    min >= 0 && sum == 0
}

fn show_word(word: &[i64]) -> String {
    let s: String =
        word.iter().map(|&k| if k >= 0 { "$".repeat(k as usize) } else { "~".repeat((-k) as usize) }).collect();
    if s.is_empty() {
        "the empty word".to_string()
    } else {
        format!("`{s}`")
    }
}

/// Output type of every node, under and including its doors.
struct Typing {
    head: Vec<Option<StarType>>,
    outer: Vec<Option<StarType>>,
}

fn fail(condition: Condition, clause: &'static str, position: String, explanation: String) -> Failure {
    Failure { condition, clause, position, explanation }
}

fn strip_paras(mut t: StarType, k: usize) -> Option<StarType> {
    for _ in 0..k {
        match t {
            StarType::Para(a) => t = *a,
            _ => return None,
        }
    }
    Some(t)
}

fn type_tree(tree: &Tree) -> (Typing, Vec<Failure>) {
    let n = tree.nodes.len();
    let mut head: Vec<Option<StarType>> = vec![None; n];
    let mut outer: Vec<Option<StarType>> = vec![None; n];
    let mut failures = Vec::new();
    for i in (0..n).rev() {
        let node = &tree.nodes[i];
        let lt = |msg: String| fail(Condition::LocalTyping, "i", tree.pos(i), msg);
        let child = |k: usize| outer[node.children[k]].clone();
        let h = match &node.term.node {
            PseudoNode::Var(x, d) => {
                if let Some(b) = node.binder {
                    if let PseudoNode::Lam(_, bd, _) = &tree.nodes[b].term.node {
                        if bd != d {
                            failures.push(lt(format!("occurrence of {} declared {d} but bound as {bd}", x.name())));
                        }
                    }
                }
                Some(d.circ())
            }
            PseudoNode::Lam(_, d, _) => child(0).map(|b| StarType::arrow(d.bang, d.ty.clone(), b)),
            PseudoNode::App(..) => match (child(0), child(1)) {
                (Some(StarType::Arrow { bang, dom, cod }), Some(a)) => {
                    let expected = StarDecl { bang, ty: *dom }.circ();
                    if expected == a {
                        Some(*cod)
                    } else {
                        failures.push(lt(format!("argument has type {a}, function expects {expected}")));
                        None
                    }
                }
                (Some(f), Some(_)) => {
                    failures.push(lt(format!("applied term has type {f}, not an arrow")));
                    None
                }
                _ => None,
            },
            PseudoNode::TyLam(alpha, _) => child(0).map(|b| StarType::Forall(alpha.clone(), Box::new(b))),
            PseudoNode::TyApp(_, arg) => match child(0) {
                Some(StarType::Forall(alpha, body)) => Some(body.subst(&alpha, arg)),
                Some(f) => {
                    failures.push(lt(format!("type application to a term of type {f}")));
                    None
                }
                None => None,
            },
        };
        let k = node.term.doors;
        let o = match h.clone() {
            Some(t) if k >= 0 => Some(StarType::paras(k as usize, t)),
            Some(t) => {
                let stripped = strip_paras(t.clone(), (-k) as usize);
                if stripped.is_none() {
                    failures.push(lt(format!("{} closing doors on a term of type {t}", -k)));
                }
                stripped
            }
            None => None,
        };
        head[i] = h;
        outer[i] = o;
    }
    failures.reverse();
    (Typing { head, outer }, failures)
}

fn multiplicity(tree: &Tree) -> Vec<Failure> {
    // Bound variables are identified by their binder, free ones by the variable.
    let mut count: HashMap<(Option<usize>, u32), (usize, usize)> = HashMap::new();
    for (i, node) in tree.nodes.iter().enumerate() {
        if let PseudoNode::Var(x, _) = &node.term.node {
            let e = count.entry((node.binder, x.id())).or_insert((0, i));
            e.0 += 1;
        }
    }
    let mut out: Vec<(usize, Failure)> = count
        .into_values()
        .filter(|(k, i)| *k >= 2 && matches!(&tree.nodes[*i].term.node, PseudoNode::Var(_, d) if !d.bang))
        .map(|(k, i)| {
            let PseudoNode::Var(x, d) = &tree.nodes[i].term.node else { unreachable!("filtered to variables") };
            (
                i,
                fail(
                    Condition::LocalTyping,
                    "ii",
                    tree.pos(i),
                    format!("{} occurs {k} times with linear type {d}", x.name()),
                ),
            )
        })
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, f)| f).collect()
}

fn eigenvariable(tree: &Tree) -> Vec<Failure> {
    let mut out = Vec::new();
    for (i, node) in tree.nodes.iter().enumerate() {
        let PseudoNode::TyLam(alpha, _) = &node.term.node else { continue };
        let body = node.children[0];
        for j in tree.free_occurrences(body) {
            let PseudoNode::Var(x, d) = &tree.nodes[j].term.node else { continue };
            if d.ty.occurs_free(alpha) {
                out.push(fail(
                    Condition::LocalTyping,
                    "iii",
                    tree.pos(i),
                    format!("{} is free in {} with {} : {d}", alpha.name(), tree.pos(j), x.name()),
                ));
            }
        }
    }
    out
}

/// Local typing: rule-directed output types, multiplicity and eigenvariable.
/// Returns the output type when every clause holds.
pub fn check_local_typing(t: &PseudoTerm) -> Result<StarType, Vec<Failure>> {
    let tree = Tree::new(t);
    local_typing_on(&tree).1
}

fn local_typing_on(tree: &Tree) -> (Typing, Result<StarType, Vec<Failure>>) {
    let (typing, mut failures) = type_tree(tree);
    failures.extend(multiplicity(tree));
    failures.extend(eigenvariable(tree));
    let result = match (&typing.outer[0], failures.is_empty()) {
        (Some(t), true) => Ok(t.clone()),
        _ => Err(failures),
    };
    (typing, result)
}

fn bracketing_on(tree: &Tree) -> Vec<Failure> {
    let mut out = Vec::new();
    for (i, node) in tree.nodes.iter().enumerate() {
        match &node.term.node {
            PseudoNode::Var(x, _) if node.binder.is_none() => {
                let w = tree.word(0, i);
                if !well_bracketed(&w) {
                    out.push(fail(
                        Condition::Bracketing,
                        "i",
                        tree.pos(i),
                        format!("path to free variable {} reads {}", x.name(), show_word(&w)),
                    ));
                }
            }
            PseudoNode::Lam(x, _, _) => {
                let w = tree.word(0, i);
                if !weakly_well_bracketed(&w) {
                    out.push(fail(
                        Condition::Bracketing,
                        "ii.a",
                        tree.pos(i),
                        format!("path to the abstraction reads {}", show_word(&w)),
                    ));
                }
                let body = node.children[0];
                for j in body..tree.nodes[body].end {
                    if tree.nodes[j].binder == Some(i) {
                        let w = tree.word(body, j);
                        if !well_bracketed(&w) {
                            out.push(fail(
                                Condition::Bracketing,
                                "ii.b",
                                tree.pos(j),
                                format!("path from binder of {} reads {}", x.name(), show_word(&w)),
                            ));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    out
}

pub fn check_bracketing(t: &PseudoTerm) -> Vec<Failure> {
    bracketing_on(&Tree::new(t))
}

fn bang_on(tree: &Tree, typing: &Typing) -> Vec<Failure> {
    let mut out = Vec::new();
    for node in &tree.nodes {
        let PseudoNode::App(..) = &node.term.node else { continue };
        let (f, u) = (node.children[0], node.children[1]);
        let Some(StarType::Arrow { bang: true, .. }) = &typing.outer[f] else { continue };
        let free = tree.free_occurrences(u);
        let x = match free.as_slice() {
            [] => None,
            [x] => {
                let PseudoNode::Var(name, d) = &tree.nodes[*x].term.node else { unreachable!("occurrence") };
                if !d.bang {
                    out.push(fail(
                        Condition::Bang,
                        "i",
                        tree.pos(u),
                        format!("free variable {} has linear type {d}", name.name()),
                    ));
                    continue;
                }
                Some(*x)
            }
            many => {
                out.push(fail(
                    Condition::Bang,
                    "i",
                    tree.pos(u),
                    format!("{} free variable occurrences in a bang subterm", many.len()),
                ));
                continue;
            }
        };
        // Door-extreme subterms: above and below the doors of each node.
        // When a node has no doors both positions are the same subterm.
        let end = tree.nodes[u].end;
        let mut sum_at: HashMap<usize, i64> = HashMap::new();
        for w in u..end {
            let above = if w == u { 0 } else { sum_at[&tree.nodes[w].parent.expect("inside u")] };
            let below = above + tree.doors(w);
            sum_at.insert(w, below);
            let no_doors = tree.doors(w) == 0;
            let outer_is_u = w == u;
            let outer_is_x = Some(w) == x && no_doors;
            let head_is_u = w == u && no_doors;
            let head_is_x = Some(w) == x;
            if !outer_is_u && !outer_is_x && above < 1 {
                out.push(fail(
                    Condition::Bang,
                    "ii",
                    tree.pos(w),
                    format!("depth {above} inside the bang subterm at {}", tree.pos(u)),
                ));
            } else if !head_is_u && !head_is_x && below < 1 {
                out.push(fail(
                    Condition::Bang,
                    "ii",
                    tree.pos(w),
                    format!("depth {below} inside the bang subterm at {}", tree.pos(u)),
                ));
            }
            if head_is_x && below != 0 {
                out.push(fail(
                    Condition::Bang,
                    "ii",
                    tree.pos(w),
                    format!("free variable at depth {below} instead of 0 in the bang subterm at {}", tree.pos(u)),
                ));
            }
        }
    }
    out
}

/// Requires a locally typed term; reports a local-typing failure otherwise.
pub fn check_bang(t: &PseudoTerm) -> Vec<Failure> {
    let tree = Tree::new(t);
    let (typing, _) = type_tree(&tree);
    bang_on(&tree, &typing)
}

fn scope_on(tree: &Tree, typing: &Typing) -> Vec<Failure> {
    let mut out = Vec::new();
    for (i, node) in tree.nodes.iter().enumerate() {
        let PseudoNode::TyLam(alpha, _) = &node.term.node else { continue };
        let c = node.children[0];
        for w in c..tree.nodes[c].end {
            let depends = typing.head[w].as_ref().is_some_and(|t| t.occurs_free(alpha));
            if !depends {
                continue;
            }
            let word = tree.word(c, w);
            if !weakly_well_bracketed(&word) {
                out.push(fail(
                    Condition::Scope,
                    "",
                    tree.pos(w),
                    format!(
                        "depends on {} but the path from the binder at {} reads {}",
                        alpha.name(),
                        tree.pos(i),
                        show_word(&word)
                    ),
                ));
            }
        }
    }
    out
}

pub fn check_scope(t: &PseudoTerm) -> Vec<Failure> {
    let tree = Tree::new(t);
    let (typing, _) = type_tree(&tree);
    scope_on(&tree, &typing)
}

/// All four conditions.
pub fn check_well_structured(t: &PseudoTerm) -> CheckReport {
    check_well_structured_with(t, Strategy::Sequential)
}

pub fn check_well_structured_with(t: &PseudoTerm, strategy: Strategy) -> CheckReport {
    let tree = Tree::new(t);
    let (typing, local) = local_typing_on(&tree);
    let mut failures = Vec::new();
    let output_type = match local {
        Ok(t) => Some(t),
        Err(f) => {
            failures.extend(f);
            None
        }
    };
    let typed = output_type.is_some();
    let parts = map_items(&[0u8, 1, 2], strategy, |k| match k {
        0 => bracketing_on(&tree),
        1 if typed => bang_on(&tree, &typing),
        2 if typed => scope_on(&tree, &typing),
        _ => Vec::new(),
    });
    failures.extend(parts.into_iter().flatten());
    let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
    CheckReport { verdict, failures, output_type: if verdict == Verdict::Pass { output_type } else { None } }
}
