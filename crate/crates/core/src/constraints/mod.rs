//! Constraint generation from a free decoration: local typing, bracketing,
//! bang and Λ-scope families.

mod set;

use std::collections::HashMap;

use thiserror::Error;

use crate::par::{flat_map_sites, Strategy};
use crate::param::{
    path_string, BangPType, Decorated, FlatTerm, IntParam, LinComb, LinPType, NodeKind, PType, Part, PF,
};

pub use set::{Constraint, ConstraintSet, Family, Origin, Sort};

/// A word of door parameters read along a path.
pub type DoorsWord = Vec<IntParam>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("p-types of different shapes cannot be unified: `{left}` and `{right}`")]
pub struct ShapeMismatch {
    pub left: String,
    pub right: String,
}

/// Constraints under which two p-types instantiate to the same type.
pub fn unif(e1: &PType, e2: &PType) -> Result<Vec<Constraint>, ShapeMismatch> {
    let mut out = Vec::new();
    match (e1, e2) {
        (PType::Linear(a), PType::Linear(b)) => unif_lin(a, b, &mut out)?,
        (PType::Bang(a), PType::Bang(b)) => unif_bang(a, b, &mut out)?,
        _ => return Err(ShapeMismatch { left: e1.to_string(), right: e2.to_string() }),
    }
    Ok(out)
}

fn unif_lin(a: &LinPType, b: &LinPType, out: &mut Vec<Constraint>) -> Result<(), ShapeMismatch> {
    out.push(Constraint::lin_eq(a.exps.clone(), b.exps.clone()));
    unif_pf(&a.body, &b.body, out)
}

fn unif_bang(a: &BangPType, b: &BangPType, out: &mut Vec<Constraint>) -> Result<(), ShapeMismatch> {
    out.push(Constraint::BoolEq(a.bang, b.bang));
    out.push(Constraint::lin_eq(a.exps.clone(), b.exps.clone()));
    unif_pf(&a.body, &b.body, out)
}

fn unif_pf(a: &PF, b: &PF, out: &mut Vec<Constraint>) -> Result<(), ShapeMismatch> {
    match (a, b) {
        (PF::Var(_), PF::Var(_)) => Ok(()),
        (PF::Arrow(d1, a1), PF::Arrow(d2, a2)) => {
            unif_bang(d1, d2, out)?;
            unif_lin(a1, a2, out)
        }
        (PF::Forall(_, a1), PF::Forall(_, a2)) => unif_lin(a1, a2, out),
        _ => Err(ShapeMismatch { left: a.to_string(), right: b.to_string() }),
    }
}

/// Types assigned by the local typing rules, per preorder node.
#[derive(Clone, Debug)]
pub struct LocalTyping {
    /// Type of the node under its door.
    pub head: Vec<LinPType>,
    /// Type of the node including its door: `$^{m+c} F` when the head is `$^c F`.
    pub outer: Vec<LinPType>,
    pub constraints: ConstraintSet,
}

impl LocalTyping {
    pub fn root_type(&self) -> &LinPType {
        &self.outer[0]
    }
}

/// Local typing of the free decoration, with the constraints it needs.
pub fn local_typing(flat: &FlatTerm, next_id: u32) -> Result<LocalTyping, ShapeMismatch> {
    let n = flat.len();
    let mut head: Vec<Option<LinPType>> = vec![None; n];
    let mut outer: Vec<Option<LinPType>> = vec![None; n];
    let mut set = ConstraintSet::new();
    let mut next_id = next_id;
    let shape = |what: &str, t: &LinPType| ShapeMismatch { left: what.to_string(), right: t.to_string() };
    for i in (0..n).rev() {
        let node = flat.node(i);
        let site = path_string(&node.path);
        let org = |rule: &'static str| Origin::new(Family::Ltype, rule, site.clone());
        let h = match &node.kind {
            NodeKind::Var { var, .. } => {
                set.extend(var.decl.adm().into_iter().map(|c| (c, org("var"))));
                var.decl.linear()
            }
            NodeKind::Lam(v) => {
                set.extend(v.decl.adm().into_iter().map(|c| (c, org("lam"))));
                let body = outer[node.children[0]].clone().expect("children are typed first");
                LinPType::new(LinComb::zero(), PF::Arrow(Box::new((*v.decl).clone()), Box::new(body)))
            }
            NodeKind::App => {
                let f = outer[node.children[0]].as_ref().expect("children are typed first");
                let a = outer[node.children[1]].as_ref().expect("children are typed first");
                let PF::Arrow(d, b) = &f.body else { return Err(shape("an arrow", f)) };
                set.insert(Constraint::LinEq0(f.exps.clone()), org("app"));
                let mut u = Vec::new();
                unif_lin(&d.linear(), a, &mut u)?;
                set.extend(u.into_iter().map(|c| (c, org("app"))));
                (**b).clone()
            }
            NodeKind::TyLam(alpha) => {
                let body = outer[node.children[0]].clone().expect("children are typed first");
                LinPType::new(LinComb::zero(), PF::Forall(alpha.clone(), Box::new(body)))
            }
            NodeKind::TyApp(arg) => {
                let f = outer[node.children[0]].as_ref().expect("children are typed first");
                let PF::Forall(alpha, b) = &f.body else { return Err(shape("a universal type", f)) };
                set.insert(Constraint::LinEq0(f.exps.clone()), org("tyapp"));
                set.extend(arg.adm().into_iter().map(|c| (c, org("tyapp"))));
                b.subst(alpha, arg, &mut next_id)
            }
        };
        let o = LinPType::new(&LinComb::param(node.door) + &h.exps, h.body.clone());
        set.insert(Constraint::LinGeq0(o.exps.clone()), org("door"));
        head[i] = Some(h);
        outer[i] = Some(o);
    }
    Ok(LocalTyping {
        head: head.into_iter().map(|t| t.expect("every node typed")).collect(),
        outer: outer.into_iter().map(|t| t.expect("every node typed")).collect(),
        constraints: set,
    })
}

/// Local typing constraints plus `b = 1` for every variable occurring more than once.
pub fn ltype(flat: &FlatTerm, typing: &LocalTyping) -> ConstraintSet {
    let mut set = typing.constraints.clone();
    let mut occurrences: HashMap<u32, (usize, &BangPType, String)> = HashMap::new();
    for node in &flat.nodes {
        if let NodeKind::Var { var, .. } = &node.kind {
            let e = occurrences.entry(var.var.id()).or_insert((0, &var.decl, var.var.name().to_string()));
            e.0 += 1;
        }
    }
    let mut multi: Vec<_> = occurrences.into_iter().filter(|(_, (k, _, _))| *k >= 2).collect();
    multi.sort_by_key(|(_, (_, d, _))| d.bang);
    for (_, (_, decl, name)) in multi {
        set.insert(Constraint::BoolConst(decl.bang, true), Origin::new(Family::Ltype, "multiplicity", name));
    }
    set
}

/// The word of door parameters from the outer position of `from` to position `part` of `to`.
pub fn doors(flat: &FlatTerm, from: usize, to: usize, part: Part) -> DoorsWord {
    flat.doors(from, to, part)
}

/// `s(l)`.
pub fn word_sum(l: &[IntParam]) -> LinComb {
    LinComb::sum(l.iter().copied())
}

/// `s(l') >= 0` for every prefix `l'` of `l`. The empty prefix is trivial and omitted.
pub fn wbracket(l: &[IntParam]) -> Vec<Constraint> {
    let mut out = Vec::with_capacity(l.len());
    let mut acc = LinComb::zero();
    for p in l {
        acc.add_term(*p, 1);
        out.push(Constraint::LinGeq0(acc.clone()));
    }
    out
}

/// `wbracket(l)` together with `s(l) = 0`.
pub fn bracket(l: &[IntParam]) -> Vec<Constraint> {
    let mut out = wbracket(l);
    out.push(Constraint::LinEq0(word_sum(l)));
    out
}

fn tag(cs: Vec<Constraint>, origin: &Origin) -> Vec<(Constraint, Origin)> {
    cs.into_iter().map(|c| (c, origin.clone())).collect()
}

fn site(flat: &FlatTerm, i: usize) -> String {
    path_string(&flat.node(i).path)
}

/// Bracketing family.
pub fn bracket_constraints(flat: &FlatTerm, strategy: Strategy) -> ConstraintSet {
    let sites: Vec<usize> = (0..flat.len())
        .filter(|&i| matches!(flat.node(i).kind, NodeKind::Lam(_) | NodeKind::Var { binder: None, .. }))
        .collect();
    let items = flat_map_sites(&sites, strategy, |i| {
        let node = flat.node(i);
        match &node.kind {
            NodeKind::Var { binder: None, .. } => {
                let o = Origin::new(Family::Bracket, "free", site(flat, i));
                tag(bracket(&flat.doors(0, i, Part::Head)), &o)
            }
            NodeKind::Lam(v) => {
                let o = Origin::new(Family::Bracket, "abstraction", site(flat, i));
                let mut out = tag(wbracket(&flat.doors(0, i, Part::Head)), &o);
                let body = node.children[0];
                for j in body..flat.node(body).end {
                    if let NodeKind::Var { binder: Some(b), .. } = &flat.node(j).kind {
                        if *b == i {
                            let o = Origin::new(
                                Family::Bracket,
                                "binder",
                                format!("{} to {} ({})", site(flat, i), site(flat, j), v.var.name()),
                            );
                            out.extend(tag(bracket(&flat.doors(body, j, Part::Head)), &o));
                        }
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    });
    items.into_iter().collect()
}

/// Prefix sums from the outer position of `root` to the outer and head
/// positions of every node of its subtree, indexed by `node - root`.
fn subtree_sums(flat: &FlatTerm, root: usize) -> Vec<(LinComb, LinComb)> {
    let end = flat.node(root).end;
    let mut sums: Vec<(LinComb, LinComb)> = Vec::with_capacity(end - root);
    for w in root..end {
        let node = flat.node(w);
        let outer =
            if w == root { LinComb::zero() } else { sums[node.parent.expect("inside subtree") - root].1.clone() };
        let mut head = outer.clone();
        head.add_term(node.door, 1);
        sums.push((outer, head));
    }
    sums
}

/// Bang family: one group per application whose argument is a bang subterm.
pub fn bang_constraints(flat: &FlatTerm, typing: &LocalTyping, strategy: Strategy) -> ConstraintSet {
    let sites: Vec<usize> = (0..flat.len()).filter(|&i| matches!(flat.node(i).kind, NodeKind::App)).collect();
    let items = flat_map_sites(&sites, strategy, |i| {
        let node = flat.node(i);
        let (f, u) = (node.children[0], node.children[1]);
        let PF::Arrow(d, _) = &typing.outer[f].body else { return Vec::new() };
        let b = d.bang;
        let here = site(flat, u);
        let mut out = Vec::new();
        let free = flat.free_occurrences_in(u);
        let x = match free.as_slice() {
            [] => None,
            [x] => {
                let NodeKind::Var { var, .. } = &flat.node(*x).kind else { unreachable!("occurrences are variables") };
                out.push((Constraint::BoolImp(b, var.decl.bang), Origin::new(Family::Bang, "one-free", here.clone())));
                Some(*x)
            }
            _ => {
                out.push((Constraint::BoolConst(b, false), Origin::new(Family::Bang, "many-free", here.clone())));
                None
            }
        };
        let o = Origin::new(Family::Bang, "box", here.clone());
        let sums = subtree_sums(flat, u);
        for (k, (outer, head)) in sums.iter().enumerate() {
            let w = u + k;
            if w != u {
                out.push((Constraint::MixedGeq1(b, outer.clone()), o.clone()));
            }
            if Some(w) != x {
                out.push((Constraint::MixedGeq1(b, head.clone()), o.clone()));
            }
        }
        if let Some(x) = x {
            let o = Origin::new(Family::Bang, "free-occurrence", format!("{here} to {}", site(flat, x)));
            out.push((Constraint::MixedEq0(b, sums[x - u].1.clone()), o));
        }
        out
    });
    items.into_iter().collect()
}

/// Λ-scope family.
pub fn scope_constraints(flat: &FlatTerm, typing: &LocalTyping, strategy: Strategy) -> ConstraintSet {
    let sites: Vec<usize> = (0..flat.len()).filter(|&i| matches!(flat.node(i).kind, NodeKind::TyLam(_))).collect();
    let items = flat_map_sites(&sites, strategy, |i| {
        let NodeKind::TyLam(alpha) = &flat.node(i).kind else { unreachable!("filtered above") };
        let c = flat.node(i).children[0];
        let sums = subtree_sums(flat, c);
        let mut out = Vec::new();
        for (k, (_, head)) in sums.iter().enumerate() {
            let w = c + k;
            if typing.head[w].body.occurs_free(alpha) {
                let o = Origin::new(Family::Scope, "depends", format!("{} to {}", site(flat, i), site(flat, w)));
                out.extend(tag(wbracket(&flat.doors(c, w, Part::Head)), &o));
                debug_assert_eq!(word_sum(&flat.doors(c, w, Part::Head)), *head);
            }
        }
        out
    });
    items.into_iter().collect()
}

/// All four families of a decorated term, with the local typing.
#[derive(Clone, Debug)]
pub struct Generated {
    pub flat: FlatTerm,
    pub typing: LocalTyping,
    pub constraints: ConstraintSet,
}

pub fn generate(d: &Decorated, strategy: Strategy) -> Result<Generated, ShapeMismatch> {
    let flat = FlatTerm::new(&d.term);
    let typing = local_typing(&flat, d.next_id)?;
    let mut set = ltype(&flat, &typing);
    set.union(bracket_constraints(&flat, strategy));
    set.union(bang_constraints(&flat, &typing, strategy));
    set.union(scope_constraints(&flat, &typing, strategy));
    Ok(Generated { flat, typing, constraints: set })
}

/// Union of the local typing, bracketing, bang and scope constraints.
pub fn const_all(d: &Decorated) -> Result<ConstraintSet, ShapeMismatch> {
    generate(d, Strategy::default()).map(|g| g.constraints)
}

/// Partition into boolean, linear and mixed constraints.
pub fn split(s: &ConstraintSet) -> (ConstraintSet, ConstraintSet, ConstraintSet) {
    let (mut b, mut l, mut m) = (ConstraintSet::new(), ConstraintSet::new(), ConstraintSet::new());
    for (c, o) in s.iter() {
        let target = match c.sort() {
            Sort::Boolean => &mut b,
            Sort::Linear => &mut l,
            Sort::Mixed => &mut m,
        };
        target.insert(c.clone(), o.clone());
    }
    (b, l, m)
}
