use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::fsyntax::{FTerm, TermVar, TyVar};
use crate::pseudo::{PseudoNode, PseudoTerm};

use super::ptype::BangPType;
use super::{Instantiation, InstantiationError, IntParam, LinPType, ParamSource};

/// A variable with its (shared) bang decoration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PVar {
    pub var: TermVar,
    pub decl: Arc<BangPType>,
}

/// `t ::= $^m u`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PTerm {
    pub door: IntParam,
    pub node: PNode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PNode {
    Var(PVar),
    Lam(PVar, Box<PTerm>),
    App(Box<PTerm>, Box<PTerm>),
    TyLam(TyVar, Box<PTerm>),
    TyApp(Box<PTerm>, LinPType),
}

/// The free decoration of a term together with the parameters it introduced.
#[derive(Clone, Debug)]
pub struct Decorated {
    pub term: PTerm,
    /// Decorations of the free variables, in context order.
    pub free: Vec<PVar>,
    pub params: ParamSource,
    /// First identifier not used by the source term; fresh type variables
    /// created by substitution start here.
    pub next_id: u32,
}

/// Position inside a p-term: a path of child indices from the root, and
/// whether the position is the whole `$^m u` or the head `u` under the door.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubtermPos {
    pub path: Vec<u8>,
    pub part: Part,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Outer,
    Head,
}

impl fmt::Display for SubtermPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_path(f, &self.path)?;
        if self.part == Part::Head {
            f.write_str("/head")?;
        }
        Ok(())
    }
}

pub(crate) fn write_path(f: &mut impl fmt::Write, path: &[u8]) -> fmt::Result {
    if path.is_empty() {
        return f.write_str("root");
    }
    for (i, step) in path.iter().enumerate() {
        if i > 0 {
            f.write_char('.')?;
        }
        write!(f, "{step}")?;
    }
    Ok(())
}

pub(crate) fn path_string(path: &[u8]) -> String {
    let mut s = String::new();
    write_path(&mut s, path).expect("writing to a String");
    s
}

/// Free decoration of a well-typed term. Parameters are allocated in
/// preorder: the door of a node, then its binder or type argument, then
/// its children. Free variables are decorated first.
pub fn free_decorate_term(m: &FTerm) -> Decorated {
    let mut src = ParamSource::new();
    let mut env: HashMap<u32, Arc<BangPType>> = HashMap::new();
    let mut free = Vec::new();
    for (x, ty) in m.free_vars() {
        let decl = Arc::new(BangPType::free(&ty, &mut src, &format!("free variable {}", x.name())));
        env.insert(x.id(), decl.clone());
        free.push(PVar { var: x, decl });
    }
    let term = decorate(m, &mut Vec::new(), &mut env, &mut src);
    Decorated { term, free, params: src, next_id: m.max_id() + 1 }
}

fn decorate(t: &FTerm, path: &mut Vec<u8>, env: &mut HashMap<u32, Arc<BangPType>>, src: &mut ParamSource) -> PTerm {
    let here = path_string(path);
    let door = src.door(format!("door at {here}"));
    let mut child = |i: u8, sub: &FTerm, env: &mut HashMap<u32, Arc<BangPType>>, src: &mut ParamSource| {
        path.push(i);
        let r = decorate(sub, path, env, src);
        path.pop();
        r
    };
    let node = match t {
        FTerm::Var(x, _) => {
            let decl = env.get(&x.id()).cloned().expect("variables are bound or pre-declared");
            PNode::Var(PVar { var: x.clone(), decl })
        }
        FTerm::Lam(x, ty, body) => {
            let decl = Arc::new(BangPType::free(ty, src, &format!("binder {} at {here}", x.name())));
            let saved = env.insert(x.id(), decl.clone());
            let b = child(0, body, env, src);
            match saved {
                Some(d) => env.insert(x.id(), d),
                None => env.remove(&x.id()),
            };
            PNode::Lam(PVar { var: x.clone(), decl }, Box::new(b))
        }
        FTerm::App(f, a) => {
            let f = child(0, f, env, src);
            let a = child(1, a, env, src);
            PNode::App(Box::new(f), Box::new(a))
        }
        FTerm::TyLam(a, body) => PNode::TyLam(a.clone(), Box::new(child(0, body, env, src))),
        FTerm::TyApp(f, ty) => {
            let arg = LinPType::free(ty, src, &format!("type argument at {here}"));
            PNode::TyApp(Box::new(child(0, f, env, src)), arg)
        }
    };
    PTerm { door, node }
}

impl PTerm {
    /// Forget doors and exponents.
    pub fn erase(&self) -> FTerm {
        match &self.node {
            PNode::Var(v) => FTerm::Var(v.var.clone(), v.decl.erase()),
            PNode::Lam(v, b) => FTerm::lam(v.var.clone(), v.decl.erase(), b.erase()),
            PNode::App(f, a) => FTerm::app(f.erase(), a.erase()),
            PNode::TyLam(a, b) => FTerm::tylam(a.clone(), b.erase()),
            PNode::TyApp(f, ty) => FTerm::tyapp(f.erase(), ty.erase()),
        }
    }

    pub fn size(&self) -> usize {
        match &self.node {
            PNode::Var(_) => 1,
            PNode::Lam(_, b) | PNode::TyLam(_, b) | PNode::TyApp(b, _) => 1 + b.size(),
            PNode::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn children(&self) -> Vec<&PTerm> {
        match &self.node {
            PNode::Var(_) => vec![],
            PNode::Lam(_, b) | PNode::TyLam(_, b) | PNode::TyApp(b, _) => vec![b],
            PNode::App(f, a) => vec![f, a],
        }
    }
}

/// `phi(t)`: replace door parameters by signed counts and instantiate every p-type.
pub fn instantiate_term(phi: &Instantiation, t: &PTerm) -> Result<PseudoTerm, InstantiationError> {
    let doors = phi.int(t.door)?;
    let node = match &t.node {
        PNode::Var(v) => PseudoNode::Var(v.var.clone(), v.decl.instantiate(phi)?),
        PNode::Lam(v, b) => {
            PseudoNode::Lam(v.var.clone(), v.decl.instantiate(phi)?, Box::new(instantiate_term(phi, b)?))
        }
        PNode::App(f, a) => PseudoNode::App(Box::new(instantiate_term(phi, f)?), Box::new(instantiate_term(phi, a)?)),
        PNode::TyLam(a, b) => PseudoNode::TyLam(a.clone(), Box::new(instantiate_term(phi, b)?)),
        PNode::TyApp(f, ty) => PseudoNode::TyApp(Box::new(instantiate_term(phi, f)?), ty.instantiate(phi)?),
    };
    Ok(PseudoTerm { doors, node })
}

// ---------------------------------------------------------------- flat view

#[derive(Clone, Debug)]
pub enum NodeKind {
    /// `binder` is the preorder index of the binding lambda, `None` when free.
    Var {
        var: PVar,
        binder: Option<usize>,
    },
    Lam(PVar),
    App,
    TyLam(TyVar),
    TyApp(LinPType),
}

#[derive(Clone, Debug)]
pub struct FlatNode {
    pub door: IntParam,
    pub kind: NodeKind,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// The subtree of this node is `index..end` in preorder.
    pub end: usize,
    pub path: Vec<u8>,
}

/// Preorder array view of a p-term, used by the constraint generators.
#[derive(Clone, Debug)]
pub struct FlatTerm {
    pub nodes: Vec<FlatNode>,
}

impl FlatTerm {
    pub fn new(t: &PTerm) -> Self {
        let mut nodes = Vec::with_capacity(t.size());
        let mut binders: Vec<(u32, usize)> = Vec::new();
        flatten(t, None, &mut Vec::new(), &mut binders, &mut nodes);
        Self { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &FlatNode {
        &self.nodes[i]
    }

    pub fn contains(&self, ancestor: usize, i: usize) -> bool {
        ancestor <= i && i < self.nodes[ancestor].end
    }

    /// Door parameters on the way from the outer position of `from` down to
    /// position `part` of `to`. `from` must be an ancestor of `to` or `to` itself.
    pub fn doors(&self, from: usize, to: usize, part: Part) -> Vec<IntParam> {
        debug_assert!(self.contains(from, to));
        let mut word = Vec::new();
        if part == Part::Head {
            word.push(self.nodes[to].door);
        }
        let mut cur = to;
        while cur != from {
            cur = self.nodes[cur].parent.expect("`from` is an ancestor");
            word.push(self.nodes[cur].door);
        }
        word.reverse();
        word
    }

    /// Occurrences of variables bound outside the subtree of `i`, in preorder.
    pub fn free_occurrences_in(&self, i: usize) -> Vec<usize> {
        (i..self.nodes[i].end)
            .filter(|&j| match &self.nodes[j].kind {
                NodeKind::Var { binder, .. } => binder.is_none_or(|b| !self.contains(i, b)),
                _ => false,
            })
            .collect()
    }

    pub fn pos(&self, i: usize, part: Part) -> SubtermPos {
        SubtermPos { path: self.nodes[i].path.clone(), part }
    }
}

fn flatten(
    t: &PTerm,
    parent: Option<usize>,
    path: &mut Vec<u8>,
    binders: &mut Vec<(u32, usize)>,
    out: &mut Vec<FlatNode>,
) -> usize {
    let me = out.len();
    let kind = match &t.node {
        PNode::Var(v) => {
            let binder = binders.iter().rev().find(|(id, _)| *id == v.var.id()).map(|(_, i)| *i);
            NodeKind::Var { var: v.clone(), binder }
        }
        PNode::Lam(v, _) => NodeKind::Lam(v.clone()),
        PNode::App(..) => NodeKind::App,
        PNode::TyLam(a, _) => NodeKind::TyLam(a.clone()),
        PNode::TyApp(_, ty) => NodeKind::TyApp(ty.clone()),
    };
    out.push(FlatNode { door: t.door, kind, parent, children: Vec::new(), end: me + 1, path: path.clone() });
    if let PNode::Lam(v, _) = &t.node {
        binders.push((v.var.id(), me));
    }
    let mut children = Vec::new();
    for (k, c) in t.children().into_iter().enumerate() {
        path.push(k as u8);
        children.push(flatten(c, Some(me), path, binders, out));
        path.pop();
    }
    if let PNode::Lam(..) = &t.node {
        binders.pop();
    }
    let end = out.len();
    out[me].children = children;
    out[me].end = end;
    me
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsyntax::parse_term;

    #[test]
    fn identity_decoration() {
        let m = parse_term("/\\a. \\x:a. x").unwrap();
        let d = free_decorate_term(&m);
        assert_eq!(d.params.door_count(), 3);
        assert_eq!(d.params.exponent_count(), 1);
        assert_eq!(d.params.bool_count(), 1);
        assert_eq!(d.term.door, IntParam::door(1));
        match &d.term.node {
            PNode::TyLam(_, body) => {
                assert_eq!(body.door, IntParam::door(2));
                match &body.node {
                    PNode::Lam(v, inner) => {
                        assert_eq!(v.decl.to_string(), "$^{b1,n1} a");
                        assert_eq!(inner.door, IntParam::door(3));
                    }
                    other => panic!("{other:?}"),
                }
            }
            other => panic!("{other:?}"),
        }
        assert!(d.term.erase().alpha_eq(&m));
    }

    #[test]
    fn shared_decoration_for_occurrences() {
        let m = parse_term("\\f:a -> a. \\x:a. f (f x)").unwrap();
        let d = free_decorate_term(&m);
        let flat = FlatTerm::new(&d.term);
        let decls: Vec<_> = flat
            .nodes
            .iter()
            .filter_map(|n| match &n.kind {
                NodeKind::Var { var, .. } if var.var.name() == "f" => Some(var.decl.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(decls.len(), 2);
        assert!(Arc::ptr_eq(&decls[0], &decls[1]));
        assert_eq!(d.params.door_count(), m.size().0);
    }

    #[test]
    fn doors_words() {
        let m = parse_term("\\x:a. \\y:a. x y").unwrap();
        let d = free_decorate_term(&m);
        let flat = FlatTerm::new(&d.term);
        // preorder: 0 lam x, 1 lam y, 2 app, 3 x, 4 y
        assert!(flat.doors(4, 4, Part::Outer).is_empty());
        assert_eq!(flat.doors(4, 4, Part::Head), vec![IntParam::door(5)]);
        let w = flat.doors(0, 4, Part::Head);
        assert_eq!(w, (1..=3).chain([5]).map(IntParam::door).collect::<Vec<_>>());
        assert_eq!(flat.free_occurrences_in(2), vec![3, 4]);
        assert_eq!(flat.free_occurrences_in(0), Vec::<usize>::new());
    }

    #[test]
    fn type_argument_decoration() {
        let m = parse_term("\\n:N. n [a]").unwrap();
        let d = free_decorate_term(&m);
        match &d.term.node {
            PNode::Lam(_, body) => match &body.node {
                PNode::TyApp(_, arg) => assert_eq!(arg.to_string(), "$^{n9} a"),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }
}
