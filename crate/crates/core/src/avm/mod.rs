//! Attribute-value matrices: rooted acyclic feature graphs with structure
//! sharing, and the operations the rest of the engine is built on.
//!
//! A [`FeatureStructure`] is immutable. Every constructor funnels through
//! [`Workspace::extract`], which numbers nodes in depth-first preorder with
//! features sorted, so two structures are alphabetic variants exactly when
//! their arenas are equal. `PartialEq`/`Hash` rely on that.

mod notation;
mod symbol;
mod workspace;

use std::collections::BTreeSet;
use std::fmt;

pub use symbol::Symbol;
pub use workspace::Workspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    /// Fully underspecified.
    Empty,
    Atom(Symbol),
    /// Feature/value pairs; feature names are unique.
    Avm(Vec<(Symbol, NodeId)>),
    List(Vec<NodeId>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AvmError {
    #[error("path runs through atom `{atom}` at feature {feature}")]
    AtomInPath { feature: Symbol, atom: Symbol },
    #[error("path runs through a list at feature {feature}")]
    ListInPath { feature: Symbol },
    #[error("values clash")]
    Clash,
    #[error("result would be cyclic")]
    Cycle,
    #[error("unknown feature {0}")]
    UnknownFeature(Symbol),
    #[error("AVM syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FeatureStructure {
    nodes: Vec<Node>,
}

/// A sequence of feature names, written `SYN|LOC|SUBCAT`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Path(pub Vec<Symbol>);

impl Path {
    pub fn parse(s: &str) -> Path {
        Path(s.split('|').filter(|p| !p.is_empty()).map(Symbol::intern).collect())
    }

    pub fn features(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|s| s.as_str()).collect();
        f.write_str(&parts.join("|"))
    }
}

/// Closed set of feature names admitted by a grammar.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureInventory(BTreeSet<Symbol>);

impl FeatureInventory {
    pub fn new<I: IntoIterator<Item = Symbol>>(features: I) -> Self {
        FeatureInventory(features.into_iter().collect())
    }

    pub fn insert(&mut self, feature: Symbol) {
        self.0.insert(feature);
    }

    pub fn contains(&self, feature: Symbol) -> bool {
        self.0.contains(&feature)
    }

    pub fn check_path(&self, path: &Path) -> Result<(), AvmError> {
        match path.0.iter().find(|f| !self.contains(**f)) {
            Some(f) => Err(AvmError::UnknownFeature(*f)),
            None => Ok(()),
        }
    }

    pub fn check(&self, fs: &FeatureStructure) -> Result<(), AvmError> {
        for node in fs.nodes() {
            if let Node::Avm(feats) = node {
                if let Some((f, _)) = feats.iter().find(|(f, _)| !self.contains(*f)) {
                    return Err(AvmError::UnknownFeature(*f));
                }
            }
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().copied()
    }
}

impl FeatureStructure {
    /// `nodes` must already be in canonical preorder with the root at 0.
    fn from_canonical(nodes: Vec<Node>) -> Self {
        debug_assert!(!nodes.is_empty());
        FeatureStructure { nodes }
    }

    pub fn empty() -> Self {
        FeatureStructure { nodes: vec![Node::Empty] }
    }

    pub fn atom(name: &str) -> Self {
        FeatureStructure { nodes: vec![Node::Atom(Symbol::intern(name))] }
    }

    /// Builds an AVM from sub-structures. No sharing is introduced between
    /// the parts.
    pub fn avm<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, FeatureStructure)>,
    {
        let mut ws = Workspace::new();
        let root = ws.alloc(Node::Empty);
        for (name, value) in pairs {
            let v = ws.import(&value);
            ws.set_feature(root, Symbol::intern(name), v).expect("fresh AVM node");
        }
        ws.extract(root).expect("tree input cannot be cyclic")
    }

    pub fn list<I: IntoIterator<Item = FeatureStructure>>(items: I) -> Self {
        let mut ws = Workspace::new();
        let ids: Vec<NodeId> = items.into_iter().map(|fs| ws.import(&fs)).collect();
        let root = ws.alloc(Node::List(ids));
        ws.extract(root).expect("tree input cannot be cyclic")
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.nodes[0], Node::Empty)
    }

    pub fn as_atom(&self) -> Option<Symbol> {
        match self.nodes[0] {
            Node::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn feature_at(&self, id: NodeId, feature: Symbol) -> Option<NodeId> {
        match self.node(id) {
            Node::Avm(feats) => workspace::lookup(feats, feature),
            _ => None,
        }
    }

    /// Node reached by `path` from the root, if defined.
    pub fn follow(&self, path: &[Symbol]) -> Option<NodeId> {
        path.iter().try_fold(self.root(), |cur, f| self.feature_at(cur, *f))
    }

    /// The sub-structure rooted at `id`, keeping its internal sharing.
    pub fn subgraph(&self, id: NodeId) -> FeatureStructure {
        if id == self.root() {
            return self.clone();
        }
        let mut ws = Workspace::new();
        let root = ws.import(self);
        ws.extract(NodeId(root.0 + id.0)).expect("subgraph of an acyclic graph")
    }

    pub fn get(&self, path: &Path) -> Option<FeatureStructure> {
        self.follow(&path.0).map(|id| self.subgraph(id))
    }

    /// Replaces the value at `path` with `value`. If the node at `path` is
    /// shared, every path to it sees the new value.
    pub fn put(&self, path: &Path, value: &FeatureStructure) -> Result<FeatureStructure, AvmError> {
        if path.0.is_empty() {
            return Ok(value.clone());
        }
        let mut ws = Workspace::new();
        let root = ws.import(self);
        let target = ws.ensure_path(root, &path.0)?;
        let v = ws.import(value);
        let content = ws.node(v).clone();
        ws.set(target, content);
        ws.extract(root)
    }

    /// Makes `p1` and `p2` reach one node, unifying any values already
    /// there.
    pub fn share(&self, p1: &Path, p2: &Path) -> Result<FeatureStructure, AvmError> {
        let mut ws = Workspace::new();
        let root = ws.import(self);
        let a = ws.ensure_path(root, &p1.0)?;
        let b = ws.ensure_path(root, &p2.0)?;
        if !ws.unify(a, b) {
            return Err(AvmError::Clash);
        }
        ws.extract(root)
    }

    /// True when `p1` and `p2` lead to the very same node.
    pub fn is_shared(&self, p1: &Path, p2: &Path) -> bool {
        match (self.follow(&p1.0), self.follow(&p2.0)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// Ids of nodes reachable along more than one path.
    pub fn reentrant_nodes(&self) -> Vec<NodeId> {
        let mut indegree = vec![0usize; self.nodes.len()];
        for node in &self.nodes {
            match node {
                Node::Avm(feats) => feats.iter().for_each(|(_, c)| indegree[c.index()] += 1),
                Node::List(items) => items.iter().for_each(|c| indegree[c.index()] += 1),
                _ => {}
            }
        }
        (0..self.nodes.len()).filter(|i| indegree[*i] > 1).map(|i| NodeId(i as u32)).collect()
    }
}

/// Most general structure subsumed by both inputs, or `None` on clash.
pub fn unify(a: &FeatureStructure, b: &FeatureStructure) -> Option<FeatureStructure> {
    let mut ws = Workspace::new();
    let ra = ws.import(a);
    let rb = ws.import(b);
    if !ws.unify(ra, rb) {
        return None;
    }
    ws.extract(ra).ok()
}

/// True iff `b` carries all information in `a`, including every
/// reentrancy of `a`.
pub fn subsumes(a: &FeatureStructure, b: &FeatureStructure) -> bool {
    let mut image: Vec<Option<NodeId>> = vec![None; a.len()];
    let mut pending = vec![(a.root(), b.root())];
    while let Some((x, y)) = pending.pop() {
        match image[x.index()] {
            Some(seen) if seen != y => return false,
            Some(_) => continue,
            None => image[x.index()] = Some(y),
        }
        match (a.node(x), b.node(y)) {
            (Node::Empty, _) => {}
            (Node::Atom(p), Node::Atom(q)) if p == q => {}
            (Node::Avm(fa), Node::Avm(fb)) => {
                for (f, child) in fa {
                    match workspace::lookup(fb, *f) {
                        Some(other) => pending.push((*child, other)),
                        None => return false,
                    }
                }
            }
            (Node::List(la), Node::List(lb)) if la.len() == lb.len() => {
                pending.extend(la.iter().copied().zip(lb.iter().copied()));
            }
            _ => return false,
        }
    }
    true
}

/// Equality up to alphabetic variance.
pub fn equivalent(a: &FeatureStructure, b: &FeatureStructure) -> bool {
    subsumes(a, b) && subsumes(b, a)
}

impl fmt::Debug for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FeatureStructure {
        s.parse().unwrap()
    }

    #[test]
    fn unify_identical_atoms() {
        let u = unify(&fs("[CAT: verb]"), &fs("[CAT: verb]")).unwrap();
        assert_eq!(u, fs("[CAT: verb]"));
    }

    #[test]
    fn unify_atom_clash_fails() {
        assert!(unify(&fs("[CAT: verb]"), &fs("[CAT: noun]")).is_none());
        assert!(unify(&fs("[CAT: verb]"), &fs("[CAT: [X: plus]]")).is_none());
        assert!(unify(&fs("< a, b >"), &fs("< a >")).is_none());
    }

    #[test]
    fn value_propagates_through_shared_node() {
        let a = fs("[A: #1 [], B: #1]");
        let b = fs("[A: [X: plus]]");
        let u = unify(&a, &b).unwrap();
        // Hand-run closure: A and B are one class; X: plus lands on it.
        assert_eq!(u.to_string(), "[A: #1 [X: plus], B: #1]");
        assert_eq!(u.get(&Path::parse("B|X")), Some(fs("plus")));
        assert!(u.is_shared(&Path::parse("A"), &Path::parse("B")));
        // Inputs untouched.
        assert_eq!(a.to_string(), "[A: #1 [], B: #1]");
        assert_eq!(b.to_string(), "[A: [X: plus]]");
    }

    #[test]
    fn unification_can_detect_cycles() {
        let a = fs("[F: #1 [], G: [H: #1]]");
        let b = fs("[F: #2 [], G: #2]");
        assert!(unify(&a, &b).is_none());
    }

    #[test]
    fn subsumption_examples() {
        assert!(subsumes(&FeatureStructure::empty(), &fs("[CAT: verb]")));
        assert!(subsumes(&FeatureStructure::empty(), &fs("< a, [B: c] >")));
        assert!(!subsumes(&fs("[CAT: verb]"), &fs("[CAT: noun]")));
        let unshared = fs("[A: [X: plus], B: [X: plus]]");
        let shared = fs("[A: #1 [X: plus], B: #1]");
        assert!(subsumes(&unshared, &shared));
        assert!(!subsumes(&shared, &unshared));
    }

    #[test]
    fn get_put_share() {
        let s = fs("[SYN: [LOC: [SUBCAT: < >]]]");
        assert_eq!(s.get(&Path::parse("SYN|LOC|SUBCAT")), Some(FeatureStructure::list([])));
        assert_eq!(s.get(&Path::parse("SYN|HEAD")), None);

        let base = fs("[SEM: [ARG1: []], SUBCAT: [SEM: []]]");
        let shared = base.share(&Path::parse("SEM|ARG1"), &Path::parse("SUBCAT|SEM")).unwrap();
        let filled = shared.put(&Path::parse("SEM|ARG1"), &fs("[RELN: per]")).unwrap();
        assert_eq!(filled.get(&Path::parse("SUBCAT|SEM|RELN")), Some(fs("per")));

        let err = fs("[CAT: verb]").put(&Path::parse("CAT|X"), &fs("plus")).unwrap_err();
        assert!(matches!(err, AvmError::AtomInPath { .. }));
        assert_eq!(fs("[A: x, B: y]").share(&Path::parse("A"), &Path::parse("B")), Err(AvmError::Clash));
        assert_eq!(fs("[A: [B: []]]").share(&Path::parse("A"), &Path::parse("A|B")), Err(AvmError::Cycle));
    }

    #[test]
    fn put_creates_missing_paths() {
        let out = FeatureStructure::empty().put(&Path::parse("A|B"), &fs("x")).unwrap();
        assert_eq!(out, fs("[A: [B: x]]"));
    }

    #[test]
    fn equivalence() {
        let x = fs("[A: #1 [X: plus], B: #1, C: < #1, d >]");
        assert!(equivalent(&x, &x));
        let y = fs("[C: < #7, d >, B: #7 [X: plus], A: #7]");
        assert!(equivalent(&x, &y));
        assert_eq!(x, y);
        assert!(!equivalent(&FeatureStructure::empty(), &fs("[CAT: verb]")));
    }

    #[test]
    fn inventory_rejects_unknown_features() {
        let inv = FeatureInventory::new(["SYN", "LOC"].map(Symbol::intern));
        assert!(inv.check_path(&Path::parse("SYN|LOC")).is_ok());
        assert_eq!(inv.check_path(&Path::parse("SYN|LOCX")), Err(AvmError::UnknownFeature(Symbol::intern("LOCX"))));
        assert!(inv.check(&fs("[SYN: [LOC: a]]")).is_ok());
        assert!(inv.check(&fs("[SYN: [HEAD: a]]")).is_err());
    }
}
