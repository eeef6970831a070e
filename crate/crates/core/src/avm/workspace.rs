use std::collections::HashMap;

use super::{AvmError, FeatureStructure, Node, NodeId, Symbol};

/// Mutable graph arena with union-find forwarding.
///
/// Structures are imported, edited and unified in place, then a rooted
/// result is extracted back into an immutable [`FeatureStructure`].
/// Schemata in the grammar work directly on this level because they need
/// to address list elements and rewrite SUBCAT.
#[derive(Debug, Default, Clone)]
pub struct Workspace {
    nodes: Vec<Node>,
    forward: Vec<u32>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alloc(&mut self, node: Node) -> NodeId {
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.forward.push(id);
        NodeId(id)
    }

    /// Copies `fs` into the arena and returns the id of its root.
    pub fn import(&mut self, fs: &FeatureStructure) -> NodeId {
        let offset = self.nodes.len() as u32;
        let shift = |id: &NodeId| NodeId(id.0 + offset);
        for node in fs.nodes() {
            let node = match node {
                Node::Empty => Node::Empty,
                Node::Atom(a) => Node::Atom(*a),
                Node::Avm(feats) => Node::Avm(feats.iter().map(|(f, c)| (*f, shift(c))).collect()),
                Node::List(items) => Node::List(items.iter().map(shift).collect()),
            };
            self.alloc(node);
        }
        NodeId(offset)
    }

    pub fn find(&self, id: NodeId) -> NodeId {
        let mut cur = id.0;
        while self.forward[cur as usize] != cur {
            cur = self.forward[cur as usize];
        }
        NodeId(cur)
    }

    /// Content of the representative of `id`.
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[self.find(id).0 as usize]
    }

    /// Overwrites the content of the representative of `id`.
    pub fn set(&mut self, id: NodeId, node: Node) {
        let rep = self.find(id);
        self.nodes[rep.0 as usize] = node;
    }

    pub fn feature(&self, id: NodeId, feature: Symbol) -> Option<NodeId> {
        match self.node(id) {
            Node::Avm(feats) => lookup(feats, feature),
            _ => None,
        }
    }

    pub fn follow(&self, id: NodeId, path: &[Symbol]) -> Option<NodeId> {
        path.iter().try_fold(id, |cur, f| self.feature(cur, *f))
    }

    pub fn list_items(&self, id: NodeId) -> Option<Vec<NodeId>> {
        match self.node(id) {
            Node::List(items) => Some(items.clone()),
            _ => None,
        }
    }

    /// Replaces (or adds) the value of `feature` on the AVM at `id`.
    pub fn set_feature(&mut self, id: NodeId, feature: Symbol, value: NodeId) -> Result<(), AvmError> {
        let mut feats = match self.node(id) {
            Node::Avm(feats) => feats.clone(),
            Node::Empty => Vec::new(),
            Node::Atom(a) => return Err(AvmError::AtomInPath { feature, atom: *a }),
            Node::List(_) => return Err(AvmError::ListInPath { feature }),
        };
        insert(&mut feats, feature, value);
        self.set(id, Node::Avm(feats));
        Ok(())
    }

    /// Walks `path` from `id`, creating AVM nodes where the path is
    /// undefined.
    pub fn ensure_path(&mut self, id: NodeId, path: &[Symbol]) -> Result<NodeId, AvmError> {
        let mut cur = id;
        for &feature in path {
            cur = match self.feature(cur, feature) {
                Some(next) => next,
                None => {
                    let fresh = self.alloc(Node::Empty);
                    self.set_feature(cur, feature, fresh)?;
                    fresh
                }
            };
        }
        Ok(cur)
    }

    /// Destructive unification of two nodes. On failure the arena is left
    /// in an unspecified partially-merged state and should be discarded.
    pub fn unify(&mut self, a: NodeId, b: NodeId) -> bool {
        let mut pending = vec![(a, b)];
        while let Some((x, y)) = pending.pop() {
            let (x, y) = (self.find(x), self.find(y));
            if x == y {
                continue;
            }
            let (xi, yi) = (x.0 as usize, y.0 as usize);
            match (&self.nodes[xi], &self.nodes[yi]) {
                (Node::Empty, _) => self.forward[xi] = y.0,
                (_, Node::Empty) => self.forward[yi] = x.0,
                (Node::Atom(p), Node::Atom(q)) => {
                    if p != q {
                        return false;
                    }
                    self.forward[yi] = x.0;
                }
                (Node::Avm(fx), Node::Avm(fy)) => {
                    let mut merged = fx.clone();
                    for &(f, child) in fy {
                        match lookup(&merged, f) {
                            Some(existing) => pending.push((existing, child)),
                            None => insert(&mut merged, f, child),
                        }
                    }
                    self.forward[yi] = x.0;
                    self.nodes[xi] = Node::Avm(merged);
                }
                (Node::List(lx), Node::List(ly)) => {
                    if lx.len() != ly.len() {
                        return false;
                    }
                    pending.extend(lx.iter().copied().zip(ly.iter().copied()));
                    self.forward[yi] = x.0;
                }
                _ => return false,
            }
        }
        true
    }

    /// Extracts the graph reachable from `root` as a compact, canonically
    /// numbered structure. Fails if the reachable graph has a cycle.
    pub fn extract(&self, root: NodeId) -> Result<FeatureStructure, AvmError> {
        let mut ex = Extractor { ws: self, out: Vec::new(), ids: HashMap::new() };
        ex.visit(root)?;
        Ok(FeatureStructure::from_canonical(ex.out))
    }
}

enum Mark {
    Open,
    Done(NodeId),
}

struct Extractor<'a> {
    ws: &'a Workspace,
    out: Vec<Node>,
    ids: HashMap<NodeId, Mark>,
}

impl Extractor<'_> {
    fn visit(&mut self, id: NodeId) -> Result<NodeId, AvmError> {
        let rep = self.ws.find(id);
        match self.ids.get(&rep) {
            Some(Mark::Done(out)) => return Ok(*out),
            Some(Mark::Open) => return Err(AvmError::Cycle),
            None => {}
        }
        self.ids.insert(rep, Mark::Open);
        let slot = NodeId(self.out.len() as u32);
        self.out.push(Node::Empty);
        let node = match self.ws.node(rep) {
            Node::Empty => Node::Empty,
            Node::Atom(a) => Node::Atom(*a),
            Node::Avm(feats) => {
                let mut sorted = feats.clone();
                sorted.sort_by_key(|(f, _)| *f);
                let mut out = Vec::with_capacity(sorted.len());
                for (f, child) in sorted {
                    out.push((f, self.visit(child)?));
                }
                if out.is_empty() {
                    Node::Empty
                } else {
                    Node::Avm(out)
                }
            }
            Node::List(items) => {
                let items = items.clone();
                let mut out = Vec::with_capacity(items.len());
                for child in items {
                    out.push(self.visit(child)?);
                }
                Node::List(out)
            }
        };
        self.out[slot.0 as usize] = node;
        self.ids.insert(rep, Mark::Done(slot));
        Ok(slot)
    }
}

pub(crate) fn lookup(feats: &[(Symbol, NodeId)], feature: Symbol) -> Option<NodeId> {
    feats.iter().find(|(f, _)| *f == feature).map(|(_, c)| *c)
}

fn insert(feats: &mut Vec<(Symbol, NodeId)>, feature: Symbol, value: NodeId) {
    match feats.iter_mut().find(|(f, _)| *f == feature) {
        Some(slot) => slot.1 = value,
        None => feats.push((feature, value)),
    }
}
