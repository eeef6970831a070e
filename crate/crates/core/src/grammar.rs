//! Binary phrase-structure schemata over compiled signs.
//!
//! Linear order is fixed: complements follow their head and are cancelled
//! most oblique first, subjects precede, adjuncts precede what they modify.

use std::sync::OnceLock;

use crate::avm::{FeatureStructure, Node, NodeId, Workspace};
use crate::signs::geometry::{feats, head_path, subcat_path};
use crate::signs::{Semantics, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

pub trait Schema: Send + Sync {
    fn id(&self) -> &'static str;
    /// Which daughter is the head.
    fn head_side(&self) -> Side;
    /// Whether a successful combination cancels one SUBCAT element.
    fn cancels(&self) -> bool;
    fn combine(&self, left: &FeatureStructure, right: &FeatureStructure) -> Option<FeatureStructure>;
}

fn subcat_items(ws: &Workspace, sign: NodeId) -> Option<Vec<NodeId>> {
    ws.list_items(ws.follow(sign, &subcat_path())?)
}

fn has_subject(ws: &Workspace, sign: NodeId) -> bool {
    let f = feats();
    match ws.follow(sign, &[f.syn, f.loc, f.subj]).map(|n| ws.node(n)) {
        Some(Node::Atom(a)) => *a == f.plus,
        _ => false,
    }
}

/// Builds `[PHON, SYN: [LOC: head LOC with SUBCAT replaced], SEM]`.
fn mother(ws: &mut Workspace, head: NodeId, subcat: Option<Vec<NodeId>>, sem: NodeId) -> Option<FeatureStructure> {
    let f = feats();
    let loc = ws.follow(head, &[f.syn, f.loc])?;
    let mut loc_feats = match ws.node(loc) {
        Node::Avm(fs) => fs.clone(),
        _ => return None,
    };
    if let Some(items) = subcat {
        let list = ws.alloc(Node::List(items));
        for (feat, value) in loc_feats.iter_mut() {
            if *feat == f.subcat {
                *value = list;
            }
        }
    }
    let loc = ws.alloc(Node::Avm(loc_feats));
    let syn = ws.alloc(Node::Avm(vec![(f.loc, loc)]));
    let mut root = vec![(f.syn, syn), (f.sem, sem)];
    if let Some(phon) = ws.feature(head, f.phon) {
        root.push((f.phon, phon));
    }
    let root = ws.alloc(Node::Avm(root));
    ws.extract(root).ok()
}

pub struct HeadComplement;

impl Schema for HeadComplement {
    fn id(&self) -> &'static str {
        "head-complement"
    }

    fn head_side(&self) -> Side {
        Side::Left
    }

    fn cancels(&self) -> bool {
        true
    }

    fn combine(&self, left: &FeatureStructure, right: &FeatureStructure) -> Option<FeatureStructure> {
        let mut ws = Workspace::new();
        let head = ws.import(left);
        let comp = ws.import(right);
        let items = subcat_items(&ws, head)?;
        let complements = items.len().saturating_sub(usize::from(has_subject(&ws, head)));
        if complements == 0 {
            return None;
        }
        if !ws.unify(items[0], comp) {
            return None;
        }
        let sem = ws.feature(head, feats().sem)?;
        mother(&mut ws, head, Some(items[1..].to_vec()), sem)
    }
}

pub struct HeadSubject;

impl Schema for HeadSubject {
    fn id(&self) -> &'static str {
        "head-subject"
    }

    fn head_side(&self) -> Side {
        Side::Right
    }

    fn cancels(&self) -> bool {
        true
    }

    fn combine(&self, left: &FeatureStructure, right: &FeatureStructure) -> Option<FeatureStructure> {
        let mut ws = Workspace::new();
        let subj = ws.import(left);
        let head = ws.import(right);
        let items = subcat_items(&ws, head)?;
        if items.len() != 1 || !has_subject(&ws, head) {
            return None;
        }
        if !ws.unify(items[0], subj) {
            return None;
        }
        let sem = ws.feature(head, feats().sem)?;
        mother(&mut ws, head, Some(vec![]), sem)
    }
}

pub struct HeadAdjunct;

impl Schema for HeadAdjunct {
    fn id(&self) -> &'static str {
        "head-adjunct"
    }

    fn head_side(&self) -> Side {
        Side::Right
    }

    fn cancels(&self) -> bool {
        false
    }

    fn combine(&self, left: &FeatureStructure, right: &FeatureStructure) -> Option<FeatureStructure> {
        let mut ws = Workspace::new();
        let adjunct = ws.import(left);
        let head = ws.import(right);
        if !subcat_items(&ws, adjunct)?.is_empty() {
            return None;
        }
        let [a, b, c] = head_path();
        let target = ws.follow(adjunct, &[a, b, c, feats().modifies])?;
        if !ws.unify(target, head) {
            return None;
        }
        let sem = ws.feature(adjunct, feats().sem)?;
        mother(&mut ws, head, None, sem)
    }
}

/// The schemata the parser closes under, by id.
pub struct Grammar {
    schemata: Vec<Box<dyn Schema>>,
}

impl Default for Grammar {
    fn default() -> Self {
        let mut g = Grammar::empty();
        g.register(Box::new(HeadComplement));
        g.register(Box::new(HeadSubject));
        g.register(Box::new(HeadAdjunct));
        g
    }
}

impl Grammar {
    pub fn empty() -> Self {
        Grammar { schemata: Vec::new() }
    }

    pub fn register(&mut self, schema: Box<dyn Schema>) {
        self.schemata.retain(|s| s.id() != schema.id());
        self.schemata.push(schema);
    }

    pub fn get(&self, id: &str) -> Option<&dyn Schema> {
        self.schemata.iter().find(|s| s.id() == id).map(|s| s.as_ref())
    }

    pub fn schemata(&self) -> impl Iterator<Item = &dyn Schema> {
        self.schemata.iter().map(|s| s.as_ref())
    }
}

/// Combines two signs with the schema named `id`.
pub fn combine(grammar: &Grammar, id: &str, left: &FeatureStructure, right: &FeatureStructure) -> Option<FeatureStructure> {
    grammar.get(id)?.combine(left, right)
}

fn root_pattern() -> &'static FeatureStructure {
    static P: OnceLock<FeatureStructure> = OnceLock::new();
    P.get_or_init(|| {
        "[SYN: [LOC: [HEAD: [CAT: verb, VFORM: fin], SUBCAT: < >]]]".parse().expect("well-formed pattern")
    })
}

/// A finite, saturated verbal sign: an acceptable sentence.
pub fn is_root(sign: &FeatureStructure) -> bool {
    crate::avm::subsumes(root_pattern(), sign)
}

/// All variants of `sign` obtained by dropping any subset of its optional
/// SUBCAT elements, order preserved, original first. Roles of dropped
/// elements stay unbound.
pub fn optional_skip(sign: &Sign) -> Vec<Sign> {
    optional_variants(sign).into_iter().map(|(s, _)| s).collect()
}

/// As [`optional_skip`], with the original SUBCAT positions each variant
/// keeps.
pub fn optional_variants(sign: &Sign) -> Vec<(Sign, Vec<usize>)> {
    let anchor = match sign.sem {
        Semantics::Complement(i) => Some(i),
        Semantics::Relation(_) => None,
    };
    let optional: Vec<usize> =
        (0..sign.subcat.len()).filter(|&i| sign.subcat[i].optional && Some(i) != anchor).collect();
    let mut out = Vec::with_capacity(1 << optional.len());
    for mask in 0..(1usize << optional.len()) {
        let dropped = |i: usize| optional.iter().position(|&o| o == i).is_some_and(|b| mask & (1 << b) != 0);
        let kept: Vec<usize> = (0..sign.subcat.len()).filter(|&i| !dropped(i)).collect();
        let mut variant = sign.clone();
        variant.subcat = kept.iter().map(|&i| sign.subcat[i].clone()).collect();
        if let Some(i) = anchor {
            variant.sem = Semantics::Complement(kept.iter().position(|&k| k == i).expect("anchor is kept"));
        }
        out.push((variant, kept));
    }
    out
}
