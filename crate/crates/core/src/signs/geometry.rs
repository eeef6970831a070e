//! Feature geometry of compiled signs:
//!
//! ```text
//! [PHON: "svare",
//!  SYN: [LOC: [HEAD: [CAT: verb, LEX: svare, VFORM: inf],
//!              SUBCAT: < [SYN: [LOC: [HEAD: [CAT: noun], SUBCAT: < >]], SEM: #2],
//!                        [SYN: [LOC: [HEAD: [CAT: noun], SUBCAT: < >]], SEM: #1] >,
//!              SUBJ: plus]],
//!  SEM: [AGENT: #1 [], RELN: answer, THEME: #2 []]]
//! ```
//!
//! Complements bind roles by sharing their SEM with the head's role value.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::{Category, Level, Semantics, Sign, SignSpec, VForm};
use crate::avm::{FeatureInventory, FeatureStructure, Node, NodeId, Symbol, Workspace};

pub struct Features {
    pub phon: Symbol,
    pub syn: Symbol,
    pub loc: Symbol,
    pub head: Symbol,
    pub cat: Symbol,
    pub pform: Symbol,
    pub vform: Symbol,
    pub lex: Symbol,
    pub modifies: Symbol,
    pub subcat: Symbol,
    pub subj: Symbol,
    pub sem: Symbol,
    pub reln: Symbol,
    pub referent: Symbol,
    pub human: Symbol,
    pub plus: Symbol,
    pub minus: Symbol,
}

pub fn feats() -> &'static Features {
    static F: OnceLock<Features> = OnceLock::new();
    F.get_or_init(|| {
        let s = Symbol::intern;
        Features {
            phon: s("PHON"),
            syn: s("SYN"),
            loc: s("LOC"),
            head: s("HEAD"),
            cat: s("CAT"),
            pform: s("PFORM"),
            vform: s("VFORM"),
            lex: s("LEX"),
            modifies: s("MOD"),
            subcat: s("SUBCAT"),
            subj: s("SUBJ"),
            sem: s("SEM"),
            reln: s("RELN"),
            referent: s("REF"),
            human: s("HUMAN"),
            plus: s("plus"),
            minus: s("minus"),
        }
    })
}

pub fn base_inventory() -> FeatureInventory {
    let f = feats();
    FeatureInventory::new([
        f.phon, f.syn, f.loc, f.head, f.cat, f.pform, f.vform, f.lex, f.modifies, f.subcat, f.subj, f.sem, f.reln,
        f.referent, f.human,
    ])
}

/// Feature name under which a role is stored in SEM.
pub fn role_feature(role: Symbol) -> Symbol {
    Symbol::intern(&role.as_str().to_uppercase())
}

pub fn loc_path() -> [Symbol; 2] {
    [feats().syn, feats().loc]
}

pub fn head_path() -> [Symbol; 3] {
    [feats().syn, feats().loc, feats().head]
}

pub fn subcat_path() -> [Symbol; 3] {
    [feats().syn, feats().loc, feats().subcat]
}

fn bool_atom(b: bool) -> Symbol {
    if b {
        feats().plus
    } else {
        feats().minus
    }
}

struct Compiler {
    ws: Workspace,
    roles: HashMap<Symbol, NodeId>,
}

impl Compiler {
    fn atom(&mut self, a: Symbol) -> NodeId {
        self.ws.alloc(Node::Atom(a))
    }

    fn avm(&mut self, feats: Vec<(Symbol, NodeId)>) -> NodeId {
        self.ws.alloc(Node::Avm(feats))
    }

    fn role_node(&mut self, role: Option<Symbol>) -> NodeId {
        match role {
            Some(r) => match self.roles.get(&r) {
                Some(&n) => n,
                None => {
                    let n = self.ws.alloc(Node::Empty);
                    self.roles.insert(r, n);
                    n
                }
            },
            None => self.ws.alloc(Node::Empty),
        }
    }

    fn head(&mut self, cat: Category, pform: Option<Symbol>, vform: Option<VForm>, lex: Option<Symbol>) -> Vec<(Symbol, NodeId)> {
        let f = feats();
        let mut head = vec![(f.cat, self.atom(Symbol::intern(cat.as_str())))];
        if let Some(p) = pform {
            head.push((f.pform, self.atom(p)));
        }
        if let Some(v) = vform {
            head.push((f.vform, self.atom(Symbol::intern(v.as_str()))));
        }
        if let Some(l) = lex {
            head.push((f.lex, self.atom(l)));
        }
        head
    }

    fn spec(&mut self, spec: &SignSpec, sem: NodeId, control: NodeId) -> NodeId {
        let f = feats();
        let head = self.head(spec.cat, spec.pform, spec.vform, spec.lex);
        let head = self.avm(head);
        let mut loc = vec![(f.head, head)];
        match spec.level {
            Level::Word => {}
            Level::Phrase => {
                let empty = self.ws.alloc(Node::List(vec![]));
                loc.push((f.subcat, empty));
            }
            Level::Predicate => {
                let subj = self.avm(vec![(f.sem, control)]);
                let list = self.ws.alloc(Node::List(vec![subj]));
                loc.push((f.subcat, list));
            }
        }
        if let Some(h) = spec.human {
            let v = self.atom(bool_atom(h));
            self.ws.set_feature(sem, f.human, v).expect("SEM nodes are AVMs");
        }
        let loc = self.avm(loc);
        let syn = self.avm(vec![(f.loc, loc)]);
        self.avm(vec![(f.syn, syn), (f.sem, sem)])
    }
}

/// Compiles a typed sign into its feature-structure encoding.
pub fn compile(sign: &Sign) -> FeatureStructure {
    let f = feats();
    let mut c = Compiler { ws: Workspace::new(), roles: HashMap::new() };

    let spec_sems: Vec<NodeId> = sign.subcat.iter().map(|s| c.role_node(s.role)).collect();
    let sem = match &sign.sem {
        Semantics::Relation(rel) => {
            let mut fs = vec![(f.reln, c.atom(rel.reln))];
            if rel.referent {
                fs.push((f.referent, c.atom(f.plus)));
            }
            if let Some(h) = rel.human {
                fs.push((f.human, c.atom(bool_atom(h))));
            }
            for role in &rel.roles {
                let n = c.role_node(Some(*role));
                fs.push((role_feature(*role), n));
            }
            c.avm(fs)
        }
        Semantics::Complement(i) => spec_sems[*i],
    };

    let control = match sign.subject() {
        Some(_) => *spec_sems.last().expect("subject present"),
        None => c.ws.alloc(Node::Empty),
    };
    let mut items = Vec::with_capacity(sign.subcat.len());
    for (spec, sem_node) in sign.subcat.iter().zip(&spec_sems) {
        items.push(c.spec(spec, *sem_node, control));
    }
    let subcat = c.ws.alloc(Node::List(items));

    let mut head = c.head(sign.head.cat, sign.head.pform, sign.head.vform, sign.head.lex);
    if let Some(m) = &sign.head.modifies {
        let sem_node = c.role_node(m.role);
        let fresh = c.ws.alloc(Node::Empty);
        let spec = c.spec(m, sem_node, fresh);
        head.push((f.modifies, spec));
    }
    let head = c.avm(head);
    let subj = c.atom(bool_atom(sign.subject().is_some()));
    let loc = c.avm(vec![(f.head, head), (f.subcat, subcat), (f.subj, subj)]);
    let syn = c.avm(vec![(f.loc, loc)]);
    let phon = c.atom(sign.phon);
    let root = c.avm(vec![(f.phon, phon), (f.syn, syn), (f.sem, sem)]);
    c.ws.extract(root).expect("compiled signs are acyclic")
}

/// Compiles one SUBCAT element on its own, with its SEM unbound.
pub fn compile_spec(spec: &SignSpec) -> FeatureStructure {
    let mut c = Compiler { ws: Workspace::new(), roles: HashMap::new() };
    let sem = c.ws.alloc(Node::Empty);
    let control = c.ws.alloc(Node::Empty);
    let root = c.spec(spec, sem, control);
    c.ws.extract(root).expect("compiled specs are acyclic")
}

/// Read-only accessors over compiled (lexical or phrasal) signs.
pub struct SignView<'a>(pub &'a FeatureStructure);

impl<'a> SignView<'a> {
    fn atom_at(&self, path: &[Symbol]) -> Option<Symbol> {
        match self.0.node(self.0.follow(path)?) {
            Node::Atom(a) => Some(*a),
            _ => None,
        }
    }

    pub fn category(&self) -> Option<Category> {
        let [a, b, c] = head_path();
        self.atom_at(&[a, b, c, feats().cat]).and_then(|s| Category::from_name(s.as_str()))
    }

    pub fn pform(&self) -> Option<Symbol> {
        let [a, b, c] = head_path();
        self.atom_at(&[a, b, c, feats().pform])
    }

    pub fn vform(&self) -> Option<VForm> {
        let [a, b, c] = head_path();
        self.atom_at(&[a, b, c, feats().vform]).and_then(|s| VForm::from_name(s.as_str()))
    }

    pub fn lex(&self) -> Option<Symbol> {
        let [a, b, c] = head_path();
        self.atom_at(&[a, b, c, feats().lex])
    }

    pub fn phon(&self) -> Option<Symbol> {
        self.atom_at(&[feats().phon])
    }

    pub fn has_subject(&self) -> bool {
        let [a, b] = loc_path();
        self.atom_at(&[a, b, feats().subj]) == Some(feats().plus)
    }

    pub fn subcat_len(&self) -> Option<usize> {
        match self.0.node(self.0.follow(&subcat_path())?) {
            Node::List(items) => Some(items.len()),
            _ => None,
        }
    }

    pub fn is_modifier(&self) -> bool {
        let [a, b, c] = head_path();
        self.0.follow(&[a, b, c, feats().modifies]).is_some()
    }

    /// Phrase label for tree printing.
    pub fn label(&self) -> String {
        let saturated = self.subcat_len() == Some(0);
        let only_subject = self.subcat_len() == Some(1) && self.has_subject();
        match self.category() {
            Some(Category::Verb) if saturated => "S".into(),
            Some(Category::Verb) if only_subject => "VP".into(),
            Some(Category::Verb) => "V".into(),
            Some(Category::Noun) if saturated => "NP".into(),
            Some(Category::Noun) => "N".into(),
            Some(Category::Prep) if saturated => "PP".into(),
            Some(Category::Prep) => "P".into(),
            Some(c) => c.as_str().to_uppercase(),
            None => "?".into(),
        }
    }

    /// Diagnostic label of a complement as found in the input: `NP`,
    /// `PP[til]`, `N[hunger]`.
    pub fn summary(&self) -> String {
        let saturated = self.subcat_len() == Some(0);
        let only_subject = self.subcat_len() == Some(1) && self.has_subject();
        let cat = self.category();
        let base = match cat {
            Some(Category::Noun) if saturated => "NP",
            Some(Category::Noun) => "N",
            Some(Category::Prep) if saturated => "PP",
            Some(Category::Prep) => "P",
            Some(Category::Verb) if saturated => "S",
            Some(Category::Verb) if only_subject => "VP",
            Some(Category::Verb) => "V",
            Some(Category::Adj) => "ADJ",
            Some(Category::Adv) => "ADV",
            Some(Category::Det) => "DET",
            None => "?",
        };
        let qual = match cat {
            Some(Category::Prep) => self.pform(),
            Some(Category::Verb) => self.vform().map(|v| Symbol::intern(v.as_str())),
            Some(Category::Noun) if !saturated => self.lex(),
            Some(Category::Adj) => self.lex(),
            _ => None,
        };
        match qual {
            Some(q) => format!("{base}[{q}]"),
            None => base.to_string(),
        }
    }
}
