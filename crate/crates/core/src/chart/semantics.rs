use std::fmt;

use super::Edge;
use crate::avm::{FeatureStructure, Node, NodeId, Symbol};
use crate::signs::geometry::feats;

/// A resolved meaning read off a sign's SEM.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SemTerm {
    Relation { reln: Symbol, args: Vec<(String, SemTerm)> },
    Referent { name: Symbol, args: Vec<(String, SemTerm)> },
    /// A role no complement bound.
    Unbound,
}

impl SemTerm {
    pub fn args(&self) -> &[(String, SemTerm)] {
        match self {
            SemTerm::Relation { args, .. } | SemTerm::Referent { args, .. } => args,
            SemTerm::Unbound => &[],
        }
    }

    pub fn arg(&self, role: &str) -> Option<&SemTerm> {
        self.args().iter().find(|(r, _)| r == role).map(|(_, t)| t)
    }
}

impl fmt::Display for SemTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, args) = match self {
            SemTerm::Unbound => return f.write_str("_"),
            SemTerm::Relation { reln, args } => (reln, args),
            SemTerm::Referent { name, args } => (name, args),
        };
        write!(f, "{name}")?;
        if matches!(self, SemTerm::Referent { .. }) && args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, (role, term)) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{role}={term}")?;
        }
        f.write_str(")")
    }
}

fn term(fs: &FeatureStructure, id: NodeId) -> SemTerm {
    let f = feats();
    let pairs = match fs.node(id) {
        Node::Avm(pairs) => pairs,
        _ => return SemTerm::Unbound,
    };
    let reln = match fs.feature_at(id, f.reln).map(|n| fs.node(n)) {
        Some(Node::Atom(a)) => *a,
        _ => return SemTerm::Unbound,
    };
    let args: Vec<(String, SemTerm)> = pairs
        .iter()
        .filter(|(k, _)| ![f.reln, f.referent, f.human].contains(k))
        .map(|(k, v)| (k.as_str().to_lowercase(), term(fs, *v)))
        .collect();
    if fs.feature_at(id, f.referent).is_some() {
        SemTerm::Referent { name: reln, args }
    } else {
        SemTerm::Relation { reln, args }
    }
}

/// The meaning of a (typically complete) edge.
pub fn extract_semantics(edge: &Edge) -> SemTerm {
    match edge.sign.feature_at(edge.sign.root(), feats().sem) {
        Some(id) => term(&edge.sign, id),
        None => SemTerm::Unbound,
    }
}

#[cfg(test)]
mod tests {
    use crate::chart::{parse_strict, tokenize, Parser, ChartConfig};
    use crate::signs::load_lexicon;

    #[test]
    fn composed_meanings() {
        let no = load_lexicon(include_str!("../../../../fixtures/no-es.lex")).unwrap();
        let r = parse_strict(&tokenize("Jeg kunne ikke svare Per"), &no).unwrap();
        let sem = super::extract_semantics(r.tree_edges().next().unwrap());
        // Negation scopes over the VP it is adjoined to.
        assert_eq!(sem.to_string(), "able(agent=jeg, soa=neg(scope=answer(agent=jeg, theme=per)))");

        let r = parse_strict(&tokenize("Per"), &no).unwrap();
        assert_eq!(super::extract_semantics(&r.chart.edges[0]).to_string(), "per");

        let fr = load_lexicon(include_str!("../../../../fixtures/en-fr.lex")).unwrap();
        let p = Parser::with_source(&fr, "l1").unwrap();
        let r = p.parse(&tokenize("Mon ami a faim"), &ChartConfig::default()).unwrap();
        let sem = super::extract_semantics(r.tree_edges().next().unwrap());
        assert_eq!(sem.to_string(), "hungry(experiencer=ami(poss=speaker))");

        let en = p.parse(&tokenize("Mon ami a"), &ChartConfig::default()).unwrap();
        assert!(!en.parsed());
        let r = parse_strict(&tokenize("My friend eats"), &fr).unwrap();
        let sem = super::extract_semantics(r.tree_edges().next().unwrap());
        assert_eq!(sem.to_string(), "eat(agent=friend(poss=speaker), theme=_)");
    }
}
