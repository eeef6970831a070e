//! Agenda-driven bottom-up chart parser.

mod generate;
mod semantics;
mod sources;

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use crate::avm::{FeatureStructure, Symbol};
use crate::grammar::{is_root, optional_variants, Grammar, Schema, Side};
use crate::repair::RepairRecord;
use crate::signs::geometry::{compile, SignView};
use crate::signs::{Category, Lexicon, LexiconError, Stage};

pub use generate::generate;
pub use semantics::{extract_semantics, SemTerm};
pub use sources::{
    CompositeSource, FirstLanguageSource, InterlanguageSource, LexItem, LexicalSource, MalSource, Sources, TargetSource,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartConfig {
    /// Edges whose accumulated repair cost exceeds this are not built.
    pub max_cost: u32,
    pub edge_cap: usize,
}

impl Default for ChartConfig {
    fn default() -> Self {
        ChartConfig { max_cost: 0, edge_cap: 10_000 }
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub id: usize,
    pub start: usize,
    pub end: usize,
    pub sign: FeatureStructure,
    pub daughters: Vec<usize>,
    /// Schema id, or `None` for lexical edges.
    pub rule: Option<&'static str>,
    /// Lemma of lexical edges.
    pub lemma: Option<Symbol>,
    pub repairs: Vec<RepairRecord>,
    pub cost: u32,
    /// Repair on the lexical head whose differing slot is still open.
    pending: Option<usize>,
    /// Complements the head of this edge has cancelled so far.
    cancelled: usize,
}

impl Edge {
    pub fn span(&self) -> (usize, usize) {
        (self.start, self.end)
    }

    pub fn is_lexical(&self) -> bool {
        self.rule.is_none()
    }

    pub fn view(&self) -> SignView<'_> {
        SignView(&self.sign)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParseStatus {
    Parsed,
    NoParse,
    EdgeCapExceeded,
}

impl ParseStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseStatus::Parsed => "PARSED",
            ParseStatus::NoParse => "NO_PARSE",
            ParseStatus::EdgeCapExceeded => "EDGE_CAP_EXCEEDED",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChartStats {
    pub edges: usize,
    pub lexical: usize,
    /// Schema applications attempted.
    pub attempts: usize,
    /// Edges rejected as duplicates.
    pub duplicates: usize,
    /// Whole-input edges that are not sentences.
    pub fragments: usize,
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub tokens: Vec<String>,
    pub edges: Vec<Edge>,
    by_start: Vec<Vec<usize>>,
    by_end: Vec<Vec<usize>>,
}

impl Chart {
    fn new(tokens: &[String]) -> Self {
        let n = tokens.len();
        Chart { tokens: tokens.to_vec(), edges: Vec::new(), by_start: vec![vec![]; n + 1], by_end: vec![vec![]; n + 1] }
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn starting_at(&self, i: usize) -> impl Iterator<Item = &Edge> {
        self.by_start[i].iter().map(|&id| &self.edges[id])
    }

    pub fn ending_at(&self, i: usize) -> impl Iterator<Item = &Edge> {
        self.by_end[i].iter().map(|&id| &self.edges[id])
    }

    /// Edges over `[start, end)` whose head has category `cat`.
    pub fn edges_at(&self, start: usize, end: usize, cat: Category) -> impl Iterator<Item = &Edge> {
        self.starting_at(start).filter(move |e| e.end == end && e.view().category() == Some(cat))
    }

    /// `[S [NP Jeg] [VP ...]]`; lexical edges from transferred frames are
    /// starred.
    pub fn bracketed(&self, id: usize) -> String {
        let mut out = String::new();
        self.bracket_into(id, &mut out);
        out
    }

    fn bracket_into(&self, id: usize, out: &mut String) {
        let e = &self.edges[id];
        let label = e.view().label();
        if e.is_lexical() {
            let star = if e.repairs.is_empty() { "" } else { "*" };
            let _ = write!(out, "[{label}{star} {}]", self.tokens[e.start]);
            return;
        }
        let _ = write!(out, "[{label}");
        for &d in &e.daughters {
            out.push(' ');
            self.bracket_into(d, out);
        }
        out.push(']');
    }

    fn insert_index(&mut self, id: usize) {
        let (s, e) = self.edges[id].span();
        self.by_start[s].push(id);
        self.by_end[e].push(id);
    }
}

#[derive(Clone, Debug)]
pub struct ParseResult {
    pub status: ParseStatus,
    /// Whole-input sentence edges, cheapest first, then in creation order.
    pub trees: Vec<usize>,
    pub chart: Chart,
    pub stats: ChartStats,
}

impl ParseResult {
    pub fn tree_edges(&self) -> impl Iterator<Item = &Edge> {
        self.trees.iter().map(|&id| self.chart.edge(id))
    }

    pub fn parsed(&self) -> bool {
        !self.trees.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("UNKNOWN_WORD: `{token}` at position {position}")]
    UnknownWord { token: String, position: usize },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::UnknownWord { .. } => "UNKNOWN_WORD",
            ParseError::Lexicon(e) => e.code(),
        }
    }
}

/// Whitespace split with trailing punctuation removed; case is kept.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|t| t.trim_end_matches(|c: char| c.is_ascii_punctuation()))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// A compiled lexical sign for one surface form.
#[derive(Clone, Debug)]
pub struct LexSign {
    pub surface: String,
    pub lemma: Symbol,
    pub sign: FeatureStructure,
    pub repair: Option<RepairRecord>,
}

/// A parser over one lexical source.
pub struct Parser {
    grammar: Grammar,
    lex: Vec<LexSign>,
}

impl Parser {
    pub fn new(lexicon: &Lexicon, source: &dyn LexicalSource) -> Result<Self, LexiconError> {
        Ok(Parser::from_items(&source.items(lexicon)?))
    }

    /// Parser over the named source of the default registry.
    pub fn with_source(lexicon: &Lexicon, name: &str) -> Result<Self, LexiconError> {
        let sources = Sources::default();
        let source = sources.get(name).ok_or_else(|| LexiconError::UnknownRule(name.to_string()))?;
        Parser::new(lexicon, source)
    }

    pub fn from_items(items: &[LexItem]) -> Self {
        let mut lex = Vec::new();
        for item in items {
            for (variant, kept) in optional_variants(&item.sign) {
                let repair = match &item.template {
                    None => None,
                    Some(t) => match t.diff.and_then(|d| kept.iter().position(|&k| k == d)) {
                        Some(slot) => Some(RepairRecord::from_template(t, slot, variant.subcat[slot].summary())),
                        // The transferred slot is not realised: no hypothesis.
                        None => continue,
                    },
                };
                for form in &item.forms {
                    let mut sign = variant.clone();
                    sign.phon = Symbol::intern(&form.surface);
                    if form.vform.is_some() {
                        sign.head.vform = form.vform;
                    }
                    lex.push(LexSign { surface: form.surface.clone(), lemma: item.lemma, sign: compile(&sign), repair: repair.clone() });
                }
            }
        }
        Parser { grammar: Grammar::default(), lex }
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn lexical_signs(&self) -> &[LexSign] {
        &self.lex
    }

    /// Signs for a token: exact form matches, else case-insensitive ones.
    pub fn lookup(&self, token: &str) -> Vec<&LexSign> {
        let exact: Vec<&LexSign> = self.lex.iter().filter(|l| l.surface == token).collect();
        if !exact.is_empty() {
            return exact;
        }
        let folded = token.to_lowercase();
        self.lex.iter().filter(|l| l.surface.to_lowercase() == folded).collect()
    }

    pub fn parse(&self, tokens: &[String], config: &ChartConfig) -> Result<ParseResult, ParseError> {
        let mut lexical = Vec::with_capacity(tokens.len());
        for (position, token) in tokens.iter().enumerate() {
            let signs = self.lookup(token);
            if signs.is_empty() {
                return Err(ParseError::UnknownWord { token: token.clone(), position });
            }
            lexical.push(signs);
        }
        let mut run = Run {
            chart: Chart::new(tokens),
            seen: HashSet::new(),
            agenda: VecDeque::new(),
            config,
            stats: ChartStats::default(),
            capped: false,
        };
        for (i, signs) in lexical.into_iter().enumerate() {
            for l in signs {
                let mut repairs = Vec::new();
                let mut pending = None;
                if let Some(r) = &l.repair {
                    let mut r = r.clone();
                    r.head = (i, i + 1);
                    r.span = (i, i + 1);
                    repairs.push(r);
                    pending = Some(0);
                }
                let cost = repairs.iter().map(|r| r.cost).sum();
                if cost > config.max_cost {
                    continue;
                }
                run.add(Edge {
                    id: 0,
                    start: i,
                    end: i + 1,
                    sign: l.sign.clone(),
                    daughters: vec![],
                    rule: None,
                    lemma: Some(l.lemma),
                    repairs,
                    cost,
                    pending,
                    cancelled: 0,
                });
            }
        }
        run.stats.lexical = run.chart.edges.len();

        while let Some(id) = run.agenda.pop_front() {
            if run.capped {
                break;
            }
            let (start, end) = run.chart.edges[id].span();
            let left: Vec<usize> = run.chart.by_end[start].clone();
            for l in left {
                for schema in self.grammar.schemata() {
                    run.attempt(schema, l, id);
                }
            }
            let right: Vec<usize> = run.chart.by_start[end].clone();
            for r in right {
                for schema in self.grammar.schemata() {
                    run.attempt(schema, id, r);
                }
            }
            run.chart.insert_index(id);
        }

        let n = tokens.len();
        let mut trees: Vec<usize> = Vec::new();
        for e in &run.chart.edges {
            if e.start == 0 && e.end == n {
                if is_root(&e.sign) {
                    trees.push(e.id);
                } else {
                    run.stats.fragments += 1;
                }
            }
        }
        trees.sort_by_key(|&id| (run.chart.edges[id].cost, id));
        run.stats.edges = run.chart.edges.len();
        let status = if run.capped {
            ParseStatus::EdgeCapExceeded
        } else if trees.is_empty() {
            ParseStatus::NoParse
        } else {
            ParseStatus::Parsed
        };
        Ok(ParseResult { status, trees, chart: run.chart, stats: run.stats })
    }
}

struct Run<'c> {
    chart: Chart,
    seen: HashSet<(usize, usize, u32, FeatureStructure)>,
    agenda: VecDeque<usize>,
    config: &'c ChartConfig,
    stats: ChartStats,
    capped: bool,
}

impl Run<'_> {
    fn add(&mut self, mut edge: Edge) {
        if self.capped {
            return;
        }
        if !self.seen.insert((edge.start, edge.end, edge.cost, edge.sign.clone())) {
            self.stats.duplicates += 1;
            return;
        }
        if self.chart.edges.len() >= self.config.edge_cap {
            self.capped = true;
            return;
        }
        edge.id = self.chart.edges.len();
        self.agenda.push_back(edge.id);
        self.chart.edges.push(edge);
    }

    fn attempt(&mut self, schema: &dyn Schema, l: usize, r: usize) {
        let (left, right) = (&self.chart.edges[l], &self.chart.edges[r]);
        let cost = left.cost + right.cost;
        if cost > self.config.max_cost {
            return;
        }
        self.stats.attempts += 1;
        let sign = match schema.combine(&left.sign, &right.sign) {
            Some(s) => s,
            None => return,
        };
        let (head, offset) = match schema.head_side() {
            Side::Left => (left, 0),
            Side::Right => (right, left.repairs.len()),
        };
        let mut repairs = left.repairs.clone();
        repairs.extend(right.repairs.iter().cloned());
        let mut pending = head.pending.map(|p| p + offset);
        // A cancelling schema with the head on the left consumes a
        // complement.
        let consumes_complement = schema.cancels() && schema.head_side() == Side::Left;
        if consumes_complement {
            if let Some(p) = pending {
                if repairs[p].slot == head.cancelled {
                    repairs[p].span = right.span();
                    repairs[p].observed = Some(right.view().summary());
                    pending = None;
                }
            }
        }
        let edge = Edge {
            id: 0,
            start: left.start,
            end: right.end,
            sign,
            daughters: vec![l, r],
            rule: Some(schema.id()),
            lemma: None,
            repairs,
            cost,
            pending,
            cancelled: head.cancelled + usize::from(consumes_complement),
        };
        self.add(edge);
    }
}

/// Parses with target-language frames only.
pub fn parse_strict(tokens: &[String], lexicon: &Lexicon) -> Result<ParseResult, ParseError> {
    Parser::new(lexicon, &TargetSource)?.parse(tokens, &ChartConfig::default())
}

/// Parses with the learner's interlanguage lexicon, optionally forcing
/// every bilingual entry to one stage.
pub fn parse_il(tokens: &[String], lexicon: &Lexicon, stage: Option<Stage>) -> Result<ParseResult, ParseError> {
    Parser::new(lexicon, &InterlanguageSource::new(stage))?.parse(tokens, &ChartConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::load_lexicon;

    fn no_es() -> Lexicon {
        load_lexicon(include_str!("../../../../fixtures/no-es.lex")).unwrap()
    }

    fn en_fr() -> Lexicon {
        load_lexicon(include_str!("../../../../fixtures/en-fr.lex")).unwrap()
    }

    #[test]
    fn tokenization() {
        assert_eq!(tokenize("  Jeg kunne ikke svare til Per. "), ["Jeg", "kunne", "ikke", "svare", "til", "Per"]);
        assert_eq!(tokenize("Hva?!"), ["Hva"]);
        assert!(tokenize(" . ").is_empty());
    }

    #[test]
    fn strict_parse_of_the_grammatical_variant() {
        let r = parse_strict(&tokenize("Jeg kunne ikke svare Per"), &no_es()).unwrap();
        assert_eq!(r.status, ParseStatus::Parsed);
        assert_eq!(r.trees.len(), 1);
        assert_eq!(
            r.chart.bracketed(r.trees[0]),
            "[S [NP Jeg] [VP [V kunne] [VP [ADV ikke] [VP [V svare] [NP Per]]]]]"
        );
        assert!(r.tree_edges().all(|e| e.repairs.is_empty()));
    }

    #[test]
    fn strict_parse_rejects_the_transferred_pp() {
        let r = parse_strict(&tokenize("Jeg kunne ikke svare til Per"), &no_es()).unwrap();
        assert_eq!(r.status, ParseStatus::NoParse);
        assert!(r.chart.edges.iter().all(|e| e.repairs.is_empty()));
    }

    #[test]
    fn unknown_word_position() {
        let e = parse_strict(&tokenize("Jeg kunne ikke blorp Per"), &no_es()).unwrap_err();
        assert_eq!(e, ParseError::UnknownWord { token: "blorp".into(), position: 3 });
    }

    #[test]
    fn stages() {
        let lex = no_es();
        let bad = tokenize("Jeg kunne ikke svare til Per");
        let good = tokenize("Jeg kunne ikke svare Per");
        assert!(parse_il(&bad, &lex, Some(Stage::Transfer)).unwrap().parsed());
        assert!(!parse_il(&good, &lex, Some(Stage::Transfer)).unwrap().parsed());
        assert!(!parse_il(&bad, &lex, Some(Stage::Distinct)).unwrap().parsed());
        assert!(parse_il(&bad, &lex, Some(Stage::Variable)).unwrap().parsed());
        assert!(parse_il(&good, &lex, Some(Stage::Variable)).unwrap().parsed());
        // The fixture records the distinct stage.
        assert!(!parse_il(&bad, &lex, None).unwrap().parsed());
    }

    #[test]
    fn idiom_chunk_and_optional_object() {
        let lex = en_fr();
        assert!(parse_strict(&tokenize("My friend is hungry"), &lex).unwrap().parsed());
        assert!(!parse_strict(&tokenize("My friend has hunger"), &lex).unwrap().parsed());
        assert!(parse_strict(&tokenize("My friend has my hunger"), &lex).unwrap().parsed());
        assert!(parse_il(&tokenize("My friend has hunger"), &lex, None).unwrap().parsed());
        assert!(parse_strict(&tokenize("My friend eats"), &lex).unwrap().parsed());
        assert!(parse_strict(&tokenize("My friend eats my hunger"), &lex).unwrap().parsed());
    }

    #[test]
    fn deterministic() {
        let lex = no_es();
        let t = tokenize("Jeg kunne ikke svare Per");
        let a = parse_strict(&t, &lex).unwrap();
        let b = parse_strict(&t, &lex).unwrap();
        let key = |r: &ParseResult| -> Vec<(usize, usize, String)> {
            r.chart.edges.iter().map(|e| (e.start, e.end, e.sign.to_string())).collect()
        };
        assert_eq!(key(&a), key(&b));
        assert_eq!(a.trees, b.trees);
    }

    #[test]
    fn edge_cap_is_a_status() {
        let lex = no_es();
        let p = Parser::new(&lex, &TargetSource).unwrap();
        let r = p.parse(&tokenize("Jeg kunne ikke svare Per"), &ChartConfig { max_cost: 0, edge_cap: 3 }).unwrap();
        assert_eq!(r.status, ParseStatus::EdgeCapExceeded);
        assert_eq!(r.chart.edges.len(), 3);
    }

    #[test]
    fn indexed_access() {
        let r = parse_strict(&tokenize("Jeg svarer Per"), &no_es()).unwrap();
        assert_eq!(r.chart.edges_at(1, 3, Category::Verb).count(), 1);
        assert_eq!(r.chart.edges_at(0, 1, Category::Noun).count(), 1);
        assert!(r.chart.ending_at(3).all(|e| e.end == 3));
    }
}
