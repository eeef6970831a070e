//! Robust parsing with transferred frames.
//!
//! When the strict parse fails, the chart is rebuilt from target-language
//! signs plus the precompiled transferred frames of every token that has a
//! bilingual entry. Each transferred sign costs one; analyses are ranked
//! by cost and a fixed series of tie-breaks.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::avm::Symbol;
use crate::chart::{
    extract_semantics, ChartConfig, CompositeSource, MalSource, ParseError, ParseResult, ParseStatus, Parser, SemTerm,
    TargetSource,
};
use crate::signs::{Lexicon, LexiconError, RepairKind, RepairTemplate};

/// One transferred frame used in an analysis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RepairRecord {
    pub kind: RepairKind,
    /// Index of the bilingual entry the frame came from.
    pub bilingual: usize,
    pub il_lemma: Symbol,
    pub l1_lemma: Symbol,
    pub l1_frame: String,
    pub transferred_frame: String,
    pub lt_frame: String,
    /// Transferred complement standing where the target frame wants
    /// another, e.g. `PP[til]`.
    pub cancelled: String,
    /// Lemma constraints of the L1 frame.
    pub chunks: Vec<Symbol>,
    /// Position of that complement on the head's SUBCAT list.
    pub slot: usize,
    /// Token span of the head word.
    pub head: (usize, usize),
    /// Token span of the offending complement (the head until the
    /// complement is found).
    pub span: (usize, usize),
    /// How the complement looks in the input, e.g. `PP[til]`.
    pub observed: Option<String>,
    pub cost: u32,
}

impl RepairRecord {
    pub fn from_template(t: &RepairTemplate, slot: usize, cancelled: String) -> Self {
        RepairRecord {
            kind: t.kind,
            bilingual: t.bilingual,
            il_lemma: t.il_lemma,
            l1_lemma: t.l1_lemma,
            l1_frame: t.l1_frame.clone(),
            transferred_frame: t.transferred_frame.clone(),
            lt_frame: t.lt_frame.clone(),
            cancelled,
            chunks: t.chunks.clone(),
            slot,
            head: (0, 0),
            span: (0, 0),
            observed: None,
            cost: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepairConfig {
    /// Most repairs one analysis may use.
    pub max_repairs: u32,
    /// Analyses kept after ranking.
    pub beam: usize,
    pub edge_cap: usize,
}

impl Default for RepairConfig {
    fn default() -> Self {
        RepairConfig { max_repairs: 2, beam: 16, edge_cap: 10_000 }
    }
}

impl RepairConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.beam == 0 {
            return Err("beam must be at least 1".into());
        }
        if self.edge_cap == 0 {
            return Err("edge cap must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    /// Root edge in the chart it came from.
    pub edge: usize,
    pub cost: u32,
    pub repairs: Vec<RepairRecord>,
    pub semantics: SemTerm,
    pub tree: String,
}

impl Analysis {
    fn distinct_lexemes(&self) -> usize {
        self.repairs.iter().map(|r| (r.il_lemma, r.head)).collect::<BTreeSet<_>>().len()
    }

    fn leftmost_span(&self) -> (usize, usize) {
        self.repairs.iter().map(|r| r.span).min().unwrap_or((usize::MAX, usize::MAX))
    }

    fn lemmas(&self) -> Vec<&'static str> {
        let mut l: Vec<&'static str> = self.repairs.iter().map(|r| r.il_lemma.as_str()).collect();
        l.sort_unstable();
        l
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepairStatus {
    /// The strict parse succeeded; analyses carry no repairs.
    Grammatical,
    Repaired,
    NoAnalysis,
    EdgeCapExceeded,
}

#[derive(Clone, Debug)]
pub struct RankedAnalyses {
    pub status: RepairStatus,
    pub analyses: Vec<Analysis>,
    pub strict: ParseResult,
    pub repaired: Option<ParseResult>,
    /// Tokens for which a transferred frame was available.
    pub bilingual_tokens: usize,
}

/// Orders analyses by cost, then fewer repaired lexemes, then leftmost
/// repaired span, then repaired lemmas; keeps the first `beam`.
pub fn rank(mut analyses: Vec<Analysis>, config: &RepairConfig) -> Vec<Analysis> {
    analyses.sort_by(|a, b| {
        (a.cost, a.distinct_lexemes(), a.leftmost_span(), a.lemmas()).cmp(&(
            b.cost,
            b.distinct_lexemes(),
            b.leftmost_span(),
            b.lemmas(),
        ))
    });
    analyses.truncate(config.beam.max(1));
    analyses
}

fn analyses_of(result: &ParseResult) -> Vec<Analysis> {
    result
        .tree_edges()
        .map(|e| Analysis {
            edge: e.id,
            cost: e.cost,
            repairs: e.repairs.clone(),
            semantics: extract_semantics(e),
            tree: result.chart.bracketed(e.id),
        })
        .collect()
}

/// Strict and repairing parsers over one lexicon, built once.
pub struct Repairer {
    strict: Parser,
    repair: Parser,
}

impl Repairer {
    pub fn new(lexicon: &Lexicon) -> Result<Self, LexiconError> {
        let combined = CompositeSource::new("repair", vec![Box::new(TargetSource), Box::new(MalSource)]);
        Ok(Repairer { strict: Parser::new(lexicon, &TargetSource)?, repair: Parser::new(lexicon, &combined)? })
    }

    pub fn strict_parser(&self) -> &Parser {
        &self.strict
    }

    pub fn repair_parser(&self) -> &Parser {
        &self.repair
    }

    pub fn repair_parse(&self, tokens: &[String], config: &RepairConfig) -> Result<RankedAnalyses, ParseError> {
        let strict = self.strict.parse(tokens, &ChartConfig { max_cost: 0, edge_cap: config.edge_cap })?;
        let bilingual_tokens =
            tokens.iter().filter(|t| self.repair.lookup(t).iter().any(|l| l.repair.is_some())).count();
        if strict.parsed() {
            return Ok(RankedAnalyses {
                status: RepairStatus::Grammatical,
                analyses: rank(analyses_of(&strict), config),
                strict,
                repaired: None,
                bilingual_tokens,
            });
        }
        let repaired =
            self.repair.parse(tokens, &ChartConfig { max_cost: config.max_repairs, edge_cap: config.edge_cap })?;
        let analyses = rank(analyses_of(&repaired), config);
        let status = if repaired.status == ParseStatus::EdgeCapExceeded || strict.status == ParseStatus::EdgeCapExceeded {
            RepairStatus::EdgeCapExceeded
        } else if analyses.is_empty() {
            RepairStatus::NoAnalysis
        } else {
            RepairStatus::Repaired
        };
        Ok(RankedAnalyses { status, analyses, strict, repaired: Some(repaired), bilingual_tokens })
    }
}

/// Parses strictly, and on failure with transferred frames.
pub fn repair_parse(tokens: &[String], lexicon: &Lexicon, config: &RepairConfig) -> Result<RankedAnalyses, ParseError> {
    Repairer::new(lexicon)?.repair_parse(tokens, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::tokenize;
    use crate::signs::load_lexicon;

    fn no_es() -> Lexicon {
        load_lexicon(include_str!("../../../fixtures/no-es.lex")).unwrap()
    }

    #[test]
    fn transferred_pp_is_repaired_once() {
        let r = repair_parse(&tokenize("Jeg kunne ikke svare til Per"), &no_es(), &RepairConfig::default()).unwrap();
        assert_eq!(r.status, RepairStatus::Repaired);
        let top = &r.analyses[0];
        assert_eq!(top.cost, 1);
        assert_eq!(top.repairs.len(), 1);
        let rec = &top.repairs[0];
        assert_eq!(rec.kind, RepairKind::L1FrameSubstitution);
        assert_eq!((rec.il_lemma.as_str(), rec.l1_lemma.as_str()), ("svare", "responder"));
        assert_eq!(rec.transferred_frame, "⟨PP[til]⟩");
        assert_eq!(rec.head, (3, 4));
        assert_eq!(rec.span, (4, 6));
        assert_eq!(rec.observed.as_deref(), Some("PP[til]"));
        assert_eq!(top.tree, "[S [NP Jeg] [VP [V kunne] [VP [ADV ikke] [VP [V* svare] [PP [P til] [NP Per]]]]]]");
    }

    #[test]
    fn idiom_is_repaired() {
        let lex = load_lexicon(include_str!("../../../fixtures/en-fr.lex")).unwrap();
        let r = repair_parse(&tokenize("My friend has hunger"), &lex, &RepairConfig::default()).unwrap();
        let rec = &r.analyses[0].repairs[0];
        assert_eq!(rec.kind, RepairKind::IdiomTransfer);
        assert_eq!(rec.l1_lemma.as_str(), "avoir");
        assert_eq!(rec.transferred_frame, "⟨N[hunger]⟩");
        assert_eq!(rec.observed.as_deref(), Some("N[hunger]"));
        assert_eq!(r.analyses[0].semantics.to_string(), "hungry(experiencer=friend(poss=speaker))");
    }

    #[test]
    fn grammatical_input_passes_through() {
        let r = repair_parse(&tokenize("Jeg kunne ikke svare Per"), &no_es(), &RepairConfig::default()).unwrap();
        assert_eq!(r.status, RepairStatus::Grammatical);
        assert!(r.repaired.is_none());
        assert!(r.analyses.iter().all(|a| a.repairs.is_empty() && a.cost == 0));
    }

    #[test]
    fn no_budget_no_analysis() {
        let config = RepairConfig { max_repairs: 0, ..RepairConfig::default() };
        let r = repair_parse(&tokenize("Jeg kunne ikke svare til Per"), &no_es(), &config).unwrap();
        assert_eq!(r.status, RepairStatus::NoAnalysis);
    }

    fn fake(cost: u32, span: (usize, usize), lemma: &str) -> Analysis {
        let t = RepairTemplate {
            kind: RepairKind::L1FrameSubstitution,
            bilingual: 0,
            il_lemma: Symbol::intern(lemma),
            l1_lemma: Symbol::intern("x"),
            l1_frame: String::new(),
            transferred_frame: String::new(),
            lt_frame: String::new(),
            diff: Some(0),
            chunks: vec![],
        };
        let mut r = RepairRecord::from_template(&t, 0, String::new());
        r.span = span;
        r.cost = cost;
        Analysis { edge: 0, cost, repairs: vec![r], semantics: SemTerm::Unbound, tree: String::new() }
    }

    #[test]
    fn ranking_rules() {
        let c = RepairConfig::default();
        let r = rank(vec![fake(2, (0, 1), "a"), fake(1, (0, 1), "a")], &c);
        assert_eq!(r[0].cost, 1);
        let r = rank(vec![fake(1, (3, 5), "a"), fake(1, (1, 2), "a")], &c);
        assert_eq!(r[0].repairs[0].span, (1, 2));
        let r = rank(vec![fake(1, (1, 2), "b"), fake(1, (1, 2), "a")], &c);
        assert_eq!(r[0].repairs[0].il_lemma.as_str(), "a");
        let many: Vec<Analysis> = (0..40).map(|i| fake(1 + i % 3, (i as usize, i as usize + 1), "a")).collect();
        assert_eq!(rank(many, &c).len(), 16);
    }
}
