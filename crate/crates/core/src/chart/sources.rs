//! Where lexical signs come from. The parser is agnostic: strict parsing,
//! learner-grammar simulation and repair differ only in their source.

use crate::avm::Symbol;
use crate::signs::{project_with_forms, Form, Language, LexicalRules, Lexicon, LexiconError, RepairTemplate, Sign, Stage};

/// One lexical sign with the surface forms that realise it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexItem {
    pub lemma: Symbol,
    pub sign: Sign,
    pub forms: Vec<Form>,
    /// Set for transferred frames; edges built from the item carry a
    /// repair record.
    pub template: Option<RepairTemplate>,
}

pub trait LexicalSource: Send + Sync {
    fn name(&self) -> &'static str;
    fn items(&self, lexicon: &Lexicon) -> Result<Vec<LexItem>, LexiconError>;
}

fn plain(lemma: Symbol, sign: Sign, forms: &[Form]) -> LexItem {
    LexItem { lemma, sign, forms: forms.to_vec(), template: None }
}

/// Target-language entries with their own frames.
pub struct TargetSource;

impl LexicalSource for TargetSource {
    fn name(&self) -> &'static str {
        "lt"
    }

    fn items(&self, lexicon: &Lexicon) -> Result<Vec<LexItem>, LexiconError> {
        Ok(lexicon
            .entries
            .iter()
            .filter(|e| e.language == Language::Lt)
            .map(|e| plain(e.lemma, e.sign.clone(), &e.forms))
            .collect())
    }
}

/// First-language entries, closed under the registered lexical rules.
pub struct FirstLanguageSource;

impl LexicalSource for FirstLanguageSource {
    fn name(&self) -> &'static str {
        "l1"
    }

    fn items(&self, lexicon: &Lexicon) -> Result<Vec<LexItem>, LexiconError> {
        let rules = LexicalRules::default();
        let mut out = Vec::new();
        for e in lexicon.entries.iter().filter(|e| e.language == Language::L1) {
            out.push(plain(e.lemma, e.sign.clone(), &e.forms));
            for id in rules.ids() {
                let rule = rules.get(id).expect("listed id");
                for derived in rule.apply(e, lexicon)? {
                    out.push(plain(derived.lemma, derived.sign, &derived.forms));
                }
            }
        }
        Ok(out)
    }
}

/// The learner's interlanguage: target entries, with every entry that has
/// a bilingual counterpart replaced by its stage projection.
pub struct InterlanguageSource {
    name: &'static str,
    /// Overrides the stage recorded on each bilingual entry.
    pub stage: Option<Stage>,
}

impl InterlanguageSource {
    pub fn new(stage: Option<Stage>) -> Self {
        let name = match stage {
            None => "il",
            Some(Stage::Transfer) => "il-transfer",
            Some(Stage::Distinct) => "il-distinct",
            Some(Stage::Variable) => "il-variable",
        };
        InterlanguageSource { name, stage }
    }
}

impl LexicalSource for InterlanguageSource {
    fn name(&self) -> &'static str {
        self.name
    }

    fn items(&self, lexicon: &Lexicon) -> Result<Vec<LexItem>, LexiconError> {
        let mut out = Vec::new();
        for (i, e) in lexicon.entries.iter().enumerate() {
            if e.language != Language::Lt {
                continue;
            }
            match lexicon.bilingual_for_lt(i) {
                None => out.push(plain(e.lemma, e.sign.clone(), &e.forms)),
                Some(b) => {
                    let stage = self.stage.unwrap_or(b.stage);
                    for (sign, forms) in project_with_forms(b, stage, lexicon)? {
                        let lemma = sign.head.lex.unwrap_or(e.lemma);
                        out.push(plain(lemma, sign, forms));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Transferred frames only, each tagged with its repair template.
pub struct MalSource;

impl LexicalSource for MalSource {
    fn name(&self) -> &'static str {
        "mal"
    }

    fn items(&self, lexicon: &Lexicon) -> Result<Vec<LexItem>, LexiconError> {
        Ok(lexicon
            .mal_lexicon()
            .iter()
            .filter(|m| m.template.diff.is_some())
            .map(|m| LexItem { lemma: m.lemma, sign: m.sign.clone(), forms: m.forms.clone(), template: Some(m.template.clone()) })
            .collect())
    }
}

/// Concatenation of other sources.
pub struct CompositeSource {
    name: &'static str,
    parts: Vec<Box<dyn LexicalSource>>,
}

impl CompositeSource {
    pub fn new(name: &'static str, parts: Vec<Box<dyn LexicalSource>>) -> Self {
        CompositeSource { name, parts }
    }
}

impl LexicalSource for CompositeSource {
    fn name(&self) -> &'static str {
        self.name
    }

    fn items(&self, lexicon: &Lexicon) -> Result<Vec<LexItem>, LexiconError> {
        let mut out = Vec::new();
        for p in &self.parts {
            out.extend(p.items(lexicon)?);
        }
        Ok(out)
    }
}

/// Sources by name.
pub struct Sources {
    sources: Vec<Box<dyn LexicalSource>>,
}

impl Default for Sources {
    fn default() -> Self {
        let mut s = Sources { sources: Vec::new() };
        s.register(Box::new(TargetSource));
        s.register(Box::new(FirstLanguageSource));
        for stage in [None, Some(Stage::Transfer), Some(Stage::Distinct), Some(Stage::Variable)] {
            s.register(Box::new(InterlanguageSource::new(stage)));
        }
        s.register(Box::new(MalSource));
        s.register(Box::new(CompositeSource::new("repair", vec![Box::new(TargetSource), Box::new(MalSource)])));
        s
    }
}

impl Sources {
    pub fn register(&mut self, source: Box<dyn LexicalSource>) {
        self.sources.retain(|s| s.name() != source.name());
        self.sources.push(source);
    }

    pub fn get(&self, name: &str) -> Option<&dyn LexicalSource> {
        self.sources.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.sources.iter().map(|s| s.name())
    }
}
