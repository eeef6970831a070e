//! Lexical signs, bilingual entries and the lexicon.
//!
//! Signs are kept in a typed form here and compiled into feature
//! structures (see [`geometry`]) when they enter the chart. The typed form
//! is what lexical rules, frame translation and stage projection operate
//! on.

mod format;
pub mod geometry;
mod rules;
mod transfer;

use std::fmt;
use std::sync::Arc;

use crate::avm::{FeatureInventory, Symbol};

pub use format::load_lexicon;
pub use rules::{apply_lexical_rule, HumanObjectPp, LexicalRule, LexicalRules};
pub(crate) use transfer::project_with_forms;
pub use transfer::{frame_summary, project_il_signs, translate_spec, MalEntry, RepairKind, RepairTemplate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Verb,
    Noun,
    Prep,
    Adv,
    Det,
    Adj,
}

impl Category {
    pub const ALL: [Category; 6] =
        [Category::Verb, Category::Noun, Category::Prep, Category::Adv, Category::Det, Category::Adj];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Verb => "verb",
            Category::Noun => "noun",
            Category::Prep => "prep",
            Category::Adv => "adv",
            Category::Det => "det",
            Category::Adj => "adj",
        }
    }

    pub fn from_name(s: &str) -> Option<Category> {
        Category::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

/// How saturated a complement must be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// No constraint on SUBCAT (bare words such as idiom chunks).
    Word,
    /// Empty SUBCAT.
    Phrase,
    /// Exactly the subject left, controlled by the selecting head's subject.
    Predicate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VForm {
    Fin,
    Inf,
}

impl VForm {
    pub fn as_str(self) -> &'static str {
        match self {
            VForm::Fin => "fin",
            VForm::Inf => "inf",
        }
    }

    pub fn from_name(s: &str) -> Option<VForm> {
        match s {
            "fin" => Some(VForm::Fin),
            "inf" => Some(VForm::Inf),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    Lt,
    L1,
}

impl Language {
    pub fn as_str(self) -> &'static str {
        match self {
            Language::Lt => "lt",
            Language::L1 => "l1",
        }
    }
}

/// Developmental stage of an interlanguage entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    /// The L1 frame is used with the target-language form.
    Transfer,
    /// The entry has its own target-language frame.
    Distinct,
    /// Both frames are available.
    Variable,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Transfer => "transfer",
            Stage::Distinct => "distinct",
            Stage::Variable => "variable",
        }
    }

    pub fn from_name(s: &str) -> Option<Stage> {
        match s {
            "transfer" => Some(Stage::Transfer),
            "distinct" => Some(Stage::Distinct),
            "variable" => Some(Stage::Variable),
            _ => None,
        }
    }
}

/// A complement slot on a SUBCAT list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignSpec {
    pub cat: Category,
    pub level: Level,
    pub pform: Option<Symbol>,
    pub vform: Option<VForm>,
    /// Lemma constraint; this is how pseudo-idioms select their chunk.
    pub lex: Option<Symbol>,
    /// Semantic role the complement's SEM binds.
    pub role: Option<Symbol>,
    pub optional: bool,
    pub human: Option<bool>,
    /// Marks the least oblique element.
    pub subject: bool,
}

impl SignSpec {
    pub fn new(cat: Category, level: Level) -> Self {
        SignSpec {
            cat,
            level,
            pform: None,
            vform: None,
            lex: None,
            role: None,
            optional: false,
            human: None,
            subject: false,
        }
    }

    pub fn np(role: Option<Symbol>) -> Self {
        SignSpec { role, ..SignSpec::new(Category::Noun, Level::Phrase) }
    }

    pub fn pp(pform: Symbol, role: Option<Symbol>) -> Self {
        SignSpec { pform: Some(pform), role, ..SignSpec::new(Category::Prep, Level::Phrase) }
    }

    /// Short label used in diagnostics: `NP`, `PP[til]`, `N[faim]`, `(NP)`.
    pub fn summary(&self) -> String {
        let base = match (self.cat, self.level) {
            (Category::Noun, Level::Phrase) => "NP",
            (Category::Noun, _) => "N",
            (Category::Prep, Level::Phrase) => "PP",
            (Category::Prep, _) => "P",
            (Category::Verb, Level::Predicate) => "VP",
            (Category::Verb, Level::Phrase) => "S",
            (Category::Verb, Level::Word) => "V",
            (Category::Adj, _) => "ADJ",
            (Category::Adv, _) => "ADV",
            (Category::Det, _) => "DET",
        };
        let quals: Vec<&str> = [self.pform.map(|p| p.as_str()), self.lex.map(|l| l.as_str()), self.vform.map(|v| v.as_str())]
            .into_iter()
            .flatten()
            .collect();
        let mut out = base.to_string();
        if !quals.is_empty() {
            out.push('[');
            out.push_str(&quals.join(","));
            out.push(']');
        }
        if self.optional {
            out = format!("({out})");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeadInfo {
    pub cat: Category,
    pub pform: Option<Symbol>,
    pub vform: Option<VForm>,
    pub lex: Option<Symbol>,
    /// What an adjunct modifies. The spec's role binds the modified SEM.
    pub modifies: Option<Box<SignSpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemRel {
    pub reln: Symbol,
    pub roles: Vec<Symbol>,
    pub referent: bool,
    pub human: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Relation(Arc<SemRel>),
    /// The sign's SEM is that of the given SUBCAT element (case-marking
    /// prepositions).
    Complement(usize),
}

impl Semantics {
    pub fn relation(&self) -> Option<&Arc<SemRel>> {
        match self {
            Semantics::Relation(r) => Some(r),
            Semantics::Complement(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sign {
    pub phon: Symbol,
    pub head: HeadInfo,
    /// Most oblique first; the subject, if any, is last.
    pub subcat: Vec<SignSpec>,
    pub sem: Semantics,
}

impl Sign {
    /// Non-subject complements.
    pub fn complements(&self) -> &[SignSpec] {
        match self.subcat.last() {
            Some(s) if s.subject => &self.subcat[..self.subcat.len() - 1],
            _ => &self.subcat,
        }
    }

    pub fn subject(&self) -> Option<&SignSpec> {
        self.subcat.last().filter(|s| s.subject)
    }

    pub fn frame(&self) -> String {
        frame_summary(self.complements())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.phon.as_str().is_empty() {
            return Err("empty PHON".into());
        }
        if let Some(pos) = self.subcat.iter().position(|s| s.subject) {
            if pos + 1 != self.subcat.len() {
                return Err("subject must be the last SUBCAT element".into());
            }
        }
        let mut roles: Vec<Symbol> = self.subcat.iter().filter_map(|s| s.role).collect();
        if let Some(m) = self.head.modifies.as_ref().and_then(|m| m.role) {
            roles.push(m);
        }
        let mut sorted = roles.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != roles.len() {
            return Err("an index is bound by more than one SUBCAT element".into());
        }
        match &self.sem {
            Semantics::Relation(rel) => {
                if let Some(r) = roles.iter().find(|r| !rel.roles.contains(r)) {
                    return Err(format!("role {r} is not a role of {}", rel.reln));
                }
            }
            Semantics::Complement(i) => {
                if *i >= self.subcat.len() {
                    return Err("SEM refers to a missing complement".into());
                }
            }
        }
        if self.head.pform.is_some() && self.head.cat != Category::Prep {
            return Err("PFORM on a non-preposition".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntryKind {
    Verb,
    Noun,
    Pron,
    Prep,
    Adv,
    Det,
    Adj,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::Verb => "verb",
            EntryKind::Noun => "noun",
            EntryKind::Pron => "pron",
            EntryKind::Prep => "prep",
            EntryKind::Adv => "adv",
            EntryKind::Det => "det",
            EntryKind::Adj => "adj",
        }
    }
}

/// A surface form with its optional verb-form value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    pub surface: String,
    pub vform: Option<VForm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexicalEntry {
    pub lemma: Symbol,
    pub language: Language,
    pub kind: EntryKind,
    pub sign: Sign,
    pub forms: Vec<Form>,
}

impl LexicalEntry {
    /// The sign as realised by one of its forms.
    pub fn sign_for(&self, form: &Form) -> Sign {
        let mut sign = self.sign.clone();
        sign.phon = Symbol::intern(&form.surface);
        if form.vform.is_some() {
            sign.head.vform = form.vform;
        }
        sign
    }
}

/// An interlanguage entry: a target-language item and its L1 counterpart
/// sharing one meaning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilingualEntry {
    /// Target-language lemma the learner uses for the transferred item.
    pub il_lemma: Symbol,
    /// Entry supplying the surface forms of `il_lemma`.
    pub il_entry: usize,
    pub lt_entry: usize,
    pub l1_entry: usize,
    pub stage: Stage,
    pub shared_sem: Arc<SemRel>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("SYNTAX (line {line}): {msg}")]
    Syntax { line: usize, msg: String },
    #[error("UNKNOWN_KEY (line {line}): `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("MISSING_KEY (line {line}): `{key}` is required")]
    MissingKey { line: usize, key: String },
    #[error("DUPLICATE_ENTRY (line {line}): {lemma} already defined for {language}")]
    DuplicateEntry { line: usize, lemma: String, language: String },
    #[error("DANGLING_PFORM (line {line}): no {language} preposition `{pform}`")]
    DanglingPform { line: usize, pform: String, language: String },
    #[error("UNKNOWN_ROLE (line {line}): `{role}` is not a role of `{reln}`")]
    UnknownRole { line: usize, role: String, reln: String },
    #[error("UNKNOWN_FEATURE (line {line}): `{feature}`")]
    UnknownFeature { line: usize, feature: String },
    #[error("SEM_MISMATCH (line {line}): {lt} means `{lt_sem}` but {l1} means `{l1_sem}`")]
    SemMismatch { line: usize, lt: String, l1: String, lt_sem: String, l1_sem: String },
    #[error("DANGLING_LINK (line {line}): no entry for `{lemma}`")]
    DanglingLink { line: usize, lemma: String },
    #[error("UNKNOWN_ENTRY (line {line}): no {language} entry `{lemma}`")]
    UnknownEntry { line: usize, lemma: String, language: String },
    #[error("UNSUPPORTED_IDIOM (line {line}): {msg}")]
    UnsupportedIdiom { line: usize, msg: String },
    #[error("INVALID_SIGN (line {line}): {lemma}: {msg}")]
    InvalidSign { line: usize, lemma: String, msg: String },
    #[error("NO_TRANSLATION: no link for {what}")]
    NoTranslation { what: String },
    #[error("UNKNOWN_RULE: `{0}`")]
    UnknownRule(String),
}

impl LexiconError {
    pub fn code(&self) -> &'static str {
        match self {
            LexiconError::Syntax { .. } => "SYNTAX",
            LexiconError::UnknownKey { .. } => "UNKNOWN_KEY",
            LexiconError::MissingKey { .. } => "MISSING_KEY",
            LexiconError::DuplicateEntry { .. } => "DUPLICATE_ENTRY",
            LexiconError::DanglingPform { .. } => "DANGLING_PFORM",
            LexiconError::UnknownRole { .. } => "UNKNOWN_ROLE",
            LexiconError::UnknownFeature { .. } => "UNKNOWN_FEATURE",
            LexiconError::SemMismatch { .. } => "SEM_MISMATCH",
            LexiconError::DanglingLink { .. } => "DANGLING_LINK",
            LexiconError::UnknownEntry { .. } => "UNKNOWN_ENTRY",
            LexiconError::UnsupportedIdiom { .. } => "UNSUPPORTED_IDIOM",
            LexiconError::InvalidSign { .. } => "INVALID_SIGN",
            LexiconError::NoTranslation { .. } => "NO_TRANSLATION",
            LexiconError::UnknownRule(_) => "UNKNOWN_RULE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    pub lt_language: String,
    pub l1_language: String,
    /// Relation name and its roles; the first role is the one an implicit
    /// subject (or a noun's determiner, or what an adjunct modifies) binds.
    pub relations: Vec<(Symbol, Vec<Symbol>)>,
    pub entries: Vec<LexicalEntry>,
    pub bilingual: Vec<BilingualEntry>,
    /// (L1 preposition, target preposition)
    pub prep_links: Vec<(Symbol, Symbol)>,
    /// (L1 noun, target noun)
    pub noun_links: Vec<(Symbol, Symbol)>,
    mal: Vec<MalEntry>,
    warnings: Vec<String>,
}

impl Lexicon {
    pub fn entry(&self, lemma: Symbol, language: Language) -> Option<usize> {
        self.entries.iter().position(|e| e.lemma == lemma && e.language == language)
    }

    pub fn roles_of(&self, reln: Symbol) -> Option<&[Symbol]> {
        self.relations.iter().find(|(r, _)| *r == reln).map(|(_, roles)| roles.as_slice())
    }

    pub fn role_inventory(&self) -> Vec<Symbol> {
        let mut roles: Vec<Symbol> = self.relations.iter().flat_map(|(_, r)| r.iter().copied()).collect();
        roles.sort();
        roles.dedup();
        roles
    }

    pub fn feature_inventory(&self) -> FeatureInventory {
        let mut inv = geometry::base_inventory();
        for role in self.role_inventory() {
            inv.insert(geometry::role_feature(role));
        }
        inv
    }

    /// Entries of `language` with a form matching `surface`, together with
    /// the matching form. Exact matches win; otherwise forms are compared
    /// case-insensitively.
    pub fn lookup_forms(&self, surface: &str, language: Language) -> Vec<(usize, &Form)> {
        let matches = |exact: bool| -> Vec<(usize, &Form)> {
            self.entries
                .iter()
                .enumerate()
                .filter(|(_, e)| e.language == language)
                .flat_map(|(i, e)| e.forms.iter().map(move |f| (i, f)))
                .filter(|(_, f)| if exact { f.surface == surface } else { f.surface.to_lowercase() == surface.to_lowercase() })
                .collect()
        };
        let exact = matches(true);
        if exact.is_empty() {
            matches(false)
        } else {
            exact
        }
    }

    pub fn lookup(&self, surface: &str, language: Language) -> Vec<&LexicalEntry> {
        let mut seen = Vec::new();
        for (i, _) in self.lookup_forms(surface, language) {
            if !seen.contains(&i) {
                seen.push(i);
            }
        }
        seen.into_iter().map(|i| &self.entries[i]).collect()
    }

    /// Bilingual entry whose target side is entry `lt_entry`, if any.
    pub fn bilingual_for_lt(&self, lt_entry: usize) -> Option<&BilingualEntry> {
        self.bilingual.iter().find(|b| b.lt_entry == lt_entry)
    }

    /// Precompiled transferred frames, one per projectable bilingual
    /// entry.
    pub fn mal_lexicon(&self) -> &[MalEntry] {
        &self.mal
    }

    /// Non-fatal problems found at load time.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Entry and link counts, for reporting.
    pub fn counts(&self) -> LexiconCounts {
        LexiconCounts {
            lt_entries: self.entries.iter().filter(|e| e.language == Language::Lt).count(),
            l1_entries: self.entries.iter().filter(|e| e.language == Language::L1).count(),
            bilingual: self.bilingual.len(),
            prep_links: self.prep_links.len(),
            noun_links: self.noun_links.len(),
            mal_entries: self.mal.len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LexiconCounts {
    pub lt_entries: usize,
    pub l1_entries: usize,
    pub bilingual: usize,
    pub prep_links: usize,
    pub noun_links: usize,
    pub mal_entries: usize,
}

impl fmt::Display for LexiconCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lt entries: {}, l1 entries: {}, bilingual: {}, prep links: {}, noun links: {}, transferred frames: {}",
            self.lt_entries, self.l1_entries, self.bilingual, self.prep_links, self.noun_links, self.mal_entries
        )
    }
}
