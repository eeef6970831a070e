use super::{Category, EntryKind, Level, LexicalEntry, Lexicon, LexiconError, SignSpec};
use crate::avm::Symbol;

/// A lexical rule maps an entry to zero or more derived entries.
pub trait LexicalRule: Send + Sync {
    fn id(&self) -> &'static str;
    fn apply(&self, entry: &LexicalEntry, lexicon: &Lexicon) -> Result<Vec<LexicalEntry>, LexiconError>;
}

/// Human direct objects surface as PPs headed by `a`: a verb whose most
/// oblique complement is a +human NP gets a variant with that slot
/// replaced by PP[a], same role.
pub struct HumanObjectPp;

impl LexicalRule for HumanObjectPp {
    fn id(&self) -> &'static str {
        "es-human-object-pp"
    }

    fn apply(&self, entry: &LexicalEntry, lexicon: &Lexicon) -> Result<Vec<LexicalEntry>, LexiconError> {
        if entry.kind != EntryKind::Verb {
            return Ok(vec![]);
        }
        let matches = entry.sign.complements().first().is_some_and(|s| {
            s.cat == Category::Noun && s.level == Level::Phrase && s.human == Some(true) && s.lex.is_none()
        });
        if !matches {
            return Ok(vec![]);
        }
        let a = Symbol::intern("a");
        let has_prep = lexicon
            .entries
            .iter()
            .any(|e| e.kind == EntryKind::Prep && e.lemma == a && e.language == entry.language);
        if !has_prep {
            return Err(LexiconError::DanglingPform {
                line: 0,
                pform: "a".into(),
                language: entry.language.as_str().into(),
            });
        }
        let mut out = entry.clone();
        let old = &entry.sign.subcat[0];
        out.sign.subcat[0] = SignSpec { pform: Some(a), optional: old.optional, human: old.human, ..SignSpec::pp(a, old.role) };
        Ok(vec![out])
    }
}

/// Lexical rules by id.
pub struct LexicalRules {
    rules: Vec<Box<dyn LexicalRule>>,
}

impl Default for LexicalRules {
    fn default() -> Self {
        let mut r = LexicalRules { rules: Vec::new() };
        r.register(Box::new(HumanObjectPp));
        r
    }
}

impl LexicalRules {
    pub fn empty() -> Self {
        LexicalRules { rules: Vec::new() }
    }

    pub fn register(&mut self, rule: Box<dyn LexicalRule>) {
        self.rules.retain(|r| r.id() != rule.id());
        self.rules.push(rule);
    }

    pub fn get(&self, id: &str) -> Option<&dyn LexicalRule> {
        self.rules.iter().find(|r| r.id() == id).map(|r| r.as_ref())
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.rules.iter().map(|r| r.id())
    }
}

/// Applies the registered rule `rule_id` to `entry`.
pub fn apply_lexical_rule(rule_id: &str, entry: &LexicalEntry, lexicon: &Lexicon) -> Result<Vec<LexicalEntry>, LexiconError> {
    let rules = LexicalRules::default();
    let rule = rules.get(rule_id).ok_or_else(|| LexiconError::UnknownRule(rule_id.to_string()))?;
    rule.apply(entry, lexicon)
}
