use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BilingualEntry, Category, Form, Lexicon, LexiconError, Semantics, Sign, SignSpec, Stage};
use crate::avm::Symbol;

/// `⟨PP[a]⟩`, `⟨NP, VP[inf]⟩`, `⟨⟩`.
pub fn frame_summary(specs: &[SignSpec]) -> String {
    let parts: Vec<String> = specs.iter().map(SignSpec::summary).collect();
    format!("⟨{}⟩", parts.join(", "))
}

/// Re-expresses an L1 complement spec in target-language orthography.
pub fn translate_spec(spec: &SignSpec, lexicon: &Lexicon) -> Result<SignSpec, LexiconError> {
    let mut out = spec.clone();
    if let Some(p) = spec.pform {
        out.pform = Some(
            lexicon
                .prep_links
                .iter()
                .find(|(l1, _)| *l1 == p)
                .map(|(_, lt)| *lt)
                .ok_or_else(|| LexiconError::NoTranslation { what: format!("preposition `{p}`") })?,
        );
    }
    if let Some(l) = spec.lex {
        let link = match spec.cat {
            Category::Noun => lexicon.noun_links.iter().find(|(l1, _)| *l1 == l).map(|(_, lt)| *lt),
            _ => None,
        };
        out.lex = Some(link.ok_or_else(|| LexiconError::NoTranslation { what: format!("lexeme `{l}`") })?);
    }
    Ok(out)
}

/// The sign a learner at the transfer stage uses: target form, translated
/// L1 frame, shared meaning.
pub(crate) fn transfer_sign(entry: &BilingualEntry, lexicon: &Lexicon) -> Result<Sign, LexiconError> {
    let l1 = &lexicon.entries[entry.l1_entry].sign;
    let lt = &lexicon.entries[entry.lt_entry].sign;
    let subcat = l1.subcat.iter().map(|s| translate_spec(s, lexicon)).collect::<Result<Vec<_>, _>>()?;
    let mut head = lt.head.clone();
    head.lex = Some(entry.il_lemma);
    Ok(Sign { phon: entry.il_lemma, head, subcat, sem: Semantics::Relation(entry.shared_sem.clone()) })
}

pub(crate) fn distinct_sign(entry: &BilingualEntry, lexicon: &Lexicon) -> Sign {
    let mut sign = lexicon.entries[entry.lt_entry].sign.clone();
    sign.sem = Semantics::Relation(entry.shared_sem.clone());
    sign
}

/// Signs and their surface forms for one bilingual entry at a stage.
pub(crate) fn project_with_forms<'l>(
    entry: &BilingualEntry,
    stage: Stage,
    lexicon: &'l Lexicon,
) -> Result<Vec<(Sign, &'l [Form])>, LexiconError> {
    let transfer = || -> Result<(Sign, &'l [Form]), LexiconError> {
        Ok((transfer_sign(entry, lexicon)?, lexicon.entries[entry.il_entry].forms.as_slice()))
    };
    let distinct = || (distinct_sign(entry, lexicon), lexicon.entries[entry.lt_entry].forms.as_slice());
    Ok(match stage {
        Stage::Transfer => vec![transfer()?],
        Stage::Distinct => vec![distinct()],
        Stage::Variable => vec![transfer()?, distinct()],
    })
}

/// Interlanguage signs for `entry` at its own stage.
pub fn project_il_signs(entry: &BilingualEntry, lexicon: &Lexicon) -> Result<Vec<Sign>, LexiconError> {
    project_at(entry, entry.stage, lexicon)
}

pub(crate) fn project_at(entry: &BilingualEntry, stage: Stage, lexicon: &Lexicon) -> Result<Vec<Sign>, LexiconError> {
    Ok(project_with_forms(entry, stage, lexicon)?.into_iter().map(|(s, _)| s).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum RepairKind {
    L1FrameSubstitution,
    IdiomTransfer,
}

/// What a transferred frame hypothesises, computed once per bilingual
/// entry and stamped onto every chart edge built from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairTemplate {
    pub kind: RepairKind,
    pub bilingual: usize,
    pub il_lemma: Symbol,
    pub l1_lemma: Symbol,
    /// L1 frame in L1 orthography, e.g. `⟨PP[a]⟩`.
    pub l1_frame: String,
    /// The same frame translated, e.g. `⟨PP[til]⟩`.
    pub transferred_frame: String,
    /// Frame of the target-language entry, e.g. `⟨NP⟩`.
    pub lt_frame: String,
    /// First SUBCAT position where the transferred frame departs from the
    /// target frame.
    pub diff: Option<usize>,
    /// Lemma constraints of the L1 frame (idiom chunks).
    pub chunks: Vec<Symbol>,
}

impl fmt::Display for RepairTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.l1_lemma)?;
        if !self.chunks.is_empty() {
            let chunks: Vec<&str> = self.chunks.iter().map(|c| c.as_str()).collect();
            write!(f, "({})", chunks.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MalEntry {
    pub lemma: Symbol,
    pub sign: Sign,
    pub forms: Vec<Form>,
    pub template: RepairTemplate,
}

fn same_slot(a: &SignSpec, b: &SignSpec) -> bool {
    a.cat == b.cat && a.level == b.level && a.pform == b.pform && a.lex == b.lex && a.vform == b.vform
}

/// Builds the transferred frames for every bilingual entry. Entries whose
/// L1 frame cannot be expressed in the target language are skipped with a
/// warning.
pub(crate) fn build_mal_lexicon(lexicon: &Lexicon) -> (Vec<MalEntry>, Vec<String>) {
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    for (bi, entry) in lexicon.bilingual.iter().enumerate() {
        let sign = match transfer_sign(entry, lexicon) {
            Ok(s) => s,
            Err(e) => {
                warnings.push(format!("bilingual {} <-> {}: {e}", entry.il_lemma, lexicon.entries[entry.l1_entry].lemma));
                continue;
            }
        };
        let l1 = &lexicon.entries[entry.l1_entry];
        let lt = &lexicon.entries[entry.lt_entry];
        let chunks: Vec<Symbol> = l1.sign.complements().iter().filter_map(|s| s.lex).collect();
        let kind = if chunks.is_empty() { RepairKind::L1FrameSubstitution } else { RepairKind::IdiomTransfer };
        let ours = sign.complements();
        let theirs = lt.sign.complements();
        let diff = (0..ours.len().max(theirs.len())).find(|&i| match (ours.get(i), theirs.get(i)) {
            (Some(a), Some(b)) => !same_slot(a, b),
            _ => true,
        });
        let diff = diff.filter(|&i| i < ours.len());
        out.push(MalEntry {
            lemma: entry.il_lemma,
            forms: lexicon.entries[entry.il_entry].forms.clone(),
            template: RepairTemplate {
                kind,
                bilingual: bi,
                il_lemma: entry.il_lemma,
                l1_lemma: l1.lemma,
                l1_frame: l1.sign.frame(),
                transferred_frame: sign.frame(),
                lt_frame: lt.sign.frame(),
                diff,
                chunks,
            },
            sign,
        });
    }
    (out, warnings)
}
