//! Diagnoses from ranked analyses, and their renderings.

mod render;

use serde::{Deserialize, Serialize};

use crate::avm::unify;
use crate::chart::{tokenize, ParseError};
use crate::repair::{RankedAnalyses, RepairConfig, RepairRecord, RepairStatus, Repairer};
use crate::signs::geometry::compile_spec;
use crate::signs::{Language, Lexicon, LexiconError, RepairKind};

pub use render::{parse_machine, MachineRecord, MachineRenderer, Renderer, Renderers, TextRenderer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    LexicalTransferSubcat,
    IdiomTransfer,
    NoDiagnosis,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::LexicalTransferSubcat => "lexical_transfer_subcat",
            Classification::IdiomTransfer => "idiom_transfer",
            Classification::NoDiagnosis => "no_diagnosis",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Classification::LexicalTransferSubcat, Classification::IdiomTransfer, Classification::NoDiagnosis]
            .into_iter()
            .find(|c| c.as_str() == s)
    }
}

impl From<RepairKind> for Classification {
    fn from(k: RepairKind) -> Self {
        match k {
            RepairKind::L1FrameSubstitution => Classification::LexicalTransferSubcat,
            RepairKind::IdiomTransfer => Classification::IdiomTransfer,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Grammatical,
    Diagnosed,
    NoAnalysis,
    EdgeCapExceeded,
    UnknownWord,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Grammatical => "grammatical",
            Status::Diagnosed => "diagnosed",
            Status::NoAnalysis => "no_analysis",
            Status::EdgeCapExceeded => "edge_cap_exceeded",
            Status::UnknownWord => "unknown_word",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnosis {
    pub sentence: String,
    /// Token span of the offending complement.
    pub span: Option<(usize, usize)>,
    pub il_lemma: Option<String>,
    pub observed_frame: Option<String>,
    pub lt_frames: Vec<String>,
    pub l1_lemma: Option<String>,
    pub l1_frame: Option<String>,
    pub classification: Classification,
    pub rank: usize,
    pub cost: u32,
    pub paraphrase: Option<String>,
    pub status: Status,
}

impl Diagnosis {
    fn well_formed(sentence: &str) -> Self {
        Diagnosis {
            sentence: sentence.to_string(),
            span: None,
            il_lemma: None,
            observed_frame: None,
            lt_frames: vec![],
            l1_lemma: None,
            l1_frame: None,
            classification: Classification::NoDiagnosis,
            rank: 1,
            cost: 0,
            paraphrase: None,
            status: Status::Grammatical,
        }
    }
}

/// Everything said about one sentence.
#[derive(Clone, Debug)]
pub struct Report {
    pub sentence: String,
    pub status: Status,
    pub diagnoses: Vec<Diagnosis>,
    /// Error text for unknown words.
    pub error: Option<String>,
    pub analyses: Option<RankedAnalyses>,
}

impl Report {
    pub fn top(&self) -> impl Iterator<Item = &Diagnosis> {
        self.diagnoses.iter().filter(|d| d.rank == 1)
    }
}

/// Frames of the target-language entries a token can realise.
fn target_frames(lexicon: &Lexicon, token: &str) -> Vec<String> {
    let mut frames: Vec<String> = Vec::new();
    for e in lexicon.lookup(token, Language::Lt) {
        let f = e.sign.frame();
        if !frames.contains(&f) {
            frames.push(f);
        }
    }
    frames
}

/// Replaces the offending complement by its largest part that fits the
/// target frame; kept only if the result parses strictly.
fn paraphrase(rec: &RepairRecord, analyses: &RankedAnalyses, lexicon: &Lexicon, repairer: &Repairer) -> Option<String> {
    if rec.kind != RepairKind::L1FrameSubstitution {
        return None;
    }
    let chart = &analyses.repaired.as_ref()?.chart;
    let lt = &lexicon.entries[lexicon.bilingual[rec.bilingual].lt_entry];
    let specs: Vec<_> = lt.sign.complements().iter().map(compile_spec).collect();
    let (s, e) = rec.span;
    let best = chart
        .edges
        .iter()
        .filter(|x| x.start >= s && x.end <= e && (x.start, x.end) != (s, e) && x.cost == 0)
        .filter(|x| specs.iter().any(|spec| unify(spec, &x.sign).is_some()))
        .max_by_key(|x| (x.end - x.start, std::cmp::Reverse(x.start)))?;
    let tokens = &chart.tokens;
    let candidate: Vec<String> =
        tokens[..s].iter().chain(&tokens[best.start..best.end]).chain(&tokens[e..]).cloned().collect();
    let strict = repairer.strict_parser().parse(&candidate, &Default::default()).ok()?;
    strict.parsed().then(|| candidate.join(" "))
}

/// Diagnoses sentences against one lexicon.
pub struct Diagnoser<'l> {
    lexicon: &'l Lexicon,
    repairer: Repairer,
    pub config: RepairConfig,
}

impl<'l> Diagnoser<'l> {
    pub fn new(lexicon: &'l Lexicon, config: RepairConfig) -> Result<Self, LexiconError> {
        Ok(Diagnoser { lexicon, repairer: Repairer::new(lexicon)?, config })
    }

    pub fn repairer(&self) -> &Repairer {
        &self.repairer
    }

    pub fn diagnose_tokens(&self, sentence: &str, tokens: &[String]) -> Result<Report, ParseError> {
        let analyses = self.repairer.repair_parse(tokens, &self.config)?;
        let mut diagnoses = Vec::new();
        let status = match analyses.status {
            RepairStatus::Grammatical => {
                diagnoses.push(Diagnosis::well_formed(sentence));
                Status::Grammatical
            }
            RepairStatus::NoAnalysis => Status::NoAnalysis,
            RepairStatus::EdgeCapExceeded => Status::EdgeCapExceeded,
            RepairStatus::Repaired => Status::Diagnosed,
        };
        if status != Status::Grammatical {
            for (i, a) in analyses.analyses.iter().enumerate() {
                for rec in &a.repairs {
                    diagnoses.push(Diagnosis {
                        sentence: sentence.to_string(),
                        span: Some(rec.span),
                        il_lemma: Some(rec.il_lemma.to_string()),
                        observed_frame: rec.observed.clone(),
                        lt_frames: target_frames(self.lexicon, &tokens[rec.head.0]),
                        l1_lemma: Some(rec.l1_lemma.to_string()),
                        l1_frame: Some(rec.l1_frame.clone()),
                        classification: rec.kind.into(),
                        rank: i + 1,
                        cost: a.cost,
                        paraphrase: paraphrase(rec, &analyses, self.lexicon, &self.repairer),
                        status,
                    });
                }
            }
        }
        Ok(Report { sentence: sentence.to_string(), status, diagnoses, error: None, analyses: Some(analyses) })
    }

    /// Never fails: unknown words become a status.
    pub fn report(&self, sentence: &str) -> Report {
        let tokens = tokenize(sentence);
        match self.diagnose_tokens(sentence, &tokens) {
            Ok(r) => r,
            Err(e) => Report {
                sentence: sentence.to_string(),
                status: Status::UnknownWord,
                diagnoses: vec![],
                error: Some(e.to_string()),
                analyses: None,
            },
        }
    }
}

/// One-shot diagnosis of a tokenised sentence.
pub fn diagnose(tokens: &[String], lexicon: &Lexicon, config: &RepairConfig) -> Result<Report, ParseError> {
    Diagnoser::new(lexicon, *config)?.diagnose_tokens(&tokens.join(" "), tokens)
}
