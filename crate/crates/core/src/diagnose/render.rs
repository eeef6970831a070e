use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Classification, Diagnosis, Report, Status};

pub trait Renderer: Send + Sync {
    fn name(&self) -> &'static str;
    /// Rendering of one report, newline-terminated.
    fn render(&self, report: &Report) -> String;
}

/// The line format. Sentence-level records (no analysis, unknown word)
/// leave the per-diagnosis fields null.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineRecord {
    pub sentence: String,
    pub span_start: Option<usize>,
    pub span_end: Option<usize>,
    pub il_lemma: Option<String>,
    pub observed_frame: Option<String>,
    pub lt_frames: Vec<String>,
    pub l1_lemma: Option<String>,
    pub l1_frame: Option<String>,
    pub classification: Option<Classification>,
    pub rank: Option<usize>,
    pub cost: Option<u32>,
    pub paraphrase: Option<String>,
    pub status: Status,
}

impl From<&Diagnosis> for MachineRecord {
    fn from(d: &Diagnosis) -> Self {
        MachineRecord {
            sentence: d.sentence.clone(),
            span_start: d.span.map(|s| s.0),
            span_end: d.span.map(|s| s.1),
            il_lemma: d.il_lemma.clone(),
            observed_frame: d.observed_frame.clone(),
            lt_frames: d.lt_frames.clone(),
            l1_lemma: d.l1_lemma.clone(),
            l1_frame: d.l1_frame.clone(),
            classification: Some(d.classification),
            rank: Some(d.rank),
            cost: Some(d.cost),
            paraphrase: d.paraphrase.clone(),
            status: d.status,
        }
    }
}

impl MachineRecord {
    fn sentence_only(sentence: &str, status: Status) -> Self {
        MachineRecord {
            sentence: sentence.to_string(),
            span_start: None,
            span_end: None,
            il_lemma: None,
            observed_frame: None,
            lt_frames: vec![],
            l1_lemma: None,
            l1_frame: None,
            classification: None,
            rank: None,
            cost: None,
            paraphrase: None,
            status,
        }
    }

    /// The diagnosis this record carries, if it is not sentence-level.
    pub fn diagnosis(&self) -> Option<Diagnosis> {
        let span = match (self.span_start, self.span_end) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        Some(Diagnosis {
            sentence: self.sentence.clone(),
            span,
            il_lemma: self.il_lemma.clone(),
            observed_frame: self.observed_frame.clone(),
            lt_frames: self.lt_frames.clone(),
            l1_lemma: self.l1_lemma.clone(),
            l1_frame: self.l1_frame.clone(),
            classification: self.classification?,
            rank: self.rank?,
            cost: self.cost?,
            paraphrase: self.paraphrase.clone(),
            status: self.status,
        })
    }
}

/// Reads machine output back, one record per non-empty line.
pub fn parse_machine(text: &str) -> Result<Vec<MachineRecord>, serde_json::Error> {
    text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}

pub struct MachineRenderer;

impl Renderer for MachineRenderer {
    fn name(&self) -> &'static str {
        "machine"
    }

    fn render(&self, report: &Report) -> String {
        let records: Vec<MachineRecord> = if report.diagnoses.is_empty() {
            vec![MachineRecord::sentence_only(&report.sentence, report.status)]
        } else {
            report.diagnoses.iter().map(MachineRecord::from).collect()
        };
        let mut out = String::new();
        for r in records {
            out.push_str(&serde_json::to_string(&r).expect("records serialise"));
            out.push('\n');
        }
        out
    }
}

pub struct TextRenderer;

fn describe(d: &Diagnosis, out: &mut String) {
    let kind = match d.classification {
        Classification::LexicalTransferSubcat => "complement frame carried over from the first language",
        Classification::IdiomTransfer => "first-language idiom rendered word for word",
        Classification::NoDiagnosis => "no error found",
    };
    let il = d.il_lemma.as_deref().unwrap_or("?");
    let observed = d.observed_frame.as_deref().unwrap_or("an unexpected complement");
    let _ = write!(out, "  #{} (cost {}) {kind}: `{il}` is used with {observed}", d.rank, d.cost);
    if let Some((a, b)) = d.span {
        let _ = write!(out, " (tokens {a}-{b})");
    }
    if !d.lt_frames.is_empty() {
        let _ = write!(out, ", but the target language wants {}", d.lt_frames.join(" or "));
    }
    let _ = write!(
        out,
        ". This matches `{}` {} in the first language.",
        d.l1_lemma.as_deref().unwrap_or("?"),
        d.l1_frame.as_deref().unwrap_or("?")
    );
    if let Some(p) = &d.paraphrase {
        let _ = write!(out, " Try: \"{p}\".");
    }
    out.push('\n');
}

impl Renderer for TextRenderer {
    fn name(&self) -> &'static str {
        "text"
    }

    fn render(&self, report: &Report) -> String {
        let mut out = format!("\"{}\": ", report.sentence);
        match report.status {
            Status::Grammatical => out.push_str("well-formed, nothing to report.\n"),
            Status::NoAnalysis => out.push_str("no analysis, even with first-language frames.\n"),
            Status::EdgeCapExceeded => out.push_str("chart limit reached; try a larger --edge-cap.\n"),
            Status::UnknownWord => {
                let _ = writeln!(out, "{}", report.error.as_deref().unwrap_or("unknown word"));
            }
            Status::Diagnosed => {
                out.push_str("not well-formed.\n");
                for d in &report.diagnoses {
                    describe(d, &mut out);
                }
            }
        }
        out
    }
}

/// Renderers by name.
pub struct Renderers {
    renderers: Vec<Box<dyn Renderer>>,
}

impl Default for Renderers {
    fn default() -> Self {
        let mut r = Renderers { renderers: Vec::new() };
        r.register(Box::new(TextRenderer));
        r.register(Box::new(MachineRenderer));
        r
    }
}

impl Renderers {
    pub fn register(&mut self, renderer: Box<dyn Renderer>) {
        self.renderers.retain(|r| r.name() != renderer.name());
        self.renderers.push(renderer);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Renderer> {
        self.renderers.iter().find(|r| r.name() == name).map(|r| r.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.renderers.iter().map(|r| r.name())
    }
}
