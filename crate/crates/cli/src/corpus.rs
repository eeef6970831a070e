use iltransfer::diagnose::{Classification, Report, Status};

/// A corpus line: a sentence and what it is expected to yield.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusLine {
    pub line: usize,
    pub text: String,
    pub expected: Option<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub classification: Classification,
    pub lemma: Option<String>,
}

impl Expectation {
    /// Whether a report meets the expectation. A lemma matches either side
    /// of the diagnosed pair.
    pub fn met_by(&self, report: &Report) -> bool {
        if self.classification == Classification::NoDiagnosis {
            return report.status == Status::Grammatical;
        }
        report.top().any(|d| {
            d.classification == self.classification
                && self.lemma.as_ref().is_none_or(|l| {
                    d.il_lemma.as_deref() == Some(l.as_str()) || d.l1_lemma.as_deref() == Some(l.as_str())
                })
        })
    }
}

/// Parses corpus text. Blank and comment-only lines are skipped; a
/// malformed `# expect:` annotation is an error.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusLine>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (sentence, comment) = match raw.split_once('#') {
            Some((s, c)) => (s.trim(), Some(c.trim())),
            None => (raw.trim(), None),
        };
        if sentence.is_empty() {
            continue;
        }
        let expected = match comment.and_then(|c| c.strip_prefix("expect:")) {
            None => None,
            Some(rest) => {
                let mut parts = rest.split_whitespace();
                let cls = parts.next().ok_or(format!("line {line}: empty expectation"))?;
                let classification =
                    Classification::from_name(cls).ok_or(format!("line {line}: unknown classification `{cls}`"))?;
                let lemma = parts.next().map(str::to_string);
                if parts.next().is_some() {
                    return Err(format!("line {line}: expected `# expect: <classification> [lemma]`"));
                }
                Some(Expectation { classification, lemma })
            }
        };
        out.push(CorpusLine { line, text: sentence.to_string(), expected });
    }
    Ok(out)
}
