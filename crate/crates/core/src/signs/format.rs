//! Line-oriented lexicon format. See `docs/lexicon-format.md` for the
//! grammar; the printer emits the canonical form of everything the reader
//! accepts.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use super::geometry;
use super::transfer::build_mal_lexicon;
use super::{
    BilingualEntry, Category, EntryKind, Form, HeadInfo, Language, Level, LexicalEntry, Lexicon, LexiconError, SemRel,
    Semantics, Sign, SignSpec, Stage, VForm,
};
use crate::avm::Symbol;

type Result<T> = std::result::Result<T, LexiconError>;

fn syntax<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(LexiconError::Syntax { line, msg: msg.into() })
}

/// Splits on whitespace outside `(...)` and `[...]`.
fn tokenize(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for c in line.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c.is_whitespace() && depth <= 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn spec_shape(name: &str) -> Option<(Category, Level)> {
    Some(match name {
        "np" => (Category::Noun, Level::Phrase),
        "n" => (Category::Noun, Level::Word),
        "pp" => (Category::Prep, Level::Phrase),
        "p" => (Category::Prep, Level::Word),
        "vp" => (Category::Verb, Level::Predicate),
        "s" => (Category::Verb, Level::Phrase),
        "v" => (Category::Verb, Level::Word),
        "adj" => (Category::Adj, Level::Word),
        "adv" => (Category::Adv, Level::Word),
        "det" => (Category::Det, Level::Word),
        _ => return None,
    })
}

fn spec_name(cat: Category, level: Level) -> &'static str {
    match (cat, level) {
        (Category::Noun, Level::Phrase) => "np",
        (Category::Noun, _) => "n",
        (Category::Prep, Level::Phrase) => "pp",
        (Category::Prep, _) => "p",
        (Category::Verb, Level::Predicate) => "vp",
        (Category::Verb, Level::Phrase) => "s",
        (Category::Verb, Level::Word) => "v",
        (Category::Adj, _) => "adj",
        (Category::Adv, _) => "adv",
        (Category::Det, _) => "det",
    }
}

/// Parses one complement, e.g. `pp[a]:theme +human` or `n[lex=faim]`.
fn parse_spec(text: &str, line: usize) -> Result<SignSpec> {
    let mut parts = text.split_whitespace();
    let head = match parts.next() {
        Some(h) => h,
        None => return syntax(line, "empty complement"),
    };
    let (shape, role) = match head.rsplit_once(':') {
        Some((s, r)) if !r.contains(']') => (s, Some(r)),
        _ => (head, None),
    };
    let (name, quals) = match shape.find('[') {
        Some(i) => {
            if !shape.ends_with(']') {
                return syntax(line, format!("unclosed `[` in `{head}`"));
            }
            (&shape[..i], Some(&shape[i + 1..shape.len() - 1]))
        }
        None => (shape, None),
    };
    let (cat, level) = match spec_shape(name) {
        Some(s) => s,
        None => return syntax(line, format!("unknown complement category `{name}`")),
    };
    let mut spec = SignSpec::new(cat, level);
    if let Some(r) = role {
        if r.is_empty() {
            return syntax(line, format!("empty role in `{head}`"));
        }
        spec.role = Some(Symbol::intern(r));
    }
    for q in quals.into_iter().flat_map(|q| q.split(',')).map(str::trim).filter(|q| !q.is_empty()) {
        let (key, value) = match q.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match cat {
                Category::Prep => ("pform", q),
                Category::Verb => ("vform", q),
                _ => return Err(LexiconError::UnknownFeature { line, feature: q.into() }),
            },
        };
        match key {
            "pform" if cat == Category::Prep => spec.pform = Some(Symbol::intern(value)),
            "vform" if cat == Category::Verb => match VForm::from_name(value) {
                Some(v) => spec.vform = Some(v),
                None => return syntax(line, format!("unknown verb form `{value}`")),
            },
            "lex" => spec.lex = Some(Symbol::intern(value)),
            _ => return Err(LexiconError::UnknownFeature { line, feature: key.into() }),
        }
    }
    if spec.lex.is_some() {
        let pseudo = matches!((cat, level), (Category::Noun, Level::Word) | (Category::Adj, _));
        if !pseudo {
            return Err(LexiconError::UnsupportedIdiom {
                line,
                msg: format!("lemma constraint on `{name}`; only bare nominal or adjectival chunks are supported"),
            });
        }
    }
    for flag in parts {
        match flag {
            "+human" => spec.human = Some(true),
            "-human" => spec.human = Some(false),
            "opt" => spec.optional = true,
            _ => return Err(LexiconError::UnknownKey { line, key: flag.into() }),
        }
    }
    Ok(spec)
}

fn print_spec(spec: &SignSpec) -> String {
    let mut out = spec_name(spec.cat, spec.level).to_string();
    let mut quals = Vec::new();
    if let Some(p) = spec.pform {
        quals.push(p.to_string());
    }
    if let Some(v) = spec.vform {
        quals.push(v.as_str().to_string());
    }
    if let Some(l) = spec.lex {
        quals.push(format!("lex={l}"));
    }
    if !quals.is_empty() {
        let _ = write!(out, "[{}]", quals.join(","));
    }
    if let Some(r) = spec.role {
        let _ = write!(out, ":{r}");
    }
    match spec.human {
        Some(true) => out.push_str(" +human"),
        Some(false) => out.push_str(" -human"),
        None => {}
    }
    if spec.optional {
        out.push_str(" opt");
    }
    out
}

fn parse_subcat(value: &str, line: usize) -> Result<Vec<SignSpec>> {
    let inner = match value.strip_prefix('(').and_then(|v| v.strip_suffix(')')) {
        Some(i) => i.trim(),
        None => return syntax(line, "subcat must be parenthesised"),
    };
    if inner.is_empty() {
        return Ok(vec![]);
    }
    split_top(inner, ',').into_iter().map(|s| parse_spec(s.trim(), line)).collect()
}

fn parse_forms(value: &str, line: usize) -> Result<Vec<Form>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .map(|f| match f.split_once(':') {
            Some((surface, v)) => match VForm::from_name(v) {
                Some(vf) => Ok(Form { surface: surface.to_string(), vform: Some(vf) }),
                None => syntax(line, format!("unknown verb form `{v}` on `{surface}`")),
            },
            None => Ok(Form { surface: f.to_string(), vform: None }),
        })
        .collect()
}

fn parse_language(value: &str, line: usize) -> Result<Language> {
    match value {
        "lt" => Ok(Language::Lt),
        "l1" => Ok(Language::L1),
        _ => syntax(line, format!("language must be `lt` or `l1`, got `{value}`")),
    }
}

struct RawEntry {
    line: usize,
    kind: EntryKind,
    lemma: Symbol,
    language: Language,
    subcat: Vec<SignSpec>,
    modifies: Option<SignSpec>,
    sem: Option<Symbol>,
    forms: Vec<Form>,
    det: bool,
    human: Option<bool>,
}

struct RawLink {
    line: usize,
    kind: EntryKind,
    from: Symbol,
    to: Symbol,
}

struct RawBilingual {
    line: usize,
    lt: Symbol,
    l1: Symbol,
    il: Option<Symbol>,
    stage: Stage,
}

fn entry_kind(word: &str) -> Option<EntryKind> {
    Some(match word {
        "verb" => EntryKind::Verb,
        "noun" => EntryKind::Noun,
        "pron" => EntryKind::Pron,
        "prep" => EntryKind::Prep,
        "adv" => EntryKind::Adv,
        "det" => EntryKind::Det,
        "adj" => EntryKind::Adj,
        _ => return None,
    })
}

fn parse_entry(kind: EntryKind, tokens: &[String], line: usize) -> Result<RawEntry> {
    let lemma = match tokens.first() {
        Some(l) if !l.contains('=') => Symbol::intern(l),
        _ => return syntax(line, "expected a lemma"),
    };
    let mut raw = RawEntry {
        line,
        kind,
        lemma,
        language: Language::Lt,
        subcat: vec![],
        modifies: None,
        sem: None,
        forms: vec![],
        det: false,
        human: None,
    };
    let mut have_lang = false;
    for tok in &tokens[1..] {
        match tok.split_once('=') {
            Some(("lang", v)) => {
                raw.language = parse_language(v, line)?;
                have_lang = true;
            }
            Some(("forms", v)) => raw.forms = parse_forms(v, line)?,
            Some(("sem", v)) if kind != EntryKind::Prep => raw.sem = Some(Symbol::intern(v)),
            Some(("subcat", v)) if kind == EntryKind::Verb => raw.subcat = parse_subcat(v, line)?,
            Some(("mod", v)) if kind == EntryKind::Adv => raw.modifies = Some(parse_spec(v, line)?),
            Some((k, _)) => return Err(LexiconError::UnknownKey { line, key: k.into() }),
            None => match (kind, tok.as_str()) {
                (EntryKind::Noun, "det") => raw.det = true,
                (EntryKind::Noun, "proper") => raw.det = false,
                (EntryKind::Noun | EntryKind::Pron | EntryKind::Det, "human") => raw.human = Some(true),
                (EntryKind::Noun | EntryKind::Pron | EntryKind::Det, "nonhuman") => raw.human = Some(false),
                _ => return Err(LexiconError::UnknownKey { line, key: tok.clone() }),
            },
        }
    }
    if !have_lang {
        return Err(LexiconError::MissingKey { line, key: "lang".into() });
    }
    if kind == EntryKind::Adv && raw.modifies.is_none() {
        return Err(LexiconError::MissingKey { line, key: "mod".into() });
    }
    if raw.forms.is_empty() {
        raw.forms.push(Form { surface: lemma.to_string(), vform: None });
    }
    Ok(raw)
}

fn build_sign(raw: &RawEntry, relations: &[(Symbol, Vec<Symbol>)]) -> Result<Sign> {
    let line = raw.line;
    let reln = raw.sem.unwrap_or(raw.lemma);
    let roles: Vec<Symbol> = relations.iter().find(|(r, _)| *r == reln).map(|(_, r)| r.clone()).unwrap_or_default();
    let check_role = |spec: &SignSpec| -> Result<()> {
        match spec.role {
            Some(r) if !roles.contains(&r) => {
                Err(LexiconError::UnknownRole { line, role: r.to_string(), reln: reln.to_string() })
            }
            _ => Ok(()),
        }
    };
    let relation = |referent: bool, human: Option<bool>| {
        Semantics::Relation(Arc::new(SemRel { reln, roles: roles.clone(), referent, human }))
    };
    let head = |cat: Category| HeadInfo { cat, pform: None, vform: None, lex: Some(raw.lemma), modifies: None };
    let first_role = roles.first().copied();

    let sign = match raw.kind {
        EntryKind::Verb => {
            let mut subcat = raw.subcat.clone();
            for s in &subcat {
                check_role(s)?;
            }
            let mut subj = SignSpec::np(first_role);
            subj.subject = true;
            subcat.push(subj);
            Sign { phon: raw.lemma, head: head(Category::Verb), subcat, sem: relation(false, None) }
        }
        EntryKind::Noun | EntryKind::Pron => {
            let subcat = if raw.det {
                vec![SignSpec { role: first_role, subject: true, ..SignSpec::new(Category::Det, Level::Word) }]
            } else {
                vec![]
            };
            Sign { phon: raw.lemma, head: head(Category::Noun), subcat, sem: relation(true, raw.human) }
        }
        EntryKind::Det => Sign { phon: raw.lemma, head: head(Category::Det), subcat: vec![], sem: relation(true, raw.human) },
        EntryKind::Adj => Sign { phon: raw.lemma, head: head(Category::Adj), subcat: vec![], sem: relation(false, None) },
        EntryKind::Adv => {
            let mut m = raw.modifies.clone().expect("checked at parse");
            if m.role.is_some() {
                check_role(&m)?;
            } else {
                m.role = first_role;
            }
            let mut h = head(Category::Adv);
            h.modifies = Some(Box::new(m));
            Sign { phon: raw.lemma, head: h, subcat: vec![], sem: relation(false, None) }
        }
        EntryKind::Prep => {
            let mut h = head(Category::Prep);
            h.pform = Some(raw.lemma);
            Sign { phon: raw.lemma, head: h, subcat: vec![SignSpec::np(None)], sem: Semantics::Complement(0) }
        }
    };
    sign.validate().map_err(|msg| LexiconError::InvalidSign { line, lemma: raw.lemma.to_string(), msg })?;
    Ok(sign)
}

/// Parses and validates a lexicon.
pub fn load_lexicon(source: &str) -> Result<Lexicon> {
    let mut languages: Option<(String, String)> = None;
    let mut relations: Vec<(Symbol, Vec<Symbol>)> = Vec::new();
    let mut raws: Vec<RawEntry> = Vec::new();
    let mut links: Vec<RawLink> = Vec::new();
    let mut pairs: Vec<RawBilingual> = Vec::new();

    for (i, text) in source.lines().enumerate() {
        let line = i + 1;
        let text = text.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let tokens = tokenize(text);
        let (word, rest) = (tokens[0].as_str(), &tokens[1..]);
        match word {
            "languages" => {
                let (mut lt, mut l1) = (None, None);
                for tok in rest {
                    match tok.split_once('=') {
                        Some(("lt", v)) => lt = Some(v.to_string()),
                        Some(("l1", v)) => l1 = Some(v.to_string()),
                        _ => return Err(LexiconError::UnknownKey { line, key: tok.clone() }),
                    }
                }
                match (lt, l1) {
                    (Some(lt), Some(l1)) => languages = Some((lt, l1)),
                    (None, _) => return Err(LexiconError::MissingKey { line, key: "lt".into() }),
                    (_, None) => return Err(LexiconError::MissingKey { line, key: "l1".into() }),
                }
            }
            "roles" => {
                let joined = rest.join(" ");
                let (reln, roles) = match joined.split_once(':') {
                    Some((r, roles)) if !r.trim().is_empty() => (r.trim(), roles),
                    _ => return syntax(line, "expected `roles <relation>: <role>...`"),
                };
                let reln = Symbol::intern(reln);
                if relations.iter().any(|(r, _)| *r == reln) {
                    return syntax(line, format!("roles of `{reln}` declared twice"));
                }
                let roles: Vec<Symbol> = roles.split_whitespace().map(Symbol::intern).collect();
                relations.push((reln, roles));
            }
            "link" => {
                let kind = match rest.first().map(String::as_str) {
                    Some("prep") => EntryKind::Prep,
                    Some("noun") => EntryKind::Noun,
                    _ => return syntax(line, "expected `link prep|noun <l1> -> <lt>`"),
                };
                match rest {
                    [_, from, arrow, to] if arrow == "->" => {
                        links.push(RawLink { line, kind, from: Symbol::intern(from), to: Symbol::intern(to) })
                    }
                    _ => return syntax(line, "expected `link prep|noun <l1> -> <lt>`"),
                }
            }
            "bilingual" => {
                let (lt, l1, opts) = match rest {
                    [lt, arrow, l1, opts @ ..] if arrow == "<->" => (lt, l1, opts),
                    _ => return syntax(line, "expected `bilingual <lt> <-> <l1> stage=...`"),
                };
                let (mut il, mut stage) = (None, None);
                for tok in opts {
                    match tok.split_once('=') {
                        Some(("il", v)) => il = Some(Symbol::intern(v)),
                        Some(("stage", v)) => match Stage::from_name(v) {
                            Some(s) => stage = Some(s),
                            None => return syntax(line, format!("unknown stage `{v}`")),
                        },
                        _ => return Err(LexiconError::UnknownKey { line, key: tok.clone() }),
                    }
                }
                let stage = stage.ok_or(LexiconError::MissingKey { line, key: "stage".into() })?;
                pairs.push(RawBilingual { line, lt: Symbol::intern(lt), l1: Symbol::intern(l1), il, stage });
            }
            "idiom" => {
                return Err(LexiconError::UnsupportedIdiom {
                    line,
                    msg: "fixed multi-word idioms are not supported; express pseudo-idioms as lemma-constrained complements".into(),
                })
            }
            w => match entry_kind(w) {
                Some(kind) => raws.push(parse_entry(kind, rest, line)?),
                None => return Err(LexiconError::UnknownKey { line, key: w.into() }),
            },
        }
    }

    let (lt_language, l1_language) = languages.ok_or(LexiconError::MissingKey { line: 0, key: "languages".into() })?;

    let mut entries: Vec<LexicalEntry> = Vec::with_capacity(raws.len());
    for raw in &raws {
        if entries.iter().any(|e| e.lemma == raw.lemma && e.language == raw.language) {
            return Err(LexiconError::DuplicateEntry {
                line: raw.line,
                lemma: raw.lemma.to_string(),
                language: raw.language.as_str().into(),
            });
        }
        let sign = build_sign(raw, &relations)?;
        entries.push(LexicalEntry { lemma: raw.lemma, language: raw.language, kind: raw.kind, sign, forms: raw.forms.clone() });
    }

    let has_prep = |p: Symbol, lang: Language| {
        entries.iter().any(|e| e.kind == EntryKind::Prep && e.lemma == p && e.language == lang)
    };
    for (raw, entry) in raws.iter().zip(&entries) {
        let specs = entry.sign.subcat.iter().chain(entry.sign.head.modifies.as_deref());
        for spec in specs {
            if let Some(p) = spec.pform {
                if !has_prep(p, entry.language) {
                    return Err(LexiconError::DanglingPform {
                        line: raw.line,
                        pform: p.to_string(),
                        language: entry.language.as_str().into(),
                    });
                }
            }
        }
    }

    let mut prep_links = Vec::new();
    let mut noun_links = Vec::new();
    for link in &links {
        for (lemma, lang) in [(link.from, Language::L1), (link.to, Language::Lt)] {
            let ok = entries.iter().any(|e| {
                e.lemma == lemma
                    && e.language == lang
                    && (e.kind == link.kind || (link.kind == EntryKind::Noun && e.kind == EntryKind::Pron))
            });
            if !ok {
                return Err(LexiconError::DanglingLink { line: link.line, lemma: lemma.to_string() });
            }
        }
        match link.kind {
            EntryKind::Prep => prep_links.push((link.from, link.to)),
            _ => noun_links.push((link.from, link.to)),
        }
    }

    let find = |entries: &[LexicalEntry], lemma: Symbol, lang: Language, line: usize| -> Result<usize> {
        entries.iter().position(|e| e.lemma == lemma && e.language == lang).ok_or(LexiconError::UnknownEntry {
            line,
            lemma: lemma.to_string(),
            language: lang.as_str().into(),
        })
    };
    let mut bilingual = Vec::new();
    for pair in &pairs {
        let lt_entry = find(&entries, pair.lt, Language::Lt, pair.line)?;
        let l1_entry = find(&entries, pair.l1, Language::L1, pair.line)?;
        let il_lemma = pair.il.unwrap_or(pair.lt);
        let il_entry = find(&entries, il_lemma, Language::Lt, pair.line)?;
        let (lt_sem, l1_sem) = match (&entries[lt_entry].sign.sem, &entries[l1_entry].sign.sem) {
            (Semantics::Relation(a), Semantics::Relation(b)) => (a.clone(), b.clone()),
            _ => return syntax(pair.line, "bilingual entries must carry a semantic relation"),
        };
        if lt_sem != l1_sem {
            return Err(LexiconError::SemMismatch {
                line: pair.line,
                lt: pair.lt.to_string(),
                l1: pair.l1.to_string(),
                lt_sem: lt_sem.reln.to_string(),
                l1_sem: l1_sem.reln.to_string(),
            });
        }
        if bilingual.iter().any(|b: &BilingualEntry| b.lt_entry == lt_entry) {
            return syntax(pair.line, format!("`{}` already has a bilingual entry", pair.lt));
        }
        // One meaning node, seen from both sides.
        entries[l1_entry].sign.sem = Semantics::Relation(lt_sem.clone());
        bilingual.push(BilingualEntry { il_lemma, il_entry, lt_entry, l1_entry, stage: pair.stage, shared_sem: lt_sem });
    }

    let mut lexicon = Lexicon {
        lt_language,
        l1_language,
        relations,
        entries,
        bilingual,
        prep_links,
        noun_links,
        mal: vec![],
        warnings: vec![],
    };

    let inventory = lexicon.feature_inventory();
    for (raw, entry) in raws.iter().zip(&lexicon.entries) {
        if let Err(e) = inventory.check(&geometry::compile(&entry.sign)) {
            return Err(LexiconError::UnknownFeature { line: raw.line, feature: e.to_string() });
        }
    }

    let (mal, warnings) = build_mal_lexicon(&lexicon);
    lexicon.mal = mal;
    lexicon.warnings = warnings;
    Ok(lexicon)
}

fn print_forms(entry: &LexicalEntry) -> String {
    let forms: Vec<String> = entry
        .forms
        .iter()
        .map(|f| match f.vform {
            Some(v) => format!("{}:{}", f.surface, v.as_str()),
            None => f.surface.clone(),
        })
        .collect();
    forms.join(",")
}

fn human_flag(h: Option<bool>) -> &'static str {
    match h {
        Some(true) => " human",
        Some(false) => " nonhuman",
        None => "",
    }
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "languages lt={} l1={}", self.lt_language, self.l1_language)?;
        for (reln, roles) in &self.relations {
            let roles: Vec<&str> = roles.iter().map(|r| r.as_str()).collect();
            writeln!(f, "roles {reln}: {}", roles.join(" ")).map(|_| ())?;
        }
        for e in &self.entries {
            write!(f, "{} {} lang={}", e.kind.as_str(), e.lemma, e.language.as_str())?;
            let rel = e.sign.sem.relation();
            match e.kind {
                EntryKind::Verb => {
                    let specs: Vec<String> = e.sign.complements().iter().map(print_spec).collect();
                    write!(f, " subcat=({})", specs.join(", "))?;
                }
                EntryKind::Noun => {
                    f.write_str(if e.sign.subcat.is_empty() { " proper" } else { " det" })?;
                    f.write_str(human_flag(rel.and_then(|r| r.human)))?;
                }
                EntryKind::Pron | EntryKind::Det => f.write_str(human_flag(rel.and_then(|r| r.human)))?,
                EntryKind::Adv => {
                    if let Some(m) = &e.sign.head.modifies {
                        let mut m = (**m).clone();
                        let first = rel.and_then(|r| r.roles.first().copied());
                        if m.role == first {
                            m.role = None;
                        }
                        write!(f, " mod={}", print_spec(&m))?;
                    }
                }
                EntryKind::Prep | EntryKind::Adj => {}
            }
            if let Some(r) = rel {
                write!(f, " sem={}", r.reln)?;
            }
            writeln!(f, " forms={}", print_forms(e))?;
        }
        for (from, to) in &self.prep_links {
            writeln!(f, "link prep {from} -> {to}")?;
        }
        for (from, to) in &self.noun_links {
            writeln!(f, "link noun {from} -> {to}")?;
        }
        for b in &self.bilingual {
            let lt = self.entries[b.lt_entry].lemma;
            write!(f, "bilingual {lt} <-> {}", self.entries[b.l1_entry].lemma)?;
            if b.il_lemma != lt {
                write!(f, " il={}", b.il_lemma)?;
            }
            writeln!(f, " stage={}", b.stage.as_str())?;
        }
        Ok(())
    }
}
