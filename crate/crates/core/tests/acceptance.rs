//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{en_fr, fixture, fixture_sentences, no_es, random_fs, repair_oracle, rng};
use iltransfer::avm::{equivalent, subsumes, unify, FeatureStructure, Symbol};
use iltransfer::chart::{generate, parse_il, parse_strict, tokenize, Parser};
use iltransfer::diagnose::{parse_machine, Classification, Diagnoser, MachineRecord, MachineRenderer, Renderer, Report, Status};
use iltransfer::repair::{RepairConfig, RepairStatus, Repairer};
use iltransfer::signs::{apply_lexical_rule, load_lexicon, Language, Lexicon, Stage};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    check!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(format!("{took:?}"))
}

fn diagnose_fresh(lexicon_file: &str, sentence: &str) -> (Report, Instant) {
    let text = fixture(lexicon_file);
    let start = Instant::now();
    let lexicon = load_lexicon(&text).unwrap();
    let report = Diagnoser::new(&lexicon, RepairConfig::default()).unwrap().report(sentence);
    (report, start)
}

fn transfer_of_pp() -> Outcome {
    let (r, start) = diagnose_fresh("no-es.lex", "Jeg kunne ikke svare til Per");
    let timing = within(start, Duration::from_millis(100))?;
    let top: Vec<_> = r.top().collect();
    check!(top.len() == 1, "{} rank-1 diagnoses", top.len());
    let d = top[0];
    check!(d.il_lemma.as_deref() == Some("svare"), "il_lemma {:?}", d.il_lemma);
    check!(d.l1_lemma.as_deref() == Some("responder"), "l1_lemma {:?}", d.l1_lemma);
    check!(d.l1_frame.as_deref() == Some("⟨PP[a]⟩"), "l1_frame {:?}", d.l1_frame);
    check!(d.observed_frame.as_deref() == Some("PP[til]"), "observed {:?}", d.observed_frame);
    check!(d.classification == Classification::LexicalTransferSubcat, "classification {:?}", d.classification);
    check!(d.cost == 1, "cost {}", d.cost);
    Ok(timing)
}

fn transfer_of_idiom() -> Outcome {
    let (r, start) = diagnose_fresh("en-fr.lex", "My friend has hunger");
    let timing = within(start, Duration::from_millis(100))?;
    let top: Vec<_> = r.top().collect();
    check!(top.len() == 1, "{} rank-1 diagnoses", top.len());
    let d = top[0];
    check!(d.classification == Classification::IdiomTransfer, "classification {:?}", d.classification);
    check!(d.l1_lemma.as_deref() == Some("avoir"), "l1_lemma {:?}", d.l1_lemma);
    check!(d.l1_frame.as_deref() == Some("⟨N[faim]⟩"), "l1_frame {:?}", d.l1_frame);
    check!(d.observed_frame.as_deref() == Some("N[hunger]"), "observed {:?}", d.observed_frame);
    let rec = &r.analyses.as_ref().unwrap().analyses[0].repairs[0];
    check!(rec.chunks == [Symbol::intern("faim")] && rec.transferred_frame == "⟨N[hunger]⟩", "lex constraint {rec:?}");
    Ok(timing)
}

fn grammatical_controls() -> Outcome {
    for (lexicon, sentence) in [(no_es(), "Jeg kunne ikke svare Per"), (en_fr(), "My friend is hungry")] {
        check!(parse_strict(&tokenize(sentence), &lexicon).unwrap().parsed(), "{sentence}: strict parse fails");
        let r = Diagnoser::new(&lexicon, RepairConfig::default()).unwrap().report(sentence);
        check!(r.status == Status::Grammatical, "{sentence}: {:?}", r.status);
        check!(r.diagnoses.iter().all(|d| d.classification == Classification::NoDiagnosis), "{sentence}: diagnoses");
        let a = r.analyses.unwrap();
        check!(a.analyses.iter().all(|x| x.repairs.is_empty() && x.cost == 0), "{sentence}: repairs recorded");
    }
    Ok("both controls grammatical".into())
}

fn stages() -> Outcome {
    let lexicon = no_es();
    let transferred = tokenize("Jeg kunne ikke svare til Per");
    let target = tokenize("Jeg kunne ikke svare Per");
    let parses = |t: &[String], s: Stage| parse_il(t, &lexicon, Some(s)).map(|r| r.parsed()).unwrap_or(false);
    check!(parses(&transferred, Stage::Transfer), "transfer stage rejects the transferred string");
    check!(!parses(&transferred, Stage::Distinct), "distinct stage accepts the transferred string");
    check!(parses(&transferred, Stage::Variable), "variable stage rejects the transferred string");
    check!(parses(&target, Stage::Variable), "variable stage rejects the target string");
    Ok("transfer accepts, distinct rejects, variable accepts both".into())
}

fn generating_l1_lemmas(lexicon: &Lexicon, tokens: &[String]) -> BTreeSet<String> {
    lexicon
        .bilingual
        .iter()
        .filter(|b| tokens.iter().any(|t| lexicon.entries[b.il_entry].forms.iter().any(|f| f.surface.eq_ignore_ascii_case(t))))
        .map(|b| lexicon.entries[b.l1_entry].lemma.to_string())
        .collect()
}

fn completeness() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    for lexicon in [no_es(), en_fr()] {
        let il = Parser::with_source(&lexicon, "il-transfer").unwrap();
        let strict = Parser::with_source(&lexicon, "lt").unwrap();
        let diagnoser = Diagnoser::new(&lexicon, RepairConfig::default()).unwrap();
        let generated = generate(&il, 7);
        let mut rejected = 0;
        for s in &generated {
            if strict.parse(s, &Default::default()).map(|r| r.parsed()).unwrap_or(false) {
                continue;
            }
            rejected += 1;
            let sources = generating_l1_lemmas(&lexicon, s);
            let r = diagnoser.report(&s.join(" "));
            let named = r.diagnoses.iter().any(|d| {
                d.classification != Classification::NoDiagnosis && d.l1_lemma.as_ref().is_some_and(|l| sources.contains(l))
            });
            check!(named, "{:?}: no diagnosis names {sources:?} ({:?})", s, r.status);
        }
        check!(rejected >= 1, "{}-{}: no strictly rejected sentence", lexicon.lt_language, lexicon.l1_language);
        detail.push(format!("{}-{} {rejected}/{}", lexicon.lt_language, lexicon.l1_language, generated.len()));
    }
    let timing = within(start, Duration::from_secs(10))?;
    Ok(format!("rejected/generated {}; {timing}", detail.join(", ")))
}

fn same(a: &Option<FeatureStructure>, b: &Option<FeatureStructure>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => equivalent(x, y),
        _ => false,
    }
}

fn algebra() -> Outcome {
    let start = Instant::now();
    let mut r = rng(6);
    let fs: Vec<FeatureStructure> = (0..1000).map(|_| random_fs(&mut r)).collect();
    let mut lub_checks = 0;
    for i in 0..fs.len() {
        let (a, b, c) = (&fs[i], &fs[(i * 7 + 1) % fs.len()], &fs[(i * 13 + 5) % fs.len()]);
        check!(same(&unify(a, &FeatureStructure::empty()), &Some(a.clone())), "identity fails on {a}");
        check!(same(&unify(a, a), &Some(a.clone())), "idempotence fails on {a}");
        check!(same(&unify(a, b), &unify(b, a)), "commutativity fails on {a}, {b}");
        let left = unify(a, b).and_then(|ab| unify(&ab, c));
        let right = unify(b, c).and_then(|bc| unify(a, &bc));
        check!(same(&left, &right), "associativity fails on {a}, {b}, {c}");
        if let Some(u) = unify(a, b) {
            check!(subsumes(a, &u) && subsumes(b, &u), "unifier of {a}, {b} is not an upper bound");
            for x in [unify(&u, c), Some(c.clone())].into_iter().flatten() {
                if subsumes(a, &x) && subsumes(b, &x) {
                    lub_checks += 1;
                    check!(subsumes(&u, &x), "unifier of {a}, {b} not below {x}");
                }
            }
        }
    }
    let timing = within(start, Duration::from_secs(5))?;
    Ok(format!("1000 structures, {lub_checks} upper bounds sampled; {timing}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (lexicon, corpus) in [(no_es(), "corpus-no.txt"), (en_fr(), "corpus-en.txt")] {
        let repairer = Repairer::new(&lexicon).unwrap();
        for tokens in fixture_sentences(&lexicon, corpus, 7) {
            if tokens.iter().any(|t| repairer.repair_parser().lookup(t).is_empty()) {
                continue;
            }
            for k in 0..=2u32 {
                let r = repairer.repair_parse(&tokens, &RepairConfig { max_repairs: k, ..RepairConfig::default() }).unwrap();
                let oracle = repair_oracle(repairer.repair_parser(), &tokens, k as usize);
                let ours = r.analyses.first().map(|a| a.cost as usize);
                check!(ours == oracle.min_cost, "{tokens:?} K={k}: top cost {ours:?}, oracle {:?}", oracle.min_cost);
                if let (Some(top), Some(p)) = (r.analyses.first(), &r.repaired) {
                    let sign = &p.chart.edge(top.edge).sign;
                    let heads: BTreeSet<usize> = top.repairs.iter().map(|x| x.head.0).collect();
                    let hit = oracle
                        .minimal_sets
                        .iter()
                        .any(|(set, roots)| set.iter().copied().collect::<BTreeSet<_>>() == heads && roots.contains(sign));
                    check!(hit, "{tokens:?} K={k}: top analysis not among the minimal enumerations");
                }
                checked += 1;
            }
        }
    }
    let timing = within(start, Duration::from_secs(10))?;
    Ok(format!("{checked} sentence/budget pairs; {timing}"))
}

fn explosion_control() -> Outcome {
    let config = RepairConfig::default();
    let mut worst = 0.0f64;
    for (lexicon, corpus) in [(no_es(), "corpus-no.txt"), (en_fr(), "corpus-en.txt")] {
        let repairer = Repairer::new(&lexicon).unwrap();
        for tokens in fixture_sentences(&lexicon, corpus, 7) {
            let Ok(r) = repairer.repair_parse(&tokens, &config) else { continue };
            check!(r.status != RepairStatus::EdgeCapExceeded, "{tokens:?} trips the edge cap");
            if let Some(p) = &r.repaired {
                let bound = r.strict.stats.edges * (1 + r.bilingual_tokens) * 4;
                check!(p.stats.edges <= bound, "{tokens:?}: {} edges, bound {bound}", p.stats.edges);
                worst = worst.max(p.stats.edges as f64 / bound as f64);
            }
        }
    }
    Ok(format!("largest repaired chart at {:.0}% of its bound", worst * 100.0))
}

fn round_trips() -> Outcome {
    for lexicon in [no_es(), en_fr()] {
        let again = load_lexicon(&lexicon.to_string()).map_err(|e| e.to_string())?;
        check!(again == lexicon, "lexicon load-print-load differs");
    }
    let mut r = rng(9);
    for _ in 0..500 {
        let a = random_fs(&mut r);
        let back: FeatureStructure = a.to_string().parse().map_err(|e| format!("{a}: {e:?}"))?;
        check!(equivalent(&a, &back), "{a} reads back as {back}");
    }
    let lexicon = no_es();
    let diagnoser = Diagnoser::new(&lexicon, RepairConfig::default()).unwrap();
    for line in fixture("corpus-no.txt").lines() {
        let text = line.split('#').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        let report = diagnoser.report(text);
        let rendered = MachineRenderer.render(&report);
        let records = parse_machine(&rendered).map_err(|e| e.to_string())?;
        let expected: Vec<MachineRecord> = report.diagnoses.iter().map(MachineRecord::from).collect();
        if !expected.is_empty() {
            check!(records == expected, "{text}: machine records differ");
        }
    }
    Ok("lexicons, 500 structures, machine records".into())
}

fn human_object_rule() -> Outcome {
    let lexicon = no_es();
    let entry = |l: &str| &lexicon.entries[lexicon.entry(Symbol::intern(l), Language::L1).unwrap()];
    let rule = "es-human-object-pp";
    let out = apply_lexical_rule(rule, entry("ver"), &lexicon).map_err(|e| e.to_string())?;
    check!(out.len() == 1 && out[0].sign.frame() == "⟨PP[a]⟩", "ver gives {:?}", out.iter().map(|e| e.sign.frame()).collect::<Vec<_>>());
    check!(apply_lexical_rule(rule, &out[0], &lexicon).unwrap().is_empty(), "second application changes the entry");
    check!(apply_lexical_rule(rule, entry("comer"), &lexicon).unwrap().is_empty(), "comer is rewritten");
    Ok("ver gets ⟨PP[a]⟩, comer untouched, fixpoint after one step".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("transferred PP complement diagnosed", transfer_of_pp),
        ("transferred idiom diagnosed", transfer_of_idiom),
        ("grammatical controls", grammatical_controls),
        ("learner stages", stages),
        ("learner-grammar completeness", completeness),
        ("unification algebra", algebra),
        ("repair matches exhaustive search", oracle_equivalence),
        ("chart growth bounded", explosion_control),
        ("format round trips", round_trips),
        ("human-object lexical rule", human_object_rule),
    ];
    // Warm up symbol interning and allocation before the timed criteria.
    let _ = diagnose_fresh("no-es.lex", "Jeg kunne ikke svare Per");
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
