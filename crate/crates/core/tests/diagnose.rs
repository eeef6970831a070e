mod common;

use common::{en_fr, fixture_sentences, no_es};
use iltransfer::chart::parse_strict;
use iltransfer::diagnose::{diagnose, Classification, Diagnoser, Status};
use iltransfer::repair::RepairConfig;

#[test]
fn accepted_sentences_get_no_diagnosis() {
    for (lexicon, corpus) in [(no_es(), "corpus-no.txt"), (en_fr(), "corpus-en.txt")] {
        let diagnoser = Diagnoser::new(&lexicon, RepairConfig::default()).unwrap();
        for tokens in fixture_sentences(&lexicon, corpus, 7) {
            let Ok(strict) = parse_strict(&tokens, &lexicon) else { continue };
            let r = diagnoser.diagnose_tokens(&tokens.join(" "), &tokens).unwrap();
            if strict.parsed() {
                assert_eq!(r.status, Status::Grammatical, "{tokens:?}");
                assert!(r.diagnoses.iter().all(|d| d.classification == Classification::NoDiagnosis));
            } else {
                assert_ne!(r.status, Status::Grammatical, "{tokens:?}");
                assert!(r.diagnoses.iter().all(|d| d.classification != Classification::NoDiagnosis));
            }
        }
    }
}

#[test]
fn worked_examples_have_one_top_diagnosis() {
    let tokens = |s: &str| iltransfer::chart::tokenize(s);
    let config = RepairConfig::default();
    let r = diagnose(&tokens("Jeg kunne ikke svare til Per"), &no_es(), &config).unwrap();
    assert_eq!(r.top().count(), 1);
    let r = diagnose(&tokens("My friend has hunger"), &en_fr(), &config).unwrap();
    assert_eq!(r.top().count(), 1);
}

#[test]
fn ranks_follow_analyses() {
    let lexicon = no_es();
    let r = Diagnoser::new(&lexicon, RepairConfig::default()).unwrap().report("Per kan ikke svare til jeg");
    assert_eq!(r.status, Status::Diagnosed);
    let ranks: Vec<usize> = r.diagnoses.iter().map(|d| d.rank).collect();
    assert!(ranks.windows(2).all(|w| w[0] <= w[1]) && ranks[0] == 1);
    let costs: Vec<u32> = r.diagnoses.iter().map(|d| d.cost).collect();
    assert!(costs.windows(2).all(|w| w[0] <= w[1]));
}
