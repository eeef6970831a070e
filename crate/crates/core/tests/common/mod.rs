#![allow(dead_code)]

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iltransfer::avm::{FeatureStructure, Path, Symbol};
use iltransfer::chart::{generate, tokenize, Parser};
use iltransfer::grammar::{is_root, Grammar};
use iltransfer::signs::{load_lexicon, Lexicon};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn no_es() -> Lexicon {
    load_lexicon(&fixture("no-es.lex")).unwrap()
}

pub fn en_fr() -> Lexicon {
    load_lexicon(&fixture("en-fr.lex")).unwrap()
}

const FEATURES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
const ATOMS: [&str; 3] = ["plus", "minus", "x"];

fn value(rng: &mut ChaCha8Rng, depth: usize) -> FeatureStructure {
    let roll: f64 = rng.gen();
    if depth == 0 || roll < 0.25 {
        return if rng.gen_bool(0.5) {
            FeatureStructure::empty()
        } else {
            FeatureStructure::atom(ATOMS.choose(rng).unwrap())
        };
    }
    if roll < 0.32 {
        let n = rng.gen_range(0..=2);
        return FeatureStructure::list((0..n).map(|_| value(rng, depth - 1)).collect::<Vec<_>>());
    }
    let k = rng.gen_range(1..=FEATURES.len());
    let mut names: Vec<&str> = FEATURES.to_vec();
    names.shuffle(rng);
    let pairs: Vec<(&str, FeatureStructure)> = names[..k].iter().map(|n| (*n, value(rng, depth - 1))).collect();
    FeatureStructure::avm(pairs.iter().map(|(n, v)| (*n, v.clone())))
}

/// Feature paths of `fs` that lead through AVMs only, up to length 4.
fn paths(fs: &FeatureStructure) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Symbol>> = vec![vec![]];
    while let Some(p) = stack.pop() {
        if !p.is_empty() {
            out.push(p.clone());
        }
        if p.len() >= 4 {
            continue;
        }
        for f in FEATURES {
            let mut q = p.clone();
            q.push(Symbol::intern(f));
            if fs.follow(&q).is_some() {
                stack.push(q);
            }
        }
    }
    out.sort();
    out
}

/// A random structure: depth at most 4, at most 6 features per node and
/// at most 2 reentrancies introduced by sharing.
pub fn random_fs(rng: &mut ChaCha8Rng) -> FeatureStructure {
    let mut fs = value(rng, 4);
    let shares = rng.gen_range(0..=2);
    for _ in 0..shares {
        let ps = paths(&fs);
        if ps.len() < 2 {
            break;
        }
        let a = ps.choose(rng).unwrap().clone();
        let b = ps.choose(rng).unwrap().clone();
        if a.starts_with(&b) || b.starts_with(&a) {
            continue;
        }
        if let Ok(shared) = fs.share(&Path(a), &Path(b)) {
            fs = shared;
        }
    }
    fs
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Brute-force CKY over per-position lexical signs: all signs for every
/// span, deduplicated by equality.
#[allow(clippy::needless_range_loop)]
pub fn cky(grammar: &Grammar, lexical: &[Vec<FeatureStructure>]) -> Vec<FeatureStructure> {
    let n = lexical.len();
    if n == 0 {
        return vec![];
    }
    let mut table: Vec<Vec<Vec<FeatureStructure>>> = vec![vec![vec![]; n + 1]; n + 1];
    // Spans of one token may grow by adjunction only through larger spans,
    // so each cell is complete once its sub-cells are.
    for i in 0..n {
        let mut seen = HashSet::new();
        table[i][i + 1] = lexical[i].iter().filter(|s| seen.insert((*s).clone())).cloned().collect();
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut cell: Vec<FeatureStructure> = Vec::new();
            let mut seen = HashSet::new();
            for k in i + 1..j {
                let (left, right) = (&table[i][k], &table[k][j]);
                for l in left {
                    for r in right {
                        for schema in grammar.schemata() {
                            if let Some(m) = schema.combine(l, r) {
                                if seen.insert(m.clone()) {
                                    cell.push(m);
                                }
                            }
                        }
                    }
                }
            }
            table[i][j] = cell;
        }
    }
    table[0][n].iter().filter(|s| is_root(s)).cloned().collect()
}

/// Signs for each token from a parser, optionally only transferred ones.
pub fn lexical(parser: &Parser, tokens: &[String], transferred: impl Fn(usize) -> bool) -> Vec<Vec<FeatureStructure>> {
    tokens
        .iter()
        .enumerate()
        .map(|(i, t)| {
            parser.lookup(t).into_iter().filter(|l| l.repair.is_some() == transferred(i)).map(|l| l.sign.clone()).collect()
        })
        .collect()
}

/// Result of exhaustive repair search: the least number of transferred
/// signs that yields a sentence, and every minimal set of positions.
pub struct RepairOracle {
    pub min_cost: Option<usize>,
    pub minimal_sets: Vec<(Vec<usize>, Vec<FeatureStructure>)>,
}

pub fn repair_oracle(parser: &Parser, tokens: &[String], max_cost: usize) -> RepairOracle {
    let candidates: Vec<usize> =
        (0..tokens.len()).filter(|&i| parser.lookup(&tokens[i]).iter().any(|l| l.repair.is_some())).collect();
    let mut by_cost: Vec<(usize, Vec<usize>, Vec<FeatureStructure>)> = Vec::new();
    for mask in 0..(1usize << candidates.len()) {
        let set: Vec<usize> = candidates.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &i)| i).collect();
        if set.len() > max_cost {
            continue;
        }
        let roots = cky(&Grammar::default(), &lexical(parser, tokens, |i| set.contains(&i)));
        if !roots.is_empty() {
            by_cost.push((set.len(), set, roots));
        }
    }
    let min_cost = by_cost.iter().map(|c| c.0).min();
    let minimal_sets = by_cost.into_iter().filter(|c| Some(c.0) == min_cost).map(|c| (c.1, c.2)).collect();
    RepairOracle { min_cost, minimal_sets }
}

/// Fixture sentences up to `max_len` tokens: the corpus files plus
/// everything generated from the target lexicon and the learner lexicon
/// at the transfer and variable stages.
pub fn fixture_sentences(lexicon: &Lexicon, corpus: &str, max_len: usize) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = Vec::new();
    let mut seen = HashSet::new();
    for line in fixture(corpus).lines() {
        let text = line.split('#').next().unwrap_or("");
        let tokens = tokenize(text);
        if !tokens.is_empty() && tokens.len() <= max_len && seen.insert(tokens.clone()) {
            out.push(tokens);
        }
    }
    for source in ["lt", "il-transfer", "il-variable"] {
        let parser = Parser::with_source(lexicon, source).unwrap();
        for s in generate(&parser, max_len) {
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
    }
    out
}
