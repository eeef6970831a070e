use std::collections::HashSet;

use super::Parser;
use crate::avm::FeatureStructure;
use crate::grammar::is_root;

/// Every sentence of at most `max_len` tokens licensed by the parser's
/// lexicon and grammar, shortest first, without repeats. Repair templates
/// on lexical signs are ignored.
pub fn generate(parser: &Parser, max_len: usize) -> Vec<Vec<String>> {
    let lex = parser.lexical_signs();
    let mut by_len: Vec<Vec<(FeatureStructure, Vec<usize>)>> = vec![Vec::new(); max_len + 1];
    let mut seen: HashSet<(FeatureStructure, Vec<usize>)> = HashSet::new();
    if max_len == 0 {
        return vec![];
    }
    for (i, l) in lex.iter().enumerate() {
        // Words are identified by the first lexical sign with that surface.
        let word = lex.iter().position(|o| o.surface == l.surface).unwrap_or(i);
        if seen.insert((l.sign.clone(), vec![word])) {
            by_len[1].push((l.sign.clone(), vec![word]));
        }
    }
    for len in 2..=max_len {
        let mut found = Vec::new();
        for a in 1..len {
            for (ls, lw) in &by_len[a] {
                for (rs, rw) in &by_len[len - a] {
                    for schema in parser.grammar().schemata() {
                        if let Some(m) = schema.combine(ls, rs) {
                            let words: Vec<usize> = lw.iter().chain(rw).copied().collect();
                            if seen.insert((m.clone(), words.clone())) {
                                found.push((m, words));
                            }
                        }
                    }
                }
            }
        }
        by_len[len] = found;
    }
    let mut sentences = Vec::new();
    let mut emitted = HashSet::new();
    for items in &by_len {
        for (sign, words) in items {
            if is_root(sign) && emitted.insert(words.clone()) {
                sentences.push(words.iter().map(|&w| lex[w].surface.clone()).collect());
            }
        }
    }
    sentences
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::load_lexicon;

    #[test]
    fn generates_the_grammatical_example() {
        let lex = load_lexicon(include_str!("../../../../fixtures/no-es.lex")).unwrap();
        let p = Parser::with_source(&lex, "lt").unwrap();
        let out: Vec<String> = generate(&p, 5).into_iter().map(|s| s.join(" ")).collect();
        assert!(out.contains(&"jeg kunne ikke svare Per".to_string()));
        assert!(!out.iter().any(|s| s.contains("til")));
        assert!(out.iter().all(|s| s.split(' ').count() <= 5));
    }
}
