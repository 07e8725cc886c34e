//! Dialogue tokenization and TF-IDF term scoring.

use super::ExtractError;
use std::collections::{BTreeMap, BTreeSet};

/// Tokenize dialogue text: lowercase, split on non-alphanumerics, drop
/// tokens shorter than 3 characters, stopwords and pure numbers.
pub fn tokenize_dialogue(text: &str, stopwords: &BTreeSet<String>) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 3)
        .filter(|t| !t.chars().all(|c| c.is_ascii_digit()))
        .filter(|t| !stopwords.contains(*t))
        .map(str::to_string)
        .collect()
}

/// TF-IDF over tokenized documents. The score of a term is its best
/// per-document value: `max_d tf(t, d) * ln(N / df(t))` with raw counts.
pub fn tfidf_scores(docs: &[Vec<String>]) -> Result<BTreeMap<String, f64>, ExtractError> {
    if docs.iter().all(|d| d.is_empty()) {
        return Err(ExtractError::EmptyCorpus);
    }
    let n = docs.len() as f64;
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    let mut per_doc_tf: Vec<BTreeMap<&str, usize>> = Vec::with_capacity(docs.len());
    for doc in docs {
        let mut tf: BTreeMap<&str, usize> = BTreeMap::new();
        for token in doc {
            *tf.entry(token.as_str()).or_insert(0) += 1;
        }
        for term in tf.keys() {
            *df.entry(term).or_insert(0) += 1;
        }
        per_doc_tf.push(tf);
    }
    let mut scores: BTreeMap<String, f64> = BTreeMap::new();
    for tf in &per_doc_tf {
        for (term, count) in tf {
            let idf = (n / df[term] as f64).ln();
            let score = *count as f64 * idf;
            let entry = scores.entry((*term).to_string()).or_insert(score);
            if score > *entry {
                *entry = score;
            }
        }
    }
    Ok(scores)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stopwords(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    fn doc(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tokenize_strips_stopwords_and_short_tokens() {
        let tokens = tokenize_dialogue("The Tesseract has awakened", &stopwords(&["the", "has"]));
        assert_eq!(
            tokens,
            vec!["tesseract".to_string(), "awakened".to_string()]
        );
    }

    #[test]
    fn tokenize_length_filter() {
        assert!(tokenize_dialogue("I am.", &BTreeSet::new()).is_empty());
    }

    #[test]
    fn tokenize_drops_numbers_and_contractions() {
        assert!(tokenize_dialogue("It's 2012!", &stopwords(&["its"])).is_empty());
        // alphanumeric mixes survive the number filter
        assert_eq!(
            tokenize_dialogue("r2d2 waits", &BTreeSet::new()),
            vec!["r2d2".to_string(), "waits".to_string()]
        );
    }

    #[test]
    fn tfidf_matches_direct_formula() {
        let docs = vec![doc(&["ship", "ship", "core"]), doc(&["core"])];
        let scores = tfidf_scores(&docs).unwrap();
        // "ship": tf 2 in one of 2 docs -> 2 * ln 2
        assert!((scores["ship"] - 2.0 * 2.0f64.ln()).abs() < 1e-12);
        // "core" appears in all docs -> idf = ln 1 = 0
        assert_eq!(scores["core"], 0.0);
    }

    #[test]
    fn tfidf_empty_corpus_errors() {
        assert!(matches!(
            tfidf_scores(&[vec![], vec![]]),
            Err(ExtractError::EmptyCorpus)
        ));
    }

    #[test]
    fn tfidf_permutation_invariant() {
        let a = doc(&["alpha", "beta", "beta"]);
        let b = doc(&["gamma"]);
        let c = doc(&["alpha", "gamma", "gamma"]);
        let one = tfidf_scores(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let two = tfidf_scores(&[c, a, b]).unwrap();
        assert_eq!(one, two);
    }

    /// Naive nested-loop recomputation, a second route through the formula.
    fn tfidf_oracle(docs: &[Vec<String>]) -> BTreeMap<String, f64> {
        let terms: BTreeSet<&String> = docs.iter().flatten().collect();
        let mut scores = BTreeMap::new();
        for term in terms {
            let df = docs.iter().filter(|d| d.contains(term)).count() as f64;
            let mut best = f64::NEG_INFINITY;
            for d in docs {
                let tf = d.iter().filter(|t| *t == term).count() as f64;
                let score = tf * (docs.len() as f64 / df).ln();
                if score > best {
                    best = score;
                }
            }
            scores.insert(term.clone(), best);
        }
        scores
    }

    proptest::proptest! {
        #[test]
        fn tfidf_matches_naive_oracle(docs in proptest::collection::vec(
            proptest::collection::vec("[a-e]{3,5}", 0..12), 1..6))
        {
            proptest::prop_assume!(docs.iter().any(|d| !d.is_empty()));
            let mine = tfidf_scores(&docs).unwrap();
            let oracle = tfidf_oracle(&docs);
            proptest::prop_assert_eq!(mine.len(), oracle.len());
            for (term, score) in &mine {
                proptest::prop_assert!((score - oracle[term]).abs() < 1e-12);
            }
        }
    }
}
