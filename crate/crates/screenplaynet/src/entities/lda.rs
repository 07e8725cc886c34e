//! Latent Dirichlet allocation via collapsed Gibbs sampling.
//!
//! Symmetric priors, a fixed seed, and a fixed (sorted) vocabulary order
//! make training bit-reproducible: the same documents, parameters and seed
//! always yield the same assignments.

use super::{ExtractError, LdaParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// A trained topic model over tokenized documents.
#[derive(Debug, Clone)]
pub struct LdaModel {
    vocab: Vec<String>,
    /// Topic assignment of every token, per document, in token order.
    assignments: Vec<Vec<usize>>,
    topic_word: Vec<Vec<usize>>,
    topic_totals: Vec<usize>,
    params: LdaParams,
}

impl LdaModel {
    /// Run the collapsed Gibbs sampler.
    pub fn train(docs: &[Vec<String>], params: LdaParams) -> Result<LdaModel, ExtractError> {
        params.validate()?;

        let mut vocab: Vec<String> = docs.iter().flatten().cloned().collect();
        vocab.sort();
        vocab.dedup();
        if vocab.is_empty() {
            return Err(ExtractError::EmptyCorpus);
        }
        let vocab_index: BTreeMap<&str, usize> = vocab
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i))
            .collect();
        let word_ids: Vec<Vec<usize>> = docs
            .iter()
            .map(|d| d.iter().map(|t| vocab_index[t.as_str()]).collect())
            .collect();

        let k = params.topics;
        let v = vocab.len();
        let alpha = params.alpha;
        let beta = params.beta;
        let v_beta = v as f64 * beta;

        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut assignments: Vec<Vec<usize>> = Vec::with_capacity(docs.len());
        let mut doc_topic: Vec<Vec<usize>> = vec![vec![0; k]; docs.len()];
        let mut topic_word: Vec<Vec<usize>> = vec![vec![0; v]; k];
        let mut topic_totals: Vec<usize> = vec![0; k];

        for (d, words) in word_ids.iter().enumerate() {
            let mut z_d = Vec::with_capacity(words.len());
            for &w in words {
                let z = rng.gen_range(0..k);
                z_d.push(z);
                doc_topic[d][z] += 1;
                topic_word[z][w] += 1;
                topic_totals[z] += 1;
            }
            assignments.push(z_d);
        }

        let mut weights = vec![0.0f64; k];
        for _ in 0..params.iterations {
            for (d, words) in word_ids.iter().enumerate() {
                for (i, &w) in words.iter().enumerate() {
                    let old = assignments[d][i];
                    doc_topic[d][old] -= 1;
                    topic_word[old][w] -= 1;
                    topic_totals[old] -= 1;

                    let mut total = 0.0;
                    for (t, weight) in weights.iter_mut().enumerate() {
                        *weight = (doc_topic[d][t] as f64 + alpha)
                            * (topic_word[t][w] as f64 + beta)
                            / (topic_totals[t] as f64 + v_beta);
                        total += *weight;
                    }
                    let mut draw = rng.gen::<f64>() * total;
                    let mut new = k - 1;
                    for (t, weight) in weights.iter().enumerate() {
                        draw -= weight;
                        if draw <= 0.0 {
                            new = t;
                            break;
                        }
                    }

                    assignments[d][i] = new;
                    doc_topic[d][new] += 1;
                    topic_word[new][w] += 1;
                    topic_totals[new] += 1;
                }
            }
        }

        Ok(LdaModel {
            vocab,
            assignments,
            topic_word,
            topic_totals,
            params,
        })
    }

    pub fn num_topics(&self) -> usize {
        self.params.topics
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    /// Per-token topic assignments, per document.
    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.assignments
    }

    /// Estimated topic-word probability
    /// `phi(t|k) = (count(k,t) + beta) / (count(k) + V * beta)`.
    pub fn phi(&self, topic: usize, term: &str) -> f64 {
        match self.vocab.binary_search_by(|t| t.as_str().cmp(term)) {
            Ok(w) => {
                (self.topic_word[topic][w] as f64 + self.params.beta)
                    / (self.topic_totals[topic] as f64 + self.vocab.len() as f64 * self.params.beta)
            }
            Err(_) => 0.0,
        }
    }

    /// Top `n` vocabulary terms for a topic by `phi`, ties broken by term.
    pub fn top_words(&self, topic: usize, n: usize) -> Vec<(String, f64)> {
        let denom = self.topic_totals[topic] as f64 + self.vocab.len() as f64 * self.params.beta;
        let mut scored: Vec<(f64, &str)> = self
            .vocab
            .iter()
            .enumerate()
            .map(|(w, term)| {
                (
                    (self.topic_word[topic][w] as f64 + self.params.beta) / denom,
                    term.as_str(),
                )
            })
            .collect();
        scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(b.1)));
        scored
            .into_iter()
            .take(n)
            .map(|(p, t)| (t.to_string(), p))
            .collect()
    }
}
