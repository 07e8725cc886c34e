//! Curation config file: alias groups, blocklist, stopwords and keyword
//! extraction parameters.
//!
//! Format is a sectioned key-value text file:
//!
//! ```text
//! [aliases]
//! TONY STARK|character = TONY; STARK; IRON MAN
//! [blocklist]
//! VOICE
//! [stopwords]
//! the
//! [keywords]
//! top_n = 10
//! lda_topics = 10
//! lda_seed = 42
//! ```

use super::{EntityKind, ExtractError};
use std::collections::BTreeSet;
use std::path::Path;

/// One alias group: every alias (and the canonical itself) resolves to the
/// canonical entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasGroup {
    pub canonical: String,
    pub kind: EntityKind,
    pub aliases: Vec<String>,
}

/// Collapsed Gibbs sampler parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LdaParams {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for LdaParams {
    fn default() -> Self {
        let topics = 10;
        LdaParams {
            topics,
            alpha: 50.0 / topics as f64,
            beta: 0.01,
            iterations: 1000,
            seed: 42,
        }
    }
}

impl LdaParams {
    pub fn validate(&self) -> Result<(), ExtractError> {
        if self.topics < 1 {
            return Err(ExtractError::InvalidParams("topics must be >= 1".into()));
        }
        if self.alpha <= 0.0 || self.beta <= 0.0 {
            return Err(ExtractError::InvalidParams(
                "alpha and beta must be positive".into(),
            ));
        }
        if self.iterations < 1 {
            return Err(ExtractError::InvalidParams(
                "iterations must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KeywordParams {
    pub top_n: usize,
    pub lda: LdaParams,
}

impl Default for KeywordParams {
    fn default() -> Self {
        KeywordParams {
            top_n: 10,
            lda: LdaParams::default(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CurationConfig {
    pub alias_groups: Vec<AliasGroup>,
    pub blocklist: BTreeSet<String>,
    pub stopwords: BTreeSet<String>,
    pub keyword_params: KeywordParams,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Aliases,
    Blocklist,
    Stopwords,
    Keywords,
}

impl CurationConfig {
    pub fn from_path(path: &Path) -> Result<Self, ExtractError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ExtractError> {
        let mut config = CurationConfig::default();
        let mut section = Section::None;
        let mut alpha_explicit = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = match name.to_lowercase().as_str() {
                    "aliases" => Section::Aliases,
                    "blocklist" => Section::Blocklist,
                    "stopwords" => Section::Stopwords,
                    "keywords" => Section::Keywords,
                    other => {
                        return Err(ExtractError::ConfigParse {
                            line: lineno,
                            message: format!("unknown section [{other}]"),
                        });
                    }
                };
                continue;
            }
            match section {
                Section::None => {
                    return Err(ExtractError::ConfigParse {
                        line: lineno,
                        message: "content before the first section header".into(),
                    });
                }
                Section::Aliases => {
                    config.alias_groups.push(parse_alias_line(line, lineno)?);
                }
                Section::Blocklist => {
                    config.blocklist.insert(line.to_string());
                }
                Section::Stopwords => {
                    config.stopwords.insert(line.to_lowercase());
                }
                Section::Keywords => {
                    let (key, value) = line.split_once('=').ok_or(ExtractError::ConfigParse {
                        line: lineno,
                        message: "expected key = value".into(),
                    })?;
                    let key = key.trim().to_lowercase();
                    let value = value.trim();
                    let params = &mut config.keyword_params;
                    let bad = |message: String| ExtractError::ConfigParse {
                        line: lineno,
                        message,
                    };
                    match key.as_str() {
                        "top_n" => {
                            params.top_n = value.parse().map_err(|e| bad(format!("top_n: {e}")))?;
                        }
                        "lda_topics" => {
                            params.lda.topics =
                                value.parse().map_err(|e| bad(format!("lda_topics: {e}")))?;
                            if !alpha_explicit && params.lda.topics > 0 {
                                params.lda.alpha = 50.0 / params.lda.topics as f64;
                            }
                        }
                        "lda_alpha" => {
                            params.lda.alpha =
                                value.parse().map_err(|e| bad(format!("lda_alpha: {e}")))?;
                            alpha_explicit = true;
                        }
                        "lda_beta" => {
                            params.lda.beta =
                                value.parse().map_err(|e| bad(format!("lda_beta: {e}")))?;
                        }
                        "lda_iterations" => {
                            params.lda.iterations = value
                                .parse()
                                .map_err(|e| bad(format!("lda_iterations: {e}")))?;
                        }
                        "lda_seed" => {
                            params.lda.seed =
                                value.parse().map_err(|e| bad(format!("lda_seed: {e}")))?;
                        }
                        other => {
                            return Err(bad(format!("unknown key {other:?}")));
                        }
                    }
                }
            }
        }
        config.keyword_params.lda.validate()?;
        Ok(config)
    }
}

fn parse_alias_line(line: &str, lineno: usize) -> Result<AliasGroup, ExtractError> {
    let bad = |message: String| ExtractError::ConfigParse {
        line: lineno,
        message,
    };
    let (head, tail) = line
        .split_once('=')
        .ok_or_else(|| bad("expected CANONICAL|kind = alias1; alias2".into()))?;
    let (canonical, kind) = head
        .trim()
        .split_once('|')
        .ok_or_else(|| bad("expected CANONICAL|kind before '='".into()))?;
    let canonical = canonical.trim();
    if canonical.is_empty() {
        return Err(bad("empty canonical name".into()));
    }
    let kind = match kind.trim().to_lowercase().as_str() {
        "character" => EntityKind::Character,
        "location" => EntityKind::Location,
        "keyword" => EntityKind::Keyword,
        other => return Err(bad(format!("unknown kind {other:?}"))),
    };
    let aliases: Vec<String> = tail
        .split(';')
        .map(|a| a.trim().to_string())
        .filter(|a| !a.is_empty())
        .collect();
    if aliases.is_empty() {
        return Err(bad("alias list must not be empty".into()));
    }
    Ok(AliasGroup {
        canonical: canonical.to_string(),
        kind,
        aliases,
    })
}

/// Load a stopword file: one token per line, `#` comments allowed.
pub fn load_stopword_file(path: &Path) -> Result<BTreeSet<String>, ExtractError> {
    let text = std::fs::read_to_string(path)?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect())
}
