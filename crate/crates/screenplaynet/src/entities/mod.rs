//! Entity harvesting and curation: characters from cues and capitalized
//! description mentions, locations from scene headers, keywords from
//! dialogue scoring (TF-IDF and LDA).
//!
//! The curation config file replaces manual cleanup: alias groups merge
//! surface forms into one canonical entity, the blocklist drops noise, and
//! the stopword list feeds dialogue tokenization.

mod curation;
mod lda;
mod text;

pub use curation::{load_stopword_file, CurationConfig, KeywordParams, LdaParams};
pub use lda::LdaModel;
pub use text::{tfidf_scores, tokenize_dialogue};

use crate::parser::{Conversation, Scene};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtractError {
    /// One surface form appears in two alias groups.
    #[error("alias surface form {surface:?} is claimed by two alias groups")]
    ConfigConflict { surface: String },
    #[error("curation config line {line}: {message}")]
    ConfigParse { line: usize, message: String },
    #[error("invalid keyword parameters: {0}")]
    InvalidParams(String),
    #[error("all documents are empty")]
    EmptyCorpus,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Stable identifier of a catalog entity. Ids are assigned in a fixed pass
/// order, so identical inputs always produce identical ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntityId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Character,
    Location,
    Keyword,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub canonical_name: String,
    pub kind: EntityKind,
}

/// Canonical entities with their alias map and per-scene occurrence index.
#[derive(Debug, Clone, Default)]
pub struct EntityCatalog {
    entities: Vec<Entity>,
    alias_map: BTreeMap<String, EntityId>,
    names_by_kind: BTreeSet<(EntityKind, String)>,
    scene_occurrences: BTreeMap<EntityId, BTreeSet<usize>>,
}

/// Normalize a surface form: trim, uppercase, collapse internal whitespace.
pub fn normalize_surface(surface: &str) -> String {
    surface
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_uppercase()
}

impl EntityCatalog {
    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id.0 as usize]
    }

    pub fn of_kind(&self, kind: EntityKind) -> impl Iterator<Item = &Entity> {
        self.entities.iter().filter(move |e| e.kind == kind)
    }

    pub fn occurrences(&self, id: EntityId) -> Option<&BTreeSet<usize>> {
        self.scene_occurrences.get(&id)
    }

    /// Exact-match alias lookup after normalization.
    pub fn resolve_alias(&self, surface: &str) -> Option<EntityId> {
        self.alias_map.get(&normalize_surface(surface)).copied()
    }

    fn insert_entity(
        &mut self,
        canonical_name: &str,
        kind: EntityKind,
    ) -> Result<EntityId, ExtractError> {
        let key = normalize_surface(canonical_name);
        if !self.names_by_kind.insert((kind, key.clone())) {
            return Err(ExtractError::ConfigConflict {
                surface: canonical_name.to_string(),
            });
        }
        let id = EntityId(self.entities.len() as u32);
        self.entities.push(Entity {
            id,
            canonical_name: canonical_name.to_string(),
            kind,
        });
        // The same surface may name entities of two kinds (a character and a
        // keyword, say); the first registration keeps the alias mapping.
        self.alias_map.entry(key).or_insert(id);
        Ok(id)
    }

    fn add_alias(&mut self, surface: &str, id: EntityId) -> Result<(), ExtractError> {
        let key = normalize_surface(surface);
        match self.alias_map.get(&key) {
            Some(existing) if *existing != id => Err(ExtractError::ConfigConflict {
                surface: surface.to_string(),
            }),
            _ => {
                self.alias_map.insert(key, id);
                Ok(())
            }
        }
    }

    fn record_occurrence(&mut self, id: EntityId, scene_index: usize) {
        self.scene_occurrences
            .entry(id)
            .or_default()
            .insert(scene_index);
    }

    /// Resolve or register a surface form, recording the scene occurrence.
    /// Returns `None` when the surface is blocklisted or resolves to an
    /// entity of a different kind than expected.
    fn resolve_or_register(
        &mut self,
        surface: &str,
        kind: EntityKind,
        scene_index: usize,
        blocklist: &BTreeSet<String>,
        create_if_missing: bool,
    ) -> Option<EntityId> {
        let key = normalize_surface(surface);
        if key.is_empty() || blocklist.contains(&key) {
            return None;
        }
        if let Some(id) = self.alias_map.get(&key).copied() {
            if self.entity(id).kind == kind {
                self.record_occurrence(id, scene_index);
                return Some(id);
            }
            return None;
        }
        if !create_if_missing {
            return None;
        }
        let id = EntityId(self.entities.len() as u32);
        self.names_by_kind.insert((kind, key.clone()));
        self.entities.push(Entity {
            id,
            canonical_name: key.clone(),
            kind,
        });
        self.alias_map.insert(key, id);
        self.record_occurrence(id, scene_index);
        Some(id)
    }
}

/// Extract maximal runs of all-uppercase words from description text.
/// Leading articles are dropped; trailing sentence punctuation on a word
/// closes its run.
fn uppercase_runs(text: &str) -> Vec<Vec<String>> {
    let mut runs: Vec<Vec<String>> = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for word in text.split_whitespace() {
        let stripped: &str =
            word.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'' && c != '-');
        let closes_run = word
            .chars()
            .last()
            .map(|c| matches!(c, '.' | ',' | ';' | ':' | '!' | '?'))
            .unwrap_or(false);
        let is_upper = !stripped.is_empty()
            && stripped.chars().any(|c| c.is_alphabetic())
            && !stripped.chars().any(|c| c.is_lowercase());
        if is_upper {
            current.push(stripped.to_string());
            if closes_run {
                runs.push(std::mem::take(&mut current));
            }
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }
    for run in &mut runs {
        while run
            .first()
            .map(|w| matches!(w.as_str(), "A" | "AN" | "THE"))
            .unwrap_or(false)
        {
            run.remove(0);
        }
    }
    runs.retain(|r| !r.is_empty());
    runs
}

/// Build the entity catalog from parsed scenes and the curation config.
///
/// Characters come from speaker cues and from multi-word capitalized runs in
/// description blocks; single-word runs only count as mentions when an alias
/// already resolves them. Locations come from scene headers. Occurrences are
/// recorded per scene for characters (speaking or mentioned) and locations
/// (header). Keyword entities are added later by [`register_keywords`].
pub fn harvest_entities(
    scenes: &[Scene],
    config: &CurationConfig,
) -> Result<EntityCatalog, ExtractError> {
    let mut catalog = EntityCatalog::default();

    // Seed the catalog from the curation alias groups.
    for group in &config.alias_groups {
        let id = catalog.insert_entity(&group.canonical, group.kind)?;
        for alias in &group.aliases {
            catalog.add_alias(alias, id)?;
        }
    }

    let blocklist: BTreeSet<String> = config
        .blocklist
        .iter()
        .map(|s| normalize_surface(s))
        .collect();

    for scene in scenes {
        catalog.resolve_or_register(
            &scene.header.location_raw,
            EntityKind::Location,
            scene.index,
            &blocklist,
            true,
        );
        for block in &scene.blocks {
            match block {
                crate::parser::SceneBlock::Utterance(u) => {
                    catalog.resolve_or_register(
                        &u.speaker_raw,
                        EntityKind::Character,
                        scene.index,
                        &blocklist,
                        true,
                    );
                }
                crate::parser::SceneBlock::Description(d) => {
                    for run in uppercase_runs(&d.text) {
                        let multi_word = run.len() >= 2;
                        let surface = run.join(" ");
                        catalog.resolve_or_register(
                            &surface,
                            EntityKind::Character,
                            scene.index,
                            &blocklist,
                            multi_word,
                        );
                    }
                }
            }
        }
    }
    Ok(catalog)
}

/// A scored keyword candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordScore {
    pub term: String,
    pub tfidf: f64,
    pub topic_id: Option<usize>,
    pub topic_weight: Option<f64>,
}

/// Tokenized utterance, keeping the speaker for edge construction.
#[derive(Debug, Clone)]
pub struct UtteranceTokens {
    pub speaker_raw: String,
    pub tokens: Vec<String>,
}

/// Tokenized conversation: the document unit for keyword scoring.
#[derive(Debug, Clone)]
pub struct ConversationTokens {
    pub scene_index: usize,
    pub utterances: Vec<UtteranceTokens>,
}

impl ConversationTokens {
    pub fn all_tokens(&self) -> Vec<String> {
        self.utterances
            .iter()
            .flat_map(|u| u.tokens.iter().cloned())
            .collect()
    }
}

/// Tokenize every utterance of every conversation with the config stopwords.
pub fn tokenize_conversations(
    conversations: &[Conversation],
    config: &CurationConfig,
) -> Vec<ConversationTokens> {
    conversations
        .iter()
        .map(|conv| ConversationTokens {
            scene_index: conv.scene_index,
            utterances: conv
                .utterances
                .iter()
                .map(|u| UtteranceTokens {
                    speaker_raw: u.speaker_raw.clone(),
                    tokens: tokenize_dialogue(&u.text, &config.stopwords),
                })
                .collect(),
        })
        .collect()
}

/// Select keywords: the union of the top-n words per LDA topic, minus the
/// blocklist. Each selected term carries its TF-IDF score and its strongest
/// topic.
pub fn select_keywords(
    model: &LdaModel,
    tfidf: &BTreeMap<String, f64>,
    config: &CurationConfig,
) -> Vec<KeywordScore> {
    let blocklist: BTreeSet<String> = config
        .blocklist
        .iter()
        .map(|s| normalize_surface(s))
        .collect();
    let top_n = config.keyword_params.top_n;
    let mut selected: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    for topic in 0..model.num_topics() {
        for (term, weight) in model.top_words(topic, top_n) {
            if blocklist.contains(&normalize_surface(&term)) {
                continue;
            }
            let entry = selected.entry(term).or_insert((topic, weight));
            if weight > entry.1 {
                *entry = (topic, weight);
            }
        }
    }
    selected
        .into_iter()
        .map(|(term, (topic, weight))| KeywordScore {
            tfidf: tfidf.get(&term).copied().unwrap_or(0.0),
            term,
            topic_id: Some(topic),
            topic_weight: Some(weight),
        })
        .collect()
}

/// Add selected keywords to the catalog as Keyword entities, recording the
/// scenes in which each term is spoken.
pub fn register_keywords(
    catalog: &mut EntityCatalog,
    keywords: &[KeywordScore],
    conversations: &[ConversationTokens],
) -> Result<(), ExtractError> {
    for score in keywords {
        let id = catalog.insert_entity(&score.term, EntityKind::Keyword)?;
        for conv in conversations {
            if conv
                .utterances
                .iter()
                .any(|u| u.tokens.iter().any(|t| t == &score.term))
            {
                catalog.record_occurrence(id, conv.scene_index);
            }
        }
    }
    Ok(())
}
