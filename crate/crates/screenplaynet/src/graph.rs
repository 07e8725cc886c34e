//! The three-layer multilayer graph: characters, locations and keywords,
//! joined by six undirected, unweighted edge families.
//!
//! Edges are built from parsed scenes and conversations:
//! conversation participation (CC), scene-to-scene location transitions (LL),
//! keyword co-occurrence within a conversation (KK), keywords spoken in an
//! utterance (CK), scene presence (CL) and keywords mentioned at a location
//! (KL). Every family is a simple graph: duplicates collapse and self-loops
//! never form.

use crate::entities::{ConversationTokens, EntityCatalog, EntityId, EntityKind};
use crate::parser::Scene;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    /// The catalog or a conversation references a scene index outside the
    /// parsed script.
    #[error("dangling reference to scene {scene_index}")]
    DanglingReference { scene_index: usize },
    #[error("operation on an empty graph view")]
    EmptyGraph,
}

/// One of the six typed relation sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeFamily {
    CC,
    LL,
    KK,
    CK,
    CL,
    KL,
}

impl EdgeFamily {
    pub const ALL_FAMILIES: [EdgeFamily; 6] = [
        EdgeFamily::CC,
        EdgeFamily::LL,
        EdgeFamily::KK,
        EdgeFamily::CK,
        EdgeFamily::CL,
        EdgeFamily::KL,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EdgeFamily::CC => "CC",
            EdgeFamily::LL => "LL",
            EdgeFamily::KK => "KK",
            EdgeFamily::CK => "CK",
            EdgeFamily::CL => "CL",
            EdgeFamily::KL => "KL",
        }
    }

    /// The family an edge between these two layers belongs to, if any.
    pub fn of(a: EntityKind, b: EntityKind) -> EdgeFamily {
        use EntityKind::*;
        // Ord on EntityKind is Character < Location < Keyword.
        match (a.min(b), a.max(b)) {
            (Character, Character) => EdgeFamily::CC,
            (Location, Location) => EdgeFamily::LL,
            (Keyword, Keyword) => EdgeFamily::KK,
            (Character, Keyword) => EdgeFamily::CK,
            (Character, Location) => EdgeFamily::CL,
            (Location, Keyword) => EdgeFamily::KL,
            _ => unreachable!("pair is normalized by min/max"),
        }
    }
}

/// Single-character layer code used in exports: C, L or K.
pub fn layer_code(kind: EntityKind) -> &'static str {
    match kind {
        EntityKind::Character => "C",
        EntityKind::Location => "L",
        EntityKind::Keyword => "K",
    }
}

/// A view selector: one edge family, or the flattened whole graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilySelector {
    Family(EdgeFamily),
    All,
}

impl FamilySelector {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySelector::Family(f) => f.name(),
            FamilySelector::All => "ALL",
        }
    }
}

fn ordered(a: EntityId, b: EntityId) -> (EntityId, EntityId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The assembled multilayer graph.
#[derive(Debug, Clone, Default)]
pub struct MultilayerGraph {
    nodes: BTreeMap<EntityId, EntityKind>,
    families: BTreeMap<EdgeFamily, BTreeSet<(EntityId, EntityId)>>,
}

impl MultilayerGraph {
    pub fn nodes(&self) -> &BTreeMap<EntityId, EntityKind> {
        &self.nodes
    }

    pub fn layer(&self, kind: EntityKind) -> impl Iterator<Item = EntityId> + '_ {
        self.nodes
            .iter()
            .filter(move |(_, k)| **k == kind)
            .map(|(id, _)| *id)
    }

    pub fn family_edges(&self, family: EdgeFamily) -> &BTreeSet<(EntityId, EntityId)> {
        static EMPTY: BTreeSet<(EntityId, EntityId)> = BTreeSet::new();
        self.families.get(&family).unwrap_or(&EMPTY)
    }

    fn add_edge(&mut self, family: EdgeFamily, a: EntityId, b: EntityId) {
        if a == b {
            return;
        }
        self.families
            .entry(family)
            .or_default()
            .insert(ordered(a, b));
    }
}

/// Build the multilayer graph from parsed scenes, tokenized conversations
/// and the finished entity catalog (keywords already registered).
pub fn build_graph(
    scenes: &[Scene],
    conversations: &[ConversationTokens],
    catalog: &EntityCatalog,
) -> Result<MultilayerGraph, GraphError> {
    let mut graph = MultilayerGraph::default();
    for entity in catalog.entities() {
        graph.nodes.insert(entity.id, entity.kind);
    }
    for family in EdgeFamily::ALL_FAMILIES {
        graph.families.entry(family).or_default();
    }

    // Keyword terms match tokens exactly (both lowercase).
    let keyword_ids: BTreeMap<&str, EntityId> = catalog
        .of_kind(EntityKind::Keyword)
        .map(|e| (e.canonical_name.as_str(), e.id))
        .collect();

    // Resolved location of each scene, if any.
    let scene_locations: Vec<Option<EntityId>> = scenes
        .iter()
        .map(|scene| {
            catalog
                .resolve_alias(&scene.header.location_raw)
                .filter(|id| catalog.entity(*id).kind == EntityKind::Location)
        })
        .collect();

    // LL: temporal transitions between distinct consecutive locations.
    for window in scene_locations.windows(2) {
        if let (Some(a), Some(b)) = (window[0], window[1]) {
            graph.add_edge(EdgeFamily::LL, a, b);
        }
    }

    for conv in conversations {
        if conv.scene_index >= scenes.len() {
            return Err(GraphError::DanglingReference {
                scene_index: conv.scene_index,
            });
        }
        let location = scene_locations[conv.scene_index];

        let mut participants: BTreeSet<EntityId> = BTreeSet::new();
        let mut conv_keywords: BTreeSet<EntityId> = BTreeSet::new();
        for utterance in &conv.utterances {
            let speaker = catalog
                .resolve_alias(&utterance.speaker_raw)
                .filter(|id| catalog.entity(*id).kind == EntityKind::Character);
            if let Some(id) = speaker {
                participants.insert(id);
            }
            let mut utterance_keywords: BTreeSet<EntityId> = BTreeSet::new();
            for token in &utterance.tokens {
                if let Some(kid) = keyword_ids.get(token.as_str()) {
                    utterance_keywords.insert(*kid);
                }
            }
            // CK: the speaker is linked to every keyword of this utterance.
            if let Some(speaker) = speaker {
                for kid in &utterance_keywords {
                    graph.add_edge(EdgeFamily::CK, speaker, *kid);
                }
            }
            conv_keywords.extend(utterance_keywords);
        }

        // CC: every unordered pair of distinct participants.
        let participants: Vec<EntityId> = participants.into_iter().collect();
        for (i, a) in participants.iter().enumerate() {
            for b in &participants[i + 1..] {
                graph.add_edge(EdgeFamily::CC, *a, *b);
            }
        }

        // KK: keywords co-occurring in this conversation.
        let conv_keywords: Vec<EntityId> = conv_keywords.into_iter().collect();
        for (i, a) in conv_keywords.iter().enumerate() {
            for b in &conv_keywords[i + 1..] {
                graph.add_edge(EdgeFamily::KK, *a, *b);
            }
        }

        // KL: keywords mentioned in a conversation taking place at a location.
        if let Some(loc) = location {
            for kid in &conv_keywords {
                graph.add_edge(EdgeFamily::KL, *kid, loc);
            }
        }
    }

    // CL: a character appears in a scene taking place at a location.
    for entity in catalog.entities() {
        if entity.kind != EntityKind::Character {
            continue;
        }
        if let Some(occurrences) = catalog.occurrences(entity.id) {
            for &scene_index in occurrences {
                if scene_index >= scenes.len() {
                    return Err(GraphError::DanglingReference { scene_index });
                }
                if let Some(loc) = scene_locations[scene_index] {
                    graph.add_edge(EdgeFamily::CL, entity.id, loc);
                }
            }
        }
    }

    Ok(graph)
}

/// An induced subgraph: a node set plus an undirected simple edge set.
///
/// Single-family selectors over one layer keep the whole layer (isolated
/// nodes included); cross-layer selectors keep only the endpoints of the
/// family's edges; `All` flattens every family into one simple graph over
/// all nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphView {
    pub selector: FamilySelector,
    pub nodes: BTreeSet<EntityId>,
    pub edges: BTreeSet<(EntityId, EntityId)>,
}

impl SubgraphView {
    /// Assemble a view directly from parts; useful for computing metrics on
    /// arbitrary graphs.
    pub fn from_parts(
        selector: FamilySelector,
        nodes: BTreeSet<EntityId>,
        edges: BTreeSet<(EntityId, EntityId)>,
    ) -> SubgraphView {
        let edges = edges
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| ordered(a, b))
            .collect();
        SubgraphView {
            selector,
            nodes,
            edges,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted-neighbor adjacency over dense indices, paired with the sorted
    /// node ids the indices map back to.
    pub fn adjacency(&self) -> (Vec<EntityId>, Vec<Vec<usize>>) {
        let ids: Vec<EntityId> = self.nodes.iter().copied().collect();
        let index: BTreeMap<EntityId, usize> =
            ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (a, b) in &self.edges {
            let (i, j) = (index[a], index[b]);
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        (ids, adj)
    }
}

/// Extract the view for one family selector.
pub fn subgraph(graph: &MultilayerGraph, selector: FamilySelector) -> SubgraphView {
    match selector {
        FamilySelector::Family(family) => {
            let edges = graph.family_edges(family).clone();
            let nodes: BTreeSet<EntityId> = match family {
                EdgeFamily::CC => graph.layer(EntityKind::Character).collect(),
                EdgeFamily::LL => graph.layer(EntityKind::Location).collect(),
                EdgeFamily::KK => graph.layer(EntityKind::Keyword).collect(),
                EdgeFamily::CK | EdgeFamily::CL | EdgeFamily::KL => {
                    edges.iter().flat_map(|(a, b)| [*a, *b]).collect()
                }
            };
            SubgraphView {
                selector,
                nodes,
                edges,
            }
        }
        FamilySelector::All => {
            let nodes: BTreeSet<EntityId> = graph.nodes.keys().copied().collect();
            let mut edges: BTreeSet<(EntityId, EntityId)> = BTreeSet::new();
            for family in EdgeFamily::ALL_FAMILIES {
                edges.extend(graph.family_edges(family).iter().copied());
            }
            SubgraphView {
                selector,
                nodes,
                edges,
            }
        }
    }
}

/// Connected components of a view, each a sorted node list.
pub fn components(view: &SubgraphView) -> Vec<Vec<EntityId>> {
    let (ids, adj) = view.adjacency();
    let mut seen = vec![false; ids.len()];
    let mut result = Vec::new();
    for start in 0..ids.len() {
        if seen[start] {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut component = Vec::new();
        while let Some(i) = queue.pop_front() {
            component.push(ids[i]);
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        component.sort_unstable();
        result.push(component);
    }
    result
}

/// The connected component with the most nodes; ties break toward the
/// component containing the smallest entity id.
pub fn giant_component(view: &SubgraphView) -> Result<SubgraphView, GraphError> {
    if view.nodes.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let comps = components(view);
    let giant = comps
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .expect("non-empty view has at least one component");
    let nodes: BTreeSet<EntityId> = giant.iter().copied().collect();
    let edges = view
        .edges
        .iter()
        .filter(|(a, b)| nodes.contains(a) && nodes.contains(b))
        .copied()
        .collect();
    Ok(SubgraphView {
        selector: view.selector,
        nodes,
        edges,
    })
}

/// Scene appearance counts: how many scenes an entity occurs in, and the
/// fraction of all scenes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Appearance {
    pub count: usize,
    pub fraction: f64,
}

pub fn appearance_counts(
    catalog: &EntityCatalog,
    scenes: &[Scene],
) -> BTreeMap<EntityId, Appearance> {
    let total = scenes.len();
    catalog
        .entities()
        .iter()
        .map(|e| {
            let count = catalog.occurrences(e.id).map_or(0, |s| s.len());
            let fraction = if total == 0 {
                0.0
            } else {
                count as f64 / total as f64
            };
            (e.id, Appearance { count, fraction })
        })
        .collect()
}
