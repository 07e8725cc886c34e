//! Report assembly: per-view statistics rows, centrality rank tables and
//! optional side-by-side comparison against a reference statistics file.

use crate::entities::{EntityCatalog, EntityId, KeywordScore};
use crate::graph::{subgraph, Appearance, EdgeFamily, FamilySelector, MultilayerGraph};
use crate::metrics::{centrality, stats, Measure, MetricsError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Fixed view order used everywhere a report lists all seven views.
pub const VIEW_ORDER: [FamilySelector; 7] = [
    FamilySelector::All,
    FamilySelector::Family(EdgeFamily::CC),
    FamilySelector::Family(EdgeFamily::LL),
    FamilySelector::Family(EdgeFamily::KK),
    FamilySelector::Family(EdgeFamily::CL),
    FamilySelector::Family(EdgeFamily::CK),
    FamilySelector::Family(EdgeFamily::KL),
];

/// Views that carry centrality rankings: the three layers plus the
/// flattened multilayer graph.
pub const RANKED_VIEWS: [FamilySelector; 4] = [
    FamilySelector::Family(EdgeFamily::CC),
    FamilySelector::Family(EdgeFamily::KK),
    FamilySelector::Family(EdgeFamily::LL),
    FamilySelector::All,
];

/// One row of the statistics table. Metrics are `None` for empty views,
/// keeping the table at exactly seven rows regardless of input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewStatsRow {
    pub view: String,
    pub nodes: usize,
    pub edges: usize,
    pub density: f64,
    pub diameter: Option<usize>,
    pub avg_clustering: Option<f64>,
    pub assortativity: Option<f64>,
    pub avg_shortest_path: Option<f64>,
    pub giant_component_applied: Option<bool>,
    pub giant_component_nodes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub name: String,
    pub score: f64,
    pub appearance_count: usize,
    pub appearance_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub view: String,
    pub measure: String,
    pub entries: Vec<RankEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityCounts {
    pub characters: usize,
    pub locations: usize,
    pub keywords: usize,
}

/// Reference statistics for one view, loaded from a reference file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceViewRow {
    pub view: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_clustering: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assortativity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_shortest_path: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceStats {
    pub label: String,
    pub views: Vec<ReferenceViewRow>,
}

/// Computed value printed next to the reference value; no agreement is
/// enforced here, the comparison is informational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub view: String,
    pub metric: String,
    pub computed: Option<f64>,
    pub reference: f64,
}

/// The full run report serialized to `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub script_path: String,
    pub config_path: String,
    pub seed: u64,
    pub scene_count: usize,
    pub conversation_count: usize,
    pub entity_counts: EntityCounts,
    pub views: Vec<ViewStatsRow>,
    pub rankings: Vec<RankTable>,
    pub keywords: Vec<KeywordScore>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_comparison: Option<Vec<ReferenceRow>>,
}

/// Compute the statistics row for one view; empty views produce a row of
/// `None` metrics instead of an error.
pub fn view_stats_row(graph: &MultilayerGraph, selector: FamilySelector) -> ViewStatsRow {
    let view = subgraph(graph, selector);
    match stats(&view) {
        Ok(s) => ViewStatsRow {
            view: selector.name().to_string(),
            nodes: s.nodes,
            edges: s.edges,
            density: s.density,
            diameter: Some(s.diameter),
            avg_clustering: Some(s.avg_clustering),
            assortativity: s.assortativity,
            avg_shortest_path: Some(s.avg_shortest_path),
            giant_component_applied: Some(s.giant_component_applied),
            giant_component_nodes: Some(s.giant_component_nodes),
        },
        Err(MetricsError::EmptyGraph) => ViewStatsRow {
            view: selector.name().to_string(),
            nodes: view.node_count(),
            edges: view.edge_count(),
            density: 0.0,
            diameter: None,
            avg_clustering: None,
            assortativity: None,
            avg_shortest_path: None,
            giant_component_applied: None,
            giant_component_nodes: None,
        },
        Err(other) => unreachable!("stats only fails on empty views: {other}"),
    }
}

/// Top-k table for one view and measure, with the appearance column.
pub fn rank_report(
    graph: &MultilayerGraph,
    catalog: &EntityCatalog,
    appearances: &BTreeMap<EntityId, Appearance>,
    selector: FamilySelector,
    measure: Measure,
    k: usize,
) -> Result<RankTable, MetricsError> {
    let view = subgraph(graph, selector);
    let entries = if view.nodes.is_empty() {
        Vec::new()
    } else {
        let table = centrality(&view, measure)?;
        table
            .top(k)
            .map(|(id, score)| {
                let appearance = appearances.get(&id).copied().unwrap_or(Appearance {
                    count: 0,
                    fraction: 0.0,
                });
                RankEntry {
                    name: catalog.entity(id).canonical_name.clone(),
                    score,
                    appearance_count: appearance.count,
                    appearance_fraction: appearance.fraction,
                }
            })
            .collect()
    };
    Ok(RankTable {
        view: selector.name().to_string(),
        measure: measure.name().to_string(),
        entries,
    })
}

/// All rank tables in fixed order: ranked views x measures.
pub fn all_rank_tables(
    graph: &MultilayerGraph,
    catalog: &EntityCatalog,
    appearances: &BTreeMap<EntityId, Appearance>,
    k: usize,
) -> Result<Vec<RankTable>, MetricsError> {
    let mut tables = Vec::new();
    for selector in RANKED_VIEWS {
        for measure in Measure::ALL {
            tables.push(rank_report(
                graph,
                catalog,
                appearances,
                selector,
                measure,
                k,
            )?);
        }
    }
    Ok(tables)
}

/// Build the side-by-side comparison for every metric the reference file
/// provides.
pub fn reference_comparison(
    computed: &[ViewStatsRow],
    reference: &ReferenceStats,
) -> Vec<ReferenceRow> {
    let mut rows = Vec::new();
    for ref_view in &reference.views {
        let Some(row) = computed.iter().find(|r| r.view == ref_view.view) else {
            continue;
        };
        let pairs: [(&str, Option<f64>, Option<f64>); 7] = [
            ("nodes", Some(row.nodes as f64), ref_view.nodes),
            ("edges", Some(row.edges as f64), ref_view.edges),
            ("density", Some(row.density), ref_view.density),
            (
                "diameter",
                row.diameter.map(|d| d as f64),
                ref_view.diameter,
            ),
            (
                "avg_clustering",
                row.avg_clustering,
                ref_view.avg_clustering,
            ),
            ("assortativity", row.assortativity, ref_view.assortativity),
            (
                "avg_shortest_path",
                row.avg_shortest_path,
                ref_view.avg_shortest_path,
            ),
        ];
        for (metric, computed, reference) in pairs {
            if let Some(reference) = reference {
                rows.push(ReferenceRow {
                    view: ref_view.view.clone(),
                    metric: metric.to_string(),
                    computed,
                    reference,
                });
            }
        }
    }
    rows
}
