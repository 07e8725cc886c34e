//! Graph and table writers: GraphML, MuxViz extended edge lists, JSON node/
//! edge dumps and the CSV report tables.
//!
//! Every writer emits elements in sorted id order with a fixed field layout,
//! so identical inputs produce byte-identical files.

use crate::entities::{EntityCatalog, EntityId, EntityKind};
use crate::graph::{layer_code, EdgeFamily, MultilayerGraph, SubgraphView};
use crate::report::{RankTable, ViewStatsRow};
use std::io::Write;
use std::path::Path;

fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            other => out.push(other),
        }
    }
    out
}

fn edge_family(catalog: &EntityCatalog, a: EntityId, b: EntityId) -> EdgeFamily {
    EdgeFamily::of(catalog.entity(a).kind, catalog.entity(b).kind)
}

/// Write a view as GraphML: node attributes `canonical_name` and `layer`,
/// edge attribute `family`.
pub fn export_graphml(
    view: &SubgraphView,
    catalog: &EntityCatalog,
    path: &Path,
) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#
    )?;
    writeln!(
        out,
        r#"  <key id="d0" for="node" attr.name="canonical_name" attr.type="string"/>"#
    )?;
    writeln!(
        out,
        r#"  <key id="d1" for="node" attr.name="layer" attr.type="string"/>"#
    )?;
    writeln!(
        out,
        r#"  <key id="d2" for="edge" attr.name="family" attr.type="string"/>"#
    )?;
    writeln!(
        out,
        r#"  <graph id="{}" edgedefault="undirected">"#,
        view.selector.name()
    )?;
    for id in &view.nodes {
        let entity = catalog.entity(*id);
        writeln!(
            out,
            r#"    <node id="n{}"><data key="d0">{}</data><data key="d1">{}</data></node>"#,
            id.0,
            xml_escape(&entity.canonical_name),
            layer_code(entity.kind)
        )?;
    }
    for (a, b) in &view.edges {
        writeln!(
            out,
            r#"    <edge source="n{}" target="n{}"><data key="d2">{}</data></edge>"#,
            a.0,
            b.0,
            edge_family(catalog, *a, *b).name()
        )?;
    }
    writeln!(out, "  </graph>")?;
    writeln!(out, "</graphml>")?;
    out.flush()
}

fn muxviz_layer_number(kind: EntityKind) -> u32 {
    match kind {
        EntityKind::Character => 1,
        EntityKind::Location => 2,
        EntityKind::Keyword => 3,
    }
}

/// Write the whole multilayer graph in MuxViz extended-edge-list form:
/// an edges file of `node layer node layer weight` lines plus companion
/// nodes and layers mapping files.
pub fn export_muxviz(
    graph: &MultilayerGraph,
    catalog: &EntityCatalog,
    dir: &Path,
) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;

    // Node ids are remapped to contiguous 1-based integers in sorted order.
    let ids: Vec<EntityId> = graph.nodes().keys().copied().collect();
    let numbering: std::collections::BTreeMap<EntityId, usize> =
        ids.iter().enumerate().map(|(i, id)| (*id, i + 1)).collect();

    let mut nodes = std::io::BufWriter::new(std::fs::File::create(dir.join("muxviz_nodes.txt"))?);
    writeln!(nodes, "nodeID nodeLabel")?;
    for id in &ids {
        let label = catalog.entity(*id).canonical_name.replace(' ', "_");
        writeln!(nodes, "{} {}", numbering[id], label)?;
    }
    nodes.flush()?;

    let mut layers = std::io::BufWriter::new(std::fs::File::create(dir.join("muxviz_layers.txt"))?);
    writeln!(layers, "layerID layerLabel")?;
    writeln!(layers, "1 Character")?;
    writeln!(layers, "2 Location")?;
    writeln!(layers, "3 Keyword")?;
    layers.flush()?;

    let mut edges = std::io::BufWriter::new(std::fs::File::create(dir.join("muxviz_edges.txt"))?);
    for family in EdgeFamily::ALL_FAMILIES {
        for (a, b) in graph.family_edges(family) {
            writeln!(
                edges,
                "{} {} {} {} 1",
                numbering[a],
                muxviz_layer_number(catalog.entity(*a).kind),
                numbering[b],
                muxviz_layer_number(catalog.entity(*b).kind),
            )?;
        }
    }
    edges.flush()
}

/// JSON dump of a view: sorted node and edge arrays.
pub fn export_json_graph(
    view: &SubgraphView,
    catalog: &EntityCatalog,
    path: &Path,
) -> std::io::Result<()> {
    #[derive(serde::Serialize)]
    struct Node<'a> {
        id: u32,
        name: &'a str,
        layer: &'a str,
    }
    #[derive(serde::Serialize)]
    struct Edge {
        source: u32,
        target: u32,
        family: &'static str,
    }
    #[derive(serde::Serialize)]
    struct Dump<'a> {
        view: &'a str,
        nodes: Vec<Node<'a>>,
        edges: Vec<Edge>,
    }
    let dump = Dump {
        view: view.selector.name(),
        nodes: view
            .nodes
            .iter()
            .map(|id| {
                let e = catalog.entity(*id);
                Node {
                    id: id.0,
                    name: &e.canonical_name,
                    layer: layer_code(e.kind),
                }
            })
            .collect(),
        edges: view
            .edges
            .iter()
            .map(|(a, b)| Edge {
                source: a.0,
                target: b.0,
                family: edge_family(catalog, *a, *b).name(),
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&dump).expect("serializable dump");
    std::fs::write(path, text + "\n")
}

/// Edge-list CSV of a view: `source,target,family` with canonical names.
pub fn export_csv_graph(
    view: &SubgraphView,
    catalog: &EntityCatalog,
    path: &Path,
) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["source", "target", "family"])?;
    for (a, b) in &view.edges {
        writer.write_record([
            catalog.entity(*a).canonical_name.as_str(),
            catalog.entity(*b).canonical_name.as_str(),
            edge_family(catalog, *a, *b).name(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn fmt_round(value: f64) -> String {
    format!("{:.2}", value)
}

/// The seven-row statistics table, one row per family view plus ALL.
/// Real-valued columns round to two decimals.
pub fn stats_csv_string(rows: &[ViewStatsRow]) -> Result<String, csv::Error> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "view",
        "nodes",
        "edges",
        "density",
        "diameter",
        "avg_clustering",
        "assortativity",
        "avg_shortest_path",
        "giant_component_applied",
    ])?;
    for row in rows {
        writer.write_record([
            row.view.clone(),
            row.nodes.to_string(),
            row.edges.to_string(),
            fmt_round(row.density),
            row.diameter.map(|d| d.to_string()).unwrap_or_default(),
            row.avg_clustering.map(fmt_round).unwrap_or_default(),
            row.assortativity.map(fmt_round).unwrap_or_default(),
            row.avg_shortest_path.map(fmt_round).unwrap_or_default(),
            row.giant_component_applied
                .map(|b| b.to_string())
                .unwrap_or_default(),
        ])?;
    }
    let bytes = writer.into_inner().expect("in-memory writer");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_stats_csv(rows: &[ViewStatsRow], path: &Path) -> Result<(), csv::Error> {
    let text = stats_csv_string(rows)?;
    std::fs::write(path, text).map_err(csv::Error::from)?;
    Ok(())
}

/// Flat CSV of every rank table.
pub fn rankings_csv_string(tables: &[RankTable]) -> Result<String, csv::Error> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "view",
        "measure",
        "rank",
        "name",
        "score",
        "appearance_count",
        "appearance_fraction",
    ])?;
    for table in tables {
        for (rank, entry) in table.entries.iter().enumerate() {
            writer.write_record([
                table.view.clone(),
                table.measure.clone(),
                (rank + 1).to_string(),
                entry.name.clone(),
                format!("{:.6}", entry.score),
                entry.appearance_count.to_string(),
                format!("{:.4}", entry.appearance_fraction),
            ])?;
        }
    }
    let bytes = writer.into_inner().expect("in-memory writer");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_rankings_csv(tables: &[RankTable], path: &Path) -> Result<(), csv::Error> {
    let text = rankings_csv_string(tables)?;
    std::fs::write(path, text).map_err(csv::Error::from)?;
    Ok(())
}
