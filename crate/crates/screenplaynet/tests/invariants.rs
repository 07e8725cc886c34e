//! Property-based invariants: parser accounting, metric isomorphism
//! invariance, and edge-addition monotonicity.

mod support;

use proptest::prelude::*;
use screenplaynet::entities::EntityId;
use screenplaynet::graph::{FamilySelector, SubgraphView};
use screenplaynet::metrics::{avg_shortest_path, centrality, density, diameter, stats, Measure};
use screenplaynet::parser::{
    calibrate_layout, chunk_scenes, parse_script, segment_conversations, tag_lines, LineTag,
};
use std::collections::BTreeSet;
use support::{random_connected_graph, seeded_rng, DenseGraph};

// ---------------------------------------------------------------- parser

/// Build a small synthetic script from structural choices.
fn script_from_plan(plan: &[(u8, Vec<(u8, u8)>)]) -> String {
    let mut out = String::new();
    out.push_str("A TITLE LINE TO DISCARD\n\n");
    for (scene_idx, (loc, blocks)) in plan.iter().enumerate() {
        out.push_str(&format!("INT. PLACE {} - DAY\n\n", loc));
        // descriptions always outnumber dialogue lines: open with two
        out.push_str(&format!("Opening description for scene {scene_idx}.\n"));
        out.push_str("More description at the margin here.\n\n");
        for (kind, speaker) in blocks {
            match kind % 3 {
                0 => {
                    out.push_str("Another action paragraph stands alone.\n\n");
                }
                1 => {
                    out.push_str(&format!("          SPEAKER {}\n", speaker % 5));
                    out.push_str("     A line of dialogue here.\n\n");
                }
                _ => {
                    out.push_str("CUT TO:\n\n");
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parser_accounts_for_every_line(plan in proptest::collection::vec(
        (0u8..6, proptest::collection::vec((0u8..=2, 0u8..5), 0..6)), 1..8))
    {
        let text = script_from_plan(&plan);
        let chunks = chunk_scenes(&text).unwrap();
        let layout = calibrate_layout(&chunks);

        // chunk accounting: discarded prologue + headings + bodies == input
        let lines: Vec<&str> = text.split('\n').collect();
        let prologue = lines
            .iter()
            .position(|l| screenplaynet::parser::is_heading_line(l))
            .unwrap();
        let chunk_lines: usize = chunks.iter().map(|c| 1 + c.body.len()).sum();
        prop_assert_eq!(prologue + chunk_lines, lines.len());

        // every non-blank body line gets exactly one tag
        for chunk in &chunks {
            let tags = tag_lines(chunk, &layout);
            prop_assert_eq!(tags.len(), chunk.body.len());
            for (line, tag) in chunk.body.iter().zip(tags.iter()) {
                if line.trim().is_empty() {
                    prop_assert_eq!(tag, &LineTag::Blank);
                } else {
                    prop_assert!(!matches!(tag, LineTag::Blank));
                }
            }
        }

        // scene order preservation and conversation partition
        let scenes = parse_script(&text).unwrap();
        for (i, scene) in scenes.iter().enumerate() {
            prop_assert_eq!(scene.index, i);
        }
        let total_utterances: usize = scenes.iter().map(|s| s.utterances().count()).sum();
        let across_conversations: usize = scenes
            .iter()
            .flat_map(segment_conversations)
            .map(|c| c.utterances.len())
            .sum();
        prop_assert_eq!(total_utterances, across_conversations);
    }

    #[test]
    fn heading_roundtrip_is_idempotent(loc in "[A-Z][A-Z ]{0,18}", time in proptest::option::of("[A-Z]{3,9}")) {
        let line = match &time {
            Some(t) => format!("INT. {} - {}", loc.trim(), t),
            None => format!("INT. {}", loc.trim()),
        };
        prop_assume!(!loc.trim().is_empty());
        let h = screenplaynet::parser::parse_heading(&line);
        let reparsed = screenplaynet::parser::parse_heading(&h.to_heading_line());
        prop_assert_eq!(h, reparsed);
    }
}

// ---------------------------------------------------------------- metrics

fn relabeled(g: &DenseGraph, perm: &[u32]) -> SubgraphView {
    let nodes: BTreeSet<EntityId> = perm.iter().map(|p| EntityId(*p)).collect();
    let edges: BTreeSet<(EntityId, EntityId)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (EntityId(perm[a]), EntityId(perm[b])))
        .collect();
    SubgraphView::from_parts(FamilySelector::All, nodes, edges)
}

#[test]
fn isomorphism_invariance_of_stats_and_centrality() {
    let mut rng = seeded_rng(77);
    for case in 0..20 {
        let n = 5 + case % 20;
        let g = random_connected_graph(&mut rng, n, 0.2);
        let base = g.to_view();

        // a deterministic permutation: reverse plus offset
        let perm: Vec<u32> = (0..n as u32).map(|v| (n as u32 - 1 - v) + 1000).collect();
        let mapped = relabeled(&g, &perm);

        let a = stats(&base).unwrap();
        let b = stats(&mapped).unwrap();
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.edges, b.edges);
        assert_eq!(a.diameter, b.diameter);
        assert!((a.density - b.density).abs() < 1e-12);
        assert!((a.avg_clustering - b.avg_clustering).abs() < 1e-12);
        assert!((a.avg_shortest_path - b.avg_shortest_path).abs() < 1e-12);
        match (a.assortativity, b.assortativity) {
            (Some(x), Some(y)) => assert!((x - y).abs() < 1e-12),
            (x, y) => assert_eq!(x, y),
        }

        for measure in [
            Measure::Degree,
            Measure::Betweenness,
            Measure::InfluenceScore,
        ] {
            let ta = centrality(&base, measure).unwrap();
            let tb = centrality(&mapped, measure).unwrap();
            for (v, mapped_id) in perm.iter().enumerate() {
                let orig = ta.scores[&EntityId(v as u32)];
                let moved = tb.scores[&EntityId(*mapped_id)];
                assert!(
                    (orig - moved).abs() < 1e-9,
                    "{measure:?} changed under relabeling"
                );
            }
        }
    }
}

#[test]
fn adding_edges_is_monotone_for_density_and_paths() {
    let mut rng = seeded_rng(123);
    for _ in 0..20 {
        let g = random_connected_graph(&mut rng, 12, 0.15);
        let view = g.to_view();
        let d0 = density(&view);
        let l0 = avg_shortest_path(&view).unwrap();
        let diam0 = diameter(&view).unwrap();

        // add the first missing edge
        let mut g2 = g.clone();
        'outer: for a in 0..g.n {
            for b in a + 1..g.n {
                if !g.adj[a][b] {
                    g2.add_edge(a, b);
                    break 'outer;
                }
            }
        }
        let view2 = g2.to_view();
        assert!(density(&view2) >= d0);
        assert!(avg_shortest_path(&view2).unwrap() <= l0 + 1e-12);
        assert!(diameter(&view2).unwrap() <= diam0);
    }
}
