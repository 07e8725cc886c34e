//! Global topological statistics and node centrality measures over subgraph
//! views.
//!
//! Path statistics (diameter, average shortest path) fall back to the giant
//! component when a view is disconnected; the stats tuple records when that
//! convention was applied. All functions are pure over immutable views and
//! deterministic: equal-score ranking ties always break by ascending node id.

use crate::entities::EntityId;
use crate::graph::{components, giant_component, SubgraphView};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

/// Self-weight added to the adjacency operator on bipartite views so power
/// iteration cannot oscillate between the two sides. A uniform diagonal
/// shift leaves every eigenvector unchanged, so the magnitude only controls
/// the convergence rate: the paired +/- extremal eigenvalues of a bipartite
/// adjacency need a shift on the order of the spectral radius to separate
/// within the iteration budget.
pub const BIPARTITE_SHIFT: f64 = 1.0;
/// Power iteration stops when successive iterates differ by less than this.
pub const EIGEN_TOLERANCE: f64 = 1e-10;
/// Power iteration gives up after this many iterations.
pub const EIGEN_MAX_ITERATIONS: usize = 10_000;
/// Additive floor inside the influence score so zero betweenness does not
/// erase the degree factor entirely.
pub const INFLUENCE_EPSILON: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("metric requires a non-empty graph view")]
    EmptyGraph,
    #[error("assortativity requires at least one edge")]
    NoEdges,
    #[error("eigenvector power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
}

/// The per-view statistics tuple: node and edge counts, density, diameter,
/// average clustering coefficient, degree assortativity and average shortest
/// path length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStats {
    pub nodes: usize,
    pub edges: usize,
    pub density: f64,
    pub diameter: usize,
    pub avg_clustering: f64,
    /// `None` marks the undefined case (zero degree variance at edge ends).
    pub assortativity: Option<f64>,
    pub avg_shortest_path: f64,
    /// True when the view was disconnected and path statistics were taken on
    /// the giant component.
    pub giant_component_applied: bool,
    pub giant_component_nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Measure {
    Degree,
    Betweenness,
    Eigenvector,
    InfluenceScore,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Degree,
        Measure::Betweenness,
        Measure::Eigenvector,
        Measure::InfluenceScore,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Betweenness => "betweenness",
            Measure::Eigenvector => "eigenvector",
            Measure::InfluenceScore => "influence_score",
        }
    }
}

/// Scores for one measure plus the deterministic ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityTable {
    pub measure: Measure,
    pub scores: BTreeMap<EntityId, f64>,
    /// Node ids sorted by descending score, ties by ascending id.
    pub ranking: Vec<EntityId>,
}

impl CentralityTable {
    fn from_scores(measure: Measure, scores: BTreeMap<EntityId, f64>) -> CentralityTable {
        let mut ranking: Vec<EntityId> = scores.keys().copied().collect();
        ranking.sort_by(|a, b| scores[b].total_cmp(&scores[a]).then(a.cmp(b)));
        CentralityTable {
            measure,
            scores,
            ranking,
        }
    }

    pub fn top(&self, k: usize) -> impl Iterator<Item = (EntityId, f64)> + '_ {
        self.ranking.iter().take(k).map(|id| (*id, self.scores[id]))
    }
}

/// Edge density: `2E / (V (V - 1))`; zero below two nodes.
pub fn density(view: &SubgraphView) -> f64 {
    let v = view.node_count();
    if v < 2 {
        return 0.0;
    }
    2.0 * view.edge_count() as f64 / (v as f64 * (v as f64 - 1.0))
}

/// BFS distances from `start` over a dense-index adjacency; unreached nodes
/// stay `usize::MAX`.
fn bfs_distances(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Diameter: maximum eccentricity over the giant component.
pub fn diameter(view: &SubgraphView) -> Result<usize, MetricsError> {
    let giant = giant_component(view).map_err(|_| MetricsError::EmptyGraph)?;
    let (_, adj) = giant.adjacency();
    let mut best = 0;
    for start in 0..adj.len() {
        let dist = bfs_distances(&adj, start);
        for d in dist {
            if d != usize::MAX && d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Average shortest path length: mean BFS distance over ordered pairs of
/// distinct nodes in the giant component.
pub fn avg_shortest_path(view: &SubgraphView) -> Result<f64, MetricsError> {
    let giant = giant_component(view).map_err(|_| MetricsError::EmptyGraph)?;
    let (_, adj) = giant.adjacency();
    let n = adj.len();
    if n < 2 {
        return Ok(0.0);
    }
    let mut total = 0usize;
    for start in 0..n {
        for d in bfs_distances(&adj, start) {
            if d != usize::MAX {
                total += d;
            }
        }
    }
    Ok(total as f64 / (n * (n - 1)) as f64)
}

/// Average local clustering coefficient over every node of the view; nodes
/// of degree below two contribute zero.
pub fn avg_clustering(view: &SubgraphView) -> Result<f64, MetricsError> {
    if view.nodes.is_empty() {
        return Err(MetricsError::EmptyGraph);
    }
    let (_, adj) = view.adjacency();
    let mut total = 0.0;
    for neighbors in &adj {
        let degree = neighbors.len();
        if degree < 2 {
            continue;
        }
        let mut triangles = 0usize;
        for (i, &a) in neighbors.iter().enumerate() {
            for &b in &neighbors[i + 1..] {
                if adj[a].binary_search(&b).is_ok() {
                    triangles += 1;
                }
            }
        }
        total += 2.0 * triangles as f64 / (degree as f64 * (degree as f64 - 1.0));
    }
    Ok(total / adj.len() as f64)
}

/// Degree assortativity: Pearson correlation of degrees over edge endpoint
/// pairs, each undirected edge contributing both orientations. `None` when
/// the degree variance at edge ends is zero (e.g. regular graphs).
pub fn assortativity(view: &SubgraphView) -> Result<Option<f64>, MetricsError> {
    if view.edges.is_empty() {
        return Err(MetricsError::NoEdges);
    }
    let (ids, adj) = view.adjacency();
    let index: BTreeMap<EntityId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let mut xs: Vec<f64> = Vec::with_capacity(view.edges.len() * 2);
    let mut ys: Vec<f64> = Vec::with_capacity(view.edges.len() * 2);
    for (a, b) in &view.edges {
        let da = adj[index[a]].len() as f64;
        let db = adj[index[b]].len() as f64;
        xs.push(da);
        ys.push(db);
        xs.push(db);
        ys.push(da);
    }
    let n = xs.len() as f64;
    let mean_x: f64 = xs.iter().sum::<f64>() / n;
    let mean_y: f64 = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        cov += (x - mean_x) * (y - mean_y);
        var_x += (x - mean_x) * (x - mean_x);
        var_y += (y - mean_y) * (y - mean_y);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Ok(None);
    }
    Ok(Some(cov / (var_x.sqrt() * var_y.sqrt())))
}

/// Degree centrality: the raw degree of every node.
pub fn degree_centrality(view: &SubgraphView) -> CentralityTable {
    let (ids, adj) = view.adjacency();
    let scores = ids
        .iter()
        .zip(adj.iter())
        .map(|(id, neighbors)| (*id, neighbors.len() as f64))
        .collect();
    CentralityTable::from_scores(Measure::Degree, scores)
}

/// Exact unweighted betweenness via Brandes' dependency accumulation.
/// Undirected convention: each pair is counted once.
pub fn betweenness(view: &SubgraphView) -> CentralityTable {
    let (ids, adj) = view.adjacency();
    let n = adj.len();
    let mut centrality = vec![0.0f64; n];

    for source in 0..n {
        let mut stack: Vec<usize> = Vec::with_capacity(n);
        let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![usize::MAX; n];
        sigma[source] = 1.0;
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            stack.push(u);
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[u] + 1 {
                    sigma[w] += sigma[u];
                    predecessors[w].push(u);
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        while let Some(w) = stack.pop() {
            for &p in &predecessors[w] {
                delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w]);
            }
            if w != source {
                centrality[w] += delta[w];
            }
        }
    }

    let scores = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (*id, centrality[i] / 2.0))
        .collect();
    CentralityTable::from_scores(Measure::Betweenness, scores)
}

/// Two-color the graph; `true` when no odd cycle exists.
fn is_bipartite(adj: &[Vec<usize>]) -> bool {
    let mut color: Vec<i8> = vec![-1; adj.len()];
    for start in 0..adj.len() {
        if color[start] != -1 {
            continue;
        }
        color[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if color[w] == -1 {
                    color[w] = 1 - color[u];
                    queue.push_back(w);
                } else if color[w] == color[u] {
                    return false;
                }
            }
        }
    }
    true
}

/// Eigenvector centrality by power iteration over the giant component,
/// L2-normalized with non-negative orientation. Bipartite components get a
/// small diagonal shift, which breaks the period-two oscillation without
/// changing the eigenvectors. Nodes outside the giant component score zero.
pub fn eigenvector_centrality(view: &SubgraphView) -> Result<CentralityTable, MetricsError> {
    let giant = giant_component(view).map_err(|_| MetricsError::EmptyGraph)?;
    let (giant_ids, adj) = giant.adjacency();
    let n = adj.len();
    let shift = if is_bipartite(&adj) {
        BIPARTITE_SHIFT
    } else {
        0.0
    };

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut converged = false;
    for _ in 0..EIGEN_MAX_ITERATIONS {
        let mut y = vec![0.0f64; n];
        for (u, neighbors) in adj.iter().enumerate() {
            let mut sum = shift * x[u];
            for &w in neighbors {
                sum += x[w];
            }
            y[u] = sum;
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            // No edges: the uniform vector is already the answer.
            converged = true;
            break;
        }
        for v in &mut y {
            *v /= norm;
        }
        let max_diff = x
            .iter()
            .zip(y.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        x = y;
        if max_diff < EIGEN_TOLERANCE {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(MetricsError::NoConvergence(EIGEN_MAX_ITERATIONS));
    }
    if x.iter().sum::<f64>() < 0.0 {
        for v in &mut x {
            *v = -*v;
        }
    }

    let mut scores: BTreeMap<EntityId, f64> = view.nodes.iter().map(|id| (*id, 0.0)).collect();
    for (i, id) in giant_ids.iter().enumerate() {
        scores.insert(*id, x[i].max(0.0));
    }
    Ok(CentralityTable::from_scores(Measure::Eigenvector, scores))
}

fn min_max_normalize(table: &CentralityTable) -> BTreeMap<EntityId, f64> {
    let min = table.scores.values().copied().fold(f64::INFINITY, f64::min);
    let max = table
        .scores
        .values()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    table
        .scores
        .iter()
        .map(|(id, s)| {
            let norm = if max > min {
                (s - min) / (max - min)
            } else {
                0.0
            };
            (*id, norm)
        })
        .collect()
}

/// Combined local/global influence score: the geometric mean of min-max
/// normalized degree and betweenness,
/// `sqrt(deg_norm * (betw_norm + epsilon))`.
pub fn influence_score(view: &SubgraphView) -> CentralityTable {
    let deg = min_max_normalize(&degree_centrality(view));
    let betw = min_max_normalize(&betweenness(view));
    let scores = deg
        .iter()
        .map(|(id, d)| (*id, (d * (betw[id] + INFLUENCE_EPSILON)).sqrt()))
        .collect();
    CentralityTable::from_scores(Measure::InfluenceScore, scores)
}

pub fn centrality(view: &SubgraphView, measure: Measure) -> Result<CentralityTable, MetricsError> {
    match measure {
        Measure::Degree => Ok(degree_centrality(view)),
        Measure::Betweenness => Ok(betweenness(view)),
        Measure::Eigenvector => eigenvector_centrality(view),
        Measure::InfluenceScore => Ok(influence_score(view)),
    }
}

/// Assemble the full statistics tuple for a view.
pub fn stats(view: &SubgraphView) -> Result<LayerStats, MetricsError> {
    if view.nodes.is_empty() {
        return Err(MetricsError::EmptyGraph);
    }
    let component_count = components(view).len();
    let giant = giant_component(view).map_err(|_| MetricsError::EmptyGraph)?;
    Ok(LayerStats {
        nodes: view.node_count(),
        edges: view.edge_count(),
        density: density(view),
        diameter: diameter(view)?,
        avg_clustering: avg_clustering(view)?,
        assortativity: assortativity(view).ok().flatten(),
        avg_shortest_path: avg_shortest_path(view)?,
        giant_component_applied: component_count > 1,
        giant_component_nodes: giant.node_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySelector;
    use std::collections::BTreeSet;

    fn view(n: u32, edges: &[(u32, u32)]) -> SubgraphView {
        SubgraphView::from_parts(
            FamilySelector::All,
            (0..n).map(EntityId).collect(),
            edges
                .iter()
                .map(|(a, b)| (EntityId(*a), EntityId(*b)))
                .collect::<BTreeSet<_>>(),
        )
    }

    fn complete(n: u32) -> SubgraphView {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        view(n, &edges)
    }

    fn path(n: u32) -> SubgraphView {
        let edges: Vec<(u32, u32)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        view(n, &edges)
    }

    fn cycle(n: u32) -> SubgraphView {
        let mut edges: Vec<(u32, u32)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        view(n, &edges)
    }

    /// Star with `n` nodes total; node 0 is the center.
    fn star(n: u32) -> SubgraphView {
        let edges: Vec<(u32, u32)> = (1..n).map(|i| (0, i)).collect();
        view(n, &edges)
    }

    #[test]
    fn density_complete_and_empty() {
        assert_eq!(density(&complete(4)), 1.0);
        assert_eq!(density(&view(5, &[])), 0.0);
        assert_eq!(density(&view(1, &[])), 0.0);
    }

    #[test]
    fn diameter_path_and_cycle() {
        assert_eq!(diameter(&path(4)).unwrap(), 3);
        assert_eq!(diameter(&cycle(5)).unwrap(), 2);
        assert!(matches!(
            diameter(&view(0, &[])),
            Err(MetricsError::EmptyGraph)
        ));
    }

    #[test]
    fn clustering_triangle_star_paw() {
        assert_eq!(avg_clustering(&complete(3)).unwrap(), 1.0);
        assert_eq!(avg_clustering(&star(5)).unwrap(), 0.0);
        // paw: triangle 0-1-2 plus pendant 3 on node 2
        let paw = view(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]);
        assert!((avg_clustering(&paw).unwrap() - 7.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn assortativity_star_is_minus_one_complete_undefined() {
        let tau = assortativity(&star(4)).unwrap().unwrap();
        assert!((tau - (-1.0)).abs() < 1e-12);
        assert_eq!(assortativity(&complete(4)).unwrap(), None);
        assert!(matches!(
            assortativity(&view(3, &[])),
            Err(MetricsError::NoEdges)
        ));
    }

    #[test]
    fn avg_shortest_path_small_fixtures() {
        assert!((avg_shortest_path(&path(3)).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(avg_shortest_path(&complete(4)).unwrap(), 1.0);
    }

    #[test]
    fn degree_scores_and_isolated_nodes() {
        let s = star(5);
        let table = degree_centrality(&s);
        assert_eq!(table.scores[&EntityId(0)], 4.0);
        assert_eq!(table.ranking[0], EntityId(0));
        let lone = view(3, &[(0, 1)]);
        assert_eq!(degree_centrality(&lone).scores[&EntityId(2)], 0.0);
    }

    #[test]
    fn betweenness_closed_forms() {
        let table = betweenness(&star(5));
        assert!((table.scores[&EntityId(0)] - 6.0).abs() < 1e-12);
        for leaf in 1..5 {
            assert_eq!(table.scores[&EntityId(leaf)], 0.0);
        }
        let table = betweenness(&path(3));
        assert!((table.scores[&EntityId(1)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvector_symmetric_triangle() {
        let table = eigenvector_centrality(&complete(3)).unwrap();
        let expected = 1.0 / 3.0f64.sqrt();
        for i in 0..3 {
            assert!((table.scores[&EntityId(i)] - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn eigenvector_star_ratio_is_sqrt_n_minus_one() {
        // The star is bipartite; the diagonal shift must kick in for power
        // iteration to settle.
        let table = eigenvector_centrality(&star(5)).unwrap();
        let ratio = table.scores[&EntityId(0)] / table.scores[&EntityId(1)];
        assert!((ratio - 2.0).abs() < 1e-6);
    }

    #[test]
    fn eigenvector_disconnected_scores_zero_outside_giant() {
        let g = view(5, &[(0, 1), (1, 2), (3, 4)]);
        let table = eigenvector_centrality(&g).unwrap();
        assert_eq!(table.scores[&EntityId(3)], 0.0);
        assert_eq!(table.scores[&EntityId(4)], 0.0);
        assert!(table.scores[&EntityId(1)] > 0.0);
    }

    #[test]
    fn influence_regular_graph_all_equal_star_center_first() {
        let table = influence_score(&cycle(6));
        let first = table.scores[&EntityId(0)];
        assert!(table.scores.values().all(|s| (s - first).abs() < 1e-12));

        let table = influence_score(&star(5));
        assert_eq!(table.ranking[0], EntityId(0));
    }

    #[test]
    fn ranking_ties_break_by_ascending_id() {
        let table = degree_centrality(&view(4, &[(2, 3), (0, 1)]));
        assert_eq!(
            table.ranking,
            vec![EntityId(0), EntityId(1), EntityId(2), EntityId(3)]
        );
    }

    #[test]
    fn stats_single_edge_tuple() {
        let s = stats(&view(2, &[(0, 1)])).unwrap();
        assert_eq!(s.nodes, 2);
        assert_eq!(s.edges, 1);
        assert_eq!(s.density, 1.0);
        assert_eq!(s.diameter, 1);
        assert_eq!(s.avg_clustering, 0.0);
        assert_eq!(s.assortativity, None);
        assert_eq!(s.avg_shortest_path, 1.0);
        assert!(!s.giant_component_applied);
    }

    #[test]
    fn stats_marks_giant_component_convention() {
        let s = stats(&view(5, &[(0, 1), (1, 2), (3, 4)])).unwrap();
        assert!(s.giant_component_applied);
        assert_eq!(s.giant_component_nodes, 3);
        assert_eq!(s.diameter, 2);
        assert!((s.avg_shortest_path - 8.0 / 6.0).abs() < 1e-12);
    }
}
