//! Shared test support: independent brute-force oracles and seeded graph
//! generators. Every oracle here takes a different algorithmic route than
//! the library implementation it checks.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use screenplaynet::entities::EntityId;
use screenplaynet::graph::{FamilySelector, SubgraphView};
use std::collections::BTreeSet;

pub const INF: usize = usize::MAX / 4;

/// An undirected simple graph on nodes 0..n as an adjacency matrix.
#[derive(Clone)]
pub struct DenseGraph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl DenseGraph {
    pub fn new(n: usize) -> DenseGraph {
        DenseGraph {
            n,
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a][b] = true;
            self.adj[b][a] = true;
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.adj[a][b] {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x).count()
    }

    pub fn to_view(&self) -> SubgraphView {
        let nodes: BTreeSet<EntityId> = (0..self.n as u32).map(EntityId).collect();
        let edges: BTreeSet<(EntityId, EntityId)> = self
            .edges()
            .into_iter()
            .map(|(a, b)| (EntityId(a as u32), EntityId(b as u32)))
            .collect();
        SubgraphView::from_parts(FamilySelector::All, nodes, edges)
    }
}

/// Uniform random graph with an embedded random spanning tree, so the result
/// is always connected.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> DenseGraph {
    let mut g = DenseGraph::new(n);
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        g.add_edge(parent, v);
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Random graph without the connectivity guarantee.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> DenseGraph {
    let mut g = DenseGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(a, b);
            }
        }
    }
    g
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All-pairs shortest distances by Floyd-Warshall.
pub fn floyd_warshall(g: &DenseGraph) -> Vec<Vec<usize>> {
    let n = g.n;
    let mut dist = vec![vec![INF; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (a, b) in g.edges() {
        dist[a][b] = 1;
        dist[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = dist[i][k] + dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
    dist
}

/// Node sets of connected components, from the distance matrix.
pub fn components_from_distances(dist: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = dist.len();
    let mut assigned = vec![false; n];
    let mut comps = Vec::new();
    for v in 0..n {
        if assigned[v] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&u| dist[v][u] < INF).collect();
        for &u in &comp {
            assigned[u] = true;
        }
        comps.push(comp);
    }
    comps
}

/// Giant component with the library's tie-break: size, then smallest node.
pub fn giant_from_distances(dist: &[Vec<usize>]) -> Vec<usize> {
    components_from_distances(dist)
        .into_iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .unwrap_or_default()
}

pub fn oracle_density(g: &DenseGraph) -> f64 {
    if g.n < 2 {
        return 0.0;
    }
    let e = g.edges().len() as f64;
    2.0 * e / (g.n as f64 * (g.n as f64 - 1.0))
}

pub fn oracle_diameter(g: &DenseGraph) -> usize {
    let dist = floyd_warshall(g);
    let giant = giant_from_distances(&dist);
    let mut best = 0;
    for &a in &giant {
        for &b in &giant {
            if dist[a][b] < INF && dist[a][b] > best {
                best = dist[a][b];
            }
        }
    }
    best
}

pub fn oracle_avg_shortest_path(g: &DenseGraph) -> f64 {
    let dist = floyd_warshall(g);
    let giant = giant_from_distances(&dist);
    if giant.len() < 2 {
        return 0.0;
    }
    let mut total = 0usize;
    for &a in &giant {
        for &b in &giant {
            total += dist[a][b];
        }
    }
    total as f64 / (giant.len() * (giant.len() - 1)) as f64
}

/// Average clustering by direct triangle enumeration on the matrix.
pub fn oracle_avg_clustering(g: &DenseGraph) -> f64 {
    let mut total = 0.0;
    for v in 0..g.n {
        let neighbors: Vec<usize> = (0..g.n).filter(|&u| g.adj[v][u]).collect();
        let k = neighbors.len();
        if k < 2 {
            continue;
        }
        let mut triangles = 0;
        for i in 0..k {
            for j in i + 1..k {
                if g.adj[neighbors[i]][neighbors[j]] {
                    triangles += 1;
                }
            }
        }
        total += 2.0 * triangles as f64 / (k as f64 * (k as f64 - 1.0));
    }
    total / g.n as f64
}

/// Degree assortativity by Newman's textbook formula over the edge list:
/// r = [M^-1 sum j_i k_i - (M^-1 sum (j_i + k_i)/2)^2]
///     / [M^-1 sum (j_i^2 + k_i^2)/2 - (M^-1 sum (j_i + k_i)/2)^2]
pub fn oracle_assortativity(g: &DenseGraph) -> Option<f64> {
    let edges = g.edges();
    if edges.is_empty() {
        return None;
    }
    let m = edges.len() as f64;
    let (mut s_jk, mut s_half, mut s_sq) = (0.0, 0.0, 0.0);
    for (a, b) in &edges {
        let j = g.degree(*a) as f64;
        let k = g.degree(*b) as f64;
        s_jk += j * k;
        s_half += 0.5 * (j + k);
        s_sq += 0.5 * (j * j + k * k);
    }
    let num = s_jk / m - (s_half / m).powi(2);
    let den = s_sq / m - (s_half / m).powi(2);
    if den == 0.0 {
        None
    } else {
        Some(num / den)
    }
}

/// Betweenness by explicit shortest-path counting: sigma via dynamic
/// programming over the Floyd-Warshall distance matrix, then the pair sum.
pub fn oracle_betweenness(g: &DenseGraph) -> Vec<f64> {
    let n = g.n;
    let dist = floyd_warshall(g);
    // sigma[s][t]: number of shortest s-t paths
    let mut sigma = vec![vec![0.0f64; n]; n];
    for s in 0..n {
        sigma[s][s] = 1.0;
        let mut order: Vec<usize> = (0..n).filter(|&t| dist[s][t] < INF).collect();
        order.sort_by_key(|&t| dist[s][t]);
        for &t in &order {
            if t == s {
                continue;
            }
            let mut count = 0.0;
            for u in 0..n {
                if g.adj[u][t] && dist[s][u] + 1 == dist[s][t] {
                    count += sigma[s][u];
                }
            }
            sigma[s][t] = count;
        }
    }
    let mut centrality = vec![0.0f64; n];
    for s in 0..n {
        for t in s + 1..n {
            if dist[s][t] >= INF || sigma[s][t] == 0.0 {
                continue;
            }
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                if dist[s][v] + dist[v][t] == dist[s][t] {
                    centrality[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    centrality
}

/// Principal eigenvector of the adjacency matrix by dense symmetric
/// eigendecomposition, L2-normalized and oriented non-negative.
pub fn oracle_eigenvector(g: &DenseGraph) -> Vec<f64> {
    let n = g.n;
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    for (a, b) in g.edges() {
        m[(a, b)] = 1.0;
        m[(b, a)] = 1.0;
    }
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut best = 0;
    for i in 0..n {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let column = eig.eigenvectors.column(best);
    let mut v: Vec<f64> = column.iter().copied().collect();
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    if v.iter().sum::<f64>() < 0.0 {
        for x in &mut v {
            *x = -*x;
        }
    }
    v
}

/// Minimal JSON Schema checker covering the subset the shipped schema uses:
/// `type` (string or list of strings), `required`, `properties`, `items`.
pub fn validate_schema(
    value: &serde_json::Value,
    schema: &serde_json::Value,
    path: &str,
) -> Vec<String> {
    let mut errors = Vec::new();
    if let Some(types) = schema.get("type") {
        let allowed: Vec<String> = match types {
            serde_json::Value::String(s) => vec![s.clone()],
            serde_json::Value::Array(list) => list
                .iter()
                .filter_map(|v| v.as_str().map(str::to_string))
                .collect(),
            _ => vec![],
        };
        let actual = match value {
            serde_json::Value::Null => "null",
            serde_json::Value::Bool(_) => "boolean",
            serde_json::Value::Number(n) => {
                if n.is_i64() || n.is_u64() {
                    "integer"
                } else {
                    "number"
                }
            }
            serde_json::Value::String(_) => "string",
            serde_json::Value::Array(_) => "array",
            serde_json::Value::Object(_) => "object",
        };
        let ok = allowed
            .iter()
            .any(|t| t == actual || (t == "number" && actual == "integer"));
        if !ok {
            errors.push(format!("{path}: expected {allowed:?}, got {actual}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(|r| r.as_array()) {
        for key in required.iter().filter_map(|k| k.as_str()) {
            if value.get(key).is_none() {
                errors.push(format!("{path}: missing required key {key:?}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(|p| p.as_object()) {
        for (key, subschema) in props {
            if let Some(sub) = value.get(key) {
                errors.extend(validate_schema(sub, subschema, &format!("{path}.{key}")));
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(list) = value.as_array() {
            for (i, item) in list.iter().enumerate() {
                errors.extend(validate_schema(item, items, &format!("{path}[{i}]")));
            }
        }
    }
    errors
}
