//! Graphs, orientable genus by exhaustive rotation-system search, and the
//! nested-sphere multi-embedding check.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::dsu::DisjointSets;

/// Default cap on the number of rotation systems examined.
pub const DEFAULT_ROTATION_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("edge endpoint {0} is not a vertex")]
    UnknownVertex(String),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("{needed} rotation systems exceed the guard of {guard}")]
    GuardExceeded { needed: u128, guard: u64 },
    #[error("blocks do not partition the edge set: {0}")]
    NotAPartition(String),
}

/// A finite graph; loops and parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    vertex_names: Vec<String>,
    edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingViolation {
    /// Condition (i): the block is not planar.
    NonPlanar { block: usize },
    /// Condition (ii): `vertex` of `block` has a neighbour outside the
    /// adjacent blocks.
    FarNeighbor { block: usize, vertex: String, neighbor: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiEmbeddingVerdict {
    pub violation: Option<EmbeddingViolation>,
}

impl MultiEmbeddingVerdict {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

impl SimpleGraph {
    pub fn new(vertex_names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = HashMap::new();
        for name in &vertex_names {
            if seen.insert(name.clone(), ()).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertex_names.len() || v >= vertex_names.len()) {
            return Err(GraphError::UnknownVertex(format!("#{}", u.max(v))));
        }
        Ok(SimpleGraph { vertex_names, edges })
    }

    /// Builds a graph from named endpoints, adding vertices as they appear.
    pub fn from_named_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Self {
        let mut names: Vec<String> = Vec::new();
        let mut index = HashMap::new();
        let mut id = |s: &str| {
            *index.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                names.len() - 1
            })
        };
        let edges = edges.iter().map(|(u, v)| (id(u.as_ref()), id(v.as_ref()))).collect();
        SimpleGraph { vertex_names: names, edges }
    }

    pub fn complete(n: usize) -> Self {
        let names = (0..n).map(|i| format!("v{i}")).collect();
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        SimpleGraph { vertex_names: names, edges }
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let names = (0..a).map(|i| format!("u{i}")).chain((0..b).map(|j| format!("w{j}"))).collect();
        let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
        SimpleGraph { vertex_names: names, edges }
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    /// Vertex sets of the connected components, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut dsu = DisjointSets::new(self.vertex_count());
        for &(u, v) in &self.edges {
            dsu.union(u, v);
        }
        let (labels, count) = dsu.labels();
        let mut out = vec![Vec::new(); count];
        for (v, &l) in labels.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    /// The subgraph on `vertices` with all edges among them, reindexed.
    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let mut index = HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            index.insert(v, i);
        }
        let edges = self.edges.iter().filter_map(|&(u, v)| Some((*index.get(&u)?, *index.get(&v)?))).collect();
        SimpleGraph { vertex_names: vertices.iter().map(|&v| self.vertex_names[v].clone()).collect(), edges }
    }

    /// The subgraph formed by the given edges and their endpoints.
    pub fn edge_subgraph(&self, edge_ids: &[usize]) -> SimpleGraph {
        let vertices: BTreeSet<usize> = edge_ids.iter().flat_map(|&e| [self.edges[e].0, self.edges[e].1]).collect();
        let vertices: Vec<usize> = vertices.into_iter().collect();
        let pos = |v: usize| vertices.binary_search(&v).expect("endpoint");
        SimpleGraph {
            vertex_names: vertices.iter().map(|&v| self.vertex_names[v].clone()).collect(),
            edges: edge_ids.iter().map(|&e| (pos(self.edges[e].0), pos(self.edges[e].1))).collect(),
        }
    }

    /// The same graph with vertex `v` renamed to position `order[v]`.
    pub fn relabeled(&self, order: &[usize]) -> SimpleGraph {
        let mut names = vec![String::new(); self.vertex_count()];
        for (v, &p) in order.iter().enumerate() {
            names[p] = self.vertex_names[v].clone();
        }
        SimpleGraph { vertex_names: names, edges: self.edges.iter().map(|&(u, v)| (order[u], order[v])).collect() }
    }

    /// Number of rotation systems, `∏ (deg v - 1)!`.
    pub fn rotation_system_count(&self) -> u128 {
        (0..self.vertex_count())
            .map(|v| (1..self.degree(v).max(1) as u128).product::<u128>())
            .fold(1u128, |acc, f| acc.saturating_mul(f))
    }

    /// Minimum orientable genus over all rotation systems of a connected
    /// graph.
    pub fn min_orientable_genus(&self, guard: u64) -> Result<usize, GraphError> {
        let comps = self.components();
        if comps.len() > 1 {
            return Err(GraphError::Disconnected(comps.len()));
        }
        let needed = self.rotation_system_count();
        if needed > guard as u128 {
            return Err(GraphError::GuardExceeded { needed, guard });
        }
        Ok(RotationSearch::new(self).min_genus())
    }

    /// Planar iff every component has orientable genus 0.
    pub fn is_planar(&self, guard: u64) -> Result<bool, GraphError> {
        for comp in self.components() {
            let g = self.induced(&comp);
            let needed = g.rotation_system_count();
            if needed > guard as u128 {
                return Err(GraphError::GuardExceeded { needed, guard });
            }
            if !RotationSearch::new(&g).has_planar_rotation() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks a block decomposition `G = G_1 ⊎ ... ⊎ G_s` (blocks given as
    /// edge indices) against the nested-sphere conditions: every block is
    /// planar, and every vertex of `G_i` has all its neighbours in
    /// `G_{i-1} ∪ G_i ∪ G_{i+1}` (indices clipped at both ends).
    pub fn check_multi_embedding(
        &self,
        blocks: &[Vec<usize>],
        guard: u64,
    ) -> Result<MultiEmbeddingVerdict, GraphError> {
        if blocks.is_empty() {
            return Err(GraphError::NotAPartition("no blocks".into()));
        }
        let mut owner = vec![None; self.edges.len()];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                let slot =
                    owner.get_mut(e).ok_or_else(|| GraphError::NotAPartition(format!("edge #{e} does not exist")))?;
                if slot.replace(b).is_some() {
                    return Err(GraphError::NotAPartition(format!("edge #{e} is in two blocks")));
                }
            }
        }
        if let Some(e) = owner.iter().position(Option::is_none) {
            return Err(GraphError::NotAPartition(format!("edge #{e} is in no block")));
        }

        for (b, block) in blocks.iter().enumerate() {
            if !self.edge_subgraph(block).is_planar(guard)? {
                return Ok(MultiEmbeddingVerdict { violation: Some(EmbeddingViolation::NonPlanar { block: b + 1 }) });
            }
        }

        let block_vertices: Vec<BTreeSet<usize>> = blocks
            .iter()
            .map(|block| block.iter().flat_map(|&e| [self.edges[e].0, self.edges[e].1]).collect())
            .collect();
        let mut neighbors = vec![BTreeSet::new(); self.vertex_count()];
        for &(u, v) in &self.edges {
            neighbors[u].insert(v);
            neighbors[v].insert(u);
        }
        for (i, verts) in block_vertices.iter().enumerate() {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(blocks.len() - 1);
            for &v in verts {
                for &w in &neighbors[v] {
                    if !(lo..=hi).any(|j| block_vertices[j].contains(&w)) {
                        return Ok(MultiEmbeddingVerdict {
                            violation: Some(EmbeddingViolation::FarNeighbor {
                                block: i + 1,
                                vertex: self.vertex_names[v].clone(),
                                neighbor: self.vertex_names[w].clone(),
                            }),
                        });
                    }
                }
            }
        }
        Ok(MultiEmbeddingVerdict { violation: None })
    }
}

/// Odometer over rotation systems. Dart `2e` runs from the first endpoint of
/// edge `e` to the second, `2e + 1` back.
struct RotationSearch {
    vertices: usize,
    edges: usize,
    /// darts leaving each vertex
    darts_at: Vec<Vec<usize>>,
    /// per vertex, every cyclic order with the first dart fixed, as
    /// successor tables indexed by position in `darts_at`
    choices: Vec<Vec<Vec<usize>>>,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

impl RotationSearch {
    fn new(g: &SimpleGraph) -> Self {
        let mut darts_at = vec![Vec::new(); g.vertex_count()];
        for (e, &(u, v)) in g.edges.iter().enumerate() {
            darts_at[u].push(2 * e);
            darts_at[v].push(2 * e + 1);
        }
        let choices = darts_at
            .iter()
            .map(|darts| {
                let d = darts.len();
                if d == 0 {
                    return vec![Vec::new()];
                }
                let rest: Vec<usize> = (1..d).collect();
                permutations(&rest)
                    .into_iter()
                    .map(|order| {
                        let cyclic: Vec<usize> = std::iter::once(0).chain(order).collect();
                        let mut succ = vec![0; d];
                        for k in 0..d {
                            succ[cyclic[k]] = cyclic[(k + 1) % d];
                        }
                        succ
                    })
                    .collect()
            })
            .collect();
        RotationSearch { vertices: g.vertex_count(), edges: g.edges.len(), darts_at, choices }
    }

    fn face_count(&self, pick: &[usize], rotation: &mut [usize]) -> usize {
        for (v, darts) in self.darts_at.iter().enumerate() {
            let succ = &self.choices[v][pick[v]];
            for (k, &d) in darts.iter().enumerate() {
                rotation[d] = darts[succ[k]];
            }
        }
        let n = 2 * self.edges;
        let mut seen = vec![false; n];
        let mut faces = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                d = rotation[d ^ 1];
            }
        }
        faces
    }

    fn genus_of(&self, faces: usize) -> usize {
        let euler = self.vertices as i64 - self.edges as i64 + faces as i64;
        ((2 - euler) / 2) as usize
    }

    /// Visits rotation systems in mixed-radix order; stops early when `stop`
    /// returns true on a genus.
    fn scan(&self, mut stop: impl FnMut(usize) -> bool) -> usize {
        if self.edges == 0 {
            return 0;
        }
        let mut pick = vec![0usize; self.vertices];
        let mut rotation = vec![0usize; 2 * self.edges];
        let mut best = usize::MAX;
        loop {
            let genus = self.genus_of(self.face_count(&pick, &mut rotation));
            best = best.min(genus);
            if stop(best) {
                return best;
            }
            let mut v = 0;
            loop {
                if v == self.vertices {
                    return best;
                }
                pick[v] += 1;
                if pick[v] < self.choices[v].len() {
                    break;
                }
                pick[v] = 0;
                v += 1;
            }
        }
    }

    fn min_genus(&self) -> usize {
        self.scan(|g| g == 0)
    }

    fn has_planar_rotation(&self) -> bool {
        self.min_genus() == 0
    }
}
