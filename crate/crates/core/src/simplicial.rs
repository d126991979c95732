//! Finite simplicial sets of dimension at most one, stored level by level.
//!
//! Every model here is a quotient of copies of Δ¹, so an `n`-simplex is
//! either a (degenerate) vertex or an edge together with a nondecreasing
//! sequence `0^a 1^{n+1-a}` with `1 ≤ a ≤ n`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("{name} stores levels through {stored}, but level {needed} is required")]
    InsufficientLevels { name: String, stored: usize, needed: usize },
    #[error("edge {0} refers to a missing vertex")]
    BadEdge(usize),
    #[error("map {0} does not send edge endpoints to the endpoints of its image")]
    BadGraphMap(String),
}

/// A piece of a level: a vertex contributes one simplex, an edge contributes
/// `n` simplices at level `n`. Levels list pieces in block order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Vertex(usize),
    Edge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Simplex {
    Vertex(usize),
    Edge(usize, usize),
}

#[derive(Clone, Debug)]
pub struct FiniteSimplicialSet {
    name: String,
    levels: Vec<Vec<String>>,
    /// `faces[n][i][x] = d_i x` for `x ∈ X_n`, `n ≥ 1`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[n][i][x] = s_i x` for `x ∈ X_n`, `n < n_max`.
    degeneracies: Vec<Vec<Vec<usize>>>,
    basepoint: usize,
    graph: Graph,
}

#[derive(Clone, Debug)]
struct Graph {
    vertex_names: Vec<String>,
    edges: Vec<(String, usize, usize)>,
    blocks: Vec<Block>,
}

impl Graph {
    fn simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for b in &self.blocks {
            match *b {
                Block::Vertex(v) => out.push(Simplex::Vertex(v)),
                Block::Edge(e) => out.extend((1..=n).map(|a| Simplex::Edge(e, a))),
            }
        }
        out
    }

    fn label(&self, s: Simplex, n: usize) -> String {
        match s {
            Simplex::Vertex(v) => self.vertex_names[v].clone(),
            Simplex::Edge(e, a) => format!("{}:{}{}", self.edges[e].0, "0".repeat(a), "1".repeat(n + 1 - a)),
        }
    }
}

fn position_table(simplices: &[Simplex]) -> BTreeMap<(usize, usize, usize), usize> {
    simplices
        .iter()
        .enumerate()
        .map(|(i, s)| match *s {
            Simplex::Vertex(v) => ((0, v, 0), i),
            Simplex::Edge(e, a) => ((1, e, a), i),
        })
        .collect()
}

fn lookup(table: &BTreeMap<(usize, usize, usize), usize>, s: Simplex) -> usize {
    match s {
        Simplex::Vertex(v) => table[&(0, v, 0)],
        Simplex::Edge(e, a) => table[&(1, e, a)],
    }
}

impl FiniteSimplicialSet {
    /// Builds the quotient of edges `(name, source, target)` on the given
    /// vertices, materialized through level `n_max`.
    pub fn from_graph(
        name: &str,
        vertex_names: &[&str],
        edges: &[(&str, usize, usize)],
        blocks: &[Block],
        n_max: usize,
    ) -> Result<Self, SimplicialError> {
        for (i, (_, s, t)) in edges.iter().enumerate() {
            if *s >= vertex_names.len() || *t >= vertex_names.len() {
                return Err(SimplicialError::BadEdge(i));
            }
        }
        let graph = Graph {
            vertex_names: vertex_names.iter().map(|s| s.to_string()).collect(),
            edges: edges.iter().map(|(n, s, t)| (n.to_string(), *s, *t)).collect(),
            blocks: blocks.to_vec(),
        };
        let simplices: Vec<Vec<Simplex>> = (0..=n_max).map(|n| graph.simplices(n)).collect();
        let tables: Vec<_> = simplices.iter().map(|s| position_table(s)).collect();
        let levels = simplices
            .iter()
            .enumerate()
            .map(|(n, ss)| ss.iter().map(|s| graph.label(*s, n)).collect())
            .collect();
        let mut faces = vec![Vec::new()];
        for n in 1..=n_max {
            let per_i = (0..=n)
                .map(|i| {
                    simplices[n]
                        .iter()
                        .map(|s| {
                            let image = match *s {
                                Simplex::Vertex(v) => Simplex::Vertex(v),
                                Simplex::Edge(e, a) => {
                                    let a2 = if i < a { a - 1 } else { a };
                                    if a2 == 0 {
                                        Simplex::Vertex(graph.edges[e].2)
                                    } else if a2 == n {
                                        Simplex::Vertex(graph.edges[e].1)
                                    } else {
                                        Simplex::Edge(e, a2)
                                    }
                                }
                            };
                            lookup(&tables[n - 1], image)
                        })
                        .collect()
                })
                .collect();
            faces.push(per_i);
        }
        let mut degeneracies = Vec::new();
        for n in 0..n_max {
            let per_i = (0..=n)
                .map(|i| {
                    simplices[n]
                        .iter()
                        .map(|s| {
                            let image = match *s {
                                Simplex::Vertex(v) => Simplex::Vertex(v),
                                Simplex::Edge(e, a) => Simplex::Edge(e, if i < a { a + 1 } else { a }),
                            };
                            lookup(&tables[n + 1], image)
                        })
                        .collect()
                })
                .collect();
            degeneracies.push(per_i);
        }
        let basepoint = blocks
            .iter()
            .position(|b| matches!(b, Block::Vertex(_)))
            .unwrap_or(0);
        Ok(Self { name: name.to_string(), levels, faces, degeneracies, basepoint, graph })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    pub fn simplex_ids(&self, n: usize) -> &[String] {
        &self.levels[n]
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    /// `d_i: X_n → X_{n-1}`.
    pub fn face(&self, n: usize, i: usize) -> &[usize] {
        &self.faces[n][i]
    }

    /// `s_i: X_n → X_{n+1}`.
    pub fn degeneracy(&self, n: usize, i: usize) -> &[usize] {
        &self.degeneracies[n][i]
    }

    pub fn require_levels(&self, needed: usize) -> Result<(), SimplicialError> {
        if needed > self.n_max() {
            return Err(SimplicialError::InsufficientLevels {
                name: self.name.clone(),
                stored: self.n_max(),
                needed,
            });
        }
        Ok(())
    }

    /// Number of nondegenerate simplices per level.
    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.n_max())
            .map(|n| {
                if n == 0 {
                    return self.level_size(0);
                }
                let mut hit = vec![false; self.level_size(n)];
                for i in 0..n {
                    for &y in self.degeneracy(n - 1, i) {
                        hit[y] = true;
                    }
                }
                hit.iter().filter(|h| !**h).count()
            })
            .collect()
    }

    /// First violated simplicial identity, if any.
    pub fn identity_violation(&self) -> Option<String> {
        let top = self.n_max();
        for n in 2..=top {
            for j in 1..=n {
                for i in 0..j {
                    for x in 0..self.level_size(n) {
                        let lhs = self.face(n - 1, i)[self.face(n, j)[x]];
                        let rhs = self.face(n - 1, j - 1)[self.face(n, i)[x]];
                        if lhs != rhs {
                            return Some(format!("d{i}d{j} at {}", self.levels[n][x]));
                        }
                    }
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            for i in 0..=n {
                for j in i..=n {
                    for x in 0..self.level_size(n) {
                        let lhs = self.degeneracy(n + 1, i)[self.degeneracy(n, j)[x]];
                        let rhs = self.degeneracy(n + 1, j + 1)[self.degeneracy(n, i)[x]];
                        if lhs != rhs {
                            return Some(format!("s{i}s{j} at {}", self.levels[n][x]));
                        }
                    }
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    for x in 0..self.level_size(n) {
                        let lhs = self.face(n + 1, i)[self.degeneracy(n, j)[x]];
                        let expected = if i < j {
                            self.degeneracy(n - 1, j - 1)[self.face(n, i)[x]]
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            self.degeneracy(n - 1, j)[self.face(n, i - 1)[x]]
                        };
                        if lhs != expected {
                            return Some(format!("d{i}s{j} at {}", self.levels[n][x]));
                        }
                    }
                }
            }
        }
        None
    }
}

/// A simplicial map, stored levelwise.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub name: String,
    pub source: Arc<FiniteSimplicialSet>,
    pub target: Arc<FiniteSimplicialSet>,
    levels: Vec<Vec<usize>>,
}

/// Image of an edge under a graph map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeImage {
    Edge(usize),
    Collapse,
}

impl SimplicialMap {
    /// The simplicial map determined by images of vertices and edges.
    pub fn from_graph_map(
        name: &str,
        source: &Arc<FiniteSimplicialSet>,
        target: &Arc<FiniteSimplicialSet>,
        vertices: &[usize],
        edges: &[EdgeImage],
    ) -> Result<Self, SimplicialError> {
        let (sg, tg) = (&source.graph, &target.graph);
        for (e, img) in edges.iter().enumerate() {
            let (_, s, t) = sg.edges[e];
            let ok = match *img {
                EdgeImage::Edge(f) => tg.edges[f].1 == vertices[s] && tg.edges[f].2 == vertices[t],
                EdgeImage::Collapse => vertices[s] == vertices[t],
            };
            if !ok {
                return Err(SimplicialError::BadGraphMap(name.to_string()));
            }
        }
        let n_max = source.n_max().min(target.n_max());
        let levels = (0..=n_max)
            .map(|n| {
                let table = position_table(&tg.simplices(n));
                sg.simplices(n)
                    .iter()
                    .map(|s| {
                        let image = match *s {
                            Simplex::Vertex(v) => Simplex::Vertex(vertices[v]),
                            Simplex::Edge(e, a) => match edges[e] {
                                EdgeImage::Edge(f) => Simplex::Edge(f, a),
                                EdgeImage::Collapse => Simplex::Vertex(vertices[sg.edges[e].1]),
                            },
                        };
                        lookup(&table, image)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { name: name.to_string(), source: source.clone(), target: target.clone(), levels })
    }

    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[usize] {
        &self.levels[n]
    }

    /// First level and simplex where the map fails to commute with a face or degeneracy.
    pub fn naturality_violation(&self) -> Option<String> {
        let (x, y) = (&self.source, &self.target);
        for n in 1..=self.n_max() {
            for i in 0..=n {
                for s in 0..x.level_size(n) {
                    if self.levels[n - 1][x.face(n, i)[s]] != y.face(n, i)[self.levels[n][s]] {
                        return Some(format!("{}: d{i} at {}", self.name, x.simplex_ids(n)[s]));
                    }
                }
            }
            for i in 0..n {
                for s in 0..x.level_size(n - 1) {
                    if self.levels[n][x.degeneracy(n - 1, i)[s]] != y.degeneracy(n - 1, i)[self.levels[n - 1][s]] {
                        return Some(format!("{}: s{i} at {}", self.name, x.simplex_ids(n - 1)[s]));
                    }
                }
            }
        }
        None
    }
}

/// The circle models and the maps between them used for the (co)algebra
/// structures on coHochschild homology.
#[derive(Clone, Debug)]
pub struct CircleModels {
    pub sets: BTreeMap<&'static str, Arc<FiniteSimplicialSet>>,
    pub maps: BTreeMap<&'static str, SimplicialMap>,
}

pub const POINT: &str = "pt";
pub const CIRCLE: &str = "S1";
pub const DOUBLE_PRIME: &str = "d'S1";
pub const DOUBLE: &str = "dS1";
pub const WEDGE: &str = "S1vS1";
pub const DISJOINT: &str = "S1+S1";

impl CircleModels {
    pub fn set(&self, name: &str) -> &Arc<FiniteSimplicialSet> {
        &self.sets[name]
    }

    pub fn map(&self, name: &str) -> &SimplicialMap {
        &self.maps[name]
    }
}

/// `S¹`, `d′S¹`, `dS¹`, `S¹∨S¹`, `S¹⊔S¹` and the point, with fold, pinch,
/// collapse, flip and wedge-quotient maps, all through level `n_max`.
pub fn builtin_circle_models(n_max: usize) -> CircleModels {
    use Block::{Edge as E, Vertex as V};
    let build = |name, vs: &[&str], es: &[(&str, usize, usize)], blocks: &[Block]| {
        Arc::new(FiniteSimplicialSet::from_graph(name, vs, es, blocks, n_max).expect("builtin model"))
    };
    let pt = build(POINT, &["*"], &[], &[V(0)]);
    let s1 = build(CIRCLE, &["*"], &[("e", 0, 0)], &[V(0), E(0)]);
    // dΔ¹ = (0→1)∪(1→2) with the end points 0 and 2 identified.
    let dp = build(DOUBLE_PRIME, &["*", "m"], &[("e1", 0, 1), ("e2", 1, 0)], &[V(0), V(1), E(0), E(1)]);
    let ds = build(DOUBLE, &["*", "m"], &[("e1", 0, 1), ("e2", 0, 1)], &[V(0), V(1), E(0), E(1)]);
    let wedge = build(WEDGE, &["*"], &[("a", 0, 0), ("b", 0, 0)], &[V(0), E(0), E(1)]);
    let disjoint = build(DISJOINT, &["*", "*'"], &[("a", 0, 0), ("b", 1, 1)], &[V(0), E(0), V(1), E(1)]);

    use EdgeImage::{Collapse as C, Edge as Ed};
    let mk = |name: &'static str, s: &Arc<FiniteSimplicialSet>, t: &Arc<FiniteSimplicialSet>, vs: &[usize], es: &[EdgeImage]| {
        (name, SimplicialMap::from_graph_map(name, s, t, vs, es).expect("builtin map"))
    };
    let maps = [
        mk("fold", &wedge, &s1, &[0], &[Ed(0), Ed(0)]),
        mk("pinch'", &dp, &wedge, &[0, 0], &[Ed(0), Ed(1)]),
        mk("pinch", &ds, &wedge, &[0, 0], &[Ed(0), Ed(1)]),
        mk("collapse'", &dp, &s1, &[0, 0], &[Ed(0), C]),
        mk("collapse", &ds, &s1, &[0, 0], &[Ed(0), C]),
        mk("flip", &ds, &ds, &[0, 1], &[Ed(1), Ed(0)]),
        mk("wedge_quotient", &disjoint, &wedge, &[0, 0], &[Ed(0), Ed(1)]),
        mk("disjoint_fold", &disjoint, &s1, &[0, 0], &[Ed(0), Ed(0)]),
        mk("include_1", &s1, &wedge, &[0], &[Ed(0)]),
        mk("include_2", &s1, &wedge, &[0], &[Ed(1)]),
        mk("retract", &s1, &pt, &[0], &[C]),
        mk("basepoint", &pt, &s1, &[0], &[]),
    ]
    .into_iter()
    .collect();
    let sets = [(POINT, pt), (CIRCLE, s1), (DOUBLE_PRIME, dp), (DOUBLE, ds), (WEDGE, wedge), (DISJOINT, disjoint)]
        .into_iter()
        .collect();
    CircleModels { sets, maps }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_level_sizes() {
        let m = builtin_circle_models(5);
        for n in 0..=5 {
            assert_eq!(m.set(CIRCLE).level_size(n), n + 1);
            assert_eq!(m.set(WEDGE).level_size(n), 2 * n + 1);
        }
    }

    #[test]
    fn nondegenerate_counts() {
        let m = builtin_circle_models(3);
        assert_eq!(m.set(CIRCLE).nondegenerate_counts(), vec![1, 1, 0, 0]);
        assert_eq!(m.set(WEDGE).nondegenerate_counts(), vec![1, 2, 0, 0]);
        assert_eq!(m.set(DOUBLE).nondegenerate_counts(), vec![2, 2, 0, 0]);
        assert_eq!(m.set(DOUBLE_PRIME).nondegenerate_counts(), vec![2, 2, 0, 0]);
    }

    #[test]
    fn simplicial_identities_hold() {
        let m = builtin_circle_models(5);
        for s in m.sets.values() {
            assert_eq!(s.identity_violation(), None, "{}", s.name());
        }
        for f in m.maps.values() {
            assert_eq!(f.naturality_violation(), None, "{}", f.name);
        }
    }

    #[test]
    fn fold_fixes_basepoint_and_collapse_kills_second_edge() {
        let m = builtin_circle_models(3);
        let fold = m.map("fold");
        assert_eq!(fold.level(0), &[0]);
        let c = m.map("collapse'");
        let x = m.set(DOUBLE_PRIME);
        let e2 = x.simplex_ids(1).iter().position(|s| s.starts_with("e2")).unwrap();
        assert_eq!(c.level(1)[e2], m.set(CIRCLE).basepoint());
    }

    #[test]
    fn bad_graph_map_is_rejected() {
        let m = builtin_circle_models(2);
        let r = SimplicialMap::from_graph_map("bad", m.set(DOUBLE), m.set(DOUBLE), &[0, 1], &[EdgeImage::Collapse, EdgeImage::Edge(0)]);
        assert!(r.is_err());
    }
}
