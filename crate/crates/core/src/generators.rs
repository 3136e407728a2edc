//! Standard hypergraph families.
//!
//! Naming: grid vertices are `v{i}_{j}` (1-based). A jigsaw vertex stands for
//! a grid edge, `h{i}_{j}` for `{v{i}_{j}, v{i}_{j+1}}` and `d{i}_{j}` for
//! `{v{i}_{j}, v{i+1}_{j}}`. Mesh cells are `c{i}_{j}`.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dilution::{DilutionSequence, DilutionStep};
use crate::error::{Error, Result};
use crate::format;
use crate::hypergraph::{Edge, Hypergraph, Path, Vertex};
use crate::prejigsaw::PreJigsawWitness;

/// Maximum number of attempts of [`random_hypergraph`].
pub const RANDOM_RETRIES: usize = 1000;

const MESH_EXAMPLE: &str = include_str!("../data/mesh6_to_jigsaw3x2.seq");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Grid { n: usize, m: usize },
    Jigsaw { n: usize, m: usize },
    Mesh { n: usize, m: usize },
    SubdividedJigsaw { n: usize, m: usize, k: usize },
    Random {
        vertices: usize,
        edges: usize,
        max_degree: usize,
        max_rank: usize,
        seed: u64,
    },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Hypergraph> {
        match *self {
            GeneratorSpec::Grid { n, m } => {
                check_dims(n, m)?;
                Ok(grid(n, m))
            }
            GeneratorSpec::Jigsaw { n, m } => jigsaw(n, m),
            GeneratorSpec::Mesh { n, m } => {
                check_dims(n, m)?;
                Ok(mesh(n, m))
            }
            GeneratorSpec::SubdividedJigsaw { n, m, k } => Ok(subdivided_jigsaw(n, m, k)?.0),
            GeneratorSpec::Random {
                vertices,
                edges,
                max_degree,
                max_rank,
                seed,
            } => random_hypergraph(vertices, edges, max_degree, max_rank, seed),
        }
    }
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::Infeasible(format!("dimensions must be positive, got {n}x{m}")));
    }
    Ok(())
}

pub fn grid_vertex(i: usize, j: usize) -> Vertex {
    format!("v{i}_{j}")
}

/// The `n x m` grid graph.
pub fn grid(n: usize, m: usize) -> Hypergraph {
    let mut h = Hypergraph::default();
    for i in 1..=n {
        for j in 1..=m {
            h = h.with_vertex(grid_vertex(i, j));
            if j < m {
                h = h.with_edge([grid_vertex(i, j), grid_vertex(i, j + 1)]);
            }
            if i < n {
                h = h.with_edge([grid_vertex(i, j), grid_vertex(i + 1, j)]);
            }
        }
    }
    h
}

/// Jigsaw edges keyed by name. Each jigsaw edge is named after the smallest
/// grid vertex whose incident grid edges it collects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JigsawLayout {
    pub n: usize,
    pub m: usize,
    pub edges: BTreeMap<Vertex, Edge>,
}

impl JigsawLayout {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        check_dims(n, m)?;
        if n * m < 2 {
            return Err(Error::Infeasible("the 1x1 grid has no edges, its dual is empty".into()));
        }
        let mut by_set: BTreeMap<Edge, Vertex> = BTreeMap::new();
        for i in 1..=n {
            for j in 1..=m {
                let mut e = Edge::new();
                if j < m {
                    e.insert(format!("h{i}_{j}"));
                }
                if j > 1 {
                    e.insert(format!("h{i}_{}", j - 1));
                }
                if i < n {
                    e.insert(format!("d{i}_{j}"));
                }
                if i > 1 {
                    e.insert(format!("d{}_{j}", i - 1));
                }
                let name = grid_vertex(i, j);
                by_set
                    .entry(e)
                    .and_modify(|old| {
                        if name < *old {
                            *old = name.clone()
                        }
                    })
                    .or_insert(name);
            }
        }
        Ok(JigsawLayout {
            n,
            m,
            edges: by_set.into_iter().map(|(e, name)| (name, e)).collect(),
        })
    }

    pub fn hypergraph(&self) -> Hypergraph {
        Hypergraph::from_edges(self.edges.values().cloned())
    }

    /// Unordered pairs of jigsaw vertices sharing an edge, with that edge's
    /// name.
    pub fn pairs(&self) -> Vec<(Vertex, Vertex, Vertex)> {
        let mut out = Vec::new();
        for (name, e) in &self.edges {
            let vs: Vec<&Vertex> = e.iter().collect();
            for a in 0..vs.len() {
                for b in a + 1..vs.len() {
                    out.push((vs[a].clone(), vs[b].clone(), name.clone()));
                }
            }
        }
        out
    }
}

/// The `n x m` jigsaw: the dual of `grid(n, m)`.
pub fn jigsaw(n: usize, m: usize) -> Result<Hypergraph> {
    Ok(JigsawLayout::new(n, m)?.hypergraph())
}

pub fn mesh_cell(i: usize, j: usize) -> Vertex {
    format!("c{i}_{j}")
}

/// Rows-and-columns hypergraph over an `n x m` array of cells.
pub fn mesh(n: usize, m: usize) -> Hypergraph {
    let rows = (1..=n).map(|i| (1..=m).map(move |j| mesh_cell(i, j)).collect::<Vec<_>>());
    let cols = (1..=m).map(|j| (1..=n).map(move |i| mesh_cell(i, j)).collect::<Vec<_>>());
    Hypergraph::from_edges(rows.chain(cols))
}

/// The packaged sequence taking `mesh(6, 6)` to the 3x2 jigsaw: merge on the
/// six diagonal cells, then keep only the seven cells standing for the grid
/// edges.
pub fn mesh_example_sequence() -> DilutionSequence {
    format::parse_sequence(MESH_EXAMPLE).expect("packaged sequence parses")
}

/// Builds the sequence of [`mesh_example_sequence`] programmatically.
pub fn mesh_example_steps() -> Vec<DilutionStep> {
    // grid(3,2) vertex (i,j) is diagonal index 2(i-1)+j
    let kept: BTreeSet<(usize, usize)> =
        [(1, 2), (3, 4), (5, 6), (1, 3), (3, 5), (2, 4), (4, 6)].into_iter().collect();
    let mut steps: Vec<DilutionStep> = (1..=6).map(|k| DilutionStep::MergeOn(mesh_cell(k, k))).collect();
    for i in 1..=6 {
        for j in 1..=6 {
            if i != j && !kept.contains(&(i, j)) {
                steps.push(DilutionStep::DeleteVertex(mesh_cell(i, j)));
            }
        }
    }
    steps
}

/// A jigsaw whose edges are stretched into paths of `k` fresh degree-2
/// vertices, together with its pre-jigsaw witness.
///
/// A jigsaw edge with sorted vertices `u_1..u_r` (r >= 2) becomes
/// `{u_1..u_h, s_1}`, `{s_1, s_2}`, ..., `{s_k, u_{h+1}..u_r}` with
/// `h = ceil(r/2)`.
pub fn subdivided_jigsaw(n: usize, m: usize, k: usize) -> Result<(Hypergraph, PreJigsawWitness)> {
    let layout = JigsawLayout::new(n, m)?;
    let mut h = Hypergraph::default();
    let mut o: BTreeMap<Vertex, BTreeSet<Edge>> = BTreeMap::new();
    let mut chains: BTreeMap<Vertex, (usize, Vec<Vertex>)> = BTreeMap::new();
    for (name, e) in &layout.edges {
        let vs: Vec<Vertex> = e.iter().cloned().collect();
        let mut parts = BTreeSet::new();
        if vs.len() < 2 || k == 0 {
            parts.insert(e.clone());
            chains.insert(name.clone(), (vs.len(), Vec::new()));
        } else {
            let half = vs.len().div_ceil(2);
            let s: Vec<Vertex> = (1..=k).map(|t| format!("s_{name}_{t}")).collect();
            let mut a: Edge = vs[..half].iter().cloned().collect();
            a.insert(s[0].clone());
            let mut b: Edge = vs[half..].iter().cloned().collect();
            b.insert(s[k - 1].clone());
            parts.insert(a);
            parts.insert(b);
            for t in 0..k - 1 {
                parts.insert([s[t].clone(), s[t + 1].clone()].into_iter().collect());
            }
            chains.insert(name.clone(), (half, s));
        }
        for p in &parts {
            h = h.with_edge(p.iter().cloned());
        }
        o.insert(name.clone(), parts);
    }
    let pi: BTreeMap<Vertex, Vertex> = h
        .vertices()
        .iter()
        .filter(|v| !v.starts_with("s_"))
        .map(|v| (v.clone(), v.clone()))
        .collect();
    let mut paths = BTreeMap::new();
    for (u, v, name) in layout.pairs() {
        let e = &layout.edges[&name];
        let (half, s) = &chains[&name];
        let pos = |x: &Vertex| e.iter().position(|y| y == x).expect("member");
        let (pu, pv) = (pos(&u), pos(&v));
        let path = if s.is_empty() || (pu < *half) == (pv < *half) {
            // same side: one edge
            let f = o[&name].iter().find(|f| f.contains(&u) && f.contains(&v)).expect("shared part");
            Path {
                vertices: vec![u.clone(), v.clone()],
                edges: vec![f.clone()],
            }
        } else {
            let mut vertices = vec![u.clone()];
            vertices.extend(s.iter().cloned());
            vertices.push(v.clone());
            let edges = vertices
                .windows(2)
                .map(|w| {
                    o[&name]
                        .iter()
                        .find(|f| f.contains(&w[0]) && f.contains(&w[1]))
                        .expect("chain edge")
                        .clone()
                })
                .collect();
            Path { vertices, edges }
        };
        paths.insert((u, v), path);
    }
    Ok((h, PreJigsawWitness { n, m, pi, o, paths }))
}

/// Deterministic random connected hypergraph with `nv` vertices named
/// `x{i}`, exactly `ne` distinct non-empty edges, vertex degrees at most
/// `max_degree` and edge sizes at most `max_rank`. Uses ChaCha8 seeded from
/// `seed`; gives up after [`RANDOM_RETRIES`] attempts.
pub fn random_hypergraph(
    nv: usize,
    ne: usize,
    max_degree: usize,
    max_rank: usize,
    seed: u64,
) -> Result<Hypergraph> {
    let infeasible = |why: &str| Err(Error::Infeasible(why.to_string()));
    if nv == 0 {
        return infeasible("at least one vertex is required");
    }
    if ne == 0 {
        return infeasible("a connected hypergraph needs at least one edge");
    }
    if max_rank == 0 || max_degree == 0 {
        return infeasible("degree and rank bounds must be positive");
    }
    if nv > ne * max_rank {
        return infeasible("too few edge slots to cover every vertex");
    }
    if ne > nv * max_degree {
        return infeasible("too many edges for the degree bound");
    }
    if nv > 1 && nv > 1 + ne * (max_rank - 1) {
        return infeasible("too few edges to connect every vertex");
    }
    let names: Vec<Vertex> = (0..nv).map(|i| format!("x{i}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRIES {
        if let Some(h) = attempt(&names, ne, max_degree, max_rank, &mut rng) {
            return Ok(h);
        }
    }
    infeasible("no hypergraph found within the retry limit")
}

fn attempt(
    names: &[Vertex],
    ne: usize,
    max_degree: usize,
    max_rank: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Hypergraph> {
    let nv = names.len();
    let mut deg = vec![0usize; nv];
    let mut covered = vec![false; nv];
    let mut edges: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut stalls = 0;
    while edges.len() < ne {
        if stalls > 50 {
            return None;
        }
        let size = rng.gen_range(1..=max_rank.min(nv));
        let open: Vec<usize> = (0..nv).filter(|&v| deg[v] < max_degree).collect();
        let mut e = BTreeSet::new();
        // anchor at an already covered vertex to keep things connected
        let anchors: Vec<usize> = open.iter().copied().filter(|&v| covered[v]).collect();
        let first = if edges.is_empty() || anchors.is_empty() {
            *open.choose(rng)?
        } else {
            *anchors.choose(rng)?
        };
        e.insert(first);
        while e.len() < size {
            let fresh: Vec<usize> = open.iter().copied().filter(|v| !covered[*v] && !e.contains(v)).collect();
            let any: Vec<usize> = open.iter().copied().filter(|v| !e.contains(v)).collect();
            let pool = if !fresh.is_empty() && rng.gen_bool(0.7) { fresh } else { any };
            match pool.choose(rng) {
                Some(&v) => {
                    e.insert(v);
                }
                None => break,
            }
        }
        if edges.contains(&e) {
            stalls += 1;
            continue;
        }
        for &v in &e {
            deg[v] += 1;
            covered[v] = true;
        }
        edges.insert(e);
    }
    if covered.iter().any(|c| !c) {
        return None;
    }
    let h = Hypergraph::from_edges(edges.iter().map(|e| e.iter().map(|&i| names[i].clone())));
    h.is_connected().then_some(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilution::apply_sequence;
    use crate::iso::{isomorphic, DEFAULT_ISO_BUDGET};

    fn iso(a: &Hypergraph, b: &Hypergraph) -> bool {
        isomorphic(a, b, DEFAULT_ISO_BUDGET).unwrap().is_some()
    }

    #[test]
    fn grid_sizes() {
        assert_eq!((grid(1, 1).num_vertices(), grid(1, 1).num_edges()), (1, 0));
        assert_eq!((grid(2, 2).num_vertices(), grid(2, 2).num_edges()), (4, 4));
        assert_eq!((grid(3, 4).num_vertices(), grid(3, 4).num_edges()), (12, 17));
    }

    #[test]
    fn jigsaw_is_the_grid_dual() {
        for n in 1..=5 {
            for m in 1..=5 {
                if n * m < 2 {
                    assert!(jigsaw(n, m).is_err());
                    continue;
                }
                let j = jigsaw(n, m).unwrap();
                assert!(iso(&j, &grid(n, m).dual()), "{n}x{m}");
                assert!(j.max_degree() <= 2);
            }
        }
        let j34 = jigsaw(3, 4).unwrap();
        assert_eq!((j34.num_vertices(), j34.num_edges(), j34.rank()), (17, 12, 4));
    }

    #[test]
    fn mesh_shape() {
        let m = mesh(6, 6);
        assert_eq!((m.num_vertices(), m.num_edges()), (36, 12));
        assert!(m.degree_map().values().all(|&d| d == 2));
        assert_eq!((mesh(2, 2).num_vertices(), mesh(2, 2).num_edges()), (4, 4));
    }

    #[test]
    fn mesh_dual_is_the_rook_incidence() {
        for n in 2..=4 {
            for m in 2..=4 {
                let rook = Hypergraph::from_edges(
                    (1..=n).flat_map(|i| (1..=m).map(move |j| [format!("r{i}"), format!("k{j}")])),
                );
                assert!(iso(&mesh(n, m).dual(), &rook));
            }
        }
    }

    #[test]
    fn packaged_sequence_matches_the_programmatic_one() {
        assert_eq!(mesh_example_sequence().steps, mesh_example_steps());
        let out = apply_sequence(&mesh(6, 6), &mesh_example_sequence()).unwrap();
        assert!(iso(&out, &jigsaw(3, 2).unwrap()));
    }

    #[test]
    fn diagonal_merge_makes_edges_pairwise_intersecting() {
        let seq = DilutionSequence::new(mesh_example_steps()[..6].to_vec());
        let h = apply_sequence(&mesh(6, 6), &seq).unwrap();
        assert_eq!(h.num_edges(), 6);
        let es: Vec<&Edge> = h.edges().iter().collect();
        for a in 0..es.len() {
            for b in a + 1..es.len() {
                assert!(!es[a].is_disjoint(es[b]));
            }
        }
    }

    #[test]
    fn subdivision_zero_is_the_jigsaw() {
        let (h, _) = subdivided_jigsaw(3, 3, 0).unwrap();
        assert_eq!(h, jigsaw(3, 3).unwrap());
        let (h1, _) = subdivided_jigsaw(2, 2, 1).unwrap();
        assert_eq!((h1.num_vertices(), h1.num_edges()), (8, 8));
        assert!(h1.max_degree() <= 2);
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let a = random_hypergraph(4, 3, 2, 3, 1).unwrap();
        assert_eq!(a, random_hypergraph(4, 3, 2, 3, 1).unwrap());
        for seed in 0..200 {
            let h = random_hypergraph(7, 5, 2, 3, seed).unwrap();
            assert!(h.max_degree() <= 2 && h.rank() <= 3);
            assert_eq!((h.num_vertices(), h.num_edges()), (7, 5));
            assert!(h.is_connected());
        }
        assert!(random_hypergraph(3, 0, 2, 2, 0).is_err());
    }
}
