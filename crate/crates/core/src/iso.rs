//! Hypergraph isomorphism and canonical certificates.
//!
//! Both work on the bipartite incidence graph (vertices and edges as nodes)
//! with iterated colour refinement. Branching individualises edges only:
//! once every edge has its own colour, a vertex's colour is its vertex type,
//! so vertices sharing a type never cause extra branching.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, Vertex};

/// Default number of search-tree nodes before giving up.
pub const DEFAULT_ISO_BUDGET: u64 = 1_000_000;

/// A vertex bijection that induces a bijection on edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    pub vertex_map: BTreeMap<Vertex, Vertex>,
}

impl IsoWitness {
    pub fn identity(h: &Hypergraph) -> Self {
        IsoWitness {
            vertex_map: h.vertices().iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    pub fn map_edge(&self, e: &Edge) -> Edge {
        e.iter().map(|v| self.vertex_map[v].clone()).collect()
    }

    /// The induced edge bijection.
    pub fn edge_map(&self, source: &Hypergraph) -> BTreeMap<Edge, Edge> {
        source.edges().iter().map(|e| (e.clone(), self.map_edge(e))).collect()
    }

    /// Checks that the map is a bijection `V(from) -> V(to)` that maps
    /// `E(from)` exactly onto `E(to)`.
    pub fn is_valid(&self, from: &Hypergraph, to: &Hypergraph) -> bool {
        if self.vertex_map.len() != from.num_vertices()
            || from.num_vertices() != to.num_vertices()
            || from.num_edges() != to.num_edges()
        {
            return false;
        }
        if !self.vertex_map.keys().eq(from.vertices().iter()) {
            return false;
        }
        let image: BTreeSet<&Vertex> = self.vertex_map.values().collect();
        if image.len() != to.num_vertices() || !image.iter().all(|v| to.contains_vertex(v)) {
            return false;
        }
        from.edges().iter().all(|e| to.contains_edge(&self.map_edge(e)))
    }

    pub fn inverse(&self) -> IsoWitness {
        IsoWitness {
            vertex_map: self.vertex_map.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }
}

/// Canonical isomorphism invariant: equal certificates iff isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate {
    vertices: usize,
    edges: usize,
    /// Vertex types over canonical edge indices, sorted.
    types: Vec<Vec<u32>>,
}

impl Certificate {
    /// The canonical representative, vertices named `c0, c1, ...`.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let names: Vec<Vertex> = (0..self.vertices).map(|i| format!("c{i}")).collect();
        let mut edges: Vec<Edge> = vec![Edge::new(); self.edges];
        for (i, t) in self.types.iter().enumerate() {
            for &e in t {
                edges[e as usize].insert(names[i].clone());
            }
        }
        Hypergraph::from_parts_unchecked(names.into_iter().collect(), edges.into_iter().collect())
    }
}

/// Incidence structure over dense indices: nodes `0..n` are vertices,
/// `n..n+m` are edges.
#[derive(Debug, Clone)]
pub(crate) struct Incidence {
    n: usize,
    m: usize,
    adj: Vec<Vec<u32>>,
}

impl Incidence {
    pub(crate) fn new(n: usize, edges: &[Vec<u32>]) -> Self {
        let m = edges.len();
        let mut adj = vec![Vec::new(); n + m];
        for (j, e) in edges.iter().enumerate() {
            for &v in e {
                adj[v as usize].push((n + j) as u32);
                adj[n + j].push(v);
            }
        }
        Incidence { n, m, adj }
    }

    /// From bitmask edges over `n <= 64` vertices.
    pub(crate) fn from_masks(n: usize, present: u64, edges: &[u64]) -> Self {
        let mut index = [u32::MAX; 64];
        let mut k = 0u32;
        for (i, slot) in index.iter_mut().enumerate().take(n) {
            if present >> i & 1 == 1 {
                *slot = k;
                k += 1;
            }
        }
        let lists: Vec<Vec<u32>> = edges
            .iter()
            .map(|&e| {
                let mut l = Vec::new();
                let mut bits = e;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    l.push(index[i]);
                    bits &= bits - 1;
                }
                l
            })
            .collect();
        Incidence::new(k as usize, &lists)
    }

    fn initial_colors(&self) -> Vec<u32> {
        (0..self.n + self.m).map(|i| u32::from(i >= self.n)).collect()
    }
}

struct Indexed<'a> {
    names: Vec<&'a Vertex>,
    inc: Incidence,
}

fn index(h: &Hypergraph) -> Indexed<'_> {
    let names: Vec<&Vertex> = h.vertices().iter().collect();
    let pos: BTreeMap<&Vertex, u32> = names.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
    let lists: Vec<Vec<u32>> = h.edges().iter().map(|e| e.iter().map(|v| pos[v]).collect()).collect();
    let inc = Incidence::new(names.len(), &lists);
    Indexed { names, inc }
}

/// Joint colour refinement of several structures so that colours are
/// comparable across them. Colour ids are assigned by sorted signature, so
/// they are isomorphism invariant.
fn refine(graphs: &[&Incidence], colors: &mut [Vec<u32>]) {
    let mut classes = count_classes(colors);
    loop {
        let mut sigs: Vec<Vec<(u32, Vec<u32>)>> = Vec::with_capacity(graphs.len());
        let mut all = BTreeSet::new();
        for (g, c) in graphs.iter().zip(colors.iter()) {
            let s: Vec<(u32, Vec<u32>)> = (0..c.len())
                .map(|i| {
                    let mut nb: Vec<u32> = g.adj[i].iter().map(|&j| c[j as usize]).collect();
                    nb.sort_unstable();
                    (c[i], nb)
                })
                .collect();
            all.extend(s.iter().cloned());
            sigs.push(s);
        }
        let ids: BTreeMap<(u32, Vec<u32>), u32> =
            all.into_iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
        for (c, s) in colors.iter_mut().zip(sigs) {
            for (slot, sig) in c.iter_mut().zip(s) {
                *slot = ids[&sig];
            }
        }
        let now = count_classes(colors);
        if now == classes {
            return;
        }
        classes = now;
    }
}

fn count_classes(colors: &[Vec<u32>]) -> usize {
    colors.iter().flatten().collect::<BTreeSet<_>>().len()
}

fn histogram(c: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &x in c {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

/// The smallest-colour edge cell with more than one member.
fn target_cell(g: &Incidence, c: &[u32]) -> Option<u32> {
    let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
    for &x in &c[g.n..] {
        *sizes.entry(x).or_insert(0) += 1;
    }
    sizes.into_iter().find(|&(_, s)| s > 1).map(|(col, _)| col)
}

fn individualize(c: &mut [u32], node: usize) {
    let fresh = c.iter().copied().max().unwrap_or(0) + 1;
    c[node] = fresh;
}

struct Budget {
    left: u64,
    total: u64,
    what: &'static str,
}

impl Budget {
    fn new(total: u64, what: &'static str) -> Self {
        Budget { left: total, total, what }
    }

    fn tick(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::BudgetExceeded {
                what: self.what,
                budget: self.total,
            });
        }
        self.left -= 1;
        Ok(())
    }
}

/// Searches for an isomorphism `h1 -> h2`.
///
/// `Ok(None)` means the hypergraphs are not isomorphic; running out of
/// `budget` search-tree nodes is reported as [`Error::BudgetExceeded`].
pub fn isomorphic(h1: &Hypergraph, h2: &Hypergraph, budget: u64) -> Result<Option<IsoWitness>> {
    if h1.num_vertices() != h2.num_vertices() || h1.num_edges() != h2.num_edges() {
        return Ok(None);
    }
    let (a, b) = (index(h1), index(h2));
    // cheap rejection by the jointly refined colour histograms
    let mut colors = vec![a.inc.initial_colors(), b.inc.initial_colors()];
    refine(&[&a.inc, &b.inc], &mut colors);
    if histogram(&colors[0]) != histogram(&colors[1]) {
        return Ok(None);
    }
    let mut budget = Budget::new(budget, "isomorphism search");
    let (ca, oa) = canonical_leaf(&a.inc, &mut budget)?;
    let (cb, ob) = canonical_leaf(&b.inc, &mut budget)?;
    if ca != cb {
        return Ok(None);
    }
    // equal canonical forms: rank r of one is rank r of the other, and
    // vertices pair up by their type over ranks
    let types = |g: &Incidence, order: &[u32]| -> BTreeMap<Vec<u32>, Vec<usize>> {
        let mut rank = vec![0u32; g.m];
        for (r, &e) in order.iter().enumerate() {
            rank[e as usize] = r as u32;
        }
        let mut out: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for v in 0..g.n {
            let mut t: Vec<u32> = g.adj[v].iter().map(|&e| rank[e as usize - g.n]).collect();
            t.sort_unstable();
            out.entry(t).or_default().push(v);
        }
        out
    };
    let (ta, tb) = (types(&a.inc, &oa), types(&b.inc, &ob));
    let mut vertex_map = BTreeMap::new();
    for (t, vs) in ta {
        for (x, y) in vs.into_iter().zip(&tb[&t]) {
            vertex_map.insert(a.names[x].clone(), b.names[*y].clone());
        }
    }
    let w = IsoWitness { vertex_map };
    debug_assert!(w.is_valid(h1, h2));
    Ok(Some(w))
}

/// Canonical certificate of `h`, from the individualisation tree pruned by
/// the automorphisms found along the way.
pub fn certificate(h: &Hypergraph, budget: u64) -> Result<Certificate> {
    certificate_of(&index(h).inc, budget)
}

pub(crate) fn certificate_of(g: &Incidence, budget: u64) -> Result<Certificate> {
    let mut budget = Budget::new(budget, "canonical labelling");
    Ok(canonical_leaf(g, &mut budget)?.0)
}

/// The smallest leaf certificate with its edge order (edge indices by rank).
fn canonical_leaf(g: &Incidence, budget: &mut Budget) -> Result<(Certificate, Vec<u32>)> {
    let mut c = vec![g.initial_colors()];
    refine(&[g], &mut c);
    let mut search = Canon {
        g,
        budget,
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    search.run(c.pop().expect("one colouring"), &mut Vec::new())?;
    Ok(search.best.expect("search tree has a leaf"))
}

struct Canon<'a, 'b> {
    g: &'a Incidence,
    budget: &'b mut Budget,
    first: Option<(Certificate, Vec<u32>)>,
    best: Option<(Certificate, Vec<u32>)>,
    /// Edge permutations found by comparing leaves.
    automorphisms: Vec<Vec<u32>>,
}

impl Canon<'_, '_> {
    fn run(&mut self, c: Vec<u32>, path: &mut Vec<u32>) -> Result<()> {
        self.budget.tick()?;
        let g = self.g;
        let Some(col) = target_cell(g, &c) else {
            self.leaf(&c);
            return Ok(());
        };
        let members: Vec<u32> = (g.n..g.n + g.m).filter(|&i| c[i] == col).map(|i| (i - g.n) as u32).collect();
        let mut explored: Vec<u32> = Vec::new();
        for x in members {
            if !explored.is_empty() && self.in_orbit(x, &explored, path) {
                continue;
            }
            explored.push(x);
            let mut nc = vec![c.clone()];
            individualize(&mut nc[0], g.n + x as usize);
            refine(&[g], &mut nc);
            path.push(x);
            self.run(nc.pop().expect("one colouring"), path)?;
            path.pop();
        }
        Ok(())
    }

    fn leaf(&mut self, c: &[u32]) {
        let g = self.g;
        let mut order: Vec<(u32, u32)> = (g.n..g.n + g.m).map(|i| (c[i], (i - g.n) as u32)).collect();
        order.sort_unstable();
        let order: Vec<u32> = order.into_iter().map(|(_, e)| e).collect();
        let cert = leaf_certificate(g, c);
        for (rc, ro) in [&self.first, &self.best].into_iter().flatten() {
            if *rc == cert {
                let mut perm = vec![0u32; g.m];
                for (x, y) in ro.iter().zip(&order) {
                    perm[*x as usize] = *y;
                }
                if perm.iter().enumerate().any(|(i, &p)| i as u32 != p) && !self.automorphisms.contains(&perm) {
                    self.automorphisms.push(perm);
                }
            }
        }
        if self.first.is_none() {
            self.first = Some((cert.clone(), order.clone()));
        }
        if self.best.as_ref().is_none_or(|(b, _)| cert < *b) {
            self.best = Some((cert, order));
        }
    }

    /// Whether `x` lies in the orbit of an explored sibling under the found
    /// automorphisms fixing `path` pointwise.
    fn in_orbit(&self, x: u32, explored: &[u32], path: &[u32]) -> bool {
        let gens: Vec<&Vec<u32>> = self
            .automorphisms
            .iter()
            .filter(|p| path.iter().all(|&e| p[e as usize] == e))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut parent: Vec<u32> = (0..self.g.m as u32).collect();
        fn find(parent: &mut [u32], mut a: u32) -> u32 {
            while parent[a as usize] != a {
                parent[a as usize] = parent[parent[a as usize] as usize];
                a = parent[a as usize];
            }
            a
        }
        for p in gens {
            for (i, &j) in p.iter().enumerate() {
                let (ri, rj) = (find(&mut parent, i as u32), find(&mut parent, j));
                if ri != rj {
                    parent[ri as usize] = rj;
                }
            }
        }
        let rx = find(&mut parent, x);
        explored.iter().any(|&e| find(&mut parent, e) == rx)
    }
}

fn leaf_certificate(g: &Incidence, c: &[u32]) -> Certificate {
    let mut edge_cols: Vec<(u32, usize)> = (g.n..g.n + g.m).map(|i| (c[i], i)).collect();
    edge_cols.sort_unstable();
    let mut rank = vec![0u32; g.n + g.m];
    for (r, &(_, i)) in edge_cols.iter().enumerate() {
        rank[i] = r as u32;
    }
    let mut types: Vec<Vec<u32>> = (0..g.n)
        .map(|v| {
            let mut t: Vec<u32> = g.adj[v].iter().map(|&e| rank[e as usize]).collect();
            t.sort_unstable();
            t
        })
        .collect();
    types.sort_unstable();
    Certificate {
        vertices: g.n,
        edges: g.m,
        types,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grid, jigsaw};

    fn cycle(n: usize) -> Hypergraph {
        Hypergraph::from_edges((0..n).map(|i| [format!("x{i}"), format!("x{}", (i + 1) % n)]))
    }

    #[test]
    fn identity_witness() {
        let h = jigsaw(3, 3).unwrap();
        let w = isomorphic(&h, &h, DEFAULT_ISO_BUDGET).unwrap().unwrap();
        assert!(w.is_valid(&h, &h));
        assert!(IsoWitness::identity(&h).is_valid(&h, &h));
    }

    #[test]
    fn jigsaw22_is_a_four_cycle() {
        let w = isomorphic(&jigsaw(2, 2).unwrap(), &cycle(4), DEFAULT_ISO_BUDGET).unwrap();
        assert!(w.is_some());
        assert!(isomorphic(&grid(2, 2), &cycle(4), DEFAULT_ISO_BUDGET).unwrap().is_some());
    }

    #[test]
    fn different_sizes_are_not_isomorphic() {
        let r = isomorphic(&jigsaw(2, 3).unwrap(), &jigsaw(2, 2).unwrap(), DEFAULT_ISO_BUDGET);
        assert_eq!(r.unwrap(), None);
    }

    #[test]
    fn same_degree_sequence_but_not_isomorphic() {
        // C6 versus two disjoint triangles: both 2-regular on 6 vertices
        let two_triangles = Hypergraph::from_edges([
            ["a", "b"], ["b", "c"], ["a", "c"], ["d", "e"], ["e", "f"], ["d", "f"],
        ]);
        assert_eq!(isomorphic(&cycle(6), &two_triangles, DEFAULT_ISO_BUDGET).unwrap(), None);
        assert_ne!(
            certificate(&cycle(6), DEFAULT_ISO_BUDGET).unwrap(),
            certificate(&two_triangles, DEFAULT_ISO_BUDGET).unwrap()
        );
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let h = jigsaw(3, 3).unwrap();
        let err = isomorphic(&h, &h, 1).unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn certificate_round_trips_to_an_isomorphic_hypergraph() {
        let h = jigsaw(2, 3).unwrap().with_vertex("lonely").with_edge(Vec::<&str>::new());
        let cert = certificate(&h, DEFAULT_ISO_BUDGET).unwrap();
        let canon = cert.to_hypergraph();
        assert!(isomorphic(&h, &canon, DEFAULT_ISO_BUDGET).unwrap().is_some());
        assert_eq!(certificate(&canon, DEFAULT_ISO_BUDGET).unwrap(), cert);
    }

    #[test]
    fn symmetric_structures_stay_cheap() {
        // 40 vertices of one type in one edge: a single leaf suffices
        let mut h = Hypergraph::default();
        for i in 0..40 {
            h = h.with_edge([format!("t{i}"), "hub".to_string()]);
        }
        let big = Hypergraph::from_edges([(0..40).map(|i| format!("t{i}")).collect::<Vec<_>>()]);
        assert!(certificate(&big, 10).is_ok());
        assert!(isomorphic(&big, &big, 10).unwrap().is_some());
        // a star of 40 interchangeable edges: automorphisms prune the tree
        let renamed = h.rename(&h.vertices().iter().map(|v| (v.clone(), format!("{v}_"))).collect());
        assert!(isomorphic(&h, &renamed, 100_000).unwrap().is_some());
    }
}
