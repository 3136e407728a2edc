//! Tree decompositions and generalized hypertree decompositions.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{self, ones};
use crate::error::{Error, Result};
use crate::hypergraph::{fmt_edge, reduce, Edge, Hypergraph, Vertex};

/// Default vertex limit of [`exact_treewidth`].
pub const DEFAULT_TW_LIMIT: usize = 12;
/// Default edge limit of [`exact_ghw`].
pub const DEFAULT_GHW_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub parent: Option<usize>,
    pub bag: BTreeSet<Vertex>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GHDecomposition {
    pub td: TreeDecomposition,
    /// Edge cover of each node, indexed like `td.nodes`.
    pub covers: Vec<BTreeSet<Edge>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub width: usize,
    /// A node attaining the width; `None` for a decomposition without nodes.
    pub node: Option<usize>,
}

/// First violated decomposition condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    BadParent(usize),
    NotATree,
    UnknownVertex { node: usize, vertex: Vertex },
    EdgeNotCovered(Edge),
    Disconnected(Vertex),
    CoverMismatch,
    BagNotCovered { node: usize, vertex: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadParent(n) => write!(f, "node {n} has an out-of-range parent"),
            Violation::NotATree => write!(f, "parent links do not form a single tree"),
            Violation::UnknownVertex { node, vertex } => {
                write!(f, "bag of node {node} contains unknown vertex `{vertex}`")
            }
            Violation::EdgeNotCovered(e) => write!(f, "edge {} is contained in no bag", fmt_edge(e)),
            Violation::Disconnected(v) => write!(f, "nodes containing `{v}` are not connected"),
            Violation::CoverMismatch => write!(f, "number of covers differs from number of nodes"),
            Violation::BagNotCovered { node, vertex } => {
                write!(f, "vertex `{vertex}` of node {node} is not covered by its edges")
            }
        }
    }
}

impl TreeDecomposition {
    pub fn width(&self) -> WidthReport {
        let best = self
            .nodes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.bag.len().cmp(&b.1.bag.len()).then(b.0.cmp(&a.0)));
        WidthReport {
            width: best.map_or(0, |(_, n)| n.bag.len().saturating_sub(1)),
            node: best.map(|(i, _)| i),
        }
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                ch[p].push(i);
            }
        }
        ch
    }

    /// Nodes connected within the subset `keep`, from `start`.
    fn reach_within(&self, start: usize, keep: &[bool]) -> usize {
        let ch = self.children();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(u) = stack.pop() {
            count += 1;
            let mut nb = ch[u].clone();
            nb.extend(self.nodes[u].parent);
            for w in nb {
                if keep[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count
    }
}

impl GHDecomposition {
    pub fn width(&self) -> WidthReport {
        let best = self
            .covers
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)));
        WidthReport {
            width: best.map_or(0, |(_, c)| c.len()),
            node: best.map(|(i, _)| i),
        }
    }
}

/// Checks the tree decomposition conditions. Vertices that occur in no bag
/// are accepted (their node set is empty, hence connected); this is what
/// makes decompositions of hypergraphs with isolated vertices possible.
pub fn validate_td(h: &Hypergraph, td: &TreeDecomposition) -> Option<Violation> {
    let n = td.nodes.len();
    for (i, node) in td.nodes.iter().enumerate() {
        if node.parent.is_some_and(|p| p >= n || p == i) {
            return Some(Violation::BadParent(i));
        }
    }
    if n > 0 {
        let roots = td.nodes.iter().filter(|x| x.parent.is_none()).count();
        let all = vec![true; n];
        if roots != 1 || td.reach_within(0, &all) != n {
            return Some(Violation::NotATree);
        }
    }
    for (i, node) in td.nodes.iter().enumerate() {
        if let Some(v) = node.bag.iter().find(|v| !h.contains_vertex(v)) {
            return Some(Violation::UnknownVertex {
                node: i,
                vertex: v.clone(),
            });
        }
    }
    for e in h.edges() {
        if !td.nodes.iter().any(|x| e.is_subset(&x.bag)) {
            return Some(Violation::EdgeNotCovered(e.clone()));
        }
    }
    for v in h.vertices() {
        let keep: Vec<bool> = td.nodes.iter().map(|x| x.bag.contains(v)).collect();
        let total = keep.iter().filter(|&&k| k).count();
        if let Some(start) = keep.iter().position(|&k| k) {
            if td.reach_within(start, &keep) != total {
                return Some(Violation::Disconnected(v.clone()));
            }
        }
    }
    None
}

/// Checks a GHD. A cover naming a non-edge of `h` is an error, not a
/// violation.
pub fn validate_ghd(h: &Hypergraph, ghd: &GHDecomposition) -> Result<Option<Violation>> {
    for (i, c) in ghd.covers.iter().enumerate() {
        if let Some(e) = c.iter().find(|e| !h.contains_edge(e)) {
            return Err(Error::InvalidDecomposition(format!(
                "cover of node {i} uses {} which is not an edge",
                fmt_edge(e)
            )));
        }
    }
    if ghd.covers.len() != ghd.td.nodes.len() {
        return Ok(Some(Violation::CoverMismatch));
    }
    if let Some(v) = validate_td(h, &ghd.td) {
        return Ok(Some(v));
    }
    for (i, (node, cover)) in ghd.td.nodes.iter().zip(&ghd.covers).enumerate() {
        let covered: BTreeSet<&Vertex> = cover.iter().flatten().collect();
        if let Some(v) = node.bag.iter().find(|v| !covered.contains(v)) {
            return Ok(Some(Violation::BagNotCovered {
                node: i,
                vertex: v.clone(),
            }));
        }
    }
    Ok(None)
}

/// Primal adjacency masks.
struct Masks {
    names: Vec<Vertex>,
    adj: Vec<u64>,
}

impl Masks {
    fn new(h: &Hypergraph) -> Result<Self> {
        let (names, state) = bits::encode(h, "decomposition")?;
        let mut adj = vec![0u64; names.names.len()];
        for &e in &state.edges {
            for v in ones(e) {
                adj[v] |= e & !(1u64 << v);
            }
        }
        Ok(Masks {
            names: names.names,
            adj,
        })
    }

    fn all(&self) -> u64 {
        full(self.names.len())
    }

    /// Neighbours of `v` in the graph obtained by eliminating `gone`: the
    /// vertices outside `gone` reachable from `v` through `gone`.
    fn q(&self, gone: u64, v: usize) -> u64 {
        let mut seen = 1u64 << v;
        let mut frontier = self.adj[v];
        let mut out = 0u64;
        while frontier & !seen != 0 {
            let new = frontier & !seen;
            seen |= new;
            out |= new & !gone;
            frontier = ones(new & gone).fold(0, |acc, x| acc | self.adj[x]);
        }
        out
    }

    /// Tree decomposition of the elimination ordering `order`.
    fn td_from_order(&self, order: &[usize]) -> (TreeDecomposition, Vec<u64>) {
        let mut pos = vec![0usize; self.names.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut gone = 0u64;
        let mut bags = Vec::with_capacity(order.len());
        let mut nodes = Vec::with_capacity(order.len());
        for &v in order {
            let q = self.q(gone, v);
            bags.push(q | 1u64 << v);
            let parent = ones(q).map(|w| pos[w]).min();
            nodes.push(Node {
                parent,
                bag: ones(q | 1u64 << v).map(|i| self.names[i].clone()).collect(),
            });
            gone |= 1u64 << v;
        }
        // chain the roots of separate components under the last node
        if let Some(last) = nodes.len().checked_sub(1) {
            for node in nodes.iter_mut().take(last) {
                if node.parent.is_none() {
                    node.parent = Some(last);
                }
            }
        }
        (TreeDecomposition { nodes }, bags)
    }
}

fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Tree decomposition induced by eliminating the vertices of `h`'s primal
/// graph in `order` (which must list every vertex once).
pub fn td_from_ordering(h: &Hypergraph, order: &[Vertex]) -> Result<TreeDecomposition> {
    let m = Masks::new(h)?;
    let mut idx = Vec::with_capacity(order.len());
    let mut seen = BTreeSet::new();
    for v in order {
        let i = m
            .names
            .binary_search(v)
            .map_err(|_| Error::UnknownVertex(v.clone()))?;
        if !seen.insert(i) {
            return Err(Error::Precondition(format!("vertex `{v}` appears twice in the ordering")));
        }
        idx.push(i);
    }
    if idx.len() != m.names.len() {
        return Err(Error::Precondition("ordering must list every vertex".into()));
    }
    Ok(m.td_from_order(&idx).0)
}

/// Exact treewidth of the primal graph of `g` by dynamic programming over
/// vertex subsets.
pub fn exact_treewidth(g: &Hypergraph, limit: usize) -> Result<(WidthReport, TreeDecomposition)> {
    let n = g.num_vertices();
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "exact treewidth",
            limit,
            actual: n,
        });
    }
    let m = Masks::new(g)?;
    let size = 1usize << n;
    let mut best = vec![usize::MAX; size];
    let mut choice = vec![0u8; size];
    best[0] = 0;
    let mut by_count: Vec<usize> = (1..size).collect();
    by_count.sort_by_key(|s| s.count_ones());
    for s in by_count {
        for v in ones(s as u64) {
            let rest = s & !(1 << v);
            let cost = best[rest].max(m.q(rest as u64, v).count_ones() as usize);
            if cost < best[s] {
                best[s] = cost;
                choice[s] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = size - 1;
    while s != 0 {
        let v = choice[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let (td, _) = m.td_from_order(&order);
    let report = td.width();
    debug_assert!(n == 0 || report.width == best[size - 1]);
    Ok((report, td))
}

/// Exact generalized hypertree width.
///
/// The hypergraph is reduced first; for `k = 1, 2, ...` a depth-first search
/// over elimination orderings looks for one whose bags are each covered by
/// at most `k` edges. The decomposition is mapped back onto `h`: removed twin
/// vertices join the bags of their representative, isolated vertices stay
/// outside every bag. A hypergraph without edges has ghw 0.
pub fn exact_ghw(h: &Hypergraph, limit: usize) -> Result<(WidthReport, GHDecomposition)> {
    if h.num_edges() > limit {
        return Err(Error::LimitExceeded {
            what: "exact ghw",
            limit,
            actual: h.num_edges(),
        });
    }
    let (r, _) = reduce(h);
    let nonempty: Vec<&Edge> = r.edges().iter().filter(|e| !e.is_empty()).collect();
    if nonempty.is_empty() {
        let ghd = if h.edges().is_empty() {
            GHDecomposition::default()
        } else {
            GHDecomposition {
                td: TreeDecomposition {
                    nodes: vec![Node {
                        parent: None,
                        bag: BTreeSet::new(),
                    }],
                },
                covers: vec![BTreeSet::new()],
            }
        };
        return Ok((ghd.width(), ghd));
    }
    let m = Masks::new(&r)?;
    let (names, state) = bits::encode(&r, "exact ghw")?;
    let edges: Vec<u64> = state.edges.iter().copied().filter(|&e| e != 0).collect();
    let mut found = None;
    for k in 1..=edges.len() {
        let unions = cover_unions(&edges, k);
        let mut search = GhwSearch {
            m: &m,
            unions: &unions,
            failed: HashSet::new(),
        };
        let mut order = Vec::new();
        if search.run(0, &mut order) {
            found = Some(order);
            break;
        }
    }
    let order = found.expect("k = |E| always succeeds");
    let (td_r, bags) = m.td_from_order(&order);

    // lift back to h
    let types = h.vertex_types();
    let mut twins: BTreeMap<&Vertex, Vec<&Vertex>> = BTreeMap::new();
    for v in r.vertices() {
        for (w, t) in &types {
            if w != v && !t.is_empty() && *t == types[v] {
                twins.entry(v).or_default().push(w);
            }
        }
    }
    let lift_edge = |f: u64| -> Edge {
        let fr = names.edge_of(f);
        h.edges()
            .iter()
            .find(|e| e.iter().filter(|v| r.contains_vertex(v)).cloned().collect::<Edge>() == fr)
            .expect("reduced edge stems from an original edge")
            .clone()
    };
    let mut nodes = Vec::new();
    let mut covers = Vec::new();
    for (node, &bag) in td_r.nodes.iter().zip(&bags) {
        let mut b = node.bag.clone();
        for v in &node.bag {
            if let Some(ts) = twins.get(v) {
                b.extend(ts.iter().map(|w| (*w).clone()));
            }
        }
        nodes.push(Node {
            parent: node.parent,
            bag: b,
        });
        covers.push(min_cover(&edges, bag).into_iter().map(lift_edge).collect());
    }
    let ghd = GHDecomposition {
        td: TreeDecomposition { nodes },
        covers,
    };
    debug_assert_eq!(validate_ghd(h, &ghd), Ok(None));
    Ok((ghd.width(), ghd))
}

/// Maximal unions of `k` edges (any union of at most `k` edges lies inside
/// one of them).
fn cover_unions(edges: &[u64], k: usize) -> Vec<u64> {
    let k = k.min(edges.len());
    let mut out = BTreeSet::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.insert(idx.iter().fold(0u64, |a, &i| a | edges[i]));
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                let list: Vec<u64> = out.into_iter().collect();
                return list
                    .iter()
                    .copied()
                    .filter(|&u| !list.iter().any(|&w| w != u && w & u == u))
                    .collect();
            }
            i -= 1;
            if idx[i] < edges.len() - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Smallest set of edges covering `bag`, first in lexicographic order.
fn min_cover(edges: &[u64], bag: u64) -> Vec<u64> {
    if bag == 0 {
        return Vec::new();
    }
    for k in 1..=edges.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let u = idx.iter().fold(0u64, |a, &i| a | edges[i]);
            if u & bag == bag {
                return idx.iter().map(|&i| edges[i]).collect();
            }
            let mut i = k;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if idx[i] < edges.len() - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    unreachable!("bag vertices lie in edges")
}

struct GhwSearch<'a> {
    m: &'a Masks,
    unions: &'a [u64],
    failed: HashSet<u64>,
}

impl GhwSearch<'_> {
    fn coverable(&self, x: u64) -> bool {
        self.unions.iter().any(|&u| u & x == x)
    }

    /// Extends `order` (the vertices in `gone`, in elimination order) to a
    /// full ordering whose bags are all coverable.
    fn run(&mut self, gone: u64, order: &mut Vec<usize>) -> bool {
        let all = self.m.all();
        let rest = all & !gone;
        if rest == 0 {
            return true;
        }
        if self.coverable(rest) {
            order.extend(ones(rest));
            return true;
        }
        if self.failed.contains(&gone) {
            return false;
        }
        let qs: Vec<(usize, u64)> = ones(rest).map(|v| (v, self.m.q(gone, v))).collect();
        // a simplicial vertex can be eliminated first without loss
        for &(v, q) in &qs {
            if ones(q).all(|a| q & !(1u64 << a) & !self.m.q(gone, a) == 0) {
                if !self.coverable(q | 1u64 << v) {
                    self.failed.insert(gone);
                    return false;
                }
                order.push(v);
                if self.run(gone | 1u64 << v, order) {
                    return true;
                }
                order.pop();
                self.failed.insert(gone);
                return false;
            }
        }
        for (v, q) in qs {
            if self.coverable(q | 1u64 << v) {
                order.push(v);
                if self.run(gone | 1u64 << v, order) {
                    return true;
                }
                order.pop();
            }
        }
        self.failed.insert(gone);
        false
    }
}

/// Rewrites a GHD of `h` into one of `h.merge_on(v)` without increasing
/// its width.
pub fn merge_transform(h: &Hypergraph, ghd: &GHDecomposition, v: &str) -> Result<GHDecomposition> {
    if let Some(bad) = validate_ghd(h, ghd)? {
        return Err(Error::InvalidDecomposition(bad.to_string()));
    }
    let inc = h.incidence(v)?;
    if inc.is_empty() {
        return Err(Error::NothingToMerge(v.to_string()));
    }
    let mut ev: Edge = inc.iter().flatten().cloned().collect();
    ev.remove(v);
    let mut nodes = Vec::with_capacity(ghd.td.nodes.len());
    let mut covers = Vec::with_capacity(ghd.covers.len());
    for (node, cover) in ghd.td.nodes.iter().zip(&ghd.covers) {
        let mut bag = node.bag.clone();
        if bag.remove(v) {
            bag.extend(ev.iter().cloned());
        }
        let c: BTreeSet<Edge> = if cover.iter().any(|e| inc.contains(e)) {
            let mut c: BTreeSet<Edge> = cover.difference(&inc).cloned().collect();
            c.insert(ev.clone());
            c
        } else {
            cover.clone()
        };
        nodes.push(Node {
            parent: node.parent,
            bag,
        });
        covers.push(c);
    }
    Ok(GHDecomposition {
        td: TreeDecomposition { nodes },
        covers,
    })
}

/// Turns a tree decomposition of `dual(h)` into a GHD of the reduced
/// hypergraph `h`: every dual bag becomes a cover and the bag is its union.
pub fn dual_ghd(h: &Hypergraph, td_of_dual: &TreeDecomposition) -> Result<GHDecomposition> {
    if !h.is_reduced() {
        return Err(Error::NotReduced);
    }
    let (dual, edges) = h.dual_with_edges();
    if let Some(bad) = validate_td(&dual, td_of_dual) {
        return Err(Error::InvalidDecomposition(bad.to_string()));
    }
    let names: Vec<&Vertex> = dual.vertices().iter().collect();
    let edge_of = |x: &Vertex| -> &Edge { &edges[names.binary_search(&x).expect("dual vertex")] };
    let mut nodes = Vec::new();
    let mut covers = Vec::new();
    for node in &td_of_dual.nodes {
        let cover: BTreeSet<Edge> = node.bag.iter().map(|x| edge_of(x).clone()).collect();
        nodes.push(Node {
            parent: node.parent,
            bag: cover.iter().flatten().cloned().collect(),
        });
        covers.push(cover);
    }
    Ok(GHDecomposition {
        td: TreeDecomposition { nodes },
        covers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grid, jigsaw, mesh};

    fn path_graph(n: usize) -> Hypergraph {
        Hypergraph::from_edges((1..n).map(|i| [format!("p{i}"), format!("p{}", i + 1)]))
    }

    fn complete(n: usize) -> Hypergraph {
        let mut h = Hypergraph::default();
        for i in 0..n {
            for j in i + 1..n {
                h = h.with_edge([format!("k{i}"), format!("k{j}")]);
            }
        }
        h
    }

    #[test]
    fn single_bag_is_valid() {
        let h = jigsaw(2, 2).unwrap();
        let td = TreeDecomposition {
            nodes: vec![Node {
                parent: None,
                bag: h.vertices().clone(),
            }],
        };
        assert_eq!(validate_td(&h, &td), None);
        assert_eq!(td.width().width, 3);
    }

    #[test]
    fn missing_edge_is_reported() {
        let h = path_graph(3);
        let td = TreeDecomposition {
            nodes: vec![Node {
                parent: None,
                bag: ["p1".to_string(), "p2".to_string()].into(),
            }],
        };
        assert!(matches!(validate_td(&h, &td), Some(Violation::EdgeNotCovered(_))));
    }

    #[test]
    fn disconnected_occurrence_is_reported() {
        let h = path_graph(3);
        let bag = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        let td = TreeDecomposition {
            nodes: vec![
                Node { parent: None, bag: bag(&["p1", "p2"]) },
                Node { parent: Some(0), bag: bag(&["p2", "p3"]) },
                Node { parent: Some(1), bag: bag(&["p1"]) },
            ],
        };
        assert_eq!(validate_td(&h, &td), Some(Violation::Disconnected("p1".into())));
    }

    #[test]
    fn treewidth_of_small_families() {
        assert_eq!(exact_treewidth(&path_graph(6), DEFAULT_TW_LIMIT).unwrap().0.width, 1);
        assert_eq!(exact_treewidth(&complete(5), DEFAULT_TW_LIMIT).unwrap().0.width, 4);
        let (w, td) = exact_treewidth(&grid(3, 3), DEFAULT_TW_LIMIT).unwrap();
        assert_eq!(w.width, 3);
        assert_eq!(validate_td(&grid(3, 3), &td), None);
        assert!(exact_treewidth(&grid(4, 4), DEFAULT_TW_LIMIT).is_err());
    }

    #[test]
    fn ghw_of_small_families() {
        let ghw = |h: &Hypergraph| exact_ghw(h, DEFAULT_GHW_LIMIT).unwrap().0.width;
        assert_eq!(ghw(&path_graph(5)), 1);
        assert_eq!(ghw(&jigsaw(2, 2).unwrap()), 2);
        assert_eq!(ghw(&Hypergraph::default().with_vertex("x")), 0);
        assert_eq!(ghw(&Hypergraph::from_edges([Vec::<&str>::new()])), 0);
        let tri = Hypergraph::from_edges([["a", "b"], ["b", "c"], ["a", "c"]]);
        assert_eq!(ghw(&tri), 2);
        assert_eq!(ghw(&tri.with_edge(["a", "b", "c"])), 1);
    }

    #[test]
    fn ghw_lifts_back_twins_and_isolated_vertices() {
        let h = Hypergraph::from_edges([vec!["a", "b", "t"], vec!["b", "c"], vec!["c", "a"]])
            .with_vertex("iso")
            .with_edge(Vec::<&str>::new());
        let (w, ghd) = exact_ghw(&h, DEFAULT_GHW_LIMIT).unwrap();
        assert_eq!(validate_ghd(&h, &ghd), Ok(None));
        assert_eq!(w.width, 2);
    }

    #[test]
    fn merge_transform_on_a_two_edge_path() {
        let h = Hypergraph::from_edges([["a", "b"], ["b", "c"]]);
        let ghd = GHDecomposition {
            td: TreeDecomposition {
                nodes: vec![Node {
                    parent: None,
                    bag: h.vertices().clone(),
                }],
            },
            covers: vec![h.edges().clone()],
        };
        let out = merge_transform(&h, &ghd, "b").unwrap();
        let merged = h.merge_on("b").unwrap();
        assert_eq!(validate_ghd(&merged, &out), Ok(None));
        assert_eq!(out.width().width, 1);
        assert_eq!(out.td.nodes[0].bag, ["a".to_string(), "c".to_string()].into());
    }

    #[test]
    fn merge_transform_on_the_mesh() {
        let h = mesh(4, 4);
        let (w, ghd) = exact_ghw(&h, DEFAULT_GHW_LIMIT).unwrap();
        let out = merge_transform(&h, &ghd, "c1_1").unwrap();
        assert_eq!(validate_ghd(&h.merge_on("c1_1").unwrap(), &out), Ok(None));
        assert!(out.width().width <= w.width);
    }

    #[test]
    fn dual_ghd_respects_the_bound() {
        for h in [jigsaw(2, 2).unwrap(), Hypergraph::from_edges([["a", "b"], ["b", "c"], ["a", "c"]])] {
            let (tw, td) = exact_treewidth(&h.dual(), DEFAULT_TW_LIMIT).unwrap();
            let ghd = dual_ghd(&h, &td).unwrap();
            assert_eq!(validate_ghd(&h, &ghd), Ok(None));
            assert!(ghd.width().width <= tw.width + 1);
        }
        let single = Hypergraph::from_edges([["a"]]);
        let (_, td) = exact_treewidth(&single.dual(), DEFAULT_TW_LIMIT).unwrap();
        assert_eq!(dual_ghd(&single, &td).unwrap().td.nodes.len(), 1);
        assert_eq!(dual_ghd(&Hypergraph::from_edges([["a", "b"]]), &td), Err(Error::NotReduced));
    }

    #[test]
    fn non_edge_cover_is_an_error() {
        let h = path_graph(3);
        let ghd = GHDecomposition {
            td: TreeDecomposition {
                nodes: vec![Node { parent: None, bag: h.vertices().clone() }],
            },
            covers: vec![[crate::hypergraph::edge(["p1", "p3"])].into()],
        };
        assert!(validate_ghd(&h, &ghd).is_err());
    }

    #[test]
    fn cover_unions_are_maximal() {
        let u = cover_unions(&[0b001, 0b011, 0b100], 1);
        assert_eq!(u, vec![0b011, 0b100]);
        assert_eq!(min_cover(&[0b001, 0b011, 0b100], 0b101), vec![0b001, 0b100]);
    }
}
