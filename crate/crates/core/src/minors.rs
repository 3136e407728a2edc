//! Graph minors of (duals of) hypergraphs and the degree-2 correspondence
//! between minors of the dual and dilutions to dual graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{self, ones};
use crate::dilution::{edges_connected, track_labels, verify_dilution, DilutionSequence, DilutionStep};
use crate::error::{Error, Result};
use crate::generators::grid;
use crate::hypergraph::{reduce, Edge, Hypergraph, UnionFind, Vertex};

/// Default vertex limit of [`find_minor`].
pub const DEFAULT_MINOR_LIMIT: usize = 20;
/// Default number of backtracking nodes of [`find_minor`].
pub const DEFAULT_MINOR_BUDGET: u64 = 5_000_000;

/// Branch sets: every vertex of the pattern graph maps to a set of host
/// vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorMap {
    pub map: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl MinorMap {
    pub fn image(&self, v: &str) -> Option<&BTreeSet<Vertex>> {
        self.map.get(v)
    }

    pub fn is_onto(&self, f: &Hypergraph) -> bool {
        self.map.values().map(BTreeSet::len).sum::<usize>() == f.num_vertices()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinorViolation {
    Domain,
    EmptyImage(Vertex),
    UnknownVertex(Vertex),
    Overlap(Vertex),
    NotConnected(Vertex),
    NotAdjacent(Vertex, Vertex),
    NotOnto,
}

impl fmt::Display for MinorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinorViolation::Domain => write!(f, "domain differs from the pattern's vertex set"),
            MinorViolation::EmptyImage(v) => write!(f, "image of `{v}` is empty"),
            MinorViolation::UnknownVertex(v) => write!(f, "image uses unknown host vertex `{v}`"),
            MinorViolation::Overlap(v) => write!(f, "host vertex `{v}` is in two images"),
            MinorViolation::NotConnected(v) => write!(f, "image of `{v}` is not connected"),
            MinorViolation::NotAdjacent(a, b) => {
                write!(f, "no host edge joins the images of `{a}` and `{b}`")
            }
            MinorViolation::NotOnto => write!(f, "images do not cover the host"),
        }
    }
}

fn pattern_pairs(g: &Hypergraph) -> Vec<(Vertex, Vertex)> {
    g.edges()
        .iter()
        .filter(|e| e.len() == 2)
        .map(|e| {
            let mut it = e.iter();
            (it.next().unwrap().clone(), it.next().unwrap().clone())
        })
        .collect()
}

/// Checks that `mu` is a minor map from the graph `g` into `f`; images must
/// be connected in `f` and adjacent pattern vertices need a host edge
/// meeting both images. With `onto`, the images must also cover `V(f)`.
pub fn validate_minor_map(g: &Hypergraph, f: &Hypergraph, mu: &MinorMap, onto: bool) -> Option<MinorViolation> {
    if !mu.map.keys().eq(g.vertices().iter()) {
        return Some(MinorViolation::Domain);
    }
    let mut used = BTreeSet::new();
    for (v, img) in &mu.map {
        if img.is_empty() {
            return Some(MinorViolation::EmptyImage(v.clone()));
        }
        for x in img {
            if !f.contains_vertex(x) {
                return Some(MinorViolation::UnknownVertex(x.clone()));
            }
            if !used.insert(x) {
                return Some(MinorViolation::Overlap(x.clone()));
            }
        }
        if !f.restrict(img).is_connected() {
            return Some(MinorViolation::NotConnected(v.clone()));
        }
    }
    for (a, b) in pattern_pairs(g) {
        let (ia, ib) = (&mu.map[&a], &mu.map[&b]);
        if !f.edges().iter().any(|e| !e.is_disjoint(ia) && !e.is_disjoint(ib)) {
            return Some(MinorViolation::NotAdjacent(a, b));
        }
    }
    if onto && used.len() != f.num_vertices() {
        return Some(MinorViolation::NotOnto);
    }
    None
}

/// Exhaustive search for a minor map of the graph `g` into `f`.
///
/// Pattern vertices are assigned in breadth-first order; each receives a
/// connected set of unused host vertices (smallest sets first) touching the
/// images of its already placed neighbours. The result is extended so that
/// it covers every host component it touches.
pub fn find_minor(g: &Hypergraph, f: &Hypergraph, limit: usize, budget: u64) -> Result<Option<MinorMap>> {
    let n = f.num_vertices();
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "minor search",
            limit,
            actual: n,
        });
    }
    if g.num_vertices() > n {
        return Ok(None);
    }
    let (names, state) = bits::encode(f, "minor search")?;
    let mut adj = vec![0u64; n];
    for &e in &state.edges {
        for v in ones(e) {
            adj[v] |= e & !(1u64 << v);
        }
    }
    let connected = |mask: u64| -> bool {
        let start = mask & mask.wrapping_neg();
        let mut seen = start;
        loop {
            let grow = ones(seen).fold(seen, |a, x| a | adj[x]) & mask;
            if grow == seen {
                return seen == mask;
            }
            seen = grow;
        }
    };
    let mut candidates: Vec<u64> = (1..1u64 << n).filter(|&m| connected(m)).collect();
    candidates.sort_by_key(|m| (m.count_ones(), *m));

    let order = bfs_order(g);
    let pos: BTreeMap<&Vertex, usize> = order.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut earlier: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (a, b) in pattern_pairs(g) {
        let (i, j) = (pos[&a], pos[&b]);
        earlier[i.max(j)].push(i.min(j));
    }
    let mut search = MinorSearch {
        adj: &adj,
        candidates: &candidates,
        earlier: &earlier,
        images: vec![0; order.len()],
        total: n,
        left: budget,
        budget,
    };
    if !search.run(0, 0)? {
        return Ok(None);
    }
    let mut images = search.images;
    // grow images over the host components they touch
    let mut used = images.iter().fold(0u64, |a, b| a | b);
    loop {
        let mut changed = false;
        for img in images.iter_mut() {
            let nb = ones(*img).fold(0, |a, x| a | adj[x]) & !used;
            if nb != 0 {
                *img |= nb;
                used |= nb;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let map = order
        .iter()
        .zip(&images)
        .map(|(v, &m)| (v.clone(), ones(m).map(|i| names.names[i].clone()).collect()))
        .collect();
    let mu = MinorMap { map };
    debug_assert_eq!(validate_minor_map(g, f, &mu, false), None);
    Ok(Some(mu))
}

fn bfs_order(g: &Hypergraph) -> Vec<Vertex> {
    let mut order = Vec::new();
    let mut seen = BTreeSet::new();
    for s in g.vertices() {
        if !seen.insert(s.clone()) {
            continue;
        }
        let mut queue = VecDeque::from([s.clone()]);
        while let Some(x) = queue.pop_front() {
            order.push(x.clone());
            for e in g.edges().iter().filter(|e| e.contains(&x)) {
                for y in e {
                    if seen.insert(y.clone()) {
                        queue.push_back(y.clone());
                    }
                }
            }
        }
    }
    order
}

struct MinorSearch<'a> {
    adj: &'a [u64],
    candidates: &'a [u64],
    earlier: &'a [Vec<usize>],
    images: Vec<u64>,
    total: usize,
    left: u64,
    budget: u64,
}

impl MinorSearch<'_> {
    fn run(&mut self, i: usize, used: u64) -> Result<bool> {
        if i == self.images.len() {
            return Ok(true);
        }
        if self.left == 0 {
            return Err(Error::BudgetExceeded {
                what: "minor search",
                budget: self.budget,
            });
        }
        self.left -= 1;
        let free = self.total - used.count_ones() as usize;
        let still_needed = self.images.len() - i - 1;
        for &c in self.candidates {
            if c & used != 0 {
                continue;
            }
            if (c.count_ones() as usize) + still_needed > free {
                break;
            }
            let reach = ones(c).fold(0, |a, x| a | self.adj[x]);
            if self.earlier[i].iter().all(|&j| reach & self.images[j] != 0) {
                self.images[i] = c;
                if self.run(i + 1, used | c)? {
                    return Ok(true);
                }
            }
        }
        self.images[i] = 0;
        Ok(false)
    }
}

/// Searches for the `n x n` grid as a minor of `f`.
pub fn find_grid_minor(f: &Hypergraph, n: usize, limit: usize, budget: u64) -> Result<Option<MinorMap>> {
    find_minor(&grid(n, n), f, limit, budget)
}

fn check_degree(h: &Hypergraph) -> Result<()> {
    let d = h.max_degree();
    if d > 2 {
        return Err(Error::DegreeTooLarge { degree: d, allowed: 2 });
    }
    Ok(())
}

/// Given a degree-2 hypergraph `h` and a minor map `mu` of the connected
/// graph `g` into the dual of the reduced form of `h` (dual vertices named as
/// by [`Hypergraph::dual_with_edges`]), builds a dilution sequence from `h`
/// to a hypergraph isomorphic to `dual(g)`.
///
/// Each branch set is read as a set of edges of `h`. Adjacent branch sets
/// get a connector vertex (the smallest vertex shared by the two sets);
/// every branch set is fused into one edge by merging along a spanning tree
/// of its internal vertices, and finally all non-connector vertices are
/// deleted. The result is verified before it is returned.
pub fn jigsaw_from_grid_minor(h: &Hypergraph, g: &Hypergraph, mu: &MinorMap) -> Result<DilutionSequence> {
    check_degree(h)?;
    if !g.is_connected() {
        return Err(Error::Precondition("pattern graph must be connected".into()));
    }
    let (r, reduction) = reduce(h);
    let (f, dual_edges) = r.dual_with_edges();
    if let Some(bad) = validate_minor_map(g, &f, mu, false) {
        return Err(Error::InvalidMinorMap(bad.to_string()));
    }
    let dual_names: Vec<&Vertex> = f.vertices().iter().collect();
    let edge_of = |x: &Vertex| &dual_edges[dual_names.binary_search(&x).expect("dual vertex")];
    let delta: BTreeMap<&Vertex, BTreeSet<&Edge>> = mu
        .map
        .iter()
        .map(|(u, img)| (u, img.iter().map(edge_of).collect()))
        .collect();

    let mut connectors: BTreeSet<Vertex> = BTreeSet::new();
    let mut by_vertex: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    for (a, b) in pattern_pairs(g) {
        let (da, db) = (&delta[&a], &delta[&b]);
        let c = r
            .vertices()
            .iter()
            .find(|x| da.iter().any(|e| e.contains(*x)) && db.iter().any(|e| e.contains(*x)))
            .ok_or_else(|| Error::InvalidMinorMap(format!("no connector between `{a}` and `{b}`")))?
            .clone();
        connectors.insert(c.clone());
        by_vertex.entry(a).or_default().insert(c.clone());
        by_vertex.entry(b).or_default().insert(c);
    }

    let mut steps = Vec::new();
    let mut merged = BTreeSet::new();
    let incidence = r.vertex_types();
    for (u, edges) in &delta {
        // internal vertices join two edges of the same branch set
        let ids: Vec<String> = (0..edges.len()).map(|i| i.to_string()).collect();
        let list: Vec<&&Edge> = edges.iter().collect();
        let mut uf = UnionFind::new(ids.iter().cloned());
        for (x, t) in &incidence {
            if t.len() != 2 || !t.iter().all(|e| edges.contains(e)) {
                continue;
            }
            let mut it = t.iter().map(|e| list.iter().position(|f| **f == e).expect("member"));
            let (p, q) = (it.next().unwrap(), it.next().unwrap());
            if uf.find(&ids[p]) != uf.find(&ids[q]) {
                uf.union(&ids[p], &ids[q]);
                if by_vertex.get(*u).is_some_and(|c| c.contains(x)) {
                    return Err(Error::Construction(format!(
                        "spanning vertex `{x}` of `{u}` is a connector"
                    )));
                }
                merged.insert(x.clone());
                steps.push(DilutionStep::MergeOn(x.clone()));
            }
        }
    }
    for x in r.vertices() {
        if !connectors.contains(x) && !merged.contains(x) {
            steps.push(DilutionStep::DeleteVertex(x.clone()));
        }
    }
    let mut seq = reduction.then(DilutionSequence::new(steps));
    let before_cleanup = crate::dilution::apply_sequence(h, &seq)?;
    if before_cleanup.contains_edge(&Edge::new()) && before_cleanup.num_edges() > 1 {
        seq.steps.push(DilutionStep::DeleteSubedge(Edge::new()));
    }
    match verify_dilution(h, &seq, &g.dual())? {
        Some(_) => Ok(seq),
        None => Err(Error::Construction("extracted sequence does not reach the dual of the pattern".into())),
    }
}

/// Reads the edge labels of a dilution from the degree-2 hypergraph `h` to
/// `dual(g)` as a minor map of the connected graph `g` into `dual(h)`.
pub fn minor_from_dilution(h: &Hypergraph, seq: &DilutionSequence, g: &Hypergraph) -> Result<MinorMap> {
    check_degree(h)?;
    if !g.is_connected() {
        return Err(Error::Precondition("pattern graph must be connected".into()));
    }
    let target = g.dual();
    let result = crate::dilution::apply_sequence(h, seq)?;
    let witness = verify_dilution(h, seq, &target)?.ok_or(Error::NotIsomorphic)?;
    let labels = track_labels(h, seq)?;
    let (dh, h_edges) = h.dual_with_edges();
    let dnames: Vec<&Vertex> = dh.vertices().iter().collect();
    let dual_vertex = |e: &Edge| -> Vertex {
        dnames[h_edges.binary_search(e).expect("original edge")].clone()
    };
    let (gd, _) = g.dual_with_edges();
    // pattern vertex -> its dual edge (set of pattern-edge names)
    let pattern_edges: Vec<&Edge> = g.edges().iter().collect();
    let gd_names: Vec<&Vertex> = gd.vertices().iter().collect();
    let dual_edge_of = |u: &Vertex| -> Edge {
        pattern_edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(u))
            .map(|(i, _)| gd_names[i].clone())
            .collect()
    };
    let inverse = witness.inverse();
    let mut map = BTreeMap::new();
    let vertices: Vec<&Vertex> = g.vertices().iter().collect();
    if vertices.len() <= 2 {
        // one or two pattern vertices share a single dual edge
        let only = result.edges().iter().next().ok_or(Error::NotIsomorphic)?;
        let label = labels.label(only).expect("labelled").clone();
        // the surviving edge may stem from a part of h too small to split;
        // any degree-2 vertex of h then shows two adjacent dual vertices
        let parts = match split_label(&label, vertices.len()) {
            Ok(p) => p,
            Err(err) if vertices.len() == 2 => match h.vertex_types().into_values().find(|t| t.len() == 2) {
                Some(t) => t.into_iter().map(|e| BTreeSet::from([e])).collect(),
                None => return Err(err),
            },
            Err(err) => match h.edges().iter().next() {
                Some(e) => vec![BTreeSet::from([e.clone()])],
                None => return Err(err),
            },
        };
        for (v, part) in vertices.iter().zip(parts) {
            map.insert((*v).clone(), part.iter().map(&dual_vertex).collect());
        }
    } else {
        for u in vertices {
            let e = inverse.map_edge(&dual_edge_of(u));
            let label = labels.label(&e).ok_or(Error::NotIsomorphic)?;
            map.insert(u.clone(), label.iter().map(&dual_vertex).collect());
        }
    }
    let mu = MinorMap { map };
    match validate_minor_map(g, &dh, &mu, false) {
        None => Ok(mu),
        Some(bad) => Err(Error::InvalidMinorMap(bad.to_string())),
    }
}

/// Splits a label into `parts` connected, pairwise adjacent pieces (one or
/// two). Two pieces need at least two non-empty edges.
fn split_label(label: &BTreeSet<Edge>, parts: usize) -> Result<Vec<BTreeSet<Edge>>> {
    let nonempty: Vec<&Edge> = label.iter().filter(|e| !e.is_empty()).collect();
    // the connected piece around the first non-empty edge
    let mut piece: BTreeSet<Edge> = nonempty.first().map(|e| (*e).clone()).into_iter().collect();
    loop {
        let next = nonempty
            .iter()
            .find(|e| !piece.contains(**e) && piece.iter().any(|p| !p.is_disjoint(e)));
        match next {
            Some(e) => {
                piece.insert((*e).clone());
            }
            None => break,
        }
    }
    if parts == 1 {
        return if piece.is_empty() {
            Err(Error::Construction("label has no non-empty edge".into()))
        } else {
            Ok(vec![piece])
        };
    }
    if piece.len() < 2 {
        return Err(Error::Construction(
            "a single edge cannot host two adjacent branch sets".into(),
        ));
    }
    // peel off a piece member whose removal keeps the rest connected
    for e in piece.iter().rev() {
        let mut rest = piece.clone();
        rest.remove(e);
        if edges_connected(&rest) {
            return Ok(vec![rest, BTreeSet::from([e.clone()])]);
        }
    }
    unreachable!("every connected set has a non-cut member")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{jigsaw, mesh};

    fn complete(n: usize) -> Hypergraph {
        let mut h = Hypergraph::default();
        for i in 0..n {
            for j in i + 1..n {
                h = h.with_edge([format!("k{i}"), format!("k{j}")]);
            }
        }
        h
    }

    fn star(n: usize) -> Hypergraph {
        Hypergraph::from_edges((1..=n).map(|i| ["hub".to_string(), format!("l{i}")]))
    }

    #[test]
    fn identity_is_a_minor_map() {
        let g = grid(2, 2);
        let mu = MinorMap {
            map: g.vertices().iter().map(|v| (v.clone(), BTreeSet::from([v.clone()]))).collect(),
        };
        assert_eq!(validate_minor_map(&g, &g, &mu, true), None);
    }

    #[test]
    fn overlapping_images_are_rejected() {
        let g = Hypergraph::from_edges([["a", "b"]]);
        let f = Hypergraph::from_edges([["x", "y"]]);
        let mu = MinorMap {
            map: [
                ("a".to_string(), BTreeSet::from(["x".to_string()])),
                ("b".to_string(), BTreeSet::from(["x".to_string(), "y".to_string()])),
            ]
            .into(),
        };
        assert_eq!(validate_minor_map(&g, &f, &mu, false), Some(MinorViolation::Overlap("x".into())));
    }

    #[test]
    fn grid_minor_searches() {
        let find = |f: &Hypergraph| find_grid_minor(f, 2, DEFAULT_MINOR_LIMIT, DEFAULT_MINOR_BUDGET).unwrap();
        let mu = find(&grid(3, 3)).unwrap();
        assert_eq!(validate_minor_map(&grid(2, 2), &grid(3, 3), &mu, true), None);
        assert!(find(&star(5)).is_none());
        assert!(find(&complete(4)).is_some());
        assert!(find(&grid(4, 4)).is_some());
        assert!(find_grid_minor(&grid(4, 4), 2, 12, 10).is_err());
    }

    #[test]
    fn k5_is_not_a_minor_of_a_planar_grid() {
        let r = find_minor(&complete(5), &grid(3, 3), DEFAULT_MINOR_LIMIT, DEFAULT_MINOR_BUDGET).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn extraction_from_jigsaw_to_smaller_jigsaw() {
        let h = jigsaw(3, 3).unwrap();
        let f = reduce(&h).0.dual();
        let mu = find_grid_minor(&f, 2, DEFAULT_MINOR_LIMIT, DEFAULT_MINOR_BUDGET).unwrap().unwrap();
        let seq = jigsaw_from_grid_minor(&h, &grid(2, 2), &mu).unwrap();
        assert!(verify_dilution(&h, &seq, &jigsaw(2, 2).unwrap()).unwrap().is_some());
        // and back again
        let back = minor_from_dilution(&h, &seq, &grid(2, 2)).unwrap();
        assert_eq!(validate_minor_map(&grid(2, 2), &h.dual(), &back, false), None);
    }

    #[test]
    fn extraction_from_the_mesh() {
        let h = mesh(6, 6);
        let f = reduce(&h).0.dual();
        let g = grid(2, 3);
        let mu = find_minor(&g, &f, DEFAULT_MINOR_LIMIT, DEFAULT_MINOR_BUDGET).unwrap().unwrap();
        let seq = jigsaw_from_grid_minor(&h, &g, &mu).unwrap();
        assert!(verify_dilution(&h, &seq, &jigsaw(2, 3).unwrap()).unwrap().is_some());
    }

    #[test]
    fn degree_three_is_rejected() {
        let h = Hypergraph::from_edges([vec!["a", "b"], vec!["a", "c"], vec!["a", "d"]]);
        let err = jigsaw_from_grid_minor(&h, &grid(2, 2), &MinorMap::default()).unwrap_err();
        assert_eq!(err, Error::DegreeTooLarge { degree: 3, allowed: 2 });
    }

    #[test]
    fn empty_sequence_gives_the_identity_like_map() {
        let g = grid(2, 2);
        let h = g.dual();
        let mu = minor_from_dilution(&h, &DilutionSequence::default(), &g).unwrap();
        assert!(mu.map.values().all(|img| img.len() == 1));
    }

    #[test]
    fn single_merge_gives_images_of_size_at_most_two() {
        // a 4-cycle with one edge subdivided
        let h = Hypergraph::from_edges([["a", "b"], ["b", "c"], ["c", "d"], ["d", "s"], ["s", "a"]]);
        let seq = DilutionSequence::new(vec![DilutionStep::MergeOn("s".into())]);
        let g = h.merge_on("s").unwrap().dual();
        let mu = minor_from_dilution(&h, &seq, &g).unwrap();
        assert!(mu.map.values().all(|img| img.len() <= 2));
        assert_eq!(validate_minor_map(&g, &h.dual(), &mu, false), None);
    }

    #[test]
    fn two_vertex_pattern_splits_the_label() {
        let h = Hypergraph::from_edges([["a", "b"], ["b", "c"]]);
        let g = Hypergraph::from_edges([["p", "q"]]);
        let seq = DilutionSequence::new(vec![
            DilutionStep::MergeOn("b".into()),
            DilutionStep::DeleteVertex("c".into()),
        ]);
        let mu = minor_from_dilution(&h, &seq, &g).unwrap();
        assert_eq!(validate_minor_map(&g, &h.dual(), &mu, false), None);
    }
}
