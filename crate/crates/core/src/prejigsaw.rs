//! Expressive minors and pre-jigsaws: jigsaws whose edges are replaced by
//! groups of edges joined by internal paths.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dilution::{apply_sequence, DilutionSequence, DilutionStep};
use crate::error::{Error, Result};
use crate::generators::JigsawLayout;
use crate::hypergraph::{fmt_edge, reduce, Edge, Hypergraph, Path, UnionFind, Vertex};
use crate::minors::{validate_minor_map, MinorMap};

/// Edge assignment of an expressive minor: pattern edge to host edge.
pub type EdgeAssignment = BTreeMap<Edge, Edge>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreJigsawWitness {
    pub n: usize,
    pub m: usize,
    /// Jigsaw vertex to host vertex.
    pub pi: BTreeMap<Vertex, Vertex>,
    /// Jigsaw edge (by layout name) to a group of host edges.
    pub o: BTreeMap<Vertex, BTreeSet<Edge>>,
    /// One path per pair of jigsaw vertices sharing an edge, keyed by the
    /// ordered pair.
    #[serde(with = "pair_list")]
    pub paths: BTreeMap<(Vertex, Vertex), Path>,
}

/// Maps with tuple keys serialize as lists of entries.
mod pair_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::hypergraph::{Path, Vertex};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        from: Vertex,
        to: Vertex,
        path: Path,
    }

    pub fn serialize<S: Serializer>(map: &BTreeMap<(Vertex, Vertex), Path>, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = map
            .iter()
            .map(|((from, to), path)| Entry {
                from: from.clone(),
                to: to.clone(),
                path: path.clone(),
            })
            .collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(Vertex, Vertex), Path>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        Ok(entries.into_iter().map(|e| ((e.from, e.to), e.path)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreJigsawViolation {
    PiDomain,
    PiUnknownVertex(Vertex),
    NonInjectivePi(Vertex),
    ODomain,
    OUnknownEdge(String),
    Overlap(String),
    Uncovered(String),
    MissingPath(Vertex, Vertex),
    BadPath { pair: (Vertex, Vertex), reason: String },
    UncoveredVertex(Vertex),
}

impl fmt::Display for PreJigsawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreJigsawViolation::PiDomain => write!(f, "vertex map does not cover exactly the jigsaw vertices"),
            PreJigsawViolation::PiUnknownVertex(v) => write!(f, "vertex map targets unknown vertex `{v}`"),
            PreJigsawViolation::NonInjectivePi(v) => write!(f, "vertex map hits `{v}` twice"),
            PreJigsawViolation::ODomain => write!(f, "edge map does not cover exactly the jigsaw edges"),
            PreJigsawViolation::OUnknownEdge(e) => write!(f, "edge map uses {e} which is not an edge"),
            PreJigsawViolation::Overlap(e) => write!(f, "edge {e} is assigned to two jigsaw edges"),
            PreJigsawViolation::Uncovered(e) => write!(f, "edge {e} is assigned to no jigsaw edge"),
            PreJigsawViolation::MissingPath(a, b) => write!(f, "no fixed path for `{a}`, `{b}`"),
            PreJigsawViolation::BadPath { pair, reason } => {
                write!(f, "path for `{}`, `{}`: {reason}", pair.0, pair.1)
            }
            PreJigsawViolation::UncoveredVertex(v) => {
                write!(f, "vertex `{v}` is neither an image nor on a fixed path")
            }
        }
    }
}

/// Checks the expressive minor conditions for `mu` (a minor map of the graph
/// `g` onto `h`) and the edge assignment `rho`. Paths between assigned edges
/// are searched in the intersection graph of `h`'s edges, avoiding every
/// other assigned edge.
pub fn validate_expressive_minor(
    g: &Hypergraph,
    h: &Hypergraph,
    mu: &MinorMap,
    rho: &EdgeAssignment,
) -> std::result::Result<(), String> {
    if let Some(bad) = validate_minor_map(g, h, mu, true) {
        return Err(format!("minor map: {bad}"));
    }
    let pattern: Vec<&Edge> = g.edges().iter().filter(|e| e.len() == 2).collect();
    if rho.len() != pattern.len() || !pattern.iter().all(|e| rho.contains_key(*e)) {
        return Err("edge assignment must cover exactly the pattern edges".into());
    }
    let mut images = BTreeSet::new();
    for (e, f) in rho {
        if !h.contains_edge(f) {
            return Err(format!("{} is not a host edge", fmt_edge(f)));
        }
        if !images.insert(f) {
            return Err(format!("{} is assigned twice", fmt_edge(f)));
        }
        for u in e {
            if f.is_disjoint(&mu.map[u]) {
                return Err(format!("{} does not meet the image of `{u}`", fmt_edge(f)));
            }
        }
    }
    for (i, e1) in pattern.iter().enumerate() {
        for e2 in &pattern[i + 1..] {
            if e1.is_disjoint(e2) {
                continue;
            }
            let (a, b) = (&rho[*e1], &rho[*e2]);
            if !edge_path_avoiding(h, a, b, &images) {
                return Err(format!(
                    "every path from {} to {} passes a marked edge",
                    fmt_edge(a),
                    fmt_edge(b)
                ));
            }
        }
    }
    Ok(())
}

/// Breadth-first search over intersecting edges from `a` to `b` whose
/// intermediate edges avoid `marked`.
fn edge_path_avoiding(h: &Hypergraph, a: &Edge, b: &Edge, marked: &BTreeSet<&Edge>) -> bool {
    let mut seen = BTreeSet::from([a]);
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        for y in h.edges() {
            if seen.contains(y) || x.is_disjoint(y) {
                continue;
            }
            if y == b {
                return true;
            }
            if !marked.contains(y) {
                seen.insert(y);
                queue.push_back(y);
            }
        }
    }
    false
}

/// Checks all pre-jigsaw conditions of `w` against `h`, including
/// injectivity of the vertex map and the coverage clause.
pub fn validate_prejigsaw(h: &Hypergraph, w: &PreJigsawWitness) -> std::result::Result<(), PreJigsawViolation> {
    let layout = JigsawLayout::new(w.n, w.m).map_err(|_| PreJigsawViolation::ODomain)?;
    let jigsaw = layout.hypergraph();
    if !w.pi.keys().eq(jigsaw.vertices().iter()) {
        return Err(PreJigsawViolation::PiDomain);
    }
    let mut hit = BTreeSet::new();
    for x in w.pi.values() {
        if !h.contains_vertex(x) {
            return Err(PreJigsawViolation::PiUnknownVertex(x.clone()));
        }
        if !hit.insert(x) {
            return Err(PreJigsawViolation::NonInjectivePi(x.clone()));
        }
    }
    if !w.o.keys().eq(layout.edges.keys()) {
        return Err(PreJigsawViolation::ODomain);
    }
    let mut owner: BTreeMap<&Edge, &Vertex> = BTreeMap::new();
    for (name, group) in &w.o {
        for f in group {
            if !h.contains_edge(f) {
                return Err(PreJigsawViolation::OUnknownEdge(fmt_edge(f)));
            }
            if owner.insert(f, name).is_some() {
                return Err(PreJigsawViolation::Overlap(fmt_edge(f)));
            }
        }
    }
    if let Some(f) = h.edges().iter().find(|f| !owner.contains_key(f)) {
        return Err(PreJigsawViolation::Uncovered(fmt_edge(f)));
    }
    let mut on_paths: BTreeSet<&Vertex> = BTreeSet::new();
    for (u, v, name) in layout.pairs() {
        let pair = (u.clone(), v.clone());
        let p = w
            .paths
            .get(&pair)
            .ok_or_else(|| PreJigsawViolation::MissingPath(u.clone(), v.clone()))?;
        let bad = |reason: String| PreJigsawViolation::BadPath {
            pair: pair.clone(),
            reason,
        };
        p.validate(h).map_err(bad)?;
        if p.start() != &w.pi[&u] || p.end() != &w.pi[&v] {
            return Err(bad("endpoints are not the images of the pair".into()));
        }
        if let Some(f) = p.edges.iter().find(|f| !w.o[&name].contains(*f)) {
            return Err(bad(format!("uses {} outside its edge group", fmt_edge(f))));
        }
        let inner = &p.vertices[1..p.vertices.len() - 1];
        if let Some(x) = inner.iter().find(|x| hit.contains(x)) {
            return Err(bad(format!("passes through image vertex `{x}`")));
        }
        on_paths.extend(p.vertices.iter());
    }
    if let Some(x) = h.vertices().iter().find(|x| !hit.contains(x) && !on_paths.contains(x)) {
        return Err(PreJigsawViolation::UncoveredVertex(x.clone()));
    }
    Ok(())
}

/// Jigsaw vertex name for the grid edge `{a, b}` (grid vertex names).
fn jigsaw_vertex_of(e: &Edge) -> Result<Vertex> {
    let parse = |v: &Vertex| -> Option<(usize, usize)> {
        let (i, j) = v.strip_prefix('v')?.split_once('_')?;
        Some((i.parse().ok()?, j.parse().ok()?))
    };
    let mut it = e.iter();
    let (a, b) = match (it.next().and_then(parse), it.next().and_then(parse)) {
        (Some(a), Some(b)) => (a.min(b), a.max(b)),
        _ => return Err(Error::Precondition(format!("{} is not a grid edge", fmt_edge(e)))),
    };
    if a.0 == b.0 && b.1 == a.1 + 1 {
        Ok(format!("h{}_{}", a.0, a.1))
    } else if a.1 == b.1 && b.0 == a.0 + 1 {
        Ok(format!("d{}_{}", a.0, a.1))
    } else {
        Err(Error::Precondition(format!("{} is not a grid edge", fmt_edge(e))))
    }
}

/// Builds a pre-jigsaw from an expressive minor of `grid(n, m)` into the dual
/// of the reduced form of `h` (dual vertices named as by
/// [`Hypergraph::dual_with_edges`]).
///
/// The maps are dualised: a pattern edge's assigned dual edge is a vertex of
/// the reduced hypergraph, and a branch set is a group of its edges. For each
/// pair of jigsaw vertices sharing an edge, a shortest path through that
/// edge's group avoiding other image vertices is fixed. Every vertex outside
/// the images and the paths is then deleted, followed by the empty edge.
pub fn prejigsaw_from_expressive_minor(
    h: &Hypergraph,
    n: usize,
    m: usize,
    mu: &MinorMap,
    rho: &EdgeAssignment,
) -> Result<(DilutionSequence, PreJigsawWitness)> {
    let g = crate::generators::grid(n, m);
    let layout = JigsawLayout::new(n, m)?;
    let (r, reduction) = reduce(h);
    let (f, dual_edges) = r.dual_with_edges();
    validate_expressive_minor(&g, &f, mu, rho).map_err(Error::InvalidWitness)?;
    let dual_names: Vec<&Vertex> = f.vertices().iter().collect();
    let edge_of = |x: &Vertex| dual_edges[dual_names.binary_search(&x).expect("dual vertex")].clone();
    // a dual edge is the type of exactly one vertex of the reduced hypergraph
    let by_type: BTreeMap<Edge, Vertex> = r
        .vertex_types()
        .into_iter()
        .map(|(v, t)| {
            let names: Edge = t
                .iter()
                .map(|e| dual_names[dual_edges.binary_search(e).expect("edge")].clone())
                .collect();
            (names, v)
        })
        .collect();
    let mut pi = BTreeMap::new();
    for (e, d) in rho {
        pi.insert(jigsaw_vertex_of(e)?, by_type[d].clone());
    }
    let mut o: BTreeMap<Vertex, BTreeSet<Edge>> = BTreeMap::new();
    for name in layout.edges.keys() {
        o.insert(name.clone(), mu.map[name].iter().map(edge_of).collect());
    }
    let images: BTreeSet<&Vertex> = pi.values().collect();
    let mut paths = BTreeMap::new();
    let mut keep: BTreeSet<Vertex> = images.iter().map(|v| (*v).clone()).collect();
    for (u, v, name) in layout.pairs() {
        let group = &o[&name];
        let p = r
            .shortest_path_within(&pi[&u], &pi[&v], |e| group.contains(e), |x| !images.contains(&x.to_string()))
            .ok_or_else(|| {
                Error::Construction(format!("no path inside the group of `{name}` joins `{u}` and `{v}`"))
            })?;
        keep.extend(p.vertices.iter().cloned());
        paths.insert((u, v), p);
    }
    let mut steps: Vec<DilutionStep> = r
        .vertices()
        .iter()
        .filter(|x| !keep.contains(*x))
        .map(|x| DilutionStep::DeleteVertex(x.clone()))
        .collect();
    let restricted = r.restrict(&keep);
    if restricted.contains_edge(&Edge::new()) && restricted.num_edges() > 1 {
        steps.push(DilutionStep::DeleteSubedge(Edge::new()));
    }
    let seq = reduction.then(DilutionSequence::new(steps));
    let p = apply_sequence(h, &seq)?;
    let o2 = o
        .into_iter()
        .map(|(name, group)| {
            let g2: BTreeSet<Edge> = group
                .iter()
                .map(|f| f.intersection(&keep).cloned().collect::<Edge>())
                .filter(|f| !f.is_empty())
                .collect();
            (name, g2)
        })
        .collect();
    let paths = paths
        .into_iter()
        .map(|(pair, mut path)| {
            for f in path.edges.iter_mut() {
                *f = f.intersection(&keep).cloned().collect();
            }
            (pair, path)
        })
        .collect();
    let witness = PreJigsawWitness { n, m, pi, o: o2, paths };
    validate_prejigsaw(&p, &witness).map_err(|v| Error::Construction(v.to_string()))?;
    Ok((seq, witness))
}

/// Collapses a degree-2 pre-jigsaw onto its jigsaw: every edge group is fused
/// by merging along a spanning forest of its internal vertices, then all
/// non-image vertices and the empty edge are deleted.
pub fn prejigsaw_to_jigsaw(h: &Hypergraph, w: &PreJigsawWitness) -> Result<DilutionSequence> {
    let d = h.max_degree();
    if d > 2 {
        return Err(Error::DegreeTooLarge { degree: d, allowed: 2 });
    }
    validate_prejigsaw(h, w).map_err(|v| Error::InvalidWitness(v.to_string()))?;
    let images: BTreeSet<&Vertex> = w.pi.values().collect();
    let types = h.vertex_types();
    let mut steps = Vec::new();
    for group in w.o.values() {
        let list: Vec<&Edge> = group.iter().collect();
        let ids: Vec<String> = (0..list.len()).map(|i| i.to_string()).collect();
        let mut uf = UnionFind::new(ids.iter().cloned());
        for (x, t) in &types {
            if images.contains(x) || t.len() != 2 || !t.iter().all(|e| group.contains(e)) {
                continue;
            }
            let mut it = t.iter().map(|e| list.iter().position(|f| *f == e).expect("member"));
            let (p, q) = (it.next().unwrap(), it.next().unwrap());
            if uf.find(&ids[p]) != uf.find(&ids[q]) {
                uf.union(&ids[p], &ids[q]);
                steps.push(DilutionStep::MergeOn(x.clone()));
            }
        }
    }
    let mut seq = DilutionSequence::from_source(h, steps);
    let merged = apply_sequence(h, &seq)?;
    for x in merged.vertices() {
        if !images.contains(x) {
            seq.steps.push(DilutionStep::DeleteVertex(x.clone()));
        }
    }
    let cleaned = apply_sequence(h, &seq)?;
    if cleaned.contains_edge(&Edge::new()) && cleaned.num_edges() > 1 {
        seq.steps.push(DilutionStep::DeleteSubedge(Edge::new()));
    }
    Ok(seq)
}

/// The trivial witness of a jigsaw as its own pre-jigsaw.
pub fn trivial_witness(n: usize, m: usize) -> Result<PreJigsawWitness> {
    let layout = JigsawLayout::new(n, m)?;
    let h = layout.hypergraph();
    let pi = h.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
    let o = layout
        .edges
        .iter()
        .map(|(name, e)| (name.clone(), BTreeSet::from([e.clone()])))
        .collect();
    let paths = layout
        .pairs()
        .into_iter()
        .map(|(u, v, name)| {
            let p = Path {
                vertices: vec![u.clone(), v.clone()],
                edges: vec![layout.edges[&name].clone()],
            };
            ((u, v), p)
        })
        .collect();
    Ok(PreJigsawWitness { n, m, pi, o, paths })
}

/// Expressive minor of `grid(n, m)` into the dual of `jigsaw(n, m)`: each
/// grid vertex maps to its own jigsaw edge, each grid edge to the type of
/// its jigsaw vertex.
pub fn trivial_expressive_minor(n: usize, m: usize) -> Result<(MinorMap, EdgeAssignment)> {
    let layout = JigsawLayout::new(n, m)?;
    let j = layout.hypergraph();
    let (dual, edges) = j.dual_with_edges();
    let names: Vec<&Vertex> = dual.vertices().iter().collect();
    let name_of = |e: &Edge| names[edges.binary_search(e).expect("edge")].clone();
    let mu = MinorMap {
        map: layout
            .edges
            .iter()
            .map(|(g, e)| (g.clone(), BTreeSet::from([name_of(e)])))
            .collect(),
    };
    let mut rho = EdgeAssignment::new();
    for ge in crate::generators::grid(n, m).edges() {
        let x = jigsaw_vertex_of(ge)?;
        let t: Edge = j.edges().iter().filter(|e| e.contains(&x)).map(&name_of).collect();
        rho.insert(ge.clone(), t);
    }
    Ok((mu, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilution::verify_dilution;
    use crate::generators::{grid, jigsaw, subdivided_jigsaw};

    #[test]
    fn jigsaws_are_prejigsaws() {
        for (n, m) in [(2, 2), (2, 3), (3, 3), (1, 3)] {
            let w = trivial_witness(n, m).unwrap();
            assert_eq!(validate_prejigsaw(&jigsaw(n, m).unwrap(), &w), Ok(()));
        }
    }

    #[test]
    fn trivial_witness_collapses_with_no_steps() {
        let w = trivial_witness(3, 3).unwrap();
        assert!(prejigsaw_to_jigsaw(&jigsaw(3, 3).unwrap(), &w).unwrap().is_empty());
    }

    #[test]
    fn overlapping_groups_are_rejected() {
        let h = jigsaw(2, 2).unwrap();
        let mut w = trivial_witness(2, 2).unwrap();
        let first = w.o.values().next().unwrap().clone();
        w.o.values_mut().nth(1).unwrap().extend(first);
        assert!(matches!(validate_prejigsaw(&h, &w), Err(PreJigsawViolation::Overlap(_))));
    }

    #[test]
    fn uncovered_vertex_is_rejected() {
        let h = jigsaw(2, 2).unwrap();
        let w = trivial_witness(2, 2).unwrap();
        let bigger = {
            let e = h.edges().iter().next().unwrap().clone();
            let mut grown = e.clone();
            grown.insert("extra".into());
            let mut edges = h.edges().clone();
            edges.remove(&e);
            edges.insert(grown.clone());
            let mut w2 = w.clone();
            for g in w2.o.values_mut() {
                if g.remove(&e) {
                    g.insert(grown.clone());
                }
            }
            for p in w2.paths.values_mut() {
                for f in p.edges.iter_mut() {
                    if *f == e {
                        *f = grown.clone();
                    }
                }
            }
            (Hypergraph::new(h.vertices().iter().cloned().chain(["extra".to_string()]).collect(), edges).unwrap(), w2)
        };
        assert_eq!(
            validate_prejigsaw(&bigger.0, &bigger.1),
            Err(PreJigsawViolation::UncoveredVertex("extra".into()))
        );
    }

    #[test]
    fn non_injective_pi_is_reported_separately() {
        let h = jigsaw(2, 2).unwrap();
        let mut w = trivial_witness(2, 2).unwrap();
        let target = w.pi.values().next().unwrap().clone();
        *w.pi.values_mut().nth(1).unwrap() = target;
        assert!(matches!(validate_prejigsaw(&h, &w), Err(PreJigsawViolation::NonInjectivePi(_))));
    }

    #[test]
    fn subdivided_jigsaw_collapses_back() {
        for k in 0..=2 {
            let (h, w) = subdivided_jigsaw(2, 2, k).unwrap();
            assert_eq!(validate_prejigsaw(&h, &w), Ok(()));
            let seq = prejigsaw_to_jigsaw(&h, &w).unwrap();
            assert!(verify_dilution(&h, &seq, &jigsaw(2, 2).unwrap()).unwrap().is_some());
            if k == 1 {
                assert_eq!(seq.len(), 4);
            }
        }
    }

    #[test]
    fn degree_three_is_rejected() {
        let h = Hypergraph::from_edges([vec!["a", "b"], vec!["a", "c"], vec!["a", "d"]]);
        let w = trivial_witness(2, 2).unwrap();
        assert!(matches!(prejigsaw_to_jigsaw(&h, &w), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn rank_two_minors_are_expressive() {
        let g = grid(2, 2);
        let mu = MinorMap {
            map: g.vertices().iter().map(|v| (v.clone(), BTreeSet::from([v.clone()]))).collect(),
        };
        let rho: EdgeAssignment = g.edges().iter().map(|e| (e.clone(), e.clone())).collect();
        assert_eq!(validate_expressive_minor(&g, &g, &mu, &rho), Ok(()));
        let mut bad = rho.clone();
        let first = bad.values().next().unwrap().clone();
        *bad.values_mut().nth(1).unwrap() = first;
        assert!(validate_expressive_minor(&g, &g, &mu, &bad).is_err());
    }

    #[test]
    fn marked_edge_blocks_the_only_path() {
        // star hub edges: the pattern edges meet only through a marked edge
        let g = Hypergraph::from_edges([["a", "b"], ["b", "c"]]);
        let h = Hypergraph::from_edges([["x", "y"], ["y", "z"], ["z", "w"], ["w", "u"], ["u", "t"]]);
        let img = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        let mu = MinorMap {
            map: [
                ("a".to_string(), img(&["x", "y"])),
                ("b".to_string(), img(&["z", "w"])),
                ("c".to_string(), img(&["u", "t"])),
            ]
            .into(),
        };
        let e = |a: &str, b: &str| crate::hypergraph::edge([a, b]);
        let good: EdgeAssignment = [(e("a", "b"), e("y", "z")), (e("b", "c"), e("w", "u"))].into();
        assert_eq!(validate_expressive_minor(&g, &h, &mu, &good), Ok(()));
        let mut marked = good.clone();
        // forcing a path through {z,w} after marking it via a third pattern edge
        let g3 = g.clone().with_edge(["a", "c"]);
        marked.insert(e("a", "c"), e("z", "w"));
        assert!(validate_expressive_minor(&g3, &h, &mu, &marked).is_err());
    }

    #[test]
    fn extraction_from_the_trivial_expressive_minor() {
        let h = jigsaw(3, 3).unwrap();
        let (mu, rho) = trivial_expressive_minor(3, 3).unwrap();
        let (seq, w) = prejigsaw_from_expressive_minor(&h, 3, 3, &mu, &rho).unwrap();
        assert!(seq.is_empty());
        assert_eq!(w, trivial_witness(3, 3).unwrap());
    }

    #[test]
    fn extraction_from_a_subdivided_degree_three_host() {
        // subdivided 2x2 jigsaw plus a pendant edge raising one degree to 3
        let (base, _) = subdivided_jigsaw(2, 2, 1).unwrap();
        let hub = base.vertices().iter().find(|v| v.starts_with("s_")).unwrap().clone();
        let h = base.clone().with_edge([hub.as_str(), "p1", "p2"]).with_edge(["p1", "p3"]);
        assert_eq!(h.max_degree(), 3);
        let (r, _) = reduce(&h);
        let f = r.dual();
        let g = grid(2, 2);
        let mu = crate::minors::find_minor(&g, &f, 14, 1_000_000).unwrap().unwrap();
        let (dual, edges) = r.dual_with_edges();
        let _ = dual;
        // assign each grid edge the dual edge of a vertex shared by the two groups
        let names: Vec<String> = f.vertices().iter().cloned().collect();
        let edge_of = |x: &String| edges[names.binary_search(x).unwrap()].clone();
        let mut rho = EdgeAssignment::new();
        for ge in g.edges() {
            let mut it = ge.iter();
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            let ga: Vec<Edge> = mu.map[a].iter().map(edge_of).collect();
            let gb: Vec<Edge> = mu.map[b].iter().map(edge_of).collect();
            let x = r
                .vertices()
                .iter()
                .find(|x| ga.iter().any(|e| e.contains(*x)) && gb.iter().any(|e| e.contains(*x)))
                .unwrap();
            let t: Edge = r
                .edges()
                .iter()
                .filter(|e| e.contains(x))
                .map(|e| names[edges.binary_search(e).unwrap()].clone())
                .collect();
            rho.insert(ge.clone(), t);
        }
        let (seq, w) = prejigsaw_from_expressive_minor(&h, 2, 2, &mu, &rho).unwrap();
        let p = apply_sequence(&h, &seq).unwrap();
        assert_eq!(validate_prejigsaw(&p, &w), Ok(()));
    }
}
