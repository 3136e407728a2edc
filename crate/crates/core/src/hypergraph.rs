//! Immutable hypergraph values.
//!
//! A hypergraph is a vertex set together with a *set* of vertex subsets.
//! Edges carry no identity beyond their vertex set, so inserting the same
//! edge twice is a no-op. Isolated vertices and the empty edge are both
//! representable; [`reduce`] removes them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dilution::{DilutionSequence, DilutionStep};
use crate::error::{Error, Result};

pub type Vertex = String;
pub type Edge = BTreeSet<Vertex>;

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Hypergraph {
    vertices: BTreeSet<Vertex>,
    edges: BTreeSet<Edge>,
}

/// Renders an edge as `{a,b,c}`.
pub fn fmt_edge(edge: &Edge) -> String {
    let inner: Vec<&str> = edge.iter().map(String::as_str).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn edge<I, S>(vertices: I) -> Edge
where
    I: IntoIterator<Item = S>,
    S: Into<Vertex>,
{
    vertices.into_iter().map(Into::into).collect()
}

impl Hypergraph {
    /// Builds a hypergraph, checking that every edge vertex is declared.
    pub fn new(vertices: BTreeSet<Vertex>, edges: BTreeSet<Edge>) -> Result<Self> {
        for e in &edges {
            if let Some(v) = e.iter().find(|v| !vertices.contains(*v)) {
                return Err(Error::DanglingVertex(v.clone()));
            }
        }
        Ok(Hypergraph { vertices, edges })
    }

    /// Builds a hypergraph whose vertex set is exactly the union of `edges`.
    pub fn from_edges<I, E, S>(edges: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = S>,
        S: Into<Vertex>,
    {
        let edges: BTreeSet<Edge> = edges.into_iter().map(edge).collect();
        let vertices = edges.iter().flatten().cloned().collect();
        Hypergraph { vertices, edges }
    }

    pub(crate) fn from_parts_unchecked(vertices: BTreeSet<Vertex>, edges: BTreeSet<Edge>) -> Self {
        debug_assert!(edges.iter().flatten().all(|v| vertices.contains(v)));
        Hypergraph { vertices, edges }
    }

    pub fn with_vertex(mut self, v: impl Into<Vertex>) -> Self {
        self.vertices.insert(v.into());
        self
    }

    pub fn with_edge<I, S>(mut self, e: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Vertex>,
    {
        let e = edge(e);
        self.vertices.extend(e.iter().cloned());
        self.edges.insert(e);
        self
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    fn check_vertex(&self, v: &str) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    /// The edges incident to `v`.
    pub fn incidence(&self, v: &str) -> Result<BTreeSet<Edge>> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|e| e.contains(v)).cloned().collect())
    }

    pub fn degree(&self, v: &str) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|e| e.contains(v)).count())
    }

    /// Maximum vertex degree, 0 for a hypergraph without vertices.
    pub fn max_degree(&self) -> usize {
        self.degree_map().into_values().max().unwrap_or(0)
    }

    pub fn degree_map(&self) -> BTreeMap<Vertex, usize> {
        let mut deg: BTreeMap<Vertex, usize> =
            self.vertices.iter().map(|v| (v.clone(), 0)).collect();
        for e in &self.edges {
            for v in e {
                *deg.get_mut(v).expect("edge vertex declared") += 1;
            }
        }
        deg
    }

    /// Maximum edge size, 0 when there are no edges.
    pub fn rank(&self) -> usize {
        self.edges.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Vertex types: each vertex together with the edges containing it.
    pub fn vertex_types(&self) -> BTreeMap<Vertex, BTreeSet<Edge>> {
        let mut types: BTreeMap<Vertex, BTreeSet<Edge>> = self
            .vertices
            .iter()
            .map(|v| (v.clone(), BTreeSet::new()))
            .collect();
        for e in &self.edges {
            for v in e {
                types.get_mut(v).expect("edge vertex declared").insert(e.clone());
            }
        }
        types
    }

    /// Checks the three reduced-hypergraph conditions: no degree-0 vertex,
    /// no empty edge, no two vertices with the same vertex type.
    pub fn is_reduced(&self) -> bool {
        if self.edges.iter().any(BTreeSet::is_empty) {
            return false;
        }
        let types = self.vertex_types();
        let mut seen = BTreeSet::new();
        types.values().all(|t| !t.is_empty() && seen.insert(t.clone()))
    }

    /// Edges of the 2-section: `{x,y}` for every pair sharing an edge.
    pub fn primal_graph(&self) -> Hypergraph {
        let mut edges = BTreeSet::new();
        for e in &self.edges {
            let vs: Vec<&Vertex> = e.iter().collect();
            for (i, x) in vs.iter().enumerate() {
                for y in &vs[i + 1..] {
                    edges.insert(edge([(*x).clone(), (*y).clone()]));
                }
            }
        }
        Hypergraph {
            vertices: self.vertices.clone(),
            edges,
        }
    }

    /// Dual hypergraph. Dual vertices are named `e0, e1, ...` following the
    /// sorted edge order (zero padded so that name order equals index order);
    /// the returned vector maps each dual vertex index back to its edge.
    pub fn dual_with_edges(&self) -> (Hypergraph, Vec<Edge>) {
        let edges: Vec<Edge> = self.edges.iter().cloned().collect();
        let names = dual_names(edges.len());
        let mut incidence: BTreeMap<&Vertex, Edge> =
            self.vertices.iter().map(|v| (v, Edge::new())).collect();
        for (i, e) in edges.iter().enumerate() {
            for v in e {
                incidence.get_mut(v).expect("edge vertex declared").insert(names[i].clone());
            }
        }
        let dual = Hypergraph {
            vertices: names.into_iter().collect(),
            edges: incidence.into_values().collect(),
        };
        (dual, edges)
    }

    pub fn dual(&self) -> Hypergraph {
        self.dual_with_edges().0
    }

    /// Deletes `v` from the vertex set and every edge; edges that coincide
    /// afterwards collapse.
    pub fn delete_vertex(&self, v: &str) -> Result<Hypergraph> {
        self.check_vertex(v)?;
        let mut vertices = self.vertices.clone();
        vertices.remove(v);
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.remove(v);
                e
            })
            .collect();
        Ok(Hypergraph { vertices, edges })
    }

    /// Deletes `e`, which must be a proper subset of some other edge.
    pub fn delete_subedge(&self, e: &Edge) -> Result<Hypergraph> {
        if !self.edges.contains(e) {
            return Err(Error::UnknownEdge(fmt_edge(e)));
        }
        if !self.edges.iter().any(|f| e.len() < f.len() && e.is_subset(f)) {
            return Err(Error::NotProperSubedge(fmt_edge(e)));
        }
        let mut edges = self.edges.clone();
        edges.remove(e);
        Ok(Hypergraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    /// Replaces the edges incident to `v` by their union minus `v`, and drops
    /// `v` from the vertex set.
    pub fn merge_on(&self, v: &str) -> Result<Hypergraph> {
        self.check_vertex(v)?;
        let (incident, mut rest): (BTreeSet<Edge>, BTreeSet<Edge>) =
            self.edges.iter().cloned().partition(|e| e.contains(v));
        if incident.is_empty() {
            return Err(Error::NothingToMerge(v.to_string()));
        }
        let mut merged: Edge = incident.into_iter().flatten().collect();
        merged.remove(v);
        rest.insert(merged);
        let mut vertices = self.vertices.clone();
        vertices.remove(v);
        Ok(Hypergraph {
            vertices,
            edges: rest,
        })
    }

    /// Keeps only the vertices in `keep` (the induced subhypergraph, edges
    /// restricted and collapsed).
    pub fn restrict(&self, keep: &BTreeSet<Vertex>) -> Hypergraph {
        let vertices: BTreeSet<Vertex> = self.vertices.intersection(keep).cloned().collect();
        let edges = self
            .edges
            .iter()
            .map(|e| e.intersection(&vertices).cloned().collect())
            .collect();
        Hypergraph { vertices, edges }
    }

    /// Finds a path from `u` to `v` with the fewest edges; ties are broken
    /// towards lexicographically smaller vertices and edges.
    pub fn find_path(&self, u: &str, v: &str) -> Result<Option<Path>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SameEndpoints(u.to_string()));
        }
        Ok(self.shortest_path_within(u, v, |_| true, |_| true))
    }

    /// Breadth-first path search restricted to edges accepted by `edge_ok`
    /// and intermediate vertices accepted by `vertex_ok`.
    pub(crate) fn shortest_path_within(
        &self,
        u: &str,
        v: &str,
        edge_ok: impl Fn(&Edge) -> bool,
        vertex_ok: impl Fn(&str) -> bool,
    ) -> Option<Path> {
        let mut prev: BTreeMap<&str, (&str, &Edge)> = BTreeMap::new();
        let mut seen: BTreeSet<&str> = BTreeSet::from([u]);
        let mut used_edges: BTreeSet<&Edge> = BTreeSet::new();
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            if x != u && !vertex_ok(x) {
                continue;
            }
            for e in self.edges.iter().filter(|e| e.contains(x) && edge_ok(e)) {
                if used_edges.contains(e) {
                    continue;
                }
                used_edges.insert(e);
                for y in e {
                    if seen.insert(y.as_str()) {
                        prev.insert(y.as_str(), (x, e));
                        queue.push_back(y.as_str());
                    }
                }
            }
        }
        if !seen.contains(v) {
            return None;
        }
        let mut vertices = vec![v.to_string()];
        let mut edges = Vec::new();
        let mut cur = v;
        while cur != u {
            let (p, e) = prev[cur];
            edges.push(e.clone());
            vertices.push(p.to_string());
            cur = p;
        }
        vertices.reverse();
        edges.reverse();
        Some(Path { vertices, edges })
    }

    /// Connected components as vertex sets (isolated vertices are singleton
    /// components).
    pub fn components(&self) -> Vec<BTreeSet<Vertex>> {
        let mut uf = UnionFind::new(self.vertices.iter().cloned());
        for e in &self.edges {
            let mut it = e.iter();
            if let Some(first) = it.next() {
                for other in it {
                    uf.union(first, other);
                }
            }
        }
        uf.groups()
    }

    /// True when all vertices lie in one component. Empty edges do not
    /// affect connectivity; the hypergraph without vertices is connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Applies a vertex renaming. Vertices missing from `map` keep their name.
    pub fn rename(&self, map: &BTreeMap<Vertex, Vertex>) -> Hypergraph {
        let r = |v: &Vertex| map.get(v).cloned().unwrap_or_else(|| v.clone());
        Hypergraph {
            vertices: self.vertices.iter().map(r).collect(),
            edges: self.edges.iter().map(|e| e.iter().map(r).collect()).collect(),
        }
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let es: Vec<String> = self.edges.iter().map(fmt_edge).collect();
        write!(f, "({{{}}}, {{{}}})", vs.join(","), es.join(","))
    }
}

pub(crate) fn dual_names(count: usize) -> Vec<Vertex> {
    let width = count.saturating_sub(1).to_string().len();
    (0..count).map(|i| format!("e{i:0width$}")).collect()
}

/// Alternating vertex/edge sequence `(v0, e0, v1, ..., v_l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl Path {
    pub fn start(&self) -> &Vertex {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Vertex {
        self.vertices.last().expect("path has a vertex")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks the path conditions against `h`; returns a description of the
    /// first violation.
    pub fn validate(&self, h: &Hypergraph) -> std::result::Result<(), String> {
        if self.vertices.len() != self.edges.len() + 1 {
            return Err("vertex/edge alternation broken".into());
        }
        if self.vertices.len() < 2 {
            return Err("a path joins two distinct vertices".into());
        }
        let mut vs = BTreeSet::new();
        for v in &self.vertices {
            if !h.contains_vertex(v) {
                return Err(format!("unknown vertex `{v}`"));
            }
            if !vs.insert(v) {
                return Err(format!("vertex `{v}` repeats"));
            }
        }
        let mut es = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !h.contains_edge(e) {
                return Err(format!("{} is not an edge", fmt_edge(e)));
            }
            if !es.insert(e) {
                return Err(format!("edge {} repeats", fmt_edge(e)));
            }
            if !e.contains(&self.vertices[i]) || !e.contains(&self.vertices[i + 1]) {
                return Err(format!(
                    "{} does not contain both `{}` and `{}`",
                    fmt_edge(e),
                    self.vertices[i],
                    self.vertices[i + 1]
                ));
            }
        }
        Ok(())
    }
}

/// Computes a reduced hypergraph together with a dilution sequence reaching it.
///
/// Among vertices sharing a vertex type the lexicographically smallest name
/// survives. Degree-0 vertices are deleted, then the empty edge (if any) is
/// deleted as a subedge. A hypergraph whose only edge is empty keeps it,
/// because no dilution step can remove it.
pub fn reduce(h: &Hypergraph) -> (Hypergraph, DilutionSequence) {
    let mut steps = Vec::new();
    let mut seen_types = BTreeSet::new();
    for (v, t) in h.vertex_types() {
        if t.is_empty() || !seen_types.insert(t) {
            steps.push(DilutionStep::DeleteVertex(v));
        }
    }
    let doomed: BTreeSet<&Vertex> = steps
        .iter()
        .filter_map(|s| match s {
            DilutionStep::DeleteVertex(v) => Some(v),
            _ => None,
        })
        .collect();
    let mut vertices = h.vertices.clone();
    vertices.retain(|v| !doomed.contains(v));
    let mut result = h.restrict(&vertices);
    let empty = Edge::new();
    if result.edges.contains(&empty) && result.edges.len() > 1 {
        steps.push(DilutionStep::DeleteSubedge(empty.clone()));
        result.edges.remove(&empty);
    }
    let seq = DilutionSequence::from_source(h, steps);
    (result, seq)
}

pub(crate) struct UnionFind {
    index: BTreeMap<Vertex, usize>,
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(items: impl IntoIterator<Item = Vertex>) -> Self {
        let index: BTreeMap<Vertex, usize> =
            items.into_iter().enumerate().map(|(i, v)| (v, i)).collect();
        let parent = (0..index.len()).collect();
        UnionFind { index, parent }
    }

    fn find_idx(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub(crate) fn find(&mut self, a: &str) -> usize {
        let i = self.index[a];
        self.find_idx(i)
    }

    pub(crate) fn union(&mut self, a: &str, b: &str) {
        let (ia, ib) = (self.index[a], self.index[b]);
        let (ra, rb) = (self.find_idx(ia), self.find_idx(ib));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn groups(&mut self) -> Vec<BTreeSet<Vertex>> {
        let mut groups: BTreeMap<usize, BTreeSet<Vertex>> = BTreeMap::new();
        let entries: Vec<(Vertex, usize)> =
            self.index.iter().map(|(v, &i)| (v.clone(), i)).collect();
        for (v, i) in entries {
            let r = self.find_idx(i);
            groups.entry(r).or_default().insert(v);
        }
        groups.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(edges: &[&[&str]]) -> Hypergraph {
        Hypergraph::from_edges(edges.iter().map(|e| e.iter().copied()))
    }

    #[test]
    fn dual_of_single_edge_collapses() {
        let h = hg(&[&["a", "b"]]);
        let d = h.dual();
        assert_eq!(d.num_vertices(), 1);
        assert_eq!(d.edges().iter().collect::<Vec<_>>(), vec![&edge(["e0"])]);
    }

    #[test]
    fn dual_maps_isolated_vertex_to_empty_edge_and_empty_edge_to_isolated_vertex() {
        let h = hg(&[&[], &["a"]]).with_vertex("z");
        let (d, edges) = h.dual_with_edges();
        assert_eq!(edges[0], Edge::new());
        assert!(d.contains_edge(&Edge::new()));
        assert_eq!(d.degree("e0").unwrap(), 0);
    }

    #[test]
    fn reduce_removes_isolated_vertex() {
        let h = hg(&[&["a", "b"]]).with_vertex("x");
        let (r, seq) = reduce(&h);
        // a and b share a vertex type, so b goes too
        assert_eq!(r, hg(&[&["a"]]));
        assert!(seq.steps.contains(&DilutionStep::DeleteVertex("x".into())));
    }

    #[test]
    fn reduce_deletes_empty_edge_as_subedge() {
        let h = hg(&[&["a", "b"], &["b", "c"], &[]]);
        let (r, seq) = reduce(&h);
        assert_eq!(r, hg(&[&["a", "b"], &["b", "c"]]));
        assert_eq!(seq.steps, vec![DilutionStep::DeleteSubedge(Edge::new())]);
    }

    #[test]
    fn reduce_single_edge_keeps_smallest_vertex() {
        let h = hg(&[&["a", "b", "c"]]);
        let (r, _) = reduce(&h);
        assert_eq!(r, hg(&[&["a"]]));
        assert!(r.is_reduced());
    }

    #[test]
    fn reduce_keeps_lonely_empty_edge() {
        let h = Hypergraph::default().with_edge(Vec::<&str>::new());
        let (r, seq) = reduce(&h);
        assert_eq!(r, h);
        assert!(seq.steps.is_empty());
    }

    #[test]
    fn primal_of_triple_is_triangle() {
        let p = hg(&[&["a", "b", "c"]]).primal_graph();
        assert_eq!(p, hg(&[&["a", "b"], &["b", "c"], &["a", "c"]]));
        let empty = Hypergraph::default().with_vertex("a").primal_graph();
        assert_eq!(empty.num_edges(), 0);
    }

    #[test]
    fn degree_and_rank() {
        let h = hg(&[&["a", "b"], &["b", "c", "d"]]).with_vertex("z");
        assert_eq!(h.degree("b").unwrap(), 2);
        assert_eq!(h.degree("z").unwrap(), 0);
        assert_eq!(h.rank(), 3);
        assert!(matches!(h.degree("q"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn path_through_chain() {
        let h = hg(&[&["a", "b"], &["b", "c"]]);
        let p = h.find_path("a", "c").unwrap().unwrap();
        assert_eq!(p.vertices, vec!["a", "b", "c"]);
        assert_eq!(p.edges, vec![edge(["a", "b"]), edge(["b", "c"])]);
        assert!(p.validate(&h).is_ok());
    }

    #[test]
    fn no_path_between_components() {
        let h = hg(&[&["a", "b"], &["c", "d"]]);
        assert_eq!(h.find_path("a", "c").unwrap(), None);
        assert!(!h.is_connected());
        assert!(matches!(h.find_path("a", "a"), Err(Error::SameEndpoints(_))));
    }

    #[test]
    fn new_rejects_dangling_vertices() {
        let err = Hypergraph::new(BTreeSet::new(), BTreeSet::from([edge(["a"])])).unwrap_err();
        assert_eq!(err, Error::DanglingVertex("a".into()));
    }
}
