//! Dilution steps and sequences: application, verification, bounded
//! exhaustive search and edge-label tracking.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{self, ones, State};
use crate::error::{Error, Result};
use crate::hypergraph::{fmt_edge, Edge, Hypergraph, UnionFind, Vertex};
use crate::iso::{isomorphic, IsoWitness, DEFAULT_ISO_BUDGET};

/// Default number of expanded states for [`search_dilution`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "op", content = "arg", rename_all = "snake_case")]
pub enum DilutionStep {
    DeleteVertex(Vertex),
    DeleteSubedge(Edge),
    MergeOn(Vertex),
}

impl DilutionStep {
    pub fn apply(&self, h: &Hypergraph) -> Result<Hypergraph> {
        match self {
            DilutionStep::DeleteVertex(v) => h.delete_vertex(v),
            DilutionStep::DeleteSubedge(e) => h.delete_subedge(e),
            DilutionStep::MergeOn(v) => h.merge_on(v),
        }
    }
}

impl fmt::Display for DilutionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DilutionStep::DeleteVertex(v) => write!(f, "delete vertex {v}"),
            DilutionStep::DeleteSubedge(e) => write!(f, "delete subedge {}", fmt_edge(e)),
            DilutionStep::MergeOn(v) => write!(f, "merge on {v}"),
        }
    }
}

/// Vertex and edge counts of the hypergraph a sequence was made for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub vertices: usize,
    pub edges: usize,
}

impl Fingerprint {
    pub fn of(h: &Hypergraph) -> Self {
        Fingerprint {
            vertices: h.num_vertices(),
            edges: h.num_edges(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilutionSequence {
    pub source: Option<Fingerprint>,
    pub steps: Vec<DilutionStep>,
}

impl DilutionSequence {
    pub fn new(steps: Vec<DilutionStep>) -> Self {
        DilutionSequence { source: None, steps }
    }

    pub fn from_source(h: &Hypergraph, steps: Vec<DilutionStep>) -> Self {
        DilutionSequence {
            source: Some(Fingerprint::of(h)),
            steps,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends the steps of `other`, keeping this sequence's fingerprint.
    pub fn then(mut self, other: DilutionSequence) -> Self {
        self.steps.extend(other.steps);
        self
    }

    fn check_source(&self, h: &Hypergraph) -> Result<()> {
        match self.source {
            Some(fp) if fp != Fingerprint::of(h) => Err(Error::FingerprintMismatch {
                expected_vertices: fp.vertices,
                expected_edges: fp.edges,
                vertices: h.num_vertices(),
                edges: h.num_edges(),
            }),
            _ => Ok(()),
        }
    }
}

/// Applies all steps in order; the first failing step is reported with its
/// index.
pub fn apply_sequence(h: &Hypergraph, seq: &DilutionSequence) -> Result<Hypergraph> {
    seq.check_source(h)?;
    let mut cur = h.clone();
    for (i, step) in seq.steps.iter().enumerate() {
        cur = step.apply(&cur).map_err(|e| Error::at_step(i, e))?;
    }
    Ok(cur)
}

/// Every intermediate hypergraph, starting with `h` itself.
pub fn trace_sequence(h: &Hypergraph, seq: &DilutionSequence) -> Result<Vec<Hypergraph>> {
    seq.check_source(h)?;
    let mut out = vec![h.clone()];
    for (i, step) in seq.steps.iter().enumerate() {
        let next = step.apply(out.last().expect("non-empty")).map_err(|e| Error::at_step(i, e))?;
        out.push(next);
    }
    Ok(out)
}

/// Applies `seq` to `src` and tests the result for isomorphism with
/// `target`. An invalid step is an error; `Ok(None)` means the sequence is
/// valid but lands on a non-isomorphic hypergraph.
pub fn verify_dilution(
    src: &Hypergraph,
    seq: &DilutionSequence,
    target: &Hypergraph,
) -> Result<Option<IsoWitness>> {
    let result = apply_sequence(src, seq)?;
    isomorphic(&result, target, DEFAULT_ISO_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A sequence whose result is isomorphic to the target.
    Found(DilutionSequence),
    /// The whole reachable state space was explored.
    Absent,
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&DilutionSequence> {
        match self {
            SearchOutcome::Found(s) => Some(s),
            SearchOutcome::Absent => None,
        }
    }
}

/// Depth-first search for a dilution sequence from `src` to a hypergraph
/// isomorphic to `target`.
///
/// States are deduplicated by canonical certificate. Children are generated
/// in a fixed order (vertex deletions, subedge deletions, merges, each in
/// name order), so the result is deterministic. `budget` caps the number of
/// expanded states.
pub fn search_dilution(src: &Hypergraph, target: &Hypergraph, budget: u64) -> Result<SearchOutcome> {
    let (names, start) = bits::encode(src, "dilution search")?;
    let (_, goal) = bits::encode(target, "dilution search")?;
    let goal_nv = goal.num_vertices();
    let goal_ne = goal.edges.len();
    let goal_profile = goal.degree_profile();
    let goal_cert = goal.certificate(DEFAULT_ISO_BUDGET)?;

    let viable = |s: &State| -> bool {
        if s.num_vertices() < goal_nv || s.edges.len() < goal_ne {
            return false;
        }
        let p = s.degree_profile();
        goal_profile
            .iter()
            .enumerate()
            .all(|(d, &need)| p.get(d).copied().unwrap_or(0) >= need)
    };

    let mut visited: HashSet<crate::iso::Certificate> = HashSet::new();
    // each entry: state and the steps leading to it
    let mut stack: Vec<(State, Vec<DilutionStep>)> = vec![(start, Vec::new())];
    let mut expanded = 0u64;
    while let Some((state, path)) = stack.pop() {
        if !viable(&state) {
            continue;
        }
        let cert = state.certificate(DEFAULT_ISO_BUDGET)?;
        if !visited.insert(cert.clone()) {
            continue;
        }
        if state.num_vertices() == goal_nv && state.edges.len() == goal_ne {
            if cert == goal_cert {
                let seq = DilutionSequence::from_source(src, path);
                debug_assert!(verify_dilution(src, &seq, target).map(|w| w.is_some()).unwrap_or(false));
                return Ok(SearchOutcome::Found(seq));
            }
            continue;
        }
        expanded += 1;
        if expanded > budget {
            return Err(Error::BudgetExceeded {
                what: "dilution search",
                budget,
            });
        }
        let mut children = Vec::new();
        for v in ones(state.present) {
            children.push((state.delete_vertex(v), DilutionStep::DeleteVertex(names.names[v].clone())));
        }
        for &e in &state.edges {
            if let Some(next) = state.delete_subedge(e) {
                children.push((next, DilutionStep::DeleteSubedge(names.edge_of(e))));
            }
        }
        for v in ones(state.present) {
            if let Some(next) = state.merge_on(v) {
                children.push((next, DilutionStep::MergeOn(names.names[v].clone())));
            }
        }
        // reversed so that the first generated child is explored first
        for (next, step) in children.into_iter().rev() {
            let mut p = path.clone();
            p.push(step);
            stack.push((next, p));
        }
    }
    Ok(SearchOutcome::Absent)
}

/// For every current edge, the set of original edges it stems from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLabeling {
    pub labels: BTreeMap<Edge, BTreeSet<Edge>>,
}

impl EdgeLabeling {
    pub fn identity(h: &Hypergraph) -> Self {
        EdgeLabeling {
            labels: h
                .edges()
                .iter()
                .map(|e| (e.clone(), BTreeSet::from([e.clone()])))
                .collect(),
        }
    }

    pub fn label(&self, e: &Edge) -> Option<&BTreeSet<Edge>> {
        self.labels.get(e)
    }

    pub fn pairwise_disjoint(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.labels.values().flatten().all(|e| seen.insert(e))
    }
}

/// True when the edges in `set` form a connected subgraph of the
/// intersection graph (two edges adjacent iff they share a vertex).
pub fn edges_connected(set: &BTreeSet<Edge>) -> bool {
    if set.len() <= 1 {
        return true;
    }
    let ids: Vec<String> = (0..set.len()).map(|i| i.to_string()).collect();
    let mut uf = UnionFind::new(ids.iter().cloned());
    let list: Vec<&Edge> = set.iter().collect();
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            if !list[i].is_disjoint(list[j]) {
                uf.union(&ids[i], &ids[j]);
            }
        }
    }
    uf.groups().len() == 1
}

/// Follows `seq` on `src`, tracking for every edge which original edges it
/// absorbed.
///
/// Vertex deletion unions the labels of edges that collapse, subedge
/// deletion moves the label onto the first superedge whose combined label
/// stays connected (and drops it if there is none), and a merge unions the
/// labels of all incident edges. Labels thus stay disjoint but need not
/// cover every original edge.
pub fn track_labels(src: &Hypergraph, seq: &DilutionSequence) -> Result<EdgeLabeling> {
    seq.check_source(src)?;
    let mut h = src.clone();
    let mut lab = EdgeLabeling::identity(src);
    for (i, step) in seq.steps.iter().enumerate() {
        let next = step.apply(&h).map_err(|e| Error::at_step(i, e))?;
        let mut labels: BTreeMap<Edge, BTreeSet<Edge>> = BTreeMap::new();
        match step {
            DilutionStep::DeleteVertex(v) => {
                for (e, l) in &lab.labels {
                    let mut e2 = e.clone();
                    e2.remove(v);
                    labels.entry(e2).or_default().extend(l.iter().cloned());
                }
            }
            DilutionStep::DeleteSubedge(e1) => {
                let gone = lab.labels[e1].clone();
                let supers: Vec<&Edge> = h
                    .edges()
                    .iter()
                    .filter(|f| f.len() > e1.len() && e1.is_subset(f))
                    .collect();
                let pick = supers.iter().find(|f| {
                    let mut u = lab.labels[**f].clone();
                    u.extend(gone.iter().cloned());
                    edges_connected(&u)
                });
                for (e, l) in &lab.labels {
                    if e == e1 {
                        continue;
                    }
                    let mut l = l.clone();
                    if pick.is_some_and(|p| e == *p) {
                        l.extend(gone.iter().cloned());
                    }
                    labels.insert(e.clone(), l);
                }
            }
            DilutionStep::MergeOn(v) => {
                let mut merged = Edge::new();
                let mut label = BTreeSet::new();
                for (e, l) in &lab.labels {
                    if e.contains(v) {
                        merged.extend(e.iter().cloned());
                        label.extend(l.iter().cloned());
                    } else {
                        labels.insert(e.clone(), l.clone());
                    }
                }
                merged.remove(v);
                labels.entry(merged).or_default().extend(label);
            }
        }
        debug_assert!(labels.keys().eq(next.edges().iter()));
        lab = EdgeLabeling { labels };
        h = next;
    }
    Ok(lab)
}
