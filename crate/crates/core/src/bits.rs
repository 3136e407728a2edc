//! Compact bitmask form of a hypergraph with at most 64 vertices, used by the
//! exhaustive searches.


use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, Vertex};
use crate::iso::{certificate_of, Certificate, Incidence};

pub(crate) const MAX_VERTICES: usize = 64;

/// Vertex names plus a state: present vertices and the edge set as masks.
#[derive(Debug, Clone)]
pub(crate) struct Names {
    pub(crate) names: Vec<Vertex>,
}

impl Names {
    pub(crate) fn mask_of(&self, e: &Edge) -> u64 {
        e.iter()
            .map(|v| 1u64 << self.names.binary_search(v).expect("known vertex"))
            .fold(0, |a, b| a | b)
    }

    pub(crate) fn edge_of(&self, mask: u64) -> Edge {
        ones(mask).map(|i| self.names[i].clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct State {
    pub(crate) present: u64,
    /// Sorted, deduplicated.
    pub(crate) edges: Vec<u64>,
}

pub(crate) fn encode(h: &Hypergraph, what: &'static str) -> Result<(Names, State)> {
    if h.num_vertices() > MAX_VERTICES {
        return Err(Error::LimitExceeded {
            what,
            limit: MAX_VERTICES,
            actual: h.num_vertices(),
        });
    }
    let names = Names {
        names: h.vertices().iter().cloned().collect(),
    };
    let present = if h.num_vertices() == 64 {
        u64::MAX
    } else {
        (1u64 << h.num_vertices()) - 1
    };
    let mut edges: Vec<u64> = h.edges().iter().map(|e| names.mask_of(e)).collect();
    edges.sort_unstable();
    Ok((names, State { present, edges }))
}

pub(crate) fn ones(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl State {
    pub(crate) fn num_vertices(&self) -> usize {
        self.present.count_ones() as usize
    }

    pub(crate) fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&e| e >> v & 1 == 1).count()
    }

    fn normalized(present: u64, mut edges: Vec<u64>) -> State {
        edges.sort_unstable();
        edges.dedup();
        State { present, edges }
    }

    pub(crate) fn delete_vertex(&self, v: usize) -> State {
        let bit = 1u64 << v;
        State::normalized(self.present & !bit, self.edges.iter().map(|e| e & !bit).collect())
    }

    /// `None` unless `e` is a proper subset of another edge.
    pub(crate) fn delete_subedge(&self, e: u64) -> Option<State> {
        if !self.edges.iter().any(|&f| f != e && f & e == e) {
            return None;
        }
        let edges = self.edges.iter().copied().filter(|&f| f != e).collect();
        Some(State {
            present: self.present,
            edges,
        })
    }

    /// `None` for degree-0 vertices.
    pub(crate) fn merge_on(&self, v: usize) -> Option<State> {
        let bit = 1u64 << v;
        let (inc, mut rest): (Vec<u64>, Vec<u64>) = self.edges.iter().partition(|&&e| e & bit != 0);
        if inc.is_empty() {
            return None;
        }
        rest.push(inc.iter().fold(0, |a, b| a | b) & !bit);
        Some(State::normalized(self.present & !bit, rest))
    }

    pub(crate) fn incidence(&self) -> Incidence {
        Incidence::from_masks(MAX_VERTICES, self.present, &self.edges)
    }

    pub(crate) fn certificate(&self, budget: u64) -> Result<Certificate> {
        certificate_of(&self.incidence(), budget)
    }

    /// Number of present vertices with degree at least `d`, for every `d`.
    pub(crate) fn degree_profile(&self) -> Vec<usize> {
        let mut degs: Vec<usize> = ones(self.present).map(|v| self.degree(v)).collect();
        degs.sort_unstable_by(|a, b| b.cmp(a));
        let top = degs.first().copied().unwrap_or(0);
        (0..=top).map(|d| degs.iter().filter(|&&x| x >= d).count()).collect()
    }

    #[cfg(test)]
    pub(crate) fn decode(&self, names: &Names) -> Hypergraph {
        let vertices: std::collections::BTreeSet<Vertex> = ones(self.present).map(|i| names.names[i].clone()).collect();
        let edges: std::collections::BTreeSet<Edge> = self.edges.iter().map(|&e| names.edge_of(e)).collect();
        Hypergraph::from_parts_unchecked(vertices, edges)
    }
}
