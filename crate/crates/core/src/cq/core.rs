//! Cores of conjunctive queries. All variables are treated as existential.

use std::collections::{BTreeMap, BTreeSet};

use super::{hypergraph_of, Atom, ConjunctiveQuery, Variable};
use crate::decomposition::{exact_ghw, GHDecomposition, WidthReport, DEFAULT_GHW_LIMIT};
use crate::error::{Error, Result};

/// Largest number of variables [`compute_core`] accepts by default.
pub const DEFAULT_CORE_LIMIT: usize = 8;

/// A homomorphism from `from` into `to`: a map on variables sending every
/// atom of `from` to an atom of `to`.
pub fn find_homomorphism(from: &ConjunctiveQuery, to: &ConjunctiveQuery) -> Option<BTreeMap<Variable, Variable>> {
    let mut by_rel: BTreeMap<(&str, usize), Vec<&Atom>> = BTreeMap::new();
    for a in &to.atoms {
        by_rel.entry((a.relation.as_str(), a.args.len())).or_default().push(a);
    }
    // most constrained atoms first
    let mut order: Vec<&Atom> = from.atoms.iter().collect();
    order.sort_by_key(|a| by_rel.get(&(a.relation.as_str(), a.args.len())).map_or(0, Vec::len));
    let mut map = BTreeMap::new();
    extend(&order, &by_rel, &mut map).then_some(map)
}

fn extend(
    rest: &[&Atom],
    by_rel: &BTreeMap<(&str, usize), Vec<&Atom>>,
    map: &mut BTreeMap<Variable, Variable>,
) -> bool {
    let Some((a, rest)) = rest.split_first() else {
        return true;
    };
    let Some(cands) = by_rel.get(&(a.relation.as_str(), a.args.len())) else {
        return false;
    };
    for b in cands {
        let mut added = Vec::new();
        let mut ok = true;
        for (x, y) in a.args.iter().zip(&b.args) {
            match map.get(x) {
                Some(z) if z != y => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    map.insert(x.clone(), y.clone());
                    added.push(x.clone());
                }
            }
        }
        if ok && extend(rest, by_rel, map) {
            return true;
        }
        for x in added {
            map.remove(&x);
        }
    }
    false
}

fn dedup(q: &ConjunctiveQuery) -> ConjunctiveQuery {
    let atoms: BTreeSet<Atom> = q.atoms.iter().cloned().collect();
    ConjunctiveQuery::new(atoms.into_iter().collect())
}

/// The core of `q`: a minimal subquery it maps homomorphically onto.
///
/// Fails with `LimitExceeded` when `q` has more than `limit` variables.
pub fn compute_core(q: &ConjunctiveQuery, limit: usize) -> Result<ConjunctiveQuery> {
    q.schema()?;
    let n = q.variables().len();
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "query variables",
            limit,
            actual: n,
        });
    }
    let mut cur = dedup(q);
    'shrink: loop {
        for i in 0..cur.atoms.len() {
            let mut sub = cur.clone();
            sub.atoms.remove(i);
            if let Some(h) = find_homomorphism(&cur, &sub) {
                let image: BTreeSet<Atom> = cur
                    .atoms
                    .iter()
                    .map(|a| Atom::new(a.relation.clone(), a.args.iter().map(|x| h[x].clone())))
                    .collect();
                cur = ConjunctiveQuery::new(image.into_iter().collect());
                continue 'shrink;
            }
        }
        return Ok(cur);
    }
}

/// Generalized hypertree width of the core of `q`.
pub fn semantic_ghw(q: &ConjunctiveQuery, limit: usize) -> Result<(ConjunctiveQuery, WidthReport, GHDecomposition)> {
    let core = compute_core(q, limit)?;
    let (report, ghd) = exact_ghw(&hypergraph_of(&core), DEFAULT_GHW_LIMIT)?;
    Ok((core, report, ghd))
}
