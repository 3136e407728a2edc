//! Reduction of a query along a dilution sequence: a query over the diluted
//! hypergraph is turned into an equivalent query over the source hypergraph
//! with the same number of solutions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{hypergraph_of, Atom, ConjunctiveQuery, Constant, Database, Relation, Variable};
use crate::dilution::{trace_sequence, DilutionSequence, DilutionStep};
use crate::error::{Error, Result};
use crate::hypergraph::{fmt_edge, Edge, Hypergraph, Vertex};
use crate::iso::{isomorphic, DEFAULT_ISO_BUDGET};

/// Constants starting with this prefix are reserved for the reduction.
pub const FRESH_PREFIX: &str = "_fresh_";

fn fresh(k: usize) -> Constant {
    format!("{FRESH_PREFIX}{k}")
}

/// Database size: sum over relations of `|R| * max(1, arity)`.
pub fn database_size(db: &Database) -> usize {
    db.relations.values().map(|r| r.tuples.len() * r.arity.max(1)).sum()
}

/// Size of the intermediate database before and after undoing one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSize {
    pub step: usize,
    pub before: usize,
    pub after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub query: ConjunctiveQuery,
    pub database: Database,
    /// Variable of the input query to the vertex of the source hypergraph
    /// (and variable of the output query) it became.
    pub rename: BTreeMap<Variable, Vertex>,
    /// One entry per step, in the order the steps are undone.
    pub sizes: Vec<StepSize>,
}

/// Table over the sorted vertices of one edge.
type Table = BTreeSet<Vec<Constant>>;

/// Columns of `rows` (over `from`, sorted) rearranged to `to` (sorted); every
/// vertex of `to` must be in `from`.
fn project(rows: &Table, from: &Edge, to: &Edge) -> Table {
    let idx: Vec<usize> = to
        .iter()
        .map(|v| from.iter().position(|w| w == v).expect("projection target inside source"))
        .collect();
    rows.iter().map(|t| idx.iter().map(|&i| t[i].clone()).collect()).collect()
}

/// Adds column `v` to rows over `from`, filling it from `value(row index)`.
fn extend(rows: &Table, from: &Edge, v: &Vertex, value: impl Fn(usize) -> Constant) -> Table {
    let pos = from.iter().filter(|w| *w < v).count();
    rows.iter()
        .enumerate()
        .map(|(i, t)| {
            let mut t = t.clone();
            t.insert(pos, value(i));
            t
        })
        .collect()
}

fn tables_size(tables: &BTreeMap<Edge, Table>) -> usize {
    tables.iter().map(|(e, t)| t.len() * e.len().max(1)).sum()
}

/// Normal form of `q` over `db`: one table per distinct variable set, the
/// intersection of all atoms over that set (repeated variables within an
/// atom filter and collapse).
fn normalize(q: &ConjunctiveQuery, db: &Database) -> Result<BTreeMap<Edge, Table>> {
    q.schema()?;
    let mut tables: BTreeMap<Edge, Table> = BTreeMap::new();
    for a in &q.atoms {
        let rel = db.relation_for(a)?;
        let vars: Edge = a.variables();
        let mut rows = Table::new();
        'rows: for t in &rel.tuples {
            let mut val: BTreeMap<&Variable, &Constant> = BTreeMap::new();
            for (x, c) in a.args.iter().zip(t) {
                if val.insert(x, c).is_some_and(|old| old != c) {
                    continue 'rows;
                }
            }
            rows.insert(vars.iter().map(|x| val[x].clone()).collect());
        }
        match tables.get_mut(&vars) {
            Some(old) => old.retain(|t| rows.contains(t)),
            None => {
                tables.insert(vars, rows);
            }
        }
    }
    Ok(tables)
}

/// Rewrites `(q, db)` along `seq`, applied to `h`, into a query whose
/// hypergraph is `h`.
///
/// `hypergraph_of(q)` must be isomorphic to the end of the sequence, and `h`
/// must have no isolated vertices. Steps are undone in reverse:
/// a deleted vertex gets the constant `_fresh_0` in every edge it belonged
/// to; a merged edge is split by tagging each tuple with its own fresh
/// constant and projecting onto the original edges; a deleted subedge gets
/// the projection of its smallest superedge.
pub fn reduce_along_dilution(
    q: &ConjunctiveQuery,
    db: &Database,
    h: &Hypergraph,
    seq: &DilutionSequence,
) -> Result<Reduction> {
    if let Some(c) = db.active_domain().into_iter().find(|c| c.starts_with(FRESH_PREFIX)) {
        return Err(Error::ReservedConstant(c));
    }
    if let Some(v) = h.vertices().iter().find(|v| h.degree(v).unwrap_or(0) == 0) {
        return Err(Error::Precondition(format!("source hypergraph has isolated vertex `{v}`")));
    }
    let trace = trace_sequence(h, seq)?;
    let end = trace.last().expect("trace starts with h");
    let witness = isomorphic(&hypergraph_of(q), end, DEFAULT_ISO_BUDGET)?.ok_or_else(|| {
        Error::Precondition("query hypergraph is not isomorphic to the end of the sequence".into())
    })?;
    let rename = witness.vertex_map.clone();

    let mut tables: BTreeMap<Edge, Table> = BTreeMap::new();
    for (vars, rows) in normalize(q, db)? {
        let e = witness.map_edge(&vars);
        // columns follow the sorted renamed vertices
        let order: Vec<usize> = {
            let renamed: Vec<&Vertex> = vars.iter().map(|x| &rename[x]).collect();
            e.iter().map(|v| renamed.iter().position(|w| *w == v).expect("renamed")).collect()
        };
        tables.insert(e, rows.iter().map(|t| order.iter().map(|&i| t[i].clone()).collect()).collect());
    }
    debug_assert!(tables.keys().eq(end.edges().iter()));

    let mut sizes = Vec::with_capacity(seq.len());
    for i in (0..seq.len()).rev() {
        let before_h = &trace[i];
        let before = tables_size(&tables);
        let mut next: BTreeMap<Edge, Table> = BTreeMap::new();
        match &seq.steps[i] {
            DilutionStep::DeleteVertex(v) => {
                for f in before_h.edges() {
                    let mut g = f.clone();
                    let had = g.remove(v);
                    let rows = &tables[&g];
                    let t = if had { extend(rows, &g, v, |_| fresh(0)) } else { rows.clone() };
                    next.insert(f.clone(), t);
                }
            }
            DilutionStep::MergeOn(v) => {
                let inc: Vec<&Edge> = before_h.edges().iter().filter(|e| e.contains(v)).collect();
                let mut ev: Edge = inc.iter().flat_map(|e| e.iter().cloned()).collect();
                ev.remove(v);
                let tagged = extend(&tables[&ev], &ev, v, fresh);
                let mut wide = ev.clone();
                wide.insert(v.clone());
                for f in before_h.edges() {
                    let t = if f.contains(v) { project(&tagged, &wide, f) } else { tables[f].clone() };
                    next.insert(f.clone(), t);
                }
            }
            DilutionStep::DeleteSubedge(e) => {
                let sup = before_h
                    .edges()
                    .iter()
                    .find(|f| f.len() > e.len() && e.is_subset(f))
                    .ok_or_else(|| Error::NotProperSubedge(fmt_edge(e)))?;
                for f in before_h.edges() {
                    let t = if f == e { project(&tables[sup], sup, e) } else { tables[f].clone() };
                    next.insert(f.clone(), t);
                }
            }
        }
        tables = next;
        sizes.push(StepSize {
            step: i,
            before,
            after: tables_size(&tables),
        });
    }

    let mut atoms = Vec::with_capacity(tables.len());
    let mut out = Database::default();
    for (k, (e, rows)) in tables.into_iter().enumerate() {
        let name = format!("P{k}");
        atoms.push(Atom::new(name.clone(), e.iter().cloned()));
        out.relations.insert(
            name,
            Relation {
                arity: e.len(),
                tuples: rows,
            },
        );
    }
    Ok(Reduction {
        query: ConjunctiveQuery { atoms },
        database: out,
        rename,
        sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cq::{count, evaluate, project as project_solutions};
    use crate::generators::jigsaw;

    fn c4_query() -> (ConjunctiveQuery, Database) {
        let q = ConjunctiveQuery::new(vec![
            Atom::new("A", ["w", "x"]),
            Atom::new("B", ["x", "y"]),
            Atom::new("C", ["y", "z"]),
            Atom::new("D", ["z", "w"]),
        ]);
        let mut db = Database::default();
        for r in ["A", "B", "C", "D"] {
            for (a, b) in [("1", "2"), ("2", "1"), ("1", "1"), ("2", "3")] {
                db.insert(r, [a, b]).unwrap();
            }
        }
        (q, db)
    }

    fn check(q: &ConjunctiveQuery, db: &Database, h: &Hypergraph, seq: &DilutionSequence) -> Reduction {
        let red = reduce_along_dilution(q, db, h, seq).unwrap();
        assert!(isomorphic(&hypergraph_of(&red.query), h, DEFAULT_ISO_BUDGET).unwrap().is_some());
        let sols = evaluate(&red.query, &red.database).unwrap();
        assert_eq!(project_solutions(&sols, &red.rename), evaluate(q, db).unwrap());
        assert_eq!(sols.len(), count(q, db).unwrap());
        red
    }

    #[test]
    fn empty_sequence_keeps_the_query() {
        let (q, db) = c4_query();
        let red = check(&q, &db, &jigsaw(2, 2).unwrap(), &DilutionSequence::default());
        assert_eq!(red.query.atoms.len(), 4);
        assert!(red.sizes.is_empty());
    }

    #[test]
    fn undoing_a_merge_on_a_subdivided_cycle() {
        let (q, db) = c4_query();
        let h = Hypergraph::from_edges([["a", "b"], ["b", "c"], ["c", "d"], ["d", "s"], ["s", "a"]]);
        let seq = DilutionSequence::new(vec![DilutionStep::MergeOn("s".into())]);
        let red = check(&q, &db, &h, &seq);
        assert_eq!(red.query.atoms.len(), 5);
    }

    #[test]
    fn undoing_vertex_and_subedge_deletions() {
        let q = ConjunctiveQuery::new(vec![Atom::new("R", ["x", "y"])]);
        let mut db = Database::default();
        db.insert("R", ["1", "2"]).unwrap();
        db.insert("R", ["2", "2"]).unwrap();
        let h = Hypergraph::from_edges([vec!["a", "b", "c"], vec!["a", "b"], vec!["b", "c"]]);
        let seq = DilutionSequence::new(vec![
            DilutionStep::DeleteSubedge(crate::hypergraph::edge(["b", "c"])),
            DilutionStep::DeleteVertex("c".into()),
        ]);
        check(&q, &db, &h, &seq);
    }

    #[test]
    fn reserved_constants_are_rejected() {
        let q = ConjunctiveQuery::new(vec![Atom::new("R", ["x"])]);
        let mut db = Database::default();
        db.insert("R", ["_fresh_3"]).unwrap();
        let h = Hypergraph::from_edges([["a"]]);
        let err = reduce_along_dilution(&q, &db, &h, &DilutionSequence::default()).unwrap_err();
        assert_eq!(err, Error::ReservedConstant("_fresh_3".into()));
    }

    #[test]
    fn self_joins_and_repeated_variables_are_normalized() {
        let q = ConjunctiveQuery::new(vec![
            Atom::new("R", ["x", "y"]),
            Atom::new("R", ["y", "x"]),
            Atom::new("S", ["x", "x"]),
        ]);
        let mut db = Database::default();
        for (a, b) in [("1", "2"), ("2", "1"), ("1", "1"), ("3", "1")] {
            db.insert("R", [a, b]).unwrap();
            db.insert("S", [a, b]).unwrap();
        }
        let h = Hypergraph::from_edges([vec!["a", "b"], vec!["a"]]);
        check(&q, &db, &h, &DilutionSequence::default());
    }
}
