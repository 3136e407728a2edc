//! Conjunctive queries over named relations, evaluated without projection:
//! every variable is an output variable.

mod core;
mod reduction;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, Vertex};

pub use self::core::{compute_core, find_homomorphism, semantic_ghw, DEFAULT_CORE_LIMIT};
pub use self::reduction::{database_size, reduce_along_dilution, Reduction, StepSize, FRESH_PREFIX};

pub type Variable = String;
pub type Constant = String;
pub type Assignment = BTreeMap<Variable, Constant>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub relation: String,
    pub args: Vec<Variable>,
}

impl Atom {
    pub fn new<I, S>(relation: impl Into<String>, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Variable>,
    {
        Atom {
            relation: relation.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn variables(&self) -> Edge {
        self.args.iter().cloned().collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.relation, self.args.join(","))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjunctiveQuery {
    pub atoms: Vec<Atom>,
}

impl ConjunctiveQuery {
    pub fn new(atoms: Vec<Atom>) -> Self {
        ConjunctiveQuery { atoms }
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.atoms.iter().flat_map(|a| a.args.iter().cloned()).collect()
    }

    /// Relation symbols with their arity; errors on inconsistent use.
    pub fn schema(&self) -> Result<BTreeMap<String, usize>> {
        let mut out: BTreeMap<String, usize> = BTreeMap::new();
        for a in &self.atoms {
            match out.get(&a.relation) {
                Some(&k) if k != a.args.len() => {
                    return Err(Error::ArityMismatch {
                        relation: a.relation.clone(),
                        expected: k,
                        found: a.args.len(),
                    })
                }
                _ => {
                    out.insert(a.relation.clone(), a.args.len());
                }
            }
        }
        Ok(out)
    }

    pub fn is_self_join_free(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.atoms.iter().all(|a| seen.insert(&a.relation))
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(Atom::to_string).collect();
        write!(f, "{}", parts.join(" ∧ "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Constant>>,
}

impl Relation {
    pub fn new(arity: usize) -> Self {
        Relation {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    pub fn from_tuples<I, T, S>(arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: Into<Constant>,
    {
        let mut r = Relation::new(arity);
        for t in tuples {
            let t: Vec<Constant> = t.into_iter().map(Into::into).collect();
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    relation: String::new(),
                    expected: arity,
                    found: t.len(),
                });
            }
            r.tuples.insert(t);
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Database {
    pub relations: BTreeMap<String, Relation>,
}

impl Database {
    /// Adds a fact, creating the relation on first use.
    pub fn insert<I, S>(&mut self, relation: &str, tuple: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: Into<Constant>,
    {
        let t: Vec<Constant> = tuple.into_iter().map(Into::into).collect();
        let r = self
            .relations
            .entry(relation.to_string())
            .or_insert_with(|| Relation::new(t.len()));
        if r.arity != t.len() {
            return Err(Error::ArityMismatch {
                relation: relation.to_string(),
                expected: r.arity,
                found: t.len(),
            });
        }
        r.tuples.insert(t);
        Ok(())
    }

    pub fn active_domain(&self) -> BTreeSet<Constant> {
        self.relations
            .values()
            .flat_map(|r| r.tuples.iter().flatten().cloned())
            .collect()
    }

    fn relation_for(&self, atom: &Atom) -> Result<&Relation> {
        let r = self
            .relations
            .get(&atom.relation)
            .ok_or_else(|| Error::UnknownRelation(atom.relation.clone()))?;
        if r.arity != atom.args.len() {
            return Err(Error::ArityMismatch {
                relation: atom.relation.clone(),
                expected: r.arity,
                found: atom.args.len(),
            });
        }
        Ok(r)
    }
}

/// One edge per atom's variable set.
pub fn hypergraph_of(q: &ConjunctiveQuery) -> Hypergraph {
    Hypergraph::from_edges(q.atoms.iter().map(|a| a.args.iter().cloned()))
}

/// All solutions, by a left-to-right backtracking join.
pub fn evaluate(q: &ConjunctiveQuery, db: &Database) -> Result<BTreeSet<Assignment>> {
    q.schema()?;
    let rels: Vec<&Relation> = q.atoms.iter().map(|a| db.relation_for(a)).collect::<Result<_>>()?;
    let mut out = BTreeSet::new();
    let mut cur = Assignment::new();
    join(&q.atoms, &rels, 0, &mut cur, &mut out);
    Ok(out)
}

fn join(atoms: &[Atom], rels: &[&Relation], i: usize, cur: &mut Assignment, out: &mut BTreeSet<Assignment>) {
    if i == atoms.len() {
        out.insert(cur.clone());
        return;
    }
    let atom = &atoms[i];
    'tuples: for t in &rels[i].tuples {
        let mut bound = Vec::new();
        for (x, c) in atom.args.iter().zip(t) {
            match cur.get(x) {
                Some(old) if old != c => {
                    for b in &bound {
                        cur.remove(b);
                    }
                    continue 'tuples;
                }
                Some(_) => {}
                None => {
                    cur.insert(x.clone(), c.clone());
                    bound.push(x.clone());
                }
            }
        }
        join(atoms, rels, i + 1, cur, out);
        for b in &bound {
            cur.remove(b);
        }
    }
}

pub fn count(q: &ConjunctiveQuery, db: &Database) -> Result<usize> {
    Ok(evaluate(q, db)?.len())
}

/// Gives every repeated relation symbol a fresh name per occurrence
/// (`R_1`, `R_2`, ...) backed by a copy of the relation.
pub fn eliminate_self_joins(q: &ConjunctiveQuery, db: &Database) -> Result<(ConjunctiveQuery, Database)> {
    q.schema()?;
    let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
    for a in &q.atoms {
        *uses.entry(&a.relation).or_default() += 1;
    }
    let mut taken: BTreeSet<String> = db.relations.keys().cloned().collect();
    taken.extend(q.atoms.iter().map(|a| a.relation.clone()));
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    let mut out_db = db.clone();
    let mut atoms = Vec::with_capacity(q.atoms.len());
    for a in &q.atoms {
        if uses[a.relation.as_str()] == 1 {
            atoms.push(a.clone());
            continue;
        }
        let rel = db.relation_for(a)?.clone();
        let k = seen.entry(&a.relation).or_default();
        *k += 1;
        let mut name = format!("{}_{}", a.relation, k);
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        out_db.relations.insert(name.clone(), rel);
        atoms.push(Atom {
            relation: name,
            args: a.args.clone(),
        });
    }
    Ok((ConjunctiveQuery { atoms }, out_db))
}

/// One atom `R{i}` per edge (in edge order), arguments in vertex order.
pub fn query_from_hypergraph(h: &Hypergraph) -> ConjunctiveQuery {
    ConjunctiveQuery {
        atoms: h
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| Atom::new(format!("R{i}"), e.iter().cloned()))
            .collect(),
    }
}

/// Projects assignments onto `vars`, renaming through `rename`.
pub fn project(solutions: &BTreeSet<Assignment>, rename: &BTreeMap<Variable, Vertex>) -> BTreeSet<Assignment> {
    solutions
        .iter()
        .map(|s| rename.iter().map(|(x, v)| (x.clone(), s[v].clone())).collect())
        .collect()
}

/// Evaluation by trying every assignment over the active domain. Only for
/// tiny inputs; serves as a reference for [`evaluate`].
pub fn evaluate_naive(q: &ConjunctiveQuery, db: &Database) -> BTreeSet<Assignment> {
    let vars: Vec<Variable> = q.variables().into_iter().collect();
    let dom: Vec<Constant> = db.active_domain().into_iter().collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; vars.len()];
    if !vars.is_empty() && dom.is_empty() {
        return out;
    }
    loop {
        let a: Assignment = vars.iter().cloned().zip(idx.iter().map(|&i| dom[i].clone())).collect();
        let ok = q.atoms.iter().all(|at| {
            let t: Vec<Constant> = at.args.iter().map(|x| a[x].clone()).collect();
            db.relations.get(&at.relation).is_some_and(|r| r.tuples.contains(&t))
        });
        if ok {
            out.insert(a);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < dom.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
