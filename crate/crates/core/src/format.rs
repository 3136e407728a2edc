//! Line-oriented text formats. Every printer emits text its parser reads back
//! to an equal value. `%` starts a comment that runs to the end of the line.
//!
//! Edges inside witness and decomposition files are written as vertex sets,
//! `(a,b,c)`, optionally prefixed by a name that is ignored on input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::cq::{Atom, ConjunctiveQuery, Database, Variable};
use crate::decomposition::{GHDecomposition, Node, TreeDecomposition};
use crate::dilution::{DilutionSequence, DilutionStep, Fingerprint};
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, Path, Vertex};
use crate::minors::MinorMap;
use crate::prejigsaw::{EdgeAssignment, PreJigsawWitness};

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn name(line: usize, s: &str) -> Result<String> {
    if is_name(s) {
        Ok(s.to_string())
    } else {
        Err(Error::parse(line, format!("bad name `{s}`")))
    }
}

/// Lines with comments stripped, skipping blank ones, with 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('%').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Splits on whitespace outside parentheses.
fn tokens(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = None;
    for (i, c) in line.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c.is_whitespace() && depth == 0 {
            if let Some(s) = start.take() {
                out.push(&line[s..i]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(&line[s..]);
    }
    out
}

/// `name(a,b,...)` into its head and arguments. The head may be empty.
fn atom(line: usize, s: &str) -> Result<(String, Vec<String>)> {
    let open = s.find('(').ok_or_else(|| Error::parse(line, format!("expected `(` in `{s}`")))?;
    let inner = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::parse(line, format!("expected `)` at the end of `{s}`")))?;
    let head = s[..open].trim();
    if !head.is_empty() {
        name(line, head)?;
    }
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|a| name(line, a.trim())).collect::<Result<_>>()?
    };
    Ok((head.to_string(), args))
}

fn edge_token(line: usize, s: &str) -> Result<Edge> {
    Ok(atom(line, s)?.1.into_iter().collect())
}

fn fmt_set(e: &Edge) -> String {
    let v: Vec<&str> = e.iter().map(String::as_str).collect();
    format!("({})", v.join(","))
}

// ---------------------------------------------------------------- hypergraph

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for (ln, l) in lines(text) {
        let (head, args) = atom(ln, l.trim_end_matches(['.', ',']))?;
        if head.is_empty() {
            return Err(Error::parse(ln, "edge needs a name"));
        }
        if head == "vertex" {
            if args.len() != 1 {
                return Err(Error::parse(ln, "`vertex` takes exactly one name"));
            }
            vertices.extend(args);
        } else {
            vertices.extend(args.iter().cloned());
            edges.insert(args.into_iter().collect::<Edge>());
        }
    }
    Hypergraph::new(vertices, edges)
}

pub fn print_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    let width = h.num_edges().saturating_sub(1).to_string().len();
    for (i, e) in h.edges().iter().enumerate() {
        let _ = writeln!(out, "e{i:0width$}{}", fmt_set(e));
    }
    let covered: BTreeSet<&Vertex> = h.edges().iter().flatten().collect();
    for v in h.vertices() {
        // `vertex` would clash with an edge name only by coincidence; it is a
        // directive wherever it appears
        if !covered.contains(v) {
            let _ = writeln!(out, "vertex({v})");
        }
    }
    out
}

// ----------------------------------------------------------------- sequences

pub fn parse_sequence(text: &str) -> Result<DilutionSequence> {
    let mut seq = DilutionSequence::default();
    for (ln, l) in lines(text) {
        let (cmd, rest) = l.split_once(char::is_whitespace).map_or((l, ""), |(a, b)| (a, b.trim()));
        let step = match cmd {
            "delv" => DilutionStep::DeleteVertex(name(ln, rest)?),
            "merge" => DilutionStep::MergeOn(name(ln, rest)?),
            "dele" => DilutionStep::DeleteSubedge(edge_token(ln, rest)?),
            "source" => {
                let nums: Vec<usize> = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::parse(ln, format!("bad count `{t}`"))))
                    .collect::<Result<_>>()?;
                if nums.len() != 2 {
                    return Err(Error::parse(ln, "`source` takes vertex and edge counts"));
                }
                if seq.source.is_some() || !seq.steps.is_empty() {
                    return Err(Error::parse(ln, "`source` must come first and only once"));
                }
                seq.source = Some(Fingerprint {
                    vertices: nums[0],
                    edges: nums[1],
                });
                continue;
            }
            other => return Err(Error::parse(ln, format!("unknown step `{other}`"))),
        };
        seq.steps.push(step);
    }
    Ok(seq)
}

pub fn print_sequence(seq: &DilutionSequence) -> String {
    let mut out = String::new();
    if let Some(fp) = &seq.source {
        let _ = writeln!(out, "source {} {}", fp.vertices, fp.edges);
    }
    for s in &seq.steps {
        let _ = match s {
            DilutionStep::DeleteVertex(v) => writeln!(out, "delv {v}"),
            DilutionStep::DeleteSubedge(e) => writeln!(out, "dele e{}", fmt_set(e)),
            DilutionStep::MergeOn(v) => writeln!(out, "merge {v}"),
        };
    }
    out
}

// ------------------------------------------------------------ decompositions

/// Reads a decomposition. Without any `cover` clause the result has no
/// covers; with some it must have one per node.
pub fn parse_decomposition(text: &str) -> Result<GHDecomposition> {
    let mut nodes: Vec<(usize, Node, Option<BTreeSet<Edge>>)> = Vec::new();
    for (ln, l) in lines(text) {
        let toks = tokens(l);
        if toks.len() < 5 || toks[0] != "node" || toks[2] != "parent" || toks[4] != "bag" {
            return Err(Error::parse(ln, "expected `node N parent M|- bag ...`"));
        }
        let id: usize = toks[1].parse().map_err(|_| Error::parse(ln, "bad node id"))?;
        let parent = match toks[3] {
            "-" => None,
            p => Some(p.parse().map_err(|_| Error::parse(ln, "bad parent id"))?),
        };
        let rest = &toks[5..];
        let split = rest.iter().position(|t| *t == "cover");
        let (bag, cover) = match split {
            Some(i) => (&rest[..i], Some(&rest[i + 1..])),
            None => (rest, None),
        };
        let bag = bag.iter().map(|v| name(ln, v)).collect::<Result<_>>()?;
        let cover = cover
            .map(|c| c.iter().map(|t| edge_token(ln, t)).collect::<Result<BTreeSet<Edge>>>())
            .transpose()?;
        nodes.push((id, Node { parent, bag }, cover));
    }
    nodes.sort_by_key(|(id, ..)| *id);
    if nodes.iter().enumerate().any(|(i, (id, ..))| i != *id) {
        return Err(Error::parse(0, "node ids must be 0..n without gaps"));
    }
    let with_cover = nodes.iter().filter(|(.., c)| c.is_some()).count();
    if with_cover != 0 && with_cover != nodes.len() {
        return Err(Error::parse(0, "either every node has a cover or none does"));
    }
    let mut td = TreeDecomposition::default();
    let mut covers = Vec::new();
    for (_, node, cover) in nodes {
        td.nodes.push(node);
        covers.extend(cover);
    }
    Ok(GHDecomposition { td, covers })
}

pub fn print_decomposition(d: &GHDecomposition) -> String {
    let mut out = String::new();
    for (i, n) in d.td.nodes.iter().enumerate() {
        let parent = n.parent.map_or("-".to_string(), |p| p.to_string());
        let _ = write!(out, "node {i} parent {parent} bag");
        for v in &n.bag {
            let _ = write!(out, " {v}");
        }
        if let Some(c) = d.covers.get(i) {
            out.push_str(" cover");
            for e in c {
                let _ = write!(out, " e{}", fmt_set(e));
            }
        }
        out.push('\n');
    }
    out
}

pub fn print_td(td: &TreeDecomposition) -> String {
    print_decomposition(&GHDecomposition {
        td: td.clone(),
        covers: Vec::new(),
    })
}

// ----------------------------------------------------------------- witnesses

fn arrow<'a>(ln: usize, toks: &'a [&'a str]) -> Result<(&'a str, &'a [&'a str])> {
    match toks {
        [key, "->", rest @ ..] => Ok((key, rest)),
        _ => Err(Error::parse(ln, "expected `KEY -> ...`")),
    }
}

/// Pre-jigsaw witness: `size n m`, then `pi`, `o` and `path` lines.
pub fn parse_prejigsaw(text: &str) -> Result<PreJigsawWitness> {
    let mut w = PreJigsawWitness {
        n: 0,
        m: 0,
        pi: BTreeMap::new(),
        o: BTreeMap::new(),
        paths: BTreeMap::new(),
    };
    let mut sized = false;
    for (ln, l) in lines(text) {
        let toks = tokens(l);
        match toks[0] {
            "size" if toks.len() == 3 => {
                w.n = toks[1].parse().map_err(|_| Error::parse(ln, "bad size"))?;
                w.m = toks[2].parse().map_err(|_| Error::parse(ln, "bad size"))?;
                sized = true;
            }
            "pi" => match arrow(ln, &toks[1..])? {
                (u, [x]) => {
                    w.pi.insert(name(ln, u)?, name(ln, x)?);
                }
                _ => return Err(Error::parse(ln, "`pi` maps to exactly one vertex")),
            },
            "o" => {
                let (e, fs) = arrow(ln, &toks[1..])?;
                let fs = fs.iter().map(|t| edge_token(ln, t)).collect::<Result<_>>()?;
                w.o.insert(name(ln, e)?, fs);
            }
            "path" => {
                let sep = toks.iter().position(|t| *t == ":");
                let (Some(3), [_, u, v, ..]) = (sep, toks.as_slice()) else {
                    return Err(Error::parse(ln, "expected `path u v : v0 e0 v1 ...`"));
                };
                let body = &toks[4..];
                if body.len().is_multiple_of(2) {
                    return Err(Error::parse(ln, "a path alternates vertices and edges"));
                }
                let mut p = Path {
                    vertices: Vec::new(),
                    edges: Vec::new(),
                };
                for (i, t) in body.iter().enumerate() {
                    if i % 2 == 0 {
                        p.vertices.push(name(ln, t)?);
                    } else {
                        p.edges.push(edge_token(ln, t)?);
                    }
                }
                w.paths.insert((name(ln, u)?, name(ln, v)?), p);
            }
            other => return Err(Error::parse(ln, format!("unknown witness line `{other}`"))),
        }
    }
    if !sized {
        return Err(Error::parse(0, "missing `size n m` line"));
    }
    Ok(w)
}

pub fn print_prejigsaw(w: &PreJigsawWitness) -> String {
    let mut out = format!("size {} {}\n", w.n, w.m);
    for (u, x) in &w.pi {
        let _ = writeln!(out, "pi {u} -> {x}");
    }
    for (e, fs) in &w.o {
        let _ = write!(out, "o {e} ->");
        for f in fs {
            let _ = write!(out, " {}", fmt_set(f));
        }
        out.push('\n');
    }
    for ((u, v), p) in &w.paths {
        let _ = write!(out, "path {u} {v} : {}", p.vertices[0]);
        for (e, x) in p.edges.iter().zip(&p.vertices[1..]) {
            let _ = write!(out, " {} {x}", fmt_set(e));
        }
        out.push('\n');
    }
    out
}

/// Minor map lines `mu u -> a b ...`, optionally with edge assignment lines
/// `rho (u,v) -> (a,b)` for expressive minors.
pub fn parse_minor(text: &str) -> Result<(MinorMap, EdgeAssignment)> {
    let mut mu = MinorMap::default();
    let mut rho = EdgeAssignment::new();
    for (ln, l) in lines(text) {
        let toks = tokens(l);
        match toks[0] {
            "mu" => {
                let (u, vs) = arrow(ln, &toks[1..])?;
                let vs = vs.iter().map(|v| name(ln, v)).collect::<Result<_>>()?;
                mu.map.insert(name(ln, u)?, vs);
            }
            "rho" => match arrow(ln, &toks[1..])? {
                (e, [f]) => {
                    rho.insert(edge_token(ln, e)?, edge_token(ln, f)?);
                }
                _ => return Err(Error::parse(ln, "`rho` maps to exactly one edge")),
            },
            other => return Err(Error::parse(ln, format!("unknown minor line `{other}`"))),
        }
    }
    Ok((mu, rho))
}

pub fn print_minor(mu: &MinorMap, rho: &EdgeAssignment) -> String {
    let mut out = String::new();
    for (u, vs) in &mu.map {
        let _ = write!(out, "mu {u} ->");
        for v in vs {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for (e, f) in rho {
        let _ = writeln!(out, "rho {} -> {}", fmt_set(e), fmt_set(f));
    }
    out
}

// ------------------------------------------------------------ queries and data

pub fn parse_query(text: &str) -> Result<ConjunctiveQuery> {
    let mut atoms = Vec::new();
    for (ln, l) in lines(text) {
        let (rel, args) = atom(ln, l.trim_end_matches(['.', ',']))?;
        if rel.is_empty() {
            return Err(Error::parse(ln, "atom needs a relation name"));
        }
        atoms.push(Atom::new(rel, args));
    }
    let q = ConjunctiveQuery::new(atoms);
    q.schema()?;
    Ok(q)
}

pub fn print_query(q: &ConjunctiveQuery) -> String {
    q.atoms.iter().map(|a| format!("{a}\n")).collect()
}

pub fn parse_database(text: &str) -> Result<Database> {
    let mut db = Database::default();
    for (ln, l) in lines(text) {
        let body = l
            .strip_suffix('.')
            .ok_or_else(|| Error::parse(ln, "a fact ends with `.`"))?;
        let (rel, args) = atom(ln, body.trim())?;
        if rel.is_empty() {
            return Err(Error::parse(ln, "fact needs a relation name"));
        }
        db.insert(&rel, args).map_err(|e| Error::parse(ln, e.to_string()))?;
    }
    Ok(db)
}

/// Facts sorted by relation then tuple. Relations without tuples are lost,
/// as the format cannot express them.
pub fn print_database(db: &Database) -> String {
    let mut out = String::new();
    for (r, rel) in &db.relations {
        for t in &rel.tuples {
            let _ = writeln!(out, "{r}({}).", t.join(","));
        }
    }
    out
}

/// Rename map lines `x -> v`.
pub fn parse_rename(text: &str) -> Result<BTreeMap<Variable, Vertex>> {
    let mut out = BTreeMap::new();
    for (ln, l) in lines(text) {
        match arrow(ln, &tokens(l))? {
            (x, [v]) => {
                out.insert(name(ln, x)?, name(ln, v)?);
            }
            _ => return Err(Error::parse(ln, "expected `x -> v`")),
        }
    }
    Ok(out)
}

pub fn print_rename(map: &BTreeMap<Variable, Vertex>) -> String {
    map.iter().map(|(x, v)| format!("{x} -> {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{jigsaw, mesh, mesh_example_sequence, subdivided_jigsaw};

    #[test]
    fn hypergraph_round_trip() {
        let h = mesh(3, 2).with_vertex("lonely").with_edge(Vec::<&str>::new());
        assert_eq!(parse_hypergraph(&print_hypergraph(&h)).unwrap(), h);
    }

    #[test]
    fn hypergraph_parse_errors_carry_lines() {
        let err = parse_hypergraph("% ok\na(x,y)\nb(x,\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        assert!(parse_hypergraph("a(x-y)").is_err());
        assert!(parse_hypergraph("vertex(a,b)").is_err());
    }

    #[test]
    fn sequence_round_trip() {
        let seq = mesh_example_sequence();
        assert_eq!(parse_sequence(&print_sequence(&seq)).unwrap(), seq);
        let s = DilutionSequence::new(vec![DilutionStep::DeleteSubedge(Edge::new())]);
        assert_eq!(parse_sequence(&print_sequence(&s)).unwrap(), s);
        assert!(parse_sequence("merge a\nsource 1 1").is_err());
        assert!(parse_sequence("shrink a").is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let (_, ghd) = crate::decomposition::exact_ghw(&jigsaw(3, 3).unwrap(), 10).unwrap();
        assert_eq!(parse_decomposition(&print_decomposition(&ghd)).unwrap(), ghd);
        let plain = parse_decomposition("node 1 parent 0 bag b c\nnode 0 parent - bag a b\n").unwrap();
        assert!(plain.covers.is_empty());
        assert_eq!(plain.td.nodes[1].parent, Some(0));
        assert!(parse_decomposition("node 0 parent - bag a cover e(a)\nnode 1 parent 0 bag a").is_err());
    }

    #[test]
    fn witness_round_trips() {
        let (_, w) = subdivided_jigsaw(2, 2, 1).unwrap();
        assert_eq!(parse_prejigsaw(&print_prejigsaw(&w)).unwrap(), w);
        let mut mu = MinorMap::default();
        mu.map.insert("u".into(), ["a".to_string(), "b".to_string()].into());
        let mut rho = EdgeAssignment::new();
        rho.insert(["u".to_string(), "w".to_string()].into(), ["a".to_string()].into());
        assert_eq!(parse_minor(&print_minor(&mu, &rho)).unwrap(), (mu, rho));
    }

    #[test]
    fn query_database_and_rename_round_trip() {
        let q = parse_query("R(x,y)\n% c\nS(y,y,z)\nT()\n").unwrap();
        assert_eq!(q.atoms.len(), 3);
        assert_eq!(parse_query(&print_query(&q)).unwrap(), q);
        assert!(parse_query("R(x)\nR(x,y)").is_err());
        let db = parse_database("R(1,2).\nR(2,3).\nT().\n").unwrap();
        assert_eq!(parse_database(&print_database(&db)).unwrap(), db);
        assert!(parse_database("R(1,2)").is_err());
        let map: BTreeMap<_, _> = [("x".to_string(), "a".to_string())].into();
        assert_eq!(parse_rename(&print_rename(&map)).unwrap(), map);
    }
}
