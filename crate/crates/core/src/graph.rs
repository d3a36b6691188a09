//! Undirected loopless multigraphs, their Laplacians and crossing degrees.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::set::VertexSet;

/// A connected, loopless multigraph with at most 64 vertices.
///
/// Vertices are indexed in first-appearance order of the edge list; that
/// order is used for every matrix and divisor built on the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    mult: BTreeMap<(usize, usize), u64>,
    adj: Vec<Vec<(usize, i64)>>,
    nbrs: Vec<VertexSet>,
    degree: Vec<i64>,
}

/// Dense integer Laplacian `deg - adjacency`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl LaplacianMatrix {
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// The matrix with row and column `skip` deleted.
    pub fn reduced(&self, skip: usize) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect()
    }
}

impl Multigraph {
    /// Builds a graph from named vertices and `(u, v, multiplicity)` records.
    /// Duplicate pairs accumulate.
    pub fn new<S: AsRef<str>>(edges: &[(S, S, u64)]) -> Result<Self> {
        let mut builder = Builder::default();
        for (line, (u, v, m)) in edges.iter().enumerate() {
            builder.add(line + 1, u.as_ref(), v.as_ref(), *m as i64)?;
        }
        builder.finish()
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names
            .iter()
            .map(|s| self.vertex(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(VertexSet::from_indices)
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn mult(&self, u: usize, v: usize) -> u64 {
        let key = if u < v { (u, v) } else { (v, u) };
        self.mult.get(&key).copied().unwrap_or(0)
    }

    /// Edges as `(u, v, m)` with `u < v`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.mult.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    /// Total edge multiplicity `#E`.
    pub fn edge_count(&self) -> u64 {
        self.mult.values().sum()
    }

    pub fn simple_edge_count(&self) -> usize {
        self.mult.len()
    }

    pub fn degree(&self, v: usize) -> i64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degree
    }

    pub fn adjacency(&self, v: usize) -> &[(usize, i64)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.nbrs[v]
    }

    pub fn laplacian(&self) -> LaplacianMatrix {
        let n = self.n();
        let mut entries = vec![vec![0i64; n]; n];
        for (&(u, v), &m) in &self.mult {
            entries[u][v] -= m as i64;
            entries[v][u] -= m as i64;
        }
        for (v, row) in entries.iter_mut().enumerate() {
            row[v] = self.degree[v];
        }
        LaplacianMatrix { entries }
    }

    /// Number of edges at `v` running between `a` and `b`.
    pub fn crossing_degree(&self, a: VertexSet, b: VertexSet, v: usize) -> Result<i64> {
        if !a.is_disjoint(b) {
            return Err(Error::OverlappingSets);
        }
        if v >= self.n() {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
        Ok(self.crossing_degree_unchecked(a, b, v))
    }

    pub(crate) fn crossing_degree_unchecked(&self, a: VertexSet, b: VertexSet, v: usize) -> i64 {
        let other = if a.contains(v) {
            b
        } else if b.contains(v) {
            a
        } else {
            return 0;
        };
        self.adj[v]
            .iter()
            .filter(|(u, _)| other.contains(*u))
            .map(|(_, m)| m)
            .sum()
    }

    /// Total multiplicity of edges with one end in `a` and the other in `b`.
    pub fn edges_between(&self, a: VertexSet, b: VertexSet) -> i64 {
        a.iter()
            .map(|v| self.crossing_degree_unchecked(a, b.difference(a), v))
            .sum()
    }

    /// Vertices at distance exactly one from `a`.
    pub fn neighbor_set(&self, a: VertexSet) -> VertexSet {
        a.iter()
            .fold(VertexSet::EMPTY, |acc, v| acc.union(self.nbrs[v]))
            .difference(a)
    }

    /// Whether `s` is nonempty and induces a connected subgraph.
    pub fn is_connected_subset(&self, s: VertexSet) -> bool {
        match s.first() {
            None => false,
            Some(start) => self.component_within(s, start) == s,
        }
    }

    /// The connected component of `start` in the subgraph induced by `within`.
    pub fn component_within(&self, within: VertexSet, start: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = frontier
                .iter()
                .fold(VertexSet::EMPTY, |acc, v| acc.union(self.nbrs[v]))
                .intersection(within)
                .difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    /// Whether the underlying simple graph is a tree.
    pub fn is_multi_edged_tree(&self) -> bool {
        self.simple_edge_count() + 1 == self.n()
    }

    /// Serializes to the edge-list format accepted by [`load_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v, m) in self.edges() {
            let _ = writeln!(out, "{} {} {}", self.names[u], self.names[v], m);
        }
        out
    }

    /// Vertex indices sorted by name; the digit-string divisor notation uses this order.
    pub fn alphabetical_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        order
    }

    pub fn format_set(&self, s: VertexSet) -> String {
        let names: Vec<&str> = s.iter().map(|v| self.name(v)).collect();
        format!("{{{}}}", names.join(","))
    }
}

#[derive(Default)]
struct Builder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    mult: BTreeMap<(usize, usize), u64>,
}

impl Builder {
    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }

    fn add(&mut self, line: usize, u: &str, v: &str, m: i64) -> Result<()> {
        if u == v {
            return Err(Error::Loop { line, vertex: u.to_string() });
        }
        if m <= 0 {
            return Err(Error::NonPositiveMultiplicity { line, value: m });
        }
        let (a, b) = (self.intern(u), self.intern(v));
        let key = if a < b { (a, b) } else { (b, a) };
        *self.mult.entry(key).or_insert(0) += m as u64;
        Ok(())
    }

    fn finish(self) -> Result<Multigraph> {
        let n = self.names.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if n < 2 {
            return Err(Error::TooFewVertices);
        }
        if n > 64 {
            return Err(Error::TooManyVertices(n));
        }
        let mut adj = vec![Vec::new(); n];
        let mut nbrs = vec![VertexSet::EMPTY; n];
        let mut degree = vec![0i64; n];
        for (&(u, v), &m) in &self.mult {
            adj[u].push((v, m as i64));
            adj[v].push((u, m as i64));
            nbrs[u] = nbrs[u].with(v);
            nbrs[v] = nbrs[v].with(u);
            degree[u] += m as i64;
            degree[v] += m as i64;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Multigraph {
            names: self.names,
            index: self.index,
            mult: self.mult,
            adj,
            nbrs,
            degree,
        };
        if !g.is_connected_subset(g.all()) {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }
}

/// Parses the whitespace-separated edge-list format: `<u> <v> [m]` per line,
/// `#` comments, repeated pairs accumulate.
pub fn load_graph(text: &str) -> Result<Multigraph> {
    let mut builder = Builder::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let m = match tokens.len() {
            2 => 1,
            3 => tokens[2].parse::<i64>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("bad multiplicity `{}`: {e}", tokens[2]),
            })?,
            k => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected 2 or 3 fields, found {k}"),
                })
            }
        };
        builder.add(i + 1, tokens[0], tokens[1], m)?;
    }
    builder.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "a b 1\na c 1\nb c 2\nb d 1\nc d 3\n";

    fn example() -> Multigraph {
        load_graph(EXAMPLE).unwrap()
    }

    #[test]
    fn loads_worked_example() {
        let g = example();
        assert_eq!(g.n(), 4);
        assert_eq!(g.degrees(), &[2, 4, 6, 4]);
        assert_eq!(g.edge_count(), 8);
    }

    #[test]
    fn laplacian_entries() {
        let g = example();
        let l = g.laplacian();
        let diag: Vec<i64> = (0..4).map(|i| l.entries[i][i]).collect();
        assert_eq!(diag, vec![2, 4, 6, 4]);
        assert_eq!(l.entries[1][2], -2);
        assert_eq!(l.entries[2][3], -3);
        assert_eq!(l.apply(&[1, 1, 1, 1]), vec![0; 4]);

        let edge = load_graph("a b 1").unwrap();
        assert_eq!(edge.laplacian().entries, vec![vec![1, -1], vec![-1, 1]]);
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert_eq!(
            load_graph("a a 1"),
            Err(Error::Loop { line: 1, vertex: "a".into() })
        );
        assert_eq!(
            load_graph("a b 0"),
            Err(Error::NonPositiveMultiplicity { line: 1, value: 0 })
        );
        assert_eq!(load_graph("a b\nc d"), Err(Error::Disconnected));
        assert_eq!(load_graph("# nothing\n\n"), Err(Error::EmptyInput));
        assert!(matches!(load_graph("a b c d"), Err(Error::Parse { .. })));
        assert!(matches!(load_graph("a b x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_default_multiplicity_and_accumulation() {
        let g = load_graph("# header\nx y\nx y 2\ny z\n").unwrap();
        assert_eq!(g.mult(0, 1), 3);
        assert_eq!(g.mult(1, 2), 1);
        assert_eq!(g.names(), &["x", "y", "z"]);
    }

    #[test]
    fn crossing_degree_examples() {
        let g = example();
        let a = g.vertex_set(&["a", "b", "c"]).unwrap();
        let b = g.vertex_set(&["d"]).unwrap();
        let d = g.vertex("d").unwrap();
        assert_eq!(g.crossing_degree(a, b, d).unwrap(), 4);
        assert_eq!(g.crossing_degree(a, b, 0).unwrap(), 0);
        for v in 0..4 {
            assert_eq!(g.crossing_degree(VertexSet::EMPTY, b, v).unwrap(), 0);
        }
        assert_eq!(g.crossing_degree(a, a, 0), Err(Error::OverlappingSets));
        assert!(g.crossing_degree(a, b, 9).is_err());
    }

    #[test]
    fn neighbor_set_examples() {
        let g = example();
        let d = g.vertex_set(&["d"]).unwrap();
        assert_eq!(g.neighbor_set(d), g.vertex_set(&["b", "c"]).unwrap());
        assert_eq!(g.neighbor_set(g.all()), VertexSet::EMPTY);
        let edge = load_graph("a b").unwrap();
        assert_eq!(edge.neighbor_set(VertexSet::singleton(0)), VertexSet::singleton(1));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = example();
        assert_eq!(load_graph(&g.to_edge_list()).unwrap(), g);
    }
}
