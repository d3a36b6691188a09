//! Connected partitions, quotient graphs, cuts and generating sequences.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::set::VertexSet;

/// A partition of the vertex set into connected blocks, ordered by least vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnectedPartition {
    blocks: Vec<VertexSet>,
}

impl ConnectedPartition {
    pub fn new(g: &Multigraph, mut blocks: Vec<VertexSet>) -> Result<Self> {
        let mut seen = VertexSet::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            if !g.is_connected_subset(b) {
                return Err(Error::InvalidPartition(format!(
                    "block {} is not connected",
                    g.format_set(b)
                )));
            }
            seen = seen.union(b);
        }
        if seen != g.all() {
            return Err(Error::InvalidPartition("blocks do not cover the vertices".into()));
        }
        blocks.sort_by_key(|b| b.first());
        Ok(ConnectedPartition { blocks })
    }

    /// The partition into singletons.
    pub fn singletons(g: &Multigraph) -> Self {
        ConnectedPartition {
            blocks: (0..g.n()).map(VertexSet::singleton).collect(),
        }
    }

    /// The cut `{side, V \ side}`.
    pub fn cut(g: &Multigraph, side: VertexSet) -> Result<Self> {
        ConnectedPartition::new(g, vec![side, g.all().difference(side)])
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, i: usize) -> VertexSet {
        self.blocks[i]
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(v))
            .expect("partition covers every vertex")
    }

    /// Union of the blocks whose indices are in `mask`.
    pub fn union_of(&self, mask: VertexSet) -> VertexSet {
        mask.iter()
            .fold(VertexSet::EMPTY, |acc, i| acc.union(self.blocks[i]))
    }

    pub fn display(&self, g: &Multigraph) -> String {
        self.blocks
            .iter()
            .map(|&b| g.format_set(b))
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Parses `{a}|{b,d}|{c}`.
    pub fn parse(g: &Multigraph, text: &str) -> Result<Self> {
        let blocks = text
            .split('|')
            .map(|part| {
                let inner = part
                    .trim()
                    .strip_prefix('{')
                    .and_then(|s| s.strip_suffix('}'))
                    .ok_or_else(|| Error::InvalidPartition(format!("bad block `{part}`")))?;
                let names: Vec<&str> = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .collect();
                g.vertex_set(&names)
            })
            .collect::<Result<Vec<_>>>()?;
        ConnectedPartition::new(g, blocks)
    }
}

impl fmt::Debug for ConnectedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.blocks).finish()
    }
}

/// All connected partitions of `g` with exactly `parts` blocks, sorted.
pub fn enumerate_connected_partitions(g: &Multigraph, parts: usize) -> Vec<ConnectedPartition> {
    if parts == 0 || parts > g.n() {
        return Vec::new();
    }
    // Shard on the block that holds vertex 0.
    let first_blocks: Vec<VertexSet> = g
        .all()
        .without(0)
        .subsets()
        .map(|s| s.with(0))
        .filter(|&s| g.is_connected_subset(s))
        .collect();
    let mut out: Vec<ConnectedPartition> = first_blocks
        .par_iter()
        .flat_map_iter(|&first| {
            let mut acc = Vec::new();
            let mut stack = vec![first];
            extend_partitions(g, g.all().difference(first), parts - 1, &mut stack, &mut acc);
            acc
        })
        .collect();
    out.sort();
    out
}

fn extend_partitions(
    g: &Multigraph,
    rest: VertexSet,
    parts: usize,
    stack: &mut Vec<VertexSet>,
    out: &mut Vec<ConnectedPartition>,
) {
    if parts == 0 {
        if rest.is_empty() {
            out.push(ConnectedPartition::new(g, stack.clone()).expect("blocks are valid"));
        }
        return;
    }
    if rest.len() < parts {
        return;
    }
    if parts == 1 {
        if g.is_connected_subset(rest) {
            stack.push(rest);
            extend_partitions(g, VertexSet::EMPTY, 0, stack, out);
            stack.pop();
        }
        return;
    }
    let v = rest.first().expect("rest is nonempty");
    for s in rest.without(v).subsets() {
        let block = s.with(v);
        if g.is_connected_subset(block) {
            stack.push(block);
            extend_partitions(g, rest.difference(block), parts - 1, stack, out);
            stack.pop();
        }
    }
}

/// `G_Pi` (block multiplicities) and its simple version.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGraph {
    pub partition: ConnectedPartition,
    /// Block pair `(i, j)`, `i < j`, to total multiplicity of edges between them.
    pub mult: BTreeMap<(usize, usize), u64>,
}

impl QuotientGraph {
    pub fn blocks(&self) -> usize {
        self.partition.len()
    }

    /// Edges of the simple quotient in `(i, j)`, `i < j` order.
    pub fn simple_edges(&self) -> Vec<(usize, usize)> {
        self.mult.keys().copied().collect()
    }

    pub fn block_neighbors(&self, i: usize) -> VertexSet {
        self.mult
            .keys()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Whether the blocks in `mask` induce a connected subgraph of the quotient.
    pub fn is_connected_blocks(&self, mask: VertexSet) -> bool {
        let Some(start) = mask.first() else {
            return false;
        };
        let mut seen = VertexSet::singleton(start);
        let mut frontier = vec![start];
        while let Some(b) = frontier.pop() {
            for nb in self.block_neighbors(b).intersection(mask).iter() {
                if !seen.contains(nb) {
                    seen = seen.with(nb);
                    frontier.push(nb);
                }
            }
        }
        seen == mask
    }

    /// `G_Pi` as a multigraph whose vertices are named by their blocks.
    pub fn to_multigraph(&self, g: &Multigraph) -> Result<Multigraph> {
        let names: Vec<String> = self
            .partition
            .blocks()
            .iter()
            .map(|&b| g.format_set(b))
            .collect();
        let edges: Vec<(&str, &str, u64)> = self
            .mult
            .iter()
            .map(|(&(i, j), &m)| (names[i].as_str(), names[j].as_str(), m))
            .collect();
        Multigraph::new(&edges)
    }

    /// `G~_Pi`: every multiplicity collapsed to one.
    pub fn to_simple_multigraph(&self, g: &Multigraph) -> Result<Multigraph> {
        let mut simple = self.clone();
        simple.mult.values_mut().for_each(|m| *m = 1);
        simple.to_multigraph(g)
    }
}

pub fn quotient(g: &Multigraph, p: &ConnectedPartition) -> QuotientGraph {
    let mut mult = BTreeMap::new();
    for (u, v, m) in g.edges() {
        let (a, b) = (p.block_of(u), p.block_of(v));
        if a != b {
            *mult.entry((a.min(b), a.max(b))).or_insert(0) += m;
        }
    }
    QuotientGraph {
        partition: p.clone(),
        mult,
    }
}

/// One cut in a generating sequence: `component` (a set of block indices)
/// splits into `side_a` (holding the component's least block) and `side_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequenceCut {
    pub side_a: VertexSet,
    pub side_b: VertexSet,
}

impl SequenceCut {
    pub fn component(&self) -> VertexSet {
        self.side_a.union(self.side_b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratingSequence {
    pub cuts: Vec<SequenceCut>,
}

impl GeneratingSequence {
    /// Vertex sets `(A_i, B_i)` of each cut.
    pub fn vertex_sides(&self, p: &ConnectedPartition) -> Vec<(VertexSet, VertexSet)> {
        self.cuts
            .iter()
            .map(|c| (p.union_of(c.side_a), p.union_of(c.side_b)))
            .collect()
    }

    /// Applies the cuts in order starting from the whole block set and
    /// returns the resulting components, or `None` if some cut does not
    /// split a current component.
    pub fn apply(&self, blocks: usize) -> Option<BTreeSet<VertexSet>> {
        let mut comps: BTreeSet<VertexSet> = BTreeSet::from([VertexSet::full(blocks)]);
        for c in &self.cuts {
            if !comps.remove(&c.component()) {
                return None;
            }
            comps.insert(c.side_a);
            comps.insert(c.side_b);
        }
        Some(comps)
    }
}

type Memo = HashMap<BTreeSet<VertexSet>, Rc<Vec<Vec<SequenceCut>>>>;

/// Every generating sequence of `p`, sorted.
pub fn generating_sequences(g: &Multigraph, p: &ConnectedPartition) -> Vec<GeneratingSequence> {
    let q = quotient(g, p);
    let start = BTreeSet::from([VertexSet::full(p.len())]);
    let mut memo = Memo::new();
    let mut out: Vec<GeneratingSequence> = sequences_from(&q, &start, &mut memo)
        .iter()
        .map(|cuts| GeneratingSequence { cuts: cuts.clone() })
        .collect();
    out.sort();
    out
}

fn sequences_from(
    q: &QuotientGraph,
    comps: &BTreeSet<VertexSet>,
    memo: &mut Memo,
) -> Rc<Vec<Vec<SequenceCut>>> {
    if let Some(hit) = memo.get(comps) {
        return hit.clone();
    }
    let mut result = Vec::new();
    if comps.iter().all(|c| c.len() == 1) {
        result.push(Vec::new());
    }
    for &comp in comps.iter().filter(|c| c.len() > 1) {
        let least = comp.first().unwrap();
        for rest in comp.without(least).subsets() {
            let side_a = rest.with(least);
            let side_b = comp.difference(side_a);
            if side_b.is_empty() || !q.is_connected_blocks(side_a) || !q.is_connected_blocks(side_b)
            {
                continue;
            }
            let cut = SequenceCut { side_a, side_b };
            let mut next = comps.clone();
            next.remove(&comp);
            next.insert(side_a);
            next.insert(side_b);
            for tail in sequences_from(q, &next, memo).iter() {
                let mut seq = Vec::with_capacity(tail.len() + 1);
                seq.push(cut);
                seq.extend_from_slice(tail);
                result.push(seq);
            }
        }
    }
    let result = Rc::new(result);
    memo.insert(comps.clone(), result.clone());
    result
}

/// Two cuts intersect when neither side of one nests inside a side of the other.
pub fn cuts_intersect(p1: &ConnectedPartition, p2: &ConnectedPartition) -> bool {
    assert!(p1.len() == 2 && p2.len() == 2, "both partitions must be cuts");
    let nested = p1
        .blocks()
        .iter()
        .any(|&a1| p2.blocks().iter().any(|&a2| a1.is_subset(a2)));
    !nested
}

/// Vertices of block `j` with an edge into the union of the blocks in `others`.
pub fn boundary_set(
    g: &Multigraph,
    p: &ConnectedPartition,
    j: usize,
    others: VertexSet,
) -> Result<VertexSet> {
    if others.contains(j) {
        return Err(Error::InvalidPartition(format!(
            "block {j} cannot be its own neighbour set"
        )));
    }
    let target = p.union_of(others);
    Ok(p.block(j)
        .iter()
        .filter(|&v| !g.neighbors(v).is_disjoint(target))
        .collect())
}

/// `V_b`: the union of all block boundaries.
pub fn partition_boundary(g: &Multigraph, p: &ConnectedPartition) -> VertexSet {
    (0..p.len())
        .map(|j| {
            boundary_set(g, p, j, VertexSet::full(p.len()).without(j)).expect("j excluded")
        })
        .fold(VertexSet::EMPTY, VertexSet::union)
}
