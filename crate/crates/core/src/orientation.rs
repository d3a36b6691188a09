//! Orientations of simple quotient graphs, the map from orientations to
//! divisors, boundary divisors of generating sequences, and switches.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;

use crate::divisor::{class_key, equivalent, fire_set, Divisor, DivisorClassKey};
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::partition::{quotient, ConnectedPartition, GeneratingSequence, QuotientGraph};
use crate::set::VertexSet;

/// Switch search is only attempted on quotients with at most this many edges.
pub const SWITCH_SEARCH_EDGE_CAP: usize = 12;

/// Direction of every simple quotient edge. `arcs[e]` is `(tail, head)` for
/// the `e`-th entry of [`QuotientGraph::simple_edges`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    pub arcs: Vec<(usize, usize)>,
}

impl Orientation {
    /// Bit `e` set means edge `e = (i, j)` points `j -> i`.
    pub fn from_bits(q: &QuotientGraph, bits: u64) -> Self {
        let arcs = q
            .simple_edges()
            .into_iter()
            .enumerate()
            .map(|(e, (i, j))| if bits >> e & 1 == 1 { (j, i) } else { (i, j) })
            .collect();
        Orientation { arcs }
    }

    pub fn is_acyclic(&self, blocks: usize) -> bool {
        let mut indeg = vec![0usize; blocks];
        for &(_, h) in &self.arcs {
            indeg[h] += 1;
        }
        let mut ready: Vec<usize> = (0..blocks).filter(|&b| indeg[b] == 0).collect();
        let mut seen = 0;
        while let Some(b) = ready.pop() {
            seen += 1;
            for &(t, h) in &self.arcs {
                if t == b {
                    indeg[h] -= 1;
                    if indeg[h] == 0 {
                        ready.push(h);
                    }
                }
            }
        }
        seen == blocks
    }

    /// Blocks with no incoming arc.
    pub fn sources(&self, blocks: usize) -> VertexSet {
        let heads: VertexSet = self.arcs.iter().map(|&(_, h)| h).collect();
        VertexSet::full(blocks).difference(heads)
    }

    /// Blocks reachable from `s` along arcs, `s` included.
    pub fn reachable(&self, s: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(s);
        let mut stack = vec![s];
        while let Some(b) = stack.pop() {
            for &(t, h) in &self.arcs {
                if t == b && !seen.contains(h) {
                    seen = seen.with(h);
                    stack.push(h);
                }
            }
        }
        seen
    }

    pub fn display(&self, g: &Multigraph, p: &ConnectedPartition) -> String {
        self.arcs
            .iter()
            .map(|&(t, h)| format!("{}->{}", g.format_set(p.block(t)), g.format_set(p.block(h))))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses `{a}->{b,d},{a}->{c},...`; every quotient edge must appear once.
    pub fn parse(g: &Multigraph, q: &QuotientGraph, text: &str) -> Result<Self> {
        let p = &q.partition;
        let block_named = |s: &str| -> Result<usize> {
            let names: Vec<&str> = s
                .trim()
                .trim_start_matches('{')
                .trim_end_matches('}')
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .collect();
            let set = g.vertex_set(&names)?;
            p.blocks()
                .iter()
                .position(|&b| b == set)
                .ok_or_else(|| Error::InvalidOrientation(format!("`{s}` is not a block")))
        };
        let edges = q.simple_edges();
        let mut arcs: Vec<Option<(usize, usize)>> = vec![None; edges.len()];
        // Split on "}," boundaries so commas inside blocks survive.
        for item in text.split("},").map(str::trim).filter(|s| !s.is_empty()) {
            let item = if item.ends_with('}') { item.to_string() } else { format!("{item}}}") };
            let (t, h) = item
                .split_once("->")
                .ok_or_else(|| Error::InvalidOrientation(format!("bad arc `{item}`")))?;
            let (t, h) = (block_named(t)?, block_named(h)?);
            let e = edges
                .iter()
                .position(|&(i, j)| (i, j) == (t.min(h), t.max(h)))
                .ok_or_else(|| Error::InvalidOrientation("arc is not a quotient edge".into()))?;
            if arcs[e].replace((t, h)).is_some() {
                return Err(Error::InvalidOrientation("edge oriented twice".into()));
            }
        }
        arcs.into_iter()
            .collect::<Option<Vec<_>>>()
            .map(|arcs| Orientation { arcs })
            .ok_or_else(|| Error::InvalidOrientation("some edge is not oriented".into()))
    }
}

/// Every orientation of the simple quotient.
pub fn all_orientations(q: &QuotientGraph) -> impl Iterator<Item = Orientation> + '_ {
    let m = q.simple_edges().len();
    assert!(m < 40, "too many quotient edges to enumerate orientations");
    (0..1u64 << m).map(move |bits| Orientation::from_bits(q, bits))
}

/// All acyclic orientations, in bit order.
pub fn enumerate_acyclic_orientations(q: &QuotientGraph) -> Vec<Orientation> {
    let m = q.simple_edges().len();
    assert!(m < 40, "too many quotient edges to enumerate orientations");
    let blocks = q.blocks();
    // Shard on the direction of the last edge.
    let half = if m == 0 { 1u64 } else { 1u64 << (m - 1) };
    let shards: Vec<u64> = if m == 0 { vec![0] } else { vec![0, half] };
    shards
        .into_par_iter()
        .flat_map_iter(|base| {
            (0..half)
                .map(move |low| Orientation::from_bits(q, base | low))
                .filter(move |o| o.is_acyclic(blocks))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Acyclic orientations whose only source is block `s`.
pub fn enumerate_aus(q: &QuotientGraph, s: usize) -> Vec<Orientation> {
    let blocks = q.blocks();
    enumerate_acyclic_orientations(q)
        .into_iter()
        .filter(|o| o.sources(blocks) == VertexSet::singleton(s))
        .collect()
}

/// Each vertex receives, for every arc pointing into its block, its crossing
/// degree between the arc's tail block and head block.
pub fn f_map(g: &Multigraph, p: &ConnectedPartition, o: &Orientation) -> Divisor {
    let mut d = Divisor::zero(g.n());
    for &(t, h) in &o.arcs {
        let (tail, head) = (p.block(t), p.block(h));
        for v in head.iter() {
            d.0[v] += g.crossing_degree_unchecked(tail, head, v);
        }
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// A generating sequence with one chosen side per cut.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryDivisorChoice {
    pub sequence: GeneratingSequence,
    pub sides: Vec<Side>,
}

impl BoundaryDivisorChoice {
    pub fn new(sequence: GeneratingSequence, sides: Vec<Side>) -> Result<Self> {
        if sides.len() != sequence.cuts.len() {
            return Err(Error::InvalidPartition(
                "one side choice is needed per cut".into(),
            ));
        }
        Ok(BoundaryDivisorChoice { sequence, sides })
    }

    /// All `2^k` side choices for a sequence.
    pub fn all_for(sequence: &GeneratingSequence) -> Vec<Self> {
        let k = sequence.cuts.len();
        (0..1u64 << k)
            .map(|bits| BoundaryDivisorChoice {
                sequence: sequence.clone(),
                sides: (0..k)
                    .map(|i| if bits >> i & 1 == 1 { Side::B } else { Side::A })
                    .collect(),
            })
            .collect()
    }

    fn chosen(&self, i: usize) -> VertexSet {
        let c = &self.sequence.cuts[i];
        match self.sides[i] {
            Side::A => c.side_a,
            Side::B => c.side_b,
        }
    }
}

/// `D_v = sum_i deg_{A_i B_i}(v) * [v in X_i]`.
pub fn boundary_divisor(
    g: &Multigraph,
    p: &ConnectedPartition,
    choice: &BoundaryDivisorChoice,
) -> Divisor {
    let mut d = Divisor::zero(g.n());
    for (i, (a, b)) in choice.sequence.vertex_sides(p).into_iter().enumerate() {
        let x = p.union_of(choice.chosen(i));
        for v in x.iter() {
            d.0[v] += g.crossing_degree_unchecked(a, b, v);
        }
    }
    d
}

/// Orients each quotient edge toward the chosen side of the cut that severs it.
pub fn orientation_from_choice(
    g: &Multigraph,
    p: &ConnectedPartition,
    choice: &BoundaryDivisorChoice,
) -> Orientation {
    let q = quotient(g, p);
    let arcs = q
        .simple_edges()
        .into_iter()
        .map(|(i, j)| {
            let k = choice
                .sequence
                .cuts
                .iter()
                .position(|c| {
                    (c.side_a.contains(i) && c.side_b.contains(j))
                        || (c.side_a.contains(j) && c.side_b.contains(i))
                })
                .expect("a generating sequence severs every quotient edge");
            if choice.chosen(k).contains(j) {
                (i, j)
            } else {
                (j, i)
            }
        })
        .collect();
    Orientation { arcs }
}

/// The canonical source block: the one holding vertex 0.
pub fn canonical_source(p: &ConnectedPartition) -> usize {
    p.block_of(0)
}

/// Classes of `f(o)` over the acyclic orientations with the canonical unique source.
pub fn boundary_divisor_classes(g: &Multigraph, p: &ConnectedPartition) -> Vec<DivisorClassKey> {
    let q = quotient(g, p);
    let mut keys: Vec<DivisorClassKey> = enumerate_aus(&q, canonical_source(p))
        .iter()
        .map(|o| class_key(g, &f_map(g, p, o)))
        .collect();
    keys.sort();
    keys.dedup();
    keys
}

/// Edges between `a` and its complement all point away from `a` or all toward it.
pub fn is_critical(q: &QuotientGraph, o: &Orientation, a: VertexSet) -> bool {
    let _ = q;
    let mut out = false;
    let mut into = false;
    for &(t, h) in &o.arcs {
        match (a.contains(t), a.contains(h)) {
            (true, false) => out = true,
            (false, true) => into = true,
            _ => {}
        }
    }
    !(out && into)
}

/// Reverses every edge between `a` and its complement.
pub fn switch(q: &QuotientGraph, o: &Orientation, a: VertexSet) -> Result<Orientation> {
    if !is_critical(q, o, a) {
        return Err(Error::NotCritical);
    }
    Ok(Orientation {
        arcs: o
            .arcs
            .iter()
            .map(|&(t, h)| if a.contains(t) != a.contains(h) { (h, t) } else { (t, h) })
            .collect(),
    })
}

/// One reachable-set step: when some blocks are not reachable from `s`, the
/// edges into the reachable set are reversed. Returns the new orientation and
/// the reachable set that was fired.
pub fn pump_step(o: &Orientation, s: usize, blocks: usize) -> Option<(Orientation, VertexSet)> {
    let r = o.reachable(s);
    if r == VertexSet::full(blocks) {
        return None;
    }
    let arcs = o
        .arcs
        .iter()
        .map(|&(t, h)| if r.contains(h) && !r.contains(t) { (h, t) } else { (t, h) })
        .collect();
    Some((Orientation { arcs }, r))
}

/// Iterates [`pump_step`] until `s` is the unique source; the divisor of the
/// result is equivalent to that of `o`.
pub fn aus_representative(o: &Orientation, s: usize, blocks: usize) -> Orientation {
    let mut cur = o.clone();
    while let Some((next, _)) = pump_step(&cur, s, blocks) {
        cur = next;
    }
    cur
}

/// Fires `R` in `G` (as the union of its blocks); used to check that a pump
/// step moves `f(o)` to `f(o')`.
pub fn fire_blocks(g: &Multigraph, p: &ConnectedPartition, d: &Divisor, r: VertexSet) -> Divisor {
    fire_set(g, d, p.union_of(r))
}

/// Breadth-first search over switches. `None` when the quotient exceeds
/// [`SWITCH_SEARCH_EDGE_CAP`] edges.
pub fn switch_equivalent(q: &QuotientGraph, o1: &Orientation, o2: &Orientation) -> Option<bool> {
    if q.simple_edges().len() > SWITCH_SEARCH_EDGE_CAP {
        return None;
    }
    let all = VertexSet::full(q.blocks());
    let mut seen: HashSet<Orientation> = HashSet::from([o1.clone()]);
    let mut queue = VecDeque::from([o1.clone()]);
    while let Some(o) = queue.pop_front() {
        if &o == o2 {
            return Some(true);
        }
        for a in all.subsets() {
            if a.is_empty() || a == all || !a.contains(0) || !is_critical(q, &o, a) {
                continue;
            }
            let next = switch(q, &o, a).expect("critical");
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Some(false)
}

/// Compares `f(o1)` and `f(o2)` in the class group.
pub fn divisor_equivalent(
    g: &Multigraph,
    p: &ConnectedPartition,
    o1: &Orientation,
    o2: &Orientation,
) -> bool {
    equivalent(g, &f_map(g, p, o1), &f_map(g, p, o2))
}

/// Orientation equivalence, decided through divisor classes and, on small
/// quotients, cross-checked by the switch search.
pub fn orientations_equivalent(
    g: &Multigraph,
    p: &ConnectedPartition,
    o1: &Orientation,
    o2: &Orientation,
) -> Result<bool> {
    let by_class = divisor_equivalent(g, p, o1, o2);
    if let Some(by_switch) = switch_equivalent(&quotient(g, p), o1, o2) {
        if by_switch != by_class {
            return Err(Error::ConstructionFailed(format!(
                "switch search says {by_switch}, divisor classes say {by_class}"
            )));
        }
    }
    Ok(by_class)
}
