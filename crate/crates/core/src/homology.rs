//! Simplicial complexes of linear systems, reduced homology over the
//! rationals, fine and coarse Betti numbers, splittings and cut recovery.
//!
//! Faces are vertex sets listed in ascending vertex order, and the boundary
//! of `[i_1, ..., i_k]` is `sum_j (-1)^(j-1) [..., i_j omitted, ...]`. The
//! chain complex is augmented: the empty face spans degree `-1`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::divisor::{
    dhar_unburnt, enumerate_superstables, equivalence_script, equivalent, fire_set,
    linear_system, linear_systems_of_degree, q_reduce, Divisor, DEFAULT_SINK,
};
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::linalg::rank;
use crate::partition::ConnectedPartition;
use crate::set::VertexSet;

/// A complex stored by its facets. No facets at all is the void complex;
/// a single empty facet is `{∅}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    facets: Vec<VertexSet>,
}

impl SimplicialComplex {
    /// Keeps the inclusion-maximal sets, sorted.
    pub fn from_sets<I: IntoIterator<Item = VertexSet>>(sets: I) -> Self {
        let all: BTreeSet<VertexSet> = sets.into_iter().collect();
        let facets = all
            .iter()
            .copied()
            .filter(|s| !all.iter().any(|t| t != s && s.is_subset(*t)))
            .collect();
        SimplicialComplex { facets }
    }

    pub fn void() -> Self {
        SimplicialComplex { facets: Vec::new() }
    }

    pub fn facets(&self) -> &[VertexSet] {
        &self.facets
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains(&self, face: VertexSet) -> bool {
        self.facets.iter().any(|f| face.is_subset(*f))
    }

    pub fn vertices(&self) -> VertexSet {
        self.facets.iter().fold(VertexSet::EMPTY, |a, &f| a.union(f))
    }

    /// Faces with `dim + 1` vertices, ascending. Dimension `-1` is the empty face.
    pub fn faces(&self, dim: i64) -> Vec<VertexSet> {
        let size = dim + 1;
        if size < 0 {
            return Vec::new();
        }
        let size = size as usize;
        let mut out: BTreeSet<VertexSet> = BTreeSet::new();
        for f in &self.facets {
            if f.len() >= size {
                out.extend(f.subsets().filter(|s| s.len() == size));
            }
        }
        out.into_iter().collect()
    }

    pub fn dimension(&self) -> i64 {
        self.facets.iter().map(|f| f.len() as i64 - 1).max().unwrap_or(-2)
    }

    /// Connected components of the vertex set.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut comps: Vec<VertexSet> = Vec::new();
        for &f in &self.facets {
            if f.is_empty() {
                continue;
            }
            let mut merged = f;
            comps.retain(|&c| {
                if c.is_disjoint(f) {
                    true
                } else {
                    merged = merged.union(c);
                    false
                }
            });
            comps.push(merged);
        }
        comps.sort();
        comps
    }
}

/// Sign and face of each term of the boundary of `face`.
pub fn face_boundary(face: VertexSet) -> impl Iterator<Item = (i64, VertexSet)> {
    face.iter()
        .enumerate()
        .map(move |(j, v)| (if j % 2 == 0 { 1 } else { -1 }, face.without(v)))
}

/// The boundary map from `dim`-faces to `(dim-1)`-faces, one column per
/// `dim`-face (each inner vector is a column).
pub fn boundary_columns(cx: &SimplicialComplex, dim: i64) -> Vec<Vec<i64>> {
    let lower = cx.faces(dim - 1);
    let index: BTreeMap<VertexSet, usize> =
        lower.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    cx.faces(dim)
        .into_iter()
        .map(|f| {
            let mut col = vec![0; lower.len()];
            for (s, face) in face_boundary(f) {
                col[index[&face]] += s;
            }
            col
        })
        .collect()
}

/// `dim H̃_i` for `i = -1, 0, ..., max_dim` (entry 0 is degree -1).
pub fn reduced_homology_dims(cx: &SimplicialComplex, max_dim: i64) -> Vec<usize> {
    let top = max_dim.max(-1);
    // ranks[i + 1] = rank of the boundary out of degree i; degree -1 maps to 0.
    let ranks: Vec<usize> = (-1..=top + 1)
        .map(|i| if i <= -1 { 0 } else { rank(&boundary_columns(cx, i)) })
        .collect();
    (-1..=top)
        .map(|i| {
            let chains = cx.faces(i).len();
            let idx = (i + 1) as usize;
            chains - ranks[idx] - ranks[idx + 1]
        })
        .collect()
}

/// The complex of supports of members of `|D|`.
pub fn complex_of_divisor(g: &Multigraph, d: &Divisor) -> SimplicialComplex {
    complex_of_members(&linear_system(g, d))
}

pub fn complex_of_members(members: &[Divisor]) -> SimplicialComplex {
    SimplicialComplex::from_sets(members.iter().map(|m| m.support()))
}

/// `beta_{k,D} = dim H̃_{k-1}(Δ_D)`.
pub fn betti_kd(g: &Multigraph, d: &Divisor, k: usize) -> usize {
    assert!(k >= 1, "k must be at least 1");
    let dims = reduced_homology_dims(&complex_of_divisor(g, d), k as i64 - 1);
    dims[k]
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClassBetti {
    #[serde(skip)]
    pub divisor: Divisor,
    pub reduced: String,
    pub degree: i64,
    pub betti: BTreeMap<usize, usize>,
}

/// Fine Betti numbers of the classes where some requested `k` is nonzero,
/// and their sums.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BettiReport {
    pub classes: Vec<ClassBetti>,
    pub coarse: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Scans one representative `c + (d - deg c) 1_q` per superstable `c` at
/// `sink` and degree `d` in `window`, and sums `beta_{k,D}` over them.
pub fn coarse_betti(
    g: &Multigraph,
    ks: RangeInclusive<usize>,
    window: RangeInclusive<i64>,
    sink: usize,
) -> BettiReport {
    assert!(*ks.start() >= 1 && !ks.is_empty(), "k range must be nonempty and start at 1 or more");
    assert!(!window.is_empty(), "degree window must be nonempty");
    let superstables = enumerate_superstables(g, sink);
    let top = *ks.end() as i64 - 1;
    let degrees: Vec<i64> = window.clone().filter(|&d| d >= 0).collect();
    let per_degree: Vec<Vec<ClassBetti>> = degrees
        .par_iter()
        .map(|&deg| {
            let systems = linear_systems_of_degree(g, deg);
            superstables
                .iter()
                .filter(|c| c.degree() <= deg)
                .filter_map(|c| {
                    let rep = c.with_added(sink, deg - c.degree());
                    let members = systems.get(&q_reduce(g, &rep, DEFAULT_SINK))?;
                    let dims = reduced_homology_dims(&complex_of_members(members), top);
                    let betti: BTreeMap<usize, usize> =
                        ks.clone().map(|k| (k, dims[k])).collect();
                    betti.values().any(|&b| b > 0).then(|| ClassBetti {
                        reduced: rep.display(g),
                        divisor: rep,
                        degree: deg,
                        betti,
                    })
                })
                .collect()
        })
        .collect();
    let classes: Vec<ClassBetti> = per_degree.into_iter().flatten().collect();
    let coarse = ks
        .clone()
        .map(|k| (k, classes.iter().map(|c| c.betti[&k]).sum()))
        .collect();
    let mut warnings = Vec::new();
    for edge in [*window.start(), *window.end()] {
        if edge == 0 && edge == *window.start() {
            continue;
        }
        if classes.iter().any(|c| c.degree == edge) {
            warnings.push(format!(
                "nonzero Betti numbers at degree {edge}, an endpoint of the scan window"
            ));
        }
    }
    warnings.dedup();
    BettiReport { classes, coarse, warnings }
}

/// The default scan window `[0, #E]`.
pub fn default_window(g: &Multigraph) -> RangeInclusive<i64> {
    0..=g.edge_count() as i64
}

/// A bipartition of a linear system along components of its complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub a: Vec<Divisor>,
    pub b: Vec<Divisor>,
}

/// Members of `|D|` grouped by the component of `Δ_D` holding their support.
pub fn composing_divisors(g: &Multigraph, d: &Divisor) -> Vec<Vec<Divisor>> {
    let members = linear_system(g, d);
    let cx = complex_of_members(&members);
    cx.components()
        .into_iter()
        .map(|comp| {
            members
                .iter()
                .filter(|m| !m.support().is_empty() && m.support().is_subset(comp))
                .cloned()
                .collect()
        })
        .collect()
}

/// Every splitting of `|D|`. Side `a` holds the component of the least member.
pub fn splittings(g: &Multigraph, d: &Divisor) -> Vec<Splitting> {
    let mut groups = composing_divisors(g, d);
    groups.sort();
    let c = groups.len();
    if c < 2 {
        return Vec::new();
    }
    // Bit i of the mask puts group i + 1 on side `a`; group 0 always is.
    (0..(1u64 << (c - 1)) - 1)
        .map(|mask| {
            let mut a = groups[0].clone();
            let mut b = Vec::new();
            for (i, grp) in groups.iter().enumerate().skip(1) {
                if mask >> (i - 1) & 1 == 1 {
                    a.extend(grp.iter().cloned());
                } else {
                    b.extend(grp.iter().cloned());
                }
            }
            a.sort();
            b.sort();
            Splitting { a, b }
        })
        .collect()
}

/// A cut recovered from a splitting, with the consecutive members whose
/// supports sit on its two sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredCut {
    pub cut: ConnectedPartition,
    pub before: Divisor,
    pub after: Divisor,
}

/// Walks Dhar firings from a member on one side of the splitting toward the
/// reduced member, stops at the first step that crosses sides and returns
/// the cut formed by the edges between the two supports. The cut is checked
/// to be connected on both sides and to have boundary divisors equivalent to
/// `D`.
pub fn cut_from_splitting(g: &Multigraph, d: &Divisor, split: &Splitting) -> Result<RecoveredCut> {
    let (Some(da), Some(db)) = (split.a.first(), split.b.first()) else {
        return Err(Error::InvalidSplitting("both sides must be nonempty".into()));
    };
    let sigma = equivalence_script(g, da, db)
        .ok_or_else(|| Error::InvalidSplitting("sides are not linearly equivalent".into()))?;
    let sink = (0..g.n())
        .find(|&v| !sigma.support().contains(v))
        .expect("a normalized script vanishes somewhere");
    let reduced = q_reduce(g, da, sink);
    let reduced_in_a = split.a.contains(&reduced);
    if !reduced_in_a && !split.b.contains(&reduced) {
        return Err(Error::InvalidSplitting("sides do not cover the linear system".into()));
    }
    let (start_side, end_side) = if reduced_in_a { (&split.b, &split.a) } else { (&split.a, &split.b) };
    let mut cur = start_side[0].clone();
    let next = loop {
        let unburnt = dhar_unburnt(g, &cur, sink)?;
        if unburnt.is_empty() {
            return Err(Error::ConstructionFailed(
                "reached the reduced divisor without changing sides".into(),
            ));
        }
        let next = fire_set(g, &cur, unburnt);
        if end_side.contains(&next) {
            break next;
        }
        if !start_side.contains(&next) {
            return Err(Error::ConstructionFailed(
                "a Dhar step left the linear system".into(),
            ));
        }
        cur = next;
    };
    let (s_t, s_next) = (cur.support(), next.support());
    if !s_t.is_disjoint(s_next) {
        return Err(Error::ConstructionFailed("consecutive supports overlap".into()));
    }
    // Delete the edges between the two supports and take the side of S_t.
    let side = component_avoiding(g, s_t, s_next);
    if !s_next.is_disjoint(side) {
        return Err(Error::ConstructionFailed("removing the edges does not separate".into()));
    }
    let cut = ConnectedPartition::cut(g, side)
        .map_err(|e| Error::ConstructionFailed(format!("recovered sets are not a cut: {e}")))?;
    let other = g.all().difference(side);
    let removed = g.edges_between(s_t, s_next);
    if g.edges_between(side, other) != removed {
        return Err(Error::ConstructionFailed("cut edges differ from the deleted edges".into()));
    }
    let boundary: Divisor = Divisor(
        (0..g.n())
            .map(|v| if other.contains(v) { g.crossing_degree_unchecked(side, other, v) } else { 0 })
            .collect(),
    );
    if !equivalent(g, &boundary, d) {
        return Err(Error::ConstructionFailed("boundary divisor of the cut is not equivalent".into()));
    }
    Ok(RecoveredCut { cut, before: cur, after: next })
}

/// Vertices reachable from `from` without using an edge between `from` and `to`.
fn component_avoiding(g: &Multigraph, from: VertexSet, to: VertexSet) -> VertexSet {
    let mut seen = from;
    let mut stack: Vec<usize> = from.iter().collect();
    while let Some(u) = stack.pop() {
        for &(w, _) in g.adjacency(u) {
            let crossing = (from.contains(u) && to.contains(w)) || (to.contains(u) && from.contains(w));
            if !crossing && !seen.contains(w) {
                seen = seen.with(w);
                stack.push(w);
            }
        }
    }
    seen
}
