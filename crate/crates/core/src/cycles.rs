//! Extension cycles, boundary complexes of partitions, and the witness cycle
//! that certifies a nonzero Betti number for boundary divisors of
//! multi-edged trees.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::divisor::{equivalent, Divisor};
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::homology::{boundary_columns, complex_of_divisor, face_boundary, SimplicialComplex};
use crate::linalg::in_column_span;
use crate::orientation::{canonical_source, enumerate_acyclic_orientations, f_map};
use crate::partition::{boundary_set, quotient, ConnectedPartition};
use crate::set::VertexSet;

/// A formal integer combination of faces of one dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedChain {
    terms: BTreeMap<VertexSet, i64>,
}

impl SignedChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, face: VertexSet, coeff: i64) {
        if let Some(size) = self.terms.keys().next().map(|f| f.len()) {
            assert_eq!(size, face.len(), "chain faces must share a dimension");
        }
        let entry = self.terms.entry(face).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&face);
        }
    }

    pub fn coefficient(&self, face: VertexSet) -> i64 {
        self.terms.get(&face).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (VertexSet, i64)> + '_ {
        self.terms.iter().map(|(&f, &c)| (f, c))
    }

    pub fn support(&self) -> Vec<VertexSet> {
        self.terms.keys().copied().collect()
    }

    /// Coefficients listed against `faces` (zero where absent).
    pub fn to_vector(&self, faces: &[VertexSet]) -> Vec<i64> {
        faces.iter().map(|&f| self.coefficient(f)).collect()
    }

    /// Terms as `+[2,4,5,6] -[2,3,4,5]`, faces in lexicographic order of
    /// their vertex lists.
    pub fn display_with(&self, name: impl Fn(usize) -> String) -> String {
        let mut faces: Vec<(Vec<usize>, i64)> =
            self.terms.iter().map(|(f, &c)| (f.iter().collect(), c)).collect();
        faces.sort();
        let mut out = String::new();
        for (i, (verts, c)) in faces.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push(if *c < 0 { '-' } else { '+' });
            if c.abs() != 1 {
                let _ = write!(out, "{}", c.abs());
            }
            let names: Vec<String> = verts.iter().map(|&v| name(v)).collect();
            let _ = write!(out, "[{}]", names.join(","));
        }
        out
    }

    pub fn display(&self, g: &Multigraph) -> String {
        self.display_with(|v| g.name(v).to_string())
    }
}

/// The boundary map extended linearly, with the empty face in degree -1.
pub fn boundary_of_chain(chain: &SignedChain) -> SignedChain {
    let mut out = SignedChain::new();
    for (face, c) in chain.terms() {
        if face.is_empty() {
            continue;
        }
        for (s, child) in face_boundary(face) {
            out.add(child, s * c);
        }
    }
    out
}

/// Base `[1..k]` with extension vertex `e[j-1]` for base vertex `j`.
/// Extension labels lie in `k+1..=2k` and never increase with `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    e: Vec<usize>,
}

/// A spec built from arbitrary extension keys, with the maps back to them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling<K> {
    pub spec: ExtensionSpec,
    /// `base_order[j - 1]` is the input position assigned to base vertex `j`.
    pub base_order: Vec<usize>,
    /// `extension_keys[i]` is the key behind label `k + 1 + i`.
    pub extension_keys: Vec<K>,
}

impl ExtensionSpec {
    pub fn new(e: Vec<usize>) -> Result<Self> {
        let k = e.len();
        if k == 0 || 2 * k >= 64 {
            return Err(Error::InvalidSpec(format!("base size {k} is out of range")));
        }
        if let Some(bad) = e.iter().find(|&&x| x <= k || x > 2 * k) {
            return Err(Error::InvalidSpec(format!(
                "extension label {bad} is outside {}..={}",
                k + 1,
                2 * k
            )));
        }
        if e.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec(
                "extension labels must not increase along the base".into(),
            ));
        }
        Ok(ExtensionSpec { e })
    }

    /// Orders base positions by decreasing key and labels distinct keys
    /// `k+1, k+2, ...` in increasing order, so the result is a valid spec.
    pub fn relabel<K: Ord + Clone>(keys: &[K]) -> Result<Relabeling<K>> {
        let k = keys.len();
        let mut distinct: Vec<K> = keys.to_vec();
        distinct.sort();
        distinct.dedup();
        let label = |key: &K| k + 1 + distinct.binary_search(key).expect("present");
        let mut base_order: Vec<usize> = (0..k).collect();
        base_order.sort_by(|&x, &y| keys[y].cmp(&keys[x]).then(x.cmp(&y)));
        let e = base_order.iter().map(|&p| label(&keys[p])).collect();
        Ok(Relabeling {
            spec: ExtensionSpec::new(e)?,
            base_order,
            extension_keys: distinct,
        })
    }

    pub fn k(&self) -> usize {
        self.e.len()
    }

    pub fn extension(&self, j: usize) -> usize {
        self.e[j - 1]
    }

    /// Index sets (as bitmasks over `1..=k`) whose extension labels are
    /// pairwise distinct.
    pub fn admissible_sets(&self) -> Vec<VertexSet> {
        let base = VertexSet::from_indices(1..=self.k());
        base.subsets()
            .filter(|j| {
                let labels: VertexSet = j.iter().map(|i| self.e[i - 1]).collect();
                labels.len() == j.len()
            })
            .collect()
    }

    /// `(-1)^(j-1+k)` for a single index, multiplied over `set`.
    pub fn sign(&self, set: VertexSet) -> i64 {
        set.iter()
            .map(|j| if (j - 1 + self.k()).is_multiple_of(2) { 1 } else { -1 })
            .product()
    }

    /// `(B \ J)` together with the extension labels of `J`.
    pub fn face(&self, set: VertexSet) -> VertexSet {
        let base = VertexSet::from_indices(1..=self.k()).difference(set);
        set.iter().fold(base, |f, j| f.with(self.e[j - 1]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleFace {
    pub index_set: VertexSet,
    pub face: VertexSet,
    pub sign: i64,
}

impl CycleFace {
    /// 0 for the base, 1 for extensions, higher for roofs.
    pub fn layer(&self) -> usize {
        self.index_set.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCycle {
    pub faces: Vec<CycleFace>,
}

impl ExtensionCycle {
    pub fn chain(&self) -> SignedChain {
        let mut c = SignedChain::new();
        for f in &self.faces {
            c.add(f.face, f.sign);
        }
        c
    }

    pub fn layer(&self, l: usize) -> Vec<VertexSet> {
        self.faces.iter().filter(|f| f.layer() == l).map(|f| f.face).collect()
    }
}

/// The signed family `sum_J eps_J A_J` over admissible `J`.
pub fn extension_cycle(spec: &ExtensionSpec) -> ExtensionCycle {
    let mut faces: Vec<CycleFace> = spec
        .admissible_sets()
        .into_iter()
        .map(|j| CycleFace { index_set: j, face: spec.face(j), sign: spec.sign(j) })
        .collect();
    faces.sort_by_key(|f| (f.layer(), f.index_set));
    ExtensionCycle { faces }
}

/// A face with one vertex in each block other than `pi1` and none in `pi1`.
pub fn is_essential(face: VertexSet, p: &ConnectedPartition, pi1: usize) -> bool {
    face.len() + 1 == p.len()
        && p.blocks().iter().enumerate().all(|(i, b)| {
            let hit = b.intersection(face).len();
            if i == pi1 {
                hit == 0
            } else {
                hit == 1
            }
        })
}

/// Each block mapped to its neighbour one step closer to `pi1` in the
/// quotient tree; `pi1` maps to itself.
pub fn t_map(g: &Multigraph, p: &ConnectedPartition, pi1: usize) -> Result<Vec<usize>> {
    if !g.is_multi_edged_tree() {
        return Err(Error::NotATree);
    }
    let q = quotient(g, p);
    let mut parent = vec![usize::MAX; p.len()];
    parent[pi1] = pi1;
    let mut queue = VecDeque::from([pi1]);
    while let Some(b) = queue.pop_front() {
        for nb in q.block_neighbors(b).iter() {
            if parent[nb] == usize::MAX {
                parent[nb] = b;
                queue.push_back(nb);
            }
        }
    }
    Ok(parent)
}

/// Supports of `f(o)` over acyclic orientations `o` with `f(o) ~ D`.
pub fn boundary_complex(
    g: &Multigraph,
    p: &ConnectedPartition,
    d: &Divisor,
) -> Result<SimplicialComplex> {
    let q = quotient(g, p);
    let supports: Vec<VertexSet> = enumerate_acyclic_orientations(&q)
        .iter()
        .map(|o| f_map(g, p, o))
        .filter(|fo| equivalent(g, fo, d))
        .map(|fo| fo.support())
        .collect();
    if supports.is_empty() {
        return Err(Error::NotBoundaryDivisor);
    }
    Ok(SimplicialComplex::from_sets(supports))
}

/// The witness cycle with its pieces and the homology certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeWitness {
    pub chain: SignedChain,
    pub base: VertexSet,
    pub extensions: Vec<VertexSet>,
    pub roofs: Vec<VertexSet>,
    /// The chain is not the boundary of any chain of one dimension higher in
    /// the complex of `D`.
    pub not_a_boundary: bool,
}

/// Witness cycle with the block holding vertex 0 as the distinguished block.
pub fn tree_witness_cycle(g: &Multigraph, p: &ConnectedPartition, d: &Divisor) -> Result<TreeWitness> {
    tree_witness_cycle_from(g, p, d, canonical_source(p))
}

/// Base vertex `b_j` is the least vertex of block `j` adjacent to `T(j)`.
/// Extension vertex `e_j` is the least vertex of `B(T^(m+1)(j), T^m(j))`
/// outside the base, for the least `m` where that set is nonempty.
pub fn tree_witness_cycle_from(
    g: &Multigraph,
    p: &ConnectedPartition,
    d: &Divisor,
    pi1: usize,
) -> Result<TreeWitness> {
    let t = t_map(g, p, pi1)?;
    let boundary_cx = boundary_complex(g, p, d)?;
    let others: Vec<usize> = (0..p.len()).filter(|&j| j != pi1).collect();
    let mut base_vertices = Vec::with_capacity(others.len());
    for &j in &others {
        let b = boundary_set(g, p, j, VertexSet::singleton(t[j]))?
            .first()
            .ok_or_else(|| Error::ConstructionFailed(format!("block {j} has no boundary")))?;
        base_vertices.push(b);
    }
    let base: VertexSet = base_vertices.iter().copied().collect();
    let mut ext = Vec::with_capacity(others.len());
    for &j in &others {
        let mut cur = j;
        let e = loop {
            let up = t[cur];
            if up == cur {
                return Err(Error::ConstructionFailed(format!(
                    "no extension vertex found for block {j}"
                )));
            }
            let cand = boundary_set(g, p, up, VertexSet::singleton(cur))?.difference(base);
            if let Some(e) = cand.first() {
                break e;
            }
            cur = up;
        };
        ext.push(e);
    }

    let relabel = ExtensionSpec::relabel(&ext)?;
    let cycle = extension_cycle(&relabel.spec);
    let k = relabel.spec.k();
    let concrete = |label: usize| -> usize {
        if label <= k {
            base_vertices[relabel.base_order[label - 1]]
        } else {
            relabel.extension_keys[label - k - 1]
        }
    };
    let mut chain = SignedChain::new();
    let (mut extensions, mut roofs) = (Vec::new(), Vec::new());
    for f in &cycle.faces {
        let verts: Vec<usize> = f.face.iter().map(concrete).collect();
        let face: VertexSet = verts.iter().copied().collect();
        if face.len() != verts.len() {
            return Err(Error::ConstructionFailed("relabeled face repeats a vertex".into()));
        }
        if !boundary_cx.contains(face) {
            return Err(Error::ConstructionFailed(format!(
                "face {} is missing from the boundary complex",
                g.format_set(face)
            )));
        }
        chain.add(face, f.sign * permutation_sign(&verts));
        match f.layer() {
            0 => {}
            1 => extensions.push(face),
            _ => roofs.push(face),
        }
    }
    if !boundary_of_chain(&chain).is_zero() {
        return Err(Error::ConstructionFailed("witness chain is not a cycle".into()));
    }
    let essential: Vec<VertexSet> =
        chain.support().into_iter().filter(|&f| is_essential(f, p, pi1)).collect();
    if essential != vec![base] {
        return Err(Error::ConstructionFailed(
            "the base is not the only essential face".into(),
        ));
    }
    let not_a_boundary = !is_boundary(&complex_of_divisor(g, d), &chain)?;
    Ok(TreeWitness { chain, base, extensions, roofs, not_a_boundary })
}

/// Whether `chain` lies in the image of the boundary map of `cx`, decided by
/// comparing ranks over the rationals.
pub fn is_boundary(cx: &SimplicialComplex, chain: &SignedChain) -> Result<bool> {
    let Some(dim) = chain.support().first().map(|f| f.len() as i64 - 1) else {
        return Ok(true);
    };
    let faces = cx.faces(dim);
    if let Some(f) = chain.support().into_iter().find(|f| !cx.contains(*f)) {
        return Err(Error::ConstructionFailed(format!("face {f:?} is not in the complex")));
    }
    Ok(in_column_span(&boundary_columns(cx, dim + 1), &chain.to_vector(&faces)))
}

/// Sign of the permutation sorting `verts`.
fn permutation_sign(verts: &[usize]) -> i64 {
    let inversions = (0..verts.len())
        .flat_map(|i| (i + 1..verts.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| verts[i] > verts[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_graph;
    use crate::homology::betti_kd;
    use crate::orientation::Orientation;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_indices(v.iter().copied())
    }

    fn tree() -> (Multigraph, ConnectedPartition) {
        let g = load_graph("1 2\n2 3 3\n2 4\n3 5\n5 6").unwrap();
        let p = ConnectedPartition::parse(&g, "{1}|{2,3}|{4}|{5}|{6}").unwrap();
        (g, p)
    }

    /// Vertex names of the tree are `1..=6` at indices `0..=5`.
    fn named(v: &[usize]) -> VertexSet {
        v.iter().map(|x| x - 1).collect()
    }

    #[test]
    fn chain_boundaries() {
        let mut edge = SignedChain::new();
        edge.add(set(&[1, 2]), 1);
        let b = boundary_of_chain(&edge);
        assert_eq!(b.coefficient(set(&[2])), 1);
        assert_eq!(b.coefficient(set(&[1])), -1);
        assert!(boundary_of_chain(&b).is_zero());
        let mut tet = SignedChain::new();
        tet.add(set(&[0, 1, 2, 3]), 1);
        assert!(boundary_of_chain(&boundary_of_chain(&tet)).is_zero());
        assert_eq!(b.display_with(|v| v.to_string()), "-[1] +[2]");
    }

    #[test]
    fn rejects_increasing_extensions() {
        assert!(ExtensionSpec::new(vec![4, 5, 6]).is_err());
        assert!(ExtensionSpec::new(vec![3, 4]).is_err());
        assert!(ExtensionSpec::new(vec![4, 4, 4]).is_ok());
        let r = ExtensionSpec::relabel(&[7usize, 9, 7]).unwrap();
        assert_eq!(r.spec, ExtensionSpec::new(vec![5, 4, 4]).unwrap());
        assert_eq!(r.base_order, vec![1, 0, 2]);
        assert_eq!(r.extension_keys, vec![7, 9]);
    }

    #[test]
    fn single_extension_vertex() {
        let spec = ExtensionSpec::new(vec![4, 4, 4]).unwrap();
        let cycle = extension_cycle(&spec);
        assert_eq!(cycle.faces.len(), 4);
        assert_eq!(cycle.layer(0), vec![set(&[1, 2, 3])]);
        assert_eq!(cycle.layer(1).len(), 3);
        assert!(boundary_of_chain(&cycle.chain()).is_zero());
    }

    #[test]
    fn two_extension_vertices() {
        let spec = ExtensionSpec::new(vec![5, 5, 4]).unwrap();
        let cycle = extension_cycle(&spec);
        assert_eq!(cycle.faces.len(), 6);
        assert_eq!(cycle.layer(2), vec![set(&[2, 4, 5]), set(&[1, 4, 5])]);
        assert!(boundary_of_chain(&cycle.chain()).is_zero());
    }

    #[test]
    fn degree_zero_cycle() {
        let spec = ExtensionSpec::new(vec![2]).unwrap();
        let chain = extension_cycle(&spec).chain();
        assert_eq!(chain.coefficient(set(&[1])), 1);
        assert_eq!(chain.coefficient(set(&[2])), -1);
        assert!(boundary_of_chain(&chain).is_zero());
    }

    #[test]
    fn essential_faces() {
        let (_, p) = tree();
        assert!(is_essential(named(&[2, 4, 5, 6]), &p, 0));
        assert!(!is_essential(named(&[1, 4, 5, 6]), &p, 0));
        assert!(!is_essential(named(&[2, 3, 4, 5]), &p, 0));
    }

    #[test]
    fn t_map_on_tree() {
        let (g, p) = tree();
        assert_eq!(t_map(&g, &p, 0).unwrap(), vec![0, 0, 1, 1, 3]);
        let cycle = load_graph("a b\nb c\nc a").unwrap();
        let cp = ConnectedPartition::singletons(&cycle);
        assert_eq!(t_map(&cycle, &cp, 0), Err(Error::NotATree));
        let path = load_graph("a b 2\nb c").unwrap();
        let cut = ConnectedPartition::parse(&path, "{a}|{b,c}").unwrap();
        assert_eq!(t_map(&path, &cut, 1).unwrap(), vec![1, 1]);
    }

    #[test]
    fn tree_boundary_complex() {
        let (g, p) = tree();
        let d = Divisor(vec![0, 1, 0, 1, 1, 1]);
        let cx = boundary_complex(&g, &p, &d).unwrap();
        assert!(cx.contains(named(&[2, 4, 5, 6])));
        assert!(cx.contains(named(&[1, 3, 4, 6])));
        let dd = complex_of_divisor(&g, &d);
        assert!(cx.facets().iter().all(|&f| dd.contains(f)));
        assert_eq!(boundary_complex(&g, &p, &Divisor(vec![9, 0, 0, 0, 0, 0])), Err(Error::NotBoundaryDivisor));
    }

    #[test]
    fn worked_tree_witness() {
        let (g, p) = tree();
        let q = quotient(&g, &p);
        let o = Orientation::parse(&g, &q, "{1}->{2,3},{2,3}->{4},{2,3}->{5},{5}->{6}").unwrap();
        let d = f_map(&g, &p, &o);
        let w = tree_witness_cycle(&g, &p, &d).unwrap();
        assert_eq!(w.base, named(&[2, 4, 5, 6]));
        let mut ext = w.extensions.clone();
        ext.sort();
        let mut want = vec![named(&[2, 3, 4, 5]), named(&[2, 3, 4, 6]), named(&[1, 2, 5, 6]), named(&[1, 4, 5, 6])];
        want.sort();
        assert_eq!(ext, want);
        let mut roofs = w.roofs.clone();
        roofs.sort();
        let mut want = vec![named(&[1, 2, 3, 5]), named(&[1, 3, 4, 5]), named(&[1, 2, 3, 6]), named(&[1, 3, 4, 6])];
        want.sort();
        assert_eq!(roofs, want);
        assert_eq!(w.chain.len(), 9);
        assert!(boundary_of_chain(&w.chain).is_zero());
        assert!(w.not_a_boundary);
        assert!(betti_kd(&g, &d, 4) >= 1);
    }

    #[test]
    fn single_cut_witness() {
        let g = load_graph("a b 3").unwrap();
        let p = ConnectedPartition::singletons(&g);
        let w = tree_witness_cycle(&g, &p, &Divisor(vec![0, 3])).unwrap();
        assert_eq!(w.chain.display(&g), "-[a] +[b]");
        assert!(w.not_a_boundary);
    }
}
