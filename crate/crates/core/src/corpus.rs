//! Exhaustive enumeration of small connected multigraphs up to isomorphism.

use std::collections::BTreeSet;

use crate::graph::Multigraph;

/// Multiplicities on the pairs `(i, j)`, `i < j`, in lexicographic order.
type PairCounts = Vec<u64>;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn is_connected(n: usize, pairs: &[(usize, usize)], counts: &[u64]) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for (&(a, b), &m) in pairs.iter().zip(counts) {
            if m == 0 {
                continue;
            }
            let w = if a == u { b } else if b == u { a } else { continue };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// The lexicographically largest relabeling of `counts`.
fn canonical(pairs: &[(usize, usize)], counts: &[u64], perms: &[Vec<usize>]) -> PairCounts {
    let index = |a: usize, b: usize| {
        let (a, b) = (a.min(b), a.max(b));
        pairs.iter().position(|&p| p == (a, b)).expect("pair")
    };
    perms
        .iter()
        .map(|perm| {
            let mut out = vec![0; counts.len()];
            for (&(a, b), &m) in pairs.iter().zip(counts) {
                out[index(perm[a], perm[b])] = m;
            }
            out
        })
        .max()
        .expect("at least the identity permutation")
}

/// One representative per isomorphism class of connected loopless
/// multigraphs with `2..=max_n` vertices and total multiplicity at most
/// `max_total`. Vertices are named `a`, `b`, ...
pub fn connected_multigraphs(max_n: usize, max_total: u64) -> Vec<Multigraph> {
    assert!(max_n <= 26, "vertex names run out past 26");
    let mut out = Vec::new();
    for n in 2..=max_n {
        let ps = pairs(n);
        let perms = permutations(n);
        let mut seen: BTreeSet<PairCounts> = BTreeSet::new();
        let mut counts = vec![0u64; ps.len()];
        'all: loop {
            if is_connected(n, &ps, &counts) {
                let key = canonical(&ps, &counts, &perms);
                if seen.insert(key.clone()) {
                    out.push(build(n, &ps, &key));
                }
            }
            // Odometer over multiplicity vectors within the budget.
            let mut i = 0;
            loop {
                if i == counts.len() {
                    break 'all;
                }
                counts[i] += 1;
                if counts.iter().sum::<u64>() <= max_total {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
        }
    }
    out
}

fn build(n: usize, pairs: &[(usize, usize)], counts: &[u64]) -> Multigraph {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let edges: Vec<(String, String, u64)> = pairs
        .iter()
        .zip(counts)
        .filter(|(_, &m)| m > 0)
        .map(|(&(a, b), &m)| (names[a].clone(), names[b].clone(), m))
        .collect();
    Multigraph::new(&edges).expect("connected by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        // Two vertices: one graph per multiplicity.
        assert_eq!(connected_multigraphs(2, 4).len(), 4);
        // Three vertices, simple: the path and the triangle.
        let simple: Vec<_> = connected_multigraphs(3, 3)
            .into_iter()
            .filter(|g| g.n() == 3 && g.edge_count() as usize == g.simple_edge_count())
            .collect();
        assert_eq!(simple.len(), 2);
        // Simple connected graphs on four vertices: 6 isomorphism classes.
        let four: Vec<_> = connected_multigraphs(4, 6)
            .into_iter()
            .filter(|g| g.n() == 4 && g.edge_count() as usize == g.simple_edge_count())
            .collect();
        assert_eq!(four.len(), 6);
    }
}
