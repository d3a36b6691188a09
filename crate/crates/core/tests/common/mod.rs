//! Seeded generators shared by the integration suites.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toppling::partition::{enumerate_connected_partitions, ConnectedPartition};
use toppling::Multigraph;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn name(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

/// A random spanning tree plus `extra` random edges, multiplicities in
/// `1..=max_mult`.
pub fn random_multigraph(rng: &mut TestRng, n: usize, extra: usize, max_mult: u64) -> Multigraph {
    let mut edges: Vec<(String, String, u64)> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((name(parent), name(order[i]), rng.gen_range(1..=max_mult)));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((name(u), name(v), rng.gen_range(1..=max_mult)));
        }
    }
    Multigraph::new(&edges).expect("spanning tree keeps it connected")
}

/// A random multi-edged tree on `n` vertices.
pub fn random_tree(rng: &mut TestRng, n: usize, max_mult: u64) -> Multigraph {
    random_multigraph(rng, n, 0, max_mult)
}

/// A uniformly chosen connected partition with `parts` blocks, if any exists.
pub fn random_partition(rng: &mut TestRng, g: &Multigraph, parts: usize) -> Option<ConnectedPartition> {
    enumerate_connected_partitions(g, parts).choose(rng).cloned()
}
