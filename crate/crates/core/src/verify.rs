//! Both sides of the coarse Betti number identity: a homology scan on one
//! side, partitions and quotient parking functions on the other.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::divisor::enumerate_maximal_superstables;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::homology::{coarse_betti, BettiReport};
use crate::orientation::{canonical_source, enumerate_aus};
use crate::partition::{enumerate_connected_partitions, quotient, ConnectedPartition};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConjectureRow {
    pub k: usize,
    pub lhs: usize,
    pub rhs: usize,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PartitionCount {
    pub partition: String,
    pub maximal_superstables: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerificationReport {
    #[serde(flatten)]
    pub betti: BettiReport,
    pub conjecture: Vec<ConjectureRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<PartitionCount>,
}

impl VerificationReport {
    pub fn all_match(&self) -> bool {
        self.conjecture.iter().all(|r| r.matched)
    }
}

/// Maximal superstables of `G_Pi`, cross-checked against acyclic
/// orientations of the simple quotient with a fixed unique source.
pub fn quotient_parking_count(g: &Multigraph, p: &ConnectedPartition) -> Result<usize> {
    let q = quotient(g, p);
    let gp = q.to_multigraph(g)?;
    let maximal = enumerate_maximal_superstables(&gp, 0).len();
    let aus = enumerate_aus(&q, canonical_source(p)).len();
    if maximal != aus {
        return Err(Error::ConstructionFailed(format!(
            "{}: {maximal} maximal superstables but {aus} unique-source orientations",
            p.display(g)
        )));
    }
    Ok(maximal)
}

/// The sum over partitions into `k + 1` connected blocks.
pub fn partition_side(g: &Multigraph, k: usize) -> Result<(usize, Vec<PartitionCount>)> {
    let counts: Vec<PartitionCount> = enumerate_connected_partitions(g, k + 1)
        .par_iter()
        .map(|p| {
            Ok(PartitionCount {
                partition: p.display(g),
                maximal_superstables: quotient_parking_count(g, p)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok((counts.iter().map(|c| c.maximal_superstables).sum(), counts))
}

/// Compares the coarse `beta_k` from a homology scan with the partition sum
/// for every `k` in `ks`.
pub fn verify_wilmes(
    g: &Multigraph,
    ks: RangeInclusive<usize>,
    window: RangeInclusive<i64>,
    sink: usize,
    detail: bool,
) -> Result<VerificationReport> {
    let n = g.n();
    if *ks.start() < 1 || *ks.end() >= n || ks.is_empty() {
        return Err(Error::InvalidSpec(format!(
            "k range must lie within 1..={}",
            n - 1
        )));
    }
    if sink >= n {
        return Err(Error::UnknownVertex(sink.to_string()));
    }
    let betti = coarse_betti(g, ks.clone(), window, sink);
    let mut conjecture = Vec::new();
    let mut partitions = Vec::new();
    for k in ks {
        let (rhs, detail_rows) = partition_side(g, k)?;
        let lhs = betti.coarse[&k];
        conjecture.push(ConjectureRow { k, lhs, rhs, matched: lhs == rhs });
        if detail {
            partitions.extend(detail_rows);
        }
    }
    Ok(VerificationReport { betti, conjecture, partitions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_graph;
    use crate::homology::default_window;

    #[test]
    fn worked_example_matches() {
        let g = load_graph("a b 1\na c 1\nb c 2\nb d 1\nc d 3").unwrap();
        let r = verify_wilmes(&g, 1..=3, default_window(&g), 0, false).unwrap();
        assert!(r.all_match());
        assert_eq!(r.conjecture[0], ConjectureRow { k: 1, lhs: 6, rhs: 6, matched: true });
    }

    #[test]
    fn parallel_pair() {
        let g = load_graph("a b 5").unwrap();
        let r = verify_wilmes(&g, 1..=1, default_window(&g), 0, true).unwrap();
        assert_eq!(r.conjecture[0], ConjectureRow { k: 1, lhs: 1, rhs: 1, matched: true });
        assert_eq!(r.partitions.len(), 1);
    }

    #[test]
    fn rejects_bad_k() {
        let g = load_graph("a b 5").unwrap();
        assert!(verify_wilmes(&g, 1..=2, default_window(&g), 0, false).is_err());
    }
}
