mod common;

use common::{random_multigraph, random_partition, random_tree, rng, TestRng};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::seq::SliceRandom;
use rand::Rng;
use toppling::cycles::{
    boundary_of_chain, extension_cycle, is_boundary, is_essential, tree_witness_cycle_from,
    ExtensionSpec, SignedChain,
};
use toppling::divisor::{
    apply_script, enumerate_superstables, equivalence_script, is_superstable, q_reduce,
    reduce_with_script, Divisor, Script,
};
use toppling::homology::{
    betti_kd, coarse_betti, complex_of_divisor, cut_from_splitting, default_window, face_boundary,
    reduced_homology_dims, splittings, SimplicialComplex,
};
use toppling::orientation::{
    canonical_source, enumerate_acyclic_orientations, enumerate_aus, f_map, fire_blocks, pump_step,
    switch_equivalent, SWITCH_SEARCH_EDGE_CAP,
};
use toppling::partition::{cuts_intersect, enumerate_connected_partitions, generating_sequences, quotient};
use toppling::{Multigraph, VertexSet};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(20_240_611),
        failure_persistence: None,
        ..Config::default()
    }
}

fn graph(r: &mut TestRng, max_n: usize, max_mult: u64) -> Multigraph {
    let n = r.gen_range(2..=max_n);
    let extra = r.gen_range(0..=n);
    random_multigraph(r, n, extra, max_mult)
}

fn random_divisor(r: &mut TestRng, n: usize, lo: i64, hi: i64) -> Divisor {
    Divisor((0..n).map(|_| r.gen_range(lo..=hi)).collect())
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn reduction_is_superstable_and_class_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = graph(&mut r, 6, 3);
        let d = random_divisor(&mut r, g.n(), -4, 6);
        let q = r.gen_range(0..g.n());
        let red = reduce_with_script(&g, &d, q);
        prop_assert_eq!(&apply_script(&g, &d, &red.script), &red.divisor);
        let off_sink = red.divisor.with_added(q, -red.divisor.0[q]);
        prop_assert!(is_superstable(&g, &off_sink, q));
        let sigma = Script((0..g.n()).map(|_| r.gen_range(0..4)).collect());
        let moved = apply_script(&g, &d, &sigma);
        prop_assert_eq!(q_reduce(&g, &moved, q), red.divisor);
        let s = equivalence_script(&g, &d, &moved).expect("equivalent");
        prop_assert_eq!(apply_script(&g, &d, &s), moved);
        prop_assert_eq!(s.0.iter().min().copied(), Some(0));
    }

    #[test]
    fn superstable_count_ignores_sink(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = graph(&mut r, 5, 3);
        let counts: Vec<usize> = (0..g.n()).map(|q| enumerate_superstables(&g, q).len()).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn boundary_squares_to_zero(bits in 1u64..(1 << 10)) {
        let mut c = SignedChain::new();
        c.add(VertexSet(bits), 1);
        prop_assert!(boundary_of_chain(&boundary_of_chain(&c)).is_zero());
    }

    #[test]
    fn extension_faces_pair_up(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = r.gen_range(1..=6);
        let mut e: Vec<usize> = (0..k).map(|_| r.gen_range(k + 1..=2 * k)).collect();
        e.sort_by(|a, b| b.cmp(a));
        let spec = ExtensionSpec::new(e).unwrap();
        let cycle = extension_cycle(&spec);
        // Intersections of base complements are complements of unions.
        let base = VertexSet::from_indices(1..=k);
        for f in &cycle.faces {
            prop_assert_eq!(f.face.intersection(base), base.difference(f.index_set));
            prop_assert_eq!(f.face.len(), k);
        }
        // Each child appears in exactly two parents with opposite signs.
        let mut seen: std::collections::BTreeMap<VertexSet, Vec<i64>> = Default::default();
        for f in &cycle.faces {
            for (s, child) in face_boundary(f.face) {
                seen.entry(child).or_default().push(s * f.sign);
            }
        }
        for signs in seen.values() {
            prop_assert_eq!(signs.len(), 2);
            prop_assert_eq!(signs[0] + signs[1], 0);
        }
    }

    #[test]
    fn euler_characteristic(sets in proptest::collection::vec(1u64..(1 << 6), 1..6)) {
        let cx = SimplicialComplex::from_sets(sets.into_iter().map(VertexSet));
        let top = cx.dimension();
        let dims = reduced_homology_dims(&cx, top);
        let alt = |i: i64| if i.rem_euclid(2) == 0 { 1 } else { -1 };
        let faces: i64 = (-1..=top).map(|i| alt(i) * cx.faces(i).len() as i64).sum();
        let homology: i64 = (-1..=top).map(|i| alt(i) * dims[(i + 1) as usize] as i64).sum();
        prop_assert_eq!(faces, homology);
    }

    #[test]
    fn reachable_set_pump(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = graph(&mut r, 6, 3);
        let parts = r.gen_range(2..=g.n());
        let p = random_partition(&mut r, &g, parts).unwrap();
        let q = quotient(&g, &p);
        let s = canonical_source(&p);
        let mut o = enumerate_acyclic_orientations(&q).choose(&mut r).unwrap().clone();
        while let Some((next, reach)) = pump_step(&o, s, p.len()) {
            let before = f_map(&g, &p, &o);
            let after = f_map(&g, &p, &next);
            prop_assert!(before.is_effective() && after.is_effective());
            prop_assert_eq!(fire_blocks(&g, &p, &before, reach), after);
            prop_assert!(next.is_acyclic(p.len()));
            o = next;
        }
        prop_assert_eq!(o.sources(p.len()), VertexSet::singleton(s));
    }

    #[test]
    fn generating_sequences_produce_the_partition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = graph(&mut r, 6, 2);
        let parts = r.gen_range(2..=g.n());
        let p = random_partition(&mut r, &g, parts).unwrap();
        let seqs = generating_sequences(&g, &p);
        prop_assert!(!seqs.is_empty());
        for s in &seqs {
            let blocks: std::collections::BTreeSet<VertexSet> =
                (0..p.len()).map(VertexSet::singleton).collect();
            prop_assert_eq!(s.apply(p.len()), Some(blocks));
        }
    }
}

proptest! {
    #![proptest_config(config(60))]

    #[test]
    fn one_unique_source_orientation_per_switch_class(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = graph(&mut r, 5, 2);
        let parts = r.gen_range(2..=g.n());
        let p = random_partition(&mut r, &g, parts).unwrap();
        let q = quotient(&g, &p);
        prop_assume!(q.simple_edges().len() <= SWITCH_SEARCH_EDGE_CAP);
        let aus = enumerate_aus(&q, canonical_source(&p));
        for o in enumerate_acyclic_orientations(&q) {
            let hits = aus.iter().filter(|a| switch_equivalent(&q, &o, a) == Some(true)).count();
            prop_assert_eq!(hits, 1);
        }
    }

    #[test]
    fn cuts_match_first_betti_number(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = graph(&mut r, 5, 2);
        let cuts = enumerate_connected_partitions(&g, 2).len();
        let report = coarse_betti(&g, 1..=1, default_window(&g), 0);
        prop_assert_eq!(report.coarse[&1], cuts);
        for class in &report.classes {
            let d = &class.divisor;
            let cx = complex_of_divisor(&g, d);
            prop_assert_eq!(class.betti[&1], cx.components().len() - 1);
            // Cuts recovered from one class never intersect one another.
            let mut recovered = Vec::new();
            for s in splittings(&g, d) {
                let rec = cut_from_splitting(&g, d, &s);
                prop_assert!(rec.is_ok(), "{:?}", rec);
                recovered.push(rec.unwrap().cut);
            }
            recovered.sort();
            recovered.dedup();
            prop_assert_eq!(recovered.len(), class.betti[&1]);
            for (i, a) in recovered.iter().enumerate() {
                for b in &recovered[i + 1..] {
                    prop_assert!(!cuts_intersect(a, b));
                }
            }
        }
    }

    #[test]
    fn cut_boundary_supports_stay_on_one_side(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = graph(&mut r, 5, 3);
        for cut in enumerate_connected_partitions(&g, 2) {
            let (a, b) = (cut.block(0), cut.block(1));
            let d = Divisor((0..g.n()).map(|v| if b.contains(v) { g.crossing_degree(a, b, v).unwrap() } else { 0 }).collect());
            for m in toppling::divisor::linear_system(&g, &d) {
                let s = m.support();
                prop_assert!(s.is_subset(a) || s.is_subset(b));
            }
        }
    }

    #[test]
    fn tree_witness_is_nonzero(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=7);
        let g = random_tree(&mut r, n, 2);
        let parts = r.gen_range(2..=n);
        let p = random_partition(&mut r, &g, parts).unwrap();
        let q = quotient(&g, &p);
        let o = enumerate_acyclic_orientations(&q).choose(&mut r).unwrap().clone();
        let d = f_map(&g, &p, &o);
        let pi1 = r.gen_range(0..p.len());
        let w = tree_witness_cycle_from(&g, &p, &d, pi1);
        prop_assert!(w.is_ok(), "{:?}", w);
        let w = w.unwrap();
        prop_assert!(boundary_of_chain(&w.chain).is_zero());
        prop_assert!(w.not_a_boundary);
        prop_assert!(betti_kd(&g, &d, parts - 1) >= 1);

        // Any chain one dimension up whose boundary hits the base also hits
        // a second essential face.
        let cx = complex_of_divisor(&g, &d);
        let upper = cx.faces(parts as i64 - 1);
        for _ in 0..20 {
            let mut c = SignedChain::new();
            for &f in &upper {
                let coeff = r.gen_range(-2..=2);
                if coeff != 0 {
                    c.add(f, coeff);
                }
            }
            let bd = boundary_of_chain(&c);
            if bd.coefficient(w.base) != 0 {
                let essential = bd.support().into_iter().filter(|&f| is_essential(f, &p, pi1)).count();
                prop_assert!(essential >= 2);
            }
            prop_assert!(is_boundary(&cx, &bd).unwrap());
        }
    }
}

#[test]
fn coarse_scan_is_independent_of_thread_count() {
    let mut r = rng(7);
    for _ in 0..5 {
        let g = graph(&mut r, 5, 3);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| coarse_betti(&g, 1..=g.n() - 1, default_window(&g), 0))
        };
        assert_eq!(run(1), run(4));
    }
}
