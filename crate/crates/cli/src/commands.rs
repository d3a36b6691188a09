use std::fmt;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use toppling::corpus::connected_multigraphs;
use toppling::cycles::{boundary_of_chain, extension_cycle, tree_witness_cycle, ExtensionSpec};
use toppling::divisor::{class_key, enumerate_maximal_superstables, linear_system, Divisor};
use toppling::homology::{
    betti_kd, coarse_betti, complex_of_members, cut_from_splitting, default_window,
    reduced_homology_dims, splittings, BettiReport,
};
use toppling::orientation::{canonical_source, enumerate_aus, f_map};
use toppling::partition::{enumerate_connected_partitions, generating_sequences, quotient, ConnectedPartition};
use toppling::verify::{quotient_parking_count, verify_wilmes, VerificationReport};
use toppling::{load_graph, Multigraph, VertexSet};

use crate::args::{Command, Common};
use crate::table::table;

pub enum CliError {
    Usage(String),
    Input(String),
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Mismatch(m) => f.write_str(m),
        }
    }
}

impl From<toppling::Error> for CliError {
    fn from(e: toppling::Error) -> Self {
        match e {
            toppling::Error::ConstructionFailed(_) => CliError::Mismatch(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type Outcome = Result<Output, CliError>;

/// Rendered result. `mismatch` marks a completed run whose check failed.
pub struct Output {
    pub json: Value,
    pub table: String,
    pub mismatch: bool,
}

pub fn run(command: &Command, common: &Common) -> Outcome {
    match command {
        Command::VerifyWilmes { exhaustive, random, detail } => {
            if let Some(spec) = exhaustive {
                let (n, m) = parse_corpus(spec)?;
                verify_many(connected_multigraphs(n, m))
            } else if let Some(count) = random {
                verify_many(random_graphs(*count, common.seed))
            } else {
                verify_one(common, *detail)
            }
        }
        Command::Betti { divisor } => betti(common, divisor.as_deref()),
        Command::Cuts => cuts(common),
        Command::Partitions { parts } => partitions(common, *parts),
        Command::BoundaryDivisors { partition } => boundary_divisors(common, partition),
        Command::LinearSystem { divisor } => linear_system_cmd(common, divisor),
        Command::ExtensionCycle { extensions } => extension_cycle_cmd(extensions),
        Command::TreeWitness { partition, divisor } => tree_witness(common, partition, divisor.as_deref()),
    }
}

fn graph(common: &Common) -> Result<Multigraph, CliError> {
    let path = common
        .graph
        .as_ref()
        .ok_or_else(|| CliError::Usage("--graph FILE is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(load_graph(&text)?)
}

fn ks(common: &Common, g: &Multigraph) -> Result<RangeInclusive<usize>, CliError> {
    let top = g.n() as i64 - 1;
    let (lo, hi) = common.k.map_or((1, top), |s| (s.lo, s.hi));
    if lo < 1 || hi > top {
        return Err(CliError::Input(format!("k range must lie within 1..{top}")));
    }
    Ok(lo as usize..=hi as usize)
}

fn window(common: &Common, g: &Multigraph) -> RangeInclusive<i64> {
    common.degree_window.map_or_else(|| default_window(g), |s| s.range())
}

fn sink(common: &Common, g: &Multigraph) -> Result<usize, CliError> {
    common.sink.as_deref().map_or(Ok(0), |s| Ok(g.vertex(s)?))
}

fn face(g: &Multigraph, f: VertexSet) -> String {
    let names: Vec<&str> = f.iter().map(|v| g.name(v)).collect();
    format!("[{}]", names.join(","))
}

fn betti_json(report: &BettiReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

fn betti_table(report: &BettiReport) -> String {
    let ks: Vec<usize> = report.coarse.keys().copied().collect();
    let mut headers = vec!["class".to_string(), "degree".to_string()];
    headers.extend(ks.iter().map(|k| format!("b{k}")));
    let mut rows: Vec<Vec<String>> = report
        .classes
        .iter()
        .map(|c| {
            let mut row = vec![c.reduced.clone(), c.degree.to_string()];
            row.extend(ks.iter().map(|k| c.betti[k].to_string()));
            row
        })
        .collect();
    let mut total = vec!["coarse".to_string(), String::new()];
    total.extend(ks.iter().map(|k| report.coarse[k].to_string()));
    rows.push(total);
    let mut out = table(&headers, &rows);
    for w in &report.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

fn verification_table(report: &VerificationReport) -> String {
    let rows: Vec<Vec<String>> = report
        .conjecture
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                if r.matched { "yes" } else { "NO" }.to_string(),
            ]
        })
        .collect();
    let mut out = table(&["k", "lhs", "rhs", "match"].map(String::from), &rows);
    if !report.partitions.is_empty() {
        out.push('\n');
        let rows: Vec<Vec<String>> = report
            .partitions
            .iter()
            .map(|p| vec![p.partition.clone(), p.maximal_superstables.to_string()])
            .collect();
        out.push_str(&table(&["partition", "maximal"].map(String::from), &rows));
    }
    out.push('\n');
    out.push_str(&betti_table(&report.betti));
    out
}

fn verify_one(common: &Common, detail: bool) -> Outcome {
    let g = graph(common)?;
    let report = verify_wilmes(&g, ks(common, &g)?, window(common, &g), sink(common, &g)?, detail)?;
    Ok(Output {
        json: serde_json::to_value(&report).expect("report serializes"),
        table: verification_table(&report),
        mismatch: !report.all_match(),
    })
}

fn verify_many(graphs: Vec<Multigraph>) -> Outcome {
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for g in &graphs {
        let report = verify_wilmes(g, 1..=g.n() - 1, default_window(g), 0, false)?;
        if !report.all_match() {
            mismatches += 1;
        }
        for r in &report.conjecture {
            rows.push(vec![
                g.to_edge_list().trim_end().replace('\n', "; "),
                r.k.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                if r.matched { "yes" } else { "NO" }.to_string(),
            ]);
        }
        entries.push(json!({
            "edges": g.to_edge_list(),
            "conjecture": serde_json::to_value(&report.conjecture).expect("rows serialize"),
        }));
    }
    let mut out = table(&["graph", "k", "lhs", "rhs", "match"].map(String::from), &rows);
    out.push_str(&format!("{} graphs, {mismatches} with a mismatch\n", graphs.len()));
    Ok(Output {
        json: json!({ "graphs": entries, "mismatches": mismatches }),
        table: out,
        mismatch: mismatches > 0,
    })
}

fn parse_corpus(spec: &str) -> Result<(usize, u64), CliError> {
    let bad = || CliError::Usage(format!("--exhaustive expects N:M, got `{spec}`"));
    let (n, m) = spec.split_once(':').ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    let m: u64 = m.trim().parse().map_err(|_| bad())?;
    if !(2..=8).contains(&n) {
        return Err(CliError::Usage("--exhaustive supports 2 to 8 vertices".into()));
    }
    Ok((n, m))
}

/// Random spanning tree plus a few extra edges, up to five vertices.
fn random_graphs(count: usize, seed: u64) -> Vec<Multigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = |i: usize| ((b'a' + i as u8) as char).to_string();
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=5);
            let mut edges: Vec<(String, String, u64)> = (1..n)
                .map(|i| (name(rng.gen_range(0..i)), name(i), rng.gen_range(1..=3)))
                .collect();
            for _ in 0..rng.gen_range(0..=n) {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v {
                    edges.push((name(u), name(v), rng.gen_range(1..=3)));
                }
            }
            Multigraph::new(&edges).expect("spanning tree keeps it connected")
        })
        .collect()
}

fn betti(common: &Common, divisor: Option<&str>) -> Outcome {
    let g = graph(common)?;
    let ks = ks(common, &g)?;
    let Some(text) = divisor else {
        let report = coarse_betti(&g, ks, window(common, &g), sink(common, &g)?);
        return Ok(Output { json: betti_json(&report), table: betti_table(&report), mismatch: false });
    };
    let d = Divisor::parse(&g, text)?;
    let values: Vec<(usize, usize)> = ks.map(|k| (k, betti_kd(&g, &d, k))).collect();
    let rows: Vec<Vec<String>> = values.iter().map(|(k, b)| vec![k.to_string(), b.to_string()]).collect();
    let betti: serde_json::Map<String, Value> =
        values.iter().map(|(k, b)| (k.to_string(), json!(b))).collect();
    Ok(Output {
        json: json!({
            "divisor": d.display(&g),
            "reduced": class_key(&g, &d).reduced.display(&g),
            "degree": d.degree(),
            "betti": betti,
        }),
        table: table(&["k", "betti"].map(String::from), &rows),
        mismatch: false,
    })
}

fn side_divisor(g: &Multigraph, cut: &ConnectedPartition, side: usize) -> Divisor {
    let (x, y) = (cut.block(side), cut.block(1 - side));
    Divisor(
        (0..g.n())
            .map(|v| if x.contains(v) { g.crossing_degree(x, y, v).expect("disjoint blocks") } else { 0 })
            .collect(),
    )
}

fn cuts(common: &Common) -> Outcome {
    let g = graph(common)?;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for cut in enumerate_connected_partitions(&g, 2) {
        let (d0, d1) = (side_divisor(&g, &cut, 0), side_divisor(&g, &cut, 1));
        let b = betti_kd(&g, &d0, 1);
        let reduced = class_key(&g, &d0).reduced.display(&g);
        rows.push(vec![cut.display(&g), d0.display(&g), d1.display(&g), reduced.clone(), b.to_string()]);
        entries.push(json!({
            "cut": cut.display(&g),
            "boundary": [d0.display(&g), d1.display(&g)],
            "reduced": reduced,
            "betti_1": b,
        }));
    }
    Ok(Output {
        json: json!({ "cuts": entries }),
        table: table(&["cut", "first side", "second side", "reduced", "b1"].map(String::from), &rows),
        mismatch: false,
    })
}

fn partitions(common: &Common, parts: usize) -> Outcome {
    let g = graph(common)?;
    if parts < 1 || parts > g.n() {
        return Err(CliError::Input(format!("--parts must lie within 1..{}", g.n())));
    }
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut total = 0;
    for p in enumerate_connected_partitions(&g, parts) {
        let count = if parts == 1 { 1 } else { quotient_parking_count(&g, &p)? };
        total += count;
        rows.push(vec![p.display(&g), count.to_string()]);
        entries.push(json!({ "partition": p.display(&g), "maximal_superstables": count }));
    }
    rows.push(vec!["total".into(), total.to_string()]);
    Ok(Output {
        json: json!({ "parts": parts, "partitions": entries, "total": total }),
        table: table(&["partition", "maximal"].map(String::from), &rows),
        mismatch: false,
    })
}

fn boundary_divisors(common: &Common, text: &str) -> Outcome {
    let g = graph(common)?;
    let p = ConnectedPartition::parse(&g, text)?;
    let q = quotient(&g, &p);
    let sequences = generating_sequences(&g, &p).len();
    let quotient_graph = q.to_multigraph(&g)?;
    let maximal = enumerate_maximal_superstables(&quotient_graph, 0).len();
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for o in enumerate_aus(&q, canonical_source(&p)) {
        let d = f_map(&g, &p, &o);
        let reduced = class_key(&g, &d).reduced.display(&g);
        rows.push(vec![o.display(&g, &p), d.display(&g), reduced.clone()]);
        entries.push(json!({ "orientation": o.display(&g, &p), "divisor": d.display(&g), "reduced": reduced }));
    }
    let mismatch = entries.len() != maximal;
    let mut out = table(&["orientation", "divisor", "reduced"].map(String::from), &rows);
    out.push_str(&format!(
        "{} classes, {maximal} maximal quotient superstables, {sequences} generating sequences\n",
        entries.len()
    ));
    Ok(Output {
        json: json!({
            "partition": p.display(&g),
            "generating_sequences": sequences,
            "maximal_superstables": maximal,
            "classes": entries,
        }),
        table: out,
        mismatch,
    })
}

fn linear_system_cmd(common: &Common, text: &str) -> Outcome {
    let g = graph(common)?;
    let d = Divisor::parse(&g, text)?;
    let members = linear_system(&g, &d);
    let cx = complex_of_members(&members);
    let dims = reduced_homology_dims(&cx, cx.dimension().max(0));
    let mut split_json = Vec::new();
    let mut out = String::new();
    let names = |v: &[Divisor]| v.iter().map(|m| m.display(&g)).collect::<Vec<_>>();
    out.push_str(&format!("members: {}\n", names(&members).join(" ")));
    let facets: Vec<String> = cx.facets().iter().map(|&f| face(&g, f)).collect();
    out.push_str(&format!("facets: {}\n", facets.join(" ")));
    let dims_text: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
    out.push_str(&format!("reduced homology from degree -1: {}\n", dims_text.join(" ")));
    for s in splittings(&g, &d) {
        let cut = cut_from_splitting(&g, &d, &s)?;
        out.push_str(&format!(
            "splitting {{{}}} | {{{}}} -> cut {}\n",
            names(&s.a).join(","),
            names(&s.b).join(","),
            cut.cut.display(&g)
        ));
        split_json.push(json!({ "a": names(&s.a), "b": names(&s.b), "cut": cut.cut.display(&g) }));
    }
    Ok(Output {
        json: json!({
            "divisor": d.display(&g),
            "members": names(&members),
            "facets": facets,
            "reduced_homology": dims,
            "splittings": split_json,
        }),
        table: out,
        mismatch: false,
    })
}

fn extension_cycle_cmd(text: &str) -> Outcome {
    let labels: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Input(format!("bad label `{t}`"))))
        .collect::<Result<_, _>>()?;
    let spec = ExtensionSpec::new(labels)?;
    let cycle = extension_cycle(&spec);
    let chain = cycle.chain();
    let zero = boundary_of_chain(&chain).is_zero();
    let label_face = |f: VertexSet| {
        let v: Vec<String> = f.iter().map(|x| x.to_string()).collect();
        format!("[{}]", v.join(","))
    };
    let rows: Vec<Vec<String>> = cycle
        .faces
        .iter()
        .map(|f| vec![f.layer().to_string(), label_face(f.face), if f.sign > 0 { "+" } else { "-" }.into()])
        .collect();
    let faces: Vec<Value> = cycle
        .faces
        .iter()
        .map(|f| json!({ "layer": f.layer(), "face": label_face(f.face), "sign": f.sign }))
        .collect();
    let mut out = table(&["layer", "face", "sign"].map(String::from), &rows);
    out.push_str(&format!("boundary is zero: {zero}\n"));
    Ok(Output {
        json: json!({
            "k": spec.k(),
            "faces": faces,
            "chain": chain.display_with(|v| v.to_string()),
            "boundary_zero": zero,
        }),
        table: out,
        mismatch: !zero,
    })
}

fn tree_witness(common: &Common, partition: &str, divisor: Option<&str>) -> Outcome {
    let g = graph(common)?;
    let p = ConnectedPartition::parse(&g, partition)?;
    let d = match divisor {
        Some(text) => Divisor::parse(&g, text)?,
        None => {
            let q = quotient(&g, &p);
            let o = enumerate_aus(&q, canonical_source(&p))
                .into_iter()
                .next()
                .ok_or_else(|| CliError::Input("partition has no unique-source orientation".into()))?;
            f_map(&g, &p, &o)
        }
    };
    let w = tree_witness_cycle(&g, &p, &d)?;
    let k = p.len() - 1;
    let b = betti_kd(&g, &d, k);
    let faces = |v: &[VertexSet]| v.iter().map(|&f| face(&g, f)).collect::<Vec<_>>();
    let mut out = String::new();
    out.push_str(&format!("divisor: {}\n", d.display(&g)));
    out.push_str(&format!("base: {}\n", face(&g, w.base)));
    out.push_str(&format!("extensions: {}\n", faces(&w.extensions).join(" ")));
    out.push_str(&format!("roofs: {}\n", faces(&w.roofs).join(" ")));
    out.push_str(&format!("chain: {}\n", w.chain.display(&g)));
    out.push_str(&format!("not a boundary: {}\n", w.not_a_boundary));
    out.push_str(&format!("b{k}: {b}\n"));
    Ok(Output {
        json: json!({
            "divisor": d.display(&g),
            "base": face(&g, w.base),
            "extensions": faces(&w.extensions),
            "roofs": faces(&w.roofs),
            "chain": w.chain.display(&g),
            "not_a_boundary": w.not_a_boundary,
            "betti": { k.to_string(): b },
        }),
        table: out,
        mismatch: !w.not_a_boundary,
    })
}
