//! Divisors, scripts and the chip-firing machinery on them: Dhar's burning
//! algorithm, sink reduction, linear systems, superstables and aliveness.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::set::VertexSet;

/// Integer chip counts, indexed by the graph's vertex order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor(pub Vec<i64>);

/// Firing frequencies. Canonical scripts are nonnegative with minimum 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Script(pub Vec<i64>);

/// Sink-reduced representative of a divisor class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClassKey {
    pub sink: usize,
    pub reduced: Divisor,
}

impl Divisor {
    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut d = Divisor::zero(n);
        d.0[v] = 1;
        d
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> VertexSet {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn with_added(&self, v: usize, amount: i64) -> Divisor {
        let mut d = self.clone();
        d.0[v] += amount;
        d
    }

    /// Renders as a digit string in alphabetical vertex order when every
    /// entry is a single digit and every name a single character, otherwise
    /// as a `name=count` list.
    pub fn display(&self, g: &Multigraph) -> String {
        let order = g.alphabetical_order();
        let compact = self.0.iter().all(|&x| (0..=9).contains(&x))
            && g.names().iter().all(|s| s.chars().count() == 1);
        if compact {
            order.iter().map(|&v| self.0[v].to_string()).collect()
        } else {
            order
                .iter()
                .map(|&v| format!("{}={}", g.name(v), self.0[v]))
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Parses either output form of [`Divisor::display`]. Vertices missing
    /// from a `name=count` list carry zero chips.
    pub fn parse(g: &Multigraph, text: &str) -> Result<Divisor> {
        let text = text.trim();
        let mut d = Divisor::zero(g.n());
        if text.contains('=') {
            for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (name, count) = item
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidDivisor(format!("bad entry `{item}`")))?;
                let v = g.vertex(name.trim())?;
                d.0[v] = count
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidDivisor(format!("bad count in `{item}`")))?;
            }
            return Ok(d);
        }
        if !g.names().iter().all(|s| s.chars().count() == 1) {
            return Err(Error::InvalidDivisor(
                "digit strings need single-character vertex names".into(),
            ));
        }
        let digits: Vec<char> = text.chars().collect();
        if digits.len() != g.n() {
            return Err(Error::InvalidDivisor(format!(
                "expected {} digits, found {}",
                g.n(),
                digits.len()
            )));
        }
        for (&v, c) in g.alphabetical_order().iter().zip(digits) {
            d.0[v] = c
                .to_digit(10)
                .ok_or_else(|| Error::InvalidDivisor(format!("bad digit `{c}`")))?
                as i64;
        }
        Ok(d)
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Script {
    pub fn zero(n: usize) -> Self {
        Script(vec![0; n])
    }

    pub fn indicator(n: usize, s: VertexSet) -> Self {
        Script((0..n).map(|v| s.contains(v) as i64).collect())
    }

    /// Shifts by a constant so the minimum entry is zero.
    pub fn normalized(mut self) -> Self {
        if let Some(&m) = self.0.iter().min() {
            self.0.iter_mut().for_each(|x| *x -= m);
        }
        self
    }

    pub fn support(&self) -> VertexSet {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// `D - L sigma`.
pub fn apply_script(g: &Multigraph, d: &Divisor, script: &Script) -> Divisor {
    let ls = g.laplacian().apply(&script.0);
    Divisor(d.0.iter().zip(ls).map(|(a, b)| a - b).collect())
}

/// Fires every vertex of `set` once: `D - L chi_set`.
pub fn fire_set(g: &Multigraph, d: &Divisor, set: VertexSet) -> Divisor {
    let mut out = d.clone();
    for v in set.iter() {
        for &(u, m) in g.adjacency(v) {
            if !set.contains(u) {
                out.0[v] -= m;
                out.0[u] += m;
            }
        }
    }
    out
}

/// Vertices left unburnt when fire spreads from `q`: a vertex catches fire
/// once its burnt incident edges outnumber its chips.
pub fn dhar_unburnt(g: &Multigraph, d: &Divisor, q: usize) -> Result<VertexSet> {
    if let Some(v) = (0..g.n()).find(|&v| v != q && d.0[v] < 0) {
        return Err(Error::NegativeOffSink(g.name(v).to_string()));
    }
    Ok(unburnt(g, d, q))
}

fn unburnt(g: &Multigraph, d: &Divisor, q: usize) -> VertexSet {
    let mut burnt = VertexSet::singleton(q);
    let mut pressure = vec![0i64; g.n()];
    let mut frontier = vec![q];
    while let Some(b) = frontier.pop() {
        for &(u, m) in g.adjacency(b) {
            if burnt.contains(u) {
                continue;
            }
            pressure[u] += m;
            if pressure[u] > d.0[u] {
                burnt = burnt.with(u);
                frontier.push(u);
            }
        }
    }
    g.all().difference(burnt)
}

/// Reduced divisor together with the script that produced it:
/// `input - L script = divisor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub divisor: Divisor,
    pub script: Script,
}

/// The unique equivalent divisor that is nonnegative and superstable away
/// from `q`.
pub fn q_reduce(g: &Multigraph, d: &Divisor, q: usize) -> Divisor {
    reduce_with_script(g, d, q).divisor
}

pub fn reduce_with_script(g: &Multigraph, d: &Divisor, q: usize) -> Reduction {
    let n = g.n();
    let mut cur = d.clone();
    let mut script = vec![0i64; n];

    // Phase one: clear debt off the sink, deepest BFS layer first, by firing
    // the ball of radius `layer - 1` around q.
    let layers = bfs_layers(g, q);
    for depth in (1..layers.len()).rev() {
        let ball = layers[..depth]
            .iter()
            .fold(VertexSet::EMPTY, |acc, &l| acc.union(l));
        loop {
            let debt = layers[depth]
                .iter()
                .filter(|&v| cur.0[v] < 0)
                .map(|v| {
                    let inward: i64 = g
                        .adjacency(v)
                        .iter()
                        .filter(|(u, _)| ball.contains(*u))
                        .map(|(_, m)| m)
                        .sum();
                    (-cur.0[v] + inward - 1) / inward
                })
                .max();
            let Some(times) = debt else { break };
            for _ in 0..times {
                cur = fire_set(g, &cur, ball);
            }
            for v in ball.iter() {
                script[v] += times;
            }
        }
    }

    // Phase two: fire unburnt sets until the fire from q burns everything.
    loop {
        let stuck = unburnt(g, &cur, q);
        if stuck.is_empty() {
            break;
        }
        cur = fire_set(g, &cur, stuck);
        for v in stuck.iter() {
            script[v] += 1;
        }
    }
    Reduction {
        divisor: cur,
        script: Script(script),
    }
}

fn bfs_layers(g: &Multigraph, q: usize) -> Vec<VertexSet> {
    let mut layers = vec![VertexSet::singleton(q)];
    let mut seen = layers[0];
    loop {
        let next = g.neighbor_set(*layers.last().unwrap()).difference(seen);
        if next.is_empty() {
            return layers;
        }
        seen = seen.union(next);
        layers.push(next);
    }
}

/// Canonical sink used for class keys: vertex 0.
pub const DEFAULT_SINK: usize = 0;

pub fn class_key(g: &Multigraph, d: &Divisor) -> DivisorClassKey {
    class_key_at(g, d, DEFAULT_SINK)
}

pub fn class_key_at(g: &Multigraph, d: &Divisor, sink: usize) -> DivisorClassKey {
    DivisorClassKey {
        sink,
        reduced: q_reduce(g, d, sink),
    }
}

pub fn equivalent(g: &Multigraph, a: &Divisor, b: &Divisor) -> bool {
    a.degree() == b.degree() && class_key(g, a) == class_key(g, b)
}

/// The canonical script `s` with `d0 - L s = d1`, if the divisors are equivalent.
pub fn equivalence_script(g: &Multigraph, d0: &Divisor, d1: &Divisor) -> Option<Script> {
    if d0.degree() != d1.degree() {
        return None;
    }
    let r0 = reduce_with_script(g, d0, DEFAULT_SINK);
    let r1 = reduce_with_script(g, d1, DEFAULT_SINK);
    if r0.divisor != r1.divisor {
        return None;
    }
    let diff = r0.script.0.iter().zip(&r1.script.0).map(|(a, b)| a - b).collect();
    Some(Script(diff).normalized())
}

/// Calls `f` on every nonnegative integer vector of length `n` summing to `total`.
pub fn for_each_composition(n: usize, total: i64, mut f: impl FnMut(&[i64])) {
    fn rec(buf: &mut Vec<i64>, idx: usize, left: i64, f: &mut impl FnMut(&[i64])) {
        if idx + 1 == buf.len() {
            buf[idx] = left;
            f(buf);
            return;
        }
        for x in (0..=left).rev() {
            buf[idx] = x;
            rec(buf, idx + 1, left - x, f);
        }
    }
    if n == 0 || total < 0 {
        return;
    }
    let mut buf = vec![0; n];
    rec(&mut buf, 0, total, &mut f);
}

/// All effective divisors equivalent to `d`, sorted.
pub fn linear_system(g: &Multigraph, d: &Divisor) -> Vec<Divisor> {
    let deg = d.degree();
    if deg < 0 {
        return Vec::new();
    }
    let key = q_reduce(g, d, DEFAULT_SINK);
    // The reduced representative is effective iff the class has an effective member.
    if !key.is_effective() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for_each_composition(g.n(), deg, |c| {
        let e = Divisor(c.to_vec());
        if q_reduce(g, &e, DEFAULT_SINK) == key {
            out.push(e);
        }
    });
    out.sort();
    out
}

/// Linear systems of every class of degree `deg` that has an effective
/// member, keyed by the reduced representative at [`DEFAULT_SINK`].
pub fn linear_systems_of_degree(g: &Multigraph, deg: i64) -> HashMap<Divisor, Vec<Divisor>> {
    let mut out: HashMap<Divisor, Vec<Divisor>> = HashMap::new();
    for_each_composition(g.n(), deg, |c| {
        let e = Divisor(c.to_vec());
        out.entry(q_reduce(g, &e, DEFAULT_SINK)).or_default().push(e);
    });
    for v in out.values_mut() {
        v.sort();
    }
    out
}

/// Nonnegative off `q`, zero at `q`, and burnt entirely by fire from `q`.
pub fn is_superstable(g: &Multigraph, c: &Divisor, q: usize) -> bool {
    c.0[q] == 0
        && (0..g.n()).all(|v| v == q || c.0[v] >= 0)
        && unburnt(g, c, q).is_empty()
}

/// All superstable configurations with sink `q`, sorted.
pub fn enumerate_superstables(g: &Multigraph, q: usize) -> Vec<Divisor> {
    let n = g.n();
    let mut out = Vec::new();
    let mut cur = Divisor::zero(n);
    // Superstables are closed downward, so prune a branch as soon as a
    // prefix (with zeros elsewhere) fails the burning test.
    fn rec(g: &Multigraph, q: usize, idx: usize, cur: &mut Divisor, out: &mut Vec<Divisor>) {
        if idx == g.n() {
            out.push(cur.clone());
            return;
        }
        if idx == q {
            rec(g, q, idx + 1, cur, out);
            return;
        }
        for x in 0..g.degree(idx) {
            cur.0[idx] = x;
            if !unburnt(g, cur, q).is_empty() {
                break;
            }
            rec(g, q, idx + 1, cur, out);
        }
        cur.0[idx] = 0;
    }
    rec(g, q, 0, &mut cur, &mut out);
    out.sort();
    out
}

/// Superstables `c` such that `c + 1_v` is not superstable for every `v != q`.
pub fn enumerate_maximal_superstables(g: &Multigraph, q: usize) -> Vec<Divisor> {
    enumerate_superstables(g, q)
        .into_iter()
        .filter(|c| is_maximal_superstable(g, c, q))
        .collect()
}

pub fn is_maximal_superstable(g: &Multigraph, c: &Divisor, q: usize) -> bool {
    is_superstable(g, c, q)
        && (0..g.n())
            .filter(|&v| v != q)
            .all(|v| !is_superstable(g, &c.with_added(v, 1), q))
}

/// `D_v < deg(v)` everywhere.
pub fn is_stable(g: &Multigraph, d: &Divisor) -> bool {
    d.0.iter().zip(g.degrees()).all(|(x, deg)| x < deg)
}

/// No member of the linear system is stable. A class with empty linear
/// system is vacuously alive.
pub fn is_alive(g: &Multigraph, d: &Divisor) -> bool {
    !linear_system(g, d).iter().any(|e| is_stable(g, e))
}

pub fn is_minimally_alive(g: &Multigraph, d: &Divisor) -> bool {
    is_alive(g, d) && (0..g.n()).all(|v| !is_alive(g, &d.with_added(v, -1)))
}
