//! Deterministic instance generators.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid_arg, Result};
use crate::graph::{EdgeId, Instance, Multigraph, Sign, VertexId, Weight};

/// Default seed, overridable through `CUBIC_TSP_SEED`.
pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn default_seed() -> u64 {
    std::env::var("CUBIC_TSP_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    Petersen,
    K4,
    K33,
    Prism,
    MoebiusKantor,
}

impl Named {
    pub fn parse(s: &str) -> Option<Named> {
        Some(match s {
            "petersen" => Named::Petersen,
            "k4" => Named::K4,
            "k33" => Named::K33,
            "prism" => Named::Prism,
            "moebius_kantor" | "moebius-kantor" => Named::MoebiusKantor,
            _ => return None,
        })
    }

    fn edges(self) -> (usize, Vec<(u32, u32)>) {
        match self {
            Named::Petersen => generalized_petersen(5, 2),
            Named::MoebiusKantor => generalized_petersen(8, 3),
            Named::K4 => (4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            Named::K33 => (6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect()),
            Named::Prism => (6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]),
        }
    }
}

fn generalized_petersen(n: u32, k: u32) -> (usize, Vec<(u32, u32)>) {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((i, i + n));
        edges.push((i + n, (i + k) % n + n));
    }
    (2 * n as usize, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    RandomCubic { n: usize },
    Cycle { n: usize },
    Named(Named),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightSpec {
    Unit,
    /// Uniform rationals `p/q` in `[lo, hi]` with `q <= max_den`.
    Random { lo: i64, hi: i64, max_den: u32 },
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec::Random { lo: 1, hi: 20, max_den: 8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: Kind,
    pub seed: u64,
    pub weights: WeightSpec,
    pub allow_parallel: bool,
}

impl GeneratorSpec {
    pub fn new(kind: Kind, seed: u64, weights: WeightSpec) -> Self {
        GeneratorSpec { kind, seed, weights, allow_parallel: false }
    }
}

pub fn random_weight(rng: &mut impl Rng, spec: WeightSpec) -> Weight {
    match spec {
        WeightSpec::Unit => Weight::from_integer(BigInt::from(1)),
        WeightSpec::Random { lo, hi, max_den } => {
            let q = rng.gen_range(1..=max_den.max(1)) as i64;
            let p = rng.gen_range(lo * q..=hi * q);
            Weight::new(BigInt::from(p), BigInt::from(q))
        }
    }
}

fn build(n: usize, edges: &[(u32, u32)], rng: &mut ChaCha8Rng, weights: WeightSpec) -> Result<Instance> {
    let mut g = Multigraph::with_vertices(n);
    for &(a, b) in edges {
        g.add_edge(VertexId(a), VertexId(b), random_weight(rng, weights), Sign::Unforced)?;
    }
    Ok(Instance::new(g))
}

fn connected(n: usize, edges: &[(u32, u32)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Pairing model: match `3n` points uniformly and retry until the result is
/// loop-free, connected and (unless allowed) simple.
fn pairing(n: usize, rng: &mut ChaCha8Rng, allow_parallel: bool) -> Vec<(u32, u32)> {
    let mut points: Vec<u32> = (0..3 * n as u32).collect();
    'retry: loop {
        points.shuffle(rng);
        let mut edges = Vec::with_capacity(3 * n / 2);
        for pair in points.chunks(2) {
            let (a, b) = (pair[0] / 3, pair[1] / 3);
            if a == b {
                continue 'retry;
            }
            let e = (a.min(b), a.max(b));
            if !allow_parallel && edges.contains(&e) {
                continue 'retry;
            }
            edges.push(e);
        }
        if connected(n, &edges) {
            edges.sort();
            return edges;
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        Kind::RandomCubic { n } => {
            if n < 4 || n % 2 == 1 {
                return invalid_arg(format!("random cubic graphs need an even n >= 4, got {n}"));
            }
            let edges = pairing(n, &mut rng, spec.allow_parallel);
            build(n, &edges, &mut rng, spec.weights)
        }
        Kind::Cycle { n } => {
            if n < 3 {
                return invalid_arg(format!("cycles need n >= 3, got {n}"));
            }
            let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
            build(n, &edges, &mut rng, spec.weights)
        }
        Kind::Named(named) => {
            let (n, edges) = named.edges();
            build(n, &edges, &mut rng, spec.weights)
        }
    }
}

pub fn random_cubic(n: usize, seed: u64, weights: WeightSpec) -> Result<Instance> {
    generate(&GeneratorSpec::new(Kind::RandomCubic { n }, seed, weights))
}

pub fn named(which: Named) -> Instance {
    generate(&GeneratorSpec::new(Kind::Named(which), 0, WeightSpec::Unit)).expect("named graphs are valid")
}

pub fn cycle(n: usize) -> Instance {
    generate(&GeneratorSpec::new(Kind::Cycle { n }, 0, WeightSpec::Unit)).expect("cycle length checked by caller")
}

/// `k` disjoint unforced 4-cycles whose vertices are joined by a random
/// perfect matching of forced edges across different cycles. Each forced
/// edge is subdivided by a degree-2 vertex with probability `subdivide`.
pub fn random_four_cycles(k: usize, subdivide: f64, seed: u64, weights: WeightSpec) -> Result<Instance> {
    if k < 2 {
        return invalid_arg(format!("need at least two 4-cycles, got {k}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<u32> = (0..4 * k as u32).collect();
    let pairs = loop {
        points.shuffle(&mut rng);
        let pairs: Vec<(u32, u32)> = points.chunks(2).map(|p| (p[0], p[1])).collect();
        if pairs.iter().all(|&(a, b)| a / 4 != b / 4) {
            break pairs;
        }
    };
    let mut g = Multigraph::with_vertices(4 * k);
    for c in 0..k as u32 {
        for i in 0..4 {
            let (a, b) = (4 * c + i, 4 * c + (i + 1) % 4);
            g.add_edge(VertexId(a), VertexId(b), random_weight(&mut rng, weights), Sign::Unforced)?;
        }
    }
    for (a, b) in pairs {
        if rng.gen_bool(subdivide.clamp(0.0, 1.0)) {
            let m = g.add_vertex();
            g.add_edge(VertexId(a), m, random_weight(&mut rng, weights), Sign::Forced)?;
            g.add_edge(m, VertexId(b), random_weight(&mut rng, weights), Sign::Forced)?;
        } else {
            g.add_edge(VertexId(a), VertexId(b), random_weight(&mut rng, weights), Sign::Forced)?;
        }
    }
    Ok(Instance::new(g))
}

/// Forces each edge with probability `p`, in random order, keeping every
/// vertex at most two forced edges. Returns the forced edges.
pub fn inject_forced(inst: &mut Instance, p: f64, seed: u64) -> Vec<EdgeId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<EdgeId> = inst.unforced_edges();
    ids.shuffle(&mut rng);
    let mut forced = Vec::new();
    for e in ids {
        if !rng.gen_bool(p.clamp(0.0, 1.0)) {
            continue;
        }
        let (a, b) = inst.graph.edge(e).ends;
        let ok = [a, b].iter().all(|&v| inst.graph.incident(v).iter().filter(|&&f| inst.is_forced(f)).count() < 2);
        if ok {
            inst.include(e);
            forced.push(e);
        }
    }
    forced.sort();
    forced
}
