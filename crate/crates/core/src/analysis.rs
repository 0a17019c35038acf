//! Measure-and-conquer bookkeeping: vertex and component weights, the
//! measure, direct benefits of blocks, per-step audit records, reference
//! branch vectors and the leaf bound.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::connectivity::{critical_shape, is_critical_component, is_four_cycle, Block, BlockKind};
use crate::error::{invalid_arg, Result};
use crate::graph::{Instance, Parity, UComponent, VertexId, Weight};

fn q(n: i64, d: i64) -> Weight {
    Weight::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightConfig {
    pub w3: Weight,
    pub w3p: Weight,
    pub gamma: Weight,
    pub delta: Weight,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig { w3: q(1, 1), w3p: q(1, 3), gamma: q(4, 3), delta: q(127, 100) }
    }
}

impl WeightConfig {
    /// `w3 - w3'`.
    pub fn delta3(&self) -> Weight {
        &self.w3 - &self.w3p
    }
}

pub fn vertex_weight(cfg: &WeightConfig, inst: &Instance, v: VertexId) -> Result<Weight> {
    let d = inst.degrees(v)?;
    Ok(weight_of(cfg, d.d_u, d.d_f))
}

fn weight_of(cfg: &WeightConfig, d_u: usize, d_f: usize) -> Weight {
    if d_u == 3 {
        cfg.w3.clone()
    } else if d_u == 2 && d_f == 1 {
        cfg.w3p.clone()
    } else {
        Weight::zero()
    }
}

/// Total vertex weight of a vertex set.
pub fn set_weight(cfg: &WeightConfig, inst: &Instance, vertices: &[VertexId]) -> Weight {
    vertices.iter().fold(Weight::zero(), |acc, &v| {
        let d = inst.degrees_unchecked(v);
        acc + weight_of(cfg, d.d_u, d.d_f)
    })
}

/// Component weight: 0 for a trivial component, minus its vertex weight for
/// a 4-cycle, `gamma` for a critical graph and `delta` otherwise.
pub fn component_weight(cfg: &WeightConfig, inst: &Instance, h: &UComponent) -> Weight {
    if h.is_trivial() {
        Weight::zero()
    } else if is_four_cycle(inst, h) {
        -set_weight(cfg, inst, &h.vertices)
    } else if is_critical_component(inst, h) {
        cfg.gamma.clone()
    } else {
        cfg.delta.clone()
    }
}

pub fn measure(cfg: &WeightConfig, inst: &Instance) -> Weight {
    let vertices: Vec<VertexId> = inst.graph.vertices().collect();
    let mut mu = set_weight(cfg, inst, &vertices);
    for h in inst.u_components() {
        mu += component_weight(cfg, inst, &h);
    }
    mu
}

/// Measure decrease credited to a block immediately after the circuit
/// procedure decides its unforced cut. `inst` is the instance before the
/// procedure.
pub fn direct_benefit(cfg: &WeightConfig, inst: &Instance, block: &Block, included: bool) -> Weight {
    let d3 = cfg.delta3();
    match block.kind {
        BlockKind::Reducible => Weight::zero(),
        BlockKind::Trivial => cfg.w3p.clone(),
        _ if block.parity == Parity::Odd => &cfg.w3 + &d3 - &cfg.delta,
        _ if !included => &cfg.w3 * q(2, 1) - &cfg.delta,
        BlockKind::TwoPendentCritical => &d3 * q(2, 1) - &cfg.gamma,
        _ if is_pendent_four_cycle(inst, block) => set_weight(cfg, inst, &block.vertices),
        _ => &d3 * q(2, 1) - &cfg.delta,
    }
}

fn is_pendent_four_cycle(inst: &Instance, block: &Block) -> bool {
    if block.vertices.len() != 4 {
        return false;
    }
    let mask = inst.vertex_mask(&block.vertices);
    let mut internal = 0;
    for &v in &block.vertices {
        let mut inner = 0;
        for &e in inst.graph.incident(v) {
            let edge = inst.graph.edge(e);
            if mask[edge.other(v).index()] {
                if edge.is_forced() {
                    return false;
                }
                inner += 1;
            }
        }
        if inner != 2 {
            return false;
        }
        internal += inner;
    }
    internal == 8 && critical_shape(inst, &block.vertices).is_none()
}

/// One audited transition of the measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditRecord {
    pub kind: String,
    pub before: Weight,
    pub after: Weight,
    pub delta: Weight,
    /// Hard check: reductions must not increase the measure, branch
    /// children must strictly decrease it.
    pub ok: bool,
}

/// Audits a single transition. Branch children (`kind == "branch"`) must
/// strictly decrease the measure; every other kind must not increase it.
pub fn audit_step(cfg: &WeightConfig, before: &Instance, after: &Instance, kind: &str) -> AuditRecord {
    audit_values(measure(cfg, before), measure(cfg, after), kind)
}

pub fn audit_values(before: Weight, after: Weight, kind: &str) -> AuditRecord {
    let delta = &before - &after;
    let ok = if kind == "branch" { delta.is_positive() } else { !delta.is_negative() };
    AuditRecord { kind: kind.to_string(), before, after, delta, ok }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KindStats {
    pub count: usize,
    pub min: Option<Weight>,
    pub max: Option<Weight>,
}

impl KindStats {
    fn add(&mut self, delta: &Weight) {
        self.count += 1;
        if self.min.as_ref().is_none_or(|m| delta < m) {
            self.min = Some(delta.clone());
        }
        if self.max.as_ref().is_none_or(|m| delta > m) {
            self.max = Some(delta.clone());
        }
    }

    fn merge(&mut self, other: &KindStats) {
        if let Some(m) = &other.min {
            self.add(m);
            self.count -= 1;
        }
        if let Some(m) = &other.max {
            self.add(m);
            self.count -= 1;
        }
        self.count += other.count;
    }
}

/// Per search node: measure before and after its reduction and the measure
/// decrease of each child relative to the reduced node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeRecord {
    pub depth: usize,
    pub mu_before: Weight,
    pub mu_after: Weight,
    pub child_deltas: Vec<Weight>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeasureReport {
    pub mu0: Weight,
    pub nodes: u64,
    pub leaves: u64,
    pub records: Vec<NodeRecord>,
    pub kinds: BTreeMap<String, KindStats>,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl MeasureReport {
    pub fn new(mu0: Weight) -> Self {
        MeasureReport { mu0, ..Default::default() }
    }

    pub fn record(&mut self, rec: &AuditRecord) {
        self.kinds.entry(rec.kind.clone()).or_default().add(&rec.delta);
        if !rec.ok {
            self.violations.push(format!("{}: measure {} -> {}", rec.kind, rec.before, rec.after));
        }
    }

    /// Merges a report of an independently explored subtree.
    pub fn absorb(&mut self, other: MeasureReport) {
        self.nodes += other.nodes;
        self.leaves += other.leaves;
        self.records.extend(other.records);
        for (k, s) in &other.kinds {
            self.kinds.entry(k.clone()).or_default().merge(s);
        }
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
    }

    pub fn leaf_bound(&self) -> BigUint {
        leaf_bound(&self.mu0)
    }

    /// Flat `key: value` block.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "mu0: {}", self.mu0);
        let _ = writeln!(s, "nodes: {}", self.nodes);
        let _ = writeln!(s, "leaves: {}", self.leaves);
        let _ = writeln!(s, "leaf_bound: {}", self.leaf_bound());
        let _ = writeln!(s, "leaf_bound_ok: {}", leaf_bound_check(&self.mu0, self.leaves));
        let _ = writeln!(s, "violations: {}", self.violations.len());
        let _ = writeln!(s, "warnings: {}", self.warnings.len());
        for (k, st) in &self.kinds {
            let fmt = |w: &Option<Weight>| w.as_ref().map_or("-".to_string(), |x| x.to_string());
            let _ = writeln!(s, "{k}_count: {}", st.count);
            let _ = writeln!(s, "{k}_min_delta: {}", fmt(&st.min));
            let _ = writeln!(s, "{k}_max_delta: {}", fmt(&st.max));
        }
        for v in &self.violations {
            let _ = writeln!(s, "violation: {v}");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

/// Compares `2^(3 * mu0 / 10)` with a non-negative integer `x`, exactly.
fn compare_pow(mu0: &Weight, x: &BigUint) -> Ordering {
    // with mu0 = p / q (q > 0) compare 2^(3p) against x^(10q)
    if x.is_zero() {
        return Ordering::Greater;
    }
    let p = mu0.numer();
    let qd = mu0.denom().to_u32().expect("measure denominator fits in u32");
    let rhs = x.pow(10 * qd);
    let exp: BigInt = p * BigInt::from(3);
    if exp.is_negative() {
        let shift = (-exp).to_u64().expect("exponent fits in u64");
        return BigUint::one().cmp(&(rhs << shift));
    }
    let shift = exp.to_u64().expect("exponent fits in u64");
    (BigUint::one() << shift).cmp(&rhs)
}

/// `ceil(2^(0.3 * mu0))`, exact.
pub fn leaf_bound(mu0: &Weight) -> BigUint {
    let approx = 2f64.powf(0.3 * mu0.to_f64().unwrap_or(0.0)).ceil();
    let mut l = if approx.is_finite() && approx < 1e15 { BigUint::from(approx.max(1.0) as u64) } else { BigUint::one() };
    while l > BigUint::one() && compare_pow(mu0, &(&l - 1u32)) != Ordering::Greater {
        l -= 1u32;
    }
    while compare_pow(mu0, &l) == Ordering::Greater {
        l += 1u32;
    }
    l
}

/// `leaves <= ceil(2^(0.3 * mu0))`, exact.
pub fn leaf_bound_check(mu0: &Weight, leaves: u64) -> bool {
    BigUint::from(leaves) <= leaf_bound(mu0)
}

/// A reference branch vector of the running-time analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchVector {
    pub label: &'static str,
    pub entries: Vec<Weight>,
}

pub fn reference_vectors(cfg: &WeightConfig) -> Vec<BranchVector> {
    let w3 = &cfg.w3;
    let w = &cfg.w3p;
    let g = &cfg.gamma;
    let d = &cfg.delta;
    let d3 = cfg.delta3();
    let k = |n: i64| q(n, 1);
    let v = |label: &'static str, entries: Vec<Weight>| BranchVector { label, entries };
    let x1a = &d3 * k(2) - g;
    let x1b = w3 * k(2) + w * k(4);
    let x2 = w * k(2);
    vec![
        v("six-cycle", vec![w * k(6) + g, w * k(6) + g]),
        v("critical-with-trivials", vec![g + w3 * k(2) + w * k(6), d + w3 * k(2) - g]),
        v("two-critical-blocks", vec![d + (&d3 * k(2) - g) * k(2), d + (w3 * k(2) + w * k(4)) * k(2)]),
        v("odd-normal-block", vec![w3 * k(4) - w * k(2), w3 * k(4) - w * k(2)]),
        v("even-block-two-odd", vec![w3 * k(2), w3 * k(6) - w * k(2)]),
        v("even-block-even-partner", vec![&d3 * k(4) - d, w3 * k(4) + &d3 * k(4)]),
        v("even-block-critical-partner", vec![&d3 * k(4) - g, w3 * k(8)]),
        // two-level branchings with both choices of the side bounds
        v("pendent-cycle-a", vec![&d3 * k(2) + &x1a, d + w3 * k(2) + w * k(6) + &x1b]),
        v("pendent-cycle-b", vec![&d3 * k(2) + &x2, d + w3 * k(2) + w * k(6) + &x2]),
        v(
            "nested-trivials-a",
            vec![
                &d3 * k(2) + &x1a + (d + w3 * k(2) + w * k(2) - g),
                &d3 * k(2) + &x1a + (d + w3 * k(2) + w * k(8)),
                w3 * k(2) + d + w * k(2) + &x1b,
            ],
        ),
        v(
            "nested-trivials-b",
            vec![
                &d3 * k(2) + &x2 + (d + w3 * k(2) + w * k(2) - g),
                &d3 * k(2) + &x2 + (d + w3 * k(2) + w * k(8)),
                w3 * k(2) + d + w * k(2) + &x2,
            ],
        ),
        v(
            "nested-critical-a",
            vec![
                &d3 * k(2) + &x1a + (d + w3 * k(4) - w * k(2) - g * k(2)),
                &d3 * k(2) + &x1a + (d + w3 * k(4) + w * k(10)),
                w3 * k(2) + d + &x1b,
            ],
        ),
        v(
            "nested-critical-b",
            vec![
                &d3 * k(2) + &x2 + (d + w3 * k(4) - w * k(2) - g * k(2)),
                &d3 * k(2) + &x2 + (d + w3 * k(4) + w * k(10)),
                w3 * k(2) + d + &x2,
            ],
        ),
    ]
}

/// `2^(3/10)`.
pub fn alpha() -> f64 {
    2f64.powf(0.3)
}

/// The unique root `x > 1` of `sum x^(-a_i) = 1`. Entries must be positive.
pub fn branching_factor(entries: &[f64]) -> Result<f64> {
    if entries.len() < 2 || entries.iter().any(|&a| !(a > 0.0)) {
        return invalid_arg("branch vector needs at least two positive entries");
    }
    let f = |x: f64| entries.iter().map(|&a| x.powf(-a)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Checks the weight constraints and the reference branch vectors; returns
/// one message per violated condition.
pub fn verify_config(cfg: &WeightConfig) -> Vec<String> {
    let mut out = Vec::new();
    let d3 = cfg.delta3();
    let two = q(2, 1);
    let half = q(1, 2);
    let mut need = |ok: bool, msg: &str| {
        if !ok {
            out.push(msg.to_string());
        }
    };
    need(&d3 * &two >= cfg.gamma, "2*delta3 >= gamma");
    need(cfg.gamma >= cfg.delta, "gamma >= delta");
    need(cfg.delta >= d3, "delta >= delta3");
    need(d3 >= &cfg.w3 * &half, "delta3 >= w3/2");
    need(cfg.w3p >= &cfg.w3 / q(5, 1), "w3' >= w3/5");
    need(&cfg.gamma - &cfg.delta <= cfg.w3p, "gamma - delta <= w3'");
    let a = alpha();
    for bv in reference_vectors(cfg) {
        let entries: Vec<f64> = bv.entries.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
        match branching_factor(&entries) {
            Ok(root) => {
                let slack: f64 = entries.iter().map(|&e| a.powf(-e)).sum();
                if root > a + 1e-9 || slack > 1.0 + 1e-9 {
                    out.push(format!("branch vector {} has root {root:.12} > {a:.12}", bv.label));
                }
            }
            Err(_) => out.push(format!("branch vector {} has a non-positive entry", bv.label)),
        }
    }
    out
}

/// True when `[a]_2` has root exactly `2^(3/10)`, i.e. `2 * 2^(-3a/10) = 1`.
pub fn is_tight_pair(a: &Weight) -> bool {
    *a == q(10, 3)
}

/// Sum of `alpha^(-delta_i)` over the children of a branching.
pub fn branch_slack(deltas: &[Weight]) -> f64 {
    let a = alpha();
    deltas.iter().map(|d| a.powf(-d.to_f64().unwrap_or(0.0))).sum()
}
