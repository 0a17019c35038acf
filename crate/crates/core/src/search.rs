//! Branch-and-search driver: circuit procedure, circuit selection, the
//! all-4-cycles base case and the recursive solver.

use num_traits::{ToPrimitive, Zero};

use crate::analysis::{alpha, audit_values, measure, MeasureReport, NodeRecord, WeightConfig};
use crate::connectivity::{circuit_partition, find_minimal_normal_block, is_four_cycle, BlockKind, Circuit};
use crate::error::{invalid_state, Error, Result};
use crate::graph::{EdgeId, Instance, UComponent, Weight};
use crate::log::{LogEntry, ReductionLog};
use crate::reductions::{cascade, reduce_in_place, Outcome, ReduceOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Include,
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    pub edge: EdgeId,
    pub action: Action,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TourResult {
    /// `edges` is sorted and forms a tour of the solved instance.
    Optimal { cost: Weight, edges: Vec<EdgeId> },
    Infeasible,
}

impl TourResult {
    pub fn is_optimal(&self) -> bool {
        matches!(self, TourResult::Optimal { .. })
    }

    pub fn cost(&self) -> Option<&Weight> {
        match self {
            TourResult::Optimal { cost, .. } => Some(cost),
            TourResult::Infeasible => None,
        }
    }

    pub fn edges(&self) -> &[EdgeId] {
        match self {
            TourResult::Optimal { edges, .. } => edges,
            TourResult::Infeasible => &[],
        }
    }
}

/// Decides every edge of `circuit` starting from `pivot` so that each block
/// keeps an even number of tour edges on its boundary. Returns `false`, and
/// leaves `inst` untouched, when the propagation contradicts the pivot.
pub fn circuit_procedure(inst: &mut Instance, circuit: &Circuit, pivot: Decision, log: &mut ReductionLog) -> Result<bool> {
    let p = circuit.edges.len();
    let Some(k) = circuit.edges.iter().position(|&e| e == pivot.edge) else {
        return Err(Error::InvalidArgument(format!("{} is not on the circuit", pivot.edge)));
    };
    if circuit.edges.iter().any(|&e| !inst.graph.is_edge_alive(e) || inst.is_forced(e)) {
        return Err(Error::InvalidArgument("circuit edges must be alive and unforced".into()));
    }
    let mut include = vec![false; p];
    include[k] = pivot.action == Action::Include;
    if p > 1 {
        for step in 0..p {
            let i = (k + step) % p;
            let next = (i + 1) % p;
            let b = &circuit.blocks[i];
            let inc = (b.cut_forced + include[i] as usize) % 2 == 1;
            if next == k {
                if inc != include[k] {
                    return Ok(false);
                }
            } else {
                include[next] = inc;
            }
        }
    }
    for (i, &e) in circuit.edges.iter().enumerate() {
        if include[i] {
            inst.include(e);
            log.push(LogEntry::Include { edge: e });
        } else {
            inst.delete(e);
            log.push(LogEntry::Delete { edge: e });
        }
    }
    Ok(true)
}

fn eligible_component(inst: &Instance) -> Option<UComponent> {
    inst.u_components().into_iter().find(|h| !h.is_trivial() && !is_four_cycle(inst, h))
}

fn trivial_fallback(h: &UComponent, circuits: &[Circuit]) -> (Circuit, EdgeId) {
    if let Some(c) = circuits.iter().find(|c| !c.is_trivial()) {
        return (c.clone(), *c.edges.iter().min().unwrap());
    }
    let e = h.edges[0];
    (Circuit { host: h.id, edges: vec![e], blocks: Vec::new() }, e)
}

/// Circuit and pivot edge to branch on. Takes the first U-component that is
/// neither trivial nor a 4-cycle; inside it prefers a nontrivial circuit
/// without normal blocks, otherwise targets a minimal normal block and
/// pivots on one of its two circuit edges. `None` when every component is
/// trivial or a 4-cycle.
pub fn select_branch_circuit(inst: &Instance) -> Result<Option<(Circuit, EdgeId)>> {
    let Some(h) = eligible_component(inst) else { return Ok(None) };
    let circuits = circuit_partition(inst, &h)?;
    let quiet = |c: &Circuit| {
        !c.is_trivial() && c.blocks.iter().all(|b| matches!(b.kind, BlockKind::Trivial | BlockKind::TwoPendentCritical))
    };
    if let Some(c) = circuits.iter().find(|c| quiet(c)) {
        return Ok(Some((c.clone(), *c.edges.iter().min().unwrap())));
    }
    if circuits.iter().any(|c| c.blocks.iter().any(|b| b.kind == BlockKind::Normal)) {
        let (ci, bi) = find_minimal_normal_block(&circuits)?;
        let c = &circuits[ci];
        let p = c.edges.len();
        let pivot = c.edges[bi].min(c.edges[(bi + 1) % p]);
        return Ok(Some((c.clone(), pivot)));
    }
    Ok(Some(trivial_fallback(&h, &circuits)))
}

/// Lowest nontrivial circuit having a trivial block, else any nontrivial
/// circuit; pivot is its lowest edge.
pub fn select_branch_circuit_simple(inst: &Instance) -> Result<Option<(Circuit, EdgeId)>> {
    let Some(h) = eligible_component(inst) else { return Ok(None) };
    let circuits = circuit_partition(inst, &h)?;
    if let Some(c) = circuits.iter().find(|c| !c.is_trivial() && c.blocks.iter().any(|b| b.kind == BlockKind::Trivial)) {
        return Ok(Some((c.clone(), *c.edges.iter().min().unwrap())));
    }
    Ok(Some(trivial_fallback(&h, &circuits)))
}

/// A 4-cycle component: vertices in cyclic order and the two perfect
/// matchings `{a0, a2}`, `{a1, a3}`.
struct Square {
    matchings: [[EdgeId; 2]; 2],
    costs: [Weight; 2],
}

struct BaseCase {
    forced: Vec<EdgeId>,
    squares: Vec<Square>,
}

fn base_case(inst: &Instance) -> Result<BaseCase> {
    let mut squares = Vec::new();
    for h in inst.u_components() {
        if h.is_trivial() {
            let v = h.vertices[0];
            let d = inst.degrees_unchecked(v);
            if d.d_f != 2 {
                return invalid_state(format!("{v} outside every 4-cycle has {} forced edges", d.d_f));
            }
            continue;
        }
        if !is_four_cycle(inst, &h) {
            return invalid_state("U-component is neither trivial nor a 4-cycle");
        }
        for &v in &h.vertices {
            if inst.degrees_unchecked(v).d_f != 1 {
                return invalid_state(format!("4-cycle vertex {v} needs exactly one forced edge"));
            }
        }
        // walk the cycle
        let v0 = h.vertices[0];
        let mut order: Vec<EdgeId> = Vec::with_capacity(4);
        let mut cur = v0;
        let mut came: Option<EdgeId> = None;
        for _ in 0..4 {
            let e = *inst
                .graph
                .incident(cur)
                .iter()
                .find(|&&e| !inst.is_forced(e) && Some(e) != came)
                .expect("4-cycle vertex has two unforced edges");
            order.push(e);
            cur = inst.graph.edge(e).other(cur);
            came = Some(e);
        }
        if cur != v0 {
            return invalid_state("4-cycle walk did not close");
        }
        let m0 = [order[0], order[2]];
        let m1 = [order[1], order[3]];
        let c = |m: &[EdgeId; 2]| inst.weight(m[0]) + inst.weight(m[1]);
        squares.push(Square { costs: [c(&m0), c(&m1)], matchings: [m0, m1] });
    }
    Ok(BaseCase { forced: inst.forced_edges(), squares })
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

fn vertex_classes(inst: &Instance, edges: &[EdgeId]) -> (Dsu, usize) {
    let mut dsu = Dsu::new(inst.graph.vertex_bound());
    let mut merges = 0;
    for &e in edges {
        let (u, v) = inst.graph.edge(e).ends;
        if dsu.union(u.index(), v.index()) {
            merges += 1;
        }
    }
    (dsu, inst.n() - merges)
}

fn finish(inst: &Instance, mut edges: Vec<EdgeId>) -> TourResult {
    edges.sort();
    let cost = inst.cost_of(&edges);
    TourResult::Optimal { cost, edges }
}

/// Optimal tour when every U-component is trivial or a 4-cycle.
///
/// Each 4-cycle contributes one of its two perfect matchings. Starting from
/// the cheaper matching everywhere gives a minimum-cost 2-factor; a
/// minimum spanning tree over the swaps that join two of its cycles then
/// connects it at least extra cost.
pub fn solve_all_4cycles(inst: &Instance) -> Result<TourResult> {
    let base = base_case(inst)?;
    let mut chosen: Vec<usize> = base.squares.iter().map(|s| if s.costs[1] < s.costs[0] { 1 } else { 0 }).collect();
    let mut edges = base.forced.clone();
    for (s, &c) in base.squares.iter().zip(&chosen) {
        edges.extend(s.matchings[c]);
    }
    let (mut cycles, count) = vertex_classes(inst, &edges);
    if count == 1 {
        return Ok(finish(inst, edges));
    }
    let mut merges: Vec<(Weight, usize, usize, usize)> = Vec::new();
    for (j, s) in base.squares.iter().enumerate() {
        let m = s.matchings[chosen[j]];
        let a = cycles.find(inst.graph.edge(m[0]).ends.0.index());
        let b = cycles.find(inst.graph.edge(m[1]).ends.0.index());
        if a != b {
            merges.push((&s.costs[1 - chosen[j]] - &s.costs[chosen[j]], j, a, b));
        }
    }
    merges.sort();
    let mut tree = Dsu::new(inst.graph.vertex_bound());
    let mut joined = 1;
    for (_, j, a, b) in merges {
        if tree.union(a, b) {
            chosen[j] = 1 - chosen[j];
            joined += 1;
        }
    }
    if joined != count {
        return Ok(TourResult::Infeasible);
    }
    let mut edges = base.forced;
    for (s, &c) in base.squares.iter().zip(&chosen) {
        edges.extend(s.matchings[c]);
    }
    debug_assert_eq!(vertex_classes(inst, &edges).1, 1);
    Ok(finish(inst, edges))
}

/// Largest number of 4-cycles [`solve_all_4cycles_bruteforce`] accepts.
pub const BRUTEFORCE_MAX_SQUARES: usize = 20;

/// Tries all `2^k` matching combinations. Same preconditions as
/// [`solve_all_4cycles`].
pub fn solve_all_4cycles_bruteforce(inst: &Instance) -> Result<TourResult> {
    let base = base_case(inst)?;
    let k = base.squares.len();
    if k > BRUTEFORCE_MAX_SQUARES {
        return Err(Error::GuardExceeded(format!("{k} four-cycles exceed {BRUTEFORCE_MAX_SQUARES}")));
    }
    let mut best: Option<(Weight, Vec<EdgeId>)> = None;
    for mask in 0u32..(1 << k) {
        let mut edges = base.forced.clone();
        for (j, s) in base.squares.iter().enumerate() {
            edges.extend(s.matchings[((mask >> j) & 1) as usize]);
        }
        if vertex_classes(inst, &edges).1 != 1 {
            continue;
        }
        let cost = inst.cost_of(&edges);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, edges));
        }
    }
    Ok(match best {
        Some((_, edges)) => finish(inst, edges),
        None => TourResult::Infeasible,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Full,
    Simple,
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// Collect a [`MeasureReport`].
    pub audit: bool,
    /// Record every reduction step as a text line.
    pub trace: bool,
    /// Use the exhaustive base case instead of the spanning-tree one.
    pub fourcycle_bruteforce: bool,
    /// Evaluate both children concurrently above this depth.
    pub parallel_depth: usize,
    pub cfg: WeightConfig,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub max_depth: usize,
    pub base_cases: u64,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub result: TourResult,
    pub stats: SearchStats,
    pub report: Option<MeasureReport>,
    pub trace: Vec<String>,
}

#[derive(Default)]
struct Acc {
    stats: SearchStats,
    report: MeasureReport,
    trace: Vec<String>,
}

impl Acc {
    fn merge(&mut self, other: Acc) {
        self.stats.nodes += other.stats.nodes;
        self.stats.leaves += other.stats.leaves;
        self.stats.base_cases += other.stats.base_cases;
        self.stats.max_depth = self.stats.max_depth.max(other.stats.max_depth);
        self.report.absorb(other.report);
        self.trace.extend(other.trace);
    }

    fn leaf(&mut self) {
        self.stats.leaves += 1;
        self.report.leaves += 1;
    }
}

fn lift(result: TourResult, logs: &[&ReductionLog]) -> Result<TourResult> {
    match result {
        TourResult::Infeasible => Ok(TourResult::Infeasible),
        TourResult::Optimal { cost, mut edges } => {
            for log in logs {
                edges = log.expand(&edges)?;
            }
            Ok(TourResult::Optimal { cost, edges })
        }
    }
}

fn tiny_tour(inst: &Instance, tour: Vec<EdgeId>) -> TourResult {
    finish(inst, tour)
}

fn better(a: &TourResult, b: &TourResult) -> bool {
    match (a, b) {
        (TourResult::Optimal { cost: x, .. }, TourResult::Optimal { cost: y, .. }) => x < y,
        (TourResult::Optimal { .. }, TourResult::Infeasible) => true,
        _ => false,
    }
}

/// Reduces and solves one search node. Also returns the measure of the
/// reduced node (0 when it is infeasible or solved), if auditing.
fn node(mut inst: Instance, depth: usize, opts: &SolveOptions, acc: &mut Acc) -> Result<(TourResult, Weight)> {
    acc.stats.nodes += 1;
    acc.report.nodes += 1;
    acc.stats.max_depth = acc.stats.max_depth.max(depth);
    let track = opts.audit || opts.trace;
    let mu_before = if opts.audit { measure(&opts.cfg, &inst) } else { Weight::zero() };
    let mut log = ReductionLog::default();
    let fix = reduce_in_place(&mut inst, &mut log, &ReduceOptions { cfg: opts.cfg.clone(), track })?;
    for s in &fix.steps {
        if opts.audit {
            acc.report.record(&audit_values(s.mu_before.clone(), s.mu_after.clone(), s.kind.name()));
        }
        if opts.trace {
            acc.trace.push(format!("{} size={} delta={} depth={depth}", s.kind.name(), s.size, s.delta()));
        }
    }
    let result = match fix.outcome {
        Outcome::Infeasible(_) => {
            acc.leaf();
            return Ok((TourResult::Infeasible, Weight::zero()));
        }
        Outcome::Solved(tour) => {
            acc.leaf();
            return Ok((lift(tiny_tour(&inst, tour), &[&log])?, Weight::zero()));
        }
        Outcome::Reduced => {
            let mu_node = if opts.audit { measure(&opts.cfg, &inst) } else { Weight::zero() };
            let pick = match opts.strategy {
                Strategy::Full => select_branch_circuit(&inst)?,
                Strategy::Simple => select_branch_circuit_simple(&inst)?,
            };
            match pick {
                None => {
                    acc.leaf();
                    acc.stats.base_cases += 1;
                    let r = if opts.fourcycle_bruteforce {
                        solve_all_4cycles_bruteforce(&inst)?
                    } else {
                        solve_all_4cycles(&inst)?
                    };
                    (r, mu_node)
                }
                Some((circuit, pivot)) => {
                    let r = branch(&inst, &circuit, pivot, depth, opts, acc, mu_before, mu_node.clone())?;
                    (r, mu_node)
                }
            }
        }
    };
    Ok((lift(result.0, &[&log])?, result.1))
}

fn branch(
    inst: &Instance,
    circuit: &Circuit,
    pivot: EdgeId,
    depth: usize,
    opts: &SolveOptions,
    acc: &mut Acc,
    mu_before: Weight,
    mu_node: Weight,
) -> Result<TourResult> {
    let child = |action: Action, acc: &mut Acc| -> Result<(TourResult, Weight)> {
        let mut next = inst.clone();
        let mut clog = ReductionLog::default();
        let ok = circuit_procedure(&mut next, circuit, Decision { edge: pivot, action }, &mut clog)?;
        let stop = if ok { cascade(&mut next, &mut clog)?.1 } else { Some(Outcome::Infeasible(crate::reductions::Witness::OddBlockCount)) };
        let (result, mu_child) = match stop {
            Some(Outcome::Infeasible(_)) => {
                acc.stats.nodes += 1;
                acc.report.nodes += 1;
                acc.stats.max_depth = acc.stats.max_depth.max(depth + 1);
                acc.leaf();
                (TourResult::Infeasible, Weight::zero())
            }
            Some(Outcome::Solved(tour)) => {
                acc.stats.nodes += 1;
                acc.report.nodes += 1;
                acc.stats.max_depth = acc.stats.max_depth.max(depth + 1);
                acc.leaf();
                (tiny_tour(&next, tour), Weight::zero())
            }
            _ => node(next, depth + 1, opts, acc)?,
        };
        Ok((lift(result, &[&clog])?, mu_child))
    };
    let ((inc, mu_inc), (del, mu_del)) = if depth < opts.parallel_depth {
        let mut a = Acc::default();
        let mut b = Acc::default();
        let (ra, rb) = rayon::join(|| child(Action::Include, &mut a), || child(Action::Delete, &mut b));
        acc.merge(a);
        acc.merge(b);
        (ra?, rb?)
    } else {
        let ra = child(Action::Include, acc)?;
        let rb = child(Action::Delete, acc)?;
        (ra, rb)
    };
    if opts.audit {
        let mut deltas = Vec::with_capacity(2);
        for mu in [&mu_inc, &mu_del] {
            let rec = audit_values(mu_node.clone(), mu.clone(), "branch");
            acc.report.record(&rec);
            deltas.push(rec.delta);
        }
        let a = alpha();
        let sum: f64 = deltas.iter().map(|d| a.powf(-d.to_f64().unwrap_or(f64::INFINITY))).sum();
        if sum > 1.0 + 1e-12 {
            acc.report.warnings.push(format!(
                "depth {depth}: branch decreases {} and {} exceed the bound (sum {sum:.6})",
                deltas[0], deltas[1]
            ));
        }
        acc.report.records.push(NodeRecord { depth, mu_before, mu_after: mu_node, child_deltas: deltas });
    }
    Ok(if better(&del, &inc) { del } else { inc })
}

/// Solves with default options.
pub fn solve(inst: &Instance) -> Result<TourResult> {
    Ok(solve_with(inst, &SolveOptions::default())?.result)
}

/// Solves `inst`, returning an optimal tour in its edge ids.
pub fn solve_with(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    inst.validate_degrees()?;
    let mut acc = Acc::default();
    if opts.audit {
        acc.report = MeasureReport::new(measure(&opts.cfg, inst));
    }
    let (result, _) = node(inst.clone(), 0, opts, &mut acc)?;
    if let TourResult::Optimal { cost, edges } = &result {
        if !inst.is_tour(edges) {
            return Err(Error::Internal("lifted edge set is not a tour".into()));
        }
        if inst.cost_of(edges) != *cost {
            return Err(Error::Internal("lifted tour cost differs from the reduced cost".into()));
        }
    }
    Ok(Solution {
        result,
        stats: acc.stats,
        report: opts.audit.then_some(acc.report),
        trace: acc.trace,
    })
}
