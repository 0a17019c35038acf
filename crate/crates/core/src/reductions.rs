//! Polynomial-time rewrites: feasibility screening, cleanup of forced
//! structure, parallel edges, reducible circuits, 3-cut and 4-cut
//! replacements, and the fixpoint driver.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::analysis::{measure, WeightConfig};
use crate::connectivity::{circuit_partition, graph_bridges, u_bridges, View};
use crate::error::{invalid_arg, invalid_state, Result};
use crate::graph::{Contraction, EdgeId, Instance, Parity, Sign, UComponent, VertexId, Weight};
use crate::log::{AddedEdge, CutPort, LogEntry, PathEdge, ReductionLog};
use crate::search::{circuit_procedure, Action, Decision};

/// Largest subgraph replaced by a cut reduction.
pub const MAX_CUT_VERTICES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Witness {
    Not2ec,
    OddComponent,
    OddBlockCount,
    ForcedSubcycle,
    DegreeDeficit,
}

impl Witness {
    pub fn name(self) -> &'static str {
        match self {
            Witness::Not2ec => "not_2ec",
            Witness::OddComponent => "odd_component",
            Witness::OddBlockCount => "odd_block_count",
            Witness::ForcedSubcycle => "forced_subcycle",
            Witness::DegreeDeficit => "degree_deficit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    FeasibleUnknown,
    Infeasible(Witness),
}

/// Result of running the reductions to a fixpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// No rule applies; the instance is reduced.
    Reduced,
    /// The instance collapsed to at most two vertices and was solved; the
    /// tour is given in the ids of the rewritten instance.
    Solved(Vec<EdgeId>),
    Infeasible(Witness),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    Cleanup,
    Parallel,
    Reducible,
    ThreeCut,
    FourCut,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Cleanup => "cleanup",
            StepKind::Parallel => "parallel",
            StepKind::Reducible => "reducible",
            StepKind::ThreeCut => "3cut",
            StepKind::FourCut => "4cut",
        }
    }
}

/// One rule application with the measure around it. Infeasible and solved
/// instances have measure 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub kind: StepKind,
    /// Vertices of the replaced subgraph, edges of the processed circuit, or
    /// 0 for cleanup.
    pub size: usize,
    pub mu_before: Weight,
    pub mu_after: Weight,
}

impl StepRecord {
    pub fn delta(&self) -> Weight {
        &self.mu_before - &self.mu_after
    }
}

#[derive(Clone, Debug, Default)]
pub struct ReduceOptions {
    pub cfg: WeightConfig,
    /// Measure every step and return the records.
    pub track: bool,
}

#[derive(Clone, Debug)]
pub struct Fixpoint {
    pub outcome: Outcome,
    pub steps: Vec<StepRecord>,
}

/// Whether an eliminable edge is included or deleted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elimination {
    Include,
    Delete,
}

fn degree_check(inst: &Instance) -> Option<Outcome> {
    for v in inst.graph.vertices() {
        let d = inst.degrees_unchecked(v);
        if d.d < 2 || d.d_f > 2 {
            return Some(Outcome::Infeasible(Witness::DegreeDeficit));
        }
    }
    None
}

/// Solves an instance with at most two vertices directly.
fn solve_tiny(inst: &Instance) -> Outcome {
    if inst.n() < 2 {
        return Outcome::Infeasible(Witness::DegreeDeficit);
    }
    let mut forced: Vec<EdgeId> = inst.forced_edges();
    if forced.len() > 2 {
        return Outcome::Infeasible(Witness::ForcedSubcycle);
    }
    let mut unforced: Vec<EdgeId> = inst.unforced_edges();
    unforced.sort_by(|&a, &b| inst.weight(a).cmp(inst.weight(b)).then(a.cmp(&b)));
    for e in unforced {
        if forced.len() == 2 {
            break;
        }
        forced.push(e);
    }
    if forced.len() < 2 {
        return Outcome::Infeasible(Witness::DegreeDeficit);
    }
    forced.sort();
    Outcome::Solved(forced)
}

/// `Include` iff the 1-pendent vertex set has an odd number of forced
/// boundary edges.
pub fn determine_eliminable(inst: &Instance, h: &[VertexId]) -> Result<Elimination> {
    let cut = inst.cut(h)?;
    if cut.unforced.len() != 1 {
        return invalid_arg(format!("expected one unforced boundary edge, found {}", cut.unforced.len()));
    }
    Ok(if cut.forced.len() % 2 == 1 { Elimination::Include } else { Elimination::Delete })
}

/// The lowest unforced bridge of some U-component and its decision.
fn find_eliminable(inst: &Instance) -> Option<(EdgeId, Elimination)> {
    for h in inst.u_components() {
        if h.is_trivial() {
            continue;
        }
        let bridges = u_bridges(inst, &h);
        let Some(&e) = bridges.first() else { continue };
        // side of the bridge containing its first endpoint
        let view = {
            let mut v = View::new(inst, &h.vertices, |f| !inst.is_forced(f));
            let le = v.local_edge(e).unwrap();
            v.set_excluded(&[le]);
            v
        };
        let (_, label) = view.components();
        let a = inst.graph.edge(e).ends.0;
        let la = label[view.local[a.index()] as usize];
        let side: Vec<VertexId> =
            view.verts.iter().enumerate().filter(|(i, _)| label[*i] == la).map(|(_, &v)| v).collect();
        let decision = determine_eliminable(inst, &side).expect("bridge side is 1-pendent");
        return Some((e, decision));
    }
    None
}

/// Applies the rules that follow mechanically from forced structure until
/// none applies: degree screening, deleting the third edge at vertices with
/// two forced edges, contracting forced paths and deciding eliminable edges.
/// Returns whether anything changed and a terminal outcome if one was hit.
pub(crate) fn cascade(inst: &mut Instance, log: &mut ReductionLog) -> Result<(bool, Option<Outcome>)> {
    let mut changed = false;
    loop {
        if let Some(o) = degree_check(inst) {
            return Ok((changed, Some(o)));
        }
        if inst.n() <= 2 {
            return Ok((changed, Some(solve_tiny(inst))));
        }
        let third = inst.graph.vertices().find_map(|v| {
            let d = inst.degrees_unchecked(v);
            if d.d_f == 2 && d.d == 3 {
                inst.graph.incident(v).iter().copied().find(|&e| !inst.is_forced(e))
            } else {
                None
            }
        });
        if let Some(e) = third {
            inst.delete(e);
            log.push(LogEntry::Delete { edge: e });
            changed = true;
            continue;
        }
        if inst.graph.vertices().any(|v| {
            let d = inst.degrees_unchecked(v);
            d.d == 2 && d.d_f == 2
        }) {
            changed = true;
            match inst.contract_forced_paths(log)? {
                Contraction::Done => continue,
                Contraction::Infeasible => return Ok((true, Some(Outcome::Infeasible(Witness::ForcedSubcycle)))),
                Contraction::Solved => return Ok((true, Some(solve_tiny(inst)))),
            }
        }
        if let Some((e, decision)) = find_eliminable(inst) {
            match decision {
                Elimination::Include => {
                    inst.include(e);
                    log.push(LogEntry::Include { edge: e });
                }
                Elimination::Delete => {
                    inst.delete(e);
                    log.push(LogEntry::Delete { edge: e });
                }
            }
            changed = true;
            continue;
        }
        return Ok((changed, None));
    }
}

/// Screens for a bridge or disconnection, a circuit with an odd number of
/// odd blocks, and an odd U-component.
pub fn check_feasibility(inst: &Instance) -> Result<Feasibility> {
    let (connected, bridges) = graph_bridges(inst);
    if !connected || !bridges.is_empty() {
        return Ok(Feasibility::Infeasible(Witness::Not2ec));
    }
    let comps = inst.u_components();
    for h in &comps {
        if h.is_trivial() || !u_bridges(inst, h).is_empty() {
            continue;
        }
        for c in circuit_partition(inst, h)? {
            if !c.is_trivial() && c.odd_blocks() % 2 == 1 {
                return Ok(Feasibility::Infeasible(Witness::OddBlockCount));
            }
        }
    }
    if comps.iter().any(|h| h.parity() == Parity::Odd) {
        return Ok(Feasibility::Infeasible(Witness::OddComponent));
    }
    Ok(Feasibility::FeasibleUnknown)
}

fn find_parallel(inst: &Instance) -> Option<(VertexId, VertexId)> {
    for e in inst.graph.edges() {
        let (u, v) = e.ends;
        if inst.graph.edges_between(u, v).len() >= 2 {
            return Some((u, v));
        }
    }
    None
}

/// Resolves a bundle of parallel edges between `u` and `v`. Returns a
/// terminal outcome when the instance is solved or found infeasible.
pub fn reduce_parallel(inst: &mut Instance, u: VertexId, v: VertexId, log: &mut ReductionLog) -> Result<Option<Outcome>> {
    let bundle = inst.graph.edges_between(u, v);
    if bundle.len() < 2 {
        return invalid_arg(format!("no parallel edges between {u} and {v}"));
    }
    if inst.n() == 2 {
        return Ok(Some(solve_tiny(inst)));
    }
    let forced: Vec<EdgeId> = bundle.iter().copied().filter(|&e| inst.is_forced(e)).collect();
    if forced.len() >= 2 {
        return Ok(Some(Outcome::Infeasible(Witness::ForcedSubcycle)));
    }
    let mut unforced: Vec<EdgeId> = bundle.iter().copied().filter(|&e| !inst.is_forced(e)).collect();
    unforced.sort_by(|&a, &b| inst.weight(a).cmp(inst.weight(b)).then(a.cmp(&b)));
    let keep = if forced.is_empty() { 1 } else { 0 };
    for &e in &unforced[keep..] {
        inst.delete(e);
        log.push(LogEntry::Delete { edge: e });
    }
    Ok(None)
}

/// An unforced edge lying in a 2-edge cut of the whole graph.
pub fn find_reducible_edge(inst: &Instance) -> Option<EdgeId> {
    for v in inst.graph.vertices() {
        if inst.graph.incident(v).len() == 2 {
            if let Some(&e) = inst.graph.incident(v).iter().filter(|&&e| !inst.is_forced(e)).min() {
                return Some(e);
            }
        }
    }
    let mut view = View::whole(inst);
    let mut out = Vec::new();
    for le in 0..view.m() as u32 {
        let e = view.edges[le as usize];
        if inst.is_forced(e) {
            continue;
        }
        view.set_excluded(&[le]);
        view.bridges(&mut out);
        view.clear_excluded(&[le]);
        if !out.is_empty() {
            return Some(e);
        }
    }
    None
}

/// Includes the reducible edge `e` and propagates along its circuit.
/// Returns the number of circuit edges and a terminal outcome if one was
/// hit.
pub fn process_reducible_circuit(inst: &mut Instance, e: EdgeId, log: &mut ReductionLog) -> Result<(usize, Option<Outcome>)> {
    if !inst.graph.is_edge_alive(e) || inst.is_forced(e) {
        return invalid_arg(format!("{e} is not an alive unforced edge"));
    }
    let a = inst.graph.edge(e).ends.0;
    let h = inst.u_components().into_iter().find(|h| h.contains(a)).expect("vertex has a component");
    let circuits = circuit_partition(inst, &h)?;
    let c = circuits.into_iter().find(|c| c.edges.contains(&e)).expect("edge lies on a circuit");
    let size = c.edges.len();
    if !circuit_procedure(inst, &c, Decision { edge: e, action: Action::Include }, log)? {
        return Ok((size, Some(Outcome::Infeasible(Witness::OddBlockCount))));
    }
    let (_, stop) = cascade(inst, log)?;
    Ok((size, stop))
}

/// A minimum-cost way to cover a vertex set by disjoint paths joining given
/// pairs of ports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSolution {
    pub cost: Weight,
    /// One edge list per requested pair, walked from its first port.
    pub paths: Vec<Vec<EdgeId>>,
}

impl PathSolution {
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut all: Vec<EdgeId> = self.paths.iter().flatten().copied().collect();
        all.sort();
        all
    }
}

/// Covers every vertex of `xs` by vertex-disjoint paths inside `xs`, one per
/// pair in `pairs`, using every forced edge inside `xs`. `ports[i]` is the
/// vertex where port `i` attaches; ports outside `pairs` stay unused. Ports
/// sharing a vertex and paired together are joined by an empty path. Exact
/// search; `xs` may hold at most [`MAX_CUT_VERTICES`] vertices.
pub fn solve_internal_paths(
    inst: &Instance,
    xs: &[VertexId],
    ports: &[VertexId],
    pairs: &[(usize, usize)],
) -> Result<Option<PathSolution>> {
    if xs.len() > MAX_CUT_VERTICES {
        return invalid_arg(format!("subgraph of {} vertices exceeds {MAX_CUT_VERTICES}", xs.len()));
    }
    let mask = inst.vertex_mask(xs);
    if ports.iter().any(|p| !mask[p.index()]) {
        return invalid_arg("port outside the subgraph");
    }
    let local = |v: VertexId| xs.iter().position(|&x| x == v).unwrap();
    let k = xs.len();
    let mut used = vec![0usize; k];
    for &(a, b) in pairs {
        used[local(ports[a])] += 1;
        used[local(ports[b])] += 1;
    }
    if used.iter().any(|&u| u > 2) {
        return Ok(None);
    }
    let need: Vec<usize> = used.iter().map(|&u| 2 - u).collect();
    let mut edges: Vec<EdgeId> = Vec::new();
    for &v in xs {
        for &e in inst.graph.incident(v) {
            let edge = inst.graph.edge(e);
            if edge.ends.0 == v && mask[edge.ends.1.index()] {
                edges.push(e);
            }
        }
    }
    edges.sort();
    let ends: Vec<(usize, usize)> = edges
        .iter()
        .map(|&e| {
            let (a, b) = inst.graph.edge(e).ends;
            (local(a), local(b))
        })
        .collect();
    let mut remaining = vec![0usize; k];
    for &(a, b) in &ends {
        remaining[a] += 1;
        remaining[b] += 1;
    }
    struct Search<'a> {
        inst: &'a Instance,
        edges: &'a [EdgeId],
        ends: &'a [(usize, usize)],
        need: &'a [usize],
        ports: Vec<usize>,
        pairs: &'a [(usize, usize)],
        deg: Vec<usize>,
        remaining: Vec<usize>,
        chosen: Vec<usize>,
        best: Option<PathSolution>,
    }
    impl Search<'_> {
        fn run(&mut self, i: usize) {
            if i == self.edges.len() {
                if self.deg == self.need {
                    self.evaluate();
                }
                return;
            }
            let (a, b) = self.ends[i];
            let forced = self.inst.is_forced(self.edges[i]);
            self.remaining[a] -= 1;
            self.remaining[b] -= 1;
            // take edge i
            if self.deg[a] < self.need[a] && self.deg[b] < self.need[b] {
                self.deg[a] += 1;
                self.deg[b] += 1;
                self.chosen.push(i);
                if self.feasible(a) && self.feasible(b) {
                    self.run(i + 1);
                }
                self.chosen.pop();
                self.deg[a] -= 1;
                self.deg[b] -= 1;
            }
            // skip edge i
            if !forced && self.feasible(a) && self.feasible(b) {
                self.run(i + 1);
            }
            self.remaining[a] += 1;
            self.remaining[b] += 1;
        }

        fn feasible(&self, v: usize) -> bool {
            self.deg[v] + self.remaining[v] >= self.need[v]
        }

        fn evaluate(&mut self) {
            let k = self.need.len();
            let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
            for &i in &self.chosen {
                let (a, b) = self.ends[i];
                adj[a].push(i);
                adj[b].push(i);
            }
            let mut paths = Vec::with_capacity(self.pairs.len());
            let mut covered = 0;
            for &(pa, pb) in self.pairs {
                let (s, t) = (self.ports[pa], self.ports[pb]);
                if s == t {
                    paths.push(Vec::new());
                    continue;
                }
                if self.need[s] != 1 || self.need[t] != 1 {
                    return;
                }
                let mut path = Vec::new();
                let mut cur = s;
                let mut came: Option<usize> = None;
                loop {
                    let next = adj[cur].iter().copied().find(|&i| Some(i) != came);
                    let Some(i) = next else { break };
                    path.push(self.edges[i]);
                    let (a, b) = self.ends[i];
                    cur = if a == cur { b } else { a };
                    came = Some(i);
                    if adj[cur].len() == 1 {
                        break;
                    }
                }
                if cur != t {
                    return;
                }
                covered += path.len();
                paths.push(path);
            }
            if covered != self.chosen.len() {
                return;
            }
            let cost = self.chosen.iter().fold(Weight::zero(), |acc, &i| acc + self.inst.weight(self.edges[i]));
            if self.best.as_ref().is_none_or(|b| cost < b.cost) {
                self.best = Some(PathSolution { cost, paths });
            }
        }
    }
    let mut search = Search {
        inst,
        edges: &edges,
        ends: &ends,
        need: &need,
        ports: ports.iter().map(|&p| local(p)).collect(),
        pairs,
        deg: vec![0; k],
        remaining,
        chosen: Vec::new(),
        best: None,
    };
    search.run(0);
    Ok(search.best)
}

fn sorted(mut xs: Vec<VertexId>) -> Vec<VertexId> {
    xs.sort();
    xs.dedup();
    xs
}

fn proper_subset(inst: &Instance, xs: &[VertexId]) -> Result<()> {
    if xs.is_empty() || xs.len() >= inst.n() || xs.iter().any(|&v| !inst.graph.is_vertex_alive(v)) {
        return invalid_arg("cut side must be a nonempty proper subset of the alive vertices");
    }
    Ok(())
}

/// Replaces a subgraph with three boundary edges by a single vertex whose
/// three edges price the three ways a tour can pass through it.
pub fn reduce_3cut(inst: &mut Instance, xs: &[VertexId], log: &mut ReductionLog) -> Result<()> {
    let xs = sorted(xs.to_vec());
    proper_subset(inst, &xs)?;
    if xs.len() > MAX_CUT_VERTICES {
        return invalid_arg(format!("subgraph of {} vertices exceeds {MAX_CUT_VERTICES}", xs.len()));
    }
    let mask = inst.vertex_mask(&xs);
    let mut cut = inst.cut_of_mask(&mask).all();
    cut.sort();
    if cut.len() != 3 {
        return invalid_arg(format!("subgraph has {} boundary edges, expected 3", cut.len()));
    }
    let inside_outside = |e: EdgeId| {
        let (a, b) = inst.graph.edge(e).ends;
        if mask[a.index()] {
            (a, b)
        } else {
            (b, a)
        }
    };
    let ports: Vec<VertexId> = cut.iter().map(|&e| inside_outside(e).0).collect();
    let outer: Vec<VertexId> = cut.iter().map(|&e| inside_outside(e).1).collect();
    let cost: Vec<Weight> = cut.iter().map(|&e| inst.weight(e).clone()).collect();
    let mut sols: Vec<Option<PathSolution>> = Vec::with_capacity(3);
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let (j, k) = (j.min(k), j.max(k));
        let s = if inst.is_forced(cut[i]) { None } else { solve_internal_paths(inst, &xs, &ports, &[(j, k)])? };
        sols.push(s);
    }
    let feasible: Vec<usize> = (0..3).filter(|&i| sols[i].is_some()).collect();
    let s_cost = |i: usize| sols[i].as_ref().unwrap().cost.clone();
    let mut weight = cost.clone();
    let mut sign = [Sign::Unforced; 3];
    match feasible.len() {
        3 => {
            let half = Weight::new(BigInt::from(1), BigInt::from(2));
            let total = s_cost(0) + s_cost(1) + s_cost(2);
            for i in 0..3 {
                weight[i] = &cost[i] + &half * &total - s_cost(i);
            }
        }
        2 => {
            let i0 = (0..3).find(|i| !feasible.contains(i)).unwrap();
            sign[i0] = Sign::Forced;
            let (a, b) = (feasible[0], feasible[1]);
            weight[b] = &cost[b] + s_cost(a);
            weight[a] = &cost[a] + s_cost(b);
        }
        1 => {
            let i = feasible[0];
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            sign[j] = Sign::Forced;
            sign[k] = Sign::Forced;
            weight[j] = &cost[j] + s_cost(i);
        }
        _ => sign = [Sign::Forced; 3],
    }
    for &v in &xs {
        inst.graph.remove_vertex(v);
    }
    let x = inst.graph.add_vertex();
    let mut new_ports = Vec::with_capacity(3);
    for i in 0..3 {
        let id = inst.graph.add_edge(x, outer[i], weight[i].clone(), sign[i])?;
        new_ports.push(CutPort {
            old: cut[i],
            new: AddedEdge { id, ends: (x, outer[i]), weight: weight[i].clone(), sign: sign[i] },
        });
    }
    let solutions = [0, 1, 2].map(|i| sols[i].as_ref().map(|s| s.edges()));
    log.push(LogEntry::ThreeCut {
        removed_vertices: xs,
        new_vertex: x,
        ports: new_ports.try_into().expect("three ports"),
        solutions,
    });
    Ok(())
}

/// The three ways to pair four ports.
const PAIRINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

/// Boundary edges (by id) and their inner endpoints when `xs` has exactly
/// four forced and no unforced boundary edges at four distinct vertices.
fn four_cut_ports(inst: &Instance, xs: &[VertexId]) -> Option<([EdgeId; 4], [VertexId; 4])> {
    if xs.len() > MAX_CUT_VERTICES || xs.len() < 4 || xs.len() >= inst.n() {
        return None;
    }
    let mask = inst.vertex_mask(xs);
    let cut = inst.cut_of_mask(&mask);
    if !cut.unforced.is_empty() || cut.forced.len() != 4 {
        return None;
    }
    let mut edges = cut.forced.clone();
    edges.sort();
    let attach: Vec<VertexId> = edges
        .iter()
        .map(|&e| {
            let (a, b) = inst.graph.edge(e).ends;
            if mask[a.index()] {
                a
            } else {
                b
            }
        })
        .collect();
    if sorted(attach.clone()).len() != 4 {
        return None;
    }
    Some((edges.try_into().unwrap(), attach.try_into().unwrap()))
}

fn four_cut_solutions(inst: &Instance, xs: &[VertexId], attach: &[VertexId; 4]) -> Result<[Option<PathSolution>; 3]> {
    let mut out: [Option<PathSolution>; 3] = [None, None, None];
    for (i, pairing) in PAIRINGS.iter().enumerate() {
        out[i] = solve_internal_paths(inst, xs, attach, pairing)?;
    }
    Ok(out)
}

/// True when `xs` has four forced boundary edges at distinct vertices, no
/// unforced boundary edge, and some pairing of the four ports admits no
/// covering pair of paths.
pub fn is_4cut_reducible(inst: &Instance, xs: &[VertexId]) -> Result<bool> {
    let xs = sorted(xs.to_vec());
    let Some((_, attach)) = four_cut_ports(inst, &xs) else { return Ok(false) };
    Ok(four_cut_solutions(inst, &xs, &attach)?.iter().any(|s| s.is_none()))
}

/// Replaces the interior of a 4-cut reducible subgraph: nothing when no
/// pairing is feasible, two forced edges when one is, and a 4-cycle of
/// unforced edges when two are.
pub fn reduce_4cut(inst: &mut Instance, xs: &[VertexId], log: &mut ReductionLog) -> Result<()> {
    let xs = sorted(xs.to_vec());
    let Some((_, attach)) = four_cut_ports(inst, &xs) else {
        return invalid_arg("subgraph is not a 4-cut candidate");
    };
    let sols = four_cut_solutions(inst, &xs, &attach)?;
    let feasible: Vec<usize> = (0..3).filter(|&i| sols[i].is_some()).collect();
    if feasible.len() == 3 {
        return invalid_state("every pairing is feasible; not 4-cut reducible");
    }
    let sign = if feasible.len() == 1 { Sign::Forced } else { Sign::Unforced };
    let mut planned = Vec::new();
    for &i in &feasible {
        let sol = sols[i].as_ref().unwrap();
        for (p, &(a, b)) in PAIRINGS[i].iter().enumerate() {
            let path = sol.paths[p].clone();
            let w = path.iter().fold(Weight::zero(), |acc, &e| acc + inst.weight(e));
            planned.push(((attach[a], attach[b]), w, path));
        }
    }
    let interior: Vec<VertexId> = xs.iter().copied().filter(|v| !attach.contains(v)).collect();
    for &v in &interior {
        inst.graph.remove_vertex(v);
    }
    let mut removed_edges: BTreeSet<EdgeId> = BTreeSet::new();
    for &a in &attach {
        for &e in inst.graph.incident(a) {
            if attach.contains(&inst.graph.edge(e).other(a)) {
                removed_edges.insert(e);
            }
        }
    }
    for &e in &removed_edges {
        inst.delete(e);
    }
    let mut added = Vec::new();
    for (ends, w, path) in planned {
        let id = inst.graph.add_edge(ends.0, ends.1, w.clone(), sign)?;
        added.push(PathEdge { edge: AddedEdge { id, ends, weight: w, sign }, path });
    }
    log.push(LogEntry::FourCut { removed_vertices: interior, removed_edges: removed_edges.into_iter().collect(), attach, added });
    Ok(())
}

/// A subgraph on which a cut reduction applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutCandidate {
    Three(Vec<VertexId>),
    Four(Vec<VertexId>),
}

/// Smallest vertex set (ties by vertex list) of at least two and at most
/// [`MAX_CUT_VERTICES`] vertices with exactly three boundary edges. Expects
/// a 2-edge-connected graph.
pub fn find_three_cut(inst: &Instance) -> Option<Vec<VertexId>> {
    let n = inst.n();
    let mut view = View::whole(inst);
    let m = view.m() as u32;
    let mut out = Vec::new();
    let mut best: Option<Vec<VertexId>> = None;
    let consider = |side: Vec<VertexId>, best: &mut Option<Vec<VertexId>>| {
        if side.len() < 2 || side.len() > MAX_CUT_VERTICES || side.len() >= n {
            return;
        }
        let better = match best {
            None => true,
            Some(b) => (side.len(), &side) < (b.len(), b),
        };
        if better {
            *best = Some(side);
        }
    };
    for e in 0..m {
        for f in e + 1..m {
            view.set_excluded(&[e, f]);
            view.bridges(&mut out);
            let found: Vec<u32> = out.iter().copied().filter(|&g| g > f).collect();
            for g in found {
                view.set_excluded(&[g]);
                let (_, label) = view.components();
                view.clear_excluded(&[g]);
                let (a, b) = inst.graph.edge(view.edges[g as usize]).ends;
                for end in [a, b] {
                    let l = label[view.local[end.index()] as usize];
                    let side: Vec<VertexId> =
                        view.verts.iter().enumerate().filter(|(i, _)| label[*i] == l).map(|(_, &v)| v).collect();
                    if side.len() < 2 || side.len() > MAX_CUT_VERTICES {
                        continue;
                    }
                    let mask = inst.vertex_mask(&side);
                    if inst.cut_of_mask(&mask).len() == 3 {
                        consider(side, &mut best);
                    }
                }
            }
            view.clear_excluded(&[e, f]);
        }
    }
    best
}

/// Smallest connected union of U-components (at most
/// [`MAX_CUT_VERTICES`] vertices) that is 4-cut reducible and whose
/// replacement shrinks the instance.
pub fn find_four_cut(inst: &Instance) -> Result<Option<Vec<VertexId>>> {
    let comps = inst.u_components();
    let mut label = vec![usize::MAX; inst.graph.vertex_bound()];
    for h in &comps {
        for &v in &h.vertices {
            label[v.index()] = h.id;
        }
    }
    let k = comps.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for e in inst.graph.edges() {
        if e.is_forced() {
            let (a, b) = (label[e.ends.0.index()], label[e.ends.1.index()]);
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    let mut sets: Vec<Vec<usize>> = Vec::new();
    fn extend(
        comps: &[UComponent],
        adj: &[BTreeSet<usize>],
        start: usize,
        sub: &mut Vec<usize>,
        size: usize,
        ext: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(sub.clone());
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let wsize = comps[w].vertices.len();
            if size + wsize > MAX_CUT_VERTICES {
                continue;
            }
            let mut next = ext.clone();
            for &u in &adj[w] {
                if u > start && !sub.contains(&u) && u != w && !next.contains(&u) && !sub.iter().any(|&s| adj[s].contains(&u)) {
                    next.push(u);
                }
            }
            sub.push(w);
            extend(comps, adj, start, sub, size + wsize, next, out);
            sub.pop();
        }
    }
    for s in 0..k {
        let size = comps[s].vertices.len();
        if size > MAX_CUT_VERTICES {
            continue;
        }
        let ext: Vec<usize> = adj[s].iter().copied().filter(|&u| u > s).collect();
        extend(&comps, &adj, s, &mut vec![s], size, ext, &mut sets);
    }
    let mut best: Option<Vec<VertexId>> = None;
    for set in sets {
        let xs = sorted(set.iter().flat_map(|&c| comps[c].vertices.iter().copied()).collect());
        if let Some(b) = &best {
            if (xs.len(), &xs) >= (b.len(), b) {
                continue;
            }
        }
        let Some((_, attach)) = four_cut_ports(inst, &xs) else { continue };
        let sols = four_cut_solutions(inst, &xs, &attach)?;
        let feasible = sols.iter().filter(|s| s.is_some()).count();
        if feasible == 3 || (feasible == 2 && xs.len() == 4) {
            continue;
        }
        best = Some(xs);
    }
    Ok(best)
}

/// First 3-cut candidate, else first 4-cut candidate.
pub fn find_small_cut_candidate(inst: &Instance) -> Result<Option<CutCandidate>> {
    if let Some(x) = find_three_cut(inst) {
        return Ok(Some(CutCandidate::Three(x)));
    }
    Ok(find_four_cut(inst)?.map(CutCandidate::Four))
}

/// Runs the reductions on `inst` until none applies, appending every rewrite
/// to `log`.
pub fn reduce_in_place(inst: &mut Instance, log: &mut ReductionLog, opts: &ReduceOptions) -> Result<Fixpoint> {
    let mut steps = Vec::new();
    let mut mu = if opts.track { measure(&opts.cfg, inst) } else { Weight::zero() };
    let record = |kind: StepKind, size: usize, inst: &Instance, stop: &Option<Outcome>, mu: &mut Weight, steps: &mut Vec<StepRecord>| {
        if !opts.track {
            return;
        }
        let after = if stop.is_some() { Weight::zero() } else { measure(&opts.cfg, inst) };
        steps.push(StepRecord { kind, size, mu_before: mu.clone(), mu_after: after.clone() });
        *mu = after;
    };
    loop {
        let (changed, stop) = cascade(inst, log)?;
        if changed || stop.is_some() {
            record(StepKind::Cleanup, 0, inst, &stop, &mut mu, &mut steps);
        }
        if let Some(outcome) = stop {
            return Ok(Fixpoint { outcome, steps });
        }
        if let Feasibility::Infeasible(w) = check_feasibility(inst)? {
            let stop = Some(Outcome::Infeasible(w));
            record(StepKind::Cleanup, 0, inst, &stop, &mut mu, &mut steps);
            return Ok(Fixpoint { outcome: stop.unwrap(), steps });
        }
        let (kind, size, stop) = if let Some((u, v)) = find_parallel(inst) {
            let mut stop = reduce_parallel(inst, u, v, log)?;
            if stop.is_none() {
                stop = cascade(inst, log)?.1;
            }
            (StepKind::Parallel, 2, stop)
        } else if let Some(e) = find_reducible_edge(inst) {
            let (size, stop) = process_reducible_circuit(inst, e, log)?;
            (StepKind::Reducible, size, stop)
        } else {
            match find_small_cut_candidate(inst)? {
                Some(CutCandidate::Three(xs)) => {
                    reduce_3cut(inst, &xs, log)?;
                    (StepKind::ThreeCut, xs.len(), cascade(inst, log)?.1)
                }
                Some(CutCandidate::Four(xs)) => {
                    reduce_4cut(inst, &xs, log)?;
                    (StepKind::FourCut, xs.len(), cascade(inst, log)?.1)
                }
                None => return Ok(Fixpoint { outcome: Outcome::Reduced, steps }),
            }
        };
        record(kind, size, inst, &stop, &mut mu, &mut steps);
        if let Some(outcome) = stop {
            return Ok(Fixpoint { outcome, steps });
        }
    }
}

/// Reduces a copy of `inst`.
pub fn reduce_to_fixpoint(inst: &Instance) -> Result<(Instance, ReductionLog, Outcome)> {
    let mut work = inst.clone();
    let mut log = ReductionLog::default();
    let fix = reduce_in_place(&mut work, &mut log, &ReduceOptions::default())?;
    Ok((work, log, fix.outcome))
}

/// Structural properties every reduced instance satisfies: no parallel
/// edges, no vertex of degree 2, no triangle. Returns the first violation.
pub fn reduced_shape_violation(inst: &Instance) -> Option<String> {
    for v in inst.graph.vertices() {
        if inst.graph.incident(v).len() == 2 {
            return Some(format!("{v} has degree 2"));
        }
    }
    for e in inst.graph.edges() {
        let (u, v) = e.ends;
        if inst.graph.edges_between(u, v).len() > 1 {
            return Some(format!("parallel edges between {u} and {v}"));
        }
        let nu: BTreeSet<VertexId> = inst.graph.neighbors(u).collect();
        if inst.graph.neighbors(v).any(|w| w != u && nu.contains(&w)) {
            return Some(format!("triangle on edge {}", e.id));
        }
    }
    None
}

/// Lifts a tour of the reduced instance to the instance `log` was recorded
/// against. Rewrites preserve tour costs, so the cost carries over.
pub fn expand_solution(log: &ReductionLog, tour: &[EdgeId], cost: Weight) -> Result<(Vec<EdgeId>, Weight)> {
    Ok((log.expand(tour)?, cost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Multigraph;
    use crate::toolkit::{named, random_cubic, Named, WeightSpec};

    fn w(x: i64) -> Weight {
        Weight::from_integer(BigInt::from(x))
    }

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn build(n: usize, unforced: &[(u32, u32, i64)], forced: &[(u32, u32, i64)]) -> Instance {
        let mut g = Multigraph::with_vertices(n);
        for &(a, b, c) in unforced {
            g.add_edge(v(a), v(b), w(c), Sign::Unforced).unwrap();
        }
        for &(a, b, c) in forced {
            g.add_edge(v(a), v(b), w(c), Sign::Forced).unwrap();
        }
        Instance::new(g)
    }

    /// Hexagon a b c r q p with chord b-q. Unforced paths a-b-c and p-q-r,
    /// forced edges a-p, b-q, c-r.
    fn two_paths() -> Instance {
        build(6, &[(0, 1, 1), (1, 2, 1), (3, 4, 1), (4, 5, 1)], &[(0, 3, 1), (1, 4, 1), (2, 5, 1)])
    }

    fn solved_cost(inst: &Instance) -> Option<Weight> {
        let (reduced, log, outcome) = reduce_to_fixpoint(inst).unwrap();
        match outcome {
            Outcome::Solved(tour) => {
                let cost = reduced.cost_of(&tour);
                let (lifted, lifted_cost) = expand_solution(&log, &tour, cost).unwrap();
                assert!(inst.is_tour(&lifted));
                assert_eq!(inst.cost_of(&lifted), lifted_cost);
                Some(lifted_cost)
            }
            other => panic!("expected a solved instance, got {other:?}"),
        }
    }

    #[test]
    fn bridge_is_not_2ec() {
        let inst = build(6, &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1), (0, 3, 1)], &[]);
        assert_eq!(check_feasibility(&inst).unwrap(), Feasibility::Infeasible(Witness::Not2ec));
    }

    #[test]
    fn odd_component() {
        assert_eq!(check_feasibility(&two_paths()).unwrap(), Feasibility::Infeasible(Witness::OddComponent));
    }

    #[test]
    fn four_cycle_with_three_odd_blocks() {
        // cycle 0-1-2-3, vertices 0..2 forced to the triangle 4 5 6
        let inst = build(
            7,
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (4, 5, 1), (5, 6, 1), (6, 4, 1)],
            &[(0, 4, 1), (1, 5, 1), (2, 6, 1)],
        );
        assert_eq!(check_feasibility(&inst).unwrap(), Feasibility::Infeasible(Witness::OddBlockCount));
    }

    #[test]
    fn cubic_graph_passes_screening() {
        assert_eq!(check_feasibility(&named(Named::Petersen)).unwrap(), Feasibility::FeasibleUnknown);
    }

    #[test]
    fn eliminable_decision_follows_forced_parity() {
        let inst = two_paths();
        assert_eq!(determine_eliminable(&inst, &[v(0)]).unwrap(), Elimination::Include);
        assert_eq!(determine_eliminable(&inst, &[v(0), v(1)]).unwrap(), Elimination::Delete);
        assert!(determine_eliminable(&inst, &[v(1)]).is_err());
    }

    #[test]
    fn parallel_pair_of_vertices_takes_two_cheapest() {
        let mut inst = build(2, &[(0, 1, 1), (0, 1, 2), (0, 1, 3)], &[]);
        let mut log = ReductionLog::default();
        match reduce_parallel(&mut inst, v(0), v(1), &mut log).unwrap() {
            Some(Outcome::Solved(tour)) => assert_eq!(inst.cost_of(&tour), w(3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parallel_drops_the_expensive_copy() {
        // K4 minus edge 0-1, plus a doubled 2-3 edge and a pendant path
        let mut inst = build(4, &[(0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 5), (2, 3, 7)], &[]);
        let mut log = ReductionLog::default();
        assert_eq!(reduce_parallel(&mut inst, v(2), v(3), &mut log).unwrap(), None);
        let left = inst.graph.edges_between(v(2), v(3));
        assert_eq!(left.len(), 1);
        assert_eq!(inst.weight(left[0]), &w(5));
    }

    #[test]
    fn parallel_forced_pair_is_a_subcycle() {
        let mut inst = build(4, &[(0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1)], &[(2, 3, 1), (2, 3, 1)]);
        let mut log = ReductionLog::default();
        assert_eq!(
            reduce_parallel(&mut inst, v(2), v(3), &mut log).unwrap(),
            Some(Outcome::Infeasible(Witness::ForcedSubcycle))
        );
    }

    #[test]
    fn cycle_is_solved_by_reducible_circuits() {
        let edges: Vec<(u32, u32, i64)> = (0..6).map(|i| (i, (i + 1) % 6, i as i64 + 1)).collect();
        let inst = build(6, &edges, &[]);
        assert_eq!(find_reducible_edge(&inst), Some(EdgeId(0)));
        assert_eq!(solved_cost(&inst), Some(w(21)));
    }

    #[test]
    fn reducible_circuit_rejects_forced_edges() {
        let mut inst = two_paths();
        let mut log = ReductionLog::default();
        assert!(process_reducible_circuit(&mut inst, EdgeId(4), &mut log).is_err());
    }

    #[test]
    fn paths_in_a_square() {
        let inst = build(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 0, 4)], &[]);
        let xs = [v(0), v(1), v(2), v(3)];
        let adjacent = solve_internal_paths(&inst, &xs, &[v(0), v(1)], &[(0, 1)]).unwrap().unwrap();
        assert_eq!(adjacent.cost, w(9));
        assert_eq!(adjacent.edges(), vec![EdgeId(1), EdgeId(2), EdgeId(3)]);
        assert_eq!(solve_internal_paths(&inst, &xs, &[v(0), v(2)], &[(0, 1)]).unwrap(), None);
        let two = solve_internal_paths(&inst, &xs, &[v(0), v(1), v(2), v(3)], &[(0, 1), (2, 3)]).unwrap().unwrap();
        assert_eq!(two.cost, w(4));
    }

    #[test]
    fn internal_forced_edge_must_be_used() {
        let inst = build(4, &[(1, 2, 1), (2, 3, 1), (3, 0, 1)], &[(0, 1, 1)]);
        let xs = [v(0), v(1), v(2), v(3)];
        assert_eq!(solve_internal_paths(&inst, &xs, &[v(0), v(1)], &[(0, 1)]).unwrap(), None);
        assert!(solve_internal_paths(&inst, &xs, &[v(0), v(3)], &[(0, 1)]).unwrap().is_some());
    }

    #[test]
    fn three_cut_on_one_vertex_is_the_identity() {
        let mut inst = random_cubic(4, 7, WeightSpec::default()).unwrap();
        let mut before: Vec<(VertexId, Weight)> =
            inst.graph.incident(v(0)).iter().map(|&e| (inst.graph.edge(e).other(v(0)), inst.weight(e).clone())).collect();
        let mut log = ReductionLog::default();
        reduce_3cut(&mut inst, &[v(0)], &mut log).unwrap();
        let x = match &log.entries()[0] {
            LogEntry::ThreeCut { new_vertex, .. } => *new_vertex,
            other => panic!("{other:?}"),
        };
        let mut after: Vec<(VertexId, Weight)> =
            inst.graph.incident(x).iter().map(|&e| (inst.graph.edge(e).other(x), inst.weight(e).clone())).collect();
        before.sort();
        after.sort();
        assert_eq!(before, after);
    }

    #[test]
    fn three_cut_all_feasible_splits_path_costs() {
        // triangle 1 2 3 with unit edges, joined to 0 by free edges
        let mut inst = build(4, &[(0, 1, 0), (0, 2, 0), (0, 3, 0), (1, 2, 1), (2, 3, 1), (3, 1, 1)], &[]);
        let mut log = ReductionLog::default();
        reduce_3cut(&mut inst, &[v(1), v(2), v(3)], &mut log).unwrap();
        assert_eq!(inst.n(), 2);
        let ws: Vec<Weight> = inst.graph.edges().map(|e| e.weight.clone()).collect();
        assert_eq!(ws, vec![w(1), w(1), w(1)]);
        assert!(inst.forced_edges().is_empty());
    }

    #[test]
    fn three_cut_with_all_ports_forced() {
        let mut inst = build(4, &[(1, 2, 1), (2, 3, 1), (3, 1, 1)], &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
        let mut log = ReductionLog::default();
        reduce_3cut(&mut inst, &[v(1), v(2), v(3)], &mut log).unwrap();
        assert_eq!(inst.forced_edges().len(), 3);
        let (_, stop) = cascade(&mut inst, &mut log).unwrap();
        assert!(matches!(stop, Some(Outcome::Infeasible(_))));
    }

    /// Chordless 6-cycle 0..5 whose vertices 0 1 3 4 carry forced edges to
    /// an outer 4-cycle 6 7 8 9.
    fn hexagon_with_four_ports() -> Instance {
        let mut unforced: Vec<(u32, u32, i64)> = (0..6).map(|i| (i, (i + 1) % 6, 1)).collect();
        unforced.extend([(6, 7, 1), (7, 8, 1), (8, 9, 1), (9, 6, 1)]);
        build(10, &unforced, &[(0, 6, 1), (1, 7, 1), (3, 8, 1), (4, 9, 1)])
    }

    #[test]
    fn four_cut_with_one_feasible_pairing() {
        let mut inst = hexagon_with_four_ports();
        let xs: Vec<VertexId> = (0..6).map(v).collect();
        assert!(is_4cut_reducible(&inst, &xs).unwrap());
        let mut log = ReductionLog::default();
        reduce_4cut(&mut inst, &xs, &mut log).unwrap();
        assert!(!inst.graph.is_vertex_alive(v(2)) && !inst.graph.is_vertex_alive(v(5)));
        for (a, b) in [(0, 4), (1, 3)] {
            let es = inst.graph.edges_between(v(a), v(b));
            assert_eq!(es.len(), 1);
            assert!(inst.is_forced(es[0]));
            assert_eq!(inst.weight(es[0]), &w(2));
        }
        assert!(inst.graph.edges_between(v(0), v(1)).is_empty());
        assert!(inst.graph.edges_between(v(3), v(4)).is_empty());
    }

    #[test]
    fn four_cut_with_two_feasible_pairings() {
        // square 0 1 2 3 with ports at every corner into the square 4 5 6 7
        let inst = build(
            8,
            &[(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 0, 4), (4, 5, 1), (5, 6, 1), (6, 7, 1), (7, 4, 1)],
            &[(0, 4, 1), (1, 5, 1), (2, 6, 1), (3, 7, 1)],
        );
        let xs: Vec<VertexId> = (0..4).map(v).collect();
        assert!(is_4cut_reducible(&inst, &xs).unwrap());
        let mut work = inst.clone();
        let mut log = ReductionLog::default();
        reduce_4cut(&mut work, &xs, &mut log).unwrap();
        let mut got: Vec<((VertexId, VertexId), Weight, bool)> =
            work.graph.edges().filter(|e| e.ends.0 < v(4) && e.ends.1 < v(4)).map(|e| (e.ends, e.weight.clone(), e.is_forced())).collect();
        got.sort();
        let want = vec![
            ((v(0), v(1)), w(1), false),
            ((v(1), v(2)), w(2), false),
            ((v(2), v(3)), w(3), false),
            ((v(3), v(0)), w(4), false),
        ];
        let mut want_norm: Vec<_> = want.into_iter().map(|((a, b), c, f)| ((a.min(b), a.max(b)), c, f)).collect();
        want_norm.sort();
        let got_norm: Vec<_> = got.into_iter().map(|((a, b), c, f)| ((a.min(b), a.max(b)), c, f)).collect();
        assert_eq!(got_norm, want_norm);
    }

    #[test]
    fn moebius_kantor_has_no_small_cut() {
        assert_eq!(find_small_cut_candidate(&named(Named::MoebiusKantor)).unwrap(), None);
    }

    #[test]
    fn prism_has_a_three_cut() {
        let cut = find_three_cut(&named(Named::Prism)).unwrap();
        assert_eq!(cut, vec![v(0), v(1), v(2)]);
    }

    #[test]
    fn petersen_is_refuted_by_reduction() {
        let (_, _, outcome) = reduce_to_fixpoint(&named(Named::Petersen)).unwrap();
        assert!(matches!(outcome, Outcome::Infeasible(_)));
    }

    #[test]
    fn k4_reduces_to_a_tour_of_cost_four() {
        assert_eq!(solved_cost(&named(Named::K4)), Some(w(4)));
    }

    #[test]
    fn reduced_instances_are_fixpoints() {
        let (reduced, log, outcome) = reduce_to_fixpoint(&named(Named::MoebiusKantor)).unwrap();
        assert_eq!(outcome, Outcome::Reduced);
        assert!(log.is_empty());
        assert_eq!(reduced_shape_violation(&reduced), None);
        for seed in 0..20 {
            let inst = random_cubic(16, seed, WeightSpec::default()).unwrap();
            let (once, _, outcome) = reduce_to_fixpoint(&inst).unwrap();
            if outcome != Outcome::Reduced {
                continue;
            }
            assert_eq!(reduced_shape_violation(&once), None, "seed {seed}");
            let (twice, log, _) = reduce_to_fixpoint(&once).unwrap();
            assert!(log.is_empty(), "seed {seed}");
            assert_eq!(crate::toolkit::serialize(&once), crate::toolkit::serialize(&twice));
        }
    }

    #[test]
    fn empty_log_expands_to_itself() {
        let log = ReductionLog::default();
        let tour = vec![EdgeId(3), EdgeId(1)];
        let (lifted, cost) = expand_solution(&log, &tour, w(2)).unwrap();
        assert_eq!(cost, w(2));
        let mut sorted = lifted.clone();
        sorted.sort();
        assert_eq!(sorted, vec![EdgeId(1), EdgeId(3)]);
    }
}
