//! Reference solvers used to cross-check the search.

use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{invalid_arg, Error, Result};
use crate::graph::{EdgeId, Instance, VertexId, Weight};
use crate::search::TourResult;

pub const HELD_KARP_MAX_N: usize = 24;
pub const EXHAUSTIVE_MAX_N: usize = 12;

fn finish(inst: &Instance, mut edges: Vec<EdgeId>) -> TourResult {
    edges.sort();
    let cost = inst.cost_of(&edges);
    TourResult::Optimal { cost, edges }
}

/// Cheapest edge between every pair of alive vertices, by dense index.
fn collapse(inst: &Instance, verts: &[VertexId]) -> Vec<Vec<Option<EdgeId>>> {
    let n = verts.len();
    let mut dense = vec![usize::MAX; inst.graph.vertex_bound()];
    for (i, v) in verts.iter().enumerate() {
        dense[v.index()] = i;
    }
    let mut best: Vec<Vec<Option<EdgeId>>> = vec![vec![None; n]; n];
    for e in inst.graph.edges() {
        let (a, b) = (dense[e.ends.0.index()], dense[e.ends.1.index()]);
        let cur = best[a][b];
        if cur.is_none_or(|c| inst.weight(e.id) < inst.weight(c)) {
            best[a][b] = Some(e.id);
            best[b][a] = Some(e.id);
        }
    }
    best
}

/// Subset DP over `(visited, last)`; returns a vertex order of an optimal
/// Hamiltonian cycle starting at 0.
fn dp<T: Clone + Ord + Add<Output = T>>(w: &[Vec<Option<T>>]) -> Option<Vec<usize>> {
    let n = w.len();
    let full = 1usize << (n - 1);
    // vertex i >= 1 is bit i-1
    let mut table: Vec<Option<T>> = vec![None; full * (n - 1)];
    let idx = |set: usize, last: usize| set * (n - 1) + (last - 1);
    for v in 1..n {
        table[idx(1 << (v - 1), v)] = w[0][v].clone();
    }
    for set in 1..full {
        for last in 1..n {
            if set & (1 << (last - 1)) == 0 {
                continue;
            }
            let Some(base) = table[idx(set, last)].clone() else { continue };
            for next in 1..n {
                if set & (1 << (next - 1)) != 0 {
                    continue;
                }
                let Some(step) = &w[last][next] else { continue };
                let cand = base.clone() + step.clone();
                let slot = &mut table[idx(set | (1 << (next - 1)), next)];
                if slot.as_ref().is_none_or(|s| cand < *s) {
                    *slot = Some(cand);
                }
            }
        }
    }
    let all = full - 1;
    let mut best: Option<(T, usize)> = None;
    for last in 1..n {
        let (Some(c), Some(back)) = (&table[idx(all, last)], &w[last][0]) else { continue };
        let total = c.clone() + back.clone();
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, last));
        }
    }
    let (_, mut last) = best?;
    let mut order = vec![last];
    let mut set = all;
    while set != (1 << (last - 1)) {
        let here = table[idx(set, last)].clone().unwrap();
        let prev_set = set & !(1 << (last - 1));
        let prev = (1..n)
            .find(|&p| {
                prev_set & (1 << (p - 1)) != 0
                    && matches!((&table[idx(prev_set, p)], &w[p][last]), (Some(c), Some(s)) if c.clone() + s.clone() == here)
            })
            .expect("predecessor exists");
        order.push(prev);
        set = prev_set;
        last = prev;
    }
    order.push(0);
    order.reverse();
    Some(order)
}

/// Scales every weight by the common denominator when the scaled tour
/// costs fit in an `i64`.
fn scaled(inst: &Instance, pairs: &[Vec<Option<EdgeId>>]) -> Option<Vec<Vec<Option<i64>>>> {
    let mut lcm = BigInt::one();
    for e in pairs.iter().flatten().flatten() {
        lcm = lcm.lcm(inst.weight(*e).denom());
    }
    let n = pairs.len() as i64;
    let limit = i64::MAX / (4 * n.max(1));
    pairs
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    None => Some(None),
                    Some(e) => {
                        let w = inst.weight(*e);
                        let s = w.numer() * (&lcm / w.denom());
                        let v = s.to_i64()?;
                        (v.abs() <= limit).then_some(Some(v))
                    }
                })
                .collect()
        })
        .collect()
}

/// Optimal tour of an instance without forced edges by Held-Karp dynamic
/// programming. Parallel edges collapse to the cheapest one, except on two
/// vertices where the two cheapest parallel edges form the tour.
pub fn held_karp(inst: &Instance) -> Result<TourResult> {
    let n = inst.n();
    if n > HELD_KARP_MAX_N {
        return Err(Error::GuardExceeded(format!("held_karp accepts n <= {HELD_KARP_MAX_N}, got {n}")));
    }
    if !inst.forced_edges().is_empty() {
        return invalid_arg("held_karp requires an instance without forced edges");
    }
    if n < 2 {
        return Ok(TourResult::Infeasible);
    }
    if n == 2 {
        let mut edges: Vec<EdgeId> = inst.graph.edge_ids().collect();
        if edges.len() < 2 {
            return Ok(TourResult::Infeasible);
        }
        edges.sort_by(|&a, &b| inst.weight(a).cmp(inst.weight(b)).then(a.cmp(&b)));
        edges.truncate(2);
        return Ok(finish(inst, edges));
    }
    let verts: Vec<VertexId> = inst.graph.vertices().collect();
    let pairs = collapse(inst, &verts);
    let order = match scaled(inst, &pairs) {
        Some(w) => dp(&w),
        None => {
            let w: Vec<Vec<Option<Weight>>> =
                pairs.iter().map(|row| row.iter().map(|e| e.map(|e| inst.weight(e).clone())).collect()).collect();
            dp(&w)
        }
    };
    let Some(order) = order else { return Ok(TourResult::Infeasible) };
    let edges = (0..n).map(|i| pairs[order[i]][order[(i + 1) % n]].unwrap()).collect();
    Ok(finish(inst, edges))
}

/// Optimal tour of a forced instance by enumerating Hamiltonian cycles edge
/// by edge, so parallel edges are told apart.
pub fn exhaustive_forced(inst: &Instance) -> Result<TourResult> {
    let n = inst.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::GuardExceeded(format!("exhaustive_forced accepts n <= {EXHAUSTIVE_MAX_N}, got {n}")));
    }
    if n < 2 {
        return Ok(TourResult::Infeasible);
    }
    struct Walk<'a> {
        inst: &'a Instance,
        start: VertexId,
        n: usize,
        visited: Vec<bool>,
        used: Vec<bool>,
        path: Vec<EdgeId>,
        best: Option<(Weight, Vec<EdgeId>)>,
    }
    impl Walk<'_> {
        /// Forced edges at `v` must be among its two tour edges `a`, `b`.
        fn respects(&self, v: VertexId, a: EdgeId, b: EdgeId) -> bool {
            self.inst.graph.incident(v).iter().all(|&e| !self.inst.is_forced(e) || e == a || e == b)
        }

        fn go(&mut self, cur: VertexId, depth: usize) {
            let incident: Vec<EdgeId> = self.inst.graph.incident(cur).to_vec();
            for e in incident {
                if self.used[e.index()] {
                    continue;
                }
                let next = self.inst.graph.edge(e).other(cur);
                if let Some(&last) = self.path.last() {
                    if !self.respects(cur, last, e) {
                        continue;
                    }
                }
                if depth + 1 == self.n {
                    if next != self.start || !self.respects(self.start, self.path[0], e) {
                        continue;
                    }
                    let mut tour = self.path.clone();
                    tour.push(e);
                    if !self.inst.forced_edges().iter().all(|f| tour.contains(f)) {
                        continue;
                    }
                    let cost = self.inst.cost_of(&tour);
                    if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                        self.best = Some((cost, tour));
                    }
                    continue;
                }
                if self.visited[next.index()] {
                    continue;
                }
                self.visited[next.index()] = true;
                self.used[e.index()] = true;
                self.path.push(e);
                self.go(next, depth + 1);
                self.path.pop();
                self.used[e.index()] = false;
                self.visited[next.index()] = false;
            }
        }
    }
    let start = inst.graph.vertices().next().unwrap();
    let mut walk = Walk {
        inst,
        start,
        n,
        visited: vec![false; inst.graph.vertex_bound()],
        used: vec![false; inst.graph.edge_bound()],
        path: Vec::new(),
        best: None,
    };
    walk.visited[start.index()] = true;
    walk.go(start, 0);
    Ok(match walk.best {
        Some((_, edges)) => finish(inst, edges),
        None => TourResult::Infeasible,
    })
}
