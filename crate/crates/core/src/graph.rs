//! Multigraph store with forced/unforced edge signs and the basic queries
//! the solver is built on: degrees, cuts, U-components and forced-path
//! contraction.
//!
//! Vertex and edge ids are dense indices that are never reused. Removing an
//! element only clears its liveness flag, so ids held by a [`ReductionLog`]
//! stay meaningful for the lifetime of an instance lineage.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use smallvec::SmallVec;

use crate::error::{invalid_arg, invalid_state, Result};
use crate::log::{LogEntry, ReductionLog};

pub type Weight = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Forced,
    Unforced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: (VertexId, VertexId),
    pub weight: Weight,
    pub sign: Sign,
}

impl Edge {
    pub fn is_forced(&self) -> bool {
        self.sign == Sign::Forced
    }

    /// The endpoint opposite to `v`. `v` must be an endpoint.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.ends.0 == v {
            self.ends.1
        } else {
            debug_assert_eq!(self.ends.1, v);
            self.ends.0
        }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }
}

type Incidence = SmallVec<[EdgeId; 3]>;

/// Vertex/edge store. Parallel edges are allowed, self-loops are not.
#[derive(Clone, Debug, Default)]
pub struct Multigraph {
    edges: Vec<Edge>,
    edge_alive: Vec<bool>,
    vertex_alive: Vec<bool>,
    incident: Vec<Incidence>,
    n_alive: usize,
    m_alive: usize,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.vertex_alive.len() as u32);
        self.vertex_alive.push(true);
        self.incident.push(Incidence::new());
        self.n_alive += 1;
        id
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: Weight, sign: Sign) -> Result<EdgeId> {
        if u == v {
            return invalid_arg(format!("self-loop at {u}"));
        }
        if !self.is_vertex_alive(u) || !self.is_vertex_alive(v) {
            return invalid_arg(format!("edge {u}-{v} touches a dead or unknown vertex"));
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(Edge { id, ends: (u, v), weight, sign });
        self.edge_alive.push(true);
        self.incident[u.index()].push(id);
        self.incident[v.index()].push(id);
        self.m_alive += 1;
        Ok(id)
    }

    pub fn remove_edge(&mut self, e: EdgeId) {
        if !self.is_edge_alive(e) {
            return;
        }
        let (u, v) = self.edges[e.index()].ends;
        self.edge_alive[e.index()] = false;
        self.incident[u.index()].retain(|x| *x != e);
        self.incident[v.index()].retain(|x| *x != e);
        self.m_alive -= 1;
    }

    /// Removes `v` together with every edge still incident to it.
    pub fn remove_vertex(&mut self, v: VertexId) {
        if !self.is_vertex_alive(v) {
            return;
        }
        let inc: Incidence = self.incident[v.index()].clone();
        for e in inc {
            self.remove_edge(e);
        }
        self.vertex_alive[v.index()] = false;
        self.n_alive -= 1;
    }

    pub fn set_sign(&mut self, e: EdgeId, sign: Sign) {
        self.edges[e.index()].sign = sign;
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    #[inline]
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v.index()]
    }

    #[inline]
    pub fn is_edge_alive(&self, e: EdgeId) -> bool {
        self.edge_alive.get(e.index()).copied().unwrap_or(false)
    }

    #[inline]
    pub fn is_vertex_alive(&self, v: VertexId) -> bool {
        self.vertex_alive.get(v.index()).copied().unwrap_or(false)
    }

    pub fn n(&self) -> usize {
        self.n_alive
    }

    pub fn m(&self) -> usize {
        self.m_alive
    }

    /// One past the largest vertex id ever allocated.
    pub fn vertex_bound(&self) -> usize {
        self.vertex_alive.len()
    }

    /// One past the largest edge id ever allocated.
    pub fn edge_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_alive
            .iter()
            .enumerate()
            .filter(|(_, a)| **a)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges
            .iter()
            .zip(self.edge_alive.iter())
            .filter(|(_, a)| **a)
            .map(|(e, _)| e)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().map(|e| e.id)
    }

    /// Alive edges joining `u` and `v`.
    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.incident(u).iter().copied().filter(|&e| self.edge(e).other(u) == v).collect()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident(v).iter().map(move |&e| self.edge(e).other(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degrees {
    pub d: usize,
    pub d_f: usize,
    pub d_u: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cut {
    pub forced: Vec<EdgeId>,
    pub unforced: Vec<EdgeId>,
}

impl Cut {
    pub fn len(&self) -> usize {
        self.forced.len() + self.unforced.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn all(&self) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self.forced.iter().chain(self.unforced.iter()).copied().collect();
        v.sort();
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(count: usize) -> Parity {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A maximal connected subgraph of the unforced edges, or a single vertex
/// with no unforced edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UComponent {
    pub id: usize,
    /// Sorted.
    pub vertices: Vec<VertexId>,
    /// Sorted.
    pub edges: Vec<EdgeId>,
    pub boundary_forced: usize,
}

impl UComponent {
    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.boundary_forced)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// A forced-TSP instance: a multigraph whose edges carry a sign.
#[derive(Clone, Debug, Default)]
pub struct Instance {
    pub graph: Multigraph,
}

/// Outcome of [`Instance::contract_forced_paths`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contraction {
    /// Every maximal forced path has been collapsed to one forced edge.
    Done,
    /// A forced cycle closes on a proper subset of the vertices.
    Infeasible,
    /// The forced edges already form a Hamiltonian cycle, now two parallel
    /// forced edges on two vertices.
    Solved,
}

impl Instance {
    pub fn new(graph: Multigraph) -> Self {
        Instance { graph }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn is_forced(&self, e: EdgeId) -> bool {
        self.graph.edge(e).is_forced()
    }

    pub fn weight(&self, e: EdgeId) -> &Weight {
        &self.graph.edge(e).weight
    }

    pub fn forced_edges(&self) -> Vec<EdgeId> {
        self.graph.edges().filter(|e| e.is_forced()).map(|e| e.id).collect()
    }

    pub fn unforced_edges(&self) -> Vec<EdgeId> {
        self.graph.edges().filter(|e| !e.is_forced()).map(|e| e.id).collect()
    }

    pub fn degrees(&self, v: VertexId) -> Result<Degrees> {
        if !self.graph.is_vertex_alive(v) {
            return invalid_arg(format!("{v} is not alive"));
        }
        Ok(self.degrees_unchecked(v))
    }

    pub(crate) fn degrees_unchecked(&self, v: VertexId) -> Degrees {
        let inc = self.graph.incident(v);
        let d_f = inc.iter().filter(|&&e| self.is_forced(e)).count();
        Degrees { d: inc.len(), d_f, d_u: inc.len() - d_f }
    }

    pub fn vertex_mask(&self, x: &[VertexId]) -> Vec<bool> {
        let mut mask = vec![false; self.graph.vertex_bound()];
        for &v in x {
            mask[v.index()] = true;
        }
        mask
    }

    /// Edges with exactly one endpoint in `x`, split by sign.
    pub fn cut(&self, x: &[VertexId]) -> Result<Cut> {
        if x.is_empty() {
            return invalid_arg("cut of an empty vertex set");
        }
        let mask = self.vertex_mask(x);
        let inside = mask.iter().filter(|b| **b).count();
        if x.iter().any(|&v| !self.graph.is_vertex_alive(v)) {
            return invalid_arg("cut set contains a dead vertex");
        }
        if inside >= self.n() {
            return invalid_arg("cut set covers every vertex");
        }
        Ok(self.cut_of_mask(&mask))
    }

    pub(crate) fn cut_of_mask(&self, mask: &[bool]) -> Cut {
        let mut cut = Cut::default();
        for e in self.graph.edges() {
            if mask[e.ends.0.index()] != mask[e.ends.1.index()] {
                if e.is_forced() {
                    cut.forced.push(e.id);
                } else {
                    cut.unforced.push(e.id);
                }
            }
        }
        cut
    }

    /// Connected components of `(V, U)`, ordered by smallest vertex id.
    pub fn u_components(&self) -> Vec<UComponent> {
        let bound = self.graph.vertex_bound();
        let mut label = vec![usize::MAX; bound];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for root in self.graph.vertices() {
            if label[root.index()] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut vertices = Vec::new();
            let mut edges = Vec::new();
            label[root.index()] = id;
            stack.push(root);
            while let Some(v) = stack.pop() {
                vertices.push(v);
                for &e in self.graph.incident(v) {
                    let edge = self.graph.edge(e);
                    if edge.is_forced() {
                        continue;
                    }
                    if edge.ends.0 == v {
                        edges.push(e);
                    }
                    let w = edge.other(v);
                    if label[w.index()] == usize::MAX {
                        label[w.index()] = id;
                        stack.push(w);
                    }
                }
            }
            vertices.sort();
            edges.sort();
            let boundary_forced = vertices
                .iter()
                .flat_map(|&v| self.graph.incident(v).iter().map(move |&e| (v, e)))
                .filter(|&(v, e)| {
                    let edge = self.graph.edge(e);
                    edge.is_forced() && label[edge.other(v).index()] != id
                })
                .count();
            comps.push(UComponent { id, vertices, edges, boundary_forced });
        }
        comps
    }

    /// Marks an unforced edge as forced.
    pub fn include(&mut self, e: EdgeId) {
        self.graph.set_sign(e, Sign::Forced);
    }

    /// Removes an edge from the graph.
    pub fn delete(&mut self, e: EdgeId) {
        self.graph.remove_edge(e);
    }

    /// Collapses every maximal forced path through degree-2 vertices into a
    /// single forced edge carrying the path's total weight.
    ///
    /// Requires that no vertex has two forced edges and degree 3.
    pub fn contract_forced_paths(&mut self, log: &mut ReductionLog) -> Result<Contraction> {
        for v in self.graph.vertices().collect::<Vec<_>>() {
            let d = self.degrees_unchecked(v);
            if d.d_f == 2 && d.d == 3 {
                return invalid_state(format!("{v} has two forced edges and degree 3"));
            }
            if d.d_f > 2 {
                return Ok(Contraction::Infeasible);
            }
        }
        loop {
            let mut changed = false;
            let candidates: Vec<VertexId> = self.graph.vertices().collect();
            for a in candidates {
                if !self.graph.is_vertex_alive(a) {
                    continue;
                }
                let d = self.degrees_unchecked(a);
                if !(d.d == 2 && d.d_f == 2) {
                    continue;
                }
                match self.contract_vertex(a, log)? {
                    Contraction::Done => changed = true,
                    other => return Ok(other),
                }
            }
            if !changed {
                return Ok(Contraction::Done);
            }
        }
    }

    /// Contracts a single degree-2 vertex whose two edges are forced.
    pub(crate) fn contract_vertex(&mut self, a: VertexId, log: &mut ReductionLog) -> Result<Contraction> {
        let inc = self.graph.incident(a);
        let (e1, e2) = (inc[0], inc[1]);
        let u = self.graph.edge(e1).other(a);
        let v = self.graph.edge(e2).other(a);
        if u == v {
            return Ok(if self.n() == 2 { Contraction::Solved } else { Contraction::Infeasible });
        }
        let weight = self.weight(e1) + self.weight(e2);
        self.graph.remove_vertex(a);
        let added = self.graph.add_edge(u, v, weight.clone(), Sign::Forced)?;
        log.push(LogEntry::Contract { vertex: a, removed: [e1, e2], added, ends: (u, v), weight });
        Ok(Contraction::Done)
    }

    /// Total weight of a set of edges.
    pub fn cost_of(&self, edges: &[EdgeId]) -> Weight {
        edges.iter().fold(Weight::zero(), |acc, &e| acc + self.weight(e))
    }

    /// Checks that `tour` is a Hamiltonian cycle of the alive graph that
    /// contains every forced edge.
    pub fn is_tour(&self, tour: &[EdgeId]) -> bool {
        let n = self.n();
        if n < 2 || tour.len() != n {
            return false;
        }
        let mut seen = vec![false; self.graph.edge_bound()];
        let mut deg = vec![0usize; self.graph.vertex_bound()];
        for &e in tour {
            if !self.graph.is_edge_alive(e) || seen[e.index()] {
                return false;
            }
            seen[e.index()] = true;
            let (u, v) = self.graph.edge(e).ends;
            deg[u.index()] += 1;
            deg[v.index()] += 1;
        }
        if self.graph.vertices().any(|v| deg[v.index()] != 2) {
            return false;
        }
        if self.graph.edges().any(|e| e.is_forced() && !seen[e.id.index()]) {
            return false;
        }
        // connectivity of the tour edges
        let start = self.graph.vertices().next().unwrap();
        let mut visited = vec![false; self.graph.vertex_bound()];
        let mut stack = vec![start];
        visited[start.index()] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &e in self.graph.incident(v) {
                if !seen[e.index()] {
                    continue;
                }
                let w = self.graph.edge(e).other(v);
                if !visited[w.index()] {
                    visited[w.index()] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Checks the degree constraints of the input format: every vertex has
    /// degree 2 or 3.
    pub fn validate_degrees(&self) -> Result<()> {
        for v in self.graph.vertices() {
            let d = self.graph.incident(v).len();
            if d > 3 {
                return invalid_arg(format!("{v} has degree {d} > 3"));
            }
        }
        Ok(())
    }
}
