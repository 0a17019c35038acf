//! Edge-connectivity structure of U-components: bridges, 2-cuts, the
//! partition of a 2-edge-connected component into circuits, and the blocks
//! along each circuit.

use std::fmt::Write as _;

use crate::error::{invalid_arg, invalid_state, Result};
use crate::graph::{EdgeId, Instance, Parity, UComponent, VertexId};

const NONE: u32 = u32::MAX;

/// Compact adjacency over a vertex/edge subset of an instance. Local ids are
/// dense so the bridge and component searches can reuse flat buffers.
pub(crate) struct View {
    pub verts: Vec<VertexId>,
    pub local: Vec<u32>,
    pub edges: Vec<EdgeId>,
    start: Vec<usize>,
    adj: Vec<(u32, u32)>,
    // scratch
    disc: Vec<u32>,
    low: Vec<u32>,
    stack: Vec<(u32, u32, usize)>,
    excluded: Vec<bool>,
}

impl View {
    /// View over `verts` (alive vertices) and those alive edges with both
    /// endpoints inside for which `keep` holds.
    pub fn new(inst: &Instance, verts: &[VertexId], keep: impl Fn(EdgeId) -> bool) -> View {
        let g = &inst.graph;
        let mut local = vec![NONE; g.vertex_bound()];
        for (i, v) in verts.iter().enumerate() {
            local[v.index()] = i as u32;
        }
        let mut edges = Vec::new();
        let mut deg = vec![0usize; verts.len()];
        for &v in verts {
            for &e in g.incident(v) {
                let edge = g.edge(e);
                let w = edge.other(v);
                if edge.ends.0 != v || local[w.index()] == NONE || !keep(e) {
                    continue;
                }
                edges.push(e);
                deg[local[v.index()] as usize] += 1;
                deg[local[w.index()] as usize] += 1;
            }
        }
        let mut start = vec![0usize; verts.len() + 1];
        for i in 0..verts.len() {
            start[i + 1] = start[i] + deg[i];
        }
        let mut fill = start.clone();
        let mut adj = vec![(0u32, 0u32); start[verts.len()]];
        for (le, &e) in edges.iter().enumerate() {
            let (a, b) = g.edge(e).ends;
            let (la, lb) = (local[a.index()], local[b.index()]);
            adj[fill[la as usize]] = (lb, le as u32);
            fill[la as usize] += 1;
            adj[fill[lb as usize]] = (la, le as u32);
            fill[lb as usize] += 1;
        }
        let n = verts.len();
        let m = edges.len();
        View {
            verts: verts.to_vec(),
            local,
            edges,
            start,
            adj,
            disc: vec![0; n],
            low: vec![0; n],
            stack: Vec::with_capacity(n),
            excluded: vec![false; m],
        }
    }

    pub fn whole(inst: &Instance) -> View {
        let verts: Vec<VertexId> = inst.graph.vertices().collect();
        View::new(inst, &verts, |_| true)
    }

    pub fn n(&self) -> usize {
        self.verts.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn local_edge(&self, e: EdgeId) -> Option<u32> {
        self.edges.iter().position(|&x| x == e).map(|i| i as u32)
    }

    fn neighbors(&self, v: u32) -> &[(u32, u32)] {
        &self.adj[self.start[v as usize]..self.start[v as usize + 1]]
    }

    pub fn set_excluded(&mut self, excluded: &[u32]) {
        for &e in excluded {
            self.excluded[e as usize] = true;
        }
    }

    pub fn clear_excluded(&mut self, excluded: &[u32]) {
        for &e in excluded {
            self.excluded[e as usize] = false;
        }
    }

    /// Bridges (local edge ids) of the view minus the currently excluded
    /// edges, and the number of connected components.
    pub fn bridges(&mut self, out: &mut Vec<u32>) -> usize {
        out.clear();
        let n = self.n();
        for d in self.disc.iter_mut() {
            *d = NONE;
        }
        let mut time = 0u32;
        let mut comps = 0;
        for root in 0..n as u32 {
            if self.disc[root as usize] != NONE {
                continue;
            }
            comps += 1;
            self.disc[root as usize] = time;
            self.low[root as usize] = time;
            time += 1;
            self.stack.push((root, NONE, 0));
            while let Some(&(v, pe, i)) = self.stack.last() {
                let nb = self.start[v as usize + 1] - self.start[v as usize];
                if i < nb {
                    self.stack.last_mut().unwrap().2 += 1;
                    let (w, e) = self.adj[self.start[v as usize] + i];
                    if e == pe || self.excluded[e as usize] {
                        continue;
                    }
                    if self.disc[w as usize] == NONE {
                        self.disc[w as usize] = time;
                        self.low[w as usize] = time;
                        time += 1;
                        self.stack.push((w, e, 0));
                    } else {
                        let dw = self.disc[w as usize];
                        let lv = &mut self.low[v as usize];
                        *lv = (*lv).min(dw);
                    }
                } else {
                    self.stack.pop();
                    if let Some(&(p, _, _)) = self.stack.last() {
                        let lv = self.low[v as usize];
                        let lp = &mut self.low[p as usize];
                        *lp = (*lp).min(lv);
                        if lv > self.disc[p as usize] {
                            out.push(pe);
                        }
                    }
                }
            }
        }
        comps
    }

    /// Component label per local vertex, ignoring excluded edges.
    pub fn components(&self) -> (usize, Vec<u32>) {
        let n = self.n();
        let mut label = vec![NONE; n];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for root in 0..n as u32 {
            if label[root as usize] != NONE {
                continue;
            }
            label[root as usize] = count;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for &(w, e) in self.neighbors(v) {
                    if self.excluded[e as usize] || label[w as usize] != NONE {
                        continue;
                    }
                    label[w as usize] = count;
                    stack.push(w);
                }
            }
            count += 1;
        }
        (count as usize, label)
    }
}

/// Bridges of the whole graph (all alive edges) and whether it is connected.
pub fn graph_bridges(inst: &Instance) -> (bool, Vec<EdgeId>) {
    let mut view = View::whole(inst);
    let mut out = Vec::new();
    let comps = view.bridges(&mut out);
    (comps <= 1, out.into_iter().map(|e| view.edges[e as usize]).collect())
}

/// Bridges of the unforced subgraph of `h`.
pub fn u_bridges(inst: &Instance, h: &UComponent) -> Vec<EdgeId> {
    let mut view = View::new(inst, &h.vertices, |e| !inst.is_forced(e));
    let mut out = Vec::new();
    view.bridges(&mut out);
    let mut b: Vec<EdgeId> = out.into_iter().map(|e| view.edges[e as usize]).collect();
    b.sort();
    b
}

pub fn is_2_edge_connected(inst: &Instance, h: &UComponent) -> bool {
    h.is_trivial() || u_bridges(inst, h).is_empty()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Trivial,
    Reducible,
    TwoPendentCritical,
    Normal,
}

impl BlockKind {
    pub fn name(self) -> &'static str {
        match self {
            BlockKind::Trivial => "trivial",
            BlockKind::Reducible => "reducible",
            BlockKind::TwoPendentCritical => "critical2",
            BlockKind::Normal => "normal",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalVariant {
    SixCycle,
    SixCycleExtension,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriticalShape {
    pub variant: CriticalVariant,
    /// Number of unforced boundary edges (0 or 2 for critical subgraphs).
    pub pendent: usize,
}

/// A block along a nontrivial circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Sorted.
    pub vertices: Vec<VertexId>,
    /// `(v_i, u_{i+1})`: the endpoints of the incoming and outgoing circuit
    /// edges inside the block. Equal for single-vertex blocks.
    pub endpoints: (VertexId, VertexId),
    pub cut_forced: usize,
    pub parity: Parity,
    pub kind: BlockKind,
}

impl Block {
    pub fn is_single(&self) -> bool {
        self.vertices.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    /// Id of the host U-component.
    pub host: usize,
    /// `e_1 .. e_p` in cyclic order.
    pub edges: Vec<EdgeId>,
    /// `blocks[i]` lies between `edges[i]` and `edges[(i + 1) % p]`. Empty
    /// for a trivial circuit.
    pub blocks: Vec<Block>,
}

impl Circuit {
    pub fn is_trivial(&self) -> bool {
        self.edges.len() == 1
    }

    pub fn odd_blocks(&self) -> usize {
        self.blocks.iter().filter(|b| b.parity == Parity::Odd).count()
    }

    /// Index of the block whose unforced cut is `{e_i, e_{i+1}}`.
    pub fn block_after(&self, i: usize) -> &Block {
        &self.blocks[i]
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }
    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut c = x;
        while self.0[c as usize] != r {
            let next = self.0[c as usize];
            self.0[c as usize] = r;
            c = next;
        }
        r
    }
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

/// All pairs of unforced edges of `h` whose removal disconnects `h`.
pub fn two_cuts(inst: &Instance, h: &UComponent) -> Vec<(EdgeId, EdgeId)> {
    let mut view = View::new(inst, &h.vertices, |e| !inst.is_forced(e));
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    for le in 0..view.m() as u32 {
        view.set_excluded(&[le]);
        view.bridges(&mut out);
        view.clear_excluded(&[le]);
        for &f in &out {
            if f > le {
                pairs.push((view.edges[le as usize], view.edges[f as usize]));
            }
        }
    }
    for p in pairs.iter_mut() {
        if p.0 > p.1 {
            *p = (p.1, p.0);
        }
    }
    pairs.sort();
    pairs
}

/// Partitions the edges of a nontrivial 2-edge-connected U-component into
/// circuits, ordered by their smallest edge id.
pub fn circuit_partition(inst: &Instance, h: &UComponent) -> Result<Vec<Circuit>> {
    if h.is_trivial() {
        return invalid_arg("circuit partition of a trivial component");
    }
    if !is_2_edge_connected(inst, h) {
        return invalid_state(format!("U-component {} is not 2-edge-connected", h.id));
    }
    let mut view = View::new(inst, &h.vertices, |e| !inst.is_forced(e));
    let m = view.m();
    let mut uf = UnionFind::new(m);
    let mut out = Vec::new();
    for le in 0..m as u32 {
        view.set_excluded(&[le]);
        view.bridges(&mut out);
        view.clear_excluded(&[le]);
        for &f in &out {
            uf.union(le, f);
        }
    }
    let mut groups: Vec<Vec<EdgeId>> = vec![Vec::new(); m];
    for le in 0..m as u32 {
        let r = uf.find(le);
        groups[r as usize].push(view.edges[le as usize]);
    }
    let mut circuits = Vec::new();
    for mut g in groups.into_iter().filter(|g| !g.is_empty()) {
        g.sort();
        if g.len() == 1 {
            circuits.push(Circuit { host: h.id, edges: g, blocks: Vec::new() });
        } else {
            circuits.push(order_circuit(inst, h, &g)?);
        }
    }
    circuits.sort_by_key(|c| *c.edges.iter().min().unwrap());
    Ok(circuits)
}

/// Blocks along a circuit, in circuit order.
pub fn blocks_along(inst: &Instance, h: &UComponent, circuit: &Circuit) -> Result<Vec<Block>> {
    if circuit.is_trivial() {
        return invalid_arg("a trivial circuit has no blocks along it");
    }
    Ok(order_circuit(inst, h, &circuit.edges)?.blocks)
}

/// Orders a set of pairwise 2-cut edges cyclically and computes the blocks
/// between consecutive edges. The sequence starts at the smallest edge id and
/// continues toward the smaller of its two neighbours.
fn order_circuit(inst: &Instance, h: &UComponent, edge_set: &[EdgeId]) -> Result<Circuit> {
    let mut view = View::new(inst, &h.vertices, |e| !inst.is_forced(e));
    let locals: Vec<u32> = edge_set
        .iter()
        .map(|&e| view.local_edge(e).ok_or_else(|| crate::error::Error::InvalidArgument(format!("{e} not in component"))))
        .collect::<Result<_>>()?;
    view.set_excluded(&locals);
    let (count, label) = view.components();
    let p = edge_set.len();
    if count != p {
        return invalid_state(format!("circuit of {p} edges splits its component into {count} parts"));
    }
    // block label -> incident circuit edges
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (i, &e) in edge_set.iter().enumerate() {
        let (a, b) = inst.graph.edge(e).ends;
        let (la, lb) = (label[view.local[a.index()] as usize], label[view.local[b.index()] as usize]);
        if la == lb {
            return invalid_state(format!("circuit edge {e} has both ends in one block"));
        }
        touching[la as usize].push(i);
        touching[lb as usize].push(i);
    }
    if touching.iter().any(|t| t.len() != 2) {
        return invalid_state("circuit blocks must have exactly two circuit edges");
    }
    let block_label = |v: VertexId| label[view.local[v.index()] as usize] as usize;
    let first = (0..p).min_by_key(|&i| edge_set[i]).unwrap();
    let (a, b) = inst.graph.edge(edge_set[first]).ends;
    let (ba, bb) = (block_label(a), block_label(b));
    let other = |blk: usize, i: usize| -> usize {
        let t = &touching[blk];
        if t[0] == i {
            t[1]
        } else {
            t[0]
        }
    };
    let na = other(ba, first);
    let nb = other(bb, first);
    let mut cur_block = if p == 2 {
        let min_a = view.verts.iter().enumerate().filter(|(i, _)| label[*i] as usize == ba).map(|(_, v)| *v).min();
        let min_b = view.verts.iter().enumerate().filter(|(i, _)| label[*i] as usize == bb).map(|(_, v)| *v).min();
        if min_a <= min_b {
            ba
        } else {
            bb
        }
    } else if edge_set[na] <= edge_set[nb] {
        ba
    } else {
        bb
    };
    let mut order_edges = Vec::with_capacity(p);
    let mut order_blocks = Vec::with_capacity(p);
    let mut cur_edge = first;
    for _ in 0..p {
        order_edges.push(cur_edge);
        order_blocks.push(cur_block);
        let next_edge = other(cur_block, cur_edge);
        let (x, y) = inst.graph.edge(edge_set[next_edge]).ends;
        let next_block = if block_label(x) == cur_block { block_label(y) } else { block_label(x) };
        cur_edge = next_edge;
        cur_block = next_block;
    }
    if cur_edge != first {
        return invalid_state("circuit edges do not close into a single cycle");
    }

    let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); count];
    for (i, &v) in view.verts.iter().enumerate() {
        members[label[i] as usize].push(v);
    }
    let edges: Vec<EdgeId> = order_edges.iter().map(|&i| edge_set[i]).collect();
    let mut blocks = Vec::with_capacity(p);
    for i in 0..p {
        let blk = order_blocks[i];
        let mut vertices = std::mem::take(&mut members[blk]);
        vertices.sort();
        let end_in = |e: EdgeId| {
            let (x, y) = inst.graph.edge(e).ends;
            if block_label(x) == blk {
                x
            } else {
                y
            }
        };
        let endpoints = (end_in(edges[i]), end_in(edges[(i + 1) % p]));
        let cut_forced = inst.cut_of_mask(&inst.vertex_mask(&vertices)).forced.len();
        let kind = classify(inst, &vertices, cut_forced);
        blocks.push(Block { vertices, endpoints, cut_forced, parity: Parity::of(cut_forced), kind });
    }
    Ok(Circuit { host: h.id, edges, blocks })
}

fn classify(inst: &Instance, vertices: &[VertexId], cut_forced: usize) -> BlockKind {
    if vertices.len() == 1 {
        let d = inst.degrees_unchecked(vertices[0]);
        return if d.d_f >= 1 { BlockKind::Trivial } else { BlockKind::Reducible };
    }
    if cut_forced == 4 {
        if let Some(shape) = critical_shape(inst, vertices) {
            if shape.pendent == 2 {
                return BlockKind::TwoPendentCritical;
            }
        }
    }
    BlockKind::Normal
}

/// Re-derives the kind of a block from the current instance.
pub fn classify_block(inst: &Instance, block: &Block) -> BlockKind {
    let cut_forced = inst.cut_of_mask(&inst.vertex_mask(&block.vertices)).forced.len();
    classify(inst, &block.vertices, cut_forced)
}

/// Recognises a chordless 6-cycle or extension of a 6-cycle on `vertices`
/// with exactly six boundary edges. All internal edges must be unforced and
/// simple.
pub fn critical_shape(inst: &Instance, vertices: &[VertexId]) -> Option<CriticalShape> {
    let k = vertices.len();
    if k != 6 && k != 8 {
        return None;
    }
    let mask = inst.vertex_mask(vertices);
    let idx = |v: VertexId| vertices.iter().position(|&x| x == v).unwrap();
    let mut internal = Vec::new();
    let mut boundary_u = 0;
    let mut boundary_f = 0;
    for &v in vertices {
        for &e in inst.graph.incident(v) {
            let edge = inst.graph.edge(e);
            let w = edge.other(v);
            if mask[w.index()] {
                if edge.ends.0 == v {
                    if edge.is_forced() {
                        return None;
                    }
                    internal.push((idx(v), idx(w)));
                }
            } else if edge.is_forced() {
                boundary_f += 1;
            } else {
                boundary_u += 1;
            }
        }
    }
    if boundary_u + boundary_f != 6 {
        return None;
    }
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in &internal {
        if adj[a].contains(&b) {
            return None;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let is_cycle = |skip: &[usize]| -> bool {
        let rest: Vec<usize> = (0..k).filter(|i| !skip.contains(i)).collect();
        if rest.len() != 6 {
            return false;
        }
        let deg = |v: usize| adj[v].iter().filter(|w| !skip.contains(w)).count();
        if rest.iter().any(|&v| deg(v) != 2) {
            return false;
        }
        // connected walk over the rest
        let mut seen = vec![false; k];
        let mut stack = vec![rest[0]];
        seen[rest[0]] = true;
        let mut cnt = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !skip.contains(&w) && !seen[w] {
                    seen[w] = true;
                    cnt += 1;
                    stack.push(w);
                }
            }
        }
        cnt == 6
    };
    let variant = if k == 6 {
        if internal.len() != 6 || !is_cycle(&[]) {
            return None;
        }
        CriticalVariant::SixCycle
    } else {
        if internal.len() != 9 {
            return None;
        }
        let found = internal.iter().any(|&(a, b)| {
            if adj[a].len() != 2 || adj[b].len() != 2 {
                return false;
            }
            let pa = adj[a].iter().copied().find(|&x| x != b);
            let pb = adj[b].iter().copied().find(|&x| x != a);
            match (pa, pb) {
                (Some(pa), Some(pb)) => pa != pb && is_cycle(&[a, b]),
                _ => false,
            }
        });
        if !found {
            return None;
        }
        CriticalVariant::SixCycleExtension
    };
    Some(CriticalShape { variant, pendent: boundary_u })
}

/// A 0-pendent critical U-component: chordless 6-cycle or extension with six
/// forced boundary edges.
pub fn is_critical_component(inst: &Instance, h: &UComponent) -> bool {
    if h.boundary_forced != 6 || (h.vertices.len() != 6 && h.vertices.len() != 8) {
        return false;
    }
    matches!(critical_shape(inst, &h.vertices), Some(s) if s.pendent == 0)
}

/// True when the U-component is a 4-cycle of unforced edges.
pub fn is_four_cycle(inst: &Instance, h: &UComponent) -> bool {
    h.vertices.len() == 4
        && h.edges.len() == 4
        && h.vertices.iter().all(|&v| inst.degrees_unchecked(v).d_u == 2)
}

/// The normal block with the fewest vertices over all circuits of `h`
/// (ties broken by smallest vertex list). Such a block contains no smaller
/// normal block and is therefore minimal. Returns `(circuit index, block
/// index)` into `circuits`.
pub fn find_minimal_normal_block(circuits: &[Circuit]) -> Result<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (ci, c) in circuits.iter().enumerate() {
        for (bi, b) in c.blocks.iter().enumerate() {
            if b.kind != BlockKind::Normal {
                continue;
            }
            let better = match best {
                None => true,
                Some((cj, bj)) => {
                    let o = &circuits[cj].blocks[bj];
                    (b.vertices.len(), &b.vertices) < (o.vertices.len(), &o.vertices)
                }
            };
            if better {
                best = Some((ci, bi));
            }
        }
    }
    match best {
        Some(x) => Ok(x),
        None => invalid_state("no normal block along any circuit"),
    }
}

/// One line per circuit (`circuit <host>: e.. `) followed by one line per
/// block (`  block v..: kind parity`). Vertex and edge ids are zero-based
/// internal ids.
pub fn dump_circuits(circuits: &[Circuit]) -> String {
    let mut s = String::new();
    for c in circuits {
        let _ = write!(s, "circuit {}:", c.host);
        for e in &c.edges {
            let _ = write!(s, " {}", e.0);
        }
        s.push('\n');
        for b in &c.blocks {
            let _ = write!(s, "  block");
            for v in &b.vertices {
                let _ = write!(s, " {}", v.0);
            }
            let parity = if b.parity == Parity::Odd { "odd" } else { "even" };
            let _ = writeln!(s, ": {} {}", b.kind.name(), parity);
        }
    }
    s
}
