//! Replayable record of instance rewrites.
//!
//! Every rewrite applied by the reductions or the circuit procedure is
//! appended here. Replaying the entries forward on the input instance
//! reproduces the rewritten instance; walking them backwards lifts a tour of
//! the rewritten instance to a tour of the input.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Instance, Sign, VertexId, Weight};

/// An edge created by a rewrite, with everything needed to re-create it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddedEdge {
    pub id: EdgeId,
    pub ends: (VertexId, VertexId),
    pub weight: Weight,
    pub sign: Sign,
}

/// One boundary edge of a 3-cut replacement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutPort {
    /// Boundary edge `x_i y_i` of the replaced subgraph.
    pub old: EdgeId,
    /// Replacement edge `x y_i`.
    pub new: AddedEdge,
}

/// A 4-cut replacement edge and the internal path it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathEdge {
    pub edge: AddedEdge,
    pub path: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogEntry {
    Include { edge: EdgeId },
    Delete { edge: EdgeId },
    Contract { vertex: VertexId, removed: [EdgeId; 2], added: EdgeId, ends: (VertexId, VertexId), weight: Weight },
    ThreeCut {
        removed_vertices: Vec<VertexId>,
        new_vertex: VertexId,
        ports: [CutPort; 3],
        /// `solutions[i]` covers the subgraph with a path joining the two
        /// ports other than `i`; `None` when no such path exists.
        solutions: [Option<Vec<EdgeId>>; 3],
    },
    FourCut {
        /// Interior vertices (the four attachment vertices survive).
        removed_vertices: Vec<VertexId>,
        /// Edges between attachment vertices that were removed.
        removed_edges: Vec<EdgeId>,
        attach: [VertexId; 4],
        added: Vec<PathEdge>,
    },
}

impl LogEntry {
    pub fn kind(&self) -> &'static str {
        match self {
            LogEntry::Include { .. } => "include",
            LogEntry::Delete { .. } => "delete",
            LogEntry::Contract { .. } => "contract",
            LogEntry::ThreeCut { .. } => "3cut",
            LogEntry::FourCut { .. } => "4cut",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionLog {
    entries: Vec<LogEntry>,
}

fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

impl ReductionLog {
    pub fn push(&mut self, entry: LogEntry) {
        self.entries.push(entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LogEntry] {
        &self.entries
    }

    pub fn extend(&mut self, other: ReductionLog) {
        self.entries.extend(other.entries);
    }

    /// Applies the entries to `inst`, which must be the instance the log
    /// was recorded against.
    pub fn replay(&self, inst: &mut Instance) -> Result<()> {
        fn add(inst: &mut Instance, a: &AddedEdge) -> Result<()> {
            let id = inst.graph.add_edge(a.ends.0, a.ends.1, a.weight.clone(), a.sign)?;
            if id != a.id {
                return Err(internal(format!("replay produced {id}, log expects {}", a.id)));
            }
            Ok(())
        }
        for entry in &self.entries {
            match entry {
                LogEntry::Include { edge } => inst.include(*edge),
                LogEntry::Delete { edge } => inst.delete(*edge),
                LogEntry::Contract { vertex, added, ends, weight, .. } => {
                    inst.graph.remove_vertex(*vertex);
                    let a = AddedEdge { id: *added, ends: *ends, weight: weight.clone(), sign: Sign::Forced };
                    add(inst, &a)?;
                }
                LogEntry::ThreeCut { removed_vertices, new_vertex, ports, .. } => {
                    for &v in removed_vertices {
                        inst.graph.remove_vertex(v);
                    }
                    let x = inst.graph.add_vertex();
                    if x != *new_vertex {
                        return Err(internal("replay allocated a different vertex id"));
                    }
                    for p in ports {
                        add(inst, &p.new)?;
                    }
                }
                LogEntry::FourCut { removed_vertices, removed_edges, added, .. } => {
                    for &v in removed_vertices {
                        inst.graph.remove_vertex(v);
                    }
                    for &e in removed_edges {
                        inst.delete(e);
                    }
                    for p in added {
                        add(inst, &p.edge)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Lifts a tour of the rewritten instance to the instance the log was
    /// recorded against.
    pub fn expand(&self, tour: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let mut set: BTreeSet<EdgeId> = tour.iter().copied().collect();
        for entry in self.entries.iter().rev() {
            match entry {
                LogEntry::Include { edge } => {
                    if !set.contains(edge) {
                        return Err(internal(format!("tour misses included edge {edge}")));
                    }
                }
                LogEntry::Delete { edge } => {
                    if set.contains(edge) {
                        return Err(internal(format!("tour uses deleted edge {edge}")));
                    }
                }
                LogEntry::Contract { removed, added, .. } => {
                    if !set.remove(added) {
                        return Err(internal(format!("tour misses contracted edge {added}")));
                    }
                    set.extend(removed.iter().copied());
                }
                LogEntry::ThreeCut { ports, solutions, .. } => {
                    let used: Vec<usize> = (0..3).filter(|&i| set.contains(&ports[i].new.id)).collect();
                    if used.len() != 2 {
                        return Err(internal(format!("tour uses {} edges at a 3-cut vertex", used.len())));
                    }
                    let skipped = 3 - used[0] - used[1];
                    let path = solutions[skipped]
                        .as_ref()
                        .ok_or_else(|| internal("tour selects an infeasible 3-cut pairing"))?;
                    for &i in &used {
                        set.remove(&ports[i].new.id);
                        set.insert(ports[i].old);
                    }
                    set.extend(path.iter().copied());
                }
                LogEntry::FourCut { added, .. } => {
                    let mut used = 0;
                    for p in added {
                        if set.remove(&p.edge.id) {
                            used += 1;
                            set.extend(p.path.iter().copied());
                        }
                    }
                    if !added.is_empty() && used != 2 {
                        return Err(internal(format!("tour uses {used} replacement edges of a 4-cut")));
                    }
                }
            }
        }
        Ok(set.into_iter().collect())
    }
}
