//! Line-oriented instance format.
//!
//! ```text
//! c comment
//! p ftsp <n> <m>
//! e <u> <v> <num>[/<den>] [F]
//! ```
//!
//! Vertices are 1-indexed; `F` marks a forced edge.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Instance, Multigraph, Sign, VertexId, Weight};

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn parse_weight(tok: &str, line: usize) -> Result<Weight> {
    let (num, den) = match tok.split_once('/') {
        Some((a, b)) => (a, b),
        None => (tok, "1"),
    };
    let num: BigInt = num.parse().or_else(|_| err(line, format!("bad weight numerator {num:?}")))?;
    let den: BigInt = den.parse().or_else(|_| err(line, format!("bad weight denominator {den:?}")))?;
    if den.is_zero() {
        return err(line, "zero denominator");
    }
    Ok(Weight::new(num, den))
}

pub fn parse(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize)> = None;
    let mut g = Multigraph::new();
    let mut edges = 0usize;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return err(line, "duplicate problem line");
                }
                if toks.len() != 4 || toks[1] != "ftsp" {
                    return err(line, "expected `p ftsp <n> <m>`");
                }
                let n: usize = toks[2].parse().or_else(|_| err(line, "bad vertex count"))?;
                let m: usize = toks[3].parse().or_else(|_| err(line, "bad edge count"))?;
                g = Multigraph::with_vertices(n);
                header = Some((n, m));
            }
            Some("e") => {
                let Some((n, _)) = header else { return err(line, "edge before problem line") };
                if toks.len() != 4 && toks.len() != 5 {
                    return err(line, "expected `e <u> <v> <weight> [F]`");
                }
                let end = |t: &str| -> Result<VertexId> {
                    let v: usize = t.parse().or_else(|_| err(line, format!("bad vertex {t:?}")))?;
                    if v == 0 || v > n {
                        return err(line, format!("vertex {v} out of range 1..={n}"));
                    }
                    Ok(VertexId((v - 1) as u32))
                };
                let (u, v) = (end(toks[1])?, end(toks[2])?);
                if u == v {
                    return err(line, "self-loop");
                }
                let w = parse_weight(toks[3], line)?;
                let sign = match toks.get(4) {
                    None => Sign::Unforced,
                    Some(&"F") => Sign::Forced,
                    Some(t) => return err(line, format!("unexpected token {t:?}")),
                };
                for x in [u, v] {
                    if g.incident(x).len() >= 3 {
                        return err(line, format!("vertex {} exceeds degree 3", x.0 + 1));
                    }
                }
                g.add_edge(u, v, w, sign)?;
                edges += 1;
            }
            Some(t) => return err(line, format!("unknown line type {t:?}")),
        }
    }
    let Some((_, m)) = header else { return err(last.max(1), "missing problem line") };
    if edges != m {
        return err(last.max(1), format!("problem line declares {m} edges, found {edges}"));
    }
    Ok(Instance::new(g))
}

/// Writes alive vertices renumbered densely and alive edges in id order.
pub fn serialize(inst: &Instance) -> String {
    let mut dense = vec![0usize; inst.graph.vertex_bound()];
    for (i, v) in inst.graph.vertices().enumerate() {
        dense[v.index()] = i + 1;
    }
    let mut s = String::new();
    let _ = writeln!(s, "p ftsp {} {}", inst.n(), inst.m());
    for e in inst.graph.edges() {
        let w = &e.weight;
        let _ = write!(s, "e {} {} {}", dense[e.ends.0.index()], dense[e.ends.1.index()], w.numer());
        if !w.denom().eq(&BigInt::from(1)) {
            let _ = write!(s, "/{}", w.denom());
        }
        if e.is_forced() {
            s.push_str(" F");
        }
        s.push('\n');
    }
    s
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, inst: &Instance) -> Result<()> {
    std::fs::write(path, serialize(inst))?;
    Ok(())
}
