//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use cubic_tsp::analysis::{alpha, branching_factor, leaf_bound, reference_vectors, verify_config, WeightConfig};
use cubic_tsp::connectivity::circuit_partition;
use cubic_tsp::reductions::{reduce_to_fixpoint, Outcome};
use cubic_tsp::search::{
    circuit_procedure, select_branch_circuit, solve_all_4cycles, solve_all_4cycles_bruteforce, solve_with, Action, Decision,
    Solution, SolveOptions, Strategy,
};
use cubic_tsp::toolkit::{
    cycle, default_seed, exhaustive_forced, held_karp, inject_forced, named, random_cubic, random_four_cycles, serialize,
    Named, WeightSpec,
};
use cubic_tsp::{EdgeId, Instance, ReductionLog, TourResult, VertexId};

type Verdict = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

struct Case {
    label: String,
    inst: Instance,
}

fn cubic_corpus(seed: u64) -> Vec<Case> {
    (0..200u64)
        .map(|i| {
            let n = 6 + 2 * (i as usize % 6);
            let s = seed.wrapping_add(i);
            Case { label: format!("cubic n={n} seed={s}"), inst: random_cubic(n, s, WeightSpec::default()).unwrap() }
        })
        .collect()
}

fn forced_corpus(seed: u64) -> Vec<Case> {
    (0..100u64)
        .map(|i| {
            let n = 6 + 2 * (i as usize % 4);
            let s = seed.wrapping_add(10_000 + i);
            let mut inst = random_cubic(n, s, WeightSpec::default()).unwrap();
            inject_forced(&mut inst, 0.3, s);
            Case { label: format!("forced n={n} seed={s}"), inst }
        })
        .collect()
}

fn known_corpus() -> Vec<(Case, Option<i64>)> {
    let c = |label: &str, inst: Instance| Case { label: label.to_string(), inst };
    vec![
        (c("petersen", named(Named::Petersen)), None),
        (c("k4", named(Named::K4)), Some(4)),
        (c("prism", named(Named::Prism)), Some(6)),
        (c("k33", named(Named::K33)), Some(6)),
        (c("c6", cycle(6)), Some(6)),
    ]
}

fn audited(inst: &Instance) -> Solution {
    let opts = SolveOptions { audit: true, ..Default::default() };
    solve_with(inst, &opts).expect("solve succeeds")
}

fn plain(inst: &Instance, strategy: Strategy) -> TourResult {
    let opts = SolveOptions { strategy, ..Default::default() };
    solve_with(inst, &opts).expect("solve succeeds").result
}

struct Run {
    label: String,
    solution: Solution,
}

fn criterion_1(cubic: &[Case], forced: &[Case], runs: &mut Vec<Run>) -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    for case in cubic {
        let expected = held_karp(&case.inst).unwrap();
        let full = audited(&case.inst);
        let simple = plain(&case.inst, Strategy::Simple);
        if full.result.cost() != expected.cost() || simple.cost() != expected.cost() {
            failures.push(format!("{}: full {:?} simple {:?} oracle {:?}", case.label, full.result.cost(), simple.cost(), expected.cost()));
        }
        runs.push(Run { label: case.label.clone(), solution: full });
    }
    for case in forced {
        let expected = exhaustive_forced(&case.inst).unwrap();
        let full = audited(&case.inst);
        let simple = plain(&case.inst, Strategy::Simple);
        let same = |r: &TourResult| r.is_optimal() == expected.is_optimal() && r.cost() == expected.cost();
        if !same(&full.result) || !same(&simple) {
            failures.push(format!("{}: full {:?} simple {:?} oracle {:?}", case.label, full.result.cost(), simple.cost(), expected.cost()));
        }
        runs.push(Run { label: case.label.clone(), solution: full });
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("runtime {:.1}s exceeds 300s", elapsed.as_secs_f64()));
    }
    let feasible = forced.len() - runs[cubic.len()..].iter().filter(|r| !r.solution.result.is_optimal()).count();
    if failures.is_empty() {
        Ok(format!(
            "{} cubic and {} forced instances ({} forced feasible) agree with the oracles, {:.1}s",
            cubic.len(),
            forced.len(),
            feasible,
            elapsed.as_secs_f64()
        ))
    } else {
        Err(format!("{} mismatches; first: {}", failures.len(), failures[0]))
    }
}

fn criterion_2(runs: &mut Vec<Run>) -> Verdict {
    let mut failures = Vec::new();
    for (case, expected) in known_corpus() {
        let sol = audited(&case.inst);
        let got = sol.result.cost().cloned();
        if got != expected.map(|c| q(c, 1)) {
            failures.push(format!("{}: got {:?}, expected {:?}", case.label, got.map(|c| c.to_string()), expected));
        }
        runs.push(Run { label: case.label, solution: sol });
    }
    if failures.is_empty() {
        Ok("petersen INFEASIBLE; k4 4, prism 6, k33 6, c6 6".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_3(runs: &[Run]) -> Verdict {
    let mut steps = 0usize;
    let mut branches = 0usize;
    let mut violations = Vec::new();
    for run in runs {
        let report = run.solution.report.as_ref().unwrap();
        for (kind, stats) in &report.kinds {
            if kind == "branch" {
                branches += stats.count;
            } else {
                steps += stats.count;
            }
        }
        violations.extend(report.violations.iter().map(|v| format!("{}: {v}", run.label)));
    }
    if violations.is_empty() {
        Ok(format!("{steps} reduction steps and {branches} branch children, zero violations over {} instances", runs.len()))
    } else {
        Err(format!("{} violations; first: {}", violations.len(), violations[0]))
    }
}

fn criterion_4(runs: &[Run], seed: u64) -> Verdict {
    let mut failures = Vec::new();
    let mut worst = 0f64;
    let mut check = |label: &str, sol: &Solution, failures: &mut Vec<String>| {
        let report = sol.report.as_ref().unwrap();
        let bound = leaf_bound(&report.mu0);
        let ratio = sol.stats.leaves as f64 / bound.to_f64().unwrap();
        worst = worst.max(ratio);
        if BigInt::from(sol.stats.leaves) > BigInt::from(bound.clone()) {
            failures.push(format!("{label}: {} leaves > bound {bound}", sol.stats.leaves));
        }
    };
    for run in runs {
        check(&run.label, &run.solution, &mut failures);
    }
    let mut max_time = 0f64;
    let mut max_leaves = 0u64;
    for i in 0..20u64 {
        let s = seed.wrapping_add(50_000 + i);
        let inst = random_cubic(40, s, WeightSpec::default()).unwrap();
        let start = Instant::now();
        let sol = audited(&inst);
        let t = start.elapsed().as_secs_f64();
        max_time = max_time.max(t);
        max_leaves = max_leaves.max(sol.stats.leaves);
        let label = format!("cubic n=40 seed={s}");
        if t > 10.0 {
            failures.push(format!("{label}: {t:.2}s exceeds 10s"));
        }
        check(&label, &sol, &mut failures);
    }
    if failures.is_empty() {
        Ok(format!(
            "{} instances within bound, worst leaves/bound {worst:.4}; n=40 max leaves {max_leaves}, max time {max_time:.2}s",
            runs.len() + 20
        ))
    } else {
        Err(format!("{} failures; first: {}", failures.len(), failures[0]))
    }
}

fn criterion_5() -> Verdict {
    let cfg = WeightConfig::default();
    let mut failures = verify_config(&cfg);
    let tight = q(10, 3);
    let six_cycle = &cfg.w3p * q(6, 1) + &cfg.gamma;
    let odd_block = &cfg.w3 * q(4, 1) - &cfg.w3p * q(2, 1);
    // 2 * alpha^(-a) = 1 with alpha = 2^(3/10) holds exactly when a = 10/3
    if six_cycle != tight {
        failures.push(format!("6w3' + gamma = {six_cycle}, expected 10/3"));
    }
    if odd_block != tight {
        failures.push(format!("4w3 - 2w3' = {odd_block}, expected 10/3"));
    }
    let vectors = reference_vectors(&cfg);
    if vectors.len() != 13 {
        failures.push(format!("{} reference vectors, expected 13", vectors.len()));
    }
    let a = alpha();
    let mut worst = 0f64;
    for v in &vectors {
        let entries: Vec<f64> = v.entries.iter().map(|x| x.to_f64().unwrap()).collect();
        let root = branching_factor(&entries).unwrap();
        worst = worst.max(root);
        if root > a + 1e-9 {
            failures.push(format!("{}: root {root:.12}", v.label));
        }
    }
    if failures.is_empty() {
        Ok(format!("both bottlenecks equal 10/3 exactly; 13 vectors, max root {worst:.10} <= {a:.10}"))
    } else {
        Err(failures.join("; "))
    }
}

/// Groups the edges of `h_edges` by the transitive closure of the relation
/// "removing both edges disconnects the component".
fn naive_partition(inst: &Instance, vertices: &[VertexId], h_edges: &[EdgeId]) -> BTreeSet<Vec<EdgeId>> {
    let connected_without = |skip: [EdgeId; 2]| {
        let set: BTreeSet<VertexId> = vertices.iter().copied().collect();
        let mut seen = BTreeSet::from([vertices[0]]);
        let mut stack = vec![vertices[0]];
        while let Some(v) = stack.pop() {
            for &e in inst.graph.incident(v) {
                if inst.is_forced(e) || skip.contains(&e) {
                    continue;
                }
                let w = inst.graph.edge(e).other(v);
                if set.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == vertices.len()
    };
    let m = h_edges.len();
    let mut class: Vec<usize> = (0..m).collect();
    for i in 0..m {
        for j in i + 1..m {
            if !connected_without([h_edges[i], h_edges[j]]) {
                let (a, b) = (class[i], class[j]);
                for c in class.iter_mut() {
                    if *c == b {
                        *c = a;
                    }
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<EdgeId>> = Default::default();
    for i in 0..m {
        groups.entry(class[i]).or_default().push(h_edges[i]);
    }
    groups.into_values().map(|mut g| {
        g.sort();
        g
    }).collect()
}

fn shape_problem(inst: &Instance) -> Option<String> {
    for v in inst.graph.vertices() {
        if inst.graph.incident(v).len() == 2 {
            return Some(format!("degree-2 vertex {v}"));
        }
    }
    let edges: Vec<(VertexId, VertexId)> = inst.graph.edges().map(|e| (e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1))).collect();
    let set: BTreeSet<(VertexId, VertexId)> = edges.iter().copied().collect();
    if set.len() != edges.len() {
        return Some("parallel edges".into());
    }
    for &(a, b) in &set {
        for c in inst.graph.vertices() {
            if c != a && c != b && set.contains(&(a.min(c), a.max(c))) && set.contains(&(b.min(c), b.max(c))) {
                return Some(format!("triangle {a} {b} {c}"));
            }
        }
    }
    None
}

/// Reduced instances met along one descent path of the search, taking the
/// include or delete child by a fixed alternation.
fn descent(inst: Instance, flip: u64, limit: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut cur = inst;
    for depth in 0..limit {
        let (reduced, _, outcome) = reduce_to_fixpoint(&cur).unwrap();
        if outcome != Outcome::Reduced {
            break;
        }
        out.push(reduced.clone());
        let Some((circuit, pivot)) = select_branch_circuit(&reduced).unwrap() else { break };
        let action = if (flip + depth as u64).is_multiple_of(2) { Action::Include } else { Action::Delete };
        let mut next = reduced;
        let mut log = ReductionLog::default();
        if !circuit_procedure(&mut next, &circuit, Decision { edge: pivot, action }, &mut log).unwrap() {
            break;
        }
        cur = next;
    }
    out
}

fn criterion_6(seed: u64) -> Verdict {
    let mut failures = Vec::new();
    let mut collected = 0;
    let mut with_forced = 0;
    let mut components = 0;
    let mut tries = 0u64;
    while collected < 200 && tries < 5000 {
        let n = 10 + 2 * (tries as usize % 16);
        let s = seed.wrapping_add(70_000 + tries);
        let mut inst = random_cubic(n, s, WeightSpec::default()).unwrap();
        if tries % 3 == 1 {
            inject_forced(&mut inst, 0.2, s);
        }
        tries += 1;
        for reduced in descent(inst, s, 4) {
            if collected == 200 {
                break;
            }
            collected += 1;
            if !reduced.forced_edges().is_empty() {
                with_forced += 1;
            }
            let label = format!("n={n} seed={s} sample {collected}");
            if let Some(p) = shape_problem(&reduced) {
                failures.push(format!("{label}: {p}"));
            }
            for h in reduced.u_components() {
                if h.is_trivial() {
                    continue;
                }
                components += 1;
                let fast: BTreeSet<Vec<EdgeId>> = circuit_partition(&reduced, &h)
                    .unwrap()
                    .into_iter()
                    .map(|c| {
                        let mut e = c.edges;
                        e.sort();
                        e
                    })
                    .collect();
                if fast != naive_partition(&reduced, &h.vertices, &h.edges) {
                    failures.push(format!("{label}: circuit partition differs from the 2-cut closure"));
                }
            }
            let (again, log, outcome) = reduce_to_fixpoint(&reduced).unwrap();
            if outcome != Outcome::Reduced || !log.is_empty() || serialize(&again) != serialize(&reduced) {
                failures.push(format!("{label}: second reduction is not the identity"));
            }
        }
    }
    if collected < 200 {
        failures.push(format!("only {collected} reduced instances in {tries} tries"));
    }
    if failures.is_empty() {
        Ok(format!("{collected} reduced instances ({with_forced} with forced edges), {components} components checked"))
    } else {
        Err(format!("{} failures; first: {}", failures.len(), failures[0]))
    }
}

fn criterion_7(seed: u64) -> Verdict {
    let mut failures = Vec::new();
    let mut feasible = 0;
    for i in 0..100u64 {
        let k = 2 + (i as usize % 11);
        let s = seed.wrapping_add(90_000 + i);
        let inst = random_four_cycles(k, 0.3, s, WeightSpec::default()).unwrap();
        let fast = solve_all_4cycles(&inst).unwrap();
        let brute = solve_all_4cycles_bruteforce(&inst).unwrap();
        if fast.is_optimal() != brute.is_optimal() || fast.cost() != brute.cost() {
            failures.push(format!("k={k} seed={s}: {:?} vs brute force {:?}", fast.cost(), brute.cost()));
        }
        if let TourResult::Optimal { edges, .. } = &fast {
            feasible += 1;
            if !inst.is_tour(edges) {
                failures.push(format!("k={k} seed={s}: result is not a tour"));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("100 instances with 2..=12 four-cycles ({feasible} feasible) match the brute force"))
    } else {
        Err(format!("{} mismatches; first: {}", failures.len(), failures[0]))
    }
}

fn main() {
    let seed = default_seed();
    let cubic = cubic_corpus(seed);
    let forced = forced_corpus(seed);
    let mut runs = Vec::new();
    let mut results: Vec<(&str, Verdict)> = Vec::new();
    results.push(("1 oracle equivalence", criterion_1(&cubic, &forced, &mut runs)));
    let corpus1 = runs.len();
    results.push(("2 known instances", criterion_2(&mut runs)));
    results.push(("3 measure monotonicity", criterion_3(&runs[..corpus1])));
    results.push(("4 leaf bound", criterion_4(&runs, seed)));
    results.push(("5 bottleneck vectors", criterion_5()));
    results.push(("6 structural properties", criterion_6(seed)));
    results.push(("7 all-4-cycles base case", criterion_7(seed)));
    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
