use cubic_tsp::toolkit::{
    bench, cycle, exhaustive_forced, generate, held_karp, named, parse, random_cubic, read_instance, serialize, write_instance,
    BenchOptions, GeneratorSpec, Kind, Named, WeightSpec,
};
use cubic_tsp::{Error, TourResult, VertexId, Weight};
use num_bigint::BigInt;

fn w(x: i64) -> Weight {
    Weight::from_integer(BigInt::from(x))
}

#[test]
fn oracles_on_small_graphs() {
    for (inst, cost) in [(cycle(5), 5), (named(Named::K4), 4), (named(Named::K33), 6), (named(Named::Prism), 6)] {
        assert_eq!(held_karp(&inst).unwrap().cost(), Some(&w(cost)));
        assert_eq!(exhaustive_forced(&inst).unwrap().cost(), Some(&w(cost)));
    }
    assert_eq!(held_karp(&named(Named::Petersen)).unwrap(), TourResult::Infeasible);
    assert_eq!(exhaustive_forced(&named(Named::Petersen)).unwrap(), TourResult::Infeasible);
}

#[test]
fn exhaustive_respects_forced_edges() {
    let inst = parse("p ftsp 4 6\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 4 1 1\ne 1 3 10 F\ne 2 4 1\n").unwrap();
    let r = exhaustive_forced(&inst).unwrap();
    assert_eq!(r.cost(), Some(&w(13)));
    assert!(inst.is_tour(r.edges()));
    assert!(matches!(held_karp(&inst), Err(Error::InvalidArgument(_))));
}

#[test]
fn three_forced_edges_at_a_vertex_is_infeasible() {
    let inst = parse("p ftsp 4 6\ne 1 2 1 F\ne 1 3 1 F\ne 1 4 1 F\ne 2 3 1\ne 3 4 1\ne 4 2 1\n").unwrap();
    assert_eq!(exhaustive_forced(&inst).unwrap(), TourResult::Infeasible);
    assert_eq!(cubic_tsp::solve(&inst).unwrap(), TourResult::Infeasible);
}

#[test]
fn held_karp_guard() {
    let inst = random_cubic(26, 1, WeightSpec::Unit).unwrap();
    assert!(matches!(held_karp(&inst), Err(Error::GuardExceeded(_))));
}

#[test]
fn generator_is_deterministic() {
    let spec = GeneratorSpec::new(Kind::RandomCubic { n: 20 }, 42, WeightSpec::default());
    assert_eq!(serialize(&generate(&spec).unwrap()), serialize(&generate(&spec).unwrap()));
    let other = GeneratorSpec { seed: 43, ..spec };
    assert_ne!(serialize(&generate(&spec).unwrap()), serialize(&generate(&other).unwrap()));
    assert!(generate(&GeneratorSpec::new(Kind::RandomCubic { n: 7 }, 0, WeightSpec::Unit)).is_err());
}

#[test]
fn random_cubic_is_simple_and_cubic() {
    for seed in 0..10 {
        let inst = random_cubic(30, seed, WeightSpec::default()).unwrap();
        assert_eq!(inst.m(), 45);
        for v in inst.graph.vertices() {
            assert_eq!(inst.graph.incident(v).len(), 3);
            let mut nb: Vec<VertexId> = inst.graph.neighbors(v).collect();
            nb.sort();
            nb.dedup();
            assert_eq!(nb.len(), 3);
        }
    }
}

#[test]
fn petersen_structure() {
    let p = named(Named::Petersen);
    assert_eq!((p.n(), p.m()), (10, 15));
    let verts: Vec<VertexId> = p.graph.vertices().collect();
    for &v in &verts {
        assert_eq!(p.graph.incident(v).len(), 3);
    }
    // girth 5: no two adjacent vertices share a neighbour, no 4-cycles
    for &a in &verts {
        for &b in &verts {
            if a >= b {
                continue;
            }
            let na: Vec<VertexId> = p.graph.neighbors(a).collect();
            let common = p.graph.neighbors(b).filter(|x| na.contains(x)).count();
            assert!(common <= 1, "{a} {b}");
            if na.contains(&b) {
                assert_eq!(common, 0);
            }
        }
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let cases = [
        ("e 1 2 1\n", 1),
        ("p ftsp 2 1\np ftsp 2 1\n", 2),
        ("p ftsp 2 1\ne 1 1 1\n", 2),
        ("p ftsp 2 1\ne 1 3 1\n", 2),
        ("p ftsp 2 1\ne 1 2 x\n", 2),
        ("p ftsp 2 1\ne 1 2 1/0\n", 2),
        ("c hi\np ftsp 2 1\ne 1 2 1 G\n", 3),
        ("p ftsp 5 4\ne 1 2 1\ne 1 3 1\ne 1 4 1\ne 1 5 1\n", 5),
    ];
    for (text, line) in cases {
        match parse(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
    assert!(matches!(parse("p ftsp 3 3\ne 1 2 1\ne 2 3 1\n"), Err(Error::Parse { .. })));
}

#[test]
fn parse_accepts_rationals_and_comments() {
    let inst = parse("c triangle\np ftsp 3 3\ne 1 2 1/2\ne 2 3 3/4 F\n\ne 3 1 2\n").unwrap();
    assert_eq!(inst.forced_edges().len(), 1);
    assert_eq!(exhaustive_forced(&inst).unwrap().cost(), Some(&Weight::new(BigInt::from(13), BigInt::from(4))));
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.ftsp");
    let inst = random_cubic(12, 5, WeightSpec::default()).unwrap();
    write_instance(&path, &inst).unwrap();
    assert_eq!(serialize(&read_instance(&path).unwrap()), serialize(&inst));
    assert!(matches!(read_instance(dir.path().join("missing")), Err(Error::Io(_))));
}

#[test]
fn bench_over_empty_and_small_corpora() {
    let dir = tempfile::tempdir().unwrap();
    let table = bench(dir.path(), &BenchOptions::default()).unwrap();
    assert!(table.records.is_empty() && table.errors.is_empty());
    assert_eq!(table.max_ratio(), None);

    write_instance(dir.path().join("a_petersen.ftsp"), &named(Named::Petersen)).unwrap();
    write_instance(dir.path().join("b_k33.ftsp"), &named(Named::K33)).unwrap();
    std::fs::write(dir.path().join("c_broken.ftsp"), "garbage\n").unwrap();
    let table = bench(dir.path(), &BenchOptions { jobs: 2, ..Default::default() }).unwrap();
    assert_eq!(table.records.len(), 2);
    assert_eq!(table.errors.len(), 1);
    assert!(!table.records[0].optimal);
    assert_eq!(table.records[1].cost, Some(w(6)));
    let text = table.render();
    assert!(text.starts_with("id\tn\tstatus"));
    assert!(text.contains("INFEASIBLE") && text.contains("max_ratio"));
}
