mod common;

use std::collections::BTreeMap;

use cfn5::capacity::{petersen_minus_edge, standard_edge};
use cfn5::construct::*;
use cfn5::flow::decide_faithful;
use cfn5::graph::Multigraph;
use cfn5::si5::named;
use cfn5::wheels::build_wheel;
use common::*;

#[test]
fn odd_cycle_templates() {
    let k4 = build_wheel(3).unwrap();
    let t = template_odd_cycle(&k4, &[1, 2, 3], named("(4,1)")).unwrap();
    assert!(!decide_faithful(t.capacity_graph()).unwrap().is_feasible());
    // The subset (4,0)u(0,1) is certified the same way.
    assert!(template_odd_cycle(&k4, &[1, 2, 3], named("(4,0)u(0,1)")).is_ok());

    let w5 = build_wheel(5).unwrap();
    let t = template_odd_cycle(&w5, &[1, 2, 3, 4, 5], named("(4,1)")).unwrap();
    let Provenance::OddCycle { cycle } = t.provenance() else {
        panic!()
    };
    assert_eq!(cycle, &vec![0, 1, 2, 3, 4]);

    let w4 = build_wheel(4).unwrap();
    assert_eq!(
        template_odd_cycle(&w4, &[1, 2, 3, 4], named("(4,1)")).unwrap_err(),
        ConstructError::EvenCycle(4)
    );
    assert_eq!(
        template_odd_cycle(&k4, &[1, 2, 3], named("(1,4)")).unwrap_err(),
        ConstructError::Measure("(1,4)".into())
    );
    // Through the hub, which has three edges off the triangle.
    assert!(matches!(
        template_odd_cycle(&w5, &[0, 1, 2], named("(4,1)")),
        Err(ConstructError::OffCycleEdges {
            vertex: 0,
            count: 3
        })
    ));
    assert_eq!(
        template_odd_cycle(&w5, &[1, 3, 4], named("(4,1)")).unwrap_err(),
        ConstructError::NotAdjacent(1, 3)
    );
}

#[test]
fn path_with_an_even_chord() {
    // Prism: triangles 0 1 2 and 3 4 5, matching i -- i+3.
    let g = ladder(3, false);
    let t = template_path(&g, &[3, 0, 1, 2, 5], named("(4,1)")).unwrap();
    let Provenance::PathWithChord { path, chord } = t.provenance() else {
        panic!()
    };
    assert_eq!(path.len(), 4);
    let e = g.edge(*chord).unwrap();
    assert_eq!((e.tail.min(e.head), e.tail.max(e.head)), (0, 2));

    // 0 - 1 - 2 - 5 - 4 - 3: the only chord 1 -- 4 spans three steps.
    assert_eq!(
        template_path(&g, &[0, 1, 2, 5, 4, 3], named("(4,1)")).unwrap_err(),
        ConstructError::NoEvenChord
    );
    assert!(matches!(
        template_path(&g, &[3, 0, 1, 2, 5], named("(1,2)u(3,4)")),
        Err(ConstructError::NotInFourOne(_))
    ));
}

/// `x0..x4` are vertices 0..4 and `y0..y3` are 5..8; `z` = 9 hangs off
/// `x2` and closes the ends. Links join `x1 y1` and the given pair.
fn two_path_graph(link: (usize, usize)) -> Multigraph {
    let mut edges = vec![];
    for i in 0..4 {
        edges.push((i, i + 1));
    }
    for j in 5..8 {
        edges.push((j, j + 1));
    }
    edges.extend([(1, 6), link, (2, 9), (9, 0), (9, 8), (4, 5)]);
    Multigraph::from_edges(10, &edges).unwrap()
}

#[test]
fn two_paths_with_crossing_links() {
    // x1 -- y1 and x3 -- y2: distance 2 on the first path, 1 on the second.
    let g = two_path_graph((3, 7));
    let t = template_two_paths(&g, &[0, 1, 2, 3, 4], &[5, 6, 7, 8], named("(4,1)")).unwrap();
    assert!(matches!(t.provenance(), Provenance::TwoPaths { .. }));
    assert!(!decide_faithful(t.capacity_graph()).unwrap().is_feasible());

    // With the roles swapped the links sit at odd distance on the first path.
    assert_eq!(
        template_two_paths(&g, &[5, 6, 7, 8], &[0, 1, 2, 3, 4], named("(4,1)")).unwrap_err(),
        ConstructError::NoLinkPair
    );
    assert_eq!(
        template_two_paths(&g, &[0, 1, 2], &[2, 6, 7], named("(4,1)")).unwrap_err(),
        ConstructError::PathsMeet(2)
    );
}

#[test]
fn substitution_with_no_pieces_is_the_identity() {
    let k4 = build_wheel(3).unwrap();
    let t = template_odd_cycle(&k4, &[1, 2, 3], named("(4,1)")).unwrap();
    assert_eq!(
        &substitute(&t, &BTreeMap::new()).unwrap(),
        t.capacity_graph().graph()
    );
    // Standard edges on the spokes only rename vertices.
    let r: Realisation = (3..6).map(|i| (i, standard_edge())).collect();
    let g = substitute(&t, &r).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (4, 6));
}

#[test]
fn substitution_checks_containment() {
    let k4 = build_wheel(3).unwrap();
    let t = template_odd_cycle(&k4, &[1, 2, 3], named("(4,1)")).unwrap();
    let r: Realisation = [(1, standard_edge())].into();
    assert_eq!(
        substitute(&t, &r).unwrap_err(),
        ConstructError::CapacityMismatch {
            edge: 1,
            piece: "(1,4)".into(),
            allowed: "(4,1)".into()
        }
    );
    let r: Realisation = [(3, petersen_minus_edge())].into();
    assert!(matches!(
        substitute(&t, &r),
        Err(ConstructError::CapacityMismatch { edge: 3, .. })
    ));
}

#[test]
fn partial_substitutions_stay_infeasible() {
    let k4 = build_wheel(3).unwrap();
    let t = template_odd_cycle(&k4, &[1, 2, 3], named("(4,1)")).unwrap();
    for pieces in [vec![0], vec![0, 1]] {
        let r: Realisation = pieces.iter().map(|&i| (i, petersen_minus_edge())).collect();
        let cg = substitute_capacities(&t, &r).unwrap();
        assert_eq!(cg.graph().edge_count(), 6 + 13 * pieces.len());
        assert!(!decide_faithful(&cg).unwrap().is_feasible(), "{pieces:?}");
    }
}

#[test]
fn appendix_snark() {
    let (t, seed) = appendix_seed().unwrap();
    assert!(!decide_faithful(t.capacity_graph()).unwrap().is_feasible());
    assert_eq!((seed.vertex_count(), seed.edge_count()), (28, 45));

    let g = build_appendix_snark().unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (28, 42));
    assert!(g.is_cubic() && g.is_simple() && g.is_connected());
    assert_eq!(g.girth(), Some(5));
    assert_eq!(g.cyclic_edge_connectivity_at_least(4), Ok(true));
    assert_eq!(g.chromatic_index_3(), Ok(false));
    assert!(g.is_snark());
}

#[test]
fn split_search() {
    let (_, seed) = appendix_seed().unwrap();
    let good: Vec<Split> = splits()
        .into_iter()
        .filter(|&s| expand_seed(&seed, s).is_ok_and(|g| g.is_snark()))
        .collect();
    // One edge from each piece, in either mirror image.
    assert_eq!(good, vec![Split([1, 3]), Split([2, 4])]);
    assert_eq!(good[0], APPENDIX_SPLIT);
    // Both edges of one piece on the degree-2 side leave a 4-cycle.
    for s in [Split([1, 2]), Split([3, 4])] {
        assert_eq!(expand_seed(&seed, s).unwrap().girth(), Some(4));
    }
}
