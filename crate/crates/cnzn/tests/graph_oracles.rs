use cnzn::graphs::{enumerate, enumerate_by_degeneration, enumerate_decorated, Deletion, StableGraph};
use num_rational::Ratio;

// Numbers of boundary strata of the moduli of stable curves, counted by hand.
const COUNTS: [(u32, usize, usize); 8] = [(0, 3, 1), (0, 4, 4), (0, 5, 26), (1, 1, 2), (1, 2, 5), (2, 0, 7), (2, 1, 16), (3, 0, 42)];

#[test]
fn generators_agree_on_counts() {
    for (g, m, want) in COUNTS {
        let direct = enumerate(g, m);
        let degen = enumerate_by_degeneration(g, m);
        assert_eq!(direct.len(), want, "direct search ({g},{m})");
        assert_eq!(degen.len(), want, "degeneration ({g},{m})");
        for d in &degen {
            assert_eq!(direct.iter().filter(|x| x.isomorphic(d)).count(), 1, "({g},{m}) {d:?}");
        }
    }
}

#[test]
fn generators_agree_beyond_the_table() {
    for (g, m) in [(1u32, 3usize), (2, 2)] {
        let direct = enumerate(g, m);
        let degen = enumerate_by_degeneration(g, m);
        assert_eq!(direct.len(), degen.len(), "({g},{m})");
        assert!(degen.iter().all(|d| direct.iter().any(|x| x.isomorphic(d))));
    }
}

#[test]
fn graphs_are_stable_connected_and_of_the_right_genus() {
    for (g, m, _) in COUNTS {
        for gr in enumerate(g, m) {
            assert!(gr.is_stable() && gr.is_connected());
            assert_eq!(gr.genus(), g);
            assert_eq!(gr.legs.len(), m);
        }
    }
}

#[test]
fn automorphism_formula_matches_brute_force() {
    for (g, m) in [(1, 1), (1, 2), (2, 0), (2, 1), (0, 4), (3, 0)] {
        for gr in enumerate(g, m) {
            assert_eq!(gr.aut_count(None), gr.aut_count_brute(None), "{gr:?}");
        }
    }
    for dg in enumerate_decorated(2, 0, 3).into_iter().chain(enumerate_decorated(1, 2, 2)) {
        assert_eq!(dg.aut, dg.graph.aut_count_brute(Some(&dg.p)), "{dg:?}");
    }
}

#[test]
fn burnside_count_of_decorations() {
    for (g, m) in [(1, 1), (1, 2), (2, 0), (2, 1), (2, 2)] {
        for n in 2..=4u32 {
            let lhs: Ratio<u64> = enumerate_decorated(g, m, n).iter().map(|d| Ratio::new(1, d.aut)).sum();
            let rhs: Ratio<u64> = enumerate(g, m).iter().map(|gr| Ratio::new((n as u64).pow(gr.vertex_count() as u32), gr.aut_count(None))).sum();
            assert_eq!(lhs, rhs, "(g,m,n)=({g},{m},{n})");
        }
    }
}

#[test]
fn canonical_form_is_a_class_invariant() {
    for gr in enumerate(2, 1).into_iter().chain(enumerate(3, 0)) {
        let nv = gr.vertex_count();
        let mut perm: Vec<usize> = (0..nv).collect();
        perm.reverse();
        let moved = gr.relabel(&perm);
        assert_eq!(moved.canonical(None).0, gr.canonical(None).0);
        assert!(moved.isomorphic(&gr));
    }
}

#[test]
fn edge_deletion_genus_bookkeeping() {
    for gr in enumerate(2, 1) {
        for e in 0..gr.edges.len() {
            match gr.delete_edge(e) {
                Deletion::Connected(h) => {
                    assert_eq!(h.genus() + 1, gr.genus());
                    assert_eq!(h.legs.len(), gr.legs.len() + 2);
                }
                Deletion::Split { first, second, .. } => {
                    assert_eq!(first.genus() + second.genus(), gr.genus());
                    assert_eq!(first.legs.len() + second.legs.len(), gr.legs.len() + 2);
                }
            }
        }
    }
}

#[test]
fn two_loops_on_a_vertex() {
    let gr = StableGraph::new(vec![0], vec![(0, 0), (0, 0)], vec![]);
    assert_eq!(gr.aut_count(None), 8);
    let banana = StableGraph::new(vec![0, 0], vec![(0, 1), (0, 1), (0, 1)], vec![]);
    assert_eq!(banana.aut_count(None), 12);
}
