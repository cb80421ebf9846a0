mod common;

use planar_cvc::embedding::embed;
use planar_cvc::generators::{gen_exception_graph, gen_random_planar, gen_tightness};
use planar_cvc::io::{parse_graph, read_journal, serialize_graph, write_journal};
use planar_cvc::oracle::minimum_cvc;
use planar_cvc::pipeline::{
    check_size_bound, kernelize, lift_solution, replay, Instance, KernelOutcome, NoReason, ReductionJournal,
};
use planar_cvc::{Graph, VertexId};
use proptest::prelude::*;

use common::{brute_min_cvc, is_cvc};

fn kernel_of(g: &Graph, k: usize) -> (Instance, ReductionJournal) {
    match kernelize(&Instance::new(g.clone(), k)).unwrap() {
        KernelOutcome::Kernel { instance, journal, .. } => (instance, journal),
        other => panic!("expected a kernel, got {other:?}"),
    }
}

#[test]
fn exception_graph_is_its_own_kernel() {
    let g = gen_exception_graph();
    let (kernel, journal) = kernel_of(&g, 3);
    assert!(journal.steps.is_empty());
    assert_eq!(kernel.graph, g);
    assert_eq!(kernel.k, 3);
}

#[test]
fn isolated_vertices_do_not_matter() {
    let mut g = gen_random_planar(10, 0.5, 3);
    let opt = brute_min_cvc(&g).unwrap();
    g.add_vertex();
    g.add_vertex();
    let (kernel, journal) = kernel_of(&g, opt);
    let sol = minimum_cvc(&kernel.graph, kernel.k).unwrap().unwrap();
    let lifted = lift_solution(&journal, &sol.vertices).unwrap();
    assert!(is_cvc(&g, &lifted));
    assert!(lifted.len() <= opt);
}

#[test]
fn tight_family_kernel_sizes() {
    for l in 3..=5 {
        let (kernel, journal) = kernel_of(&gen_tightness(l).unwrap(), 3 * l + 2);
        assert_eq!(kernel.graph.vertex_count(), 11 * l + 2);
        assert_eq!(journal.steps.len(), l);
        assert!(check_size_bound(kernel.graph.vertex_count(), kernel.k));
        // One fewer unit of budget fails the gate.
        match kernelize(&Instance::new(gen_tightness(l).unwrap(), 3 * l + 1)).unwrap() {
            KernelOutcome::No { reason, .. } => assert_eq!(reason, NoReason::SizeGate),
            KernelOutcome::Kernel { instance, .. } => {
                assert!(check_size_bound(instance.graph.vertex_count(), instance.k))
            }
        }
    }
}

#[test]
fn tight_family_lift_through_identifications() {
    let g = gen_tightness(3).unwrap();
    let (kernel, journal) = kernel_of(&g, 11);
    let sol = minimum_cvc(&kernel.graph, 11).unwrap().unwrap();
    let lifted = lift_solution(&journal, &sol.vertices).unwrap();
    assert!(is_cvc(&g, &lifted));
    assert_eq!(lifted.len(), 11);
}

#[test]
fn bad_kernel_solution_is_rejected() {
    let g = gen_tightness(3).unwrap();
    let (_, journal) = kernel_of(&g, 11);
    let s = [VertexId(0)].into_iter().collect();
    assert!(lift_solution(&journal, &s).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn journal_replays_byte_identically(n in 1usize..40, d in 0.0f64..1.0, seed in any::<u64>(), slack in 0usize..6) {
        let g = gen_random_planar(n, d, seed);
        let k = n.saturating_sub(slack);
        let out = kernelize(&Instance::new(g.clone(), k)).unwrap();
        if let KernelOutcome::Kernel { instance, journal, .. } = out {
            let text = write_journal(&journal.steps);
            let parsed = parse_graph(&serialize_graph(&g)).unwrap().graph;
            let again = ReductionJournal { input: parsed, steps: read_journal(&text).unwrap() };
            let replayed = replay(&again).unwrap();
            prop_assert_eq!(serialize_graph(&replayed), serialize_graph(&instance.graph));
            prop_assert!(instance.k <= k);
            prop_assert!(check_size_bound(instance.graph.vertex_count(), instance.k));
            if !instance.graph.is_empty() {
                prop_assert!(embed(&instance.graph).is_ok());
                prop_assert!(instance.graph.is_connected());
            }
        }
    }

    #[test]
    fn kernelize_is_deterministic(n in 1usize..30, d in 0.0f64..1.0, seed in any::<u64>()) {
        let g = gen_random_planar(n, d, seed);
        let a = kernelize(&Instance::new(g.clone(), n)).unwrap();
        let b = kernelize(&Instance::new(g, n)).unwrap();
        prop_assert_eq!(&a.journal().steps, &b.journal().steps);
    }

    #[test]
    fn lifted_covers_are_valid(n in 1usize..15, d in 0.0f64..1.0, seed in any::<u64>()) {
        let g = gen_random_planar(n, d, seed);
        let opt = brute_min_cvc(&g).unwrap();
        let out = kernelize(&Instance::new(g.clone(), opt)).unwrap();
        let KernelOutcome::Kernel { instance, journal, .. } = out else {
            return Err(TestCaseError::fail("NO at k = opt"));
        };
        // Any cover of the kernel lifts, not only a minimum one.
        let all: std::collections::BTreeSet<VertexId> = instance.graph.vertices().collect();
        if instance.graph.edge_count() > 0 {
            let lifted = lift_solution(&journal, &all).unwrap();
            prop_assert!(is_cvc(&g, &lifted));
            prop_assert!(lifted.len() <= all.len() + journal.k_spent());
        }
        let best = minimum_cvc(&instance.graph, instance.k).unwrap().unwrap();
        let lifted = lift_solution(&journal, &best.vertices).unwrap();
        prop_assert!(is_cvc(&g, &lifted));
        prop_assert_eq!(lifted.len(), opt);
    }
}
