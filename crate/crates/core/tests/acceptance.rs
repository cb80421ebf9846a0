//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use planar_cvc::embedding::{embed, EmbedError};
use planar_cvc::generators::{canonical_cover, gen_random_planar, gen_tightness, validate_tightness};
use planar_cvc::matching::maximum_matching;
use planar_cvc::oracle::{decide_cvc, minimum_cvc, verify_cvc};
use planar_cvc::pipeline::{check_size_bound, kernelize, lemma2_check, lift_solution, Instance, KernelOutcome};
use planar_cvc::reductions::{detect_rule, is_phase1_structured};
use planar_cvc::Graph;

use common::{brute_max_matching, complete, k33, random_graph, small_planar_corpus, DENSITIES};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    match failures.first() {
        None => Outcome {
            passed: true,
            detail: summary,
        },
        Some(first) => Outcome {
            passed: false,
            detail: format!("{summary}; {} failures, first: {first}", failures.len()),
        },
    }
}

/// Per-instance facts shared by criteria 1, 2, 5 and 6.
struct CorpusRun {
    instances: usize,
    decisions: usize,
    equivalence_failures: Vec<String>,
    bound_checked: usize,
    bound_failures: Vec<String>,
    lifts: usize,
    lift_failures: Vec<String>,
    phase1_outputs: usize,
    phase1_failures: Vec<String>,
}

fn run_corpus() -> CorpusRun {
    let corpus = small_planar_corpus(520);
    let mut r = CorpusRun {
        instances: corpus.len(),
        decisions: 0,
        equivalence_failures: Vec::new(),
        bound_checked: 0,
        bound_failures: Vec::new(),
        lifts: 0,
        lift_failures: Vec::new(),
        phase1_outputs: 0,
        phase1_failures: Vec::new(),
    };
    for (i, g) in corpus.iter().enumerate() {
        let n = g.vertex_count();
        let min = minimum_cvc(g, n).unwrap().expect("connected corpus").size();
        for k in 0..=n {
            let direct = decide_cvc(g, k).unwrap();
            let out = kernelize(&Instance::new(g.clone(), k)).unwrap();
            if let Some(g1) = &out.trace().g1 {
                r.phase1_outputs += 1;
                if !is_phase1_structured(&g1.graph) || detect_rule(&g1.graph).is_some() {
                    r.phase1_failures.push(format!("instance {i} k {k}"));
                }
            }
            let via_kernel = match &out {
                KernelOutcome::Kernel { instance, .. } => decide_cvc(&instance.graph, instance.k).unwrap(),
                KernelOutcome::No { .. } => false,
            };
            r.decisions += 1;
            if direct != via_kernel {
                r.equivalence_failures.push(format!(
                    "instance {i} (n {n}) k {k}: direct {direct}, kernel {via_kernel}"
                ));
            }
            if k == min {
                r.bound_checked += 1;
                match &out {
                    KernelOutcome::Kernel { instance, .. } if check_size_bound(instance.graph.vertex_count(), k) => {}
                    KernelOutcome::Kernel { instance, .. } => r.bound_failures.push(format!(
                        "instance {i}: kernel has {} vertices at k {k}",
                        instance.graph.vertex_count()
                    )),
                    KernelOutcome::No { reason, .. } => r
                        .bound_failures
                        .push(format!("instance {i}: NO ({reason:?}) at k = min {k}")),
                }
            }
            if direct {
                if let KernelOutcome::Kernel { instance, journal, .. } = &out {
                    r.lifts += 1;
                    let sol = minimum_cvc(&instance.graph, instance.k).unwrap();
                    let ok = sol
                        .and_then(|c| lift_solution(journal, &c.vertices).ok())
                        .filter(|s| s.len() <= k && verify_cvc(g, s).unwrap() && common::is_cvc(g, s));
                    if ok.is_none() {
                        r.lift_failures.push(format!("instance {i} k {k}"));
                    }
                }
            }
        }
    }
    r
}

fn tight_family() -> Outcome {
    let mut failures = Vec::new();
    for l in 3..=8 {
        let g = gen_tightness(l).unwrap();
        let rep = validate_tightness(&g, l);
        for c in rep.failures() {
            failures.push(format!("l {l}: {} ({})", c.name, c.detail));
        }
        if g.vertex_count() != 12 * l + 2 {
            failures.push(format!("l {l}: |V| {}", g.vertex_count()));
        }
        let out = kernelize(&Instance::new(g.clone(), 3 * l + 2)).unwrap();
        let trace = out.trace();
        if trace.phase1_steps != 0 {
            failures.push(format!("l {l}: phase 1 applied {} rules", trace.phase1_steps));
        }
        if trace.m_star != l {
            failures.push(format!("l {l}: phase 2 made {} identifications", trace.m_star));
        }
        match &out {
            KernelOutcome::Kernel { instance, .. } if instance.graph.vertex_count() == 11 * l + 2 => {}
            other => failures.push(format!("l {l}: kernel outcome {:?}", other.is_kernel())),
        }
        if l <= 4 {
            match minimum_cvc(&g, 3 * l + 2).unwrap() {
                Some(c) if c.size() == 3 * l + 2 => {
                    let rep = lemma2_check(&g, &c.vertices, trace.m_star).unwrap();
                    if !rep.tight || 3 * rep.lhs != c.size() + 4 {
                        failures.push(format!("l {l}: partition bound lhs {} for |S| {}", rep.lhs, c.size()));
                    }
                }
                other => failures.push(format!("l {l}: oracle minimum {:?}", other.map(|c| c.size()))),
            }
            let canon = canonical_cover(&g);
            if canon.len() != 3 * l + 2 || !verify_cvc(&g, &canon).unwrap() {
                failures.push(format!("l {l}: canonical cover"));
            }
        }
    }
    outcome(&failures, "l = 3..8, oracle for l = 3, 4".into())
}

fn matching_bound_corpus() -> Vec<Graph> {
    (0..240)
        .map(|i| {
            let n = 3 + (i * 7) % 58;
            gen_random_planar(n, DENSITIES[i % DENSITIES.len()], 50_000 + i as u64)
        })
        .collect()
}

fn matching_bound() -> Outcome {
    let graphs = matching_bound_corpus();
    let mut failures = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let n3 = g.vertices().filter(|&v| g.degree(v) >= 3).count();
        let m = maximum_matching(g).len();
        if 3 * m < n3 {
            failures.push(format!("graph {i}: matching {m}, n>=3 {n3}"));
        }
    }
    outcome(&failures, format!("{} graphs, n <= 60", graphs.len()))
}

fn matching_exact() -> Outcome {
    let mut graphs: Vec<Graph> = Vec::new();
    for i in 0..150u64 {
        let n = 1 + (i as usize) % 12;
        graphs.push(random_graph(n, [0.2, 0.35, 0.5, 0.8][(i % 4) as usize], 70_000 + i));
    }
    for i in 0..100u64 {
        let n = 1 + (i as usize) % 12;
        graphs.push(gen_random_planar(n, DENSITIES[(i % 6) as usize], 80_000 + i));
    }
    graphs.push(complete(5));
    graphs.push(k33());
    let mut failures = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let m = maximum_matching(g);
        let want = brute_max_matching(g);
        if !m.is_valid_in(g) || m.len() != want {
            failures.push(format!("graph {i}: got {}, optimum {want}", m.len()));
        }
    }
    outcome(&failures, format!("{} graphs, <= 12 vertices", graphs.len()))
}

fn embedding_sound() -> Outcome {
    let mut graphs = small_planar_corpus(520);
    graphs.extend(matching_bound_corpus());
    graphs.extend((3..=8).map(|l| gen_tightness(l).unwrap()));
    let mut failures = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        match embed(g) {
            Ok(emb) => {
                if emb.euler_characteristic() != 2 || !emb.is_double_cover() || !emb.realizes(g) {
                    failures.push(format!("graph {i}: V-E+F {}", emb.euler_characteristic()));
                }
                let darts: usize = emb.faces().iter().map(|f| f.boundary.len()).sum();
                if darts != 2 * g.edge_count() {
                    failures.push(format!("graph {i}: boundary total {darts}, 2E {}", 2 * g.edge_count()));
                }
            }
            Err(e) => failures.push(format!("graph {i}: {e}")),
        }
    }
    for (name, g) in [("K5", complete(5)), ("K3,3", k33())] {
        if !matches!(embed(&g), Err(EmbedError::NonPlanar)) {
            failures.push(format!("{name} not rejected"));
        }
    }
    outcome(&failures, format!("{} embeddings, K5 and K3,3 rejected", graphs.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = run_corpus();
    let results = [
        (
            "1 oracle equivalence",
            outcome(
                &corpus.equivalence_failures,
                format!("{} instances, {} (G, k) decisions", corpus.instances, corpus.decisions),
            ),
        ),
        (
            "2 kernel size bound at k = min",
            outcome(&corpus.bound_failures, format!("{} instances", corpus.bound_checked)),
        ),
        ("3 tight family", tight_family()),
        ("4 matching lower bound n>=3/3", matching_bound()),
        (
            "5 lifting soundness",
            outcome(&corpus.lift_failures, format!("{} lifts", corpus.lifts)),
        ),
        (
            "6 phase-1 fixpoint structure",
            outcome(
                &corpus.phase1_failures,
                format!("{} phase-1 outputs", corpus.phase1_outputs),
            ),
        ),
        ("7 matching exactness", matching_exact()),
        ("8 embedding soundness", embedding_sound()),
    ];
    let mut all = true;
    for (name, r) in &results {
        all &= r.passed;
        println!(
            "criterion {name}: {} ({})",
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
