//! The three-phase kernelization, its journal, and solution lifting.
//!
//! Phase 1 runs Rules 1-7 to a fixpoint, Phase 2 embeds the result once and
//! applies Rule 8 along a face-consistent maximum matching, and Phase 3
//! rejects when `3 * |V| > 11 * k`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::embedding::{embed, EmbedError};
use crate::face_matching::run_phase2;
use crate::graph::{Graph, VertexId};
use crate::oracle::{verify_cvc, OracleError};
use crate::reductions::{apply_rule, run_phase1, Phase1Outcome, ReductionStep, RuleError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: usize,
}

impl Instance {
    pub fn new(graph: Graph, k: usize) -> Self {
        Self { graph, k }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoReason {
    /// `3 * |V(G2)| > 11 * k2`.
    SizeGate,
    /// The budget became negative during Phase 1.
    BudgetUnderflow,
    /// Two or more components carry edges; no connected set covers both.
    MultiEdgeComponents,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input graph is not planar")]
    NonPlanarInput,
    #[error("embedding failed: {0}")]
    Embed(#[from] EmbedError),
    #[error("journal step {index} does not replay: {source}")]
    Replay { index: usize, source: RuleError },
    #[error("journal step {index} created {found:?}, expected {expected:?}")]
    ReplayIds {
        index: usize,
        expected: Vec<VertexId>,
        found: Vec<VertexId>,
    },
    #[error("solution is not a connected vertex cover of the kernel")]
    InvalidSolution,
    #[error("set is not a connected vertex cover of the graph")]
    NotACover,
    #[error("{0} vertices outside the cover have degree 0 or 2; graph is not reduced")]
    NotReduced(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Everything needed to map a kernel solution back to the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionJournal {
    /// The input graph as given (isolated vertices included).
    pub input: Graph,
    pub steps: Vec<ReductionStep>,
}

impl ReductionJournal {
    /// Total budget consumed by the recorded steps.
    pub fn k_spent(&self) -> usize {
        self.steps.iter().map(|s| (-s.k_delta) as usize).sum()
    }
}

/// Intermediate quantities of one kernelization run.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub phase1_steps: usize,
    /// The Phase-1 fixpoint and its budget, when Phase 1 completed.
    pub g1: Option<Instance>,
    /// Number of Rule 8 applications.
    pub m_star: usize,
}

#[derive(Debug, Clone)]
pub enum KernelOutcome {
    Kernel {
        instance: Instance,
        journal: ReductionJournal,
        trace: Trace,
    },
    No {
        reason: NoReason,
        journal: ReductionJournal,
        trace: Trace,
    },
}

impl KernelOutcome {
    pub fn is_kernel(&self) -> bool {
        matches!(self, KernelOutcome::Kernel { .. })
    }

    pub fn journal(&self) -> &ReductionJournal {
        match self {
            KernelOutcome::Kernel { journal, .. } | KernelOutcome::No { journal, .. } => journal,
        }
    }

    pub fn trace(&self) -> &Trace {
        match self {
            KernelOutcome::Kernel { trace, .. } | KernelOutcome::No { trace, .. } => trace,
        }
    }
}

/// `3 * n_vertices <= 11 * k`, in integers.
pub fn check_size_bound(n_vertices: usize, k: usize) -> bool {
    3 * n_vertices as u128 <= 11 * k as u128
}

/// The input with isolated vertices removed; the graph every journal is
/// replayed from.
pub fn strip_isolated(g: &Graph) -> Graph {
    let keep: BTreeSet<VertexId> = g.vertices().filter(|&v| g.degree(v) > 0).collect();
    g.induced(&keep)
}

pub fn kernelize(inst: &Instance) -> Result<KernelOutcome, PipelineError> {
    let input = inst.graph.clone();
    let g0 = strip_isolated(&input);
    let mut trace = Trace::default();
    let journal = |steps: Vec<ReductionStep>| ReductionJournal {
        input: input.clone(),
        steps,
    };

    if g0.components().len() > 1 {
        return Ok(KernelOutcome::No {
            reason: NoReason::MultiEdgeComponents,
            journal: journal(Vec::new()),
            trace,
        });
    }
    if g0.is_empty() {
        return Ok(KernelOutcome::Kernel {
            instance: Instance::new(g0, inst.k),
            journal: journal(Vec::new()),
            trace,
        });
    }
    match embed(&g0) {
        Ok(_) => {}
        Err(EmbedError::NonPlanar) => return Err(PipelineError::NonPlanarInput),
        Err(e) => return Err(e.into()),
    }

    let (g1, k1, mut steps) = match run_phase1(g0, inst.k as i64) {
        Phase1Outcome::Reduced { graph, k, steps } => (graph, k as usize, steps),
        Phase1Outcome::EarlyNo { steps } => {
            trace.phase1_steps = steps.len();
            return Ok(KernelOutcome::No {
                reason: NoReason::BudgetUnderflow,
                journal: journal(steps),
                trace,
            });
        }
    };
    trace.phase1_steps = steps.len();
    trace.g1 = Some(Instance::new(g1.clone(), k1));

    let phase2 = run_phase2(g1)?;
    trace.m_star = phase2.steps.len();
    steps.extend(phase2.steps);

    let kernel = Instance::new(phase2.graph, k1);
    if !check_size_bound(kernel.graph.vertex_count(), kernel.k) {
        return Ok(KernelOutcome::No {
            reason: NoReason::SizeGate,
            journal: journal(steps),
            trace,
        });
    }
    debug_assert!(kernel.k <= inst.k);
    Ok(KernelOutcome::Kernel {
        instance: kernel,
        journal: journal(steps),
        trace,
    })
}

/// Re-applies the journal to its input. Returns the graph before each step
/// followed by the final (kernel) graph.
pub fn replay_states(journal: &ReductionJournal) -> Result<Vec<Graph>, PipelineError> {
    let mut g = strip_isolated(&journal.input);
    let mut states = Vec::with_capacity(journal.steps.len() + 1);
    for (index, step) in journal.steps.iter().enumerate() {
        states.push(g.clone());
        let redo = apply_rule(&mut g, &step.site).map_err(|source| PipelineError::Replay { index, source })?;
        if redo.created != step.created {
            return Err(PipelineError::ReplayIds {
                index,
                expected: step.created.clone(),
                found: redo.created,
            });
        }
    }
    states.push(g);
    Ok(states)
}

pub fn replay(journal: &ReductionJournal) -> Result<Graph, PipelineError> {
    Ok(replay_states(journal)?.pop().expect("at least the start state"))
}

/// Maps a connected vertex cover of the kernel graph to one of the input
/// graph, undoing the journal's steps in reverse. The result has at most
/// `|kernel_solution| + journal.k_spent()` vertices.
pub fn lift_solution(
    journal: &ReductionJournal,
    kernel_solution: &BTreeSet<VertexId>,
) -> Result<BTreeSet<VertexId>, PipelineError> {
    let states = replay_states(journal)?;
    let kernel = states.last().unwrap();
    if !verify_cvc(kernel, kernel_solution).map_err(|_| PipelineError::InvalidSolution)? {
        return Err(PipelineError::InvalidSolution);
    }
    let mut s = kernel_solution.clone();
    for (step, pre) in journal.steps.iter().zip(&states).rev() {
        s = step.lift(pre, &s);
        debug_assert!(
            verify_cvc(pre, &s).unwrap_or(false),
            "lift through {:?} broke the cover",
            step.site
        );
    }
    Ok(s)
}

/// The split of a graph's vertices relative to a connected vertex cover:
/// cover vertices with / without a pendant neighbor outside the cover, and
/// non-cover vertices by degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Partition {
    pub s1: BTreeSet<VertexId>,
    pub s_ge3: BTreeSet<VertexId>,
    pub i1: BTreeSet<VertexId>,
    pub i3: BTreeSet<VertexId>,
    pub i_ge4: BTreeSet<VertexId>,
    /// Non-cover vertices of degree 0 or 2; empty on reduced graphs.
    pub i_other: BTreeSet<VertexId>,
}

impl Partition {
    pub fn cover_size(&self) -> usize {
        self.s1.len() + self.s_ge3.len()
    }

    pub fn ensure_reduced(&self) -> Result<(), PipelineError> {
        if self.i_other.is_empty() {
            Ok(())
        } else {
            Err(PipelineError::NotReduced(self.i_other.len()))
        }
    }
}

pub fn partition_stats(g: &Graph, cover: &BTreeSet<VertexId>) -> Result<Partition, PipelineError> {
    if !verify_cvc(g, cover)? {
        return Err(PipelineError::NotACover);
    }
    let mut p = Partition::default();
    for v in g.vertices().filter(|v| !cover.contains(v)) {
        match g.degree(v) {
            1 => p.i1.insert(v),
            3 => p.i3.insert(v),
            d if d >= 4 => p.i_ge4.insert(v),
            _ => p.i_other.insert(v),
        };
    }
    for &v in cover {
        if g.neighbors(v).iter().any(|w| p.i1.contains(w)) {
            p.s1.insert(v);
        } else {
            p.s_ge3.insert(v);
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionBound {
    /// `|S_{>=3}| + |I_{>=4}| + |M*|`.
    pub lhs: usize,
    pub cover_size: usize,
    /// `3 * lhs >= |S|`.
    pub holds: bool,
    /// `3 * lhs == |S| + 4`, the value reached by the tight family.
    pub tight: bool,
}

/// Checks `|S_{>=3}| + |I_{>=4}| + |M*| >= |S| / 3` for a minimum cover `S`
/// of the Phase-1 fixpoint `g1` and the pipeline's Rule 8 count `m_star`.
pub fn lemma2_check(g1: &Graph, cover: &BTreeSet<VertexId>, m_star: usize) -> Result<PartitionBound, PipelineError> {
    let p = partition_stats(g1, cover)?;
    let lhs = p.s_ge3.len() + p.i_ge4.len() + m_star;
    Ok(PartitionBound {
        lhs,
        cover_size: cover.len(),
        holds: 3 * lhs >= cover.len(),
        tight: 3 * lhs == cover.len() + 4,
    })
}
