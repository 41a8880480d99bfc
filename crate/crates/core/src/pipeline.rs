//! End-to-end solve: simplify, branch over crossings, solve every leaf by
//! b-factor matching, and lift the best leaf back to the input graph.

use std::path::PathBuf;

use rayon::prelude::*;

use crate::branching::{build_leaf, ConstrainedInstance};
use crate::dual::{build_dual, check_feasibility, prepare_leaf, Feasibility};
use crate::embedding::DrawnInstance;
use crate::error::{Error, Result};
use crate::gadgets::{eliminate_conflicts_in_place, preprocess_in_place, remove_pendants_in_place, OffsetLedger, TransformLog};
use crate::graph::{Bipartition, CutSolution, SolveStats};
use crate::io::{drawing_to_file, write_instance};
use crate::matching::solve_bfactor;
use crate::rational::Rational;
use crate::recovery::{lift_factor_to_cut, undo_leaf, undo_transforms, verify_solution};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Worker threads for leaves; 1 solves them in order on this thread.
    pub jobs: usize,
    /// Write every prepared leaf as a combinatorial file here.
    pub leaf_dump_dir: Option<PathBuf>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { jobs: 1, leaf_dump_dir: None }
    }
}

/// The root of the branching tree and what it took to get there.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub root: ConstrainedInstance,
    pub ledger: OffsetLedger,
    pub log: TransformLog,
}

/// Pendant removal, conflict elimination and crossing isolation.
pub fn prepare(d: &DrawnInstance) -> Result<Prepared> {
    let mut d = d.clone();
    let mut ledger = OffsetLedger::new();
    let mut log = TransformLog::new();
    remove_pendants_in_place(&mut d, &mut ledger, &mut log)?;
    eliminate_conflicts_in_place(&mut d, &mut ledger, &mut log)?;
    preprocess_in_place(&mut d, &mut ledger, &mut log)?;
    Ok(Prepared { root: ConstrainedInstance::root(d), ledger, log })
}

/// Best cut of one leaf, already lifted through the leaf log to the root
/// graph. `None` when the leaf's constraints cannot all be met.
#[derive(Clone, Debug)]
pub struct LeafOutcome {
    pub side: Bipartition,
    pub value: Rational,
    pub ledger: Rational,
}

pub fn solve_leaf(root: &ConstrainedInstance, mask: u64, dump: Option<&PathBuf>) -> Result<Option<LeafOutcome>> {
    let leaf = prepare_leaf(&build_leaf(root, mask)?)?;
    if let Some(dir) = dump {
        let width = root.open_crossings().len().div_ceil(4).max(1);
        let path = dir.join(format!("leaf_{mask:0width$x}.json"));
        write_instance(&path, &drawing_to_file(&leaf.drawing, &leaf.constraints))?;
    }
    let g = leaf.drawing.graph();
    if g.edge_count() == 0 {
        // nothing to cut; constraints would need an edge between their ends
        if !leaf.constraints.is_empty() {
            return Ok(None);
        }
        let side = g.vertices().map(|v| (v, false)).collect();
        let (side, value) = undo_leaf(&side, Rational::default(), &leaf.log, &leaf.ledger)?;
        return Ok(Some(LeafOutcome { side, value, ledger: leaf.ledger.total() }));
    }
    let dual = build_dual(&leaf)?;
    if let Feasibility::Infeasible(_) = check_feasibility(&dual) {
        return Ok(None);
    }
    let Some(sol) = solve_bfactor(&dual)? else {
        return Ok(None);
    };
    let side = lift_factor_to_cut(&leaf, &dual, &sol)?;
    let recomputed = g.cut_value(&side)?;
    if recomputed != sol.cost {
        return Err(Error::Verification { reported: sol.cost, recomputed });
    }
    let (side, value) = undo_leaf(&side, sol.cost, &leaf.log, &leaf.ledger)?;
    Ok(Some(LeafOutcome { side, value, ledger: leaf.ledger.total() }))
}

/// Exact maximum cut of the drawn graph. The returned solution has been
/// re-evaluated on the input graph.
pub fn solve(d: &DrawnInstance, opts: &SolveOptions) -> Result<CutSolution> {
    d.validate()?;
    let prepared = prepare(d)?;
    let root = &prepared.root;
    let k = root.open_crossings().len();
    if k >= 63 {
        return Err(Error::Overflow("counting branches"));
    }
    let branches = 1u64 << k;
    if let Some(dir) = &opts.leaf_dump_dir {
        std::fs::create_dir_all(dir)?;
    }
    let dump = opts.leaf_dump_dir.as_ref();
    let outcomes: Vec<Result<Option<LeafOutcome>>> = if opts.jobs <= 1 {
        (0..branches).map(|m| solve_leaf(root, m, dump)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Parse(format!("cannot start worker pool: {e}")))?;
        pool.install(|| (0..branches).into_par_iter().map(|m| solve_leaf(root, m, dump)).collect())
    };

    let mut best: Option<(u64, LeafOutcome)> = None;
    let mut infeasible = 0u64;
    for (mask, out) in outcomes.into_iter().enumerate() {
        match out? {
            None => infeasible += 1,
            Some(o) => {
                if best.as_ref().is_none_or(|(_, b)| o.value > b.value) {
                    best = Some((mask as u64, o));
                }
            }
        }
    }
    let (mask, leaf) = best.ok_or_else(|| Error::Infeasible("every branch is infeasible".into()))?;
    let side = undo_transforms(&leaf.side, &prepared.log)?;
    let value = leaf.value - prepared.ledger.total();
    let sol = CutSolution {
        side,
        value,
        stats: SolveStats {
            vertices: d.graph().vertex_count(),
            crossings: d.crossing_count(),
            branches,
            infeasible_branches: infeasible,
            ledger_total: prepared.ledger.total() + leaf.ledger,
            best_branch: mask,
        },
    };
    verify_solution(d.graph(), &sol)?;
    Ok(sol)
}
