//! Backtracking enumeration of presheaf maps.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use super::{Cell, FinitePresheaf};
use crate::error::{Error, Result};
use crate::site::Site;

type Filter<'a> = dyn Fn(Cell, Cell) -> bool + 'a;

#[derive(Default)]
pub struct SearchOptions<'a> {
    /// Roots of the source whose image is prescribed.
    pub fixed: HashMap<Cell, Cell>,
    /// Extra admissibility test `(source root, candidate image)`.
    pub filter: Option<&'a Filter<'a>>,
    /// Require distinct nondegenerate images for all roots.
    pub injective_on_roots: bool,
    /// Abort with [`Error::BudgetExceeded`] after this many search nodes.
    pub node_budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub solutions: u64,
    /// False if the visitor stopped the search early.
    pub exhausted: bool,
}

/// Visits every map `a -> x` (as per-dimension root assignments) in a fixed
/// order: roots of `a` by dimension and identifier, candidates in cell order.
pub fn search_maps<S: Site>(
    a: &FinitePresheaf<S>,
    x: &FinitePresheaf<S>,
    opts: &SearchOptions<'_>,
    mut visit: impl FnMut(&[Vec<Cell>]) -> ControlFlow<()>,
) -> Result<SearchStats> {
    if let Some(top) = a.max_root_dim() {
        if top > x.trunc_dim() {
            return Err(Error::TruncationTooLow {
                needed: top,
                available: x.trunc_dim(),
            });
        }
    }
    let order = a.all_roots();
    let n = order.len();
    let placeholder = Cell::nondegenerate(0, u32::MAX);
    let mut assign: Vec<Vec<Cell>> = (0..=a.trunc_dim()).map(|j| vec![placeholder; a.n_roots(j)]).collect();
    let mut stats = SearchStats::default();
    if n == 0 {
        stats.solutions = 1;
        stats.exhausted = visit(&assign).is_continue();
        return Ok(stats);
    }

    let candidates = |assign: &[Vec<Cell>], root: Cell| -> Vec<Cell> {
        let k = root.dim as usize;
        let required: Vec<Cell> = a
            .root_faces(k, root.root)
            .iter()
            .map(|f| x.act_epi(assign[f.root_dim as usize][f.root as usize], k - 1, f.epi))
            .collect();
        if let Some(&v) = opts.fixed.get(&root) {
            return if x.contains(v) && x.faces_of(v) == required { vec![v] } else { Vec::new() };
        }
        x.face_index(k).get(&required).cloned().unwrap_or_default()
    };

    let mut cands: Vec<Vec<Cell>> = vec![Vec::new(); n];
    let mut cursor = vec![0usize; n];
    let mut current: Vec<Option<Cell>> = vec![None; n];
    let mut used: HashSet<Cell> = HashSet::new();
    let mut level = 0;
    cands[0] = candidates(&assign, order[0]);
    loop {
        if let Some(prev) = current[level].take() {
            used.remove(&prev);
        }
        if cursor[level] < cands[level].len() {
            let c = cands[level][cursor[level]];
            cursor[level] += 1;
            stats.nodes += 1;
            if let Some(b) = opts.node_budget {
                if stats.nodes > b {
                    return Err(Error::BudgetExceeded(format!("map search exceeded {b} nodes")));
                }
            }
            let root = order[level];
            if opts.injective_on_roots && (!c.is_nondegenerate() || used.contains(&c)) {
                continue;
            }
            if let Some(f) = opts.filter {
                if !f(root, c) {
                    continue;
                }
            }
            assign[root.dim as usize][root.root as usize] = c;
            current[level] = Some(c);
            if opts.injective_on_roots {
                used.insert(c);
            }
            if level + 1 == n {
                stats.solutions += 1;
                if visit(&assign).is_break() {
                    return Ok(stats);
                }
            } else {
                level += 1;
                cands[level] = candidates(&assign, order[level]);
                cursor[level] = 0;
            }
        } else {
            if level == 0 {
                break;
            }
            level -= 1;
        }
    }
    stats.exhausted = true;
    Ok(stats)
}
