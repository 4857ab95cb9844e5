//! Graph homomorphisms with unary constraints, found by backtracking with
//! arc consistency over bitset domains.

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::RngCore;

use super::{Graph, GraphMap};
use crate::error::{Error, Result};

/// A set of target vertices.
pub type Bits = u128;

pub const MAX_TARGET_VERTICES: usize = 128;

#[derive(Clone, Debug, Default)]
pub struct HomOptions {
    /// Maximum number of value assignments tried before giving up.
    pub node_budget: Option<u64>,
}

pub fn full_domain(n: usize) -> Bits {
    if n >= 128 {
        !0
    } else {
        (1u128 << n) - 1
    }
}

pub fn singleton(v: u32) -> Bits {
    1u128 << v
}

pub fn bits_of(vs: impl IntoIterator<Item = u32>) -> Bits {
    vs.into_iter().fold(0, |acc, v| acc | singleton(v))
}

pub fn iter_bits(mut b: Bits) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if b == 0 {
            return None;
        }
        let v = b.trailing_zeros();
        b &= b - 1;
        Some(v)
    })
}

/// Closed neighbourhoods of the target as bitsets.
pub fn neighborhood_masks(target: &Graph) -> Result<Vec<Bits>> {
    if target.n() > MAX_TARGET_VERTICES {
        return Err(Error::Graph(format!(
            "target graph has {} vertices; the bitset search handles at most {MAX_TARGET_VERTICES}",
            target.n()
        )));
    }
    Ok(target.vertices().map(|v| bits_of(target.closed_neighborhood(v))).collect())
}

struct Search<'a, 'r, F> {
    shape: &'a Graph,
    masks: Vec<Bits>,
    budget: Option<u64>,
    nodes: u64,
    rng: Option<&'r mut (dyn RngCore + 'r)>,
    visit: F,
}

impl<F: FnMut(&[u32]) -> ControlFlow<()>> Search<'_, '_, F> {
    fn support(&self, d: Bits) -> Bits {
        iter_bits(d).fold(0, |acc, v| acc | self.masks[v as usize])
    }

    /// Arc consistency from the variables in `queue`; false on a wipe-out.
    fn propagate(&self, doms: &mut [Bits], mut queue: Vec<u32>) -> bool {
        let mut queued = vec![false; doms.len()];
        for &q in &queue {
            queued[q as usize] = true;
        }
        while let Some(p) = queue.pop() {
            queued[p as usize] = false;
            let sup = self.support(doms[p as usize]);
            for &q in self.shape.neighbors(p) {
                let d = doms[q as usize] & sup;
                if d != doms[q as usize] {
                    if d == 0 {
                        return false;
                    }
                    doms[q as usize] = d;
                    if !queued[q as usize] {
                        queued[q as usize] = true;
                        queue.push(q);
                    }
                }
            }
        }
        true
    }

    fn rec(&mut self, doms: &mut Vec<Bits>) -> Result<ControlFlow<()>> {
        let pick = doms
            .iter()
            .enumerate()
            .filter(|(_, d)| d.count_ones() > 1)
            .min_by_key(|(_, d)| d.count_ones())
            .map(|(i, _)| i);
        let Some(p) = pick else {
            let sol: Vec<u32> = doms.iter().map(|d| d.trailing_zeros()).collect();
            return Ok((self.visit)(&sol));
        };
        let mut values: Vec<u32> = iter_bits(doms[p]).collect();
        if let Some(rng) = self.rng.as_deref_mut() {
            values.shuffle(rng);
        }
        for v in values {
            self.nodes += 1;
            if let Some(b) = self.budget {
                if self.nodes > b {
                    return Err(Error::BudgetExceeded(format!("graph map search exceeded {b} nodes")));
                }
            }
            let mut next = doms.clone();
            next[p] = singleton(v);
            if self.propagate(&mut next, vec![p as u32]) && self.rec(&mut next)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Enumerates graph maps `shape -> target` with `s ↦ domains[s]`.
/// Returns `Ok(true)` when the search ran to completion and `Ok(false)`
/// when `visit` stopped it. With an `rng` the value order is shuffled.
pub fn hom_search(
    shape: &Graph,
    target: &Graph,
    domains: Option<Vec<Bits>>,
    opts: &HomOptions,
    rng: Option<&mut dyn RngCore>,
    visit: impl FnMut(&[u32]) -> ControlFlow<()>,
) -> Result<bool> {
    let masks = neighborhood_masks(target)?;
    let full = full_domain(target.n());
    let mut doms = match domains {
        Some(d) => {
            if d.len() != shape.n() {
                return Err(Error::Internal("one domain per shape vertex expected".into()));
            }
            d.into_iter().map(|b| b & full).collect()
        }
        None => vec![full; shape.n()],
    };
    if doms.contains(&0) {
        return Ok(true);
    }
    let mut s = Search {
        shape,
        masks,
        budget: opts.node_budget,
        nodes: 0,
        rng,
        visit,
    };
    let all: Vec<u32> = shape.vertices().collect();
    if !s.propagate(&mut doms, all) {
        return Ok(true);
    }
    Ok(s.rec(&mut doms)?.is_continue())
}

/// The first map found, if any.
pub fn find_hom(
    shape: &Graph,
    target: &Graph,
    domains: Option<Vec<Bits>>,
    opts: &HomOptions,
    rng: Option<&mut dyn RngCore>,
) -> Result<Option<Vec<u32>>> {
    let mut found = None;
    hom_search(shape, target, domains, opts, rng, |m| {
        found = Some(m.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Every graph map `a -> b`.
pub fn all_maps(a: &Arc<Graph>, b: &Arc<Graph>) -> Vec<GraphMap> {
    let mut out = Vec::new();
    hom_search(a, b, None, &HomOptions::default(), None, |m| {
        out.push(GraphMap::new_unchecked(a.clone(), b.clone(), m.to_vec()));
        ControlFlow::Continue(())
    })
    .expect("unbudgeted search on a small target");
    out
}
