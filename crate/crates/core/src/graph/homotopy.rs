//! Bounded search for A-homotopies between graph maps.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::hom::{bits_of, hom_search, HomOptions};
use super::{box_product, interval, same_graph, GraphMap};
use crate::error::{Error, Result};

/// Cap on the number of maps visited by the breadth-first search.
const STATE_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AHomotopy {
    /// The layers `H(−, 0) = f, …, H(−, L) = g`.
    Found(Vec<GraphMap>),
    /// `exhausted` means every map reachable from `f` was visited, so no
    /// homotopy of any length exists.
    NoneFound { exhausted: bool },
}

impl AHomotopy {
    pub fn length(&self) -> Option<usize> {
        match self {
            AHomotopy::Found(l) => Some(l.len() - 1),
            AHomotopy::NoneFound { .. } => None,
        }
    }
}

/// Whether consecutive layers are pointwise adjacent.
pub fn layers_adjacent(a: &GraphMap, b: &GraphMap) -> bool {
    a.images().iter().zip(b.images()).all(|(&u, &v)| a.target().adjacent(u, v))
}

/// The map `X ⊠ I_L -> Y` assembled from layers; fails if it is not a
/// graph map.
pub fn homotopy_map(layers: &[GraphMap]) -> Result<GraphMap> {
    let first = layers.first().ok_or_else(|| Error::InvalidParameters("a homotopy needs a layer".into()))?;
    let x = first.source();
    let len = layers.len() - 1;
    let cyl = Arc::new(box_product(x, &interval(len)));
    let mut images = vec![0; cyl.n()];
    for v in x.vertices() {
        for (i, l) in layers.iter().enumerate() {
            images[v as usize * (len + 1) + i] = l.apply(v);
        }
    }
    GraphMap::new(cyl, first.target().clone(), images)
}

pub fn a_homotopy_search(f: &GraphMap, g: &GraphMap, max_len: usize) -> Result<AHomotopy> {
    if !same_graph(f.source(), g.source()) || !same_graph(f.target(), g.target()) {
        return Err(Error::EndpointMismatch("homotopic maps must share source and target".into()));
    }
    let (x, y) = (f.source().clone(), f.target().clone());
    let start = f.images().to_vec();
    let goal = g.images();
    let mut parent: HashMap<Vec<u32>, Vec<u32>> = HashMap::from([(start.clone(), start.clone())]);
    let mut frontier = vec![start.clone()];
    let mut depth = 0;
    let mut truncated = false;
    let mut found = start.as_slice() == goal;
    while !found && !frontier.is_empty() && depth < max_len {
        let mut next = Vec::new();
        for h in &frontier {
            let domains = h.iter().map(|&v| bits_of(y.closed_neighborhood(v))).collect();
            hom_search(&x, &y, Some(domains), &HomOptions::default(), None, |m| {
                if parent.len() >= STATE_LIMIT {
                    truncated = true;
                    return ControlFlow::Break(());
                }
                if !parent.contains_key(m) {
                    parent.insert(m.to_vec(), h.clone());
                    next.push(m.to_vec());
                    if m == goal {
                        found = true;
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            })?;
            if found || truncated {
                break;
            }
        }
        frontier = next;
        depth += 1;
        if truncated {
            break;
        }
    }
    if !found {
        let exhausted = frontier.is_empty() && !truncated;
        return Ok(AHomotopy::NoneFound { exhausted });
    }
    let mut chain = vec![goal.to_vec()];
    while chain.last().unwrap() != &start {
        let p = parent[chain.last().unwrap()].clone();
        chain.push(p);
    }
    chain.reverse();
    Ok(AHomotopy::Found(
        chain.into_iter().map(|m| GraphMap::new_unchecked(x.clone(), y.clone(), m)).collect(),
    ))
}
