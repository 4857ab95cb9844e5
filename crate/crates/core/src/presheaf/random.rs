//! Random finite presheaves built by attaching cells along boundary maps.

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::standard::{representable, StandardCell, StandardKind};
use super::{search_maps, Cell, FinitePresheaf, SearchOptions};
use crate::error::{Error, Result};
use crate::site::{Site, SiteKind};

#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub trunc_dim: usize,
    /// Highest dimension of an attached cell.
    pub max_root_dim: usize,
    /// Cap on the number of nondegenerate cells.
    pub max_cells: usize,
    pub vertices: std::ops::RangeInclusive<usize>,
    /// Number of attachment attempts.
    pub attachments: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            trunc_dim: 3,
            max_root_dim: 2,
            max_cells: 40,
            vertices: 1..=4,
            attachments: 8,
        }
    }
}

fn boundary_kind(site: SiteKind) -> StandardKind {
    match site {
        SiteKind::Cubical => StandardKind::CubeBoundary,
        SiteKind::Simplicial => StandardKind::SimplexBoundary,
    }
}

/// Candidate face tuples for a new `k`-cell: the images of the top faces
/// under (up to `limit`) maps `∂[k] -> x`.
fn attaching_faces<S: Site>(x: &FinitePresheaf<S>, k: usize, limit: usize) -> Result<Vec<Vec<Cell>>> {
    let bd = StandardCell::<S>::build(boundary_kind(S::KIND), k, x.trunc_dim())?;
    let rep = representable::<S>(k, x.trunc_dim())?;
    let top = Cell::nondegenerate(k, 0);
    let face_roots: Vec<Cell> = rep.faces_of(top);
    let pre: Vec<Cell> = face_roots
        .iter()
        .map(|f| {
            bd.realized
                .roots(k - 1)
                .find(|&r| bd.inclusion.apply(r) == *f)
                .ok_or_else(|| Error::Internal("face missing from boundary".into()))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let opts = SearchOptions {
        node_budget: Some(20_000),
        ..Default::default()
    };
    let res = search_maps(&bd.realized, x, &opts, |asg| {
        out.push(pre.iter().map(|p| asg[p.dim()][p.root as usize]).collect());
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    match res {
        Ok(_) | Err(Error::BudgetExceeded(_)) => Ok(out),
        Err(e) => Err(e),
    }
}

/// A random presheaf: a few vertices, then cells of random dimension glued
/// along randomly chosen boundary maps.
pub fn random_presheaf<S: Site, R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> Result<FinitePresheaf<S>> {
    if spec.max_root_dim > spec.trunc_dim {
        return Err(Error::InvalidParameters("max_root_dim exceeds trunc_dim".into()));
    }
    let nv = rng.gen_range(spec.vertices.clone()).max(1);
    let mut faces: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); spec.trunc_dim + 1];
    faces[0] = vec![Vec::new(); nv];
    let mut x = FinitePresheaf::<S>::new(spec.trunc_dim, faces.clone())?;
    for _ in 0..spec.attachments {
        if x.total_nondegenerate() >= spec.max_cells || spec.max_root_dim == 0 {
            break;
        }
        let k = rng.gen_range(1..=spec.max_root_dim);
        let cands = attaching_faces(&x, k, 64)?;
        // prefer boundaries that are not entirely degenerate
        let good: Vec<&Vec<Cell>> = cands.iter().filter(|fs| fs.iter().any(|c| c.is_nondegenerate())).collect();
        let pick = if !good.is_empty() && rng.gen_bool(0.8) {
            good.choose(rng).copied()
        } else {
            cands.choose(rng)
        };
        let Some(fs) = pick else { continue };
        faces[k].push(fs.clone());
        x = FinitePresheaf::new(spec.trunc_dim, faces.clone())?;
    }
    Ok(x)
}

pub fn random_presheaf_arc<S: Site, R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> Result<Arc<FinitePresheaf<S>>> {
    random_presheaf(rng, spec).map(Arc::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::{Cube, Simplex};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reproducible_and_valid() {
        let spec = RandomSpec::default();
        for seed in 0..10 {
            let a = random_presheaf::<Cube, _>(&mut ChaCha8Rng::seed_from_u64(seed), &spec).unwrap();
            let b = random_presheaf::<Cube, _>(&mut ChaCha8Rng::seed_from_u64(seed), &spec).unwrap();
            assert_eq!(a, b);
            assert!(a.total_nondegenerate() <= spec.max_cells);
            a.check_relations(2).unwrap();
            let s = random_presheaf::<Simplex, _>(&mut ChaCha8Rng::seed_from_u64(seed), &spec).unwrap();
            s.check_relations(2).unwrap();
        }
    }

    #[test]
    fn attaches_higher_cells() {
        let spec = RandomSpec::default();
        let any = (0..20).any(|seed| {
            let x = random_presheaf::<Cube, _>(&mut ChaCha8Rng::seed_from_u64(seed), &spec).unwrap();
            x.n_roots(2) > 0
        });
        assert!(any);
    }
}
