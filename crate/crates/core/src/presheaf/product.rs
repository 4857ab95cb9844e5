//! Geometric product of cubical sets.
//!
//! The nondegenerate `d`-cells of `X ⊗ Y` are the pairs `(x, y)` of
//! nondegenerate cells with `dim x + dim y = d`. A face in one of the first
//! `dim x` directions acts on `x`, the rest act on `y`; a degenerate result
//! `(r · e) ⊗ y` is rewritten as `(r ⊗ y) · (e × id)`.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Cell, FinitePresheaf, PresheafMap};
use crate::error::{Error, Result};
use crate::site::{Cube, CubeMorphism, Site, MAX_DIM};

/// `X ⊗ Y` truncated at `trunc_dim`, together with the pairing of roots.
pub struct GeometricProduct {
    pub presheaf: Arc<FinitePresheaf<Cube>>,
    /// Root of the product for each pair of roots `(x, y)`.
    pub pairs: HashMap<(Cell, Cell), Cell>,
    /// The pair behind each root of the product, per dimension.
    pub factors: Vec<Vec<(Cell, Cell)>>,
}

impl GeometricProduct {
    /// The cell `a ⊗ b` for arbitrary (possibly degenerate) cells.
    pub fn pair(&self, a: Cell, b: Cell) -> Option<Cell> {
        let root = *self.pairs.get(&(a.root_cell(), b.root_cell()))?;
        let ea = Cube::epi(a.dim as usize, a.root_dim as usize, a.epi);
        let eb = Cube::epi(b.dim as usize, b.root_dim as usize, b.epi);
        let e = ea.tensor(eb);
        Some(Cell {
            dim: a.dim + b.dim,
            root_dim: root.dim,
            root: root.root,
            epi: Cube::epi_index(&e),
        })
    }
}

pub fn geometric_product(
    x: &FinitePresheaf<Cube>,
    y: &FinitePresheaf<Cube>,
    trunc_dim: usize,
) -> Result<GeometricProduct> {
    if trunc_dim > MAX_DIM {
        return Err(Error::InvalidParameters(format!("truncation {trunc_dim} exceeds {MAX_DIM}")));
    }
    let mut pairs = HashMap::new();
    let mut factors: Vec<Vec<(Cell, Cell)>> = vec![Vec::new(); trunc_dim + 1];
    for (d, level) in factors.iter_mut().enumerate() {
        for p in 0..=d.min(x.trunc_dim()) {
            let q = d - p;
            if q > y.trunc_dim() {
                continue;
            }
            for a in x.roots(p) {
                for b in y.roots(q) {
                    pairs.insert((a, b), Cell::nondegenerate(d, level.len() as u32));
                    level.push((a, b));
                }
            }
        }
    }
    let tensor_cell = |a: Cell, b: Cell| -> Cell {
        let root = pairs[&(a.root_cell(), b.root_cell())];
        let ea = Cube::epi(a.dim as usize, a.root_dim as usize, a.epi);
        let eb = Cube::epi(b.dim as usize, b.root_dim as usize, b.epi);
        Cell {
            dim: a.dim + b.dim,
            root_dim: root.dim,
            root: root.root,
            epi: Cube::epi_index(&ea.tensor(eb)),
        }
    };
    let mut faces = Vec::with_capacity(trunc_dim + 1);
    for level in &factors {
        let mut lf = Vec::with_capacity(level.len());
        for &(a, b) in level {
            let p = a.dim as usize;
            let mut fs = Vec::with_capacity(Cube::num_faces(p + b.dim as usize));
            for i in 0..2 * p {
                fs.push(tensor_cell(x.face(a, i), b));
            }
            for i in 0..2 * b.dim as usize {
                fs.push(tensor_cell(a, y.face(b, i)));
            }
            lf.push(fs);
        }
        faces.push(lf);
    }
    Ok(GeometricProduct {
        presheaf: Arc::new(FinitePresheaf::new(trunc_dim, faces)?),
        pairs,
        factors,
    })
}

/// The map `X ⊗ □⁰ ≅ X -> X ⊗ □¹` at the end `ε` of the interval.
pub fn end_inclusion(
    x: &Arc<FinitePresheaf<Cube>>,
    cyl: &GeometricProduct,
    interval: &FinitePresheaf<Cube>,
    eps: bool,
) -> Result<PresheafMap<Cube>> {
    let vertex = interval
        .roots(0)
        .find(|v| {
            let d = CubeMorphism::generator(crate::site::CubeGenerator::Face { i: 1, eps }, 0).unwrap();
            interval.n_roots(1) == 1 && interval.act(Cell::nondegenerate(1, 0), &d) == *v
        })
        .ok_or_else(|| Error::InvalidParameters("interval must be the standard 1-cube".into()))?;
    let assignment = (0..=x.trunc_dim())
        .map(|j| {
            x.roots(j)
                .map(|r| cyl.pair(r, vertex).ok_or_else(|| Error::TruncationTooLow { needed: j, available: cyl.presheaf.trunc_dim() }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PresheafMap::new(x.clone(), cyl.presheaf.clone(), assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::standard::{representable, StandardKind, build_standard};
    use crate::presheaf::is_isomorphic;

    #[test]
    fn squares_from_intervals() {
        let i = representable::<Cube>(1, 3).unwrap();
        let p = geometric_product(&i, &i, 3).unwrap();
        p.presheaf.check_relations(2).unwrap();
        let sq = Arc::new(representable::<Cube>(2, 3).unwrap());
        assert!(is_isomorphic(&p.presheaf, &sq).unwrap());
    }

    #[test]
    fn unit_law() {
        let pt = representable::<Cube>(0, 2).unwrap();
        let x = Arc::new(build_standard::<Cube>(StandardKind::OpenBox { i: 2, eps: true }, 2, 2).unwrap().realized.as_ref().clone());
        let p = geometric_product(&pt, &x, 2).unwrap();
        assert!(is_isomorphic(&p.presheaf, &x).unwrap());
    }

    #[test]
    fn boundary_times_interval() {
        let b = build_standard::<Cube>(StandardKind::CubeBoundary, 1, 2).unwrap();
        let i = representable::<Cube>(1, 2).unwrap();
        let p = geometric_product(&b.realized, &i, 2).unwrap();
        assert_eq!(p.presheaf.n_roots(1), 2);
    }
}
