//! Representables and their boundaries, horns and open boxes.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Cell, FinitePresheaf, PresheafMap};
use crate::error::{Error, Result};
use crate::site::{Site, SiteKind, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardKind {
    Simplex,
    SimplexBoundary,
    /// `Λ^k_i`, omitting the face `d_i`.
    Horn { i: usize },
    Cube,
    CubeBoundary,
    /// `⊓^k_{i,ε}`, omitting the face `∂_{i,ε}`.
    OpenBox { i: usize, eps: bool },
}

impl StandardKind {
    pub fn site(&self) -> SiteKind {
        match self {
            StandardKind::Simplex | StandardKind::SimplexBoundary | StandardKind::Horn { .. } => SiteKind::Simplicial,
            _ => SiteKind::Cubical,
        }
    }

    pub fn is_representable(&self) -> bool {
        matches!(self, StandardKind::Simplex | StandardKind::Cube)
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, StandardKind::SimplexBoundary | StandardKind::CubeBoundary)
    }

    pub fn is_open(&self) -> bool {
        matches!(self, StandardKind::Horn { .. } | StandardKind::OpenBox { .. })
    }

    /// Position of the omitted face in the site's face order.
    fn omitted_face(&self) -> Option<usize> {
        match *self {
            StandardKind::Horn { i } => Some(i),
            StandardKind::OpenBox { i, eps } => Some(2 * (i - 1) + eps as usize),
            _ => None,
        }
    }

    pub fn label(&self, k: usize) -> String {
        match *self {
            StandardKind::Simplex => format!("Δ^{k}"),
            StandardKind::SimplexBoundary => format!("∂Δ^{k}"),
            StandardKind::Horn { i } => format!("Λ^{k}_{i}"),
            StandardKind::Cube => format!("□^{k}"),
            StandardKind::CubeBoundary => format!("∂□^{k}"),
            StandardKind::OpenBox { i, eps } => format!("⊓^{k}_{{{i},{}}}", eps as u8),
        }
    }
}

/// A named subpresheaf of a representable together with its inclusion.
pub struct StandardCell<S: Site> {
    pub kind: StandardKind,
    pub k: usize,
    pub realized: Arc<FinitePresheaf<S>>,
    pub inclusion: PresheafMap<S>,
}

impl<S: Site> Clone for StandardCell<S> {
    fn clone(&self) -> Self {
        StandardCell {
            kind: self.kind,
            k: self.k,
            realized: self.realized.clone(),
            inclusion: self.inclusion.clone(),
        }
    }
}

impl<S: Site> fmt::Debug for StandardCell<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.label(self.k))
    }
}

/// The representable presheaf on `[k]`, truncated at `trunc_dim`. Its
/// nondegenerate `j`-cells are the monomorphisms `[j] -> [k]`.
pub fn representable<S: Site>(k: usize, trunc_dim: usize) -> Result<FinitePresheaf<S>> {
    if k > MAX_DIM || trunc_dim > MAX_DIM {
        return Err(Error::InvalidParameters(format!("dimension exceeds {MAX_DIM}")));
    }
    let mut faces = Vec::new();
    for j in 0..=k.min(trunc_dim) {
        let level = S::monos(j, k)
            .list
            .iter()
            .map(|m| {
                S::faces(j)
                    .iter()
                    .map(|d| Cell::nondegenerate(j - 1, S::mono_index(&S::compose(m, d))))
                    .collect()
            })
            .collect();
        faces.push(level);
    }
    FinitePresheaf::new(trunc_dim, faces)
}

/// The morphism `[j] -> [k]` represented by a cell of the representable on `[k]`.
pub fn representable_cell_morphism<S: Site>(k: usize, rep: &FinitePresheaf<S>, c: Cell) -> S::Mor {
    let d = S::mono(c.root_dim as usize, k, c.root);
    S::compose(d, rep.epi_of(c))
}

/// The cell of the representable on `[k]` corresponding to `m : [j] -> [k]`.
pub fn representable_cell<S: Site>(m: &S::Mor) -> Cell {
    let (d, e) = S::factor(m);
    Cell {
        dim: S::source(m) as u8,
        root_dim: S::source(&d) as u8,
        root: S::mono_index(&d),
        epi: S::epi_index(&e),
    }
}

fn factors_through<S: Site>(m: &S::Mor, delta: &S::Mor) -> bool {
    let j = S::source(m);
    let k1 = S::source(delta);
    j <= k1 && S::monos(j, k1).list.iter().any(|m2| &S::compose(delta, m2) == m)
}

impl<S: Site> StandardCell<S> {
    pub fn build(kind: StandardKind, k: usize, trunc_dim: usize) -> Result<Self> {
        if kind.site() != S::KIND {
            return Err(Error::SiteMismatch(format!(
                "{} is not a {} standard cell",
                kind.label(k),
                S::KIND
            )));
        }
        if k > trunc_dim {
            return Err(Error::InvalidParameters(format!(
                "{} does not fit in truncation {trunc_dim}",
                kind.label(k)
            )));
        }
        match kind {
            StandardKind::Horn { i } if k == 0 || i > k => {
                return Err(Error::InvalidParameters(format!("horn index {i} for dimension {k}")));
            }
            StandardKind::OpenBox { i, .. } if k == 0 || i == 0 || i > k => {
                return Err(Error::InvalidParameters(format!("open box index {i} for dimension {k}")));
            }
            _ => {}
        }
        let rep = Arc::new(representable::<S>(k, trunc_dim)?);
        let omitted = kind.omitted_face();
        let inclusion = if kind.is_representable() {
            PresheafMap::identity(rep)
        } else {
            let faces = S::faces(k);
            rep.subpresheaf(|r| {
                if r.dim as usize == k {
                    return false;
                }
                let m = S::mono(r.dim as usize, k, r.root);
                match omitted {
                    None => true,
                    Some(o) => faces.iter().enumerate().any(|(f, d)| f != o && factors_through::<S>(m, d)),
                }
            })?
        };
        Ok(StandardCell {
            kind,
            k,
            realized: inclusion.source().clone(),
            inclusion,
        })
    }

    pub fn representable_target(&self) -> &Arc<FinitePresheaf<S>> {
        self.inclusion.target()
    }
}

/// Shorthand for [`StandardCell::build`].
pub fn build_standard<S: Site>(kind: StandardKind, k: usize, trunc_dim: usize) -> Result<StandardCell<S>> {
    StandardCell::build(kind, k, trunc_dim)
}
