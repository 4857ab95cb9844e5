use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::{search_maps, Cell, FinitePresheaf, SearchOptions};
use crate::error::{Error, Result};
use crate::site::Site;

/// A natural transformation between finite presheaves, stored by the image
/// of each nondegenerate cell of the source.
pub struct PresheafMap<S: Site> {
    source: Arc<FinitePresheaf<S>>,
    target: Arc<FinitePresheaf<S>>,
    assignment: Vec<Vec<Cell>>,
}

impl<S: Site> Clone for PresheafMap<S> {
    fn clone(&self) -> Self {
        PresheafMap {
            source: self.source.clone(),
            target: self.target.clone(),
            assignment: self.assignment.clone(),
        }
    }
}

impl<S: Site> fmt::Debug for PresheafMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresheafMap").field("assignment", &self.assignment).finish()
    }
}

impl<S: Site> PartialEq for PresheafMap<S> {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment
            && (Arc::ptr_eq(&self.source, &other.source) || self.source == other.source)
            && (Arc::ptr_eq(&self.target, &other.target) || self.target == other.target)
    }
}

impl<S: Site> Eq for PresheafMap<S> {}

impl<S: Site> PresheafMap<S> {
    /// Validates that the assignment respects dimensions and faces.
    pub fn new(
        source: Arc<FinitePresheaf<S>>,
        target: Arc<FinitePresheaf<S>>,
        assignment: Vec<Vec<Cell>>,
    ) -> Result<Self> {
        if source.trunc_dim() > target.trunc_dim() {
            return Err(Error::TruncationTooLow {
                needed: source.trunc_dim(),
                available: target.trunc_dim(),
            });
        }
        if assignment.len() != source.trunc_dim() + 1 {
            return Err(Error::MalformedMap("assignment must list every dimension".into()));
        }
        for (j, vals) in assignment.iter().enumerate() {
            if vals.len() != source.n_roots(j) {
                return Err(Error::MalformedMap(format!("dimension {j}: wrong number of images")));
            }
            for v in vals {
                if v.dim as usize != j || !target.contains(*v) {
                    return Err(Error::MalformedMap(format!("dimension {j}: invalid image {v}")));
                }
            }
        }
        let m = PresheafMap {
            source,
            target,
            assignment,
        };
        m.check_naturality()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        source: Arc<FinitePresheaf<S>>,
        target: Arc<FinitePresheaf<S>>,
        assignment: Vec<Vec<Cell>>,
    ) -> Self {
        let m = PresheafMap {
            source,
            target,
            assignment,
        };
        debug_assert!(m.check_naturality().is_ok());
        m
    }

    fn check_naturality(&self) -> Result<()> {
        for j in 1..=self.source.trunc_dim() {
            for r in self.source.roots(j) {
                let v = self.assignment[j][r.root as usize];
                for (i, f) in self.source.root_faces(j, r.root).iter().enumerate() {
                    if self.apply(*f) != self.target.face(v, i) {
                        return Err(Error::MalformedMap(format!(
                            "image of {r} does not commute with {}",
                            S::face_label(j, i)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: Arc<FinitePresheaf<S>>) -> Self {
        let assignment = (0..=x.trunc_dim()).map(|j| x.roots(j).collect()).collect();
        PresheafMap {
            source: x.clone(),
            target: x,
            assignment,
        }
    }

    pub fn source(&self) -> &Arc<FinitePresheaf<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePresheaf<S>> {
        &self.target
    }

    pub fn assignment(&self) -> &[Vec<Cell>] {
        &self.assignment
    }

    pub fn apply(&self, c: Cell) -> Cell {
        let v = self.assignment[c.root_dim as usize][c.root as usize];
        if c.is_nondegenerate() {
            v
        } else {
            self.target.act_epi(v, c.dim as usize, c.epi)
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PresheafMap<S>) -> Result<PresheafMap<S>> {
        if !(Arc::ptr_eq(&self.target, &next.source) || self.target == next.source) {
            return Err(Error::MalformedMap("maps are not composable".into()));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|vals| vals.iter().map(|&v| next.apply(v)).collect())
            .collect();
        Ok(PresheafMap {
            source: self.source.clone(),
            target: next.target.clone(),
            assignment,
        })
    }

    /// Same assignment with the target replaced by an equal presheaf.
    pub fn with_target(&self, target: Arc<FinitePresheaf<S>>) -> Result<Self> {
        if *target != *self.target {
            return Err(Error::MalformedMap("replacement target differs".into()));
        }
        Ok(PresheafMap {
            source: self.source.clone(),
            target,
            assignment: self.assignment.clone(),
        })
    }

    pub fn is_injective_on(&self, d: usize) -> bool {
        let mut seen = HashSet::new();
        self.source.cells(d).into_iter().all(|c| seen.insert(self.apply(c)))
    }

    pub fn is_surjective_on(&self, d: usize) -> bool {
        let seen: HashSet<Cell> = self.source.cells(d).into_iter().map(|c| self.apply(c)).collect();
        seen.len() == self.target.num_cells(d)
    }

    pub fn is_bijective_on(&self, d: usize) -> bool {
        self.source.num_cells(d) == self.target.num_cells(d) && self.is_injective_on(d)
    }

    /// Injective in every stored dimension.
    pub fn is_mono(&self) -> bool {
        (0..=self.source.trunc_dim()).all(|d| self.is_injective_on(d))
    }

    /// An isomorphism: nondegenerate cells go bijectively to nondegenerate cells.
    pub fn is_iso(&self) -> bool {
        if self.source.trunc_dim() != self.target.trunc_dim()
            || self.source.nondegenerate_counts() != self.target.nondegenerate_counts()
        {
            return false;
        }
        let mut seen = HashSet::new();
        self.assignment.iter().flatten().all(|v| v.is_nondegenerate() && seen.insert(*v))
    }

    /// Whether `self` and `other` agree on every cell.
    pub fn same_as(&self, other: &PresheafMap<S>) -> bool {
        self.assignment == other.assignment
    }
}

/// Every map `a -> x`.
pub fn enumerate_maps<S: Site>(a: &Arc<FinitePresheaf<S>>, x: &Arc<FinitePresheaf<S>>) -> Result<Vec<PresheafMap<S>>> {
    let mut out = Vec::new();
    search_maps(a, x, &SearchOptions::default(), |asg| {
        out.push(PresheafMap::new_unchecked(a.clone(), x.clone(), asg.to_vec()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Number of maps `a -> x` without materializing them.
pub fn count_maps<S: Site>(a: &FinitePresheaf<S>, x: &FinitePresheaf<S>) -> Result<u64> {
    Ok(search_maps(a, x, &SearchOptions::default(), |_| ControlFlow::Continue(()))?.solutions)
}

/// An isomorphism `x -> y` if one exists.
pub fn find_isomorphism<S: Site>(
    x: &Arc<FinitePresheaf<S>>,
    y: &Arc<FinitePresheaf<S>>,
) -> Result<Option<PresheafMap<S>>> {
    if x.trunc_dim() != y.trunc_dim() || x.nondegenerate_counts() != y.nondegenerate_counts() {
        return Ok(None);
    }
    let opts = SearchOptions {
        injective_on_roots: true,
        filter: Some(&|a: Cell, c: Cell| a.dim == c.root_dim),
        ..Default::default()
    };
    let mut found = None;
    search_maps(x, y, &opts, |asg| {
        found = Some(PresheafMap::new_unchecked(x.clone(), y.clone(), asg.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok(found)
}

pub fn is_isomorphic<S: Site>(x: &Arc<FinitePresheaf<S>>, y: &Arc<FinitePresheaf<S>>) -> Result<bool> {
    Ok(find_isomorphism(x, y)?.is_some())
}

/// An isomorphism `φ : i.source -> j.source` with `j ∘ φ = i`, if any.
pub fn find_isomorphism_over<S: Site>(i: &PresheafMap<S>, j: &PresheafMap<S>) -> Result<Option<PresheafMap<S>>> {
    if !(Arc::ptr_eq(i.target(), j.target()) || i.target() == j.target()) {
        return Err(Error::MalformedMap("maps have different codomains".into()));
    }
    let (x, y) = (i.source(), j.source());
    if x.trunc_dim() != y.trunc_dim() || x.nondegenerate_counts() != y.nondegenerate_counts() {
        return Ok(None);
    }
    let filter = |a: Cell, c: Cell| a.dim == c.root_dim && j.apply(c) == i.apply(a);
    let opts = SearchOptions {
        injective_on_roots: true,
        filter: Some(&filter),
        ..Default::default()
    };
    let mut found = None;
    search_maps(x, y, &opts, |asg| {
        found = Some(PresheafMap::new_unchecked(x.clone(), y.clone(), asg.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok(found)
}

impl<S: Site> FinitePresheaf<S> {
    /// The subpresheaf on the roots selected by `keep`, with its inclusion.
    /// Fails if the selection is not closed under faces.
    pub fn subpresheaf(self: &Arc<Self>, keep: impl Fn(Cell) -> bool) -> Result<PresheafMap<S>> {
        let d = self.trunc_dim();
        let mut renumber: Vec<Vec<Option<u32>>> = Vec::with_capacity(d + 1);
        let mut kept: Vec<Vec<Cell>> = Vec::with_capacity(d + 1);
        for j in 0..=d {
            let mut ren = vec![None; self.n_roots(j)];
            let mut k = Vec::new();
            for r in self.roots(j) {
                if keep(r) {
                    ren[r.root as usize] = Some(k.len() as u32);
                    k.push(r);
                }
            }
            renumber.push(ren);
            kept.push(k);
        }
        let mut faces = Vec::with_capacity(d + 1);
        for j in 0..=d {
            let mut level = Vec::with_capacity(kept[j].len());
            for r in &kept[j] {
                let mut fs = Vec::new();
                for f in self.root_faces(j, r.root) {
                    let nr = renumber[f.root_dim as usize][f.root as usize].ok_or_else(|| {
                        Error::MalformedPresheaf(format!("selection not closed under faces: {r} has face {f}"))
                    })?;
                    fs.push(Cell { root: nr, ..*f });
                }
                level.push(fs);
            }
            faces.push(level);
        }
        let sub = Arc::new(FinitePresheaf::new(d, faces)?);
        Ok(PresheafMap::new_unchecked(sub, self.clone(), kept))
    }

    /// The image of a map as a subpresheaf of its target.
    pub fn image_of(map: &PresheafMap<S>) -> Result<PresheafMap<S>> {
        let mut roots: HashSet<Cell> = HashSet::new();
        for c in map.assignment().iter().flatten() {
            roots.insert(c.root_cell());
        }
        // close under faces
        let tgt = map.target().clone();
        let mut stack: Vec<Cell> = roots.iter().copied().collect();
        while let Some(c) = stack.pop() {
            for f in tgt.root_faces(c.dim as usize, c.root) {
                if roots.insert(f.root_cell()) {
                    stack.push(f.root_cell());
                }
            }
        }
        tgt.subpresheaf(|r| roots.contains(&r))
    }
}
