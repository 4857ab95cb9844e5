//! Finite, dimension-truncated presheaves over a [`Site`].
//!
//! A presheaf is stored in Eilenberg–Zilber form: the nondegenerate cells
//! ("roots") of each dimension together with their codimension-one faces.
//! Every cell is uniquely `root · e` for an epimorphism `e`, which is what
//! [`Cell`] records. The action of an arbitrary site morphism is derived from
//! the stored faces through the epi-mono factorization.

mod build;
pub mod json;
mod maps;
pub mod product;
pub mod random;
mod search;
pub mod standard;
pub mod triangulate;

use std::collections::HashMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::site::{Site, MAX_DIM};

pub use build::Classified;
pub use maps::{count_maps, enumerate_maps, find_isomorphism, find_isomorphism_over, is_isomorphic, PresheafMap};
pub use search::{search_maps, SearchOptions, SearchStats};

/// A cell of dimension `dim`, equal to the nondegenerate cell `root` of
/// dimension `root_dim` acted on by epi number `epi` of `[dim] -> [root_dim]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub dim: u8,
    pub root_dim: u8,
    pub root: u32,
    pub epi: u32,
}

impl Cell {
    /// The nondegenerate cell `root` of dimension `dim`.
    pub fn nondegenerate(dim: usize, root: u32) -> Cell {
        Cell {
            dim: dim as u8,
            root_dim: dim as u8,
            root,
            epi: 0,
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.dim == self.root_dim
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn root_cell(&self) -> Cell {
        Cell::nondegenerate(self.root_dim as usize, self.root)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_nondegenerate() {
            write!(f, "{}:{}", self.dim, self.root)
        } else {
            write!(f, "{}:{}<{}.{}>", self.dim, self.root, self.root_dim, self.epi)
        }
    }
}

pub struct FinitePresheaf<S: Site> {
    trunc_dim: usize,
    n_roots: Vec<usize>,
    /// `faces[j][r * nf + i]`: face `i` of root `r` of dimension `j`.
    faces: Vec<Vec<Cell>>,
    /// `mono_tables[j][r * n_monos_into(j) + mono_offsets[j][jp] + d]`.
    mono_tables: Vec<Vec<Cell>>,
    mono_offsets: Vec<Vec<usize>>,
    face_index: Vec<OnceLock<HashMap<Vec<Cell>, Vec<Cell>>>>,
    _site: PhantomData<S>,
}

impl<S: Site> Clone for FinitePresheaf<S> {
    fn clone(&self) -> Self {
        FinitePresheaf {
            trunc_dim: self.trunc_dim,
            n_roots: self.n_roots.clone(),
            faces: self.faces.clone(),
            mono_tables: self.mono_tables.clone(),
            mono_offsets: self.mono_offsets.clone(),
            face_index: (0..=self.trunc_dim).map(|_| OnceLock::new()).collect(),
            _site: PhantomData,
        }
    }
}

impl<S: Site> fmt::Debug for FinitePresheaf<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinitePresheaf")
            .field("site", &S::KIND)
            .field("trunc_dim", &self.trunc_dim)
            .field("nondegenerate", &self.n_roots)
            .finish()
    }
}

impl<S: Site> PartialEq for FinitePresheaf<S> {
    fn eq(&self, other: &Self) -> bool {
        self.trunc_dim == other.trunc_dim && self.n_roots == other.n_roots && self.faces == other.faces
    }
}

impl<S: Site> Eq for FinitePresheaf<S> {}

impl<S: Site> FinitePresheaf<S> {
    /// Builds a presheaf from the faces of its nondegenerate cells.
    ///
    /// `faces[j][r]` lists the codimension-one faces of root `r` in
    /// dimension `j`, in the site's face order. The data is rejected unless
    /// every codimension-two face is the same along all routes.
    pub fn new(trunc_dim: usize, faces: Vec<Vec<Vec<Cell>>>) -> Result<Self> {
        if trunc_dim > MAX_DIM {
            return Err(Error::InvalidParameters(format!(
                "truncation {trunc_dim} exceeds the supported maximum {MAX_DIM}"
            )));
        }
        if faces.len() > trunc_dim + 1 {
            return Err(Error::MalformedPresheaf(format!(
                "cells in dimension {} above truncation {trunc_dim}",
                faces.len() - 1
            )));
        }
        let mut n_roots = vec![0; trunc_dim + 1];
        for (j, fs) in faces.iter().enumerate() {
            n_roots[j] = fs.len();
        }
        let mut flat = vec![Vec::new(); trunc_dim + 1];
        for (j, fs) in faces.into_iter().enumerate() {
            let nf = S::num_faces(j);
            for (r, f) in fs.into_iter().enumerate() {
                if f.len() != nf {
                    return Err(Error::MalformedPresheaf(format!(
                        "cell {j}:{r} has {} faces, expected {nf}",
                        f.len()
                    )));
                }
                for c in &f {
                    check_ref::<S>(&n_roots, *c, j.wrapping_sub(1))
                        .map_err(|e| Error::MalformedPresheaf(format!("face of {j}:{r}: {e}")))?;
                }
                flat[j].extend(f);
            }
        }
        let mut p = FinitePresheaf {
            trunc_dim,
            n_roots,
            faces: flat,
            mono_tables: Vec::new(),
            mono_offsets: Vec::new(),
            face_index: (0..=trunc_dim).map(|_| OnceLock::new()).collect(),
            _site: PhantomData,
        };
        p.build_mono_tables();
        p.check_codim_two()?;
        Ok(p)
    }

    pub fn empty(trunc_dim: usize) -> Self {
        FinitePresheaf::new(trunc_dim, Vec::new()).expect("empty presheaf")
    }

    fn build_mono_tables(&mut self) {
        let d = self.trunc_dim;
        self.mono_offsets = (0..=d)
            .map(|j| {
                let mut off = Vec::with_capacity(j + 2);
                let mut acc = 0;
                for jp in 0..=j {
                    off.push(acc);
                    acc += S::monos(jp, j).list.len();
                }
                off.push(acc);
                off
            })
            .collect();
        self.mono_tables = vec![Vec::new(); d + 1];
        for j in 0..=d {
            let total = self.mono_offsets[j][j + 1];
            let mut table = Vec::with_capacity(total * self.n_roots[j]);
            for r in 0..self.n_roots[j] {
                for jp in 0..=j {
                    for m in &S::monos(jp, j).list {
                        let c = match S::split_mono(m) {
                            None => Cell::nondegenerate(j, r as u32),
                            Some((i, rest)) => {
                                let f = self.faces[j][r * S::num_faces(j) + i];
                                self.act(f, &rest)
                            }
                        };
                        table.push(c);
                    }
                }
            }
            self.mono_tables[j] = table;
        }
    }

    fn check_codim_two(&self) -> Result<()> {
        for j in 2..=self.trunc_dim {
            for r in 0..self.n_roots[j] {
                for (i, d1) in S::faces(j).iter().enumerate() {
                    let f = self.faces[j][r * S::num_faces(j) + i];
                    for (i2, d2) in S::faces(j - 1).iter().enumerate() {
                        let via_face = self.face(f, i2);
                        let composite = S::compose(d1, d2);
                        let direct = self.mono_face(j, r as u32, &composite);
                        if via_face != direct {
                            return Err(Error::MalformedPresheaf(format!(
                                "faces of cell {j}:{r} disagree: {} then {} gives {via_face}, expected {direct}",
                                S::face_label(j, i),
                                S::face_label(j - 1, i2)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trunc_dim(&self) -> usize {
        self.trunc_dim
    }

    pub fn site(&self) -> crate::site::SiteKind {
        S::KIND
    }

    pub fn n_roots(&self, j: usize) -> usize {
        self.n_roots.get(j).copied().unwrap_or(0)
    }

    /// Number of nondegenerate cells per dimension `0..=trunc_dim`.
    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        self.n_roots.clone()
    }

    pub fn total_nondegenerate(&self) -> usize {
        self.n_roots.iter().sum()
    }

    pub fn max_root_dim(&self) -> Option<usize> {
        (0..=self.trunc_dim).rev().find(|&j| self.n_roots[j] > 0)
    }

    pub fn roots(&self, j: usize) -> impl Iterator<Item = Cell> + '_ {
        (0..self.n_roots(j) as u32).map(move |r| Cell::nondegenerate(j, r))
    }

    /// All nondegenerate cells ordered by dimension, then identifier.
    pub fn all_roots(&self) -> Vec<Cell> {
        (0..=self.trunc_dim).flat_map(|j| self.roots(j)).collect()
    }

    pub fn root_faces(&self, j: usize, r: u32) -> &[Cell] {
        let nf = S::num_faces(j);
        &self.faces[j][r as usize * nf..(r as usize + 1) * nf]
    }

    pub fn num_cells(&self, d: usize) -> usize {
        (0..=d.min(self.trunc_dim)).map(|j| self.n_roots[j] * S::epis(d, j).list.len()).sum()
    }

    pub fn total_cells(&self) -> usize {
        (0..=self.trunc_dim).map(|d| self.num_cells(d)).sum()
    }

    /// Every cell of dimension `d`, in identifier order.
    pub fn cells(&self, d: usize) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.num_cells(d));
        for j in 0..=d.min(self.trunc_dim) {
            let ne = S::epis(d, j).list.len() as u32;
            for r in 0..self.n_roots[j] as u32 {
                for e in 0..ne {
                    out.push(Cell {
                        dim: d as u8,
                        root_dim: j as u8,
                        root: r,
                        epi: e,
                    });
                }
            }
        }
        out
    }

    /// Position of `c` in [`cells`](Self::cells)`(c.dim)`.
    pub fn cell_index(&self, c: Cell) -> usize {
        let d = c.dim as usize;
        let mut off = 0;
        for j in 0..c.root_dim as usize {
            off += self.n_roots[j] * S::epis(d, j).list.len();
        }
        off + c.root as usize * S::epis(d, c.root_dim as usize).list.len() + c.epi as usize
    }

    pub fn cell_at(&self, d: usize, mut idx: usize) -> Option<Cell> {
        for j in 0..=d.min(self.trunc_dim) {
            let ne = S::epis(d, j).list.len();
            let block = self.n_roots[j] * ne;
            if idx < block {
                return Some(Cell {
                    dim: d as u8,
                    root_dim: j as u8,
                    root: (idx / ne) as u32,
                    epi: (idx % ne) as u32,
                });
            }
            idx -= block;
        }
        None
    }

    pub fn contains(&self, c: Cell) -> bool {
        (c.dim as usize) <= self.trunc_dim && check_ref::<S>(&self.n_roots, c, c.dim as usize).is_ok()
    }

    /// `root · m` for a mono `m` into the root's dimension.
    fn mono_face(&self, j: usize, r: u32, m: &S::Mor) -> Cell {
        let jp = S::source(m);
        let idx = S::mono_index(m) as usize;
        self.mono_face_idx(j, r, jp, idx)
    }

    fn mono_face_idx(&self, j: usize, r: u32, jp: usize, idx: usize) -> Cell {
        let total = self.mono_offsets[j][j + 1];
        self.mono_tables[j][r as usize * total + self.mono_offsets[j][jp] + idx]
    }

    /// Codimension-one face number `i` of `c`.
    pub fn face(&self, c: Cell, i: usize) -> Cell {
        let k = c.dim as usize;
        let j = c.root_dim as usize;
        if k == j {
            return self.faces[j][c.root as usize * S::num_faces(j) + i];
        }
        let ff = S::face_factor(k, j, c.epi, i);
        let jp = ff.jp as usize;
        let x = self.mono_face_idx(j, c.root, jp, ff.mono as usize);
        let j2 = x.root_dim as usize;
        Cell {
            dim: (k - 1) as u8,
            root_dim: x.root_dim,
            root: x.root,
            epi: S::compose_epi(k - 1, jp, j2, x.epi, ff.epi),
        }
    }

    pub fn faces_of(&self, c: Cell) -> Vec<Cell> {
        (0..S::num_faces(c.dim as usize)).map(|i| self.face(c, i)).collect()
    }

    /// `c · e` for an epi `e : [k] -> [c.dim]` given by index.
    pub fn act_epi(&self, c: Cell, k: usize, e: u32) -> Cell {
        Cell {
            dim: k as u8,
            root_dim: c.root_dim,
            root: c.root,
            epi: S::compose_epi(k, c.dim as usize, c.root_dim as usize, c.epi, e),
        }
    }

    /// `c · m` for an arbitrary site morphism `m : [a] -> [c.dim]`.
    pub fn act(&self, c: Cell, m: &S::Mor) -> Cell {
        debug_assert_eq!(S::target(m), c.dim as usize);
        let j = c.root_dim as usize;
        let e = S::epi(c.dim as usize, j, c.epi);
        let (d, e2) = S::factor(&S::compose(e, m));
        let x = self.mono_face(j, c.root, &d);
        let jp = S::source(&d);
        let a = S::source(m);
        Cell {
            dim: a as u8,
            root_dim: x.root_dim,
            root: x.root,
            epi: S::compose_epi(a, jp, x.root_dim as usize, x.epi, S::epi_index(&e2)),
        }
    }

    /// Checked variant of [`act`](Self::act).
    pub fn try_act(&self, c: Cell, m: &S::Mor) -> Result<Cell> {
        if !self.contains(c) {
            return Err(Error::IndexOutOfRange(format!("cell {c}")));
        }
        if S::target(m) != c.dim as usize {
            return Err(Error::DimensionMismatch {
                expected: c.dim as usize,
                found: S::target(m),
            });
        }
        if S::source(m) > self.trunc_dim {
            return Err(Error::TruncationTooLow {
                needed: S::source(m),
                available: self.trunc_dim,
            });
        }
        Ok(self.act(c, m))
    }

    /// The morphism `[c.dim] -> [root_dim]` recorded in `c`.
    pub fn epi_of(&self, c: Cell) -> &'static S::Mor {
        S::epi(c.dim as usize, c.root_dim as usize, c.epi)
    }

    /// All `k`-cells keyed by their tuple of codimension-one faces.
    pub fn face_index(&self, k: usize) -> &HashMap<Vec<Cell>, Vec<Cell>> {
        self.face_index[k].get_or_init(|| {
            let mut idx: HashMap<Vec<Cell>, Vec<Cell>> = HashMap::new();
            for c in self.cells(k) {
                idx.entry(self.faces_of(c)).or_default().push(c);
            }
            idx
        })
    }

    /// Exhaustively checks the relations `(x·g)·f = x·(g∘f)` for all stored
    /// cells and all pairs of composable morphisms between the given dims.
    pub fn check_relations(&self, max_dim: usize) -> Result<()> {
        let top = max_dim.min(self.trunc_dim);
        for b in 0..=top {
            for x in self.cells(b) {
                for a in 0..=top {
                    for g in S::all_morphisms(a, b) {
                        let xg = self.act(x, &g);
                        for z in 0..=top {
                            for f in S::all_morphisms(z, a) {
                                let lhs = self.act(xg, &f);
                                let rhs = self.act(x, &S::compose(&g, &f));
                                if lhs != rhs {
                                    return Err(Error::Internal(format!(
                                        "relation fails on {x}: ({g}) then ({f})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Truncation `i_n^*`: forgets everything above dimension `n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.trunc_dim {
            return Err(Error::TruncationTooLow {
                needed: n,
                available: self.trunc_dim,
            });
        }
        Ok(self.with_roots_below(n, n))
    }

    /// The presheaf generated by the roots of dimension `<= n`, truncated at `d`.
    pub(crate) fn with_roots_below(&self, n: usize, d: usize) -> Self {
        let faces = (0..=n.min(d).min(self.trunc_dim))
            .map(|j| self.roots(j).map(|r| self.root_faces(j, r.root).to_vec()).collect())
            .collect();
        FinitePresheaf::new(d, faces).expect("restriction of a valid presheaf")
    }

    /// Same nondegenerate data viewed at another truncation level.
    pub fn retruncate(&self, d: usize) -> Result<Self> {
        if d > MAX_DIM {
            return Err(Error::InvalidParameters(format!("truncation {d} exceeds {MAX_DIM}")));
        }
        Ok(self.with_roots_below(d, d))
    }

    /// Coproduct; roots of `other` are numbered after those of `self`.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.trunc_dim != other.trunc_dim {
            return Err(Error::DimensionMismatch {
                expected: self.trunc_dim,
                found: other.trunc_dim,
            });
        }
        let shift = |c: Cell| Cell {
            root: c.root + self.n_roots[c.root_dim as usize] as u32,
            ..c
        };
        let faces = (0..=self.trunc_dim)
            .map(|j| {
                let mut v: Vec<Vec<Cell>> = self.roots(j).map(|r| self.root_faces(j, r.root).to_vec()).collect();
                v.extend(other.roots(j).map(|r| other.root_faces(j, r.root).iter().map(|&c| shift(c)).collect()));
                v
            })
            .collect();
        FinitePresheaf::new(self.trunc_dim, faces)
    }
}

fn check_ref<S: Site>(n_roots: &[usize], c: Cell, expected_dim: usize) -> Result<()> {
    let (d, j) = (c.dim as usize, c.root_dim as usize);
    if d != expected_dim {
        return Err(Error::DimensionMismatch {
            expected: expected_dim,
            found: d,
        });
    }
    if j > d || j >= n_roots.len() || c.root as usize >= n_roots[j] {
        return Err(Error::IndexOutOfRange(format!("cell {c}")));
    }
    if c.epi as usize >= S::epis(d, j).list.len() {
        return Err(Error::IndexOutOfRange(format!("degeneracy of cell {c}")));
    }
    Ok(())
}
