use std::collections::HashMap;
use std::hash::Hash;

use super::{Cell, FinitePresheaf};
use crate::error::{Error, Result};
use crate::site::Site;

/// A presheaf built from an explicit action, with the translation from the
/// caller's cell values to [`Cell`]s.
pub struct Classified<S: Site, T> {
    pub presheaf: FinitePresheaf<S>,
    /// Per dimension, the cell each input value became.
    pub index: Vec<HashMap<T, Cell>>,
    /// Per dimension, the input values that became nondegenerate cells, in order.
    pub roots: Vec<Vec<T>>,
}

impl<S: Site, T: Clone + Eq + Hash> Classified<S, T> {
    pub fn cell_of(&self, t: &T, dim: usize) -> Option<Cell> {
        self.index.get(dim)?.get(t).copied()
    }
}

impl<S: Site> FinitePresheaf<S> {
    /// Builds a presheaf from the complete list of its cells in every
    /// dimension `0..=trunc_dim` and the action of site morphisms on them.
    ///
    /// A cell `c` is degenerate exactly when `c = (c·s)·e` for an elementary
    /// epi `e` with section `s`; everything else becomes a root. The result is
    /// rejected if the values do not form a presheaf with unique normal forms.
    pub fn from_action<T, F>(trunc_dim: usize, cells: Vec<Vec<T>>, act: F) -> Result<Classified<S, T>>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &S::Mor) -> T,
    {
        if cells.len() != trunc_dim + 1 {
            return Err(Error::MalformedPresheaf(format!(
                "expected cell lists for dimensions 0..={trunc_dim}, got {}",
                cells.len()
            )));
        }
        let mut index: Vec<HashMap<T, Cell>> = Vec::with_capacity(trunc_dim + 1);
        let mut roots: Vec<Vec<T>> = Vec::with_capacity(trunc_dim + 1);
        let mut faces: Vec<Vec<Vec<Cell>>> = Vec::with_capacity(trunc_dim + 1);
        for (d, level) in cells.into_iter().enumerate() {
            let mut map: HashMap<T, Cell> = HashMap::with_capacity(level.len());
            let mut level_roots = Vec::new();
            for t in level {
                let mut found = None;
                for (e, s) in S::elementary_epis(d) {
                    let y = act(&t, s);
                    if act(&y, e) == t {
                        let yc = *index[d - 1].get(&y).ok_or_else(|| {
                            Error::MalformedPresheaf(format!("action leaves the given cells in dimension {}", d - 1))
                        })?;
                        found = Some(Cell {
                            dim: d as u8,
                            root_dim: yc.root_dim,
                            root: yc.root,
                            epi: S::compose_epi(d, d - 1, yc.root_dim as usize, yc.epi, S::epi_index(e)),
                        });
                        break;
                    }
                }
                let cell = match found {
                    Some(c) => c,
                    None => {
                        level_roots.push(t.clone());
                        Cell::nondegenerate(d, (level_roots.len() - 1) as u32)
                    }
                };
                if map.insert(t, cell).is_some() {
                    return Err(Error::MalformedPresheaf(format!("repeated cell in dimension {d}")));
                }
            }
            let expected: usize = (0..d).map(|j| roots[j].len() * S::epis(d, j).list.len()).sum::<usize>()
                + level_roots.len();
            let mut distinct: Vec<Cell> = map.values().copied().collect();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != map.len() || map.len() != expected {
                return Err(Error::MalformedPresheaf(format!(
                    "dimension {d}: {} cells but {} normal forms ({} expected)",
                    map.len(),
                    distinct.len(),
                    expected
                )));
            }
            let mut level_faces = Vec::with_capacity(level_roots.len());
            for t in &level_roots {
                let mut fs = Vec::with_capacity(S::num_faces(d));
                for delta in S::faces(d) {
                    let y = act(t, delta);
                    fs.push(*index[d - 1].get(&y).ok_or_else(|| {
                        Error::MalformedPresheaf(format!("face leaves the given cells in dimension {}", d - 1))
                    })?);
                }
                level_faces.push(fs);
            }
            faces.push(level_faces);
            index.push(map);
            roots.push(level_roots);
        }
        let presheaf = FinitePresheaf::new(trunc_dim, faces)?;
        Ok(Classified { presheaf, index, roots })
    }
}
