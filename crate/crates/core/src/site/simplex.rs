//! Order-preserving maps `[m] -> [n]` of the simplex category.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SimplexRepr", into = "SimplexRepr")]
pub struct SimplexMorphism {
    target_dim: usize,
    values: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SimplexRepr {
    target_dim: usize,
    values: Vec<usize>,
}

impl TryFrom<SimplexRepr> for SimplexMorphism {
    type Error = Error;
    fn try_from(r: SimplexRepr) -> Result<Self> {
        SimplexMorphism::new(r.target_dim, r.values)
    }
}

impl From<SimplexMorphism> for SimplexRepr {
    fn from(m: SimplexMorphism) -> Self {
        SimplexRepr {
            target_dim: m.target_dim,
            values: m.values,
        }
    }
}

impl SimplexMorphism {
    pub fn new(target_dim: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidMorphism("a simplex map needs at least one value".into()));
        }
        if values.iter().any(|&v| v > target_dim) {
            return Err(Error::InvalidMorphism(format!("value exceeds target dimension {target_dim}")));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidMorphism("values must be weakly increasing".into()));
        }
        Ok(SimplexMorphism { target_dim, values })
    }

    pub fn identity(dim: usize) -> Self {
        SimplexMorphism {
            target_dim: dim,
            values: (0..=dim).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `d_i : [dim-1] -> [dim]`, skipping `i`.
    pub fn face(i: usize, dim: usize) -> Result<Self> {
        if dim == 0 || i > dim {
            return Err(Error::IndexOutOfRange(format!("face d_{i} into [{dim}]")));
        }
        let values = (0..dim).map(|v| if v < i { v } else { v + 1 }).collect();
        Ok(SimplexMorphism { target_dim: dim, values })
    }

    /// `s_i : [dim+1] -> [dim]`, repeating `i`.
    pub fn degeneracy(i: usize, dim: usize) -> Result<Self> {
        if i > dim {
            return Err(Error::IndexOutOfRange(format!("degeneracy s_{i} onto [{dim}]")));
        }
        let values = (0..=dim + 1).map(|v| if v <= i { v } else { v - 1 }).collect();
        Ok(SimplexMorphism { target_dim: dim, values })
    }

    pub fn compose(&self, f: &SimplexMorphism) -> Result<SimplexMorphism> {
        if f.target_dim != self.source_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim(),
                found: f.target_dim,
            });
        }
        Ok(self.compose_unchecked(f))
    }

    pub(crate) fn compose_unchecked(&self, f: &SimplexMorphism) -> SimplexMorphism {
        SimplexMorphism {
            target_dim: self.target_dim,
            values: f.values.iter().map(|&v| self.values[v]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.target_dim
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// `self = mono ∘ epi` through the image.
    pub fn factor(&self) -> (SimplexMorphism, SimplexMorphism) {
        let mut image = self.values.clone();
        image.dedup();
        let j = image.len() - 1;
        let mut epi = Vec::with_capacity(self.values.len());
        let mut pos = 0;
        for &v in &self.values {
            while image[pos] != v {
                pos += 1;
            }
            epi.push(pos);
        }
        (
            SimplexMorphism {
                target_dim: self.target_dim,
                values: image,
            },
            SimplexMorphism { target_dim: j, values: epi },
        )
    }

    /// The right inverse of a surjection that picks the first preimage.
    pub fn section(&self) -> SimplexMorphism {
        debug_assert!(self.is_surjective());
        let mut values = Vec::with_capacity(self.target_dim + 1);
        for (p, &v) in self.values.iter().enumerate() {
            if values.len() == v {
                values.push(p);
            }
        }
        SimplexMorphism {
            target_dim: self.source_dim(),
            values,
        }
    }

    pub fn all(m: usize, n: usize) -> Vec<SimplexMorphism> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(m + 1);
        fn rec(m: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<SimplexMorphism>) {
            if cur.len() == m + 1 {
                out.push(SimplexMorphism {
                    target_dim: n,
                    values: cur.clone(),
                });
                return;
            }
            for v in lo..=n {
                cur.push(v);
                rec(m, n, v, cur, out);
                cur.pop();
            }
        }
        rec(m, n, 0, &mut cur, &mut out);
        out
    }

    pub fn monos(j: usize, n: usize) -> Vec<SimplexMorphism> {
        let mut out: Vec<_> = Self::all(j, n).into_iter().filter(|m| m.is_injective()).collect();
        out.sort();
        out
    }

    pub fn epis(m: usize, j: usize) -> Vec<SimplexMorphism> {
        let mut out: Vec<_> = Self::all(m, j).into_iter().filter(|e| e.is_surjective()).collect();
        out.sort();
        out
    }
}

impl fmt::Display for SimplexMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] -> [{}] {:?}", self.source_dim(), self.target_dim, self.values)
    }
}
