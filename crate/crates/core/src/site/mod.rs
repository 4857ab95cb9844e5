//! The two base categories: cubes with connections and simplices.
//!
//! [`Site`] abstracts over them so presheaf code is written once. Per-dimension
//! tables of epimorphisms and monomorphisms are built lazily on first use and
//! shared process-wide.

pub mod cube;
pub mod simplex;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::OnceLock;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use cube::{Coord, CubeGenerator, CubeMorphism, Term};
pub use simplex::SimplexMorphism;

/// Largest dimension the morphism tables cover.
pub const MAX_DIM: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteKind {
    Cubical,
    Simplicial,
}

impl fmt::Display for SiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SiteKind::Cubical => "cubical",
            SiteKind::Simplicial => "simplicial",
        })
    }
}

impl std::str::FromStr for SiteKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "cubical" | "cube" => Ok(SiteKind::Cubical),
            "simplicial" | "simplex" => Ok(SiteKind::Simplicial),
            other => Err(crate::Error::Parse(format!("unknown site {other}"))),
        }
    }
}

pub struct MorTable<M> {
    pub list: Vec<M>,
    pub index: HashMap<M, u32>,
}

impl<M: Clone + Eq + Hash> MorTable<M> {
    fn new(list: Vec<M>) -> Self {
        let index = list.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        MorTable { list, index }
    }
}

/// Result of restricting an epi `[k] -> [j]` along a codimension-one face of `[k]`:
/// `e ∘ δ = d ∘ e'` with `d : [jp] -> [j]` a mono and `e' : [k-1] -> [jp]`.
#[derive(Clone, Copy, Debug)]
pub struct FaceFactor {
    pub jp: u8,
    pub mono: u32,
    pub epi: u32,
}

pub struct Tables<M> {
    epis: Vec<OnceLock<MorTable<M>>>,
    monos: Vec<OnceLock<MorTable<M>>>,
    faces: Vec<OnceLock<Vec<M>>>,
    elementary: Vec<OnceLock<Vec<(M, M)>>>,
    face_factor: Vec<OnceLock<Vec<FaceFactor>>>,
    epi_compose: Vec<OnceLock<Vec<u32>>>,
}

impl<M> Default for Tables<M> {
    fn default() -> Self {
        let sq = (MAX_DIM + 1) * (MAX_DIM + 1);
        Tables {
            epis: (0..sq).map(|_| OnceLock::new()).collect(),
            monos: (0..sq).map(|_| OnceLock::new()).collect(),
            faces: (0..=MAX_DIM).map(|_| OnceLock::new()).collect(),
            elementary: (0..=MAX_DIM).map(|_| OnceLock::new()).collect(),
            face_factor: (0..sq).map(|_| OnceLock::new()).collect(),
            epi_compose: (0..sq * (MAX_DIM + 1)).map(|_| OnceLock::new()).collect(),
        }
    }
}

fn slot(a: usize, b: usize) -> usize {
    assert!(
        a <= MAX_DIM && b <= MAX_DIM,
        "dimension {} exceeds the supported maximum {MAX_DIM}",
        a.max(b)
    );
    a * (MAX_DIM + 1) + b
}

pub trait Site: Copy + Clone + fmt::Debug + Default + Eq + Hash + Send + Sync + 'static {
    type Mor: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display + Send + Sync + Serialize + DeserializeOwned;

    const KIND: SiteKind;

    fn source(m: &Self::Mor) -> usize;
    fn target(m: &Self::Mor) -> usize;
    fn identity(k: usize) -> Self::Mor;
    /// `g ∘ f`; callers guarantee composability.
    fn compose(g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    /// `m = mono ∘ epi`.
    fn factor(m: &Self::Mor) -> (Self::Mor, Self::Mor);
    /// A right inverse of an epi.
    fn section(e: &Self::Mor) -> Self::Mor;
    fn is_mono(m: &Self::Mor) -> bool;
    fn is_epi(m: &Self::Mor) -> bool;
    /// Codimension-one faces `[k-1] -> [k]` in canonical order.
    fn generate_faces(k: usize) -> Vec<Self::Mor>;
    /// Elementary epis `[k] -> [k-1]` (degeneracies, then connections).
    fn generate_elementary_epis(k: usize) -> Vec<Self::Mor>;
    /// Writes a non-identity mono into `[k]` as `faces(k)[i] ∘ rest`.
    fn split_mono(d: &Self::Mor) -> Option<(usize, Self::Mor)>;
    fn generate_epis(k: usize, j: usize) -> Vec<Self::Mor>;
    fn generate_monos(j: usize, k: usize) -> Vec<Self::Mor>;
    fn face_label(k: usize, i: usize) -> String;
    fn tables() -> &'static Tables<Self::Mor>;

    fn epis(k: usize, j: usize) -> &'static MorTable<Self::Mor> {
        Self::tables().epis[slot(k, j)].get_or_init(|| MorTable::new(Self::generate_epis(k, j)))
    }

    fn monos(j: usize, k: usize) -> &'static MorTable<Self::Mor> {
        Self::tables().monos[slot(j, k)].get_or_init(|| MorTable::new(Self::generate_monos(j, k)))
    }

    fn epi_index(e: &Self::Mor) -> u32 {
        Self::epis(Self::source(e), Self::target(e)).index[e]
    }

    fn mono_index(d: &Self::Mor) -> u32 {
        Self::monos(Self::source(d), Self::target(d)).index[d]
    }

    fn identity_epi_index(k: usize) -> u32 {
        Self::epi_index(&Self::identity(k))
    }

    fn faces(k: usize) -> &'static [Self::Mor] {
        Self::tables().faces[k].get_or_init(|| Self::generate_faces(k))
    }

    /// Elementary epis from `[k]` paired with their sections.
    fn elementary_epis(k: usize) -> &'static [(Self::Mor, Self::Mor)] {
        Self::tables().elementary[k].get_or_init(|| {
            Self::generate_elementary_epis(k)
                .into_iter()
                .map(|e| {
                    let s = Self::section(&e);
                    (e, s)
                })
                .collect()
        })
    }

    fn num_faces(k: usize) -> usize {
        Self::faces(k).len()
    }

    fn face_factor(k: usize, j: usize, epi: u32, face: usize) -> FaceFactor {
        let table = Self::tables().face_factor[slot(k, j)].get_or_init(|| {
            let faces = Self::faces(k);
            let mut out = Vec::with_capacity(Self::epis(k, j).list.len() * faces.len());
            for e in &Self::epis(k, j).list {
                for d in faces {
                    let (m, e2) = Self::factor(&Self::compose(e, d));
                    out.push(FaceFactor {
                        jp: Self::target(&e2) as u8,
                        mono: Self::mono_index(&m),
                        epi: Self::epi_index(&e2),
                    });
                }
            }
            out
        });
        table[epi as usize * Self::num_faces(k) + face]
    }

    /// Index of `outer ∘ inner` for epis `inner : [a] -> [b]`, `outer : [b] -> [c]`.
    fn compose_epi(a: usize, b: usize, c: usize, outer: u32, inner: u32) -> u32 {
        if b == c {
            return inner;
        }
        if a == b {
            return outer;
        }
        let table = Self::tables().epi_compose[slot(a, b) * (MAX_DIM + 1) + c].get_or_init(|| {
            let inners = &Self::epis(a, b).list;
            let outers = &Self::epis(b, c).list;
            let mut out = Vec::with_capacity(inners.len() * outers.len());
            for o in outers {
                for i in inners {
                    out.push(Self::epi_index(&Self::compose(o, i)));
                }
            }
            out
        });
        table[outer as usize * Self::epis(a, b).list.len() + inner as usize]
    }

    fn epi(k: usize, j: usize, idx: u32) -> &'static Self::Mor {
        &Self::epis(k, j).list[idx as usize]
    }

    fn mono(j: usize, k: usize, idx: u32) -> &'static Self::Mor {
        &Self::monos(j, k).list[idx as usize]
    }

    fn all_morphisms(m: usize, n: usize) -> Vec<Self::Mor> {
        let mut out = Vec::new();
        for j in 0..=m.min(n) {
            for d in &Self::monos(j, n).list {
                for e in &Self::epis(m, j).list {
                    out.push(Self::compose(d, e));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cube;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Simplex;

impl Site for Cube {
    type Mor = CubeMorphism;
    const KIND: SiteKind = SiteKind::Cubical;

    fn source(m: &CubeMorphism) -> usize {
        m.source_dim()
    }
    fn target(m: &CubeMorphism) -> usize {
        m.target_dim()
    }
    fn identity(k: usize) -> CubeMorphism {
        CubeMorphism::identity(k)
    }
    fn compose(g: &CubeMorphism, f: &CubeMorphism) -> CubeMorphism {
        debug_assert_eq!(g.source_dim(), f.target_dim());
        g.compose_unchecked(f)
    }
    fn factor(m: &CubeMorphism) -> (CubeMorphism, CubeMorphism) {
        m.factor()
    }
    fn section(e: &CubeMorphism) -> CubeMorphism {
        e.section()
    }
    fn is_mono(m: &CubeMorphism) -> bool {
        m.is_face_type()
    }
    fn is_epi(m: &CubeMorphism) -> bool {
        m.is_epi()
    }
    fn generate_faces(k: usize) -> Vec<CubeMorphism> {
        let mut out = Vec::with_capacity(2 * k);
        for i in 1..=k {
            for eps in [false, true] {
                out.push(CubeMorphism::generator(CubeGenerator::Face { i, eps }, k - 1).unwrap());
            }
        }
        out
    }
    fn generate_elementary_epis(k: usize) -> Vec<CubeMorphism> {
        let mut out = Vec::new();
        for i in 1..=k {
            out.push(CubeMorphism::generator(CubeGenerator::Degeneracy { i }, k).unwrap());
        }
        for i in 1..k {
            for eps in [false, true] {
                out.push(CubeMorphism::generator(CubeGenerator::Connection { i, eps }, k).unwrap());
            }
        }
        out
    }
    fn split_mono(d: &CubeMorphism) -> Option<(usize, CubeMorphism)> {
        let p = d.coords().iter().position(Coord::is_const)?;
        let Coord::Const(eps) = d.coords()[p] else { unreachable!() };
        let mut rest = d.coords().to_vec();
        rest.remove(p);
        Some((2 * p + eps as usize, CubeMorphism::from_canonical(d.source_dim(), rest)))
    }
    fn generate_epis(k: usize, j: usize) -> Vec<CubeMorphism> {
        CubeMorphism::epis(k, j)
    }
    fn generate_monos(j: usize, k: usize) -> Vec<CubeMorphism> {
        CubeMorphism::monos(j, k)
    }
    fn face_label(_k: usize, i: usize) -> String {
        format!("d{},{}", i / 2 + 1, i % 2)
    }
    fn tables() -> &'static Tables<CubeMorphism> {
        static T: OnceLock<Tables<CubeMorphism>> = OnceLock::new();
        T.get_or_init(Tables::default)
    }
}

impl Site for Simplex {
    type Mor = SimplexMorphism;
    const KIND: SiteKind = SiteKind::Simplicial;

    fn source(m: &SimplexMorphism) -> usize {
        m.source_dim()
    }
    fn target(m: &SimplexMorphism) -> usize {
        m.target_dim()
    }
    fn identity(k: usize) -> SimplexMorphism {
        SimplexMorphism::identity(k)
    }
    fn compose(g: &SimplexMorphism, f: &SimplexMorphism) -> SimplexMorphism {
        debug_assert_eq!(g.source_dim(), f.target_dim());
        g.compose_unchecked(f)
    }
    fn factor(m: &SimplexMorphism) -> (SimplexMorphism, SimplexMorphism) {
        m.factor()
    }
    fn section(e: &SimplexMorphism) -> SimplexMorphism {
        e.section()
    }
    fn is_mono(m: &SimplexMorphism) -> bool {
        m.is_injective()
    }
    fn is_epi(m: &SimplexMorphism) -> bool {
        m.is_surjective()
    }
    fn generate_faces(k: usize) -> Vec<SimplexMorphism> {
        if k == 0 {
            return Vec::new();
        }
        (0..=k).map(|i| SimplexMorphism::face(i, k).unwrap()).collect()
    }
    fn generate_elementary_epis(k: usize) -> Vec<SimplexMorphism> {
        if k == 0 {
            return Vec::new();
        }
        (0..k).map(|i| SimplexMorphism::degeneracy(i, k - 1).unwrap()).collect()
    }
    fn split_mono(d: &SimplexMorphism) -> Option<(usize, SimplexMorphism)> {
        let v = (0..=d.target_dim()).find(|v| !d.values().contains(v))?;
        let rest = d.values().iter().map(|&x| if x > v { x - 1 } else { x }).collect();
        Some((v, SimplexMorphism::new(d.target_dim() - 1, rest).unwrap()))
    }
    fn generate_epis(k: usize, j: usize) -> Vec<SimplexMorphism> {
        SimplexMorphism::epis(k, j)
    }
    fn generate_monos(j: usize, k: usize) -> Vec<SimplexMorphism> {
        SimplexMorphism::monos(j, k)
    }
    fn face_label(_k: usize, i: usize) -> String {
        format!("d{i}")
    }
    fn tables() -> &'static Tables<SimplexMorphism> {
        static T: OnceLock<Tables<SimplexMorphism>> = OnceLock::new();
        T.get_or_init(Tables::default)
    }
}
