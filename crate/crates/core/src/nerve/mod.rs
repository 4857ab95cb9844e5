//! The cubical nerve of a graph at bounded dimension and support.
//!
//! An `n`-cube of `NX` is a graph map `I_∞^{⊠n} -> X` that is constant
//! outside some box `[−M, M]^n`, i.e. `c = c ∘ clamp_M`. A [`StableCube`]
//! stores the values on the smallest such box.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::{box_product, hom, interval, point, Graph, GraphMap};
use crate::presheaf::{Cell, FinitePresheaf, PresheafMap};
use crate::site::{Cube, CubeGenerator, CubeMorphism, Site};

pub mod fibration;
pub mod filling;

pub use fibration::{is_graph_n_fibration_bounded, FibrationCheck, FibrationVerdict, MemberStats};
pub use filling::{check_filler, fill, fill_at, universal_box_filler, BoxSpec, Bottom, Filler, OpenBoxProblem, UniversalFiller};

/// The box `[−support, support]^dim`, indexed row-major with the first
/// coordinate most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxShape {
    pub dim: usize,
    pub support: usize,
}

impl BoxShape {
    pub fn new(dim: usize, support: usize) -> BoxShape {
        BoxShape { dim, support }
    }

    pub fn side(&self) -> usize {
        2 * self.support + 1
    }

    pub fn len(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, t: &[i64]) -> usize {
        let m = self.support as i64;
        t.iter().fold(0, |acc, &x| acc * self.side() + (x.clamp(-m, m) + m) as usize)
    }

    pub fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut t = vec![0; self.dim];
        for j in (0..self.dim).rev() {
            t[j] = (idx % self.side()) as i64 - self.support as i64;
            idx /= self.side();
        }
        t
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Whether `t` lies on the face `t_j = ±support` (`j` 0-based).
    pub fn on_face(&self, t: &[i64], j: usize, eps: bool) -> bool {
        t[j] == if eps { self.support as i64 } else { -(self.support as i64) }
    }

    pub fn on_boundary(&self, t: &[i64]) -> bool {
        t.iter().any(|x| x.unsigned_abs() as usize == self.support)
    }

    /// The grid graph `I_{2M}^{⊠dim}`, whose vertex numbering matches [`index`](Self::index).
    pub fn graph(&self) -> Arc<Graph> {
        static CACHE: OnceLock<Mutex<HashMap<BoxShape, Arc<Graph>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().unwrap().get(self) {
            return g.clone();
        }
        let side = interval(2 * self.support);
        let mut g = point();
        for _ in 0..self.dim {
            g = box_product(&g, &side);
        }
        let g = Arc::new(g);
        cache.lock().unwrap().insert(*self, g.clone());
        g
    }
}

/// Inserts `value` at position `j` (0-based).
pub(crate) fn insert_coord(s: &[i64], j: usize, value: i64) -> Vec<i64> {
    let mut t = Vec::with_capacity(s.len() + 1);
    t.extend_from_slice(&s[..j]);
    t.push(value);
    t.extend_from_slice(&s[j..]);
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableCube {
    dim: usize,
    support: usize,
    values: Vec<u32>,
}

impl StableCube {
    /// Values on `[−support, support]^dim`; the result is trimmed.
    pub fn new(dim: usize, support: usize, values: Vec<u32>) -> Result<StableCube> {
        let shape = BoxShape::new(dim, support);
        if values.len() != shape.len() {
            return Err(Error::InvalidParameters(format!(
                "a {dim}-cube of support {support} needs {} values, got {}",
                shape.len(),
                values.len()
            )));
        }
        Ok(StableCube { dim, support, values }.trimmed())
    }

    pub fn constant(dim: usize, v: u32) -> StableCube {
        StableCube {
            dim,
            support: 0,
            values: vec![v],
        }
    }

    pub fn from_fn(dim: usize, support: usize, mut f: impl FnMut(&[i64]) -> u32) -> StableCube {
        let shape = BoxShape::new(dim, support);
        let values = shape.points().map(|t| f(&t)).collect();
        StableCube { dim, support, values }.trimmed()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn shape(&self) -> BoxShape {
        BoxShape::new(self.dim, self.support)
    }

    /// Values on the trimmed box.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// The value at any point of `ℤ^dim`.
    pub fn value(&self, t: &[i64]) -> u32 {
        self.values[self.shape().index(t)]
    }

    /// Values on `[−m, m]^dim`.
    pub fn values_at(&self, m: usize) -> Vec<u32> {
        BoxShape::new(self.dim, m).points().map(|t| self.value(&t)).collect()
    }

    fn trimmed(mut self) -> StableCube {
        while self.support > 0 {
            let shape = self.shape();
            let inner = self.support as i64 - 1;
            let stable = shape.points().enumerate().all(|(idx, t)| {
                let c: Vec<i64> = t.iter().map(|&x| x.clamp(-inner, inner)).collect();
                self.values[idx] == self.values[shape.index(&c)]
            });
            if !stable {
                break;
            }
            self.values = self.values_at(self.support - 1);
            self.support -= 1;
        }
        self
    }

    /// Whether the values form a graph map into `x`.
    pub fn is_map_into(&self, x: &Graph) -> bool {
        if self.values.iter().any(|&v| v as usize >= x.n()) {
            return false;
        }
        let g = self.shape().graph();
        g.edges()
            .iter()
            .all(|&(a, b)| x.adjacent(self.values[a as usize], self.values[b as usize]))
    }

    /// `f ∘ c`.
    pub fn map_by(&self, f: &GraphMap) -> StableCube {
        StableCube {
            dim: self.dim,
            support: self.support,
            values: self.values.iter().map(|&v| f.apply(v)).collect(),
        }
        .trimmed()
    }

    /// `c · m` for `m : [1]^a -> [1]^dim`.
    pub fn act(&self, m: &CubeMorphism) -> Result<StableCube> {
        if m.target_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.target_dim(),
            });
        }
        Ok(self.act_unchecked(m))
    }

    fn act_unchecked(&self, m: &CubeMorphism) -> StableCube {
        let bound = self.support as i64;
        let mut t = vec![0; self.dim];
        StableCube::from_fn(m.source_dim(), self.support, |s| {
            for (x, c) in t.iter_mut().zip(m.coords()) {
                *x = c.eval_int(s, bound);
            }
            self.value(&t)
        })
    }

    /// `c ∂_{i,ε}`, with `i` 1-based.
    pub fn face(&self, i: usize, eps: bool) -> Result<StableCube> {
        if self.dim == 0 {
            return Err(Error::IndexOutOfRange("a 0-cube has no faces".into()));
        }
        self.act(&CubeMorphism::generator(CubeGenerator::Face { i, eps }, self.dim - 1)?)
    }

    pub fn to_json(&self, x: &Graph) -> Value {
        let mut values = Map::new();
        for (idx, t) in self.shape().points().enumerate() {
            let key = t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            values.insert(key, json!(x.label(self.values[idx])));
        }
        json!({"dim": self.dim, "support": self.support, "values": values})
    }

    /// Reads `{"dim": k, "support": M, "values": {"t1,…,tk": vertex}}`.
    pub fn from_json(v: &Value, x: &Graph) -> Result<StableCube> {
        let get = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|n| n as usize)
                .ok_or_else(|| Error::Parse(format!("cube needs an integer \"{k}\"")))
        };
        let (dim, support) = (get("dim")?, get("support")?);
        let obj = v
            .get("values")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("cube needs a \"values\" object".into()))?;
        let shape = BoxShape::new(dim, support);
        let values = shape
            .points()
            .map(|t| {
                let key = t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
                let raw = obj.get(&key).ok_or_else(|| Error::Parse(format!("no value at ({key})")))?;
                let label = match raw {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                x.vertex(&label).ok_or_else(|| Error::Parse(format!("{label} is not a vertex")))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = StableCube::new(dim, support, values)?;
        if !c.is_map_into(x) {
            return Err(Error::Graph("cube values do not form a graph map".into()));
        }
        Ok(c)
    }
}

/// The action of a cube-category morphism on a cube of the nerve.
pub fn nerve_operator(c: &StableCube, m: &CubeMorphism) -> Result<StableCube> {
    c.act(m)
}

/// All cubes of `NX` of dimension `≤ trunc_dim` and support `≤ support_bound`,
/// as a truncated cubical set.
pub struct NerveFragment {
    pub graph: Arc<Graph>,
    pub trunc_dim: usize,
    pub support_bound: usize,
    pub cubes: Vec<Vec<StableCube>>,
    pub presheaf: Arc<FinitePresheaf<Cube>>,
    index: Vec<HashMap<StableCube, Cell>>,
    roots: Vec<Vec<StableCube>>,
}

impl NerveFragment {
    pub fn cell_of(&self, c: &StableCube) -> Option<Cell> {
        self.index.get(c.dim)?.get(c).copied()
    }

    pub fn cube_of(&self, cell: Cell) -> StableCube {
        let root = &self.roots[cell.root_dim as usize][cell.root as usize];
        root.act_unchecked(Cube::epi(cell.dim(), cell.root_dim as usize, cell.epi))
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cubes.iter().map(Vec::len).collect()
    }
}

/// Enumerates graph maps `[−M, M]^k -> X` at `M = support_bound`; each is
/// the extension of exactly one trimmed cube of support `≤ M`.
pub fn nerve_fragment(x: &Arc<Graph>, trunc_dim: usize, support_bound: usize, cell_budget: u64) -> Result<NerveFragment> {
    let mut cubes = Vec::with_capacity(trunc_dim + 1);
    let mut total = 0u64;
    for k in 0..=trunc_dim {
        let shape = BoxShape::new(k, support_bound);
        let mut level = Vec::new();
        let mut over = false;
        hom::hom_search(&shape.graph(), x, None, &hom::HomOptions::default(), None, |m| {
            total += 1;
            if total > cell_budget {
                over = true;
                return std::ops::ControlFlow::Break(());
            }
            level.push(StableCube::new(k, support_bound, m.to_vec()).expect("values fit the box"));
            std::ops::ControlFlow::Continue(())
        })?;
        if over {
            return Err(Error::BudgetExceeded(format!(
                "nerve fragment of dimension {trunc_dim} and support {support_bound} has more than {cell_budget} cubes"
            )));
        }
        cubes.push(level);
    }
    let classified = FinitePresheaf::<Cube>::from_action(trunc_dim, cubes.clone(), |c, m| c.act_unchecked(m))?;
    Ok(NerveFragment {
        graph: x.clone(),
        trunc_dim,
        support_bound,
        cubes,
        presheaf: Arc::new(classified.presheaf),
        index: classified.index,
        roots: classified.roots,
    })
}

/// `Nf` restricted to fragments: postcomposition with `f`.
pub fn nerve_map(f: &GraphMap, nx: &NerveFragment, ny: &NerveFragment) -> Result<PresheafMap<Cube>> {
    if nx.trunc_dim > ny.trunc_dim || nx.support_bound > ny.support_bound {
        return Err(Error::InvalidParameters("the target fragment must be at least as large as the source".into()));
    }
    let assignment = (0..=nx.trunc_dim)
        .map(|j| {
            nx.roots[j]
                .iter()
                .map(|c| {
                    ny.cell_of(&c.map_by(f))
                        .ok_or_else(|| Error::Internal("image cube missing from the target fragment".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PresheafMap::new(nx.presheaf.clone(), ny.presheaf.clone(), assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;

    fn step01() -> StableCube {
        // the 1-cube of N(I₁) with value 0 up to t = 0 and 1 from t = 1
        StableCube::new(1, 1, vec![0, 0, 1]).unwrap()
    }

    #[test]
    fn trimming() {
        let c = StableCube::new(1, 3, vec![0, 0, 0, 0, 1, 1, 1]).unwrap();
        assert_eq!((c.support(), c.values()), (1, &[0, 0, 1][..]));
        let k = StableCube::new(2, 2, vec![4; 25]).unwrap();
        assert_eq!(k, StableCube::constant(2, 4));
        // one non-constant outer layer is enough to keep the support
        let e = StableCube::new(1, 1, vec![0, 1, 1]).unwrap();
        assert_eq!(e.support(), 1);
    }

    #[test]
    fn faces_of_a_step() {
        let c = step01();
        assert_eq!(c.face(1, true).unwrap(), StableCube::constant(0, 1));
        assert_eq!(c.face(1, false).unwrap(), StableCube::constant(0, 0));
        assert_eq!(c.act(&CubeMorphism::identity(1)).unwrap(), c);
        let k = StableCube::constant(2, 3);
        for m in Cube::all_morphisms(1, 2) {
            assert_eq!(k.act(&m).unwrap(), StableCube::constant(1, 3));
        }
    }

    #[test]
    fn face_and_degeneracy_formulas() {
        let x = Arc::new(cycle(6).unwrap());
        let frag = nerve_fragment(&x, 2, 1, 100_000).unwrap();
        for c in &frag.cubes[2] {
            let m = c.support() as i64;
            let s = CubeMorphism::generator(CubeGenerator::Degeneracy { i: 2 }, 3).unwrap();
            let g0 = CubeMorphism::generator(CubeGenerator::Connection { i: 1, eps: false }, 3).unwrap();
            let g1 = CubeMorphism::generator(CubeGenerator::Connection { i: 1, eps: true }, 3).unwrap();
            let (cs, c0, c1) = (c.act(&s).unwrap(), c.act(&g0).unwrap(), c.act(&g1).unwrap());
            let f1 = c.face(1, true).unwrap();
            let f2 = c.face(2, false).unwrap();
            for a in -3..=3 {
                assert_eq!(f1.value(&[a]), c.value(&[m, a]));
                assert_eq!(f2.value(&[a]), c.value(&[a, -m]));
                for b in -3..=3 {
                    for d in -3..=3 {
                        assert_eq!(cs.value(&[a, b, d]), c.value(&[a, d]));
                        assert_eq!(c0.value(&[a, b, d]), c.value(&[a.max(b), d]));
                        assert_eq!(c1.value(&[a, b, d]), c.value(&[a.min(b), d]));
                    }
                }
            }
        }
    }

    #[test]
    fn fragment_counts() {
        let pt = Arc::new(point());
        let f = nerve_fragment(&pt, 3, 2, 1000).unwrap();
        assert_eq!(f.counts(), vec![1, 1, 1, 1]);
        let c5 = Arc::new(cycle(5).unwrap());
        assert_eq!(nerve_fragment(&c5, 0, 2, 1000).unwrap().counts(), vec![5]);
        // N(I₁) at support ≤ 1: all 8 functions {−1,0,1} -> {0,1}
        let i1 = Arc::new(interval(1));
        let f = nerve_fragment(&i1, 1, 1, 1000).unwrap();
        assert_eq!(f.counts(), vec![2, 8]);
        let exactly_one = f.cubes[1].iter().filter(|c| c.support() == 1).count();
        assert_eq!(exactly_one, 6);
        assert_eq!(f.presheaf.nondegenerate_counts(), vec![2, 6]);
        assert!(nerve_fragment(&c5, 3, 2, 1000).is_err());
    }

    #[test]
    fn fragment_round_trip_and_relations() {
        let x = Arc::new(interval(2));
        let frag = nerve_fragment(&x, 2, 1, 100_000).unwrap();
        frag.presheaf.check_relations(2).unwrap();
        for (k, level) in frag.cubes.iter().enumerate() {
            for c in level {
                let cell = frag.cell_of(c).unwrap();
                assert_eq!(cell.dim(), k);
                assert_eq!(&frag.cube_of(cell), c);
            }
        }
    }

    #[test]
    fn cubical_identities_on_cubes() {
        let x = Arc::new(cycle(4).unwrap());
        let frag = nerve_fragment(&x, 2, 1, 100_000).unwrap();
        let ms: Vec<(CubeMorphism, CubeMorphism)> = {
            let mut v = Vec::new();
            for a in 0..=2 {
                for b in 0..=2 {
                    for g in Cube::all_morphisms(b, 2) {
                        for h in Cube::all_morphisms(a, b) {
                            v.push((g.clone(), h));
                        }
                    }
                }
            }
            v
        };
        for c in &frag.cubes[2] {
            for (g, h) in ms.iter().step_by(7) {
                let lhs = c.act(g).unwrap().act(h).unwrap();
                let rhs = c.act(&g.compose(h).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                assert!(lhs.support() <= c.support());
            }
        }
    }

    #[test]
    fn functorial_on_maps() {
        let c6 = Arc::new(cycle(6).unwrap());
        let c3 = Arc::new(cycle(3).unwrap());
        let i1 = Arc::new(interval(1));
        let f = GraphMap::new(c6.clone(), c3.clone(), vec![0, 1, 2, 0, 1, 2]).unwrap();
        let g = GraphMap::to_point(c3.clone()).then(&GraphMap::constant(Arc::new(point()), i1.clone(), 1).unwrap()).unwrap();
        let (n6, n3, ni) = (
            nerve_fragment(&c6, 2, 1, 1_000_000).unwrap(),
            nerve_fragment(&c3, 2, 1, 1_000_000).unwrap(),
            nerve_fragment(&i1, 2, 1, 1_000_000).unwrap(),
        );
        let nf = nerve_map(&f, &n6, &n3).unwrap();
        let ng = nerve_map(&g, &n3, &ni).unwrap();
        let ngf = nerve_map(&f.then(&g).unwrap(), &n6, &ni).unwrap();
        assert!(nf.then(&ng).unwrap().same_as(&ngf));
        let id = nerve_map(&GraphMap::identity(c6.clone()), &n6, &n6).unwrap();
        assert!(id.same_as(&PresheafMap::identity(n6.presheaf.clone())));
    }

    #[test]
    fn json_round_trip() {
        let x = interval(1);
        let c = step01();
        assert_eq!(StableCube::from_json(&c.to_json(&x), &x).unwrap(), c);
        let bad = json!({"dim": 1, "support": 1, "values": {"-1": 0, "0": 0}});
        assert!(StableCube::from_json(&bad, &x).is_err());
    }
}
