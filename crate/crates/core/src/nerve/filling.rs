//! Open-box lifting problems for the nerve of a graph map and their
//! fillers at bounded support.
//!
//! A problem at support `M` is the data of the square on the box
//! `[−M, M]^k`: values in `X` on every face except the omitted one, and
//! values in `Y` on the whole box (or on its boundary, for the members
//! `⊓^k ↪ ∂□^k`). A filler at support `M' ≥ M` is a grid map on
//! `[−M', M']^k` (or on the missing face) agreeing with the clamped data.
//! Any filler at `M'` clamps to one at `M' + 1`, so existence is monotone
//! in `M'`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use serde_json::{json, Value};

use super::{insert_coord, BoxShape, StableCube};
use crate::error::{Error, Result};
use crate::graph::hom::{find_hom, iter_bits, singleton, Bits, HomOptions};
use crate::graph::{Graph, GraphMap};
use crate::lifting::Member;
use crate::presheaf::standard::StandardKind;
use crate::site::{CubeGenerator, CubeMorphism};

/// `⊓^dim_{i,ε} ↪ □^dim`, or `⊓^dim_{i,ε} ↪ ∂□^dim` when `boundary`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoxSpec {
    pub dim: usize,
    pub i: usize,
    pub eps: bool,
    pub boundary: bool,
}

impl BoxSpec {
    pub fn open_box(dim: usize, i: usize, eps: bool) -> Result<BoxSpec> {
        if dim == 0 || i == 0 || i > dim {
            return Err(Error::IndexOutOfRange(format!("open box ⊓^{dim}_{{{i},{}}}", eps as u8)));
        }
        Ok(BoxSpec {
            dim,
            i,
            eps,
            boundary: false,
        })
    }

    pub fn from_member(m: &Member) -> Result<BoxSpec> {
        let StandardKind::OpenBox { i, eps } = m.domain else {
            return Err(Error::SiteMismatch(format!("{} is not an open-box inclusion", m.label())));
        };
        let boundary = match m.codomain {
            StandardKind::Cube => false,
            StandardKind::CubeBoundary => true,
            _ => return Err(Error::SiteMismatch(format!("{} is not cubical", m.label()))),
        };
        Ok(BoxSpec {
            dim: m.k,
            i,
            eps,
            boundary,
        })
    }

    pub fn label(&self) -> String {
        let target = if self.boundary { "∂□" } else { "□" };
        format!("⊓^{}_{{{},{}}} ↪ {target}^{}", self.dim, self.i, self.eps as u8, self.dim)
    }

    /// Face index `2(j−1)+ε` of the omitted face.
    pub fn omitted(&self) -> usize {
        2 * (self.i - 1) + self.eps as usize
    }

    /// Whether `t` lies on a face other than the omitted one.
    pub fn constrained(&self, shape: &BoxShape, t: &[i64]) -> bool {
        (0..self.dim).any(|j| {
            [false, true]
                .into_iter()
                .any(|e| (j + 1, e) != (self.i, self.eps) && shape.on_face(t, j, e))
        })
    }

    /// Dimension of a filler: the whole cube, or the missing face.
    pub fn filler_dim(&self) -> usize {
        if self.boundary {
            self.dim - 1
        } else {
            self.dim
        }
    }

    /// Indices into `[−M, M]^dim` of the points carrying data in `X`.
    pub fn rim_points(&self, support: usize) -> Vec<usize> {
        let shape = BoxShape::new(self.dim, support);
        shape.points().enumerate().filter(|(_, t)| self.constrained(&shape, t)).map(|(i, _)| i).collect()
    }

    /// Indices of the points carrying data in `Y`.
    pub fn base_points(&self, support: usize) -> Vec<usize> {
        let shape = BoxShape::new(self.dim, support);
        if self.boundary {
            shape.points().enumerate().filter(|(_, t)| shape.on_boundary(t)).map(|(i, _)| i).collect()
        } else {
            (0..shape.len()).collect()
        }
    }
}

fn face_morphism(k: usize, a: usize) -> CubeMorphism {
    CubeMorphism::generator(
        CubeGenerator::Face {
            i: a / 2 + 1,
            eps: a % 2 == 1,
        },
        k - 1,
    )
    .expect("face index in range")
}

/// Whether `(k−1)`-cubes indexed by face `2(j−1)+ε` agree on every
/// pairwise intersection, i.e. form a map `∂□^k -> NX`. `None` entries
/// are skipped.
pub fn faces_compatible(k: usize, faces: &[Option<StableCube>]) -> bool {
    if k < 2 {
        return true;
    }
    let sub: Vec<CubeMorphism> = (0..2 * (k - 1)).map(|b| face_morphism(k - 1, b)).collect();
    for a in 0..2 * k {
        for b in a + 1..2 * k {
            let (Some(fa), Some(fb)) = (&faces[a], &faces[b]) else { continue };
            let (da, db) = (face_morphism(k, a), face_morphism(k, b));
            for u in &sub {
                for v in &sub {
                    if da.compose(u).unwrap() == db.compose(v).unwrap() && fa.act(u).unwrap() != fb.act(v).unwrap() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The bottom of a square: a cube of `NY`, or a map `∂□^k -> NY` given by
/// its faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bottom {
    Cube(StableCube),
    Faces(Vec<StableCube>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBoxProblem {
    pub spec: BoxSpec,
    pub support: usize,
    /// Values in `X` on the constrained faces of `[−M, M]^k`.
    pub top: Vec<Option<u32>>,
    /// Values in `Y` on the box, or on its boundary.
    pub bottom: Vec<Option<u32>>,
}

impl OpenBoxProblem {
    /// Assembles a problem from cubes; `faces` is indexed by `2(j−1)+ε`
    /// and the omitted entry is ignored.
    pub fn from_cubes(spec: BoxSpec, faces: &[Option<StableCube>], bottom: &Bottom) -> Result<OpenBoxProblem> {
        let k = spec.dim;
        if faces.len() != 2 * k {
            return Err(Error::MalformedSquare(format!("{} faces given for a {k}-box", faces.len())));
        }
        let mut support = 0;
        for (a, f) in faces.iter().enumerate() {
            if a == spec.omitted() {
                continue;
            }
            let f = f.as_ref().ok_or_else(|| Error::MalformedSquare(format!("face {a} is missing")))?;
            if f.dim() + 1 != k {
                return Err(Error::MalformedSquare(format!("face {a} has dimension {}", f.dim())));
            }
            support = support.max(f.support());
        }
        match (bottom, spec.boundary) {
            (Bottom::Cube(c), false) if c.dim() == k => support = support.max(c.support()),
            (Bottom::Faces(fs), true) if fs.len() == 2 * k && fs.iter().all(|f| f.dim() + 1 == k) => {
                support = fs.iter().fold(support, |m, f| m.max(f.support()));
            }
            _ => return Err(Error::MalformedSquare(format!("bottom does not match {}", spec.label()))),
        }
        let shape = BoxShape::new(k, support);
        let m = support as i64;
        let mut top = vec![None; shape.len()];
        let mut bot = vec![None; shape.len()];
        let paint = |slot: &mut Option<u32>, v: u32| -> Result<()> {
            match *slot {
                Some(w) if w != v => Err(Error::MalformedSquare("faces disagree where they meet".into())),
                _ => {
                    *slot = Some(v);
                    Ok(())
                }
            }
        };
        for (idx, t) in shape.points().enumerate() {
            for j in 0..k {
                for e in [false, true] {
                    if !shape.on_face(&t, j, e) {
                        continue;
                    }
                    let mut s = t.clone();
                    s.remove(j);
                    let a = 2 * j + e as usize;
                    if a != spec.omitted() {
                        paint(&mut top[idx], faces[a].as_ref().unwrap().value(&s))?;
                    }
                    if let Bottom::Faces(fs) = bottom {
                        paint(&mut bot[idx], fs[a].value(&s))?;
                    }
                }
            }
            if let Bottom::Cube(c) = bottom {
                bot[idx] = Some(c.value(&t));
            }
        }
        debug_assert!(m >= 0);
        Ok(OpenBoxProblem {
            spec,
            support,
            top,
            bottom: bot,
        })
    }

    fn shape(&self) -> BoxShape {
        BoxShape::new(self.spec.dim, self.support)
    }

    /// The face `2(j−1)+ε` of the top data.
    pub fn top_face(&self, a: usize) -> Option<StableCube> {
        if a == self.spec.omitted() {
            return None;
        }
        let shape = self.shape();
        let m = self.support as i64;
        let (j, e) = (a / 2, a % 2 == 1);
        Some(StableCube::from_fn(self.spec.dim - 1, self.support, |s| {
            self.top[shape.index(&insert_coord(s, j, if e { m } else { -m }))].expect("face point carries data")
        }))
    }

    pub fn bottom_face(&self, a: usize) -> StableCube {
        let shape = self.shape();
        let m = self.support as i64;
        let (j, e) = (a / 2, a % 2 == 1);
        StableCube::from_fn(self.spec.dim - 1, self.support, |s| {
            self.bottom[shape.index(&insert_coord(s, j, if e { m } else { -m }))].expect("boundary point carries data")
        })
    }

    pub fn bottom_cube(&self) -> Option<StableCube> {
        if self.spec.boundary {
            return None;
        }
        Some(StableCube::from_fn(self.spec.dim, self.support, |t| {
            self.bottom[self.shape().index(t)].unwrap()
        }))
    }

    /// Checks that the data form a commuting square for `f : X -> Y`.
    pub fn validate(&self, f: &GraphMap) -> Result<()> {
        let shape = self.shape();
        let g = shape.graph();
        let (x, y) = (f.source(), f.target());
        for (idx, t) in shape.points().enumerate() {
            let rim = self.spec.constrained(&shape, &t);
            if rim != self.top[idx].is_some() {
                return Err(Error::MalformedSquare("top data must cover exactly the open box".into()));
            }
            let based = !self.spec.boundary || shape.on_boundary(&t);
            if based != self.bottom[idx].is_some() {
                return Err(Error::MalformedSquare("bottom data has the wrong extent".into()));
            }
            if let (Some(a), Some(b)) = (self.top[idx], self.bottom[idx]) {
                if a as usize >= x.n() || f.apply(a) != b {
                    return Err(Error::MalformedSquare("square does not commute".into()));
                }
            }
        }
        for (a, b) in g.edges() {
            let (a, b) = (a as usize, b as usize);
            if let (Some(u), Some(v)) = (self.top[a], self.top[b]) {
                if !x.adjacent(u, v) {
                    return Err(Error::MalformedSquare("top data is not a graph map".into()));
                }
            }
            if let (Some(u), Some(v)) = (self.bottom[a], self.bottom[b]) {
                if v as usize >= y.n() || u as usize >= y.n() || !y.adjacent(u, v) {
                    return Err(Error::MalformedSquare("bottom data is not a graph map".into()));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, x: &Graph, y: &Graph) -> Value {
        let faces: Vec<Value> = (0..2 * self.spec.dim)
            .map(|a| self.top_face(a).map(|c| c.to_json(x)).unwrap_or(Value::Null))
            .collect();
        let bottom = match self.bottom_cube() {
            Some(c) => c.to_json(y),
            None => Value::Array((0..2 * self.spec.dim).map(|a| self.bottom_face(a).to_json(y)).collect()),
        };
        json!({"member": self.spec.label(), "support": self.support, "faces": faces, "bottom": bottom})
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Filler {
    Found(StableCube),
    /// `certain` means the data already rule out a filler at every support.
    NotFound { certain: bool },
}

fn preimages(f: &GraphMap) -> Vec<Bits> {
    let mut pre = vec![0; f.target().n()];
    for x in f.source().vertices() {
        pre[f.apply(x) as usize] |= singleton(x);
    }
    pre
}

/// Searches for a filler at supports `problem.support ..= cap`, smallest
/// first. A search that runs out of budget moves on to the next support.
/// If none succeeds, the universal filler of the open box is tried before
/// giving up: backtracking alone cannot see winding, and drowns on some
/// problems that the retraction fills at once.
pub fn fill(problem: &OpenBoxProblem, f: &GraphMap, cap: usize, node_budget: Option<u64>) -> Result<Filler> {
    match fill_search(problem, f, cap, node_budget) {
        Err(Error::BudgetExceeded(msg)) => match universal_candidate(problem, f, cap, node_budget) {
            Some(c) => Ok(Filler::Found(c)),
            None => Err(Error::BudgetExceeded(msg)),
        },
        done => done,
    }
}

fn fill_search(problem: &OpenBoxProblem, f: &GraphMap, cap: usize, node_budget: Option<u64>) -> Result<Filler> {
    let mut exceeded = None;
    for mp in problem.support..=cap.max(problem.support) {
        match fill_at(problem, f, mp, node_budget) {
            Ok(Filler::NotFound { certain: false }) => continue,
            Err(Error::BudgetExceeded(msg)) => exceeded = Some(msg),
            done => return done,
        }
    }
    match exceeded {
        Some(msg) => Err(Error::BudgetExceeded(msg)),
        None => Ok(Filler::NotFound { certain: false }),
    }
}

const UNIVERSAL_BUDGET: u64 = 2_000_000;

/// The universal filler of the open box, `φ ∘ r`, when it commutes with
/// the bottom; otherwise a search whose domains keep only the values
/// nearest to it.
fn universal_candidate(problem: &OpenBoxProblem, f: &GraphMap, cap: usize, node_budget: Option<u64>) -> Option<StableCube> {
    type Cache = Mutex<HashMap<(BoxSpec, usize), Option<Arc<UniversalFiller>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    if problem.spec.boundary {
        return None;
    }
    let key = (problem.spec, problem.support);
    let u = {
        let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
        cache
            .entry(key)
            .or_insert_with(|| {
                let ucap = if problem.spec.dim == 1 { problem.support } else { 3 * problem.support };
                universal_box_filler(problem.spec, problem.support, ucap, Some(UNIVERSAL_BUDGET))
                    .ok()
                    .flatten()
                    .map(Arc::new)
            })
            .clone()?
    };
    if u.filler_support() > cap {
        return None;
    }
    let c = u.apply(problem).ok()?;
    if check_filler(problem, f, &c) {
        return Some(c);
    }
    let x = f.source();
    let mut domains = filler_domains(problem, f, c.support())?;
    let mut dist: HashMap<u32, Vec<usize>> = HashMap::new();
    for (d, &v) in domains.iter_mut().zip(c.values()) {
        let from = dist.entry(v).or_insert_with(|| distances(x, v));
        let best = iter_bits(*d).map(|w| from[w as usize]).min()?;
        *d = iter_bits(*d).filter(|&w| from[w as usize] == best).fold(0, |m, w| m | singleton(w));
    }
    let opts = HomOptions { node_budget };
    let sol = find_hom(&c.shape().graph(), x, Some(domains), &opts, None).ok()??;
    let guided = StableCube::new(c.dim(), c.support(), sol).ok()?;
    check_filler(problem, f, &guided).then_some(guided)
}

fn distances(x: &Graph, from: u32) -> Vec<usize> {
    let mut d = vec![usize::MAX; x.n()];
    d[from as usize] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in x.neighbors(v) {
            if d[w as usize] == usize::MAX {
                d[w as usize] = d[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    d
}

/// A filler of support exactly `mp ≥ problem.support`, if one exists.
pub fn fill_at(problem: &OpenBoxProblem, f: &GraphMap, mp: usize, node_budget: Option<u64>) -> Result<Filler> {
    if mp < problem.support {
        return Err(Error::InvalidParameters("filler support below the problem's".into()));
    }
    let Some(domains) = filler_domains(problem, f, mp) else {
        return Ok(Filler::NotFound { certain: true });
    };
    let dim = problem.spec.filler_dim();
    let opts = HomOptions { node_budget };
    match find_hom(&BoxShape::new(dim, mp).graph(), f.source(), Some(domains), &opts, None)? {
        Some(sol) => Ok(Filler::Found(StableCube::new(dim, mp, sol)?)),
        None => Ok(Filler::NotFound { certain: false }),
    }
}

/// Admissible values at each point of a filler of support `mp`; `None`
/// when some point has none.
fn filler_domains(problem: &OpenBoxProblem, f: &GraphMap, mp: usize) -> Option<Vec<Bits>> {
    let spec = problem.spec;
    let pre = preimages(f);
    let small = problem.shape();
    let shape = BoxShape::new(spec.filler_dim(), mp);
    let big = BoxShape::new(spec.dim, mp);
    let side = if spec.eps { mp as i64 } else { -(mp as i64) };
    let mut domains = Vec::with_capacity(shape.len());
    for s in shape.points() {
        let (t, fixed) = if spec.boundary {
            let t = insert_coord(&s, spec.i - 1, side);
            (t, shape.on_boundary(&s))
        } else {
            let fixed = spec.constrained(&big, &s);
            (s, fixed)
        };
        let c = small.index(&t);
        let mut d = pre[problem.bottom[c].expect("base data") as usize];
        if fixed {
            d &= singleton(problem.top[c].expect("rim data"));
        }
        if d == 0 {
            return None;
        }
        domains.push(d);
    }
    Some(domains)
}

/// Checks a filler against the problem with the nerve's face operators.
pub fn check_filler(problem: &OpenBoxProblem, f: &GraphMap, c: &StableCube) -> bool {
    let spec = problem.spec;
    if c.dim() != spec.filler_dim() || !c.is_map_into(f.source()) {
        return false;
    }
    if spec.boundary {
        let mut faces: Vec<Option<StableCube>> = (0..2 * spec.dim).map(|a| problem.top_face(a)).collect();
        faces[spec.omitted()] = Some(c.clone());
        faces_compatible(spec.dim, &faces) && c.map_by(f) == problem.bottom_face(spec.omitted())
    } else {
        (0..2 * spec.dim)
            .filter(|&a| a != spec.omitted())
            .all(|a| c.face(a / 2 + 1, a % 2 == 1).ok() == problem.top_face(a))
            && Some(c.map_by(f)) == problem.bottom_cube()
    }
}

/// A filler for the identity of the open box itself, as a map from a larger
/// box onto the rim graph. Composing it with the data of any problem of
/// the same shape against `X -> I₀` fills that problem.
pub struct UniversalFiller {
    pub spec: BoxSpec,
    pub support: usize,
    pub rim: Arc<Graph>,
    rim_points: Vec<usize>,
    /// Values are vertices of `rim`.
    pub retraction: StableCube,
}

impl UniversalFiller {
    pub fn filler_support(&self) -> usize {
        self.retraction.support().max(self.support)
    }

    /// `φ ∘ r` for a problem of the same shape and support.
    pub fn apply(&self, problem: &OpenBoxProblem) -> Result<StableCube> {
        if problem.spec != self.spec || problem.support != self.support {
            return Err(Error::InvalidParameters("problem shape differs from the universal one".into()));
        }
        let vals: Vec<u32> = self
            .retraction
            .values()
            .iter()
            .map(|&v| problem.top[self.rim_points[v as usize]].expect("rim data"))
            .collect();
        StableCube::new(self.spec.dim, self.retraction.support(), vals)
    }
}

/// Fills the open box `⊓^k_{i,ε}` at support `M` with its own rim as the
/// target, searching supports up to `cap`.
pub fn universal_box_filler(spec: BoxSpec, support: usize, cap: usize, node_budget: Option<u64>) -> Result<Option<UniversalFiller>> {
    if spec.boundary {
        return Err(Error::InvalidParameters("universal fillers are for open boxes in cubes".into()));
    }
    let shape = BoxShape::new(spec.dim, support);
    let rim_points = spec.rim_points(support);
    let rim = Arc::new(shape.graph().induced(&rim_points.iter().map(|&i| i as u32).collect::<Vec<_>>()));
    let mut top = vec![None; shape.len()];
    for (v, &p) in rim_points.iter().enumerate() {
        top[p] = Some(v as u32);
    }
    let problem = OpenBoxProblem {
        spec,
        support,
        top,
        bottom: vec![Some(0); shape.len()],
    };
    let to_pt = GraphMap::to_point(rim.clone());
    match fill_search(&problem, &to_pt, cap, node_budget)? {
        Filler::Found(retraction) => Ok(Some(UniversalFiller {
            spec,
            support,
            rim,
            rim_points,
            retraction,
        })),
        Filler::NotFound { .. } => Ok(None),
    }
}
