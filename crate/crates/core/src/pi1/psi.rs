//! The comparison `Ψ : Π₁(X ×_Z Y) -> Π₁X ×_{Π₁Z} Π₁Y` and bounded
//! isofibration checks for `Π₁f`.
//!
//! Preimages under `Ψ` are built by the lifting surgeries: a lift of `g∘τ`
//! followed by a correction read off a filled square (fullness), and a
//! filled missing face of a 3-box (faithfulness). Every sample reports
//! either a verified pass or why it stopped.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::presentation::{a1_presentation, groupoid_presentation, AbelianGroup};
use super::{cube_of_layers, cube_of_window, path_homotopic_bounded, window_homotopy, DiscretePath, PathHomotopy};
use crate::error::{Error, Result};
use crate::graph::{pi0, pullback, shortest_path, Graph, GraphMap, Pullback};
use crate::nerve::{check_filler, fill, Bottom, BoxSpec, Filler, OpenBoxProblem, StableCube};

#[derive(Clone, Debug, Serialize)]
pub struct PsiBounds {
    /// Samples per surgery.
    pub samples: usize,
    /// Longest random path drawn.
    pub max_path_len: usize,
    /// Steps of each bounded homotopy search.
    pub max_steps: usize,
    /// Fillers are searched up to the problem's support plus this.
    pub slack: usize,
    pub node_budget: Option<u64>,
    pub seed: u64,
    /// Components of the pullback whose groups are compared.
    pub max_components: usize,
}

impl Default for PsiBounds {
    fn default() -> Self {
        PsiBounds {
            samples: 8,
            max_path_len: 4,
            max_steps: 12,
            slack: 4,
            node_budget: Some(200_000),
            seed: 0,
            max_components: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Sample {
    Pass { detail: String },
    Inconclusive { reason: String },
}

impl Sample {
    pub fn is_pass(&self) -> bool {
        matches!(self, Sample::Pass { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Pi0Comparison {
    pub pullback_components: usize,
    /// Whether the components of the target groupoid pullback could be
    /// computed exactly (every component of `Z` is simply connected).
    pub exact: bool,
    pub groupoid_components: Option<usize>,
    pub bijective: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupComparison {
    pub base: String,
    pub pullback: String,
    pub product: Option<String>,
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiReport {
    pub objects: usize,
    pub pi0: Pi0Comparison,
    pub groups: Vec<GroupComparison>,
    pub fullness: Vec<Sample>,
    pub faithfulness: Vec<Sample>,
}

impl PsiReport {
    /// No check came out negative.
    pub fn ok(&self) -> bool {
        self.pi0.bijective != Some(false) && self.groups.iter().all(|g| g.agree != Some(false))
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable report");
        v["ok"] = json!(self.ok());
        v
    }
}

fn bookkeeping(msg: impl Into<String>) -> Error {
    Error::Internal(format!("Ψ surgery bookkeeping: {}", msg.into()))
}

struct Ctx<'a> {
    f: &'a GraphMap,
    g: &'a GraphMap,
    p: &'a Pullback,
    index: HashMap<(u32, u32), u32>,
    bounds: &'a PsiBounds,
}

impl Ctx<'_> {
    fn x(&self) -> &Graph {
        self.f.source()
    }

    fn pair(&self, a: u32, b: u32) -> Result<u32> {
        self.index
            .get(&(a, b))
            .copied()
            .ok_or_else(|| bookkeeping(format!("({}, {}) is not in the pullback", self.x().label(a), self.g.source().label(b))))
    }

    fn fill(&self, problem: &OpenBoxProblem) -> Result<Option<StableCube>> {
        match fill(problem, self.f, problem.support + self.bounds.slack, self.bounds.node_budget) {
            Ok(Filler::Found(c)) => {
                if !check_filler(problem, self.f, &c) {
                    return Err(bookkeeping(format!("filler of {} fails its check", problem.spec.label())));
                }
                Ok(Some(c))
            }
            Ok(Filler::NotFound { .. }) | Err(Error::BudgetExceeded(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Fullness: given `η : x ⇝ x'` and `τ : y ⇝ y'` with `f∘η ≃ g∘τ`
    /// through `layers`, builds `(η', τ)` in the pullback and checks
    /// `η' ≃ η`.
    fn fullness(&self, eta: &DiscretePath, tau: &DiscretePath, w: usize, layers: &[Vec<u32>]) -> Result<Sample> {
        let (f, g) = (self.f, self.g);
        let x = eta.start();
        let m = (w.div_ceil(2)).max((layers.len() - 1).div_ceil(2)).max(1);
        let h = cube_of_layers(layers, m)?;
        let eta_c = cube_of_window(&eta.window(w)?, m)?;
        let tau_c = cube_of_window(&tau.window(w)?, m)?;
        if h.face(2, false)? != eta_c.map_by(f) || h.face(2, true)? != tau_c.map_by(g) {
            return Err(bookkeeping("homotopy square has the wrong ends"));
        }
        // lift g∘τ from x
        let lift = OpenBoxProblem::from_cubes(
            BoxSpec::open_box(1, 1, true)?,
            &[Some(StableCube::constant(0, x)), None],
            &Bottom::Cube(h.face(2, true)?),
        )?;
        let Some(tau_l) = self.fill(&lift)? else {
            return Ok(Sample::Inconclusive { reason: "no lift of g∘τ within the support bound".into() });
        };
        // fill the square [x, −, η, τ̃] over H
        let square = OpenBoxProblem::from_cubes(
            BoxSpec::open_box(2, 1, true)?,
            &[Some(StableCube::constant(1, x)), None, Some(eta_c), Some(tau_l.clone())],
            &Bottom::Cube(h),
        )
        .map_err(|e| bookkeeping(e.to_string()))?;
        let Some(h_l) = self.fill(&square)? else {
            return Ok(Sample::Inconclusive { reason: "no filler of the homotopy square within the support bound".into() });
        };
        let alpha = DiscretePath::from_cube(f.source().clone(), &h_l.face(1, true)?)?;
        let s = tau_l.support().max(m) as i64;
        let mut word = Vec::new();
        for t in -s..=s {
            word.push(self.pair(tau_l.value(&[t]), tau_c.value(&[t]))?);
        }
        for &v in &alpha.inverse().word()[1..] {
            word.push(self.pair(v, tau.end())?);
        }
        let pre = DiscretePath::new(self.p.graph.clone(), word).map_err(|e| bookkeeping(e.to_string()))?;
        let eta2 = pre.map_by(&self.p.left);
        if pre.map_by(&self.p.right) != *tau || eta2.start() != x || eta2.end() != eta.end() {
            return Err(bookkeeping("preimage has the wrong projections"));
        }
        let win = eta.len().max(eta2.len()) + 2;
        Ok(match path_homotopic_bounded(&eta2, eta, win, self.bounds.max_steps)? {
            PathHomotopy::Yes(l) => Sample::Pass {
                detail: format!("η' = {eta2:?} ≃ η = {eta:?} in {} steps", l.len() - 1),
            },
            _ => Sample::Inconclusive {
                reason: format!("η' = {eta2:?} ≃ η = {eta:?} not certified within a window of {win}"),
            },
        })
    }

    /// Faithfulness: two pullback paths `p, p'` whose projections are
    /// homotopic through `hx` and `hy`; fills the missing face of a 3-box
    /// to get a homotopy `p ≃ p'` in the pullback.
    fn faithfulness(&self, pw: &[u32], qw: &[u32], hx: &[Vec<u32>], hy: &[Vec<u32>]) -> Result<Sample> {
        let (f, g, p) = (self.f, self.g, self.p);
        let w = pw.len() - 1;
        let m = w.div_ceil(2).max((hx.len() - 1).div_ceil(2)).max((hy.len() - 1).div_ceil(2)).max(1);
        let proj = |win: &[u32], leg: &GraphMap| -> Vec<u32> { win.iter().map(|&v| leg.apply(v)).collect() };
        let eta = cube_of_window(&proj(pw, &p.left), m)?;
        let eta2 = cube_of_window(&proj(qw, &p.left), m)?;
        let hc = cube_of_layers(hx, m)?;
        let gc = cube_of_layers(hy, m)?;
        let (x0, x1) = (p.pairs[pw[0] as usize].0, p.pairs[pw[w] as usize].0);
        let along = |c: &StableCube| StableCube::from_fn(2, m, |s| c.value(&[s[0]]));
        let top = vec![
            Some(StableCube::constant(2, x0)),
            Some(StableCube::constant(2, x1)),
            Some(along(&eta)),
            Some(along(&eta2)),
            Some(hc.clone()),
            None,
        ];
        let bottom = vec![
            StableCube::constant(2, f.apply(x0)),
            StableCube::constant(2, f.apply(x1)),
            along(&eta.map_by(f)),
            along(&eta2.map_by(f)),
            hc.map_by(f),
            gc.map_by(g),
        ];
        let spec = BoxSpec {
            dim: 3,
            i: 3,
            eps: true,
            boundary: true,
        };
        let problem = OpenBoxProblem::from_cubes(spec, &top, &Bottom::Faces(bottom)).map_err(|e| bookkeeping(e.to_string()))?;
        problem.validate(f).map_err(|e| bookkeeping(e.to_string()))?;
        let Some(h2) = self.fill(&problem)? else {
            return Ok(Sample::Inconclusive { reason: "no filler of the missing face within the support bound".into() });
        };
        // (H', G) is a homotopy in the pullback
        let s = h2.support().max(m) as i64;
        let mut layers: Vec<Vec<u32>> = Vec::new();
        for t2 in -s..=s {
            let layer = (-s..=s)
                .map(|t1| self.pair(h2.value(&[t1, t2]), gc.value(&[t1, t2])))
                .collect::<Result<Vec<_>>>()?;
            DiscretePath::new(p.graph.clone(), layer.clone()).map_err(|e| bookkeeping(e.to_string()))?;
            if layer[0] != pw[0] || layer[layer.len() - 1] != pw[w] {
                return Err(bookkeeping("homotopy moves an endpoint"));
            }
            if let Some(prev) = layers.last() {
                if !prev.iter().zip(&layer).all(|(&a, &b)| p.graph.adjacent(a, b)) {
                    return Err(bookkeeping("homotopy layers are not adjacent"));
                }
            }
            layers.push(layer);
        }
        let ends = |win: &[u32]| DiscretePath::new(p.graph.clone(), win.to_vec());
        if ends(&layers[0])? != ends(pw)? || ends(layers.last().unwrap())? != ends(qw)? {
            return Err(bookkeeping("homotopy does not join the two paths"));
        }
        Ok(Sample::Pass {
            detail: format!("homotopy of {} layers at support {}", layers.len(), s),
        })
    }
}

/// Compares `Π₁` of the pullback of `f : X -> Z` and `g : Y -> Z` with
/// the pullback of groupoids, within `bounds`.
pub fn psi_comparison(f: &GraphMap, g: &GraphMap, bounds: &PsiBounds) -> Result<PsiReport> {
    let p = pullback(f, g)?;
    let (xg, yg, zg) = (f.source(), g.source(), f.target());
    let index = p.pairs.iter().enumerate().map(|(i, &q)| (q, i as u32)).collect();
    let ctx = Ctx {
        f,
        g,
        p: &p,
        index,
        bounds,
    };
    let (cx, cy, cp) = (pi0(xg), pi0(yg), pi0(&p.graph));
    // Z simply connected where it matters: the groupoid pullback's
    // components are then pairs of components
    let pz = groupoid_presentation(zg);
    let exact = p.pairs.iter().all(|&(a, _)| pz.component(f.apply(a)).simplified().0 == 0);
    let pi0 = if exact {
        let mut classes: HashMap<(usize, usize), usize> = HashMap::new();
        let mut injective = true;
        for (v, &(a, b)) in p.pairs.iter().enumerate() {
            let key = (cx.of[a as usize], cy.of[b as usize]);
            let c = cp.of[v];
            if *classes.entry(key).or_insert(c) != c {
                injective = false;
            }
        }
        Pi0Comparison {
            pullback_components: cp.classes.len(),
            exact,
            groupoid_components: Some(classes.len()),
            bijective: Some(injective && classes.len() == cp.classes.len()),
        }
    } else {
        Pi0Comparison {
            pullback_components: cp.classes.len(),
            exact,
            groupoid_components: None,
            bijective: None,
        }
    };
    let mut groups = Vec::new();
    for class in cp.classes.iter().take(bounds.max_components) {
        let base = class[0];
        let (a, b) = p.pairs[base as usize];
        let pullback = a1_presentation(&p.graph, base)?.abelianization().clone();
        let product = exact.then(|| -> Result<AbelianGroup> {
            Ok(a1_presentation(xg, a)?
                .abelianization()
                .direct_sum(a1_presentation(yg, b)?.abelianization()))
        });
        let product = product.transpose()?;
        groups.push(GroupComparison {
            base: p.graph.label(base).to_string(),
            pullback: pullback.to_string(),
            agree: product.as_ref().map(|q| *q == pullback),
            product: product.map(|q| q.to_string()),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let mut fullness = Vec::new();
    let mut faithfulness = Vec::new();
    if !p.pairs.is_empty() {
        let mut attempts = 0;
        while fullness.len() < bounds.samples && attempts < 20 * bounds.samples {
            attempts += 1;
            let (x, y) = *p.pairs.choose(&mut rng).unwrap();
            let tau = DiscretePath::random_walk(yg.clone(), y, rng.gen_range(0..=bounds.max_path_len), &mut rng);
            let z1 = g.apply(tau.end());
            let ends: Vec<u32> = cx.classes[cx.of[x as usize]].iter().copied().filter(|&v| f.apply(v) == z1).collect();
            let Some(&x1) = ends.choose(&mut rng) else { continue };
            let via = *cx.classes[cx.of[x as usize]].choose(&mut rng).unwrap();
            let leg = |a, b| DiscretePath::new(xg.clone(), shortest_path(xg, a, b).expect("same component"));
            let eta = leg(x, via)?.concat(&leg(via, x1)?)?;
            let w = eta.len().max(tau.len()) + 2;
            let fe: Vec<u32> = eta.window(w)?.iter().map(|&v| f.apply(v)).collect();
            let gt: Vec<u32> = tau.window(w)?.iter().map(|&v| g.apply(v)).collect();
            let PathHomotopy::Yes(layers) = window_homotopy(zg, &fe, &gt, bounds.max_steps)? else { continue };
            fullness.push(ctx.fullness(&eta, &tau, w, &layers)?);
        }
        let mut attempts = 0;
        while faithfulness.len() < bounds.samples && attempts < 20 * bounds.samples {
            attempts += 1;
            let s = rng.gen_range(0..p.graph.n()) as u32;
            let a = DiscretePath::random_walk(p.graph.clone(), s, rng.gen_range(0..=bounds.max_path_len), &mut rng);
            let r = DiscretePath::random_walk(p.graph.clone(), s, rng.gen_range(0..=bounds.max_path_len), &mut rng);
            let back = shortest_path(&p.graph, r.end(), a.end()).expect("same component");
            let b = r.concat(&DiscretePath::new(p.graph.clone(), back)?)?;
            let w = a.len().max(b.len()) + 2;
            let (aw, bw) = (a.window(w)?, b.window(w)?);
            let proj = |win: &[u32], leg: &GraphMap| -> Vec<u32> { win.iter().map(|&v| leg.apply(v)).collect() };
            let PathHomotopy::Yes(hx) = window_homotopy(xg, &proj(&aw, &p.left), &proj(&bw, &p.left), bounds.max_steps)? else {
                continue;
            };
            let PathHomotopy::Yes(hy) = window_homotopy(yg, &proj(&aw, &p.right), &proj(&bw, &p.right), bounds.max_steps)? else {
                continue;
            };
            faithfulness.push(ctx.faithfulness(&aw, &bw, &hx, &hy)?);
        }
    }
    Ok(PsiReport {
        objects: p.pairs.len(),
        pi0,
        groups,
        fullness,
        faithfulness,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IsofibrationBounds {
    /// Longest path out of each `f(x)` tried.
    pub max_len: usize,
    /// Paths per vertex before switching to sampling.
    pub paths_per_vertex: usize,
    pub slack: usize,
    pub node_budget: Option<u64>,
    pub seed: u64,
}

impl Default for IsofibrationBounds {
    fn default() -> Self {
        IsofibrationBounds {
            max_len: 3,
            paths_per_vertex: 200,
            slack: 2,
            node_budget: Some(200_000),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub enum IsofibrationVerdict {
    YesOnTestedRange { lifts: usize, exhaustive: bool },
    /// A path out of `f(vertex)` with no lift from `vertex`; `certain`
    /// when none exists at any support.
    Counterexample { vertex: u32, path: DiscretePath, certain: bool },
    Inconclusive { lifts: usize, reason: String },
}

impl IsofibrationVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsofibrationVerdict::YesOnTestedRange { .. })
    }

    pub fn to_json(&self, f: &GraphMap) -> Value {
        match self {
            IsofibrationVerdict::YesOnTestedRange { lifts, exhaustive } => {
                json!({"result": "yes_on_tested_range", "lifts": lifts, "exhaustive": exhaustive})
            }
            IsofibrationVerdict::Counterexample { vertex, path, certain } => {
                let labels: Vec<&str> = path.word().iter().map(|&v| f.target().label(v)).collect();
                json!({"result": "counterexample", "vertex": f.source().label(*vertex), "path": labels, "certain": certain})
            }
            IsofibrationVerdict::Inconclusive { lifts, reason } => {
                json!({"result": "inconclusive", "lifts": lifts, "reason": reason})
            }
        }
    }
}

fn walks_from(y: &Graph, v: u32, max_len: usize, cap: usize) -> (Vec<Vec<u32>>, bool) {
    fn rec(y: &Graph, cur: &mut Vec<u32>, max_len: usize, cap: usize, out: &mut Vec<Vec<u32>>) -> bool {
        if out.len() >= cap {
            return false;
        }
        out.push(cur.clone());
        if cur.len() > max_len {
            return true;
        }
        let last = *cur.last().unwrap();
        for &w in y.neighbors(last) {
            cur.push(w);
            let done = rec(y, cur, max_len, cap, out);
            cur.pop();
            if !done {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    let complete = rec(y, &mut vec![v], max_len, cap, &mut out);
    (out, complete)
}

/// Lifts paths out of each `f(x)` to paths out of `x` by filling
/// `⊓¹ ↪ □¹`: all non-lazy paths up to `max_len` while there are at most
/// `paths_per_vertex` of them, otherwise that many random ones.
pub fn is_isofibration_bounded(f: &GraphMap, bounds: &IsofibrationBounds) -> Result<IsofibrationVerdict> {
    let (x, y) = (f.source(), f.target());
    let spec = BoxSpec::open_box(1, 1, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let mut lifts = 0;
    let mut exhaustive = true;
    for v in x.vertices() {
        let (mut walks, complete) = walks_from(y, f.apply(v), bounds.max_len, bounds.paths_per_vertex);
        if !complete {
            exhaustive = false;
            walks = (0..bounds.paths_per_vertex)
                .map(|_| {
                    let steps = rng.gen_range(0..=bounds.max_len);
                    DiscretePath::random_walk(y.clone(), f.apply(v), steps, &mut rng).word().to_vec()
                })
                .collect();
        }
        for w in walks {
            let path = DiscretePath::new(y.clone(), w)?;
            let m = path.len().div_ceil(2);
            let problem = OpenBoxProblem::from_cubes(spec, &[Some(StableCube::constant(0, v)), None], &Bottom::Cube(path.to_cube(m)?))?;
            match fill(&problem, f, m + bounds.slack, bounds.node_budget) {
                Ok(Filler::Found(c)) => {
                    if !check_filler(&problem, f, &c) {
                        return Err(Error::Internal("path lift fails its check".into()));
                    }
                    lifts += 1;
                }
                Ok(Filler::NotFound { certain }) => {
                    return Ok(IsofibrationVerdict::Counterexample { vertex: v, path, certain });
                }
                Err(Error::BudgetExceeded(reason)) => return Ok(IsofibrationVerdict::Inconclusive { lifts, reason }),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(IsofibrationVerdict::YesOnTestedRange { lifts, exhaustive })
}
