//! Paths in graphs, path-homotopy, presentations of the fundamental
//! groupoid, and the comparison of `Π₁` with pullbacks.
//!
//! A path `I_∞ -> X` is stored as its trimmed window `v₀ … v_ℓ`. Windows
//! of a common length are compared by padding on the right with the end
//! vertex; shifting a path by one step is itself a one-step homotopy, so
//! nothing is lost by fixing the alignment.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMap};
use crate::nerve::StableCube;

pub mod presentation;
pub mod psi;

pub use presentation::{
    a1_presentation, groupoid_presentation, pi1_functor, AbelianGroup, A1Presentation, GroupoidPresentation, Pi1Map,
    Word,
};
pub use psi::{is_isofibration_bounded, psi_comparison, IsofibrationBounds, IsofibrationVerdict, PsiBounds, PsiReport, Sample};

#[derive(Clone)]
pub struct DiscretePath {
    graph: Arc<Graph>,
    word: Vec<u32>,
}

impl fmt::Debug for DiscretePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.word.iter().map(|&v| self.graph.label(v)).collect();
        write!(f, "{}", labels.join("·"))
    }
}

impl PartialEq for DiscretePath {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word && (Arc::ptr_eq(&self.graph, &other.graph) || self.graph == other.graph)
    }
}

impl Eq for DiscretePath {}

fn trim(mut w: Vec<u32>) -> Vec<u32> {
    let lead = w.windows(2).take_while(|p| p[0] == p[1]).count();
    w.drain(..lead);
    while w.len() > 1 && w[w.len() - 1] == w[w.len() - 2] {
        w.pop();
    }
    w
}

impl DiscretePath {
    /// A path through the given vertices; repeats are allowed and trimmed
    /// at the ends.
    pub fn new(graph: Arc<Graph>, word: Vec<u32>) -> Result<DiscretePath> {
        if word.is_empty() {
            return Err(Error::Graph("a path needs at least one vertex".into()));
        }
        if let Some(&v) = word.iter().find(|&&v| v as usize >= graph.n()) {
            return Err(Error::Graph(format!("vertex {v} out of range")));
        }
        if let Some(p) = word.windows(2).find(|p| !graph.adjacent(p[0], p[1])) {
            return Err(Error::Graph(format!(
                "{} and {} are not adjacent",
                graph.label(p[0]),
                graph.label(p[1])
            )));
        }
        Ok(DiscretePath { graph, word: trim(word) })
    }

    pub fn from_labels(graph: Arc<Graph>, labels: &[&str]) -> Result<DiscretePath> {
        let word = labels
            .iter()
            .map(|l| graph.vertex(l).ok_or_else(|| Error::Graph(format!("unknown vertex {l}"))))
            .collect::<Result<Vec<_>>>()?;
        DiscretePath::new(graph, word)
    }

    pub fn constant(graph: Arc<Graph>, v: u32) -> DiscretePath {
        DiscretePath { graph, word: vec![v] }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn start(&self) -> u32 {
        self.word[0]
    }

    pub fn end(&self) -> u32 {
        *self.word.last().unwrap()
    }

    /// Number of steps `ℓ` of the window.
    pub fn len(&self) -> usize {
        self.word.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.word.len() == 1
    }

    /// `γ ∗ η`, defined when `γ` ends where `η` starts.
    pub fn concat(&self, other: &DiscretePath) -> Result<DiscretePath> {
        if self.end() != other.start() {
            return Err(Error::EndpointMismatch(format!(
                "path ends at {} but the next starts at {}",
                self.graph.label(self.end()),
                other.graph.label(other.start())
            )));
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word[1..]);
        Ok(DiscretePath {
            graph: self.graph.clone(),
            word: trim(word),
        })
    }

    pub fn inverse(&self) -> DiscretePath {
        let mut word = self.word.clone();
        word.reverse();
        DiscretePath {
            graph: self.graph.clone(),
            word,
        }
    }

    pub fn map_by(&self, f: &GraphMap) -> DiscretePath {
        DiscretePath {
            graph: f.target().clone(),
            word: trim(self.word.iter().map(|&v| f.apply(v)).collect()),
        }
    }

    /// The window padded on the right to `len + 1` entries.
    pub fn window(&self, len: usize) -> Result<Vec<u32>> {
        if self.len() > len {
            return Err(Error::InvalidParameters(format!("a path of length {} does not fit a window of {len}", self.len())));
        }
        let mut w = self.word.clone();
        w.resize(len + 1, self.end());
        Ok(w)
    }

    /// The 1-cube `t ↦ v_{clamp(t+M, 0, ℓ)}` of the nerve; needs `2M ≥ ℓ`.
    pub fn to_cube(&self, support: usize) -> Result<StableCube> {
        cube_of_window(&self.window(2 * support)?, support)
    }

    /// Reads a 1-cube of `NX` as a path.
    pub fn from_cube(graph: Arc<Graph>, c: &StableCube) -> Result<DiscretePath> {
        if c.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: c.dim() });
        }
        DiscretePath::new(graph, c.values().to_vec())
    }

    /// A lazy random walk of at most `steps` steps.
    pub fn random_walk(graph: Arc<Graph>, from: u32, steps: usize, rng: &mut impl Rng) -> DiscretePath {
        let mut word = vec![from];
        for _ in 0..steps {
            let nb = graph.closed_neighborhood(*word.last().unwrap());
            word.push(nb[rng.gen_range(0..nb.len())]);
        }
        DiscretePath { graph, word: trim(word) }
    }
}

/// The 1-cube of a window `w` of length `2M + 1` or shorter, left-aligned
/// at `−M`.
pub fn cube_of_window(w: &[u32], support: usize) -> Result<StableCube> {
    let m = support as i64;
    let last = w.len() as i64 - 1;
    if last > 2 * m {
        return Err(Error::InvalidParameters(format!("window of length {last} exceeds support {support}")));
    }
    Ok(StableCube::from_fn(1, support, |t| w[(t[0] + m).clamp(0, last) as usize]))
}

/// The 2-cube `(t₁, t₂) ↦ layers[t₂+M][t₁+M]` (both clamped) of a
/// sequence of windows, the path coordinate first.
pub fn cube_of_layers(layers: &[Vec<u32>], support: usize) -> Result<StableCube> {
    let m = support as i64;
    let n = layers.len() as i64 - 1;
    let len = layers.iter().map(|l| l.len()).max().unwrap_or(1) as i64 - 1;
    if n > 2 * m || len > 2 * m || layers.iter().any(|l| l.len() as i64 != len + 1) {
        return Err(Error::InvalidParameters(format!("layers do not fit support {support}")));
    }
    Ok(StableCube::from_fn(2, support, |t| {
        layers[(t[1] + m).clamp(0, n) as usize][(t[0] + m).clamp(0, len) as usize]
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathHomotopy {
    /// Windows from the first path to the second, consecutive ones
    /// pointwise adjacent.
    Yes(Vec<Vec<u32>>),
    /// Every path reachable within the window was visited.
    NoExhausted,
    Inconclusive(String),
}

impl PathHomotopy {
    pub fn is_yes(&self) -> bool {
        matches!(self, PathHomotopy::Yes(_))
    }

    pub fn steps(&self) -> Option<usize> {
        match self {
            PathHomotopy::Yes(l) => Some(l.len() - 1),
            _ => None,
        }
    }
}

const STATE_LIMIT: usize = 300_000;

/// Windows `w'` with the same endpoints as `w`, pointwise adjacent to it.
fn window_neighbours(x: &Graph, w: &[u32], visit: &mut impl FnMut(&[u32])) {
    fn rec(x: &Graph, w: &[u32], cur: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        let i = cur.len();
        if i == w.len() {
            visit(cur);
            return;
        }
        if i == 0 || i == w.len() - 1 {
            if i == 0 || x.adjacent(cur[i - 1], w[i]) {
                cur.push(w[i]);
                rec(x, w, cur, visit);
                cur.pop();
            }
            return;
        }
        for v in x.closed_neighborhood(w[i]) {
            if x.adjacent(cur[i - 1], v) {
                cur.push(v);
                rec(x, w, cur, visit);
                cur.pop();
            }
        }
    }
    rec(x, w, &mut Vec::with_capacity(w.len()), visit);
}

/// Breadth-first search for a homotopy between two windows of equal length
/// with the same endpoints.
pub fn window_homotopy(x: &Graph, from: &[u32], to: &[u32], max_steps: usize) -> Result<PathHomotopy> {
    if from.len() != to.len() || from.is_empty() {
        return Err(Error::InvalidParameters("windows of equal positive length expected".into()));
    }
    if from[0] != to[0] || from.last() != to.last() {
        return Err(Error::EndpointMismatch("paths have different endpoints".into()));
    }
    let mut parent: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
    parent.insert(from.to_vec(), Vec::new());
    let mut frontier = vec![from.to_vec()];
    let mut depth = 0;
    loop {
        if let Some(hit) = frontier.iter().find(|w| w.as_slice() == to) {
            let mut layers = vec![hit.clone()];
            while let Some(p) = parent.get(layers.last().unwrap()).filter(|p| !p.is_empty()) {
                layers.push(p.clone());
            }
            layers.reverse();
            return Ok(PathHomotopy::Yes(layers));
        }
        if frontier.is_empty() {
            return Ok(PathHomotopy::NoExhausted);
        }
        if depth == max_steps {
            return Ok(PathHomotopy::Inconclusive(format!("no homotopy within {max_steps} steps")));
        }
        let mut next = Vec::new();
        for w in &frontier {
            let mut overflow = false;
            window_neighbours(x, w, &mut |n| {
                if !parent.contains_key(n) {
                    if parent.len() >= STATE_LIMIT {
                        overflow = true;
                        return;
                    }
                    parent.insert(n.to_vec(), w.clone());
                    next.push(n.to_vec());
                }
            });
            if overflow {
                return Ok(PathHomotopy::Inconclusive(format!("more than {STATE_LIMIT} paths in the window")));
            }
        }
        frontier = next;
        depth += 1;
    }
}

/// Searches for a path-homotopy `γ ≃ η` through paths that fit a window of
/// `max_support` steps.
pub fn path_homotopic_bounded(gamma: &DiscretePath, eta: &DiscretePath, max_support: usize, max_steps: usize) -> Result<PathHomotopy> {
    if gamma.start() != eta.start() || gamma.end() != eta.end() {
        return Err(Error::EndpointMismatch(format!("{gamma:?} and {eta:?} have different endpoints")));
    }
    if gamma.len() > max_support || eta.len() > max_support {
        return Ok(PathHomotopy::Inconclusive(format!("a path is longer than the window {max_support}")));
    }
    window_homotopy(gamma.graph(), &gamma.window(max_support)?, &eta.window(max_support)?, max_steps)
}
