//! Finite reflexive graphs and graph maps.
//!
//! Loops are implicit: every vertex is adjacent to itself and adjacency lists
//! only hold the other neighbours.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

pub mod hom;
pub mod homotopy;

pub use hom::{hom_search, Bits, HomOptions};
pub use homotopy::{a_homotopy_search, AHomotopy};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<u32>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({} vertices, edges {:?})", self.n(), self.edges())
    }
}

impl Graph {
    /// `n` isolated vertices labelled `0..n`.
    pub fn discrete(n: usize) -> Graph {
        Graph {
            labels: (0..n).map(|i| i.to_string()).collect(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn empty() -> Graph {
        Graph::discrete(0)
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut g = Graph::discrete(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n() {
            return Err(Error::Graph(format!("{} labels for {} vertices", labels.len(), self.n())));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::Graph(format!("duplicate vertex {dup}")));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        let n = self.n() as u32;
        if u >= n || v >= n {
            return Err(Error::Graph(format!("edge ({u}, {v}) outside {n} vertices")));
        }
        if u == v {
            return Ok(());
        }
        for (a, b) in [(u, v), (v, u)] {
            let l = &mut self.adj[a as usize];
            if let Err(pos) = l.binary_search(&b) {
                l.insert(pos, b);
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn vertices(&self) -> std::ops::Range<u32> {
        0..self.n() as u32
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    /// Reflexive adjacency.
    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        u == v || self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Neighbours other than `v` itself.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// `v` together with its neighbours, ascending.
    pub fn closed_neighborhood(&self, v: u32) -> Vec<u32> {
        let mut out = self.adj[v as usize].clone();
        let pos = out.binary_search(&v).unwrap_err();
        out.insert(pos, v);
        out
    }

    /// Non-loop edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        self.vertices()
            .flat_map(|u| self.adj[u as usize].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// Induced subgraph on `keep` (in the given order).
    pub fn induced(&self, keep: &[u32]) -> Graph {
        let pos: HashMap<u32, u32> = keep.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let mut g = Graph::discrete(keep.len());
        g.labels = keep.iter().map(|&v| self.labels[v as usize].clone()).collect();
        for (i, &v) in keep.iter().enumerate() {
            g.adj[i] = self.adj[v as usize].iter().filter_map(|w| pos.get(w).copied()).collect();
            g.adj[i].sort_unstable();
        }
        g
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n() as u32;
        let mut g = self.clone();
        g.labels = self.labels.iter().map(|l| format!("0.{l}")).collect();
        g.labels.extend(other.labels.iter().map(|l| format!("1.{l}")));
        g.adj.extend(other.adj.iter().map(|l| l.iter().map(|v| v + shift).collect()));
        g
    }

    pub fn is_connected(&self) -> bool {
        pi0(self).classes.len() <= 1
    }
}

/// `I_n`: vertices `0..=n`, consecutive integers adjacent.
pub fn interval(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n + 1, &edges).expect("interval edges are in range")
}

/// `C_n` for `n >= 3`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameters(format!("cycle graph needs n >= 3, got {n}")));
    }
    let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
    Graph::from_edges(n, &edges)
}

pub fn point() -> Graph {
    interval(0)
}

fn pair_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// `X ⊠ Y`: one coordinate moves along an edge while the other stays put.
/// Vertex `(x, y)` has index `x * |Y| + y`.
pub fn box_product(x: &Graph, y: &Graph) -> Graph {
    let ny = y.n() as u32;
    let mut g = Graph::discrete(x.n() * y.n());
    g.labels = x.labels.iter().flat_map(|a| y.labels.iter().map(move |b| pair_label(a, b))).collect();
    for a in x.vertices() {
        for b in y.vertices() {
            let mut l: Vec<u32> = x.neighbors(a).iter().map(|&a2| a2 * ny + b).collect();
            l.extend(y.neighbors(b).iter().map(|&b2| a * ny + b2));
            l.sort_unstable();
            g.adj[(a * ny + b) as usize] = l;
        }
    }
    g
}

/// The categorical product: both coordinates move along (possibly
/// degenerate) edges. Vertex `(x, y)` has index `x * |Y| + y`.
pub fn product(x: &Graph, y: &Graph) -> Graph {
    let ny = y.n() as u32;
    let mut g = Graph::discrete(x.n() * y.n());
    g.labels = x.labels.iter().flat_map(|a| y.labels.iter().map(move |b| pair_label(a, b))).collect();
    for a in x.vertices() {
        for b in y.vertices() {
            let mut l = Vec::new();
            for a2 in x.closed_neighborhood(a) {
                for b2 in y.closed_neighborhood(b) {
                    if (a2, b2) != (a, b) {
                        l.push(a2 * ny + b2);
                    }
                }
            }
            l.sort_unstable();
            g.adj[(a * ny + b) as usize] = l;
        }
    }
    g
}

#[derive(Clone, PartialEq, Eq)]
pub struct GraphMap {
    source: Arc<Graph>,
    target: Arc<Graph>,
    map: Vec<u32>,
}

impl fmt::Debug for GraphMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GraphMap{:?}", self.map)
    }
}

fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GraphMap {
    pub fn new(source: Arc<Graph>, target: Arc<Graph>, map: Vec<u32>) -> Result<GraphMap> {
        if map.len() != source.n() {
            return Err(Error::Graph(format!("map lists {} images for {} vertices", map.len(), source.n())));
        }
        if let Some(&v) = map.iter().find(|&&v| v as usize >= target.n()) {
            return Err(Error::Graph(format!("image {v} is not a vertex of the target")));
        }
        for (u, v) in source.edges() {
            if !target.adjacent(map[u as usize], map[v as usize]) {
                return Err(Error::Graph(format!(
                    "edge {} ~ {} is not preserved",
                    source.label(u),
                    source.label(v)
                )));
            }
        }
        Ok(GraphMap { source, target, map })
    }

    pub(crate) fn new_unchecked(source: Arc<Graph>, target: Arc<Graph>, map: Vec<u32>) -> GraphMap {
        GraphMap { source, target, map }
    }

    pub fn identity(x: Arc<Graph>) -> GraphMap {
        let map = x.vertices().collect();
        GraphMap {
            source: x.clone(),
            target: x,
            map,
        }
    }

    pub fn constant(source: Arc<Graph>, target: Arc<Graph>, v: u32) -> Result<GraphMap> {
        let n = source.n();
        GraphMap::new(source, target, vec![v; n])
    }

    /// The unique map to `I₀`.
    pub fn to_point(source: Arc<Graph>) -> GraphMap {
        let n = source.n();
        GraphMap {
            source,
            target: Arc::new(point()),
            map: vec![0; n],
        }
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.target
    }

    pub fn images(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.map[v as usize]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphMap) -> Result<GraphMap> {
        if !same_graph(&self.target, &next.source) {
            return Err(Error::EndpointMismatch("composable maps must share the middle graph".into()));
        }
        Ok(GraphMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&v| next.apply(v)).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.n()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }
}

pub struct Pullback {
    pub graph: Arc<Graph>,
    /// The vertex pair behind each vertex of the pullback.
    pub pairs: Vec<(u32, u32)>,
    pub left: GraphMap,
    pub right: GraphMap,
}

impl Pullback {
    pub fn vertex(&self, x: u32, y: u32) -> Option<u32> {
        self.pairs.iter().position(|&p| p == (x, y)).map(|i| i as u32)
    }

    /// The induced map from a cone `(a : W -> X, b : W -> Y)`.
    pub fn factor(&self, a: &GraphMap, b: &GraphMap) -> Result<GraphMap> {
        if !same_graph(a.source(), b.source()) {
            return Err(Error::EndpointMismatch("cone legs must share a source".into()));
        }
        let index: HashMap<(u32, u32), u32> = self.pairs.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
        let map = a
            .source()
            .vertices()
            .map(|w| {
                index
                    .get(&(a.apply(w), b.apply(w)))
                    .copied()
                    .ok_or_else(|| Error::EndpointMismatch("cone does not commute".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        GraphMap::new(a.source().clone(), self.graph.clone(), map)
    }
}

pub fn pullback(f: &GraphMap, g: &GraphMap) -> Result<Pullback> {
    if !same_graph(f.target(), g.target()) {
        return Err(Error::Graph("pullback legs must share a target".into()));
    }
    let (x, y) = (f.source(), g.source());
    let pairs: Vec<(u32, u32)> = x
        .vertices()
        .flat_map(|a| y.vertices().filter(move |&b| f.apply(a) == g.apply(b)).map(move |b| (a, b)))
        .collect();
    let mut graph = Graph::discrete(pairs.len());
    graph.labels = pairs.iter().map(|&(a, b)| pair_label(x.label(a), y.label(b))).collect();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(a2, b2)) in pairs.iter().enumerate() {
            if i < j && x.adjacent(a, a2) && y.adjacent(b, b2) {
                graph.add_edge(i as u32, j as u32)?;
            }
        }
    }
    let graph = Arc::new(graph);
    let left = GraphMap::new(graph.clone(), x.clone(), pairs.iter().map(|p| p.0).collect())?;
    let right = GraphMap::new(graph.clone(), y.clone(), pairs.iter().map(|p| p.1).collect())?;
    Ok(Pullback { graph, pairs, left, right })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Component index of each vertex.
    pub of: Vec<usize>,
    /// Vertices of each component, ascending; components ordered by least vertex.
    pub classes: Vec<Vec<u32>>,
}

pub fn pi0(x: &Graph) -> Components {
    let mut of = vec![usize::MAX; x.n()];
    let mut classes = Vec::new();
    for s in x.vertices() {
        if of[s as usize] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut class = vec![s];
        of[s as usize] = c;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in x.neighbors(v) {
                if of[w as usize] == usize::MAX {
                    of[w as usize] = c;
                    class.push(w);
                    queue.push_back(w);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    Components { of, classes }
}

/// Shortest path between two vertices, as a vertex sequence.
pub fn shortest_path(x: &Graph, from: u32, to: u32) -> Option<Vec<u32>> {
    let mut prev = vec![u32::MAX; x.n()];
    prev[from as usize] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur as usize];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in x.neighbors(v) {
            if prev[w as usize] == u32::MAX {
                prev[w as usize] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// A graph isomorphism `a -> b`, if any.
pub fn find_graph_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<u32>> {
    if a.n() != b.n() || a.num_edges() != b.num_edges() {
        return None;
    }
    let n = a.n();
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    fn rec(a: &Graph, b: &Graph, v: usize, map: &mut [u32], used: &mut [bool]) -> bool {
        if v == a.n() {
            return true;
        }
        let deg = a.neighbors(v as u32).len();
        for w in b.vertices() {
            if used[w as usize] || b.neighbors(w).len() != deg {
                continue;
            }
            let ok = (0..v).all(|u| a.adjacent(u as u32, v as u32) == b.adjacent(map[u], w));
            if ok {
                map[v] = w;
                used[w as usize] = true;
                if rec(a, b, v + 1, map, used) {
                    return true;
                }
                used[w as usize] = false;
            }
        }
        false
    }
    rec(a, b, 0, &mut map, &mut used).then_some(map)
}

fn label_json(l: &str) -> Value {
    l.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::String(l.to_string()))
}

fn label_of(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::Parse(format!("vertex identifiers must be strings or integers, got {v}"))),
    }
}

pub fn graph_to_json(x: &Graph) -> Value {
    json!({
        "vertices": x.labels.iter().map(|l| label_json(l)).collect::<Vec<_>>(),
        "edges": x.edges().iter().map(|&(u, v)| json!([label_json(x.label(u)), label_json(x.label(v))])).collect::<Vec<_>>(),
    })
}

/// Reads `{"vertices": [...], "edges": [[u, v], ...]}`; loops are ignored
/// and edges are symmetrized.
pub fn graph_from_json(v: &Value) -> Result<Graph> {
    let verts = v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("graph needs a \"vertices\" array".into()))?;
    let labels = verts.iter().map(label_of).collect::<Result<Vec<_>>>()?;
    let mut g = Graph::discrete(labels.len()).with_labels(labels)?;
    let edges = match v.get("edges") {
        None => Vec::new(),
        Some(e) => e.as_array().cloned().ok_or_else(|| Error::Parse("\"edges\" must be an array".into()))?,
    };
    for e in edges {
        let pair = e
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Parse(format!("edge {e} must be a pair")))?;
        let find = |x: &Value| -> Result<u32> {
            let l = label_of(x)?;
            g.vertex(&l).ok_or_else(|| Error::Parse(format!("edge endpoint {l} is not a vertex")))
        };
        let (a, b) = (find(&pair[0])?, find(&pair[1])?);
        g.add_edge(a, b)?;
    }
    Ok(g)
}

pub fn graph_map_to_json(f: &GraphMap) -> Value {
    let mut m = Map::new();
    for v in f.source.vertices() {
        m.insert(f.source.label(v).to_string(), label_json(f.target.label(f.apply(v))));
    }
    json!({
        "source": graph_to_json(&f.source),
        "target": graph_to_json(&f.target),
        "map": m,
    })
}

/// Reads `{"source": graph, "target": graph, "map": {vertex: vertex}}`.
pub fn graph_map_from_json(v: &Value) -> Result<GraphMap> {
    let source = Arc::new(graph_from_json(v.get("source").ok_or_else(|| Error::Parse("map needs a \"source\"".into()))?)?);
    let target = Arc::new(graph_from_json(v.get("target").ok_or_else(|| Error::Parse("map needs a \"target\"".into()))?)?);
    let m = v
        .get("map")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("map needs a \"map\" object".into()))?;
    let images = source
        .vertices()
        .map(|s| {
            let img = m
                .get(source.label(s))
                .ok_or_else(|| Error::Parse(format!("no image for vertex {}", source.label(s))))?;
            let l = label_of(img)?;
            target.vertex(&l).ok_or_else(|| Error::Parse(format!("image {l} is not a target vertex")))
        })
        .collect::<Result<Vec<_>>>()?;
    GraphMap::new(source, target, images)
}
