//! Presentations of the vertex groups `A₁(X, x)`: a spanning tree of the
//! component, one generator per non-tree edge, one relator per triangle
//! and per square. Words are reduced by Tietze elimination and compared in
//! the abelianization; anything these cannot decide is left open.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::DiscretePath;
use crate::error::{Error, Result};
use crate::graph::{pi0, Graph, GraphMap};

/// Letters are `±(g + 1)` for generator `g`.
pub type Word = Vec<i32>;

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = free_reduce(w);
    while w.len() > 1 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn inverse_word(w: &[i32]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

fn gen_of(l: i32) -> usize {
    l.unsigned_abs() as usize - 1
}

/// A finitely generated abelian group `ℤ^rank ⊕ ⨁ ℤ/d`, with the `d`
/// listed as invariant factors (each dividing the next, all `> 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> AbelianGroup {
        AbelianGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// The cokernel of a relation lattice in `ℤ^gens`.
    fn cokernel(gens: usize, diag: &[i128]) -> AbelianGroup {
        let nonzero: Vec<i128> = diag.iter().copied().filter(|&d| d != 0).collect();
        AbelianGroup {
            rank: gens - nonzero.len(),
            torsion: nonzero.into_iter().filter(|&d| d > 1).map(|d| d as u64).collect(),
        }
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let ds: Vec<i128> = self.torsion.iter().chain(&other.torsion).map(|&d| d as i128).collect();
        let n = ds.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ds[i] } else { 0 }).collect())
            .collect();
        let mut g = AbelianGroup::cokernel(n, &smith_diagonal(rows));
        g.rank = self.rank + other.rank;
        g
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("ℤ/{d}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("ℤ".into()),
            r => parts.push(format!("ℤ^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Diagonal of the Smith normal form of an integer matrix.
pub fn smith_diagonal(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let mut pivot = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && pivot.is_none_or(|(_, _, p): (usize, usize, i128)| v.abs() < p.abs()) {
                    pivot = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut again = false;
            for i in t + 1..rows {
                let q = a[i][t] / a[t][t];
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    a.swap(t, i);
                    again = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / a[t][t];
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    again = true;
                }
            }
            if again {
                continue;
            }
            let d = a[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % d != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// A sublattice of `ℤ^n` kept in row echelon form.
#[derive(Clone, Debug, Default)]
struct Lattice {
    n: usize,
    /// Rows with strictly increasing pivots and positive pivot entries.
    rows: Vec<Vec<i128>>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

impl Lattice {
    fn new(n: usize) -> Lattice {
        Lattice { n, rows: Vec::new() }
    }

    fn pivot(r: &[i128]) -> usize {
        r.iter().position(|&x| x != 0).unwrap_or(r.len())
    }

    fn insert(&mut self, mut v: Vec<i128>) {
        let mut k = 0;
        loop {
            let c = Lattice::pivot(&v);
            if c == self.n {
                return;
            }
            while k < self.rows.len() && Lattice::pivot(&self.rows[k]) < c {
                k += 1;
            }
            if k == self.rows.len() || Lattice::pivot(&self.rows[k]) > c {
                if v[c] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                self.rows.insert(k, v);
                return;
            }
            let row = &mut self.rows[k];
            let (a, b) = (row[c], v[c]);
            let (g, s, t) = ext_gcd(a, b);
            let (a1, b1) = (a / g, b / g);
            let combined: Vec<i128> = row.iter().zip(&v).map(|(&r, &x)| s * r + t * x).collect();
            let rest: Vec<i128> = row.iter().zip(&v).map(|(&r, &x)| a1 * x - b1 * r).collect();
            *row = combined;
            if row[c] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            v = rest;
            k += 1;
        }
    }

    fn contains(&self, v: &[i128]) -> bool {
        let mut v = v.to_vec();
        for row in &self.rows {
            let c = Lattice::pivot(row);
            if Lattice::pivot(&v) < c {
                return false;
            }
            if v[c] % row[c] != 0 {
                return false;
            }
            let q = v[c] / row[c];
            for (x, &r) in v.iter_mut().zip(row) {
                *x -= q * r;
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

const TIETZE_WORD_CAP: usize = 4_000;

/// Generators eliminated by Tietze moves, expressed through the rest.
#[derive(Clone, Debug)]
struct Tietze {
    subst: Vec<Option<Word>>,
    relators: Vec<Word>,
}

impl Tietze {
    fn substitute(subst: &[Option<Word>], w: &[i32]) -> Word {
        let mut out = Vec::with_capacity(w.len());
        for &l in w {
            match &subst[gen_of(l)] {
                None => out.push(l),
                Some(e) if l > 0 => out.extend_from_slice(e),
                Some(e) => out.extend(inverse_word(e)),
            }
        }
        free_reduce(&out)
    }

    fn new(gens: usize, relators: &[Word]) -> Tietze {
        let mut subst: Vec<Option<Word>> = vec![None; gens];
        let mut rels: Vec<Word> = relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (ri, r) in rels.iter().enumerate() {
                let mut count: HashMap<usize, usize> = HashMap::new();
                for &l in r {
                    *count.entry(gen_of(l)).or_default() += 1;
                }
                if let Some(pos) = r.iter().position(|&l| count[&gen_of(l)] == 1) {
                    if best.is_none_or(|(bi, _)| rels[bi].len() > r.len()) {
                        best = Some((ri, pos));
                    }
                }
            }
            let Some((ri, pos)) = best else { break };
            let r = rels.swap_remove(ri);
            let rotated: Word = r[pos..].iter().chain(&r[..pos]).copied().collect();
            let (l, rest) = (rotated[0], &rotated[1..]);
            // l · rest = 1
            let expr = if l > 0 { inverse_word(rest) } else { rest.to_vec() };
            let g = gen_of(l);
            let mut one: Vec<Option<Word>> = vec![None; gens];
            one[g] = Some(expr.clone());
            let new_rels: Vec<Word> = rels
                .iter()
                .map(|w| cyclic_reduce(&Tietze::substitute(&one, w)))
                .filter(|w| !w.is_empty())
                .collect();
            if new_rels.iter().any(|w| w.len() > TIETZE_WORD_CAP) {
                rels.push(r);
                break;
            }
            for s in subst.iter_mut().flatten() {
                *s = Tietze::substitute(&one, s);
            }
            subst[g] = Some(expr);
            rels = new_rels;
        }
        Tietze { subst, relators: rels }
    }

    fn reduce(&self, w: &[i32]) -> Word {
        Tietze::substitute(&self.subst, w)
    }

    fn remaining(&self) -> usize {
        self.subst.iter().filter(|s| s.is_none()).count()
    }
}

/// The presentation of `A₁(X, base)` for the component of `base`.
#[derive(Clone, Debug)]
pub struct A1Presentation {
    graph: Arc<Graph>,
    pub base: u32,
    /// Vertices of the component, ascending.
    pub vertices: Vec<u32>,
    parent: Vec<Option<u32>>,
    /// Non-tree edges `(u, v)` with `u < v`; generator `g` is the loop
    /// through the tree to `u`, across the edge, and back.
    pub generators: Vec<(u32, u32)>,
    index: HashMap<(u32, u32), usize>,
    pub relators: Vec<Word>,
    tietze: Tietze,
    lattice: Lattice,
    abelian: AbelianGroup,
}

pub fn a1_presentation(x: &Arc<Graph>, base: u32) -> Result<A1Presentation> {
    if base as usize >= x.n() {
        return Err(Error::Graph(format!("vertex {base} is not in the graph")));
    }
    let mut parent = vec![None; x.n()];
    let mut seen = vec![false; x.n()];
    seen[base as usize] = true;
    let mut order = vec![base];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &w in x.neighbors(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = Some(v);
                order.push(w);
            }
        }
        i += 1;
    }
    let mut vertices = order.clone();
    vertices.sort_unstable();
    let mut generators = Vec::new();
    let mut index = HashMap::new();
    for &u in &vertices {
        for &v in x.neighbors(u) {
            if u < v && parent[u as usize] != Some(v) && parent[v as usize] != Some(u) {
                index.insert((u, v), generators.len());
                generators.push((u, v));
            }
        }
    }
    let mut p = A1Presentation {
        graph: x.clone(),
        base,
        vertices,
        parent,
        generators,
        index,
        relators: Vec::new(),
        tietze: Tietze { subst: Vec::new(), relators: Vec::new() },
        lattice: Lattice::new(0),
        abelian: AbelianGroup::trivial(),
    };
    let mut relators = Vec::new();
    for &a in &p.vertices {
        let nb: Vec<u32> = x.neighbors(a).iter().copied().filter(|&b| b > a).collect();
        // triangles a < b < c
        for (k, &b) in nb.iter().enumerate() {
            for &c in &nb[k + 1..] {
                if x.adjacent(b, c) {
                    relators.push(p.walk_word(&[a, b, c, a]));
                }
            }
        }
        // squares a b c d with a least and b < d
        for &b in &nb {
            for &d in &nb {
                if d <= b {
                    continue;
                }
                for &c in x.neighbors(b) {
                    if c > a && c != d && x.adjacent(c, d) {
                        relators.push(p.walk_word(&[a, b, c, d, a]));
                    }
                }
            }
        }
    }
    let gens = p.generators.len();
    let mut lattice = Lattice::new(gens);
    for r in &relators {
        lattice.insert(exponent_sums(gens, r));
    }
    p.abelian = AbelianGroup::cokernel(gens, &smith_diagonal(lattice.rows.clone()));
    p.lattice = lattice;
    p.tietze = Tietze::new(gens, &relators);
    p.relators = relators;
    Ok(p)
}

fn exponent_sums(gens: usize, w: &[i32]) -> Vec<i128> {
    let mut v = vec![0; gens];
    for &l in w {
        v[gen_of(l)] += l.signum() as i128;
    }
    v
}

impl A1Presentation {
    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// The tree path from the base to `v`.
    pub fn tree_path(&self, v: u32) -> Vec<u32> {
        let mut p = vec![v];
        while let Some(u) = self.parent[*p.last().unwrap() as usize] {
            p.push(u);
        }
        p.reverse();
        p
    }

    fn letter(&self, u: u32, v: u32) -> Option<i32> {
        if u == v {
            return None;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.index.get(&(a, b)).map(|&g| if u < v { g as i32 + 1 } else { -(g as i32) - 1 })
    }

    /// The word of a walk inside the component: one letter per non-tree
    /// edge crossed.
    pub fn walk_word(&self, walk: &[u32]) -> Word {
        free_reduce(&walk.windows(2).filter_map(|p| self.letter(p[0], p[1])).collect::<Vec<_>>())
    }

    /// The word of `γ`, read as the loop `T(start) ∗ γ ∗ T(end)⁻¹`.
    pub fn path_word(&self, gamma: &DiscretePath) -> Word {
        self.walk_word(gamma.word())
    }

    /// The loop at the base representing generator `g`.
    pub fn generator_loop(&self, g: usize) -> DiscretePath {
        let (u, v) = self.generators[g];
        let mut w = self.tree_path(u);
        let mut back = self.tree_path(v);
        back.reverse();
        w.extend(back);
        DiscretePath::new(self.graph.clone(), w).expect("tree paths are paths")
    }

    pub fn abelianization(&self) -> &AbelianGroup {
        &self.abelian
    }

    /// Generators left after Tietze elimination, and the relators among them.
    pub fn simplified(&self) -> (usize, &[Word]) {
        (self.tietze.remaining(), &self.tietze.relators)
    }

    /// Whether `w` is trivial in the group: decided when elimination
    /// reduces it to the empty word, when its image in the abelianization
    /// is nonzero, or when no relators survive elimination.
    pub fn is_trivial(&self, w: &[i32]) -> Option<bool> {
        let r = self.tietze.reduce(w);
        if r.is_empty() {
            return Some(true);
        }
        if !self.lattice.contains(&exponent_sums(self.generators.len(), w)) {
            return Some(false);
        }
        if self.tietze.relators.is_empty() {
            return Some(false);
        }
        None
    }

    /// Path-homotopy of two paths in the component with equal endpoints.
    pub fn homotopic(&self, a: &DiscretePath, b: &DiscretePath) -> Result<Option<bool>> {
        if a.start() != b.start() || a.end() != b.end() {
            return Err(Error::EndpointMismatch(format!("{a:?} and {b:?} have different endpoints")));
        }
        if !self.contains(a.start()) {
            return Err(Error::Graph("paths lie outside the component".into()));
        }
        let mut w = self.path_word(a);
        w.extend(inverse_word(&self.path_word(b)));
        Ok(self.is_trivial(&w))
    }

    pub fn to_json(&self) -> Value {
        let x = &self.graph;
        let gens: Vec<Value> = self.generators.iter().map(|&(u, v)| json!([x.label(u), x.label(v)])).collect();
        let (left, rels) = self.simplified();
        json!({
            "base": x.label(self.base),
            "vertices": self.vertices.len(),
            "generators": gens,
            "relators": self.relators,
            "simplified": {"generators": left, "relators": rels},
            "abelianization": {"rank": self.abelian.rank, "torsion": self.abelian.torsion, "display": self.abelian.to_string()},
        })
    }
}

/// One presentation per component, based at its least vertex.
#[derive(Clone, Debug)]
pub struct GroupoidPresentation {
    pub graph: Arc<Graph>,
    pub component_of: Vec<usize>,
    pub components: Vec<A1Presentation>,
}

impl GroupoidPresentation {
    pub fn component(&self, v: u32) -> &A1Presentation {
        &self.components[self.component_of[v as usize]]
    }

    /// Whether two paths are homotopic: `Some(false)` also when the
    /// endpoints differ.
    pub fn homotopic(&self, a: &DiscretePath, b: &DiscretePath) -> Result<Option<bool>> {
        if a.start() != b.start() || a.end() != b.end() {
            return Ok(Some(false));
        }
        self.component(a.start()).homotopic(a, b)
    }
}

pub fn groupoid_presentation(x: &Arc<Graph>) -> GroupoidPresentation {
    let comps = pi0(x);
    let components = comps
        .classes
        .iter()
        .map(|c| a1_presentation(x, c[0]).expect("base in graph"))
        .collect();
    GroupoidPresentation {
        graph: x.clone(),
        component_of: comps.of,
        components,
    }
}

/// `Π₁f` on presentations: each source generator goes to the word of its
/// image loop.
#[derive(Clone, Debug)]
pub struct Pi1Map {
    pub f: GraphMap,
    /// Target component of each source component.
    pub target_component: Vec<usize>,
    /// Images of the generators of each source component.
    pub images: Vec<Vec<Word>>,
}

pub fn pi1_functor(f: &GraphMap, px: &GroupoidPresentation, py: &GroupoidPresentation) -> Result<Pi1Map> {
    if px.graph.as_ref() != f.source().as_ref() || py.graph.as_ref() != f.target().as_ref() {
        return Err(Error::Graph("presentations belong to other graphs".into()));
    }
    let mut target_component = Vec::new();
    let mut images = Vec::new();
    for c in &px.components {
        let tc = py.component_of[f.apply(c.base) as usize];
        let target = &py.components[tc];
        target_component.push(tc);
        images.push((0..c.generators.len()).map(|g| target.path_word(&c.generator_loop(g).map_by(f))).collect());
    }
    Ok(Pi1Map {
        f: f.clone(),
        target_component,
        images,
    })
}

impl Pi1Map {
    /// The image of a word over the generators of source component `c`.
    pub fn apply(&self, c: usize, w: &[i32]) -> Word {
        let mut out = Vec::new();
        for &l in w {
            let img = &self.images[c][gen_of(l)];
            if l > 0 {
                out.extend_from_slice(img);
            } else {
                out.extend(inverse_word(img));
            }
        }
        free_reduce(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, interval, point, product};
    use crate::pi1::path_homotopic_bounded;

    fn arc(g: Graph) -> Arc<Graph> {
        Arc::new(g)
    }

    #[test]
    fn small_cycles() {
        let c3 = a1_presentation(&arc(cycle(3).unwrap()), 0).unwrap();
        assert_eq!((c3.generators.len(), c3.relators.len()), (1, 1));
        assert!(c3.abelianization().is_trivial());
        let c4 = a1_presentation(&arc(cycle(4).unwrap()), 0).unwrap();
        assert_eq!((c4.generators.len(), c4.relators.len()), (1, 1));
        assert!(c4.abelianization().is_trivial());
        assert_eq!(c4.is_trivial(&[1]), Some(true));
        let c5 = a1_presentation(&arc(cycle(5).unwrap()), 0).unwrap();
        assert_eq!((c5.generators.len(), c5.relators.len()), (1, 0));
        assert_eq!(c5.abelianization(), &AbelianGroup { rank: 1, torsion: vec![] });
        assert_eq!(c5.is_trivial(&[1, 1, -1]), Some(false));
        assert_eq!(c5.is_trivial(&[1, -1]), Some(true));
    }

    #[test]
    fn generator_loops_agree_with_bfs() {
        for (n, trivial) in [(3, true), (4, true), (5, false), (6, false)] {
            let x = arc(cycle(n).unwrap());
            let p = a1_presentation(&x, 0).unwrap();
            let l = p.generator_loop(0);
            assert_eq!(p.is_trivial(&p.path_word(&l)), Some(trivial));
            let c = DiscretePath::constant(x.clone(), 0);
            let bfs = path_homotopic_bounded(&l, &c, l.len(), 50).unwrap();
            assert_eq!(bfs.is_yes(), trivial, "C{n}");
        }
    }

    #[test]
    fn product_of_pentagons() {
        let c5 = cycle(5).unwrap();
        let p = a1_presentation(&arc(product(&c5, &c5)), 0).unwrap();
        assert_eq!(p.abelianization(), &AbelianGroup { rank: 2, torsion: vec![] });
        assert_eq!(p.simplified().0, 2);
    }

    #[test]
    fn smith_form() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(smith_diagonal(m), vec![2, 6, 12]);
        let g = AbelianGroup { rank: 1, torsion: vec![2] }.direct_sum(&AbelianGroup { rank: 0, torsion: vec![3] });
        assert_eq!(g, AbelianGroup { rank: 1, torsion: vec![6] });
        assert_eq!(g.to_string(), "ℤ/6 ⊕ ℤ");
    }

    #[test]
    fn torsion_from_a_relator() {
        let mut l = Lattice::new(2);
        l.insert(vec![2, 0]);
        l.insert(vec![0, 3]);
        l.insert(vec![4, 3]);
        assert!(l.contains(&[6, -3]));
        assert!(!l.contains(&[1, 0]));
        assert_eq!(AbelianGroup::cokernel(2, &smith_diagonal(l.rows.clone())).torsion, vec![6]);
    }

    #[test]
    fn functor_on_generators() {
        let c5 = arc(cycle(5).unwrap());
        let p5 = groupoid_presentation(&c5);
        let id = pi1_functor(&GraphMap::identity(c5.clone()), &p5, &p5).unwrap();
        assert_eq!(id.images[0], vec![vec![1]]);
        let pt = arc(point());
        let to_pt = pi1_functor(&GraphMap::to_point(c5.clone()), &p5, &groupoid_presentation(&pt)).unwrap();
        assert_eq!(to_pt.images[0], vec![Vec::<i32>::new()]);
    }

    #[test]
    fn diagonal_kills_the_square() {
        let c4 = arc(cycle(4).unwrap());
        let mut d = cycle(4).unwrap();
        d.add_edge(0, 2).unwrap();
        let d = arc(d);
        let inc = GraphMap::new(c4.clone(), d.clone(), vec![0, 1, 2, 3]).unwrap();
        let pd = groupoid_presentation(&d);
        let m = pi1_functor(&inc, &groupoid_presentation(&c4), &pd).unwrap();
        let triangles = pd.components[0].relators.iter().filter(|r| r.len() == 3).count();
        assert!(triangles <= 2);
        assert_eq!(pd.components[0].is_trivial(&m.images[0][0]), Some(true));
    }

    #[test]
    fn composition() {
        let c6 = arc(cycle(6).unwrap());
        let c3 = arc(cycle(3).unwrap());
        let i2 = arc(interval(2));
        let f = GraphMap::new(c6.clone(), c6.clone(), vec![1, 2, 3, 4, 5, 0]).unwrap();
        let g = GraphMap::new(c6.clone(), c3.clone(), vec![0, 1, 2, 0, 1, 2]).unwrap();
        let h = GraphMap::new(c3.clone(), i2.clone(), vec![0, 1, 1]).unwrap();
        let p6 = groupoid_presentation(&c6);
        let p3 = groupoid_presentation(&c3);
        for (a, b, pa, pb, pc) in [(&f, &g, &p6, &p6, &p3), (&g, &h, &p6, &p3, &groupoid_presentation(&i2))] {
            let fa = pi1_functor(a, pa, pb).unwrap();
            let fb = pi1_functor(b, pb, pc).unwrap();
            let fab = pi1_functor(&a.then(b).unwrap(), pa, pc).unwrap();
            let target = &pc.components[fab.target_component[0]];
            // the two differ by the basepoint change along b(T(a(x₀)))
            let detour: Vec<u32> = pb.components[0]
                .tree_path(a.apply(pa.components[0].base))
                .iter()
                .map(|&v| b.apply(v))
                .collect();
            let c = target.walk_word(&detour);
            for g in 0..pa.components[0].generators.len() {
                let lhs = fb.apply(fa.target_component[0], &fa.images[0][g]);
                let mut w = c.clone();
                w.extend_from_slice(&fab.images[0][g]);
                w.extend(inverse_word(&c));
                let mut diff = lhs;
                diff.extend(inverse_word(&w));
                assert_eq!(target.is_trivial(&diff), Some(true));
            }
        }
    }
}
