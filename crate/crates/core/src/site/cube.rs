//! Morphisms of the cube category with faces, degeneracies and both kinds
//! of connections.
//!
//! A morphism `[1]^m -> [1]^n` is stored as `n` coordinate descriptors. Each
//! descriptor is a constant or a read-once lattice term in the input
//! variables `1..=m`. Terms are kept flattened (a `Max` never has a `Max`
//! child) with children ordered by their smallest variable, so two
//! morphisms are equal exactly when their evaluations on `{0,1}^m` agree.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// 1-based input variable.
    Var(u8),
    Max(Vec<Term>),
    Min(Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Const(bool),
    Term(Term),
}

/// Face, degeneracy and connection generators. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubeGenerator {
    Face { i: usize, eps: bool },
    Degeneracy { i: usize },
    Connection { i: usize, eps: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubeMorphism {
    source_dim: usize,
    coords: Vec<Coord>,
}

impl Term {
    fn min_var(&self) -> u8 {
        match self {
            Term::Var(v) => *v,
            Term::Max(c) | Term::Min(c) => c[0].min_var(),
        }
    }

    fn collect_vars(&self, out: &mut Vec<u8>) {
        match self {
            Term::Var(v) => out.push(*v),
            Term::Max(c) | Term::Min(c) => c.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.collect_vars(&mut v);
        v
    }

    fn eval_bits(&self, x: &[bool]) -> bool {
        match self {
            Term::Var(v) => x[*v as usize - 1],
            Term::Max(c) => c.iter().any(|t| t.eval_bits(x)),
            Term::Min(c) => c.iter().all(|t| t.eval_bits(x)),
        }
    }

    fn eval_int(&self, t: &[i64]) -> i64 {
        match self {
            Term::Var(v) => t[*v as usize - 1],
            Term::Max(c) => c.iter().map(|s| s.eval_int(t)).max().unwrap(),
            Term::Min(c) => c.iter().map(|s| s.eval_int(t)).min().unwrap(),
        }
    }

    /// Checks canonical shape: flattened, at least two children per node,
    /// children sorted and each child's variables a contiguous run.
    fn is_canonical(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Max(c) | Term::Min(c) => {
                let is_max = matches!(self, Term::Max(_));
                if c.len() < 2 {
                    return false;
                }
                let mut last = 0u8;
                for child in c {
                    let same_kind = matches!(
                        (is_max, child),
                        (true, Term::Max(_)) | (false, Term::Min(_))
                    );
                    if same_kind || !child.is_canonical() {
                        return false;
                    }
                    let vars = child.vars();
                    if vars[0] <= last {
                        return false;
                    }
                    last = *vars.last().unwrap();
                }
                true
            }
        }
    }
}

impl Coord {
    pub fn var(i: u8) -> Coord {
        Coord::Term(Term::Var(i))
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Coord::Const(_))
    }

    pub fn eval_bits(&self, x: &[bool]) -> bool {
        match self {
            Coord::Const(b) => *b,
            Coord::Term(t) => t.eval_bits(x),
        }
    }

    /// Evaluation on integer coordinates where a constant `e` means `(2e-1)·bound`.
    pub fn eval_int(&self, t: &[i64], bound: i64) -> i64 {
        match self {
            Coord::Const(false) => -bound,
            Coord::Const(true) => bound,
            Coord::Term(term) => term.eval_int(t),
        }
    }
}

/// Builds a lattice node from already-simplified children.
fn simplify_node(is_max: bool, children: Vec<Coord>) -> Coord {
    let absorbing = is_max;
    let mut terms: Vec<Term> = Vec::new();
    for c in children {
        match c {
            Coord::Const(b) if b == absorbing => return Coord::Const(absorbing),
            Coord::Const(_) => {}
            Coord::Term(Term::Max(inner)) if is_max => terms.extend(inner),
            Coord::Term(Term::Min(inner)) if !is_max => terms.extend(inner),
            Coord::Term(t) => terms.push(t),
        }
    }
    match terms.len() {
        0 => Coord::Const(!absorbing),
        1 => Coord::Term(terms.pop().unwrap()),
        _ => {
            terms.sort_by_key(|t| t.min_var());
            Coord::Term(if is_max {
                Term::Max(terms)
            } else {
                Term::Min(terms)
            })
        }
    }
}

fn substitute(term: &Term, inner: &[Coord]) -> Coord {
    match term {
        Term::Var(v) => inner[*v as usize - 1].clone(),
        Term::Max(c) => simplify_node(true, c.iter().map(|t| substitute(t, inner)).collect()),
        Term::Min(c) => simplify_node(false, c.iter().map(|t| substitute(t, inner)).collect()),
    }
}

impl CubeMorphism {
    /// Builds a morphism from raw coordinates, normalizing terms and
    /// validating the result.
    pub fn new(source_dim: usize, coords: Vec<Coord>) -> Result<Self> {
        let coords = coords
            .into_iter()
            .map(|c| match c {
                Coord::Term(t) => normalize(&t),
                c => c,
            })
            .collect();
        let m = CubeMorphism { source_dim, coords };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_canonical(source_dim: usize, coords: Vec<Coord>) -> Self {
        let m = CubeMorphism { source_dim, coords };
        debug_assert!(m.validate().is_ok(), "non-canonical morphism {m}");
        m
    }

    pub fn identity(dim: usize) -> Self {
        CubeMorphism {
            source_dim: dim,
            coords: (1..=dim as u8).map(Coord::var).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    /// The generator of the given kind whose *source* has dimension `dim`.
    ///
    /// `face(i, e)` : `[1]^dim -> [1]^(dim+1)`, `degeneracy(i)` and
    /// `connection(i, e)` : `[1]^dim -> [1]^(dim-1)`.
    pub fn generator(kind: CubeGenerator, dim: usize) -> Result<Self> {
        match kind {
            CubeGenerator::Face { i, eps } => {
                let n = dim + 1;
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange(format!("face index {i} for target dim {n}")));
                }
                let mut coords = Vec::with_capacity(n);
                let mut v = 1u8;
                for p in 1..=n {
                    if p == i {
                        coords.push(Coord::Const(eps));
                    } else {
                        coords.push(Coord::var(v));
                        v += 1;
                    }
                }
                Ok(CubeMorphism { source_dim: dim, coords })
            }
            CubeGenerator::Degeneracy { i } => {
                if dim == 0 || i == 0 || i > dim {
                    return Err(Error::IndexOutOfRange(format!("degeneracy index {i} for source dim {dim}")));
                }
                let coords = (1..=dim as u8).filter(|&v| v as usize != i).map(Coord::var).collect();
                Ok(CubeMorphism { source_dim: dim, coords })
            }
            CubeGenerator::Connection { i, eps } => {
                if dim < 2 || i == 0 || i >= dim {
                    return Err(Error::IndexOutOfRange(format!("connection index {i} for source dim {dim}")));
                }
                let mut coords = Vec::with_capacity(dim - 1);
                for v in 1..i as u8 {
                    coords.push(Coord::var(v));
                }
                let pair = vec![Term::Var(i as u8), Term::Var(i as u8 + 1)];
                coords.push(Coord::Term(if eps { Term::Min(pair) } else { Term::Max(pair) }));
                for v in (i as u8 + 2)..=dim as u8 {
                    coords.push(Coord::var(v));
                }
                Ok(CubeMorphism { source_dim: dim, coords })
            }
        }
    }

    /// `g ∘ f` where `self = g`.
    pub fn compose(&self, f: &CubeMorphism) -> Result<CubeMorphism> {
        if f.target_dim() != self.source_dim {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim,
                found: f.target_dim(),
            });
        }
        Ok(self.compose_unchecked(f))
    }

    pub(crate) fn compose_unchecked(&self, f: &CubeMorphism) -> CubeMorphism {
        let coords = self
            .coords
            .iter()
            .map(|c| match c {
                Coord::Const(b) => Coord::Const(*b),
                Coord::Term(t) => substitute(t, &f.coords),
            })
            .collect();
        CubeMorphism {
            source_dim: f.source_dim,
            coords,
        }
    }

    /// `self × other : [1]^(m+m') -> [1]^(n+n')`, the second factor acting on the
    /// trailing variables.
    pub fn tensor(&self, other: &CubeMorphism) -> CubeMorphism {
        fn shift(t: &Term, by: u8) -> Term {
            match t {
                Term::Var(v) => Term::Var(v + by),
                Term::Max(c) => Term::Max(c.iter().map(|s| shift(s, by)).collect()),
                Term::Min(c) => Term::Min(c.iter().map(|s| shift(s, by)).collect()),
            }
        }
        let by = self.source_dim as u8;
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().map(|c| match c {
            Coord::Const(b) => Coord::Const(*b),
            Coord::Term(t) => Coord::Term(shift(t, by)),
        }));
        CubeMorphism {
            source_dim: self.source_dim + other.source_dim,
            coords,
        }
    }

    pub fn eval_bits(&self, x: &[bool]) -> Vec<bool> {
        self.coords.iter().map(|c| c.eval_bits(x)).collect()
    }

    /// Full evaluation table over `{0,1}^m`, points ordered as binary numbers
    /// with variable 1 as the most significant bit.
    pub fn eval_table(&self) -> Vec<Vec<bool>> {
        let m = self.source_dim;
        (0..1usize << m)
            .map(|bits| {
                let x: Vec<bool> = (0..m).map(|j| bits >> (m - 1 - j) & 1 == 1).collect();
                self.eval_bits(&x)
            })
            .collect()
    }

    /// A composite of faces only.
    pub fn is_face_type(&self) -> bool {
        let mut next = 1u8;
        for c in &self.coords {
            match c {
                Coord::Const(_) => {}
                Coord::Term(Term::Var(v)) if *v == next => next += 1,
                _ => return false,
            }
        }
        next as usize == self.source_dim + 1
    }

    /// Surjective: no constant coordinates.
    pub fn is_epi(&self) -> bool {
        self.coords.iter().all(|c| !c.is_const())
    }

    /// Splits `self = mono ∘ epi` with `mono` face-type and `epi` surjective.
    pub fn factor(&self) -> (CubeMorphism, CubeMorphism) {
        let mut mono = Vec::with_capacity(self.coords.len());
        let mut epi = Vec::new();
        for c in &self.coords {
            match c {
                Coord::Const(b) => mono.push(Coord::Const(*b)),
                Coord::Term(t) => {
                    epi.push(Coord::Term(t.clone()));
                    mono.push(Coord::var(epi.len() as u8));
                }
            }
        }
        let j = epi.len();
        (
            CubeMorphism { source_dim: j, coords: mono },
            CubeMorphism {
                source_dim: self.source_dim,
                coords: epi,
            },
        )
    }

    /// A face-type right inverse of an epimorphism.
    pub fn section(&self) -> CubeMorphism {
        debug_assert!(self.is_epi());
        let mut coords = vec![Coord::Const(false); self.source_dim];
        fn set_const(t: &Term, value: bool, coords: &mut [Coord]) {
            for v in t.vars() {
                coords[v as usize - 1] = Coord::Const(value);
            }
        }
        fn carry(t: &Term, q: u8, coords: &mut [Coord]) {
            match t {
                Term::Var(v) => coords[*v as usize - 1] = Coord::var(q),
                Term::Max(c) => {
                    carry(&c[0], q, coords);
                    c[1..].iter().for_each(|s| set_const(s, false, coords));
                }
                Term::Min(c) => {
                    carry(&c[0], q, coords);
                    c[1..].iter().for_each(|s| set_const(s, true, coords));
                }
            }
        }
        for (q, c) in self.coords.iter().enumerate() {
            if let Coord::Term(t) = c {
                carry(t, q as u8 + 1, &mut coords);
            }
        }
        CubeMorphism {
            source_dim: self.coords.len(),
            coords,
        }
    }

    /// Checks membership in the cube category: read-once planar terms on
    /// pairwise disjoint, order-respecting runs of variables.
    pub fn validate(&self) -> Result<()> {
        let mut used: Vec<u8> = Vec::new();
        let mut blocks: Vec<Vec<u8>> = Vec::new();
        for c in &self.coords {
            if let Coord::Term(t) = c {
                if !t.is_canonical() {
                    return Err(Error::InvalidMorphism(format!("non-canonical term {t:?}")));
                }
                let vars = t.vars();
                if vars.iter().any(|&v| v == 0 || v as usize > self.source_dim) {
                    return Err(Error::InvalidMorphism(format!(
                        "variable out of range 1..={}",
                        self.source_dim
                    )));
                }
                used.extend(&vars);
                blocks.push(vars);
            }
        }
        if used.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMorphism(
                "variables must be used at most once and in increasing order".into(),
            ));
        }
        Ok(())
    }

    /// Enumerates every morphism `[1]^m -> [1]^n` in canonical form.
    pub fn all(m: usize, n: usize) -> Vec<CubeMorphism> {
        let mut out = Vec::new();
        for j in 0..=m.min(n) {
            let monos = Self::monos(j, n);
            let epis = Self::epis(m, j);
            for d in &monos {
                for e in &epis {
                    out.push(d.compose_unchecked(e));
                }
            }
        }
        out.sort();
        out
    }

    /// Face-type morphisms `[1]^j -> [1]^n`.
    pub fn monos(j: usize, n: usize) -> Vec<CubeMorphism> {
        let mut out = Vec::new();
        if j > n {
            return out;
        }
        // Choose positions of the j variables, then constants elsewhere.
        for positions in combinations(n, j) {
            let free = n - j;
            for bits in 0..1usize << free {
                let mut coords = Vec::with_capacity(n);
                let mut v = 1u8;
                let mut c = 0;
                for p in 0..n {
                    if positions.contains(&p) {
                        coords.push(Coord::var(v));
                        v += 1;
                    } else {
                        coords.push(Coord::Const(bits >> c & 1 == 1));
                        c += 1;
                    }
                }
                out.push(CubeMorphism { source_dim: j, coords });
            }
        }
        out.sort();
        out
    }

    /// Surjective morphisms `[1]^m -> [1]^j`.
    pub fn epis(m: usize, j: usize) -> Vec<CubeMorphism> {
        let mut out = Vec::new();
        if j > m {
            return out;
        }
        for r in j..=m {
            for used in combinations(m, r) {
                let used: Vec<u8> = used.into_iter().map(|v| v as u8 + 1).collect();
                for cuts in compositions(r, j) {
                    let mut per_block: Vec<Vec<Term>> = Vec::with_capacity(j);
                    let mut start = 0;
                    for len in &cuts {
                        per_block.push(terms_over(&used[start..start + len]));
                        start += len;
                    }
                    for choice in cartesian(&per_block) {
                        out.push(CubeMorphism {
                            source_dim: m,
                            coords: choice.into_iter().map(Coord::Term).collect(),
                        });
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Canonicalizes an arbitrary term tree (flattening and sorting).
fn normalize(t: &Term) -> Coord {
    match t {
        Term::Var(v) => Coord::var(*v),
        Term::Max(c) => simplify_node(true, c.iter().map(normalize).collect()),
        Term::Min(c) => simplify_node(false, c.iter().map(normalize).collect()),
    }
}

/// All canonical terms whose variables are exactly `vars` in order.
fn terms_over(vars: &[u8]) -> Vec<Term> {
    if vars.len() == 1 {
        return vec![Term::Var(vars[0])];
    }
    let mut out = rooted_terms(vars, true);
    out.extend(rooted_terms(vars, false));
    out
}

fn rooted_terms(vars: &[u8], is_max: bool) -> Vec<Term> {
    let r = vars.len();
    let mut out = Vec::new();
    for parts in 2..=r {
        for cuts in compositions(r, parts) {
            let mut options: Vec<Vec<Term>> = Vec::with_capacity(parts);
            let mut start = 0;
            for len in &cuts {
                let block = &vars[start..start + len];
                options.push(if *len == 1 {
                    vec![Term::Var(block[0])]
                } else {
                    rooted_terms(block, !is_max)
                });
                start += len;
            }
            for children in cartesian(&options) {
                out.push(if is_max {
                    Term::Max(children)
                } else {
                    Term::Min(children)
                });
            }
        }
    }
    out
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Ordered ways of writing `n` as a sum of `k` positive parts.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    combinations(n - 1, k - 1)
        .into_iter()
        .map(|cuts| {
            let mut parts = Vec::with_capacity(k);
            let mut prev = 0;
            for c in cuts {
                parts.push(c + 1 - prev);
                prev = c + 1;
            }
            parts.push(n - prev);
            parts
        })
        .collect()
}

fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in opts {
                let mut p = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        fn rank(t: &Term) -> u8 {
            match t {
                Term::Var(_) => 0,
                Term::Max(_) => 1,
                Term::Min(_) => 2,
            }
        }
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Max(a), Term::Max(b)) | (Term::Min(a), Term::Min(b)) => a.cmp(b),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Coord::Const(a), Coord::Const(b)) => a.cmp(b),
            (Coord::Const(_), Coord::Term(_)) => Ordering::Less,
            (Coord::Term(_), Coord::Const(_)) => Ordering::Greater,
            (Coord::Term(a), Coord::Term(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CubeMorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.source_dim, self.coords.len(), &self.coords).cmp(&(
            other.source_dim,
            other.coords.len(),
            &other.coords,
        ))
    }
}

impl PartialOrd for CubeMorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "x{v}"),
            Term::Max(c) | Term::Min(c) => {
                let op = if matches!(self, Term::Max(_)) { "max" } else { "min" };
                write!(f, "{op}(")?;
                for (i, t) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for CubeMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[1]^{} -> (", self.source_dim)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match c {
                Coord::Const(b) => write!(f, "{}", *b as u8)?,
                Coord::Term(t) => write!(f, "{t}")?,
            }
        }
        write!(f, ")")
    }
}

// JSON: {"source_dim": m, "coords": ["const0", 1, {"max": [2, {"min": [3, 4]}]}]}

fn term_to_json(t: &Term) -> Value {
    match t {
        Term::Var(v) => Value::from(*v),
        Term::Max(c) => serde_json::json!({ "max": c.iter().map(term_to_json).collect::<Vec<_>>() }),
        Term::Min(c) => serde_json::json!({ "min": c.iter().map(term_to_json).collect::<Vec<_>>() }),
    }
}

fn term_from_json(v: &Value) -> std::result::Result<Term, String> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .filter(|&x| (1..=255).contains(&x))
            .map(|x| Term::Var(x as u8))
            .ok_or_else(|| format!("bad variable {n}")),
        Value::Object(o) if o.len() == 1 => {
            let (k, arr) = o.iter().next().unwrap();
            let children = arr
                .as_array()
                .ok_or("lattice node expects an array")?
                .iter()
                .map(term_from_json)
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if children.is_empty() {
                return Err("empty lattice node".into());
            }
            match k.as_str() {
                "max" => Ok(Term::Max(children)),
                "min" => Ok(Term::Min(children)),
                other => Err(format!("unknown lattice op {other}")),
            }
        }
        other => Err(format!("bad term {other}")),
    }
}

pub(crate) fn coord_to_json(c: &Coord) -> Value {
    match c {
        Coord::Const(false) => Value::from("const0"),
        Coord::Const(true) => Value::from("const1"),
        Coord::Term(t) => term_to_json(t),
    }
}

pub(crate) fn coord_from_json(v: &Value) -> std::result::Result<Coord, String> {
    match v.as_str() {
        Some("const0") => Ok(Coord::Const(false)),
        Some("const1") => Ok(Coord::Const(true)),
        Some(s) => Err(format!("unknown coordinate {s}")),
        None => term_from_json(v).map(Coord::Term),
    }
}

impl Serialize for CubeMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "source_dim": self.source_dim,
            "coords": self.coords.iter().map(coord_to_json).collect::<Vec<_>>(),
        })
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubeMorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let source_dim = v
            .get("source_dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| de::Error::custom("missing source_dim"))? as usize;
        let coords = v
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| de::Error::custom("missing coords"))?
            .iter()
            .map(coord_from_json)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(de::Error::custom)?;
        CubeMorphism::new(source_dim, coords).map_err(de::Error::custom)
    }
}
