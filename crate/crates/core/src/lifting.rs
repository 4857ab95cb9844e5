//! Lifting problems, generating sets and the classifiers built on them.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::presheaf::json::map_to_json;
use crate::presheaf::product::{end_inclusion, geometric_product};
use crate::presheaf::standard::{representable, StandardCell, StandardKind};
use crate::presheaf::{search_maps, Cell, FinitePresheaf, PresheafMap, SearchOptions};
use crate::site::{Cube, Site, SiteKind, MAX_DIM};
use crate::skeleta::factor_through_mono;

fn same<S: Site>(a: &Arc<FinitePresheaf<S>>, b: &Arc<FinitePresheaf<S>>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A commutative square
///
/// ```text
///   A --u--> X
///   |        |
///   i        f
///   v        v
///   B --v--> Y
/// ```
pub struct LiftingProblem<S: Site> {
    pub left: PresheafMap<S>,
    pub right: PresheafMap<S>,
    pub top: PresheafMap<S>,
    pub bottom: PresheafMap<S>,
}

impl<S: Site> Clone for LiftingProblem<S> {
    fn clone(&self) -> Self {
        LiftingProblem {
            left: self.left.clone(),
            right: self.right.clone(),
            top: self.top.clone(),
            bottom: self.bottom.clone(),
        }
    }
}

impl<S: Site> fmt::Debug for LiftingProblem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LiftingProblem")
            .field("top", &self.top)
            .field("bottom", &self.bottom)
            .finish()
    }
}

impl<S: Site> LiftingProblem<S> {
    pub fn new(left: PresheafMap<S>, right: PresheafMap<S>, top: PresheafMap<S>, bottom: PresheafMap<S>) -> Result<Self> {
        if !same(left.source(), top.source())
            || !same(left.target(), bottom.source())
            || !same(right.source(), top.target())
            || !same(right.target(), bottom.target())
        {
            return Err(Error::MalformedSquare("the four maps do not form a square".into()));
        }
        let a = left.source();
        for j in 0..=a.trunc_dim() {
            for r in a.roots(j) {
                if right.apply(top.apply(r)) != bottom.apply(left.apply(r)) {
                    return Err(Error::MalformedSquare(format!("square does not commute at {r}")));
                }
            }
        }
        Ok(LiftingProblem { left, right, top, bottom })
    }

    /// Constraints on a lift `h`: for each root `b` of `B`, the values
    /// `h(b)·e` must take, coming from roots `a` with `i(a) = b·e`.
    fn constraints(&self) -> HashMap<Cell, Vec<(usize, u32, Cell)>> {
        let mut out: HashMap<Cell, Vec<(usize, u32, Cell)>> = HashMap::new();
        let a = self.left.source();
        for j in 0..=a.trunc_dim() {
            for r in a.roots(j) {
                let img = self.left.apply(r);
                out.entry(img.root_cell()).or_default().push((j, img.epi, self.top.apply(r)));
            }
        }
        out
    }

    /// A diagonal `h : B -> X` with `h∘i = u` and `f∘h = v`, or `None` after
    /// exhausting the search.
    pub fn solve(&self) -> Result<Option<PresheafMap<S>>> {
        let b = self.left.target();
        let x = self.right.source();
        let constraints = self.constraints();
        let mut fixed = HashMap::new();
        for (root, cs) in &constraints {
            if let Some(&(_, _, val)) = cs.iter().find(|(j, _, _)| *j == root.dim()) {
                fixed.insert(*root, val);
            }
        }
        let filter = |root: Cell, cand: Cell| -> bool {
            if self.right.apply(cand) != self.bottom.apply(root) {
                return false;
            }
            match constraints.get(&root) {
                None => true,
                Some(cs) => cs.iter().all(|&(j, e, val)| x.act_epi(cand, j, e) == val),
            }
        };
        let opts = SearchOptions {
            fixed,
            filter: Some(&filter),
            ..Default::default()
        };
        let mut found = None;
        search_maps(b, x, &opts, |asg| {
            found = Some(asg.to_vec());
            ControlFlow::Break(())
        })?;
        found
            .map(|asg| PresheafMap::new(b.clone(), x.clone(), asg))
            .transpose()
    }

    /// Reference solver: enumerate every map `B -> X` and test both triangles.
    pub fn solve_naive(&self) -> Result<Option<PresheafMap<S>>> {
        let b = self.left.target();
        let x = self.right.source();
        let a = self.left.source();
        let mut found = None;
        search_maps(b, x, &SearchOptions::default(), |asg| {
            let h = PresheafMap::new_unchecked(b.clone(), x.clone(), asg.to_vec());
            let lower = b.all_roots().into_iter().all(|r| self.right.apply(h.apply(r)) == self.bottom.apply(r));
            let upper = a.all_roots().into_iter().all(|r| h.apply(self.left.apply(r)) == self.top.apply(r));
            if lower && upper {
                found = Some(h);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(found)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "left": map_to_json(&self.left),
            "right": map_to_json(&self.right),
            "top": map_to_json(&self.top),
            "bottom": map_to_json(&self.bottom),
        })
    }
}

/// Outcome of checking lifting properties over a family of squares.
#[derive(Debug)]
pub struct RlpReport<S: Site> {
    pub holds: bool,
    pub squares: u64,
    /// The first square without a lift, labelled by its member.
    pub counterexample: Option<(String, LiftingProblem<S>)>,
}

impl<S: Site> RlpReport<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "squares_checked": self.squares,
            "counterexample": self.counterexample.as_ref().map(|(m, p)| json!({"member": m, "square": p.to_json()})),
        })
    }
}

/// Every square from `i` to `f`, as `(u, v)` pairs.
pub fn squares<S: Site>(i: &PresheafMap<S>, f: &PresheafMap<S>) -> Result<Vec<(PresheafMap<S>, PresheafMap<S>)>> {
    let mut out = Vec::new();
    for_each_square(i, f, |u, v| {
        out.push((u, v));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

fn for_each_square<S: Site>(
    i: &PresheafMap<S>,
    f: &PresheafMap<S>,
    mut visit: impl FnMut(PresheafMap<S>, PresheafMap<S>) -> ControlFlow<()>,
) -> Result<()> {
    let (a, b) = (i.source(), i.target());
    let (x, y) = (f.source(), f.target());
    let mut bottoms = Vec::new();
    search_maps(b, y, &SearchOptions::default(), |asg| {
        bottoms.push(PresheafMap::new_unchecked(b.clone(), y.clone(), asg.to_vec()));
        ControlFlow::Continue(())
    })?;
    for v in bottoms {
        let filter = |root: Cell, cand: Cell| f.apply(cand) == v.apply(i.apply(root));
        let opts = SearchOptions {
            filter: Some(&filter),
            ..Default::default()
        };
        let mut stop = false;
        search_maps(a, x, &opts, |asg| {
            let u = PresheafMap::new_unchecked(a.clone(), x.clone(), asg.to_vec());
            if visit(u, v.clone()).is_break() {
                stop = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        if stop {
            break;
        }
    }
    Ok(())
}

/// Does `f` have the right lifting property against the single map `i`?
pub fn has_rlp_against<S: Site>(f: &PresheafMap<S>, i: &PresheafMap<S>, label: &str) -> Result<RlpReport<S>> {
    let mut report = RlpReport {
        holds: true,
        squares: 0,
        counterexample: None,
    };
    let mut err = None;
    for_each_square(i, f, |u, v| {
        report.squares += 1;
        let p = LiftingProblem {
            left: i.clone(),
            right: f.clone(),
            top: u,
            bottom: v,
        };
        match p.solve() {
            Ok(Some(_)) => ControlFlow::Continue(()),
            Ok(None) => {
                report.holds = false;
                report.counterexample = Some((label.to_string(), p));
                ControlFlow::Break(())
            }
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratingSetName {
    JNSimplicial,
    JNPrimeSimplicial,
    INPrimeSimplicial,
    JCubical,
    JNCubical,
    JNPrimeCubical,
    INPrimeCubical,
}

impl GeneratingSetName {
    pub fn site(&self) -> SiteKind {
        use GeneratingSetName::*;
        match self {
            JNSimplicial | JNPrimeSimplicial | INPrimeSimplicial => SiteKind::Simplicial,
            _ => SiteKind::Cubical,
        }
    }

    /// Whether the set has members of unbounded dimension.
    pub fn is_infinite(&self) -> bool {
        use GeneratingSetName::*;
        matches!(self, JNSimplicial | JCubical | JNCubical)
    }

    /// Resolves the short CLI names (`J`, `Jn`, `Jn-prime`, `In-prime`) on a site.
    pub fn from_short(name: &str, site: SiteKind) -> Result<Self> {
        use GeneratingSetName::*;
        let cubical = site == SiteKind::Cubical;
        Ok(match (name.to_ascii_lowercase().replace('_', "-").as_str(), cubical) {
            ("j", true) | ("kan", true) => JCubical,
            ("jn", true) => JNCubical,
            ("jn", false) => JNSimplicial,
            ("jn-prime", true) | ("jn'", true) => JNPrimeCubical,
            ("jn-prime", false) | ("jn'", false) => JNPrimeSimplicial,
            ("in-prime", true) | ("in'", true) => INPrimeCubical,
            ("in-prime", false) | ("in'", false) => INPrimeSimplicial,
            _ => return Err(Error::Parse(format!("unknown generating set {name} for the {site} site"))),
        })
    }
}

impl FromStr for GeneratingSetName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_string())).map_err(|_| Error::Parse(format!("unknown generating set {s}")))
    }
}

/// One generator `domain ↪ codomain`, both standard subobjects of the
/// representable of dimension `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Member {
    pub k: usize,
    pub domain: StandardKind,
    pub codomain: StandardKind,
}

impl Member {
    pub fn label(&self) -> String {
        format!("{} ↪ {}", self.domain.label(self.k), self.codomain.label(self.k))
    }

    /// The inclusion, with both ends truncated at `trunc_dim`.
    pub fn realize<S: Site>(&self, trunc_dim: usize) -> Result<PresheafMap<S>> {
        let dom = StandardCell::<S>::build(self.domain, self.k, trunc_dim)?;
        if self.codomain.is_representable() {
            return Ok(dom.inclusion);
        }
        let cod = StandardCell::<S>::build(self.codomain, self.k, trunc_dim)?;
        factor_through_mono(&dom.inclusion, &cod.inclusion.with_target(dom.inclusion.target().clone())?)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratingSet {
    pub name: GeneratingSetName,
    pub n: usize,
    /// Dimension bound used for the infinite sets.
    pub kmax: Option<usize>,
    pub members: Vec<Member>,
}

fn opens(site: SiteKind, k: usize) -> Vec<StandardKind> {
    match site {
        SiteKind::Cubical => (1..=k)
            .flat_map(|i| [false, true].map(|eps| StandardKind::OpenBox { i, eps }))
            .collect(),
        SiteKind::Simplicial => (0..=k).map(|i| StandardKind::Horn { i }).collect(),
    }
}

fn kinds(site: SiteKind) -> (StandardKind, StandardKind) {
    match site {
        SiteKind::Cubical => (StandardKind::Cube, StandardKind::CubeBoundary),
        SiteKind::Simplicial => (StandardKind::Simplex, StandardKind::SimplexBoundary),
    }
}

impl GeneratingSet {
    /// Builds the named set at level `n`. Infinite sets keep only members of
    /// dimension `<= kmax`, which is then required.
    pub fn build(name: GeneratingSetName, n: usize, kmax: Option<usize>) -> Result<Self> {
        use GeneratingSetName::*;
        let site = name.site();
        let (rep, bd) = kinds(site);
        let kmax = if name.is_infinite() {
            let k = kmax.ok_or_else(|| Error::InvalidParameters(format!("{name:?} is infinite; a dimension bound is required")))?;
            if k > MAX_DIM {
                return Err(Error::InvalidParameters(format!("kmax {k} exceeds {MAX_DIM}")));
            }
            Some(k)
        } else {
            None
        };
        let mut members = Vec::new();
        let push_opens = |members: &mut Vec<Member>, k: usize, codomain| {
            for o in opens(site, k) {
                members.push(Member { k, domain: o, codomain });
            }
        };
        match name {
            JCubical => {
                for k in 1..=kmax.unwrap() {
                    push_opens(&mut members, k, rep);
                }
            }
            JNCubical | JNSimplicial => {
                for k in 1..=kmax.unwrap() {
                    push_opens(&mut members, k, rep);
                }
                for k in n + 2..=kmax.unwrap() {
                    members.push(Member { k, domain: bd, codomain: rep });
                }
            }
            JNPrimeCubical | JNPrimeSimplicial => {
                for k in 1..=n + 1 {
                    push_opens(&mut members, k, rep);
                }
                push_opens(&mut members, n + 2, bd);
            }
            INPrimeCubical | INPrimeSimplicial => {
                for k in 0..=n + 1 {
                    members.push(Member { k, domain: bd, codomain: rep });
                }
            }
        }
        if n + 2 > MAX_DIM {
            return Err(Error::InvalidParameters(format!("level {n} too large")));
        }
        Ok(GeneratingSet { name, n, kmax, members })
    }

    pub fn site(&self) -> SiteKind {
        self.name.site()
    }

    pub fn max_dim(&self) -> usize {
        self.members.iter().map(|m| m.k).max().unwrap_or(0)
    }
}

/// Checks every square over every member of `set`. Members are realized at
/// the truncation of `f`'s source.
pub fn has_rlp<S: Site>(f: &PresheafMap<S>, set: &GeneratingSet) -> Result<RlpReport<S>> {
    if set.site() != S::KIND {
        return Err(Error::SiteMismatch(format!("{:?} is not a {} set", set.name, S::KIND)));
    }
    let d = f.source().trunc_dim();
    if set.max_dim() > d {
        return Err(Error::TruncationTooLow {
            needed: set.max_dim(),
            available: d,
        });
    }
    let mut total = 0;
    for m in &set.members {
        let i = m.realize::<S>(d)?;
        let r = has_rlp_against(f, &i, &m.label())?;
        total += r.squares;
        if !r.holds {
            return Ok(RlpReport { squares: total, ..r });
        }
    }
    Ok(RlpReport {
        holds: true,
        squares: total,
        counterexample: None,
    })
}

pub fn is_transferred_naive_n_fibration<S: Site>(f: &PresheafMap<S>, n: usize) -> Result<RlpReport<S>> {
    let name = match S::KIND {
        SiteKind::Cubical => GeneratingSetName::JNPrimeCubical,
        SiteKind::Simplicial => GeneratingSetName::JNPrimeSimplicial,
    };
    has_rlp(f, &GeneratingSet::build(name, n, None)?)
}

pub fn is_acyclic_transferred_fibration<S: Site>(f: &PresheafMap<S>, n: usize) -> Result<RlpReport<S>> {
    let name = match S::KIND {
        SiteKind::Cubical => GeneratingSetName::INPrimeCubical,
        SiteKind::Simplicial => GeneratingSetName::INPrimeSimplicial,
    };
    has_rlp(f, &GeneratingSet::build(name, n, None)?)
}

/// Naive `n`-fibration on generators: lifting against `J_n` cut at `kmax`.
pub fn is_naive_n_fibration_bounded<S: Site>(f: &PresheafMap<S>, n: usize, kmax: usize) -> Result<RlpReport<S>> {
    let name = match S::KIND {
        SiteKind::Cubical => GeneratingSetName::JNCubical,
        SiteKind::Simplicial => GeneratingSetName::JNSimplicial,
    };
    has_rlp(f, &GeneratingSet::build(name, n, Some(kmax))?)
}

/// Kan fibration test against open boxes (or horns) of dimension `<= kmax`.
pub fn is_kan_fibration_bounded<S: Site>(f: &PresheafMap<S>, kmax: usize) -> Result<RlpReport<S>> {
    let site = S::KIND;
    let (rep, _) = kinds(site);
    let members = (1..=kmax)
        .flat_map(|k| opens(site, k).into_iter().map(move |o| Member { k, domain: o, codomain: rep }))
        .collect();
    let set = GeneratingSet {
        name: match site {
            SiteKind::Cubical => GeneratingSetName::JCubical,
            SiteKind::Simplicial => GeneratingSetName::JNSimplicial,
        },
        n: 0,
        kmax: Some(kmax),
        members,
    };
    has_rlp(f, &set)
}

/// Result of [`elementary_homotopy_search`].
#[derive(Debug)]
pub enum HomotopySearch {
    /// Elementary homotopies `H_1, …, H_m : X ⊗ □¹ -> Y` linking `f` to `g`;
    /// consecutive ones share an end, in either orientation.
    Found(Vec<PresheafMap<Cube>>),
    /// No chain of length `<= max_chain`. `exhausted` means the whole zig-zag
    /// class of `f` was explored, so no chain of any length exists.
    NoneFound { exhausted: bool },
}

impl HomotopySearch {
    pub fn chain_len(&self) -> Option<usize> {
        match self {
            HomotopySearch::Found(c) => Some(c.len()),
            HomotopySearch::NoneFound { .. } => None,
        }
    }
}

/// Searches for a zig-zag of elementary homotopies from `f` to `g`.
pub fn elementary_homotopy_search(
    f: &PresheafMap<Cube>,
    g: &PresheafMap<Cube>,
    max_chain: usize,
) -> Result<HomotopySearch> {
    if !same(f.source(), g.source()) || !same(f.target(), g.target()) {
        return Err(Error::EndpointMismatch("f and g must be parallel".into()));
    }
    let x = f.source().clone();
    let y = f.target().clone();
    let d = y.trunc_dim();
    let interval = representable::<Cube>(1, d.max(1))?;
    let cyl = geometric_product(&x, &interval, d)?;
    let ends = [
        end_inclusion(&x, &cyl, &interval, false)?,
        end_inclusion(&x, &cyl, &interval, true)?,
    ];
    let cp = cyl.presheaf.clone();
    let end_assignment = |h: &[Vec<Cell>], e: usize| -> Vec<Vec<Cell>> {
        ends[e]
            .assignment()
            .iter()
            .map(|l| l.iter().map(|&c| PresheafMap::new_unchecked(cp.clone(), y.clone(), h.to_vec()).apply(c)).collect())
            .collect()
    };
    // homotopies with end `e` prescribed to be `m`
    let with_end = |m: &[Vec<Cell>], e: usize, other: Option<&[Vec<Cell>]>| -> Result<Vec<Vec<Vec<Cell>>>> {
        let mut fixed = HashMap::new();
        for (j, l) in ends[e].assignment().iter().enumerate() {
            for (r, &c) in l.iter().enumerate() {
                fixed.insert(c, m[j][r]);
            }
        }
        if let Some(o) = other {
            for (j, l) in ends[1 - e].assignment().iter().enumerate() {
                for (r, &c) in l.iter().enumerate() {
                    fixed.insert(c, o[j][r]);
                }
            }
        }
        let opts = SearchOptions {
            fixed,
            ..Default::default()
        };
        let mut out = Vec::new();
        search_maps(&cp, &y, &opts, |asg| {
            out.push(asg.to_vec());
            if other.is_some() {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(out)
    };
    let wrap = |h: Vec<Vec<Cell>>| PresheafMap::new(cp.clone(), y.clone(), h);

    let start = f.assignment().to_vec();
    let goal = g.assignment().to_vec();
    if start == goal {
        let hs = with_end(&start, 0, Some(&start))?;
        let h = hs.into_iter().next().ok_or_else(|| Error::Internal("no degenerate homotopy".into()))?;
        return Ok(HomotopySearch::Found(vec![wrap(h)?]));
    }
    let mut parent: HashMap<Vec<Vec<Cell>>, (Vec<Vec<Cell>>, Vec<Vec<Cell>>)> = HashMap::new();
    let mut depth: HashMap<Vec<Vec<Cell>>, usize> = HashMap::new();
    depth.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start.clone()]);
    let mut truncated = false;
    while let Some(m) = queue.pop_front() {
        let dm = depth[&m];
        if dm == max_chain {
            truncated = true;
            continue;
        }
        for e in 0..2 {
            for h in with_end(&m, e, None)? {
                let other = end_assignment(&h, 1 - e);
                if depth.contains_key(&other) {
                    continue;
                }
                depth.insert(other.clone(), dm + 1);
                parent.insert(other.clone(), (m.clone(), h));
                if other == goal {
                    let mut chain = Vec::new();
                    let mut cur = other;
                    while let Some((prev, h)) = parent.remove(&cur) {
                        chain.push(wrap(h)?);
                        cur = prev;
                    }
                    chain.reverse();
                    return Ok(HomotopySearch::Found(chain));
                }
                queue.push_back(other);
            }
        }
    }
    Ok(HomotopySearch::NoneFound { exhausted: !truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::standard::build_standard;
    use crate::site::Simplex;

    fn to_point<S: Site>(x: &Arc<FinitePresheaf<S>>) -> PresheafMap<S> {
        let pt = Arc::new(representable::<S>(0, x.trunc_dim()).unwrap());
        let asg = (0..=x.trunc_dim())
            .map(|j| x.roots(j).map(|_| pt.act_epi(Cell::nondegenerate(0, 0), j, 0)).collect())
            .collect();
        PresheafMap::new(x.clone(), pt, asg).unwrap()
    }

    #[test]
    fn endpoints_of_interval_do_not_lift() {
        let b = build_standard::<Cube>(StandardKind::CubeBoundary, 1, 3).unwrap();
        let f = to_point(&b.realized);
        let u = PresheafMap::identity(b.realized.clone());
        let v = to_point(b.inclusion.target());
        let p = LiftingProblem::new(b.inclusion.clone(), f, u, v).unwrap();
        assert!(p.solve().unwrap().is_none());
        assert!(p.solve_naive().unwrap().is_none());
    }

    #[test]
    fn identity_left_map_lifts_by_top() {
        let x = build_standard::<Cube>(StandardKind::OpenBox { i: 1, eps: false }, 2, 2).unwrap().realized;
        let i = PresheafMap::identity(x.clone());
        let f = to_point(&x);
        let p = LiftingProblem::new(i, f.clone(), PresheafMap::identity(x.clone()), f).unwrap();
        assert_eq!(p.solve().unwrap().unwrap(), PresheafMap::identity(x));
    }

    #[test]
    fn open_square_fills_in_square() {
        let b = build_standard::<Cube>(StandardKind::OpenBox { i: 1, eps: false }, 2, 2).unwrap();
        let sq = b.inclusion.target().clone();
        let f = to_point(&sq);
        let p = LiftingProblem::new(b.inclusion.clone(), f.clone(), b.inclusion.clone(), f).unwrap();
        assert_eq!(p.solve().unwrap().unwrap(), PresheafMap::identity(sq));
    }

    #[test]
    fn non_commuting_square_rejected() {
        let b = build_standard::<Cube>(StandardKind::CubeBoundary, 1, 1).unwrap();
        let i = b.inclusion.clone();
        let sq = i.target().clone();
        let f = PresheafMap::identity(sq.clone());
        // u sends both endpoints to vertex 0, v is the identity
        let u = PresheafMap::new(b.realized.clone(), sq.clone(), vec![vec![Cell::nondegenerate(0, 0); 2], vec![]]).unwrap();
        let v = PresheafMap::identity(sq);
        assert!(matches!(LiftingProblem::new(i, f, u, v), Err(Error::MalformedSquare(_))));
    }

    #[test]
    fn rlp_examples() {
        let b = build_standard::<Cube>(StandardKind::CubeBoundary, 1, 3).unwrap();
        let set = GeneratingSet::build(GeneratingSetName::INPrimeCubical, 0, None).unwrap();
        let r = has_rlp(&to_point(&b.realized), &set).unwrap();
        assert!(!r.holds);
        assert!(r.counterexample.unwrap().0.contains("∂□^1"));
        let iv = Arc::new(representable::<Cube>(1, 3).unwrap());
        // the square picking the endpoints in order lifts by the 1-cell ...
        let bd = build_standard::<Cube>(StandardKind::CubeBoundary, 1, 3).unwrap();
        let i = bd.inclusion.with_target(iv.clone()).unwrap();
        let p = LiftingProblem::new(i.clone(), to_point(&iv), i.clone(), to_point(&iv)).unwrap();
        assert!(p.solve().unwrap().is_some());
        // ... but cubical sets have no reversal, so the swapped square does not
        let r = has_rlp(&to_point(&iv), &set).unwrap();
        assert!(!r.holds);
        let (_, p) = r.counterexample.unwrap();
        let v = |c| p.top.apply(Cell::nondegenerate(0, c));
        assert_eq!(i.apply(Cell::nondegenerate(0, 0)), v(1));
        assert_eq!(i.apply(Cell::nondegenerate(0, 1)), v(0));
        assert!(has_rlp(&PresheafMap::identity(iv), &set).unwrap().holds);
    }

    #[test]
    fn truncation_too_low() {
        let iv = Arc::new(representable::<Cube>(1, 1).unwrap());
        let set = GeneratingSet::build(GeneratingSetName::JNPrimeCubical, 0, None).unwrap();
        assert!(matches!(has_rlp(&to_point(&iv), &set), Err(Error::TruncationTooLow { .. })));
    }

    #[test]
    fn generating_set_sizes() {
        use GeneratingSetName::*;
        // open boxes in dims 1, 2 plus 4 boxes into ∂□^2 ... for n = 0
        let j0 = GeneratingSet::build(JNPrimeCubical, 0, None).unwrap();
        assert_eq!(j0.members.len(), 2 + 4);
        let i1 = GeneratingSet::build(INPrimeSimplicial, 1, None).unwrap();
        assert_eq!(i1.members.iter().map(|m| m.k).collect::<Vec<_>>(), vec![0, 1, 2]);
        let js = GeneratingSet::build(JNPrimeSimplicial, 1, None).unwrap();
        assert_eq!(js.members.len(), 2 + 3 + 4);
        assert!(GeneratingSet::build(JCubical, 0, None).is_err());
        let top = j0.members.last().unwrap().realize::<Cube>(3).unwrap();
        assert_eq!(top.target().nondegenerate_counts(), vec![4, 4, 0, 0]);
        assert!(top.is_mono());
    }

    #[test]
    fn triangle_is_not_kan() {
        // an outer horn whose edges point the wrong way has no filler
        let t = Arc::new(representable::<Simplex>(2, 3).unwrap());
        let r = is_kan_fibration_bounded(&to_point(&t), 2).unwrap();
        assert!(!r.holds);
        assert!(is_kan_fibration_bounded(&PresheafMap::identity(t), 3).unwrap().holds);
    }

    #[test]
    fn homotopy_examples() {
        let pt = Arc::new(representable::<Cube>(0, 2).unwrap());
        let iv = Arc::new(representable::<Cube>(1, 2).unwrap());
        let vtx = |y: &Arc<FinitePresheaf<Cube>>, v: u32| {
            let mut a = vec![vec![Cell::nondegenerate(0, v)]];
            a.extend((1..=2).map(|_| Vec::new()));
            PresheafMap::new(pt.clone(), y.clone(), a).unwrap()
        };
        let r = elementary_homotopy_search(&vtx(&iv, 0), &vtx(&iv, 1), 3).unwrap();
        assert_eq!(r.chain_len(), Some(1));
        let r = elementary_homotopy_search(&vtx(&iv, 0), &vtx(&iv, 0), 3).unwrap();
        assert_eq!(r.chain_len(), Some(1));

        let bd = build_standard::<Cube>(StandardKind::CubeBoundary, 2, 2).unwrap();
        let sq = bd.inclusion.target();
        let corner = |bits: [bool; 2]| {
            let m = crate::site::CubeMorphism::new(0, bits.map(crate::site::Coord::Const).to_vec()).unwrap();
            let c = crate::presheaf::standard::representable_cell::<Cube>(&m);
            // pull the vertex of □² back into ∂□²
            let idx = (0..4).find(|&v| bd.inclusion.apply(Cell::nondegenerate(0, v)) == c).unwrap();
            vtx(&bd.realized, idx)
        };
        let _ = sq;
        let r = elementary_homotopy_search(&corner([false, false]), &corner([true, true]), 4).unwrap();
        assert_eq!(r.chain_len(), Some(2));
        let r = elementary_homotopy_search(&corner([false, false]), &corner([true, true]), 1).unwrap();
        assert!(matches!(r, HomotopySearch::NoneFound { exhausted: false }));

        let two = Arc::new(bd.realized.truncate(0).unwrap().retruncate(2).unwrap());
        let r = elementary_homotopy_search(&vtx(&two, 0), &vtx(&two, 3), 5).unwrap();
        assert!(matches!(r, HomotopySearch::NoneFound { exhausted: true }));
    }
}
