//! Truncation, skeleta and coskeleta.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presheaf::standard::{representable, StandardCell, StandardKind};
use crate::presheaf::{find_isomorphism_over, search_maps, Cell, FinitePresheaf, PresheafMap, SearchOptions};
use crate::site::{Cube, Simplex, Site, SiteKind, MAX_DIM};

pub fn truncate<S: Site>(x: &FinitePresheaf<S>, n: usize) -> Result<FinitePresheaf<S>> {
    x.truncate(n)
}

/// `sk_n X ↪ X`: the subpresheaf generated by the nondegenerate cells of
/// dimension at most `n`, returned as its inclusion (the counit).
pub fn skeleton<S: Site>(x: &Arc<FinitePresheaf<S>>, n: usize) -> Result<PresheafMap<S>> {
    if n > x.trunc_dim() {
        return Err(Error::TruncationTooLow {
            needed: n,
            available: x.trunc_dim(),
        });
    }
    x.subpresheaf(|r| r.dim() <= n)
}

/// Factors `g : A -> B` through a monomorphism `m : C -> B` whose image
/// contains the image of `g`.
pub fn factor_through_mono<S: Site>(g: &PresheafMap<S>, m: &PresheafMap<S>) -> Result<PresheafMap<S>> {
    let mut preimage: HashMap<Cell, Cell> = HashMap::new();
    for j in 0..=m.source().trunc_dim() {
        for r in m.source().roots(j) {
            preimage.insert(m.apply(r), r);
        }
    }
    let assignment = g
        .assignment()
        .iter()
        .map(|vals| {
            vals.iter()
                .map(|v| {
                    let r = preimage
                        .get(&v.root_cell())
                        .ok_or_else(|| Error::MalformedMap(format!("{v} is outside the image")))?;
                    Ok(Cell { root: r.root, ..*v })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PresheafMap::new(g.source().clone(), m.source().clone(), assignment)
}

/// `sk_n i : sk_n A -> sk_n B` together with both counits.
pub struct SkeletonMap<S: Site> {
    pub source_counit: PresheafMap<S>,
    pub target_counit: PresheafMap<S>,
    pub map: PresheafMap<S>,
}

pub fn skeleton_map<S: Site>(i: &PresheafMap<S>, n: usize) -> Result<SkeletonMap<S>> {
    let ea = skeleton(i.source(), n)?;
    let eb = skeleton(i.target(), n)?;
    let map = factor_through_mono(&ea.then(i)?, &eb)?;
    Ok(SkeletonMap {
        source_counit: ea,
        target_counit: eb,
        map,
    })
}

/// `cosk_n X` truncated at `out_dim`. A `k`-cell is a map
/// `sk_n □^k -> X` (or `sk_n Δ^k -> X`), stored as the images of the
/// nondegenerate cells of the representable, i.e. of the monos `[j] -> [k]`
/// with `j <= n`.
pub struct Coskeleton<S: Site> {
    pub n: usize,
    pub presheaf: Arc<FinitePresheaf<S>>,
    /// `η_X : X -> cosk_n X`, with `X` viewed at truncation `out_dim`.
    pub unit: PresheafMap<S>,
    families: Vec<Vec<Family>>,
    index: Vec<HashMap<Vec<Vec<Cell>>, Cell>>,
}

type Family = Vec<Vec<Cell>>;

fn restrict_family<S: Site>(x: &FinitePresheaf<S>, n: usize, k: usize, phi: &Family, m: &S::Mor) -> Family {
    let a = S::source(m);
    (0..=n)
        .map(|j| {
            if j > a {
                return Vec::new();
            }
            S::monos(j, a)
                .list
                .iter()
                .map(|u| {
                    let (d, e) = S::factor(&S::compose(m, u));
                    let jd = S::source(&d);
                    debug_assert!(jd <= n && S::target(&d) == k);
                    let v = phi[jd][S::mono_index(&d) as usize];
                    x.act_epi(v, j, S::epi_index(&e))
                })
                .collect()
        })
        .collect()
}

impl<S: Site> Coskeleton<S> {
    pub fn build(x: &Arc<FinitePresheaf<S>>, n: usize, out_dim: usize) -> Result<Self> {
        if n > x.trunc_dim() {
            return Err(Error::TruncationTooLow {
                needed: n,
                available: x.trunc_dim(),
            });
        }
        if out_dim > MAX_DIM {
            return Err(Error::InvalidParameters(format!("out_dim {out_dim} exceeds {MAX_DIM}")));
        }
        let xn = x.truncate(n)?;
        let mut cells: Vec<Vec<Family>> = Vec::with_capacity(out_dim + 1);
        for k in 0..=out_dim {
            let skr = representable::<S>(k, n)?;
            let mut level = Vec::new();
            search_maps(&skr, &xn, &SearchOptions::default(), |asg| {
                level.push(asg.to_vec());
                ControlFlow::Continue(())
            })?;
            cells.push(level);
        }
        let classified = FinitePresheaf::<S>::from_action(out_dim, cells, |phi, m| {
            let k = S::target(m);
            restrict_family(&xn, n, k, phi, m)
        })?;
        let presheaf = Arc::new(classified.presheaf);
        let source = if x.trunc_dim() == out_dim {
            x.clone()
        } else {
            Arc::new(x.retruncate(out_dim)?)
        };
        let mut assignment = Vec::with_capacity(out_dim + 1);
        for k in 0..=out_dim {
            let mut vals = Vec::with_capacity(source.n_roots(k));
            for r in source.roots(k) {
                let fam: Family = (0..=n)
                    .map(|j| {
                        if j > k {
                            return Vec::new();
                        }
                        S::monos(j, k).list.iter().map(|u| source.act(r, u)).collect()
                    })
                    .collect();
                vals.push(*classified.index[k].get(&fam).ok_or_else(|| {
                    Error::Internal(format!("characteristic map of {r} missing from the coskeleton"))
                })?);
            }
            assignment.push(vals);
        }
        let unit = PresheafMap::new(source, presheaf.clone(), assignment)?;
        Ok(Coskeleton {
            n,
            presheaf,
            unit,
            families: classified.roots,
            index: classified.index,
        })
    }

    /// The matching family behind a nondegenerate cell.
    pub fn family_of_root(&self, c: Cell) -> &Family {
        &self.families[c.dim()][c.root as usize]
    }

    /// The matching family behind any cell.
    pub fn family(&self, c: Cell) -> Family {
        let root = self.family_of_root(c.root_cell());
        if c.is_nondegenerate() {
            return root.clone();
        }
        let xn = self.unit.source();
        restrict_family(xn, self.n, c.root_dim as usize, root, self.presheaf.epi_of(c))
    }

    pub fn cell_of(&self, dim: usize, family: &Family) -> Option<Cell> {
        self.cell_of_dim(dim, family)
    }

    fn cell_of_dim(&self, dim: usize, family: &Family) -> Option<Cell> {
        self.index.get(dim)?.get(family).copied()
    }
}

pub fn coskeleton<S: Site>(x: &Arc<FinitePresheaf<S>>, n: usize, out_dim: usize) -> Result<Coskeleton<S>> {
    Coskeleton::build(x, n, out_dim)
}

/// `cosk_n f : cosk_n X -> cosk_n Y`, by postcomposition.
pub fn coskeleton_map<S: Site>(f: &PresheafMap<S>, cx: &Coskeleton<S>, cy: &Coskeleton<S>) -> Result<PresheafMap<S>> {
    if cx.n != cy.n || cx.presheaf.trunc_dim() != cy.presheaf.trunc_dim() {
        return Err(Error::InvalidParameters("coskeleta built with different parameters".into()));
    }
    let assignment = (0..=cx.presheaf.trunc_dim())
        .map(|k| {
            cx.presheaf
                .roots(k)
                .map(|r| {
                    let fam: Family = cx
                        .family_of_root(r)
                        .iter()
                        .map(|l| l.iter().map(|&c| f.apply(c)).collect())
                        .collect();
                    cy.cell_of_dim(k, &fam)
                        .ok_or_else(|| Error::Internal("image family missing from the target coskeleton".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PresheafMap::new(cx.presheaf.clone(), cy.presheaf.clone(), assignment)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCase {
    pub site: SiteKind,
    pub n: usize,
    pub k: usize,
    pub member: String,
    pub expected: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityReport {
    pub cases: Vec<IdentityCase>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCase> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

fn iso_over<S: Site>(a: &PresheafMap<S>, b: &PresheafMap<S>) -> Result<bool> {
    Ok(find_isomorphism_over(a, b)?.is_some())
}

/// Checks `sk_{n+1}` of one boundary, horn or open-box inclusion.
fn check_member<S: Site>(kind: StandardKind, k: usize, n: usize) -> Result<IdentityCase> {
    let trunc = k.max(n + 1);
    let member = StandardCell::<S>::build(kind, k, trunc)?;
    let i = &member.inclusion;
    let rep = i.target().clone();
    let sk = skeleton_map(i, n + 1)?;
    let sk_a_in_rep = sk.source_counit.then(i)?;
    let sk_b_in_rep = &sk.target_counit;
    let boundary_kind = match S::KIND {
        SiteKind::Cubical => StandardKind::CubeBoundary,
        SiteKind::Simplicial => StandardKind::SimplexBoundary,
    };
    let open = kind.is_open();
    let (expected, passed) = if k <= n + 1 {
        let id = PresheafMap::identity(rep.clone());
        ("itself", iso_over(&sk_a_in_rep, i)? && iso_over(sk_b_in_rep, &id)?)
    } else if open && k == n + 2 {
        let bd = StandardCell::<S>::build(boundary_kind, k, trunc)?;
        let bd_incl = bd.inclusion.with_target(rep.clone())?;
        (
            "open part ↪ boundary",
            iso_over(&sk_a_in_rep, i)? && iso_over(sk_b_in_rep, &bd_incl)?,
        )
    } else {
        ("identity", iso_over(&sk_a_in_rep, sk_b_in_rep)?)
    };
    let target = match S::KIND {
        SiteKind::Cubical => format!("□^{k}"),
        SiteKind::Simplicial => format!("Δ^{k}"),
    };
    Ok(IdentityCase {
        site: S::KIND,
        n,
        k,
        member: format!("{} ↪ {target}", kind.label(k)),
        expected: expected.to_string(),
        passed,
    })
}

fn verify_site<S: Site>(n: usize, k_max: usize) -> Result<IdentityReport> {
    let mut cases = Vec::new();
    for k in 0..=k_max {
        let boundary = match S::KIND {
            SiteKind::Cubical => StandardKind::CubeBoundary,
            SiteKind::Simplicial => StandardKind::SimplexBoundary,
        };
        cases.push(check_member::<S>(boundary, k, n)?);
        if k == 0 {
            continue;
        }
        match S::KIND {
            SiteKind::Cubical => {
                for i in 1..=k {
                    for eps in [false, true] {
                        cases.push(check_member::<S>(StandardKind::OpenBox { i, eps }, k, n)?);
                    }
                }
            }
            SiteKind::Simplicial => {
                for i in 0..=k {
                    cases.push(check_member::<S>(StandardKind::Horn { i }, k, n)?);
                }
            }
        }
    }
    Ok(IdentityReport { cases })
}

/// Checks the skeletal identities for boundary inclusions and for horn or
/// open-box inclusions of every dimension `k <= k_max`.
pub fn verify_skeletal_identities(site: SiteKind, n: usize, k_max: usize) -> Result<IdentityReport> {
    if k_max > MAX_DIM {
        return Err(Error::InvalidParameters(format!("k_max {k_max} exceeds {MAX_DIM}")));
    }
    match site {
        SiteKind::Cubical => verify_site::<Cube>(n, k_max),
        SiteKind::Simplicial => verify_site::<Simplex>(n, k_max),
    }
}
