use std::sync::Arc;

use ntype::presheaf::product::geometric_product;
use ntype::presheaf::random::{random_presheaf, RandomSpec};
use ntype::presheaf::standard::{build_standard, representable, StandardKind};
use ntype::presheaf::{count_maps, enumerate_maps, is_isomorphic, Cell, FinitePresheaf, PresheafMap};
use ntype::site::{Cube, Simplex, Site};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every assignment of same-dimensional cells to roots, kept when valid.
fn naive_count<S: Site>(a: &Arc<FinitePresheaf<S>>, x: &Arc<FinitePresheaf<S>>) -> u64 {
    let roots = a.all_roots();
    let choices: Vec<Vec<Cell>> = roots.iter().map(|r| x.cells(r.dim())).collect();
    let mut idx = vec![0usize; roots.len()];
    let mut count = 0;
    if choices.iter().any(|c| c.is_empty()) {
        return 0;
    }
    loop {
        let mut asg: Vec<Vec<Cell>> = (0..=a.trunc_dim()).map(|j| vec![Cell::nondegenerate(0, 0); a.n_roots(j)]).collect();
        for (p, r) in roots.iter().enumerate() {
            asg[r.dim()][r.root as usize] = choices[p][idx[p]];
        }
        if PresheafMap::new(a.clone(), x.clone(), asg).is_ok() {
            count += 1;
        }
        let mut p = 0;
        loop {
            if p == idx.len() {
                return count;
            }
            idx[p] += 1;
            if idx[p] < choices[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn small_sources<S: Site>(trunc: usize) -> Vec<Arc<FinitePresheaf<S>>> {
    let mut out = vec![Arc::new(representable::<S>(0, trunc).unwrap()), Arc::new(representable::<S>(1, trunc).unwrap())];
    match S::KIND {
        ntype::site::SiteKind::Cubical => {
            out.push(build_standard::<S>(StandardKind::CubeBoundary, 1, trunc).unwrap().realized);
            out.push(build_standard::<S>(StandardKind::OpenBox { i: 2, eps: false }, 2, trunc).unwrap().realized);
        }
        ntype::site::SiteKind::Simplicial => {
            out.push(build_standard::<S>(StandardKind::SimplexBoundary, 2, trunc).unwrap().realized);
            out.push(build_standard::<S>(StandardKind::Horn { i: 0 }, 2, trunc).unwrap().realized);
        }
    }
    out
}

fn check_against_naive<S: Site>() {
    let spec = RandomSpec {
        trunc_dim: 2,
        max_root_dim: 2,
        max_cells: 10,
        vertices: 1..=3,
        attachments: 4,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..8 {
        let x = Arc::new(random_presheaf::<S, _>(&mut rng, &spec).unwrap());
        for a in small_sources::<S>(2) {
            let fast = enumerate_maps(&a, &x).unwrap();
            assert_eq!(fast.len() as u64, naive_count(&a, &x));
            assert_eq!(count_maps(&a, &x).unwrap(), fast.len() as u64);
        }
    }
}

#[test]
fn cubical_map_enumeration_matches_brute_force() {
    check_against_naive::<Cube>();
}

#[test]
fn simplicial_map_enumeration_matches_brute_force() {
    check_against_naive::<Simplex>();
}

#[test]
fn small_map_counts() {
    let i = Arc::new(representable::<Cube>(1, 1).unwrap());
    // by Yoneda these are the morphisms [1] -> [1]: id, const 0, const 1
    assert_eq!(enumerate_maps(&i, &i).unwrap().len(), 3);
    assert_eq!(naive_count(&i, &i), 3);
    let pt = Arc::new(representable::<Cube>(0, 1).unwrap());
    let bd = build_standard::<Cube>(StandardKind::CubeBoundary, 1, 1).unwrap().realized;
    assert_eq!(count_maps(&bd, &pt).unwrap(), 1);
    let sq = Arc::new(representable::<Cube>(2, 2).unwrap());
    let pt2 = Arc::new(representable::<Cube>(0, 2).unwrap());
    assert_eq!(count_maps(&pt2, &sq).unwrap(), 4);
}

#[test]
fn interval_endomorphisms_are_cube_maps() {
    // maps □¹ -> □¹ correspond to 1-cells of □¹, i.e. morphisms [1] -> [1]
    let i = Arc::new(representable::<Cube>(1, 2).unwrap());
    assert_eq!(enumerate_maps(&i, &i).unwrap().len(), Cube::all_morphisms(1, 1).len());
}

#[test]
fn product_associative_on_cubes() {
    for m in 0..=2 {
        for n in 0..=2 {
            for p in 0..=2 {
                if m + n + p > 4 {
                    continue;
                }
                let d = m + n + p;
                let c = |k| representable::<Cube>(k, d).unwrap();
                let left = geometric_product(&geometric_product(&c(m), &c(n), d).unwrap().presheaf, &c(p), d).unwrap();
                let right = geometric_product(&c(m), &geometric_product(&c(n), &c(p), d).unwrap().presheaf, d).unwrap();
                let whole = Arc::new(c(d));
                assert!(is_isomorphic(&left.presheaf, &right.presheaf).unwrap(), "{m} {n} {p}");
                assert!(is_isomorphic(&left.presheaf, &whole).unwrap(), "{m} {n} {p}");
            }
        }
    }
}

#[test]
fn product_associative_on_boundaries() {
    let d = 3;
    let bd = build_standard::<Cube>(StandardKind::CubeBoundary, 1, d).unwrap().realized;
    let iv = representable::<Cube>(1, d).unwrap();
    let left = geometric_product(&geometric_product(&bd, &iv, d).unwrap().presheaf, &bd, d).unwrap();
    let right = geometric_product(&bd, &geometric_product(&iv, &bd, d).unwrap().presheaf, d).unwrap();
    assert!(is_isomorphic(&left.presheaf, &right.presheaf).unwrap());
    assert_eq!(left.presheaf.nondegenerate_counts(), vec![8, 4, 0, 0]);
}
