use std::collections::{BTreeSet, HashMap, HashSet};

use ntype::site::{Cube, CubeGenerator, CubeMorphism, Simplex, Site};
use proptest::prelude::*;

type Table = Vec<Vec<bool>>;

fn gen(kind: CubeGenerator, dim: usize) -> CubeMorphism {
    CubeMorphism::generator(kind, dim).unwrap()
}

fn face(i: usize, eps: bool, target: usize) -> CubeMorphism {
    gen(CubeGenerator::Face { i, eps }, target - 1)
}

fn degen(i: usize, source: usize) -> CubeMorphism {
    gen(CubeGenerator::Degeneracy { i }, source)
}

fn conn(i: usize, eps: bool, source: usize) -> CubeMorphism {
    gen(CubeGenerator::Connection { i, eps }, source)
}

fn c(g: &CubeMorphism, f: &CubeMorphism) -> CubeMorphism {
    g.compose(f).unwrap()
}

/// Closure of the identities under post-composition with generators, as
/// bare evaluation tables. No use of the symbolic normal form.
fn generated_tables(max_dim: usize) -> HashMap<(usize, usize), HashSet<Table>> {
    let mut gens: Vec<CubeMorphism> = Vec::new();
    for n in 0..=max_dim {
        for i in 1..=n {
            for eps in [false, true] {
                if n >= 1 {
                    gens.push(face(i, eps, n));
                }
            }
            gens.push(degen(i, n));
        }
        for i in 1..n {
            for eps in [false, true] {
                gens.push(conn(i, eps, n));
            }
        }
    }
    let gen_tables: Vec<(usize, usize, Table)> = gens
        .iter()
        .map(|g| (g.source_dim(), g.target_dim(), g.eval_table()))
        .collect();

    let mut seen: HashMap<(usize, usize), HashSet<Table>> = HashMap::new();
    let mut frontier: Vec<(usize, usize, Table)> = Vec::new();
    for m in 0..=max_dim {
        let id = CubeMorphism::identity(m).eval_table();
        seen.entry((m, m)).or_default().insert(id.clone());
        frontier.push((m, m, id));
    }
    while let Some((m, n, t)) = frontier.pop() {
        for (gs, gt, gtab) in &gen_tables {
            if *gs != n {
                continue;
            }
            // evaluate g on each output row of t
            let composed: Table = t
                .iter()
                .map(|row| {
                    let idx = row.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
                    gtab[idx].clone()
                })
                .collect();
            if seen.entry((m, *gt)).or_default().insert(composed.clone()) {
                frontier.push((m, *gt, composed));
            }
        }
    }
    seen
}

#[test]
fn normal_forms_match_generated_category() {
    let max_dim = 4;
    let closure = generated_tables(max_dim);
    for m in 0..=max_dim {
        for n in 0..=max_dim {
            let all = CubeMorphism::all(m, n);
            let tables: HashSet<Table> = all.iter().map(|f| f.eval_table()).collect();
            // faithfulness: distinct normal forms have distinct evaluations
            assert_eq!(tables.len(), all.len(), "[{m}] -> [{n}]");
            let empty = HashSet::new();
            let expected = closure.get(&(m, n)).unwrap_or(&empty);
            assert_eq!(&tables, expected, "[{m}] -> [{n}]");
        }
    }
}

#[test]
fn compose_matches_pointwise_evaluation() {
    for a in 0..=3 {
        for b in 0..=3 {
            for cdim in 0..=3 {
                let fs = CubeMorphism::all(a, b);
                let gs = CubeMorphism::all(b, cdim);
                for f in &fs {
                    let ft = f.eval_table();
                    for g in &gs {
                        let h = c(g, f);
                        assert!(h.validate().is_ok());
                        for (x, row) in ft.iter().enumerate() {
                            assert_eq!(h.eval_table()[x], g.eval_bits(row));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn cubical_identities() {
    for n in 1..=4usize {
        // faces with faces
        for i in 1..=n {
            for j in (i + 1)..=(n + 1) {
                for e in [false, true] {
                    for h in [false, true] {
                        assert_eq!(c(&face(j, h, n + 1), &face(i, e, n)), c(&face(i, e, n + 1), &face(j - 1, h, n)));
                    }
                }
            }
        }
        // degeneracies with degeneracies
        for i in 1..=n + 1 {
            for j in i..=n {
                assert_eq!(c(&degen(j, n), &degen(i, n + 1)), c(&degen(i, n), &degen(j + 1, n + 1)));
            }
        }
        // degeneracies with faces
        for i in 1..=n {
            for j in 1..=n {
                for e in [false, true] {
                    let lhs = c(&degen(j, n), &face(i, e, n));
                    let rhs = if i < j {
                        c(&face(i, e, n - 1), &degen(j - 1, n - 1))
                    } else if i == j {
                        CubeMorphism::identity(n - 1)
                    } else {
                        c(&face(i - 1, e, n - 1), &degen(j, n - 1))
                    };
                    assert_eq!(lhs, rhs, "s{j} d{i},{e}");
                }
            }
        }
        if n < 2 {
            continue;
        }
        // connections with connections
        for i in 1..n {
            for j in 1..n {
                for e in [false, true] {
                    for h in [false, true] {
                        if i < j {
                            assert_eq!(c(&conn(j, h, n), &conn(i, e, n + 1)), c(&conn(i, e, n), &conn(j + 1, h, n + 1)));
                        }
                    }
                }
            }
            for e in [false, true] {
                assert_eq!(c(&conn(i, e, n), &conn(i, e, n + 1)), c(&conn(i, e, n), &conn(i + 1, e, n + 1)));
            }
        }
        // connections with faces
        for j in 1..n {
            for i in 1..=n {
                for e in [false, true] {
                    for h in [false, true] {
                        let lhs = c(&conn(j, h, n), &face(i, e, n));
                        let rhs = if i < j {
                            c(&face(i, e, n - 1), &conn(j - 1, h, n - 1))
                        } else if i > j + 1 {
                            c(&face(i - 1, e, n - 1), &conn(j, h, n - 1))
                        } else if e == h {
                            CubeMorphism::identity(n - 1)
                        } else {
                            c(&face(j, e, n - 1), &degen(j, n - 1))
                        };
                        assert_eq!(lhs, rhs, "g{j},{h} d{i},{e} n={n}");
                    }
                }
            }
        }
        // degeneracies with connections
        for i in 1..n {
            for j in 1..n {
                for e in [false, true] {
                    let lhs = c(&degen(j, n - 1), &conn(i, e, n));
                    let rhs = if j == i {
                        c(&degen(i, n - 1), &degen(i, n))
                    } else if i < j {
                        c(&conn(i, e, n - 1), &degen(j + 1, n))
                    } else {
                        c(&conn(i - 1, e, n - 1), &degen(j, n))
                    };
                    assert_eq!(lhs, rhs, "s{j} g{i},{e} n={n}");
                }
            }
        }
    }
}

#[test]
fn morphism_counts_small() {
    // [1]^1 -> [1]^1: both constants and the identity
    assert_eq!(CubeMorphism::all(1, 1).len(), 3);
    // [1]^2 -> [1]: constants, two projections, max, min
    assert_eq!(CubeMorphism::all(2, 1).len(), 6);
    let distinct: BTreeSet<_> = Cube::all_morphisms(3, 2).into_iter().collect();
    assert_eq!(distinct.len(), CubeMorphism::all(3, 2).len());
    assert_eq!(Simplex::all_morphisms(2, 3).len(), 20);
}

fn arb_chain() -> impl Strategy<Value = (CubeMorphism, CubeMorphism, CubeMorphism)> {
    (0usize..=4, 0usize..=4, 0usize..=4, 0usize..=4, any::<u64>(), any::<u64>(), any::<u64>()).prop_map(
        |(a, b, cc, d, x, y, z)| {
            let pick = |m: usize, n: usize, s: u64| {
                let all = Cube::all_morphisms(m, n);
                all[(s % all.len() as u64) as usize].clone()
            };
            (pick(a, b, x), pick(b, cc, y), pick(cc, d, z))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn composition_is_associative((f, g, h) in arb_chain()) {
        prop_assert_eq!(c(&c(&h, &g), &f), c(&h, &c(&g, &f)));
    }

    #[test]
    fn identities_are_units((f, _g, _h) in arb_chain()) {
        prop_assert_eq!(c(&CubeMorphism::identity(f.target_dim()), &f), f.clone());
        prop_assert_eq!(c(&f, &CubeMorphism::identity(f.source_dim())), f.clone());
    }
}
