//! Triangulation of cubical sets.
//!
//! A `d`-simplex of `T(X)` is a pair `(x, c)` with `x` an `n`-cube of `X` and
//! `c : [d] -> [1]^n` a chain of vertices of the cube, modulo
//! `(x·m, c) ~ (x, m∘c)`. The normal form takes `x` nondegenerate and `c`
//! running from `0…0` to `1…1` in every coordinate.

use std::sync::Arc;

use super::{Cell, FinitePresheaf};
use crate::error::Result;
use crate::site::{Cube, Simplex};

/// Points of `[1]^n` as bitmasks, bit `i` for coordinate `i + 1`.
type Chain = Vec<u8>;

fn apply_cube_map(m: &crate::site::CubeMorphism, p: u8) -> u8 {
    let n = m.source_dim();
    let x: Vec<bool> = (0..n).map(|i| p >> i & 1 == 1).collect();
    m.eval_bits(&x).iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b as u8) << i)
}

fn normalize(x: &FinitePresheaf<Cube>, mut cell: Cell, chain: &[u8]) -> (Cell, Chain) {
    let e = x.epi_of(cell);
    let mut chain: Chain = chain.iter().map(|&p| apply_cube_map(e, p)).collect();
    cell = cell.root_cell();
    loop {
        let j = cell.dim as usize;
        let first = chain[0];
        let last = *chain.last().unwrap();
        let Some(i) = (0..j).find(|&i| (first >> i & 1) == (last >> i & 1)) else {
            return (cell, chain);
        };
        let eps = first >> i & 1;
        let face = x.face(cell, 2 * i + eps as usize);
        let drop = |p: u8| -> u8 {
            let low = p & ((1u8 << i) - 1);
            let high = (p >> (i + 1)) << i;
            low | high
        };
        let dropped: Chain = chain.iter().map(|&p| drop(p)).collect();
        let e = x.epi_of(face);
        chain = dropped.iter().map(|&p| apply_cube_map(e, p)).collect();
        cell = face.root_cell();
    }
}

fn interior_chains(j: usize, d: usize) -> Vec<Chain> {
    let full: u8 = if j == 0 { 0 } else { ((1u16 << j) - 1) as u8 };
    let mut out = Vec::new();
    let mut cur = vec![0u8];
    fn rec(d: usize, full: u8, cur: &mut Chain, out: &mut Vec<Chain>) {
        if cur.len() == d + 1 {
            if *cur.last().unwrap() == full {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().unwrap();
        // supersets of `last` inside `full`
        let free = full & !last;
        let mut sub = free;
        loop {
            cur.push(last | sub);
            rec(d, full, cur, out);
            cur.pop();
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    rec(d, full, &mut cur, &mut out);
    out.sort();
    out
}

/// `T(X)` truncated at the truncation of `X`, with each simplex's normal form.
pub struct Triangulation {
    pub presheaf: Arc<FinitePresheaf<Simplex>>,
    /// The normal form `(cube root, chain)` of each nondegenerate simplex.
    pub simplices: Vec<Vec<(Cell, Vec<u8>)>>,
}

pub fn triangulate(x: &FinitePresheaf<Cube>) -> Result<Triangulation> {
    let d_max = x.trunc_dim();
    let mut cells: Vec<Vec<(Cell, Chain)>> = Vec::with_capacity(d_max + 1);
    for d in 0..=d_max {
        let mut level = Vec::new();
        for j in 0..=d_max {
            let chains = interior_chains(j, d);
            for r in x.roots(j) {
                for c in &chains {
                    level.push((r, c.clone()));
                }
            }
        }
        cells.push(level);
    }
    let classified = FinitePresheaf::<Simplex>::from_action(d_max, cells, |(r, c), f| {
        let pulled: Chain = f.values().iter().map(|&v| c[v]).collect();
        normalize(x, *r, &pulled)
    })?;
    Ok(Triangulation {
        presheaf: Arc::new(classified.presheaf),
        simplices: classified.roots,
    })
}
