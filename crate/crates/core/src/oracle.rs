//! Independent reference computations for tests: plain BigRational elimination working
//! directly from basis tables, sharing no code with the library's linear algebra.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dg::DgModule;
use crate::scalars::Scalar;

pub fn q(s: &Scalar) -> BigRational {
    s.to_string().parse().expect("rational scalar")
}

pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() * inv.clone();
                for k in 0..ncols {
                    let sub = rows[r][k].clone() * f.clone();
                    rows[i][k] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

/// `(degree, idempotent) -> dim H`, from the raw differential table.
pub fn homology(m: &DgModule) -> BTreeMap<(i64, usize), usize> {
    let r = m.algebra().idempotent_count();
    let block = |p: i64, i: usize| -> Vec<usize> { (0..m.dim()).filter(|&j| m.degree(j) == p && m.idem(j) == i).collect() };
    let d_rank = |p: i64, i: usize| -> usize {
        let src = block(p, i);
        let tgt = block(p + 1, i);
        let rows = tgt
            .iter()
            .map(|&t| {
                src.iter()
                    .map(|&s| m.diff(s).terms().iter().find(|(k, _)| *k == t).map_or(BigRational::zero(), |(_, c)| q(c)))
                    .collect()
            })
            .collect();
        rank(rows)
    };
    let mut out = BTreeMap::new();
    let degrees: std::collections::BTreeSet<i64> = (0..m.dim()).map(|j| m.degree(j)).collect();
    for &p in &degrees {
        for i in 0..r {
            let n = block(p, i).len();
            let h = n - d_rank(p, i) - d_rank(p - 1, i);
            if h > 0 {
                out.insert((p, i), h);
            }
        }
    }
    out
}

/// Total dimension per degree.
pub fn homology_totals(m: &DgModule) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for ((p, _), d) in homology(m) {
        *out.entry(p).or_insert(0) += d;
    }
    out
}

/// `dim H^p` of the complex of A-linear maps `realize(x) -> realize(y)`, built from the images
/// of the cell generators.
pub fn tw_hom_dim(x: &crate::twisted::TwistedComplex, y: &crate::twisted::TwistedComplex, p: i64) -> usize {
    let rx = x.realize();
    let ry = y.realize();
    let (mx, my) = (&rx.module, &ry.module);
    let f = mx.field();
    let alg = x.algebra();
    // rx basis index -> (cell, algebra element)
    let mut owner = vec![(0, 0); mx.dim()];
    for (t, c) in x.cells().iter().enumerate() {
        for a in x.cell_basis(c.idem) {
            owner[rx.position(t, a).unwrap()] = (t, a);
        }
    }
    let slots = |deg: i64| -> Vec<(usize, usize)> {
        let mut out = vec![];
        for (s, c) in x.cells().iter().enumerate() {
            for j in 0..my.dim() {
                if my.degree(j) == deg - c.shift && my.idem(j) == c.idem {
                    out.push((s, j));
                }
            }
        }
        out
    };
    let d_rank = |deg: i64| -> usize {
        let src = slots(deg);
        let tgt = slots(deg + 1);
        let mut cols: Vec<Vec<BigRational>> = Vec::new();
        for &(s, j) in &src {
            let mut images = vec![crate::dg::Lin::zero(); x.len()];
            images[s] = crate::dg::Lin::basis(j, f);
            let mut out = vec![crate::dg::Lin::zero(); x.len()];
            for (u, img) in out.iter_mut().enumerate() {
                let g = rx.position(u, alg.idempotent(x.cells()[u].idem)).unwrap();
                let mut acc = my.diff_lin(&images[u]);
                for (k, c) in mx.diff(g).terms() {
                    let (t, a) = owner[*k];
                    let term = my.act_lin(&images[t], &crate::dg::Lin::basis(a, f)).scale(c);
                    acc = if p_odd(deg) { acc.add(&term) } else { acc.sub(&term) };
                }
                *img = acc;
            }
            cols.push(
                tgt.iter()
                    .map(|&(t, jt)| out[t].coeff(jt).map_or(BigRational::zero(), q))
                    .collect(),
            );
        }
        rank(cols)
    };
    slots(p).len() - d_rank(p) - d_rank(p - 1)
}

fn p_odd(p: i64) -> bool {
    p.rem_euclid(2) == 1
}
