//! Reference computations for the integration tests: BigRational elimination straight from the
//! basis tables, independent of the engine's linear algebra.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use dgforge_core::dg::{DgModule, Lin};
use dgforge_core::scalars::Scalar;
use dgforge_core::twisted::TwistedComplex;
use num_rational::BigRational;
use num_traits::{One, Zero};

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

fn coeff(v: &Lin, i: usize) -> BigRational {
    v.terms().iter().find(|(k, _)| *k == i).map_or(BigRational::zero(), |(_, c)| q(c))
}

/// `(degree, idempotent) -> dim H`, nonzero entries only.
pub fn homology(m: &DgModule) -> BTreeMap<(i64, usize), usize> {
    let r = m.algebra().idempotent_count();
    let block = |p: i64, i: usize| -> Vec<usize> { (0..m.dim()).filter(|&j| m.degree(j) == p && m.idem(j) == i).collect() };
    let d_rank = |p: i64, i: usize| -> usize {
        let src = block(p, i);
        let rows = block(p + 1, i).iter().map(|&t| src.iter().map(|&s| coeff(m.diff(s), t)).collect()).collect();
        rank(rows)
    };
    let degrees: BTreeSet<i64> = (0..m.dim()).map(|j| m.degree(j)).collect();
    let mut out = BTreeMap::new();
    for &p in &degrees {
        for i in 0..r {
            let h = block(p, i).len() - d_rank(p, i) - d_rank(p - 1, i);
            if h > 0 {
                out.insert((p, i), h);
            }
        }
    }
    out
}

pub fn homology_totals(m: &DgModule) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for ((p, _), d) in homology(m) {
        *out.entry(p).or_insert(0) += d;
    }
    out
}

pub fn support(m: &DgModule) -> Option<(i64, i64)> {
    let h = homology_totals(m);
    Some((*h.keys().next()?, *h.keys().last()?))
}

/// `dim H^p` of the complex of A-linear maps `realize(x) -> my`, with a map determined by the
/// images of the cell generators.
pub fn hom_to_module_dim(x: &TwistedComplex, my: &DgModule, p: i64) -> usize {
    let rx = x.realize();
    let mx = &rx.module;
    let f = mx.field();
    let alg = x.algebra();
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
            let mut images = vec![Lin::zero(); x.len()];
            images[s] = Lin::basis(j, f);
            let mut out = vec![Lin::zero(); x.len()];
            for (u, img) in out.iter_mut().enumerate() {
                let g = rx.position(u, alg.idempotent(x.cells()[u].idem)).unwrap();
                let mut acc = my.diff_lin(&images[u]);
                for (k, c) in mx.diff(g).terms() {
                    let (t, a) = owner[*k];
                    let term = my.act_lin(&images[t], &Lin::basis(a, f)).scale(c);
                    acc = if deg.rem_euclid(2) == 1 { acc.add(&term) } else { acc.sub(&term) };
                }
                *img = acc;
            }
            cols.push(tgt.iter().map(|&(t, jt)| coeff(&out[t], jt)).collect());
        }
        rank(cols)
    };
    slots(p).len() - d_rank(p) - d_rank(p - 1)
}

/// `dim H^p Hom(x, y)` for twisted complexes.
pub fn tw_hom_dim(x: &TwistedComplex, y: &TwistedComplex, p: i64) -> usize {
    hom_to_module_dim(x, &y.realize().module, p)
}

/// Euler characteristic of the homology.
pub fn euler(m: &DgModule) -> i64 {
    homology_totals(m).iter().map(|(p, d)| if p.rem_euclid(2) == 0 { *d as i64 } else { -(*d as i64) }).sum()
}
