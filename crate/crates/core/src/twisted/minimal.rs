use super::complex::{Cell, TwMap, TwistedComplex};
use crate::dg::Lin;
use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Which invertible scalar entry to eliminate next, by `(source cell, target cell)`, among the
/// entries whose elimination keeps δ triangular.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotOrder {
    /// Lexicographically first entry.
    #[default]
    First,
    /// Lexicographically last entry.
    Last,
}

/// A minimal presentation with homotopy-equivalence data: `from_minimal ∘ to_minimal - id = D(homotopy)`
/// and `to_minimal ∘ from_minimal = id`.
#[derive(Clone, Debug)]
pub struct Minimalization {
    pub minimal: TwistedComplex,
    /// `x -> minimal`
    pub to_minimal: TwMap,
    /// `minimal -> x`
    pub from_minimal: TwMap,
    /// Degree `-1` endomorphism of `x`.
    pub homotopy: TwMap,
    /// Eliminated `(source, target)` pairs, in the original cell numbering.
    pub eliminated: Vec<(usize, usize)>,
}

impl Minimalization {
    /// Re-checks every homotopy-equivalence identity exactly.
    pub fn verify(&self, x: &TwistedComplex) -> Result<()> {
        let alg = x.algebra();
        let y = &self.minimal;
        if !y.is_minimal() {
            return Err(Error::Certificate("result still has invertible scalar entries".into()));
        }
        self.to_minimal.check(x, y)?;
        self.from_minimal.check(y, x)?;
        self.homotopy.check(x, x)?;
        if !self.to_minimal.is_cycle(x, y) || !self.from_minimal.is_cycle(y, x) {
            return Err(Error::Certificate("comparison maps are not chain maps".into()));
        }
        let fg = self.to_minimal.compose(&self.from_minimal, alg);
        if fg != TwMap::identity(y) {
            return Err(Error::Certificate("to_minimal ∘ from_minimal is not the identity".into()));
        }
        let gf = self.from_minimal.compose(&self.to_minimal, alg).sub(&TwMap::identity(x));
        let dh = self.homotopy.boundary(x, x);
        if (TwMap { degree: 0, ..dh }) != gf {
            return Err(Error::Certificate("from_minimal ∘ to_minimal - id is not D(homotopy)".into()));
        }
        Ok(())
    }
}

fn pick_pivot(x: &TwistedComplex, order: PivotOrder) -> Option<(usize, usize, Scalar)> {
    let pivots = x.eliminable_entries();
    match order {
        PivotOrder::First => pivots.into_iter().next(),
        PivotOrder::Last => pivots.into_iter().next_back(),
    }
}

/// Removes every invertible scalar entry of δ by Gaussian elimination, lexicographically first entry first.
pub fn minimalize(x: &TwistedComplex) -> Minimalization {
    minimalize_with(x, PivotOrder::First)
}

pub fn minimalize_with(x: &TwistedComplex, order: PivotOrder) -> Minimalization {
    let alg = x.algebra().clone();
    let n0 = x.len();
    let mut cells: Vec<Cell> = x.cells().to_vec();
    let mut delta: Vec<Vec<Lin>> = x.delta_matrix().to_vec();
    let mut labels: Vec<usize> = (0..n0).collect();
    let mut big_f = TwMap::identity(x).entries;
    let mut big_g = big_f.clone();
    let mut big_h = vec![vec![Lin::zero(); n0]; n0];
    let mut eliminated = Vec::new();
    loop {
        let current = TwistedComplex::from_parts(alg.clone(), cells.clone(), delta.clone());
        let Some((s, t, c)) = pick_pivot(&current, order) else { break };
        let cinv = c.inv().expect("nonzero scalar");
        let neg_cinv = -&cinv;
        let n = cells.len();
        let keep: Vec<usize> = (0..n).filter(|&u| u != s && u != t).collect();
        // δ'_vu = δ_vu - δ_vs c⁻¹ δ_tu
        let mut new_delta = vec![vec![Lin::zero(); keep.len()]; keep.len()];
        for (vi, &v) in keep.iter().enumerate() {
            for (ui, &u) in keep.iter().enumerate() {
                let mut e = delta[v][u].clone();
                if !delta[v][s].is_zero() && !delta[t][u].is_zero() {
                    e = e.sub(&alg.mul_lin(&delta[v][s], &delta[t][u]).scale(&cinv));
                }
                new_delta[vi][ui] = e;
            }
        }
        // F' = f F with f_vv = e, f_vt = -δ_vs c⁻¹
        let new_f: Vec<Vec<Lin>> = keep
            .iter()
            .map(|&v| {
                (0..n0)
                    .map(|b| {
                        let mut e = big_f[v][b].clone();
                        if !delta[v][s].is_zero() && !big_f[t][b].is_zero() {
                            e = e.add(&alg.mul_lin(&delta[v][s], &big_f[t][b]).scale(&neg_cinv));
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        // G' = G g with g_uu = e, g_su = -c⁻¹ δ_tu
        let new_g: Vec<Vec<Lin>> = (0..n0)
            .map(|a| {
                keep.iter()
                    .map(|&u| {
                        let mut e = big_g[a][u].clone();
                        if !big_g[a][s].is_zero() && !delta[t][u].is_zero() {
                            e = e.add(&alg.mul_lin(&big_g[a][s], &delta[t][u]).scale(&neg_cinv));
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        // H' = H + G h F with h_st = -c⁻¹ e
        for a in 0..n0 {
            if big_g[a][s].is_zero() {
                continue;
            }
            for b in 0..n0 {
                if !big_f[t][b].is_zero() {
                    let extra = alg.mul_lin(&big_g[a][s], &big_f[t][b]).scale(&neg_cinv);
                    big_h[a][b] = big_h[a][b].add(&extra);
                }
            }
        }
        eliminated.push((labels[s], labels[t]));
        big_f = new_f;
        big_g = new_g;
        delta = new_delta;
        cells = keep.iter().map(|&u| cells[u]).collect();
        labels = keep.iter().map(|&u| labels[u]).collect();
    }
    let kept = cells.len();
    Minimalization {
        minimal: TwistedComplex::from_parts(alg, cells, delta),
        to_minimal: TwMap::new(0, n0, big_f),
        from_minimal: TwMap::new(0, kept, big_g),
        homotopy: TwMap::new(-1, n0, big_h),
        eliminated,
    }
}

/// The minimal form alone, without tracking comparison maps.
pub fn minimal_form(x: &TwistedComplex, order: PivotOrder) -> TwistedComplex {
    let alg = x.algebra().clone();
    let mut cur = x.clone();
    loop {
        let Some((s, t, c)) = pick_pivot(&cur, order) else { return cur };
        let cinv = c.inv().expect("nonzero scalar");
        let keep: Vec<usize> = (0..cur.len()).filter(|&u| u != s && u != t).collect();
        let d = cur.delta_matrix();
        let delta = keep
            .iter()
            .map(|&v| {
                keep.iter()
                    .map(|&u| {
                        if d[v][s].is_zero() || d[t][u].is_zero() {
                            d[v][u].clone()
                        } else {
                            d[v][u].sub(&alg.mul_lin(&d[v][s], &d[t][u]).scale(&cinv))
                        }
                    })
                    .collect()
            })
            .collect();
        let cells = keep.iter().map(|&u| cur.cells()[u]).collect();
        cur = TwistedComplex::from_parts(alg.clone(), cells, delta);
    }
}
