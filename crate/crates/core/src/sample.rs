//! Seeded random objects for property tests: twisted complexes, perturbed presentations and
//! finite-dimensional modules.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dg::{cone, direct_sum, quotient, shift, submodule, DgAlgebra, DgModule, Lin, ModuleMap};
use crate::scalars::{Matrix, Scalar};
use crate::twisted::{Cell, TwMap, TwistedComplex};
use crate::weight::simple_module;

pub struct Sampler {
    rng: ChaCha8Rng,
    alg: Arc<DgAlgebra>,
}

impl Sampler {
    pub fn new(alg: &Arc<DgAlgebra>, seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), alg: alg.clone() }
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        &self.alg
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A small scalar, possibly zero.
    pub fn coef(&mut self) -> Scalar {
        self.alg.field().from_i64(self.rng.gen_range(-2..=2))
    }

    pub fn nonzero_coef(&mut self) -> Scalar {
        loop {
            let c = self.coef();
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// A random element of `e_target A e_source` in the given degree.
    pub fn element(&mut self, target: usize, source: usize, degree: i64) -> Lin {
        let basis = self.alg.elements_between(target, source, degree);
        let terms: Vec<(usize, Scalar)> = basis.into_iter().map(|b| (b, self.coef())).collect();
        Lin::from_terms(terms)
    }

    /// A random combination of the columns of `basis`.
    fn combination(&mut self, basis: &Matrix) -> Vec<Scalar> {
        let coefs: Vec<Scalar> = (0..basis.cols()).map(|_| self.coef()).collect();
        let mut out = vec![self.alg.field().zero(); basis.rows()];
        for (j, c) in coefs.iter().enumerate() {
            for (i, slot) in out.iter_mut().enumerate() {
                slot.add_product(&basis[(i, j)], c);
            }
        }
        out
    }

    /// Attaches `Σ^shift e_idem A` whose generator is sent by δ to a random cocycle of the right degree.
    pub fn attach_random(&mut self, x: &TwistedComplex, idem: usize, shift: i64) -> TwistedComplex {
        let real = x.realize();
        let m = &real.module;
        let block = m.block(1 - shift, idem);
        let mut column = vec![Lin::zero(); x.len()];
        if !block.is_empty() {
            let z = m.diff_matrix(&block, &m.block(2 - shift, idem)).kernel_basis();
            let v = self.combination(&z);
            let cocycle = Lin::from_terms(block.iter().zip(v).map(|(&k, c)| (k, c)));
            column = real.components(&cocycle, x.len());
        }
        attach(x, Cell::new(idem, shift), column)
    }

    /// A random twisted complex with up to `max_cells` cells and shifts in `[lo, hi]`.
    pub fn twisted(&mut self, max_cells: usize, lo: i64, hi: i64) -> TwistedComplex {
        let r = self.alg.idempotent_count();
        let n = 1 + self.below(max_cells.max(1));
        let mut x = TwistedComplex::empty(self.alg.clone());
        for _ in 0..n {
            let i = self.below(r);
            let s = self.range(lo, hi);
            x = self.attach_random(&x, i, s);
        }
        x
    }

    /// Cells at shift 0 joined by degree-1 entries.
    pub fn heart_object(&mut self, cells: usize) -> TwistedComplex {
        let r = self.alg.idempotent_count();
        let mut x = TwistedComplex::empty(self.alg.clone());
        for _ in 0..cells {
            let i = self.below(r);
            x = self.attach_random(&x, i, 0);
        }
        x
    }

    /// `x ⊕` contractible pairs `Σ^{n+1} e_i A -> Σ^n e_i A`, followed by a random perturbation.
    pub fn with_contractible_pairs(&mut self, x: &TwistedComplex, pairs: usize, lo: i64, hi: i64) -> TwistedComplex {
        let r = self.alg.idempotent_count();
        let mut out = x.clone();
        for _ in 0..pairs {
            let i = self.below(r);
            let n = self.range(lo, hi);
            let c = self.nonzero_coef();
            let pair = TwistedComplex::new(
                self.alg.clone(),
                vec![Cell::new(i, n + 1), Cell::new(i, n)],
                vec![(0, 1, Lin::term(self.alg.idempotent(i), c))],
            )
            .expect("contractible pair");
            out = out.direct_sum(&pair).expect("same algebra");
        }
        self.perturb(&out)
    }

    /// Conjugates δ by a random unitriangular automorphism `g`: `δ' = g⁻¹ δ g + g⁻¹ ∂g`.
    pub fn perturb(&mut self, x: &TwistedComplex) -> TwistedComplex {
        let alg = self.alg.clone();
        let order = x.triangular_order().expect("triangular input");
        let n = x.len();
        let mut pos = vec![0; n];
        for (k, &c) in order.iter().enumerate() {
            pos[c] = k;
        }
        let mut g = TwMap::identity(x);
        for s in 0..n {
            for t in 0..n {
                if pos[s] < pos[t] && self.chance(0.5) {
                    let (cs, ct) = (x.cells()[s], x.cells()[t]);
                    g.entries[t][s] = self.element(ct.idem, cs.idem, ct.shift - cs.shift);
                }
            }
        }
        // g = 1 + N with N nilpotent, so g⁻¹ = Σ (-N)^k
        let id = TwMap::identity(x);
        let neg_n = id.sub(&g);
        let mut ginv = id.clone();
        let mut power = id.clone();
        for _ in 0..n {
            power = power.compose(&neg_n, &alg);
            if power.is_zero() {
                break;
            }
            ginv = ginv.add(&power);
        }
        let mut dg = TwMap::zero(x, x, 0);
        for t in 0..n {
            for s in 0..n {
                dg.entries[t][s] = alg.diff_lin(&g.entries[t][s]).signed(x.cells()[t].shift);
            }
        }
        let delta = TwMap::new(1, n, x.delta_matrix().to_vec());
        let conj = ginv.compose(&delta, &alg).compose(&g, &alg);
        let corr = ginv.compose(&TwMap { degree: 1, ..dg }, &alg);
        let new = conj.add(&corr);
        let entries: Vec<(usize, usize, Lin)> = (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .map(|(s, t)| (s, t, new.entries[t][s].clone()))
            .filter(|(_, _, v)| !v.is_zero())
            .collect();
        TwistedComplex::new(alg, x.cells().to_vec(), entries).expect("perturbation preserves the twisted complex axioms")
    }

    /// A random invertible matrix respecting degree and idempotent blocks, applied as a basis change.
    pub fn base_change(&mut self, m: &DgModule) -> DgModule {
        let f = m.field();
        let n = m.dim();
        let mut change = Matrix::zeros(f, n, n);
        let degrees: Vec<i64> = m.degrees().collect();
        for p in degrees {
            for i in 0..m.algebra().idempotent_count() {
                let block = m.block(p, i);
                let k = block.len();
                // random unit lower times random unit upper, then a random permutation
                let mut l = Matrix::identity(f, k);
                let mut u = Matrix::identity(f, k);
                for a in 0..k {
                    for b in 0..a {
                        l[(a, b)] = self.coef();
                        u[(b, a)] = self.coef();
                    }
                }
                let mut lu = l.mul(&u).expect("square");
                let mut perm: Vec<usize> = (0..k).collect();
                for a in (1..k).rev() {
                    let b = self.below(a + 1);
                    perm.swap(a, b);
                }
                lu = lu.select_cols(&perm);
                for (r, &gr) in block.iter().enumerate() {
                    for (c, &gc) in block.iter().enumerate() {
                        change[(gr, gc)] = lu[(r, c)].clone();
                    }
                }
            }
        }
        m.change_basis(&change).expect("invertible block change")
    }

    /// `cone(id_m)`, which is contractible.
    pub fn contractible(&mut self, m: &Arc<DgModule>) -> DgModule {
        cone(&ModuleMap::identity(m)).expect("identity is a chain map").module.as_ref().clone()
    }

    /// A random finite-dimensional module of dimension at most `max_dim` (zero allowed).
    ///
    /// Pieces are realized twisted complexes, their brutal truncations above or below a degree,
    /// and shifted simples; the sum is scrambled by a random basis change.
    pub fn module(&mut self, max_dim: usize) -> DgModule {
        let alg = self.alg.clone();
        let r = alg.idempotent_count();
        let pieces = 1 + self.below(3);
        let mut parts: Vec<DgModule> = Vec::new();
        let mut total = 0;
        for _ in 0..pieces {
            let piece = match self.below(4) {
                0 => {
                    let i = self.below(r);
                    let k = self.range(-2, 2);
                    shift(&simple_module(&alg, i).expect("class P"), k)
                }
                1 => self.twisted(3, -2, 2).realize().module.as_ref().clone(),
                _ => {
                    let x = Arc::new(self.twisted(3, -2, 2).realize().module.as_ref().clone());
                    let (lo, hi) = (x.min_degree().unwrap_or(0), x.max_degree().unwrap_or(0));
                    let cut = self.range(lo, hi + 1);
                    let high: Vec<usize> = (0..x.dim()).filter(|&j| x.degree(j) >= cut).collect();
                    // degreewise spans above a cut are submodules over a positive algebra
                    let span = unit_columns(&x, &high);
                    if self.chance(0.5) {
                        submodule(&x, &span).expect("degree span is a submodule").0.as_ref().clone()
                    } else {
                        quotient(&x, &span).expect("degree span is a submodule").0.as_ref().clone()
                    }
                }
            };
            if total + piece.dim() <= max_dim {
                total += piece.dim();
                parts.push(piece);
            }
        }
        if parts.is_empty() {
            return DgModule::zero(alg);
        }
        let refs: Vec<&DgModule> = parts.iter().collect();
        let sum = direct_sum(&refs).expect("same algebra");
        self.base_change(&sum)
    }

    /// A random degree-0 chain map `m -> n` (possibly zero), built from a random cycle of the
    /// strict Hom space by solving the chain-map equations.
    pub fn chain_map(&mut self, m: &Arc<DgModule>, n: &Arc<DgModule>) -> ModuleMap {
        let sol = crate::dg::chain_maps(m, n, 0);
        let v = self.combination(&sol);
        let mut mat = Matrix::zeros(m.field(), n.dim(), m.dim());
        for ((t, s), c) in crate::dg::chain_map_coordinates(m, n, 0).into_iter().zip(v) {
            mat[(t, s)] = c;
        }
        ModuleMap::new(m.clone(), n.clone(), 0, mat).expect("solution of the chain-map equations")
    }
}

/// Columns of the identity picking the given basis elements.
pub fn unit_columns(m: &DgModule, idx: &[usize]) -> Matrix {
    let f = m.field();
    let mut out = Matrix::zeros(f, m.dim(), idx.len());
    for (c, &j) in idx.iter().enumerate() {
        out[(j, c)] = f.one();
    }
    out
}

/// Appends a cell whose δ column is `column` (one entry per existing cell).
pub fn attach(x: &TwistedComplex, cell: Cell, column: Vec<Lin>) -> TwistedComplex {
    let n = x.len();
    let mut entries = x.entries();
    for (t, v) in column.into_iter().enumerate() {
        if !v.is_zero() {
            entries.push((n, t, v));
        }
    }
    let mut cells = x.cells().to_vec();
    cells.push(cell);
    TwistedComplex::new(x.algebra().clone(), cells, entries).expect("attaching along a cocycle keeps MC")
}
