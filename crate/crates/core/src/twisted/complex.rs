use std::collections::HashMap;
use std::sync::Arc;

use crate::dg::{DgAlgebra, DgModule, Lin, LinAcc, ModuleBasisElem, ModuleMap};
use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// One summand `Σ^shift e_idem A` of a twisted complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub idem: usize,
    pub shift: i64,
}

impl Cell {
    pub fn new(idem: usize, shift: i64) -> Self {
        Cell { idem, shift }
    }
}

/// A one-sided twisted complex over the summands `e_i A`.
///
/// `delta[t][s]` is an element of `e_{i_t} A e_{i_s}` of degree `1 + n_t - n_s`,
/// acting by left multiplication from cell `s` to cell `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    algebra: Arc<DgAlgebra>,
    cells: Vec<Cell>,
    delta: Vec<Vec<Lin>>,
}

impl TwistedComplex {
    /// Validates cell data, entry homogeneity, strict triangularity and the Maurer-Cartan equation.
    /// Entries are given as `(s, t, element)`.
    pub fn new(algebra: Arc<DgAlgebra>, cells: Vec<Cell>, entries: Vec<(usize, usize, Lin)>) -> Result<Self> {
        algebra.require_valid()?;
        let n = cells.len();
        if let Some(c) = cells.iter().find(|c| c.idem >= algebra.idempotent_count()) {
            return Err(Error::InvalidModule(format!("cell refers to missing idempotent {}", c.idem)));
        }
        let mut delta = vec![vec![Lin::zero(); n]; n];
        for (s, t, v) in entries {
            if s >= n || t >= n {
                return Err(Error::InvalidModule(format!("delta entry ({s},{t}) out of range")));
            }
            if v.indices().any(|a| a >= algebra.dim()) {
                return Err(Error::InvalidModule("delta entry refers to a missing algebra element".into()));
            }
            if v.terms().iter().any(|(_, c)| c.field() != algebra.field()) {
                return Err(Error::FieldMismatch);
            }
            delta[t][s] = delta[t][s].add(&v);
        }
        let x = TwistedComplex { algebra, cells, delta };
        x.validate()?;
        Ok(x)
    }

    pub(crate) fn from_parts(algebra: Arc<DgAlgebra>, cells: Vec<Cell>, delta: Vec<Vec<Lin>>) -> Self {
        let x = TwistedComplex { algebra, cells, delta };
        debug_assert!(x.validate().is_ok(), "engine produced an invalid twisted complex: {:?}", x.validate());
        x
    }

    pub fn empty(algebra: Arc<DgAlgebra>) -> Self {
        TwistedComplex { algebra, cells: vec![], delta: vec![] }
    }

    /// The single cell `Σ^shift e_i A`.
    pub fn cell(algebra: &Arc<DgAlgebra>, idem: usize, shift: i64) -> Self {
        Self::from_parts(algebra.clone(), vec![Cell::new(idem, shift)], vec![vec![Lin::zero()]])
    }

    /// `A = ⊕ e_i A`.
    pub fn free(algebra: &Arc<DgAlgebra>) -> Self {
        let r = algebra.idempotent_count();
        Self::from_parts(algebra.clone(), (0..r).map(|i| Cell::new(i, 0)).collect(), vec![vec![Lin::zero(); r]; r])
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        &self.algebra
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The entry from cell `s` to cell `t`.
    pub fn delta(&self, t: usize, s: usize) -> &Lin {
        &self.delta[t][s]
    }

    pub fn delta_matrix(&self) -> &[Vec<Lin>] {
        &self.delta
    }

    /// Nonzero entries as `(s, t, element)`, ordered by `(s, t)`.
    pub fn entries(&self) -> Vec<(usize, usize, Lin)> {
        let n = self.len();
        let mut out = Vec::new();
        for s in 0..n {
            for t in 0..n {
                if !self.delta[t][s].is_zero() {
                    out.push((s, t, self.delta[t][s].clone()));
                }
            }
        }
        out
    }

    /// Required degree of an entry from `s` to `t` for a map of degree `p`.
    pub fn entry_degree(&self, t: usize, s: usize, p: i64) -> i64 {
        p + self.cells[t].shift - self.cells[s].shift
    }

    pub fn validate(&self) -> Result<()> {
        let alg = &self.algebra;
        let n = self.len();
        for t in 0..n {
            for s in 0..n {
                let v = &self.delta[t][s];
                for a in v.indices() {
                    let e = alg.elem(a);
                    if e.target != self.cells[t].idem || e.source != self.cells[s].idem {
                        return Err(Error::InvalidModule(format!(
                            "delta entry ({s},{t}) contains {} outside e_{} A e_{}",
                            e.name, self.cells[t].idem, self.cells[s].idem
                        )));
                    }
                    if e.degree != self.entry_degree(t, s, 1) {
                        return Err(Error::InvalidModule(format!(
                            "delta entry ({s},{t}) contains {} of degree {}, expected {}",
                            e.name,
                            e.degree,
                            self.entry_degree(t, s, 1)
                        )));
                    }
                }
            }
        }
        if self.triangular_order().is_none() {
            return Err(Error::NotTriangular);
        }
        let res = self.mc_residual();
        for t in 0..n {
            for s in 0..n {
                if !res[t][s].is_zero() {
                    return Err(Error::MaurerCartan(format!("entry ({s},{t}) of d(delta) + delta^2 is nonzero")));
                }
            }
        }
        Ok(())
    }

    /// `(-1)^{n_t} d(δ_ts) + Σ_u δ_tu δ_us`, which vanishes exactly when the Maurer-Cartan equation holds.
    pub fn mc_residual(&self) -> Vec<Vec<Lin>> {
        let n = self.len();
        let alg = &self.algebra;
        let mut out = vec![vec![Lin::zero(); n]; n];
        for t in 0..n {
            for s in 0..n {
                let mut acc = LinAcc::new();
                acc.add(&alg.diff_lin(&self.delta[t][s]).signed(self.cells[t].shift));
                for u in 0..n {
                    if !self.delta[t][u].is_zero() && !self.delta[u][s].is_zero() {
                        acc.add(&alg.mul_lin(&self.delta[t][u], &self.delta[u][s]));
                    }
                }
                out[t][s] = acc.finish();
            }
        }
        out
    }

    /// An order of the cells in which every nonzero `δ_ts` has `s` before `t`.
    /// `None` when the support of δ has a cycle.
    pub fn triangular_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for t in 0..n {
            for s in 0..n {
                if !self.delta[t][s].is_zero() {
                    if s == t {
                        return None;
                    }
                    indeg[t] += 1;
                }
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&c| indeg[c] == 0).rev().collect();
        while let Some(s) = ready.pop() {
            order.push(s);
            for t in (0..n).rev() {
                if t != s && !self.delta[t][s].is_zero() {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// No entry of δ is an invertible scalar multiple of an idempotent.
    pub fn is_minimal(&self) -> bool {
        self.scalar_entries().is_empty()
    }

    /// Entries `(s, t, c)` with `δ_ts = c e_i`, `c ≠ 0`.
    pub fn scalar_entries(&self) -> Vec<(usize, usize, Scalar)> {
        let n = self.len();
        let mut out = Vec::new();
        for s in 0..n {
            for t in 0..n {
                if self.cells[t].idem != self.cells[s].idem {
                    continue;
                }
                if let Some(c) = self.algebra.as_scalar_of_idempotent(&self.delta[t][s], self.cells[t].idem) {
                    out.push((s, t, c));
                }
            }
        }
        out
    }

    /// `reach[a][b]`: there is a path of length at least one from cell `a` to cell `b` in the support of δ.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut reach = vec![vec![false; n]; n];
        for a in 0..n {
            let mut stack: Vec<usize> = (0..n).filter(|&t| !self.delta[t][a].is_zero()).collect();
            while let Some(b) = stack.pop() {
                if reach[a][b] {
                    continue;
                }
                reach[a][b] = true;
                stack.extend((0..n).filter(|&t| !self.delta[t][b].is_zero() && !reach[a][t]));
            }
        }
        reach
    }

    /// Scalar entries `(s, t, c)` whose elimination keeps δ triangular: there is no other path from `s` to `t`.
    ///
    /// Over a class P algebra this set is nonempty whenever some scalar entry exists.
    pub fn eliminable_entries(&self) -> Vec<(usize, usize, Scalar)> {
        let reach = self.reachability();
        self.scalar_entries()
            .into_iter()
            .filter(|&(s, t, _)| (0..self.len()).all(|w| w == t || self.delta[w][s].is_zero() || !reach[w][t]))
            .collect()
    }

    /// `Σ^k x`: shifts raised by `k`, δ multiplied by `(-1)^k`.
    pub fn shift(&self, k: i64) -> TwistedComplex {
        TwistedComplex {
            algebra: self.algebra.clone(),
            cells: self.cells.iter().map(|c| Cell::new(c.idem, c.shift + k)).collect(),
            delta: self.delta.iter().map(|row| row.iter().map(|v| v.signed(k)).collect()).collect(),
        }
    }

    pub fn direct_sum(&self, other: &TwistedComplex) -> Result<TwistedComplex> {
        if self.algebra.as_ref() != other.algebra.as_ref() {
            return Err(Error::AlgebraMismatch);
        }
        let (n, m) = (self.len(), other.len());
        let mut delta = vec![vec![Lin::zero(); n + m]; n + m];
        for t in 0..n {
            for s in 0..n {
                delta[t][s] = self.delta[t][s].clone();
            }
        }
        for t in 0..m {
            for s in 0..m {
                delta[n + t][n + s] = other.delta[t][s].clone();
            }
        }
        let cells = self.cells.iter().chain(&other.cells).copied().collect();
        Ok(TwistedComplex { algebra: self.algebra.clone(), cells, delta })
    }

    /// The complex on a subset of cells (in the given order) with the induced δ.
    ///
    /// This is a subobject when no entry leaves the subset and a quotient when none enters it.
    pub fn restrict(&self, keep: &[usize]) -> TwistedComplex {
        let delta = keep.iter().map(|&t| keep.iter().map(|&s| self.delta[t][s].clone()).collect()).collect();
        TwistedComplex {
            algebra: self.algebra.clone(),
            cells: keep.iter().map(|&c| self.cells[c]).collect(),
            delta,
        }
    }

    /// Whether no entry of δ points from inside `subset` to outside it.
    pub fn is_closed(&self, subset: &[usize]) -> bool {
        let inside: std::collections::HashSet<usize> = subset.iter().copied().collect();
        subset.iter().all(|&s| (0..self.len()).all(|t| inside.contains(&t) || self.delta[t][s].is_zero()))
    }

    /// Basis of `e_i A`, as algebra basis indices.
    pub fn cell_basis(&self, i: usize) -> Vec<usize> {
        (0..self.algebra.dim()).filter(|&b| self.algebra.elem(b).target == i).collect()
    }

    /// The underlying dg module: for each cell the basis of `e_i A` placed in degree `deg b - n`.
    pub fn realize(&self) -> Realization {
        let alg = &self.algebra;
        let f = alg.field();
        let r = alg.idempotent_count();
        let cell_bases: Vec<Vec<usize>> = (0..r).map(|i| self.cell_basis(i)).collect();
        let mut offsets = Vec::with_capacity(self.len());
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut basis = Vec::new();
        for (s, c) in self.cells.iter().enumerate() {
            offsets.push(basis.len());
            for &b in &cell_bases[c.idem] {
                let e = alg.elem(b);
                index.insert((s, b), basis.len());
                basis.push(ModuleBasisElem {
                    name: format!("c{s}.{}", e.name),
                    degree: e.degree - c.shift,
                    idem: e.source,
                });
            }
        }
        let embed = |s: usize, v: &Lin| v.map_indices(|b| index.get(&(s, b)).copied());
        let mut diff = Vec::with_capacity(basis.len());
        let mut action = Vec::with_capacity(basis.len());
        for (s, c) in self.cells.iter().enumerate() {
            for &b in &cell_bases[c.idem] {
                let mut acc = LinAcc::new();
                acc.add(&embed(s, &alg.diff(b).signed(c.shift)));
                for t in 0..self.len() {
                    let d = &self.delta[t][s];
                    if !d.is_zero() {
                        acc.add(&embed(t, &alg.mul_lin(d, &Lin::basis(b, f))));
                    }
                }
                diff.push(acc.finish());
                action.push((0..alg.dim()).map(|a| embed(s, alg.mul(b, a))).collect());
            }
        }
        let module = Arc::new(DgModule::from_parts(alg.clone(), basis, diff, action));
        Realization { module, offsets, index }
    }
}

/// The module underlying a twisted complex, with the position of each `(cell, algebra basis element)`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub module: Arc<DgModule>,
    pub offsets: Vec<usize>,
    index: HashMap<(usize, usize), usize>,
}

impl Realization {
    pub fn position(&self, cell: usize, elem: usize) -> Option<usize> {
        self.index.get(&(cell, elem)).copied()
    }

    /// Splits a module element into per-cell algebra elements.
    pub fn components(&self, v: &Lin, cells: usize) -> Vec<Lin> {
        let mut by_cell = vec![Vec::new(); cells];
        let mut inverse: HashMap<usize, (usize, usize)> = HashMap::new();
        for (&(s, b), &k) in &self.index {
            inverse.insert(k, (s, b));
        }
        for (k, c) in v.terms() {
            let (s, b) = inverse[k];
            by_cell[s].push((b, c.clone()));
        }
        by_cell.into_iter().map(Lin::from_terms).collect()
    }
}

/// A homogeneous map between twisted complexes: `entries[t][s] ∈ e_{i_t} A e_{i_s}` of degree
/// `p + n_t - n_s`, acting by left multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwMap {
    pub degree: i64,
    /// Number of source cells, kept separately so maps out of or into the empty complex keep their shape.
    pub cols: usize,
    pub entries: Vec<Vec<Lin>>,
}

impl TwMap {
    pub fn new(degree: i64, cols: usize, entries: Vec<Vec<Lin>>) -> Self {
        debug_assert!(entries.iter().all(|r| r.len() == cols));
        TwMap { degree, cols, entries }
    }

    pub fn zero(source: &TwistedComplex, target: &TwistedComplex, degree: i64) -> Self {
        TwMap::new(degree, source.len(), vec![vec![Lin::zero(); source.len()]; target.len()])
    }

    pub fn identity(x: &TwistedComplex) -> Self {
        let f = x.algebra.field();
        let mut m = Self::zero(x, x, 0);
        for (s, c) in x.cells.iter().enumerate() {
            m.entries[s][s] = Lin::basis(x.algebra.idempotent(c.idem), f);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Lin::is_zero)
    }

    /// Checks shapes, blocks and degrees against `source -> target`.
    pub fn check(&self, source: &TwistedComplex, target: &TwistedComplex) -> Result<()> {
        if source.algebra.as_ref() != target.algebra.as_ref() {
            return Err(Error::AlgebraMismatch);
        }
        if self.entries.len() != target.len() || self.cols != source.len() || self.entries.iter().any(|r| r.len() != source.len()) {
            return Err(Error::DimensionMismatch("map shape does not match the cells".into()));
        }
        let alg = &source.algebra;
        for (t, row) in self.entries.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                let want = self.degree + target.cells[t].shift - source.cells[s].shift;
                for a in v.indices() {
                    let e = alg.elem(a);
                    if e.target != target.cells[t].idem || e.source != source.cells[s].idem || e.degree != want {
                        return Err(Error::InvalidMap(format!("entry ({s},{t}) contains {} of the wrong block or degree", e.name)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TwMap, alg: &DgAlgebra) -> TwMap {
        let (rows, mid, cols) = (self.rows(), other.rows(), other.cols());
        let mut entries = vec![vec![Lin::zero(); cols]; rows];
        for (t, row) in entries.iter_mut().enumerate() {
            for (s, slot) in row.iter_mut().enumerate() {
                let mut acc = LinAcc::new();
                for u in 0..mid {
                    let (a, b) = (&self.entries[t][u], &other.entries[u][s]);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add(&alg.mul_lin(a, b));
                    }
                }
                *slot = acc.finish();
            }
        }
        TwMap::new(self.degree + other.degree, cols, entries)
    }

    pub fn add(&self, other: &TwMap) -> TwMap {
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect();
        TwMap::new(self.degree, self.cols, entries)
    }

    pub fn sub(&self, other: &TwMap) -> TwMap {
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()).collect();
        TwMap::new(self.degree, self.cols, entries)
    }

    pub fn scale(&self, c: &Scalar) -> TwMap {
        TwMap::new(self.degree, self.cols, self.entries.iter().map(|r| r.iter().map(|v| v.scale(c)).collect()).collect())
    }

    /// `D(f) = D_y f - (-1)^p f D_x`, componentwise
    /// `(-1)^{n_t} d(f_ts) + Σ_u δ^y_tu f_us - (-1)^p Σ_u f_tu δ^x_us`.
    pub fn boundary(&self, source: &TwistedComplex, target: &TwistedComplex) -> TwMap {
        let alg = &source.algebra;
        let p = self.degree;
        let mut entries = vec![vec![Lin::zero(); source.len()]; target.len()];
        for (t, row) in entries.iter_mut().enumerate() {
            for (s, slot) in row.iter_mut().enumerate() {
                let mut acc = LinAcc::new();
                acc.add(&alg.diff_lin(&self.entries[t][s]).signed(target.cells[t].shift));
                for u in 0..target.len() {
                    let (a, b) = (&target.delta[t][u], &self.entries[u][s]);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add(&alg.mul_lin(a, b));
                    }
                }
                for u in 0..source.len() {
                    let (a, b) = (&self.entries[t][u], &source.delta[u][s]);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add(&alg.mul_lin(a, b).signed(p + 1));
                    }
                }
                *slot = acc.finish();
            }
        }
        TwMap::new(p + 1, source.len(), entries)
    }

    pub fn is_cycle(&self, source: &TwistedComplex, target: &TwistedComplex) -> bool {
        self.boundary(source, target).is_zero()
    }

    /// The induced map of realizations.
    pub fn realize(&self, source: &TwistedComplex, target: &TwistedComplex) -> (Realization, Realization, ModuleMap) {
        let rs = source.realize();
        let rt = target.realize();
        let map = self.realize_between(source, &rs, &rt);
        (rs, rt, map)
    }

    pub fn realize_between(&self, source: &TwistedComplex, rs: &Realization, rt: &Realization) -> ModuleMap {
        let alg = &source.algebra;
        let f = alg.field();
        let mut images = vec![Lin::zero(); rs.module.dim()];
        for (s, c) in source.cells.iter().enumerate() {
            for b in source.cell_basis(c.idem) {
                let mut acc = LinAcc::new();
                for (t, row) in self.entries.iter().enumerate() {
                    if !row[s].is_zero() {
                        let v = alg.mul_lin(&row[s], &Lin::basis(b, f));
                        acc.add(&v.map_indices(|a| rt.position(t, a)));
                    }
                }
                images[rs.position(s, b).expect("cell basis")] = acc.finish();
            }
        }
        ModuleMap::from_images(rs.module.clone(), rt.module.clone(), self.degree, &images)
    }
}

/// Cone of a degree-0 cycle `f: x -> y`: the cells of `x` shifted by one, then those of `y`,
/// with `δ = [[-δ^x, 0], [f, δ^y]]`.
pub fn tw_cone(x: &TwistedComplex, y: &TwistedComplex, f: &TwMap) -> Result<TwistedComplex> {
    f.check(x, y)?;
    if f.degree != 0 {
        return Err(Error::InvalidMap("cone needs a map of degree 0".into()));
    }
    if !f.is_cycle(x, y) {
        return Err(Error::NotACycle);
    }
    let (n, m) = (x.len(), y.len());
    let mut delta = vec![vec![Lin::zero(); n + m]; n + m];
    for t in 0..n {
        for s in 0..n {
            delta[t][s] = x.delta[t][s].neg();
        }
    }
    for t in 0..m {
        for s in 0..n {
            delta[n + t][s] = f.entries[t][s].clone();
        }
        for s in 0..m {
            delta[n + t][n + s] = y.delta[t][s].clone();
        }
    }
    let cells = x.cells.iter().map(|c| Cell::new(c.idem, c.shift + 1)).chain(y.cells.iter().copied()).collect();
    Ok(TwistedComplex::from_parts(x.algebra.clone(), cells, delta))
}
