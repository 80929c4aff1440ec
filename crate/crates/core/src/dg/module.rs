use std::collections::BTreeMap;
use std::sync::Arc;

use super::algebra::DgAlgebra;
use super::lin::{Lin, LinAcc};
use crate::error::{Error, Result};
use crate::scalars::{FieldSpec, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleBasisElem {
    pub name: String,
    pub degree: i64,
    pub idem: usize,
}

/// A finite-dimensional right dg module on a basis adapted to degrees and idempotents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule {
    algebra: Arc<DgAlgebra>,
    basis: Vec<ModuleBasisElem>,
    diff: Vec<Lin>,
    /// `action[m][a] = m * a`
    action: Vec<Vec<Lin>>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

impl DgModule {
    /// Assembles and fully validates a module. Actions of idempotents are implied.
    pub fn new(
        algebra: Arc<DgAlgebra>,
        basis: Vec<ModuleBasisElem>,
        diff: Vec<(usize, Lin)>,
        action: Vec<(usize, usize, Lin)>,
    ) -> Result<Self> {
        let n = basis.len();
        let na = algebra.dim();
        let r = algebra.idempotent_count();
        for b in &basis {
            if b.idem >= r {
                return Err(Error::InvalidModule(format!("basis element {} refers to a missing idempotent", b.name)));
            }
        }
        let check = |v: &Lin| -> Result<()> {
            if v.indices().any(|i| i >= n) {
                return Err(Error::InvalidModule("basis index out of range".into()));
            }
            if v.terms().iter().any(|(_, c)| c.field() != algebra.field()) {
                return Err(Error::FieldMismatch);
            }
            Ok(())
        };
        let mut diff_table = vec![Lin::zero(); n];
        for (m, v) in diff {
            if m >= n {
                return Err(Error::InvalidModule(format!("differential of index {m} out of range")));
            }
            check(&v)?;
            diff_table[m] = v;
        }
        let mut table: Vec<Vec<Option<Lin>>> = vec![vec![None; na]; n];
        for (m, a, v) in action {
            if m >= n || a >= na {
                return Err(Error::InvalidModule(format!("action entry ({m},{a}) out of range")));
            }
            check(&v)?;
            table[m][a] = Some(v);
        }
        let f = algebra.field();
        let action_table = table
            .into_iter()
            .enumerate()
            .map(|(m, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(a, v)| {
                        v.unwrap_or_else(|| match algebra.idempotents().iter().position(|&e| e == a) {
                            Some(i) if basis[m].idem == i => Lin::basis(m, f),
                            _ => Lin::zero(),
                        })
                    })
                    .collect()
            })
            .collect();
        let module = Self::assemble(algebra, basis, diff_table, action_table);
        let violations = module.validate();
        if violations.is_empty() {
            Ok(module)
        } else {
            Err(Error::InvalidModule(violations.join("; ")))
        }
    }

    /// Trusted constructor for modules produced by the engine's own constructions.
    pub(crate) fn from_parts(
        algebra: Arc<DgAlgebra>,
        basis: Vec<ModuleBasisElem>,
        diff: Vec<Lin>,
        action: Vec<Vec<Lin>>,
    ) -> Self {
        let m = Self::assemble(algebra, basis, diff, action);
        debug_assert!(m.validate().is_empty(), "engine produced an invalid module: {:?}", m.validate());
        m
    }

    fn assemble(algebra: Arc<DgAlgebra>, basis: Vec<ModuleBasisElem>, diff: Vec<Lin>, action: Vec<Vec<Lin>>) -> Self {
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (j, b) in basis.iter().enumerate() {
            by_degree.entry(b.degree).or_default().push(j);
        }
        DgModule { algebra, basis, diff, action, by_degree }
    }

    pub fn zero(algebra: Arc<DgAlgebra>) -> Self {
        Self::from_parts(algebra, vec![], vec![], vec![])
    }

    /// The projective `e_i A`, on the basis elements of `A` with target `i`.
    pub fn projective(algebra: &Arc<DgAlgebra>, i: usize) -> Self {
        let idx: Vec<usize> = (0..algebra.dim()).filter(|&b| algebra.elem(b).target == i).collect();
        Self::sub_of_regular(algebra, &idx)
    }

    /// `A` as a right module over itself.
    pub fn regular(algebra: &Arc<DgAlgebra>) -> Self {
        let idx: Vec<usize> = (0..algebra.dim()).collect();
        Self::sub_of_regular(algebra, &idx)
    }

    fn sub_of_regular(algebra: &Arc<DgAlgebra>, idx: &[usize]) -> Self {
        let pos = |b: usize| idx.iter().position(|&x| x == b);
        let basis = idx
            .iter()
            .map(|&b| {
                let e = algebra.elem(b);
                ModuleBasisElem { name: e.name.clone(), degree: e.degree, idem: e.source }
            })
            .collect();
        let diff = idx.iter().map(|&b| algebra.diff(b).map_indices(pos)).collect();
        let action = idx
            .iter()
            .map(|&b| (0..algebra.dim()).map(|a| algebra.mul(b, a).map_indices(pos)).collect())
            .collect();
        Self::from_parts(algebra.clone(), basis, diff, action)
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ModuleBasisElem] {
        &self.basis
    }

    pub fn degree(&self, m: usize) -> i64 {
        self.basis[m].degree
    }

    pub fn idem(&self, m: usize) -> usize {
        self.basis[m].idem
    }

    pub fn diff(&self, m: usize) -> &Lin {
        &self.diff[m]
    }

    pub fn act(&self, m: usize, a: usize) -> &Lin {
        &self.action[m][a]
    }

    pub fn diff_lin(&self, x: &Lin) -> Lin {
        let mut acc = LinAcc::new();
        for (m, c) in x.terms() {
            acc.add_scaled(&self.diff[*m], c);
        }
        acc.finish()
    }

    /// `x * y` for a module element `x` and an algebra element `y`.
    pub fn act_lin(&self, x: &Lin, y: &Lin) -> Lin {
        let mut acc = LinAcc::new();
        for (m, c) in x.terms() {
            for (a, d) in y.terms() {
                let v = &self.action[*m][*a];
                if !v.is_zero() {
                    acc.add_scaled(v, &(c * d));
                }
            }
        }
        acc.finish()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.by_degree.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.by_degree.keys().next_back().copied()
    }

    pub fn in_degree(&self, p: i64) -> &[usize] {
        self.by_degree.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn block(&self, p: i64, i: usize) -> Vec<usize> {
        self.in_degree(p).iter().copied().filter(|&m| self.basis[m].idem == i).collect()
    }

    /// The differential restricted to `sources`, read off on `targets`.
    pub fn diff_matrix(&self, sources: &[usize], targets: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), targets.len(), sources.len());
        for (c, &s) in sources.iter().enumerate() {
            for (t, x) in self.diff[s].terms() {
                if let Some(r) = targets.iter().position(|y| y == t) {
                    m[(r, c)] = x.clone();
                }
            }
        }
        m
    }

    /// Lists every violated module axiom.
    pub fn validate(&self) -> Vec<String> {
        let alg = &self.algebra;
        let f = alg.field();
        let mut v = Vec::new();
        let name = |m: usize| self.basis[m].name.as_str();
        for m in 0..self.dim() {
            let bm = &self.basis[m];
            for (t, _) in self.diff[m].terms() {
                let bt = &self.basis[*t];
                if bt.degree != bm.degree + 1 || bt.idem != bm.idem {
                    v.push(format!("d({}) has a term {} of the wrong degree or idempotent", name(m), name(*t)));
                }
            }
            if !self.diff_lin(&self.diff[m]).is_zero() {
                v.push(format!("d(d({})) != 0", name(m)));
            }
            for a in 0..alg.dim() {
                let ea = alg.elem(a);
                let ma = &self.action[m][a];
                if bm.idem != ea.target && !ma.is_zero() {
                    v.push(format!("{} * {} must vanish (idempotents do not match)", name(m), ea.name));
                }
                for (t, _) in ma.terms() {
                    let bt = &self.basis[*t];
                    if bt.degree != bm.degree + ea.degree || bt.idem != ea.source {
                        v.push(format!("{} * {} has a term {} of the wrong degree or idempotent", name(m), ea.name, name(*t)));
                    }
                }
                if alg.is_idempotent(a) {
                    let want = if ea.target == bm.idem { Lin::basis(m, f) } else { Lin::zero() };
                    if *ma != want {
                        v.push(format!("{} * {} violates the unit axiom", name(m), ea.name));
                    }
                }
                // d(m a) = d(m) a + (-1)^|m| m d(a)
                let lhs = self.diff_lin(ma);
                let rhs = self
                    .act_lin(&self.diff[m], &Lin::basis(a, f))
                    .add(&self.act_lin(&Lin::basis(m, f), alg.diff(a)).signed(bm.degree));
                if lhs != rhs {
                    v.push(format!("Leibniz rule fails on ({}, {})", name(m), ea.name));
                }
                for b in 0..alg.dim() {
                    let l = self.act_lin(ma, &Lin::basis(b, f));
                    let r = self.act_lin(&Lin::basis(m, f), alg.mul(a, b));
                    if l != r {
                        v.push(format!("associativity fails on ({}, {}, {})", name(m), ea.name, alg.elem(b).name));
                    }
                }
            }
        }
        v.dedup();
        v
    }

    /// Re-expresses the module on a new basis.
    ///
    /// `change` is square and invertible; column `k` gives the new basis
    /// vector `k` in old coordinates, and must be homogeneous for degree and
    /// idempotent.
    pub fn change_basis(&self, change: &Matrix) -> Result<DgModule> {
        let n = self.dim();
        if change.rows() != n || change.cols() != n {
            return Err(Error::DimensionMismatch("basis change must be square".into()));
        }
        let f = self.field();
        let inv = change
            .solve(&Matrix::identity(f, n))?
            .filter(|x| change.mul(x).map(|p| p == Matrix::identity(f, n)).unwrap_or(false))
            .ok_or_else(|| Error::InvalidModule("basis change is not invertible".into()))?;
        let mut basis = Vec::with_capacity(n);
        for k in 0..n {
            let col = Lin::from_dense(&change.column(k));
            let mut it = col.indices().map(|m| (self.degree(m), self.idem(m)));
            let Some(first) = it.next() else {
                return Err(Error::InvalidModule("zero basis vector".into()));
            };
            if it.any(|x| x != first) {
                return Err(Error::InvalidModule("basis change mixes degrees or idempotents".into()));
            }
            basis.push(ModuleBasisElem { name: format!("b{k}"), degree: first.0, idem: first.1 });
        }
        let to_new = |x: &Lin| Lin::from_dense(&inv.mul_vec(&x.to_dense(n, f)));
        let cols: Vec<Lin> = (0..n).map(|k| Lin::from_dense(&change.column(k))).collect();
        let diff = cols.iter().map(|c| to_new(&self.diff_lin(c))).collect();
        let action = cols
            .iter()
            .map(|c| (0..self.algebra.dim()).map(|a| to_new(&self.act_lin(c, &Lin::basis(a, f)))).collect())
            .collect();
        Ok(Self::from_parts(self.algebra.clone(), basis, diff, action))
    }
}

/// Name-based module builder.
pub struct ModuleBuilder {
    algebra: Arc<DgAlgebra>,
    basis: Vec<ModuleBasisElem>,
    diff: Vec<(String, Vec<(String, i64)>)>,
    action: Vec<(String, String, Vec<(String, i64)>)>,
}

impl ModuleBuilder {
    pub fn new(algebra: &Arc<DgAlgebra>) -> Self {
        ModuleBuilder { algebra: algebra.clone(), basis: vec![], diff: vec![], action: vec![] }
    }

    pub fn element(mut self, name: &str, degree: i64, idem: usize) -> Self {
        self.basis.push(ModuleBasisElem { name: name.into(), degree, idem });
        self
    }

    pub fn differential(mut self, m: &str, terms: &[(&str, i64)]) -> Self {
        self.diff.push((m.into(), terms.iter().map(|(n, c)| (n.to_string(), *c)).collect()));
        self
    }

    pub fn action(mut self, m: &str, a: &str, terms: &[(&str, i64)]) -> Self {
        self.action.push((m.into(), a.into(), terms.iter().map(|(n, c)| (n.to_string(), *c)).collect()));
        self
    }

    pub fn build(self) -> Result<DgModule> {
        let f = self.algebra.field();
        let idx = |name: &str| -> Result<usize> {
            self.basis
                .iter()
                .position(|b| b.name == name)
                .ok_or_else(|| Error::InvalidModule(format!("unknown basis element {name}")))
        };
        let lin = |terms: &[(String, i64)]| -> Result<Lin> {
            Ok(Lin::from_terms(terms.iter().map(|(n, c)| Ok((idx(n)?, f.from_i64(*c)))).collect::<Result<Vec<_>>>()?))
        };
        let diff = self.diff.iter().map(|(m, t)| Ok((idx(m)?, lin(t)?))).collect::<Result<Vec<_>>>()?;
        let action = self
            .action
            .iter()
            .map(|(m, a, t)| {
                let ai = self.algebra.index_of(a).ok_or_else(|| Error::InvalidModule(format!("unknown algebra element {a}")))?;
                Ok((idx(m)?, ai, lin(t)?))
            })
            .collect::<Result<Vec<_>>>()?;
        DgModule::new(self.algebra.clone(), self.basis.clone(), diff, action)
    }
}

/// Dimensions of `H^p(X) e_i`, keyed by degree; only nonzero degrees are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomologyTable {
    idempotents: usize,
    dims: BTreeMap<i64, Vec<usize>>,
}

impl HomologyTable {
    pub fn new(idempotents: usize) -> Self {
        HomologyTable { idempotents, dims: BTreeMap::new() }
    }

    pub fn set(&mut self, p: i64, i: usize, d: usize) {
        let row = self.dims.entry(p).or_insert_with(|| vec![0; self.idempotents]);
        row[i] = d;
        if row.iter().all(|&x| x == 0) {
            self.dims.remove(&p);
        }
    }

    pub fn idempotents(&self) -> usize {
        self.idempotents
    }

    pub fn at(&self, p: i64, i: usize) -> usize {
        self.dims.get(&p).map_or(0, |r| r[i])
    }

    pub fn total(&self, p: i64) -> usize {
        self.dims.get(&p).map_or(0, |r| r.iter().sum())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().flatten().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn rows(&self) -> &BTreeMap<i64, Vec<usize>> {
        &self.dims
    }

    /// `(lowest, highest)` degree with nonzero homology.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.dims.keys().next()?, *self.dims.keys().next_back()?))
    }

    /// The table of `Σ^k X`: `H^p(Σ^k X) = H^{p+k}(X)`.
    pub fn shifted(&self, k: i64) -> HomologyTable {
        HomologyTable { idempotents: self.idempotents, dims: self.dims.iter().map(|(p, r)| (p - k, r.clone())).collect() }
    }

    pub fn sum(&self, other: &HomologyTable) -> HomologyTable {
        let mut out = self.clone();
        for (p, r) in &other.dims {
            for (i, d) in r.iter().enumerate() {
                let cur = out.at(*p, i);
                out.set(*p, i, cur + d);
            }
        }
        out
    }
}

/// Per-degree, per-idempotent homology dimensions.
pub fn homology(x: &DgModule) -> HomologyTable {
    let r = x.algebra().idempotent_count();
    let mut t = HomologyTable::new(r);
    for p in x.degrees() {
        for i in 0..r {
            let here = x.block(p, i);
            if here.is_empty() {
                continue;
            }
            let out_rank = x.diff_matrix(&here, &x.block(p + 1, i)).rank();
            let in_rank = x.diff_matrix(&x.block(p - 1, i), &here).rank();
            t.set(p, i, here.len() - out_rank - in_rank);
        }
    }
    t
}

/// Cocycles in `X^p e_i` whose classes form a basis of `H^p(X) e_i`, as full coordinate vectors.
pub fn homology_representatives(x: &DgModule, p: i64, i: usize) -> Vec<Lin> {
    let here = x.block(p, i);
    if here.is_empty() {
        return vec![];
    }
    let cycles = x.diff_matrix(&here, &x.block(p + 1, i)).kernel_basis();
    let boundaries = x.diff_matrix(&x.block(p - 1, i), &here);
    let stacked = boundaries.hstack(&cycles).expect("same row count");
    let nb = boundaries.cols();
    stacked
        .rref()
        .pivots
        .into_iter()
        .filter(|&c| c >= nb)
        .map(|c| {
            let col = cycles.column(c - nb);
            Lin::from_terms(here.iter().zip(col).map(|(&m, v)| (m, v)))
        })
        .collect()
}

pub(crate) fn scalar_vec_to_lin(indices: &[usize], v: &[Scalar]) -> Lin {
    Lin::from_terms(indices.iter().zip(v).map(|(&m, c)| (m, c.clone())))
}
