use std::collections::{BTreeMap, HashMap};

use super::complex::{TwMap, TwistedComplex};
use crate::dg::{DgModule, Lin};
use crate::error::{Error, Result};
use crate::scalars::{FieldSpec, Matrix, Scalar};

/// A bounded cochain complex of finite-dimensional vector spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    field: FieldSpec,
    dims: BTreeMap<i64, usize>,
    /// `diffs[p]: C^p -> C^{p+1}`
    diffs: BTreeMap<i64, Matrix>,
}

impl CochainComplex {
    pub fn new(field: FieldSpec, dims: BTreeMap<i64, usize>, diffs: BTreeMap<i64, Matrix>) -> Self {
        CochainComplex { field, dims: dims.into_iter().filter(|(_, d)| *d > 0).collect(), diffs }
    }

    pub fn dim(&self, p: i64) -> usize {
        self.dims.get(&p).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }

    /// `(lowest, highest)` nonzero chain degree.
    pub fn chain_support(&self) -> Option<(i64, i64)> {
        Some((*self.dims.keys().next()?, *self.dims.keys().next_back()?))
    }

    pub fn differential(&self, p: i64) -> Matrix {
        self.diffs.get(&p).cloned().unwrap_or_else(|| Matrix::zeros(self.field, self.dim(p + 1), self.dim(p)))
    }

    pub fn homology_dim(&self, p: i64) -> usize {
        let n = self.dim(p);
        if n == 0 {
            return 0;
        }
        n - self.differential(p).rank() - self.differential(p - 1).rank()
    }

    /// Nonzero homology dimensions by degree.
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        self.degrees().map(|p| (p, self.homology_dim(p))).filter(|(_, d)| *d > 0).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|p| self.homology_dim(p) == 0)
    }

    /// `D²` vanishes in every degree.
    pub fn is_complex(&self) -> bool {
        self.degrees().all(|p| self.differential(p + 1).mul(&self.differential(p)).map(|m| m.is_zero()).unwrap_or(false))
    }

    pub fn is_cycle(&self, p: i64, v: &[Scalar]) -> bool {
        self.differential(p).mul_vec(v).iter().all(Scalar::is_zero)
    }

    /// Whether `v ∈ C^p` is `D` of something.
    pub fn is_boundary(&self, p: i64, v: &[Scalar]) -> bool {
        let d = self.differential(p - 1);
        let b = Matrix::from_columns(self.field, v.len(), &[v.to_vec()]);
        matches!(d.solve(&b), Ok(Some(_)))
    }

    /// Cocycles whose classes form a basis of `H^p`.
    pub fn homology_basis(&self, p: i64) -> Vec<Vec<Scalar>> {
        let n = self.dim(p);
        if n == 0 {
            return vec![];
        }
        let cycles = self.differential(p).kernel_basis();
        let bnd = self.differential(p - 1);
        let nb = bnd.cols();
        let stacked = bnd.hstack(&cycles).expect("same rows");
        stacked.rref().pivots.into_iter().filter(|&c| c >= nb).map(|c| cycles.column(c - nb)).collect()
    }
}

/// `Hom(x, y)` of twisted complexes; its homology in degree `p` is `Hom(x, Σ^p y)` in the derived category.
#[derive(Clone, Debug)]
pub struct TwHom {
    pub complex: CochainComplex,
    /// Basis of `Hom^p` as `(t, s, algebra basis element)`.
    pub bases: BTreeMap<i64, Vec<(usize, usize, usize)>>,
    source_len: usize,
    target_len: usize,
}

impl TwHom {
    pub fn homology_dim(&self, p: i64) -> usize {
        self.complex.homology_dim(p)
    }

    pub fn dim(&self, p: i64) -> usize {
        self.complex.dim(p)
    }

    /// The map with the given coordinates in degree `p`.
    pub fn to_map(&self, p: i64, v: &[Scalar]) -> TwMap {
        let mut entries = vec![vec![Vec::new(); self.source_len]; self.target_len];
        if let Some(basis) = self.bases.get(&p) {
            for (&(t, s, b), c) in basis.iter().zip(v) {
                if !c.is_zero() {
                    entries[t][s].push((b, c.clone()));
                }
            }
        }
        TwMap::new(p, self.source_len, entries.into_iter().map(|r| r.into_iter().map(Lin::from_terms).collect()).collect())
    }

    /// Coordinates of a map of degree `p`.
    pub fn coordinates(&self, f: &TwMap, field: FieldSpec) -> Vec<Scalar> {
        let basis = self.bases.get(&f.degree).map_or(&[][..], Vec::as_slice);
        basis.iter().map(|&(t, s, b)| f.entries[t][s].coeff(b).cloned().unwrap_or_else(|| field.zero())).collect()
    }

    /// Degree-`p` cycles whose classes form a basis of the homology.
    pub fn homology_basis(&self, p: i64) -> Vec<TwMap> {
        self.complex.homology_basis(p).iter().map(|v| self.to_map(p, v)).collect()
    }
}

/// The Hom complex between two twisted complexes.
pub fn tw_hom(x: &TwistedComplex, y: &TwistedComplex) -> Result<TwHom> {
    if x.algebra().as_ref() != y.algebra().as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    let alg = x.algebra();
    let fld = alg.field();
    let mut bases: BTreeMap<i64, Vec<(usize, usize, usize)>> = BTreeMap::new();
    for (t, ct) in y.cells().iter().enumerate() {
        for (s, cs) in x.cells().iter().enumerate() {
            for b in 0..alg.dim() {
                let e = alg.elem(b);
                if e.target == ct.idem && e.source == cs.idem {
                    bases.entry(e.degree + cs.shift - ct.shift).or_default().push((t, s, b));
                }
            }
        }
    }
    for v in bases.values_mut() {
        v.sort_unstable();
    }
    let index: BTreeMap<i64, HashMap<(usize, usize, usize), usize>> = bases
        .iter()
        .map(|(p, v)| (*p, v.iter().enumerate().map(|(k, key)| (*key, k)).collect()))
        .collect();
    let mut diffs = BTreeMap::new();
    for (&p, basis) in &bases {
        let Some(next) = index.get(&(p + 1)) else { continue };
        let mut m = Matrix::zeros(fld, next.len(), basis.len());
        for (col, &(t, s, b)) in basis.iter().enumerate() {
            let mut put = |tt: usize, ss: usize, v: &Lin| {
                for (a, c) in v.terms() {
                    let row = next[&(tt, ss, *a)];
                    let cur = m[(row, col)].clone();
                    m[(row, col)] = &cur + c;
                }
            };
            let fb = Lin::basis(b, fld);
            put(t, s, &alg.diff(b).signed(y.cells()[t].shift));
            for u in 0..y.len() {
                let d = y.delta(u, t);
                if !d.is_zero() {
                    put(u, s, &alg.mul_lin(d, &fb));
                }
            }
            for u in 0..x.len() {
                let d = x.delta(s, u);
                if !d.is_zero() {
                    put(t, u, &alg.mul_lin(&fb, d).signed(p + 1));
                }
            }
        }
        diffs.insert(p, m);
    }
    let dims = bases.iter().map(|(p, v)| (*p, v.len())).collect();
    Ok(TwHom { complex: CochainComplex::new(fld, dims, diffs), bases, source_len: x.len(), target_len: y.len() })
}

/// `Hom(x, m)` for a twisted complex `x` and a dg module `m`: a degree-`p` element assigns to
/// each cell `s` the image `φ_s ∈ (m e_{i_s})^{p - n_s}` of its generator.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    pub complex: CochainComplex,
    /// Basis of `Hom^p` as `(cell, module basis element)`.
    pub bases: BTreeMap<i64, Vec<(usize, usize)>>,
    cells: usize,
}

impl ModuleHom {
    pub fn homology_dim(&self, p: i64) -> usize {
        self.complex.homology_dim(p)
    }

    /// Per-cell images for a coordinate vector in degree `p`.
    pub fn images(&self, p: i64, v: &[Scalar]) -> Vec<Lin> {
        let mut out = vec![Vec::new(); self.cells];
        if let Some(basis) = self.bases.get(&p) {
            for (&(s, j), c) in basis.iter().zip(v) {
                if !c.is_zero() {
                    out[s].push((j, c.clone()));
                }
            }
        }
        out.into_iter().map(Lin::from_terms).collect()
    }

    pub fn coordinates(&self, p: i64, images: &[Lin], field: FieldSpec) -> Vec<Scalar> {
        let basis = self.bases.get(&p).map_or(&[][..], Vec::as_slice);
        basis.iter().map(|&(s, j)| images[s].coeff(j).cloned().unwrap_or_else(|| field.zero())).collect()
    }
}

pub fn hom_module(x: &TwistedComplex, m: &DgModule) -> Result<ModuleHom> {
    if x.algebra().as_ref() != m.algebra().as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    let alg = x.algebra();
    let fld = alg.field();
    let mut bases: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for (s, c) in x.cells().iter().enumerate() {
        for j in 0..m.dim() {
            if m.idem(j) == c.idem {
                bases.entry(m.degree(j) + c.shift).or_default().push((s, j));
            }
        }
    }
    for v in bases.values_mut() {
        v.sort_unstable();
    }
    let index: BTreeMap<i64, HashMap<(usize, usize), usize>> = bases
        .iter()
        .map(|(p, v)| (*p, v.iter().enumerate().map(|(k, key)| (*key, k)).collect()))
        .collect();
    let mut diffs = BTreeMap::new();
    for (&p, basis) in &bases {
        let Some(next) = index.get(&(p + 1)) else { continue };
        let mut mat = Matrix::zeros(fld, next.len(), basis.len());
        for (col, &(t, j)) in basis.iter().enumerate() {
            let mut put = |ss: usize, v: &Lin| {
                for (k, c) in v.terms() {
                    let row = next[&(ss, *k)];
                    let cur = mat[(row, col)].clone();
                    mat[(row, col)] = &cur + c;
                }
            };
            put(t, m.diff(j));
            for s in 0..x.len() {
                let d = x.delta(t, s);
                if !d.is_zero() {
                    put(s, &m.act_lin(&Lin::basis(j, fld), d).signed(p + 1));
                }
            }
        }
        diffs.insert(p, mat);
    }
    let dims = bases.iter().map(|(p, v)| (*p, v.len())).collect();
    Ok(ModuleHom { complex: CochainComplex::new(fld, dims, diffs), bases, cells: x.len() })
}

/// Precomposition `φ ↦ φ ∘ f` for a degree-0 map `f: x' -> x`, as a matrix in degree `p`.
pub fn pullback_matrix(f: &TwMap, from: &ModuleHom, to: &ModuleHom, m: &DgModule, p: i64) -> Matrix {
    let fld = m.field();
    let src = from.bases.get(&p).map_or(&[][..], Vec::as_slice);
    let tgt_index: HashMap<(usize, usize), usize> =
        to.bases.get(&p).map_or(&[][..], Vec::as_slice).iter().enumerate().map(|(k, key)| (*key, k)).collect();
    let mut mat = Matrix::zeros(fld, tgt_index.len(), src.len());
    for (col, &(s, j)) in src.iter().enumerate() {
        for (s2, entry) in f.entries[s].iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            for (k, c) in m.act_lin(&Lin::basis(j, fld), entry).terms() {
                let row = tgt_index[&(s2, *k)];
                let cur = mat[(row, col)].clone();
                mat[(row, col)] = &cur + c;
            }
        }
    }
    mat
}

/// Graded dimensions of the Hom complex between two shared twisted complexes, keyed by degree.
pub fn hom_homology(x: &TwistedComplex, y: &TwistedComplex) -> Result<BTreeMap<i64, usize>> {
    Ok(tw_hom(x, y)?.complex.homology())
}
