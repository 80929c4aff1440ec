use std::sync::Arc;

use super::lin::Lin;
use super::module::DgModule;
use crate::error::{Error, Result};
use crate::scalars::Matrix;

/// A homogeneous A-linear map between dg modules.
///
/// `matrix` has one row per target basis element and one column per source
/// basis element. Right-module maps satisfy `f(m a) = f(m) a` with no sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: Arc<DgModule>,
    target: Arc<DgModule>,
    degree: i64,
    matrix: Matrix,
}

impl ModuleMap {
    /// Checks shape, degree, idempotents and A-linearity.
    pub fn new(source: Arc<DgModule>, target: Arc<DgModule>, degree: i64, matrix: Matrix) -> Result<Self> {
        if !Arc::ptr_eq(source.algebra(), target.algebra()) && source.algebra() != target.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{} but modules have dimensions {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        let map = ModuleMap { source, target, degree, matrix };
        let problems = map.check();
        if problems.is_empty() {
            Ok(map)
        } else {
            Err(Error::InvalidMap(problems.join("; ")))
        }
    }

    pub(crate) fn from_parts(source: Arc<DgModule>, target: Arc<DgModule>, degree: i64, matrix: Matrix) -> Self {
        let map = ModuleMap { source, target, degree, matrix };
        debug_assert!(map.check().is_empty(), "engine produced an invalid map: {:?}", map.check());
        map
    }

    /// Builds a map from the images of each source basis element.
    pub(crate) fn from_images(source: Arc<DgModule>, target: Arc<DgModule>, degree: i64, images: &[Lin]) -> Self {
        let f = source.field();
        let mut m = Matrix::zeros(f, target.dim(), source.dim());
        for (j, img) in images.iter().enumerate() {
            for (i, c) in img.terms() {
                m[(*i, j)] = c.clone();
            }
        }
        Self::from_parts(source, target, degree, m)
    }

    pub fn identity(m: &Arc<DgModule>) -> Self {
        Self::from_parts(m.clone(), m.clone(), 0, Matrix::identity(m.field(), m.dim()))
    }

    pub fn zero(source: &Arc<DgModule>, target: &Arc<DgModule>, degree: i64) -> Self {
        let f = source.field();
        Self::from_parts(source.clone(), target.clone(), degree, Matrix::zeros(f, target.dim(), source.dim()))
    }

    pub fn source(&self) -> &Arc<DgModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgModule> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &Lin) -> Lin {
        let mut terms = Vec::new();
        for (j, c) in x.terms() {
            for i in 0..self.matrix.rows() {
                let a = &self.matrix[(i, *j)];
                if !a.is_zero() {
                    terms.push((i, a * c));
                }
            }
        }
        Lin::from_terms(terms)
    }

    pub fn image_of(&self, j: usize) -> Lin {
        Lin::from_dense(&self.matrix.column(j))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if other.target.as_ref() != self.source.as_ref() {
            return Err(Error::InvalidMap("composition of maps with mismatched modules".into()));
        }
        Ok(Self::from_parts(
            other.source.clone(),
            self.target.clone(),
            self.degree + other.degree,
            self.matrix.mul(&other.matrix)?,
        ))
    }

    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.degree != other.degree {
            return Err(Error::InvalidMap("difference of maps of different degrees".into()));
        }
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.degree, self.matrix.sub(&other.matrix)?))
    }

    /// `d∘f - (-1)^|f| f∘d` as a matrix; zero exactly for chain maps.
    pub fn boundary_matrix(&self) -> Matrix {
        let f = self.source.field();
        let dt = diff_matrix_full(&self.target);
        let ds = diff_matrix_full(&self.source);
        let lhs = dt.mul(&self.matrix).expect("shapes");
        let rhs = self.matrix.mul(&ds).expect("shapes").scale(&f.one().signed(self.degree));
        lhs.sub(&rhs).expect("shapes")
    }

    pub fn is_chain_map(&self) -> bool {
        self.boundary_matrix().is_zero()
    }

    fn check(&self) -> Vec<String> {
        let mut v = Vec::new();
        let (s, t) = (&self.source, &self.target);
        let alg = s.algebra();
        let f = alg.field();
        for j in 0..s.dim() {
            for i in 0..t.dim() {
                if self.matrix[(i, j)].is_zero() {
                    continue;
                }
                if t.degree(i) != s.degree(j) + self.degree || t.idem(i) != s.idem(j) {
                    v.push(format!("entry ({i},{j}) breaks degree or idempotent homogeneity"));
                }
            }
        }
        if !v.is_empty() {
            return v;
        }
        for j in 0..s.dim() {
            let fj = self.image_of(j);
            for a in 0..alg.dim() {
                if alg.is_idempotent(a) {
                    continue;
                }
                let lhs = self.apply(s.act(j, a));
                let rhs = t.act_lin(&fj, &Lin::basis(a, f));
                if lhs != rhs {
                    v.push(format!("not A-linear on ({}, {})", s.basis()[j].name, alg.elem(a).name));
                }
            }
        }
        v
    }
}

/// The full differential of `m` as a square matrix.
pub fn diff_matrix_full(m: &DgModule) -> Matrix {
    let all: Vec<usize> = (0..m.dim()).collect();
    m.diff_matrix(&all, &all)
}
