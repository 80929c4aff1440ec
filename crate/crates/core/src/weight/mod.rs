//! The canonical weight structure on finite-dimensional modules over class P algebras.

mod dhom;

use std::sync::Arc;

use crate::dg::{
    coordinate_quotient, coordinate_submodule, direct_sum, homology, homology_representatives, induced_rank,
    is_quasi_iso, DgAlgebra, DgModule, HomologyTable, Lin, ModuleBasisElem, ModuleMap,
};
use crate::error::{Error, Result};
use crate::scalars::complement_coordinates;

pub use dhom::{derived_hom_windowed, DerivedHomRow, DerivedHomTable, Verification};

/// The simple lift `e_i S_A`: a single basis element `e_i` in degree 0.
pub fn simple_module(a: &Arc<DgAlgebra>, i: usize) -> Result<DgModule> {
    a.require_class_p()?;
    let e = a.elem(a.idempotent(i));
    DgModule::new(a.clone(), vec![ModuleBasisElem { name: e.name.clone(), degree: 0, idem: i }], vec![], vec![])
}

/// `S_A = A / A^{≥1}`, formed as a strict quotient of the free module and certified to have
/// homology `k^r` in degree 0.
pub fn s_a(a: &Arc<DgAlgebra>) -> Result<(Arc<DgModule>, ModuleMap)> {
    a.require_class_p()?;
    let free = Arc::new(DgModule::regular(a));
    let positive: Vec<usize> = (0..free.dim()).filter(|&j| free.degree(j) >= 1).collect();
    let (s, proj) = coordinate_quotient(&free, &positive)?;
    let h = homology(&s);
    let r = a.idempotent_count();
    if h.support() != Some((0, 0)) || (0..r).any(|i| h.at(0, i) != 1) {
        return Err(Error::Certificate("S_A does not have homology k^r in degree 0".into()));
    }
    Ok((s, proj))
}

/// Position of a module relative to the weight level `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WMembership {
    /// Acyclic: in both halves.
    Both,
    /// `H^q = 0` for `q > p`.
    LeP,
    /// `H^q = 0` for `q ≤ p`.
    GtP,
    Neither,
}

pub fn w_membership(x: &DgModule, p: i64) -> Result<WMembership> {
    x.algebra().require_class_p()?;
    Ok(membership_of(&homology(x), p))
}

pub(crate) fn membership_of(h: &HomologyTable, p: i64) -> WMembership {
    match h.support() {
        None => WMembership::Both,
        Some((_, hi)) if hi <= p => WMembership::LeP,
        Some((lo, _)) if lo > p => WMembership::GtP,
        _ => WMembership::Neither,
    }
}

/// Exact checks attached to a truncation triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationCertificates {
    pub x_homology: HomologyTable,
    pub gt_homology: HomologyTable,
    pub le_homology: HomologyTable,
    /// `H(σ_{>p})` vanishes in degrees `≤ p`.
    pub gt_membership: bool,
    /// `H(σ_{≤p})` vanishes in degrees `> p`.
    pub le_membership: bool,
    /// The inclusion induces isomorphisms on `H^q` for `q > p`.
    pub inclusion_iso_above: bool,
    /// The projection induces isomorphisms on `H^q` for `q ≤ p`.
    pub projection_iso_below: bool,
    /// `σ_{>p} -> x -> σ_{≤p}` is a short exact sequence of modules.
    pub short_exact: bool,
}

impl TruncationCertificates {
    pub fn all_hold(&self) -> bool {
        self.gt_membership && self.le_membership && self.inclusion_iso_above && self.projection_iso_below && self.short_exact
    }
}

#[derive(Clone, Debug)]
pub struct TruncationResult {
    pub level: i64,
    pub sigma_gt: Arc<DgModule>,
    pub sigma_le: Arc<DgModule>,
    /// `σ_{>p} x -> x`
    pub inclusion: ModuleMap,
    /// `x -> σ_{≤p} x`
    pub projection: ModuleMap,
    /// Indices of the basis elements of `x` spanning `σ_{>p} x`.
    pub gt_basis: Vec<usize>,
    pub certificates: TruncationCertificates,
}

/// Basis elements spanning `σ_{>p} x = C ⊕ x^{≥p+1}`, where `C` consists of basis vectors
/// complementing the cocycles of `x^p e_i` for each idempotent.
pub fn truncation_basis(x: &DgModule, p: i64) -> Vec<usize> {
    let mut idx: Vec<usize> = Vec::new();
    for i in 0..x.algebra().idempotent_count() {
        let here = x.block(p, i);
        if here.is_empty() {
            continue;
        }
        let cocycles = x.diff_matrix(&here, &x.block(p + 1, i)).kernel_basis();
        idx.extend(complement_coordinates(&cocycles).into_iter().map(|k| here[k]));
    }
    idx.extend((0..x.dim()).filter(|&j| x.degree(j) > p));
    idx.sort_unstable();
    idx
}

/// The truncation triangle `σ_{>p} x -> x -> σ_{≤p} x`, with every certificate checked.
pub fn weight_truncate(x: &Arc<DgModule>, p: i64) -> Result<TruncationResult> {
    x.algebra().require_class_p()?;
    let gt_basis = truncation_basis(x, p);
    let (sigma_gt, inclusion) = coordinate_submodule(x, &gt_basis)?;
    let (sigma_le, projection) = coordinate_quotient(x, &gt_basis)?;
    let certificates = certify(x, p, &sigma_gt, &sigma_le, &inclusion, &projection);
    if !certificates.all_hold() {
        return Err(Error::Certificate(format!("weight truncation at level {p}: {certificates:?}")));
    }
    Ok(TruncationResult { level: p, sigma_gt, sigma_le, inclusion, projection, gt_basis, certificates })
}

fn certify(
    x: &DgModule,
    p: i64,
    gt: &DgModule,
    le: &DgModule,
    inclusion: &ModuleMap,
    projection: &ModuleMap,
) -> TruncationCertificates {
    let hx = homology(x);
    let hg = homology(gt);
    let hl = homology(le);
    let gt_membership = hg.rows().keys().all(|&q| q > p);
    let le_membership = hl.rows().keys().all(|&q| q <= p);
    let mut degrees: Vec<i64> = hx.rows().keys().chain(hg.rows().keys()).chain(hl.rows().keys()).copied().collect();
    degrees.sort_unstable();
    degrees.dedup();
    let inclusion_iso_above = degrees
        .iter()
        .filter(|&&q| q > p)
        .all(|&q| hg.total(q) == hx.total(q) && induced_rank(inclusion, q) == hx.total(q));
    let projection_iso_below = degrees
        .iter()
        .filter(|&&q| q <= p)
        .all(|&q| hl.total(q) == hx.total(q) && induced_rank(projection, q) == hx.total(q));
    let short_exact = inclusion.is_chain_map()
        && projection.is_chain_map()
        && projection.compose(inclusion).map(|c| c.matrix().is_zero()).unwrap_or(false)
        && inclusion.matrix().rank() == gt.dim()
        && projection.matrix().rank() == le.dim()
        && gt.dim() + le.dim() == x.dim();
    TruncationCertificates {
        x_homology: hx,
        gt_homology: hg,
        le_homology: hl,
        gt_membership,
        le_membership,
        inclusion_iso_above,
        projection_iso_below,
        short_exact,
    }
}

/// One layer `W_{q-1} / W_q` of the weight filtration; its homology is `H^q(x)`, concentrated in degree `q`.
#[derive(Clone, Debug)]
pub struct FiltrationLayer {
    /// The homology degree carried by the layer.
    pub degree: i64,
    /// `dim H^q(x) e_i` for each idempotent.
    pub multiplicities: Vec<usize>,
    pub module: Arc<DgModule>,
    pub homology: HomologyTable,
    /// The layer's homology sits in degree `degree` only.
    pub concentrated: bool,
}

impl FiltrationLayer {
    pub fn is_trivial(&self) -> bool {
        self.homology.is_zero()
    }
}

/// Nested submodules `0 = W_top ⊆ … ⊆ W_{bot-1} = x`, `W_q = σ_{>q} x`.
#[derive(Clone, Debug)]
pub struct WeightFiltration {
    /// `(q, basis of W_q as indices into x)`, decreasing in size.
    pub steps: Vec<(i64, Vec<usize>)>,
    pub layers: Vec<FiltrationLayer>,
}

impl WeightFiltration {
    pub fn nontrivial_layers(&self) -> impl Iterator<Item = &FiltrationLayer> {
        self.layers.iter().filter(|l| !l.is_trivial())
    }

    /// Sum of the layers' homology tables.
    pub fn total_homology(&self, idempotents: usize) -> HomologyTable {
        self.layers.iter().fold(HomologyTable::new(idempotents), |acc, l| acc.sum(&l.homology))
    }

    pub fn is_nested(&self) -> bool {
        self.steps.windows(2).all(|w| w[1].1.iter().all(|j| w[0].1.contains(j)))
    }
}

pub fn weight_filtration(x: &Arc<DgModule>) -> Result<WeightFiltration> {
    x.algebra().require_class_p()?;
    let Some((lo, hi)) = x.min_degree().zip(x.max_degree()) else {
        return Ok(WeightFiltration { steps: vec![], layers: vec![] });
    };
    let steps: Vec<(i64, Vec<usize>)> = (lo - 1..=hi).map(|q| (q, truncation_basis(x, q))).collect();
    let mut layers = Vec::new();
    for w in steps.windows(2) {
        let (q0, big) = (&w[0].0, &w[0].1);
        let small = &w[1].1;
        let (wq, _) = coordinate_submodule(x, big)?;
        let inner: Vec<usize> = small
            .iter()
            .map(|j| big.iter().position(|b| b == j).ok_or_else(|| Error::Certificate("filtration is not nested".into())))
            .collect::<Result<_>>()?;
        let (layer, _) = coordinate_quotient(&wq, &inner)?;
        let h = homology(&layer);
        let q = q0 + 1;
        let r = x.algebra().idempotent_count();
        layers.push(FiltrationLayer {
            degree: q,
            multiplicities: (0..r).map(|i| h.at(q, i)).collect(),
            concentrated: h.rows().keys().all(|&d| d == q),
            homology: h,
            module: layer,
        });
    }
    Ok(WeightFiltration { steps, layers })
}

/// `x -> σ_{≤0} x <- ⊕ (e_i S_A)^{m_i}`, both quasi-isomorphisms.
#[derive(Clone, Debug)]
pub struct SimpleWitness {
    pub multiplicities: Vec<usize>,
    pub truncation: ModuleMap,
    pub semisimple: Arc<DgModule>,
    /// `⊕ (e_i S_A)^{m_i} -> σ_{≤0} x`
    pub comparison: ModuleMap,
    pub truncation_is_quasi_iso: bool,
    pub comparison_is_quasi_iso: bool,
}

pub fn simple_witness(x: &Arc<DgModule>) -> Result<SimpleWitness> {
    let alg = x.algebra().clone();
    alg.require_class_p()?;
    let h = homology(x);
    if h.rows().keys().any(|&q| q != 0) {
        return Err(Error::NotConcentrated);
    }
    let r = alg.idempotent_count();
    let multiplicities: Vec<usize> = (0..r).map(|i| h.at(0, i)).collect();
    let t = weight_truncate(x, 0)?;
    let le = t.sigma_le.clone();
    let mut parts = Vec::new();
    let mut images = Vec::new();
    for (i, &m) in multiplicities.iter().enumerate() {
        let reps = homology_representatives(&le, 0, i);
        debug_assert_eq!(reps.len(), m);
        for rep in reps {
            parts.push(simple_module(&alg, i)?);
            images.push(rep);
        }
    }
    let semisimple = Arc::new(if parts.is_empty() {
        DgModule::zero(alg.clone())
    } else {
        direct_sum(&parts.iter().collect::<Vec<_>>())?
    });
    let comparison = ModuleMap::new(semisimple.clone(), le.clone(), 0, images_matrix(&le, &images))?;
    let truncation_is_quasi_iso = is_quasi_iso(&t.projection);
    let comparison_is_quasi_iso = is_quasi_iso(&comparison);
    if !truncation_is_quasi_iso || !comparison_is_quasi_iso {
        return Err(Error::Certificate("simple witness maps are not quasi-isomorphisms".into()));
    }
    Ok(SimpleWitness {
        multiplicities,
        truncation: t.projection,
        semisimple,
        comparison,
        truncation_is_quasi_iso,
        comparison_is_quasi_iso,
    })
}

fn images_matrix(target: &DgModule, images: &[Lin]) -> crate::scalars::Matrix {
    let f = target.field();
    let mut m = crate::scalars::Matrix::zeros(f, target.dim(), images.len());
    for (j, v) in images.iter().enumerate() {
        for (i, c) in v.terms() {
            m[(*i, j)] = c.clone();
        }
    }
    m
}

#[cfg(test)]
mod tests;
