//! The bounded t-structure on perfect objects, read off minimal twisted complexes.
//!
//! Conventions: `x^{t≤n}` is spanned by the cells of shift `≥ -n`, so the cells `Σ^m e_i A`
//! with `m ≥ 0` generate the aisle `t≤0`, and `H^n_t(x) = h0_t(Σ^n x)` collects the cells of
//! shift `-n`.

mod simple_minded;

use std::collections::BTreeMap;

use crate::dg::{DgModule, HomologyTable, Lin};
use crate::error::{Error, Result};
use crate::twisted::{
    hom_module, minimalize, minimalize_with, pullback_matrix, tw_cone, tw_hom, Minimalization, ModuleHom,
    PivotOrder, TwMap, TwistedComplex,
};
use crate::weight::{s_a, simple_module};

pub use simple_minded::{check_simple_minded, Generation, SearchStep, SimpleMindedReport};

/// Checks that hold for every truncation triangle `x_le -> x -> x_gt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TTruncationCertificates {
    pub minimalization_verified: bool,
    /// No δ entry leaves the sub complex.
    pub sub_closed: bool,
    pub inclusion_is_cycle: bool,
    pub projection_is_cycle: bool,
    /// `projection ∘ inclusion = 0` and the cells are partitioned.
    pub strict_triangle: bool,
    pub le_in_aisle: bool,
    pub gt_in_coaisle: bool,
    /// `H⁰ Hom(x_le, x_gt) = 0`.
    pub orthogonal: bool,
}

impl TTruncationCertificates {
    pub fn all_hold(&self) -> bool {
        self.minimalization_verified
            && self.sub_closed
            && self.inclusion_is_cycle
            && self.projection_is_cycle
            && self.strict_triangle
            && self.le_in_aisle
            && self.gt_in_coaisle
            && self.orthogonal
    }
}

#[derive(Clone, Debug)]
pub struct TTruncation {
    pub threshold: i64,
    pub minimalization: Minimalization,
    /// Cells of the minimal form with shift `≥ -threshold`.
    pub x_le: TwistedComplex,
    pub x_gt: TwistedComplex,
    pub le_cells: Vec<usize>,
    pub gt_cells: Vec<usize>,
    /// `x_le -> minimal`
    pub inclusion: TwMap,
    /// `minimal -> x_gt`
    pub projection: TwMap,
    pub certificates: TTruncationCertificates,
}

fn selection(x: &TwistedComplex, picked: &[usize], into: bool) -> TwMap {
    let alg = x.algebra();
    let f = alg.field();
    let (rows, cols) = if into { (x.len(), picked.len()) } else { (picked.len(), x.len()) };
    let mut entries = vec![vec![Lin::zero(); cols]; rows];
    for (k, &c) in picked.iter().enumerate() {
        let e = Lin::basis(alg.idempotent(x.cells()[c].idem), f);
        if into {
            entries[c][k] = e;
        } else {
            entries[k][c] = e;
        }
    }
    TwMap::new(0, cols, entries)
}

/// Splits the minimal form of `x` into `x^{t≤n} -> x -> x^{t≥n+1}`.
pub fn t_truncate(x: &TwistedComplex, n: i64) -> Result<TTruncation> {
    x.algebra().require_class_p()?;
    let min = minimalize(x);
    let y = &min.minimal;
    let (le_cells, gt_cells): (Vec<usize>, Vec<usize>) = (0..y.len()).partition(|&c| y.cells()[c].shift >= -n);
    let x_le = y.restrict(&le_cells);
    let x_gt = y.restrict(&gt_cells);
    let inclusion = selection(y, &le_cells, true);
    let projection = selection(y, &gt_cells, false);
    let alg = x.algebra();
    let amp_le = amplitude_of(&x_le);
    let amp_gt = amplitude_of(&x_gt);
    let certificates = TTruncationCertificates {
        minimalization_verified: min.verify(x).is_ok(),
        sub_closed: y.is_closed(&le_cells),
        inclusion_is_cycle: inclusion.check(&x_le, y).is_ok() && inclusion.is_cycle(&x_le, y),
        projection_is_cycle: projection.check(y, &x_gt).is_ok() && projection.is_cycle(y, &x_gt),
        strict_triangle: projection.compose(&inclusion, alg).is_zero() && le_cells.len() + gt_cells.len() == y.len(),
        le_in_aisle: amp_le.is_none_or(|(_, hi)| hi <= n),
        gt_in_coaisle: amp_gt.is_none_or(|(lo, _)| lo > n),
        orthogonal: tw_hom(&x_le, &x_gt)?.homology_dim(0) == 0,
    };
    if !certificates.all_hold() {
        return Err(Error::Certificate(format!("t-truncation at {n}: {certificates:?}")));
    }
    Ok(TTruncation { threshold: n, minimalization: min, x_le, x_gt, le_cells, gt_cells, inclusion, projection, certificates })
}

/// `(lo, hi)` with `H^k_t(x) ≠ 0` only for `lo ≤ k ≤ hi`, for an already minimal complex.
fn amplitude_of(minimal: &TwistedComplex) -> Option<(i64, i64)> {
    let lo = minimal.cells().iter().map(|c| -c.shift).min()?;
    let hi = minimal.cells().iter().map(|c| -c.shift).max()?;
    Some((lo, hi))
}

/// The range of degrees in which `x` has nonzero t-homology; `None` for the zero object.
pub fn t_amplitude(x: &TwistedComplex) -> Result<Option<(i64, i64)>> {
    x.algebra().require_class_p()?;
    Ok(amplitude_of(&minimalize(x).minimal))
}

/// Position of an object relative to the standard aisle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TMembership {
    Zero,
    Heart,
    /// In `t≤0` but not in the heart.
    LeZero,
    /// In `t≥1`.
    GeOne,
    /// In `t≥0`, neither in the heart nor in `t≥1`.
    GeZero,
    Neither,
}

pub fn t_membership(x: &TwistedComplex) -> Result<TMembership> {
    Ok(match t_amplitude(x)? {
        None => TMembership::Zero,
        Some((0, 0)) => TMembership::Heart,
        Some((_, hi)) if hi <= 0 => TMembership::LeZero,
        Some((lo, _)) if lo >= 1 => TMembership::GeOne,
        Some((lo, _)) if lo >= 0 => TMembership::GeZero,
        _ => TMembership::Neither,
    })
}

/// Boundedness: `x` lies in `t≤hi ∩ t≥lo` for its amplitude, certified by truncating at both ends.
pub fn is_bounded(x: &TwistedComplex) -> Result<bool> {
    let Some((lo, hi)) = t_amplitude(x)? else { return Ok(true) };
    let top = t_truncate(x, hi)?;
    let bottom = t_truncate(x, lo - 1)?;
    Ok(top.x_gt.is_empty() && bottom.x_le.is_empty())
}

/// An object of the heart, presented minimally with every cell at shift 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeartObject {
    pub complex: TwistedComplex,
    /// Composition factor multiplicity of each simple `e_i A`.
    pub factors: Vec<usize>,
    pub length: usize,
}

impl HeartObject {
    fn of(complex: TwistedComplex) -> Self {
        let mut factors = vec![0; complex.algebra().idempotent_count()];
        for c in complex.cells() {
            factors[c.idem] += 1;
        }
        let length = complex.len();
        HeartObject { complex, factors, length }
    }
}

/// `H⁰_t(x) = (x^{t≤0})^{t≥0}`: the shift-0 cells of the minimal form.
pub fn h0_t(x: &TwistedComplex) -> Result<HeartObject> {
    x.algebra().require_class_p()?;
    let y = minimalize(x).minimal;
    let keep: Vec<usize> = (0..y.len()).filter(|&c| y.cells()[c].shift == 0).collect();
    Ok(HeartObject::of(y.restrict(&keep)))
}

/// `H^n_t(x) = h0_t(Σ^n x)` for every `n` where it is nonzero.
pub fn t_homology(x: &TwistedComplex) -> Result<BTreeMap<i64, HeartObject>> {
    let Some((lo, hi)) = t_amplitude(x)? else { return Ok(BTreeMap::new()) };
    let mut out = BTreeMap::new();
    for n in lo..=hi {
        let h = h0_t(&x.shift(n))?;
        if h.length > 0 {
            out.insert(n, h);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanHolder {
    pub factors: Vec<usize>,
    pub length: usize,
    /// Both elimination orders produced the same factors.
    pub orders_agree: bool,
}

/// Composition factors of a heart object, computed from two independent minimalizations.
pub fn jordan_holder(x: &TwistedComplex) -> Result<JordanHolder> {
    x.algebra().require_class_p()?;
    let first = HeartObject::of(minimalize_with(x, PivotOrder::First).minimal);
    let last = HeartObject::of(minimalize_with(x, PivotOrder::Last).minimal);
    if first.complex.cells().iter().any(|c| c.shift != 0) {
        return Err(Error::NotInHeart);
    }
    let orders_agree = first.factors == last.factors && last.complex.cells().iter().all(|c| c.shift == 0);
    if !orders_agree {
        return Err(Error::Certificate("composition factors depend on the elimination order".into()));
    }
    Ok(JordanHolder { factors: first.factors, length: first.length, orders_agree })
}

/// `F(x) = RHom(x, S_A)` as a table `(degree, idempotent) -> dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulFiber {
    pub table: HomologyTable,
    /// The table equals the cell count `(i, n)` of the minimal form.
    pub matches_minimal_cells: bool,
    /// `x ∈ t≤0` exactly when `F(x)` lives in degrees `≥ 0`.
    pub aisle_consistent: bool,
}

pub fn koszul_fiber_functor(x: &TwistedComplex) -> Result<KoszulFiber> {
    let alg = x.algebra();
    alg.require_class_p()?;
    let r = alg.idempotent_count();
    let mut table = HomologyTable::new(r);
    for i in 0..r {
        let s = simple_module(alg, i)?;
        for (p, d) in hom_module(x, &s)?.complex.homology() {
            table.set(p, i, d);
        }
    }
    let minimal = minimalize(x).minimal;
    let mut counts = HomologyTable::new(r);
    for c in minimal.cells() {
        let cur = counts.at(c.shift, c.idem);
        counts.set(c.shift, c.idem, cur + 1);
    }
    let in_aisle = amplitude_of(&minimal).is_none_or(|(_, hi)| hi <= 0);
    let f_nonneg = table.support().is_none_or(|(lo, _)| lo >= 0);
    Ok(KoszulFiber { matches_minimal_cells: counts == table, aisle_consistent: in_aisle == f_nonneg, table })
}

/// One degree of the long exact sequence `H^n_t(x) -> H^n_t(y) -> H^n_t(c) -> H^{n+1}_t(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesRow {
    pub degree: i64,
    pub x: usize,
    pub y: usize,
    pub cone: usize,
    /// Ranks of `H^n_t(f)`, `H^n_t(y -> c)` and `H^n_t(c -> Σx)`.
    pub rank_f: usize,
    pub rank_g: usize,
    pub rank_h: usize,
}

#[derive(Clone, Debug)]
pub struct LesReport {
    pub cone: TwistedComplex,
    pub rows: Vec<LesRow>,
    /// Exact at every vertex of every degree.
    pub exact: bool,
    /// Lengths from `F` agree with the cell counts of the minimal forms.
    pub lengths_match_cells: bool,
}

struct FData {
    hom: ModuleHom,
    complex: TwistedComplex,
}

fn f_data(x: &TwistedComplex, s: &DgModule) -> Result<FData> {
    Ok(FData { hom: hom_module(x, s)?, complex: x.clone() })
}

/// Rank of `F^p(g): F^p(target) -> F^p(source)` on homology, for a degree-0 cycle `g`.
fn pullback_rank(g: &TwMap, source: &FData, target: &FData, s: &DgModule, p: i64) -> usize {
    let pull = pullback_matrix(g, &target.hom, &source.hom, s, p);
    let cycles = target.hom.complex.differential(p).kernel_basis();
    if cycles.cols() == 0 || pull.rows() == 0 {
        return 0;
    }
    let image = pull.mul(&cycles).expect("shapes");
    let bnd = source.hom.complex.differential(p - 1);
    bnd.hstack(&image).expect("rows").rank() - bnd.rank()
}

fn minimal_lengths(x: &TwistedComplex) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for c in minimalize(x).minimal.cells() {
        *out.entry(-c.shift).or_insert(0) += 1;
    }
    out
}

/// The t-homology long exact sequence of the cone triangle of `f: x -> y`, checked by rank
/// bookkeeping through the exact functor `F = Hom(-, S_A)`, which detects lengths on the heart.
pub fn les_check(x: &TwistedComplex, y: &TwistedComplex, f: &TwMap) -> Result<LesReport> {
    let alg = x.algebra().clone();
    alg.require_class_p()?;
    let c = tw_cone(x, y, f)?;
    let sx = x.shift(1);
    let (n, m) = (x.len(), y.len());
    let g = {
        let picked: Vec<usize> = (n..n + m).collect();
        selection(&c, &picked, true)
    };
    let h = {
        let picked: Vec<usize> = (0..n).collect();
        selection(&c, &picked, false)
    };
    debug_assert!(g.is_cycle(y, &c) && h.is_cycle(&c, &sx));
    let (s, _) = s_a(&alg)?;
    let fx = f_data(x, &s)?;
    let fy = f_data(y, &s)?;
    let fc = f_data(&c, &s)?;
    let fsx = f_data(&sx, &s)?;
    let len = |d: &FData, k: i64| d.hom.homology_dim(-k);
    let support = |d: &FData| d.complex.cells().iter().map(|c| -c.shift).collect::<Vec<_>>();
    let mut degrees: Vec<i64> = [support(&fx), support(&fy), support(&fc)].concat();
    degrees.extend(support(&fx).iter().map(|k| k - 1));
    degrees.sort_unstable();
    degrees.dedup();
    let mut rows = Vec::new();
    for &k in &degrees {
        rows.push(LesRow {
            degree: k,
            x: len(&fx, k),
            y: len(&fy, k),
            cone: len(&fc, k),
            rank_f: pullback_rank(f, &fx, &fy, &s, -k),
            rank_g: pullback_rank(&g, &fy, &fc, &s, -k),
            rank_h: pullback_rank(&h, &fc, &fsx, &s, -k),
        });
    }
    let by_degree: BTreeMap<i64, &LesRow> = rows.iter().map(|r| (r.degree, r)).collect();
    let row_at = |k: i64| by_degree.get(&k).copied();
    let exact = rows.iter().all(|r| {
        let prev_h = row_at(r.degree - 1).map_or(0, |p| p.rank_h);
        r.rank_f + r.rank_g == r.y && r.rank_g + r.rank_h == r.cone && prev_h + r.rank_f == r.x
    });
    let lengths_of = |rows: &[LesRow], pick: fn(&LesRow) -> usize| -> BTreeMap<i64, usize> {
        rows.iter().filter(|r| pick(r) > 0).map(|r| (r.degree, pick(r))).collect()
    };
    let lengths_match_cells = lengths_of(&rows, |r| r.x) == minimal_lengths(x)
        && lengths_of(&rows, |r| r.y) == minimal_lengths(y)
        && lengths_of(&rows, |r| r.cone) == minimal_lengths(&c);
    Ok(LesReport { cone: c, rows, exact, lengths_match_cells })
}

/// `H⁰ Hom(x, y)` for objects `x ∈ t≤0`, `y ∈ t≥1`, which the axioms force to vanish.
pub fn orthogonality_defect(x: &TwistedComplex, y: &TwistedComplex) -> Result<usize> {
    Ok(tw_hom(x, y)?.homology_dim(0))
}
