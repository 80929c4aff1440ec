use std::sync::Arc;

use super::weight_truncate;
use crate::dg::{homology, DgModule};
use crate::error::{Error, Result};
use crate::twisted::{hom_module, resolve, FiberReport};

/// How far a computed value of `dim Hom(m, Σ^n y)` can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verification {
    /// Zero by weight orthogonality, no resolution needed.
    APrioriZero,
    /// The comparison with the resolution is provably bijective in this degree.
    Exact,
    /// Computed from a truncated resolution; may differ from the true value.
    Unverified,
}

impl Verification {
    pub fn is_verified(self) -> bool {
        !matches!(self, Verification::Unverified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedHomRow {
    pub degree: i64,
    /// `dim H^n Hom(P, y)` for the computed resolution `P` of `m`.
    pub dim: usize,
    pub verification: Verification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedHomTable {
    pub rows: Vec<DerivedHomRow>,
    pub resolution: FiberReport,
    /// `Hom(m, Σ^n y) = 0` for every `n` above this value.
    pub vanishing_above: Option<i64>,
}

impl DerivedHomTable {
    /// Maximal runs of consecutive verified degrees.
    pub fn verified_ranges(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = Vec::new();
        for r in self.rows.iter().filter(|r| r.verification.is_verified()) {
            match out.last_mut() {
                Some(last) if last.1 + 1 == r.degree => last.1 = r.degree,
                _ => out.push((r.degree, r.degree)),
            }
        }
        out
    }

    pub fn row(&self, n: i64) -> Option<&DerivedHomRow> {
        self.rows.iter().find(|r| r.degree == n)
    }
}

/// `dim Hom_D(m, Σ^n y)` for `n` in `range`, computed from a budgeted cell resolution of `m`.
///
/// With `C` the cone of `P -> m`, the value is exact in degree `n` once `Hom(C, Σ^n y)` and
/// `Hom(C, Σ^{n+1} y)` vanish, or `Hom(C, Σ^n y)` vanishes and the computed value is zero.
pub fn derived_hom_windowed(
    m: &Arc<DgModule>,
    y: &Arc<DgModule>,
    range: (i64, i64),
    budget: usize,
) -> Result<DerivedHomTable> {
    let alg = m.algebra().clone();
    alg.require_class_p()?;
    if !Arc::ptr_eq(&alg, y.algebra()) && **y.algebra() != *alg {
        return Err(Error::AlgebraMismatch);
    }
    let (n0, n1) = range;
    if n0 > n1 {
        return Err(Error::EmptyRange);
    }
    let hy = homology(y);
    let hm = homology(m);
    let vanishing_above = match (hy.support(), hm.support()) {
        (Some((_, top_y)), Some((bot_m, _))) => Some(top_y - bot_m),
        _ => None,
    };
    let trivial = hy.is_zero() || hm.is_zero();

    let res = resolve(m, budget)?;
    let report = res.report.clone();
    // y ≃ σ_{≤top} y, whose chain degrees bound the Hom complex
    let y_tr = match hy.support() {
        Some((_, top)) => weight_truncate(y, top)?.sigma_le,
        None => y.clone(),
    };
    let fiber_zero = |j: i64| -> bool {
        if report.acyclic || y_tr.dim() == 0 {
            return true;
        }
        let q = report.iso_below.expect("non-acyclic fiber");
        let (bot, top) = (y_tr.min_degree().unwrap_or(0), y_tr.max_degree().unwrap_or(0));
        if j > top - q {
            return true;
        }
        match report.cone_top_degree {
            Some(t) if alg.max_degree() <= 1 => j < bot - t,
            _ => false,
        }
    };
    let hom = hom_module(&res.complex, &y_tr)?;
    let rows = (n0..=n1)
        .map(|n| {
            if trivial || vanishing_above.is_some_and(|v| n > v) {
                return DerivedHomRow { degree: n, dim: 0, verification: Verification::APrioriZero };
            }
            let dim = hom.homology_dim(n);
            let exact = fiber_zero(n) && (fiber_zero(n + 1) || dim == 0);
            let verification = if exact { Verification::Exact } else { Verification::Unverified };
            DerivedHomRow { degree: n, dim, verification }
        })
        .collect();
    Ok(DerivedHomTable { rows, resolution: report, vanishing_above })
}
