use std::sync::Arc;

use super::complex::{Cell, TwistedComplex};
use crate::dg::{cone, homology, homology_representatives, DgModule, Lin, ModuleMap};
use crate::error::{Error, Result};

/// What is known about the comparison map `realize(P) -> m` when resolution stops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    /// The mapping cone is acyclic, so `P` is quasi-isomorphic to `m`.
    pub acyclic: bool,
    /// `H^q(P) -> H^q(m)` is bijective for `q < iso_below` and surjective at `q = iso_below`.
    /// `None` when the fiber is acyclic.
    pub iso_below: Option<i64>,
    /// `(lowest, highest)` degree of the fiber's homology.
    pub fiber_window: Option<(i64, i64)>,
    /// Highest chain degree of the mapping cone.
    pub cone_top_degree: Option<i64>,
    pub cells: usize,
    pub budget_exhausted: bool,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: TwistedComplex,
    /// `realize(complex) -> m`
    pub map: ModuleMap,
    pub report: FiberReport,
}

/// Attaches cells covering the lowest surviving homology of the mapping cone until it is acyclic
/// or `budget` cells are used.
pub fn resolve(m: &Arc<DgModule>, budget: usize) -> Result<Resolution> {
    let alg = m.algebra().clone();
    alg.require_class_p()?;
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    let fld = alg.field();
    let mut cells: Vec<Cell> = Vec::new();
    let mut delta: Vec<Vec<Lin>> = Vec::new();
    // image of the generator e_i of each cell
    let mut gens: Vec<Lin> = Vec::new();
    loop {
        let p = TwistedComplex::from_parts(alg.clone(), cells.clone(), delta.clone());
        let real = p.realize();
        let mut images = vec![Lin::zero(); real.module.dim()];
        for (s, c) in cells.iter().enumerate() {
            for b in p.cell_basis(c.idem) {
                images[real.position(s, b).expect("cell basis")] = m.act_lin(&gens[s], &Lin::basis(b, fld));
            }
        }
        let phi = ModuleMap::from_images(real.module.clone(), m.clone(), 0, &images);
        let cn = cone(&phi)?;
        let h = homology(&cn.module);
        let report = |exhausted: bool| FiberReport {
            acyclic: h.is_zero(),
            iso_below: h.support().map(|s| s.0),
            fiber_window: h.support().map(|(lo, hi)| (lo + 1, hi + 1)),
            cone_top_degree: cn.module.max_degree(),
            cells: cells.len(),
            budget_exhausted: exhausted,
        };
        let Some((q, _)) = h.support() else {
            return Ok(Resolution { complex: p, map: phi, report: report(false) });
        };
        if cells.len() >= budget {
            return Ok(Resolution { complex: p, map: phi, report: report(true) });
        }
        let off = real.module.dim();
        let mut attach = Vec::new();
        for i in 0..alg.idempotent_count() {
            for rep in homology_representatives(&cn.module, q, i) {
                attach.push((i, rep));
            }
        }
        for (i, rep) in attach {
            if cells.len() >= budget {
                break;
            }
            // rep = (s p, z): the new cell g has D(g) = p and maps to -z
            let p_part = rep.map_indices(|k| (k < off).then_some(k));
            let z_part = rep.map_indices(|k| k.checked_sub(off));
            let n = cells.len();
            let comps = real.components(&p_part, n);
            for row in delta.iter_mut() {
                row.push(Lin::zero());
            }
            delta.push(vec![Lin::zero(); n + 1]);
            for (t, e) in comps.into_iter().enumerate() {
                delta[t][n] = e;
            }
            cells.push(Cell::new(i, -q));
            gens.push(z_part.neg());
        }
    }
}
