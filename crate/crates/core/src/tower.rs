//! Finite stages of the aisle-generation tower `X_0 -> X_1 -> ...` over a module `m`, built from
//! the compact generators `e_i A`.

use std::sync::Arc;

use crate::dg::{cone, homology, homology_representatives, is_quasi_iso, DgModule, HomologyTable, Lin, ModuleMap};
use crate::error::{Error, Result};
use crate::scalars::Matrix;
use crate::twisted::{Cell, TwistedComplex};

/// Whether `Hom(Σ^n e_i A, X) -> Hom(Σ^n e_i A, m)` is onto at one stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityCheck {
    pub idem: usize,
    pub n: i64,
    pub rank: usize,
    pub target_dim: usize,
}

impl SurjectivityCheck {
    pub fn holds(&self) -> bool {
        self.rank == self.target_dim
    }
}

#[derive(Clone, Debug)]
pub struct TowerStage {
    pub index: usize,
    /// `X_i`; the cells of `X_{i-1}` come first, in the same order.
    pub complex: TwistedComplex,
    /// Image in `m` of the generator of each cell.
    pub generators: Vec<Lin>,
    /// `π_i: realize(X_i) -> m`
    pub map: Arc<ModuleMap>,
    /// `Y_i = cone(π_i)`
    pub cone: Arc<DgModule>,
    pub cone_homology: HomologyTable,
    pub surjectivity: Vec<SurjectivityCheck>,
}

impl TowerStage {
    pub fn surjective(&self) -> bool {
        self.surjectivity.iter().all(SurjectivityCheck::holds)
    }

    /// Nothing is left to cover: `H^q(Y_i) = 0` for `q ≤ 0`, so every later stage equals this one.
    pub fn is_stable(&self) -> bool {
        self.cone_homology.rows().range(..=0).next().is_none()
    }
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub module: Arc<DgModule>,
    pub stages: Vec<TowerStage>,
    /// First stable stage; the tower stops there.
    pub stabilized_at: Option<usize>,
    /// At the stable stage: `π` is bijective on `H^{≤0}`, so `Hom(Σ^n e_i A, Y) = 0` for all
    /// `n ≥ 0` and `X -> m -> Y` is the truncation triangle of the aisle generated by the `e_i A`.
    pub truncation_iso: Option<bool>,
    /// At the stable stage: `π` is a quasi-isomorphism, so `m` lies in the aisle.
    pub quasi_iso: Option<bool>,
}

/// Rank of `H^p(source) e_i -> H^p(target) e_i` for a degree-0 chain map.
fn block_induced_rank(f: &ModuleMap, p: i64, i: usize) -> usize {
    let (m, n) = (f.source(), f.target());
    let src = m.block(p, i);
    let tgt = n.block(p, i);
    if src.is_empty() || tgt.is_empty() {
        return 0;
    }
    let cycles = m.diff_matrix(&src, &m.block(p + 1, i)).kernel_basis();
    let fz = f.matrix().select_rows(&tgt).select_cols(&src).mul(&cycles).expect("shapes");
    let bnd = n.diff_matrix(&n.block(p - 1, i), &tgt);
    bnd.hstack(&fz).expect("rows").rank() - bnd.rank()
}

fn lowest_degree(ms: &[&DgModule]) -> i64 {
    ms.iter().filter_map(|m| m.min_degree()).min().unwrap_or(0).min(0)
}

fn comparison(x: &TwistedComplex, gens: &[Lin], m: &Arc<DgModule>) -> (crate::twisted::Realization, ModuleMap) {
    let f = m.field();
    let real = x.realize();
    let mut images = vec![Lin::zero(); real.module.dim()];
    for (s, c) in x.cells().iter().enumerate() {
        for b in x.cell_basis(c.idem) {
            images[real.position(s, b).expect("cell basis")] = m.act_lin(&gens[s], &Lin::basis(b, f));
        }
    }
    let phi = ModuleMap::from_images(real.module.clone(), m.clone(), 0, &images);
    (real, phi)
}

/// Builds `stages` stages (fewer if the tower stabilizes). Stage `i + 1` attaches one cell
/// `Σ^{-q} e_j A` for every basis class of `H^q(Y_i) e_j` with `q ≤ 0`.
pub fn aisle_tower(m: &Arc<DgModule>, stages: usize) -> Result<Tower> {
    let alg = m.algebra().clone();
    alg.require_class_p()?;
    if stages == 0 {
        return Err(Error::NoStages);
    }
    let r = alg.idempotent_count();
    let hm = homology(m);
    let mut cells: Vec<Cell> = Vec::new();
    let mut delta: Vec<Vec<Lin>> = Vec::new();
    let mut gens: Vec<Lin> = Vec::new();
    // the cone of 0 -> m is m itself
    let mut prev: (crate::twisted::Realization, Arc<DgModule>) =
        (TwistedComplex::empty(alg.clone()).realize(), m.clone());
    let mut out = Vec::new();
    let mut stabilized_at = None;
    let mut quasi_iso = None;
    let mut truncation_iso = None;
    for index in 0..stages {
        let (real, y) = &prev;
        let off = real.module.dim();
        let hy = homology(y);
        let mut attach = Vec::new();
        for (&q, _) in hy.rows().range(..=0) {
            for i in 0..r {
                for rep in homology_representatives(y, q, i) {
                    attach.push((i, q, rep));
                }
            }
        }
        for (i, q, rep) in attach {
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
        let x = TwistedComplex::new(alg.clone(), cells.clone(), x_entries(&delta))?;
        let (real, phi) = comparison(&x, &gens, m);
        let cn = cone(&phi)?;
        let lo = lowest_degree(&[m, &cn.module]);
        let mut surjectivity = Vec::new();
        for n in 0..=-lo {
            for i in 0..r {
                surjectivity.push(SurjectivityCheck {
                    idem: i,
                    n,
                    rank: block_induced_rank(&phi, -n, i),
                    target_dim: hm.at(-n, i),
                });
            }
        }
        let cone_homology = homology(&cn.module);
        let stage = TowerStage {
            index,
            complex: x,
            generators: gens.clone(),
            map: Arc::new(phi),
            cone: cn.module.clone(),
            cone_homology,
            surjectivity,
        };
        if !stage.surjective() {
            return Err(Error::Certificate(format!("stage {index} is not surjective on H^{{≤0}}")));
        }
        let stable = stage.is_stable();
        if stable {
            let hx = homology(stage.map.source());
            let iso_low = hx.rows().keys().chain(hm.rows().keys()).filter(|&&q| q <= 0).all(|&q| {
                (0..r).all(|i| hx.at(q, i) == hm.at(q, i) && block_induced_rank(&stage.map, q, i) == hm.at(q, i))
            });
            truncation_iso = Some(iso_low);
            quasi_iso = Some(is_quasi_iso(&stage.map));
        }
        prev = (real, cn.module.clone());
        out.push(stage);
        if stable {
            stabilized_at = Some(index);
            break;
        }
    }
    Ok(Tower { module: m.clone(), stages: out, stabilized_at, truncation_iso, quasi_iso })
}

fn x_entries(delta: &[Vec<Lin>]) -> Vec<(usize, usize, Lin)> {
    let mut out = Vec::new();
    for (t, row) in delta.iter().enumerate() {
        for (s, v) in row.iter().enumerate() {
            if !v.is_zero() {
                out.push((s, t, v.clone()));
            }
        }
    }
    out
}

/// One entry of [`tower_vanishing_check`]: the rank of `H^{-n}(Y_i) e_j -> H^{-n}(Y_{i+1}) e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionCheck {
    pub stage: usize,
    pub idem: usize,
    pub n: i64,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct VanishingReport {
    pub checks: Vec<TransitionCheck>,
    pub all_zero: bool,
}

/// The map `Y_i -> Y_{i+1}` induced by `X_i ⊆ X_{i+1}`: the suspended inclusion on the first
/// summand and the identity of `m`.
pub fn transition_map(from: &TowerStage, to: &TowerStage) -> Result<ModuleMap> {
    let f = from.cone.field();
    let (rf, rt) = (from.complex.realize(), to.complex.realize());
    let (off_f, off_t) = (rf.module.dim(), rt.module.dim());
    let mut mat = Matrix::zeros(f, to.cone.dim(), from.cone.dim());
    for (s, c) in from.complex.cells().iter().enumerate() {
        if to.complex.cells().get(s) != Some(c) {
            return Err(Error::InvalidMap(format!("stage {} is not a sub complex of stage {}", from.index, to.index)));
        }
        for b in from.complex.cell_basis(c.idem) {
            let (src, tgt) = (rf.position(s, b).expect("cell basis"), rt.position(s, b).expect("cell basis"));
            mat[(tgt, src)] = f.one();
        }
    }
    for j in 0..from.cone.dim() - off_f {
        mat[(off_t + j, off_f + j)] = f.one();
    }
    ModuleMap::new(from.cone.clone(), to.cone.clone(), 0, mat)
}

/// Checks that `Hom(Σ^n e_j A, Y_i) -> Hom(Σ^n e_j A, Y_{i+1})` vanishes for all `n ≥ 0`.
pub fn tower_vanishing_check(tower: &Tower) -> Result<VanishingReport> {
    let r = tower.module.algebra().idempotent_count();
    let mut checks = Vec::new();
    for pair in tower.stages.windows(2) {
        let tau = transition_map(&pair[0], &pair[1])?;
        if !tau.is_chain_map() {
            return Err(Error::NotChainMap(format!("transition out of stage {}", pair[0].index)));
        }
        let lo = lowest_degree(&[&pair[0].cone, &pair[1].cone]);
        for n in 0..=-lo {
            for i in 0..r {
                checks.push(TransitionCheck { stage: pair[0].index, idem: i, n, rank: block_induced_rank(&tau, -n, i) });
            }
        }
    }
    let all_zero = checks.iter().all(|c| c.rank == 0);
    Ok(VanishingReport { checks, all_zero })
}
