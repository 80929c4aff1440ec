use std::collections::HashMap;
use std::sync::Arc;

use super::algebra::DgAlgebra;
use super::lin::{Lin, LinAcc};
use super::map::ModuleMap;
use super::module::{homology, DgModule, HomologyTable, ModuleBasisElem};
use crate::error::{Error, Result};
use crate::scalars::{LinearSystem, Matrix};

/// `Σ^p x`: `(Σ^p x)^n = x^{n+p}`, differential multiplied by `(-1)^p`, action unchanged.
pub fn shift(x: &DgModule, p: i64) -> DgModule {
    let basis = x
        .basis()
        .iter()
        .map(|b| ModuleBasisElem { name: b.name.clone(), degree: b.degree - p, idem: b.idem })
        .collect();
    let diff = (0..x.dim()).map(|m| x.diff(m).signed(p)).collect();
    let action = (0..x.dim()).map(|m| (0..x.algebra().dim()).map(|a| x.act(m, a).clone()).collect()).collect();
    DgModule::from_parts(x.algebra().clone(), basis, diff, action)
}

/// Direct sum of a list of modules; basis elements keep their names with a `k.` prefix.
pub fn direct_sum(parts: &[&DgModule]) -> Result<DgModule> {
    let Some(first) = parts.first() else {
        return Err(Error::InvalidModule("direct sum of an empty list needs an algebra; use DgModule::zero".into()));
    };
    let alg = first.algebra().clone();
    if parts.iter().any(|p| p.algebra().as_ref() != alg.as_ref()) {
        return Err(Error::AlgebraMismatch);
    }
    let mut basis = Vec::new();
    let mut diff = Vec::new();
    let mut action = Vec::new();
    let mut offset = 0;
    for (k, p) in parts.iter().enumerate() {
        let shift_idx = |v: &Lin| v.map_indices(|i| Some(i + offset));
        for m in 0..p.dim() {
            let b = &p.basis()[m];
            basis.push(ModuleBasisElem { name: format!("{k}.{}", b.name), degree: b.degree, idem: b.idem });
            diff.push(shift_idx(p.diff(m)));
            action.push((0..alg.dim()).map(|a| shift_idx(p.act(m, a))).collect());
        }
        offset += p.dim();
    }
    Ok(DgModule::from_parts(alg, basis, diff, action))
}

/// Per-(degree, idempotent) RREF basis of a graded subspace.
struct GradedSubspace {
    /// `(degree, idem, block coordinates, rref rows, pivot positions within the block)`
    blocks: Vec<(i64, usize, Vec<usize>, Matrix, Vec<usize>)>,
}

impl GradedSubspace {
    fn new(x: &DgModule, span: &Matrix) -> Result<Self> {
        if span.rows() != x.dim() {
            return Err(Error::DimensionMismatch("spanning vectors have the wrong length".into()));
        }
        let r = x.algebra().idempotent_count();
        let mut blocks = Vec::new();
        let mut total = 0;
        for p in x.degrees().collect::<Vec<_>>() {
            for i in 0..r {
                let idx = x.block(p, i);
                if idx.is_empty() {
                    continue;
                }
                let proj = span.select_rows(&idx).transpose();
                let rr = proj.rref();
                if rr.rank == 0 {
                    continue;
                }
                total += rr.rank;
                let rows: Vec<usize> = (0..rr.rank).collect();
                blocks.push((p, i, idx, rr.reduced.select_rows(&rows), rr.pivots));
            }
        }
        if total != span.rank() {
            return Err(Error::InvalidModule("span is not homogeneous in degree and idempotent".into()));
        }
        Ok(GradedSubspace { blocks })
    }

    /// Basis vectors in full coordinates, with their degree and idempotent.
    fn vectors(&self) -> Vec<(i64, usize, Lin)> {
        let mut out = Vec::new();
        for (p, i, idx, rows, _) in &self.blocks {
            for k in 0..rows.rows() {
                out.push((*p, *i, super::module::scalar_vec_to_lin(idx, rows.row(k))));
            }
        }
        out
    }

    /// Splits `w` into (coordinates on the subspace basis, remainder supported off the pivots).
    fn reduce(&self, w: &Lin) -> (Lin, Lin) {
        let mut rest = w.clone();
        let mut coords = Vec::new();
        let mut offset = 0;
        for (_, _, idx, rows, pivots) in &self.blocks {
            for (k, &pc) in pivots.iter().enumerate() {
                if let Some(c) = rest.coeff(idx[pc]).cloned() {
                    coords.push((offset + k, c.clone()));
                    let v = super::module::scalar_vec_to_lin(idx, rows.row(k));
                    rest = rest.sub(&v.scale(&c));
                }
            }
            offset += rows.rows();
        }
        (Lin::from_terms(coords), rest)
    }
}

/// The submodule spanned by the columns of `span` (which must be closed under d and the action),
/// with its inclusion map.
pub fn submodule(x: &Arc<DgModule>, span: &Matrix) -> Result<(Arc<DgModule>, ModuleMap)> {
    let sub = GradedSubspace::new(x, span)?;
    let vecs = sub.vectors();
    let alg = x.algebra();
    let f = x.field();
    let express = |w: &Lin| -> Result<Lin> {
        let (c, rest) = sub.reduce(w);
        if rest.is_zero() {
            Ok(c)
        } else {
            Err(Error::InvalidModule("span is not closed under the differential and the action".into()))
        }
    };
    let basis = vecs
        .iter()
        .enumerate()
        .map(|(k, (p, i, _))| ModuleBasisElem { name: format!("s{k}"), degree: *p, idem: *i })
        .collect();
    let diff = vecs.iter().map(|(_, _, v)| express(&x.diff_lin(v))).collect::<Result<Vec<_>>>()?;
    let action = vecs
        .iter()
        .map(|(_, _, v)| (0..alg.dim()).map(|a| express(&x.act_lin(v, &Lin::basis(a, f)))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let module = Arc::new(DgModule::from_parts(alg.clone(), basis, diff, action));
    let images: Vec<Lin> = vecs.into_iter().map(|(_, _, v)| v).collect();
    let incl = ModuleMap::from_images(module.clone(), x.clone(), 0, &images);
    Ok((module, incl))
}

/// The quotient of `x` by the submodule spanned by `span`, with the projection.
///
/// The quotient basis consists of the original basis elements that are not
/// pivots of the subspace, so coordinate submodules give coordinate quotients.
pub fn quotient(x: &Arc<DgModule>, span: &Matrix) -> Result<(Arc<DgModule>, ModuleMap)> {
    let sub = GradedSubspace::new(x, span)?;
    let alg = x.algebra();
    let f = x.field();
    // the submodule must be closed, check via the same reduction
    for (_, _, v) in sub.vectors() {
        let closed = sub.reduce(&x.diff_lin(&v)).1.is_zero()
            && (0..alg.dim()).all(|a| sub.reduce(&x.act_lin(&v, &Lin::basis(a, f))).1.is_zero());
        if !closed {
            return Err(Error::InvalidModule("span is not closed under the differential and the action".into()));
        }
    }
    let pivot_set: std::collections::HashSet<usize> =
        sub.blocks.iter().flat_map(|(_, _, idx, _, piv)| piv.iter().map(|&p| idx[p]).collect::<Vec<_>>()).collect();
    let kept: Vec<usize> = (0..x.dim()).filter(|m| !pivot_set.contains(m)).collect();
    let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let project = |w: &Lin| -> Lin {
        let (_, rest) = sub.reduce(w);
        rest.map_indices(|m| pos.get(&m).copied())
    };
    let basis = kept.iter().map(|&m| x.basis()[m].clone()).collect();
    let diff = kept.iter().map(|&m| project(x.diff(m))).collect();
    let action = kept.iter().map(|&m| (0..alg.dim()).map(|a| project(x.act(m, a))).collect()).collect();
    let q = Arc::new(DgModule::from_parts(alg.clone(), basis, diff, action));
    let images: Vec<Lin> = (0..x.dim()).map(|m| project(&Lin::basis(m, f))).collect();
    let proj = ModuleMap::from_images(x.clone(), q.clone(), 0, &images);
    Ok((q, proj))
}

/// Mapping cone of a degree-0 chain map, with the canonical maps of its triangle.
#[derive(Clone, Debug)]
pub struct Cone {
    pub module: Arc<DgModule>,
    /// `target -> cone`
    pub inclusion: ModuleMap,
    /// `cone -> Σ source`
    pub projection: ModuleMap,
    pub shifted_source: Arc<DgModule>,
}

/// `cone(f) = Σ(source) ⊕ target` with `d(sm, n) = (-s dm, f(m) + dn)`.
pub fn cone(f: &ModuleMap) -> Result<Cone> {
    if f.degree() != 0 {
        return Err(Error::NotChainMap("cone needs a map of degree 0".into()));
    }
    if !f.is_chain_map() {
        return Err(Error::NotChainMap("d f != f d".into()));
    }
    let (m, n) = (f.source(), f.target());
    let alg = m.algebra().clone();
    let fld = alg.field();
    let off = m.dim();
    let mut basis = Vec::with_capacity(m.dim() + n.dim());
    let mut diff = Vec::new();
    let mut action = Vec::new();
    for j in 0..m.dim() {
        let b = &m.basis()[j];
        basis.push(ModuleBasisElem { name: format!("s.{}", b.name), degree: b.degree - 1, idem: b.idem });
        let d = m.diff(j).neg().add(&f.image_of(j).map_indices(|i| Some(i + off)));
        diff.push(d);
        action.push((0..alg.dim()).map(|a| m.act(j, a).clone()).collect::<Vec<_>>());
    }
    for j in 0..n.dim() {
        basis.push(n.basis()[j].clone());
        diff.push(n.diff(j).map_indices(|i| Some(i + off)));
        action.push((0..alg.dim()).map(|a| n.act(j, a).map_indices(|i| Some(i + off))).collect());
    }
    let module = Arc::new(DgModule::from_parts(alg, basis, diff, action));
    let shifted_source = Arc::new(shift(m, 1));
    let inc_images: Vec<Lin> = (0..n.dim()).map(|j| Lin::basis(j + off, fld)).collect();
    let inclusion = ModuleMap::from_images(n.clone(), module.clone(), 0, &inc_images);
    let proj_images: Vec<Lin> =
        (0..module.dim()).map(|j| if j < off { Lin::basis(j, fld) } else { Lin::zero() }).collect();
    let projection = ModuleMap::from_images(module.clone(), shifted_source.clone(), 0, &proj_images);
    Ok(Cone { module, inclusion, projection, shifted_source })
}

/// Rank of the map `H^p(source) -> H^{p+deg}(target)` induced by a chain map.
pub fn induced_rank(f: &ModuleMap, p: i64) -> usize {
    let (m, n) = (f.source(), f.target());
    let q = p + f.degree();
    let src = m.in_degree(p);
    let tgt = n.in_degree(q);
    if src.is_empty() || tgt.is_empty() {
        return 0;
    }
    let cycles = m.diff_matrix(src, m.in_degree(p + 1)).kernel_basis();
    let fz = f.matrix().select_rows(tgt).select_cols(src).mul(&cycles).expect("shapes");
    let bnd = n.diff_matrix(n.in_degree(q - 1), tgt);
    let rb = bnd.rank();
    bnd.hstack(&fz).expect("rows").rank() - rb
}

/// Whether a chain map induces isomorphisms on every homology group.
pub fn is_quasi_iso(f: &ModuleMap) -> bool {
    if !f.is_chain_map() {
        return false;
    }
    let hs = homology(f.source());
    let ht = homology(f.target());
    let mut degrees: Vec<i64> = hs.rows().keys().copied().collect();
    degrees.extend(ht.rows().keys().map(|q| q - f.degree()));
    degrees.sort_unstable();
    degrees.dedup();
    degrees.into_iter().all(|p| {
        let a = hs.total(p);
        a == ht.total(p + f.degree()) && induced_rank(f, p) == a
    })
}

/// Checks the long exact homology sequence of a cone by rank bookkeeping:
/// `dim H^p(cone) = dim coker H^p(f) + dim ker H^{p+1}(f)` for every `p`.
pub fn cone_sequence_is_exact(f: &ModuleMap, c: &Cone) -> bool {
    let hs = homology(f.source());
    let ht = homology(f.target());
    let hc = homology(&c.module);
    let lo = [hs.support(), ht.support(), hc.support()].iter().flatten().map(|s| s.0 - 1).min();
    let hi = [hs.support(), ht.support(), hc.support()].iter().flatten().map(|s| s.1 + 1).max();
    let (Some(lo), Some(hi)) = (lo, hi) else { return true };
    (lo..=hi).all(|p| {
        let coker = ht.total(p) - induced_rank(f, p);
        let ker = hs.total(p + 1) - induced_rank(f, p + 1);
        hc.total(p) == coker + ker
    })
}

/// Some `H` of degree `|f| - 1` with `dH - (-1)^{|H|} H d = f`, or `None` when `f` is not
/// null-homotopic at the strict level.
pub fn null_homotopy(f: &ModuleMap) -> Result<Option<ModuleMap>> {
    if !f.is_chain_map() {
        return Err(Error::NotChainMap("null_homotopy needs a chain map".into()));
    }
    let (m, n) = (f.source(), f.target());
    let alg = m.algebra();
    let fld = alg.field();
    let hdeg = f.degree() - 1;
    let mut var: HashMap<(usize, usize), usize> = HashMap::new();
    for s in 0..m.dim() {
        for t in 0..n.dim() {
            if n.degree(t) == m.degree(s) + hdeg && n.idem(t) == m.idem(s) {
                let k = var.len();
                var.insert((t, s), k);
            }
        }
    }
    let mut sys = LinearSystem::new(fld, var.len());
    // A-linearity: H(s a) = H(s) a
    for s in 0..m.dim() {
        for a in 0..alg.dim() {
            if alg.is_idempotent(a) || alg.elem(a).target != m.idem(s) {
                continue;
            }
            let sa = m.act(s, a);
            let images: Vec<(usize, Lin)> = (0..n.dim())
                .filter(|&t| var.contains_key(&(t, s)))
                .map(|t| (t, n.act(t, a).clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            for t in 0..n.dim() {
                let mut eq = Vec::new();
                for (s2, c) in sa.terms() {
                    if let Some(&k) = var.get(&(t, *s2)) {
                        eq.push((k, c.clone()));
                    }
                }
                for (t2, img) in &images {
                    if let Some(c) = img.coeff(t) {
                        eq.push((var[&(*t2, s)], -c));
                    }
                }
                if !eq.is_empty() {
                    sys.add_equation(&eq, fld.zero());
                }
            }
        }
    }
    // dH - (-1)^{hdeg} H d = f
    let sign = fld.one().signed(hdeg);
    for s in 0..m.dim() {
        for t in 0..n.dim() {
            if n.degree(t) != m.degree(s) + f.degree() || n.idem(t) != m.idem(s) {
                continue;
            }
            let mut eq = LinAcc::new();
            for t2 in 0..n.dim() {
                if let (Some(&k), Some(c)) = (var.get(&(t2, s)), n.diff(t2).coeff(t)) {
                    eq.push(k, c.clone());
                }
            }
            for (s2, c) in m.diff(s).terms() {
                if let Some(&k) = var.get(&(t, *s2)) {
                    eq.push(k, -&(&sign * c));
                }
            }
            let eq = eq.finish();
            sys.add_equation(eq.terms(), f.matrix()[(t, s)].clone());
        }
    }
    let Some(sol) = sys.solution() else { return Ok(None) };
    let mut mat = Matrix::zeros(fld, n.dim(), m.dim());
    for (&(t, s), &k) in &var {
        mat[(t, s)] = sol[k].clone();
    }
    let h = ModuleMap::from_parts(m.clone(), n.clone(), hdeg, mat);
    // certificate
    let check = h.boundary_matrix().sub(f.matrix())?;
    if !check.is_zero() {
        return Err(Error::Certificate("null-homotopy does not reproduce f".into()));
    }
    Ok(Some(h))
}

/// A summand `e_i A` of a class P algebra with the dimension of `H^0` of `e_i A e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub idem: usize,
    pub end_h0_dim: usize,
}

/// The decomposition `A = ⊕ e_i A`, each summand certified local (`H^0(e_i A e_i) = k`).
pub fn indecomposable_summands(a: &DgAlgebra) -> Result<Vec<Summand>> {
    a.require_class_p()?;
    let mut out = Vec::new();
    for i in 0..a.idempotent_count() {
        let corner = |deg: i64| a.elements_between(i, i, deg);
        let here = corner(0);
        let next = corner(1);
        let mut d = Matrix::zeros(a.field(), next.len(), here.len());
        for (c, &b) in here.iter().enumerate() {
            for (t, x) in a.diff(b).terms() {
                if let Some(r) = next.iter().position(|y| y == t) {
                    d[(r, c)] = x.clone();
                }
            }
        }
        // nothing in negative degrees under class P
        let dim = here.len() - d.rank();
        if dim != 1 {
            return Err(Error::Certificate(format!("H^0(e_{i} A e_{i}) has dimension {dim}")));
        }
        out.push(Summand { idem: i, end_h0_dim: dim });
    }
    Ok(out)
}

/// `H(x)` of a direct sum is the sum of the tables.
pub fn homology_of_sum(parts: &[&DgModule]) -> Option<HomologyTable> {
    let first = parts.first()?;
    let mut t = HomologyTable::new(first.algebra().idempotent_count());
    for p in parts {
        t = t.sum(&homology(p));
    }
    Some(t)
}

/// Matrix positions `(t, s)` a degree-`deg` map `m -> n` may occupy.
pub fn chain_map_coordinates(m: &DgModule, n: &DgModule, deg: i64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for t in 0..n.dim() {
        for s in 0..m.dim() {
            if n.degree(t) == m.degree(s) + deg && n.idem(t) == m.idem(s) {
                out.push((t, s));
            }
        }
    }
    out
}

/// Basis (as columns over [`chain_map_coordinates`]) of the space of A-linear chain maps of degree `deg`.
pub fn chain_maps(m: &DgModule, n: &DgModule, deg: i64) -> Matrix {
    let alg = m.algebra();
    let fld = alg.field();
    let coords = chain_map_coordinates(m, n, deg);
    let var: HashMap<(usize, usize), usize> = coords.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut rows: Vec<Vec<(usize, crate::scalars::Scalar)>> = Vec::new();
    // f(s a) = f(s) a
    for s in 0..m.dim() {
        for a in 0..alg.dim() {
            if alg.is_idempotent(a) || alg.elem(a).target != m.idem(s) {
                continue;
            }
            let mut per_target: HashMap<usize, LinAcc> = HashMap::new();
            for (s2, c) in m.act(s, a).terms() {
                for t in 0..n.dim() {
                    if let Some(&k) = var.get(&(t, *s2)) {
                        per_target.entry(t).or_default().push(k, c.clone());
                    }
                }
            }
            for t in 0..n.dim() {
                let Some(&k) = var.get(&(t, s)) else { continue };
                for (t2, c) in n.act(t, a).terms() {
                    per_target.entry(*t2).or_default().push(k, -c);
                }
            }
            let mut keys: Vec<usize> = per_target.keys().copied().collect();
            keys.sort_unstable();
            for t in keys {
                let eq = per_target.remove(&t).expect("key").finish();
                if !eq.is_zero() {
                    rows.push(eq.terms().to_vec());
                }
            }
        }
    }
    // d f - (-1)^deg f d = 0
    let sign = fld.one().signed(deg);
    let mut per_entry: HashMap<(usize, usize), LinAcc> = HashMap::new();
    for &(t, s) in &coords {
        let k = var[&(t, s)];
        for (t2, c) in n.diff(t).terms() {
            per_entry.entry((*t2, s)).or_default().push(k, c.clone());
        }
        for s0 in 0..m.dim() {
            if let Some(c) = m.diff(s0).coeff(s) {
                per_entry.entry((t, s0)).or_default().push(k, -&(&sign * c));
            }
        }
    }
    let mut keys: Vec<(usize, usize)> = per_entry.keys().copied().collect();
    keys.sort_unstable();
    for key in keys {
        let eq = per_entry.remove(&key).expect("key").finish();
        if !eq.is_zero() {
            rows.push(eq.terms().to_vec());
        }
    }
    let mut mat = Matrix::zeros(fld, rows.len(), coords.len());
    for (r, eq) in rows.iter().enumerate() {
        for (k, c) in eq {
            mat[(r, *k)] = c.clone();
        }
    }
    mat.kernel_basis()
}

/// The submodule spanned by a set of basis elements, keeping their order and names.
pub fn coordinate_submodule(x: &Arc<DgModule>, idx: &[usize]) -> Result<(Arc<DgModule>, ModuleMap)> {
    let alg = x.algebra();
    let fld = x.field();
    let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let restrict = |v: &Lin| -> Result<Lin> {
        if v.indices().all(|j| pos.contains_key(&j)) {
            Ok(v.map_indices(|j| pos.get(&j).copied()))
        } else {
            Err(Error::InvalidModule("basis subset is not closed under the differential and the action".into()))
        }
    };
    let basis = idx.iter().map(|&j| x.basis()[j].clone()).collect();
    let diff = idx.iter().map(|&j| restrict(x.diff(j))).collect::<Result<Vec<_>>>()?;
    let action = idx
        .iter()
        .map(|&j| (0..alg.dim()).map(|a| restrict(x.act(j, a))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let sub = Arc::new(DgModule::from_parts(alg.clone(), basis, diff, action));
    let images: Vec<Lin> = idx.iter().map(|&j| Lin::basis(j, fld)).collect();
    let incl = ModuleMap::from_images(sub.clone(), x.clone(), 0, &images);
    Ok((sub, incl))
}

/// The quotient by the submodule spanned by a set of basis elements; the remaining basis
/// elements keep their order and names.
pub fn coordinate_quotient(x: &Arc<DgModule>, idx: &[usize]) -> Result<(Arc<DgModule>, ModuleMap)> {
    coordinate_submodule(x, idx)?;
    let alg = x.algebra();
    let fld = x.field();
    let dropped: std::collections::HashSet<usize> = idx.iter().copied().collect();
    let kept: Vec<usize> = (0..x.dim()).filter(|j| !dropped.contains(j)).collect();
    let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let project = |v: &Lin| v.map_indices(|j| pos.get(&j).copied());
    let basis = kept.iter().map(|&j| x.basis()[j].clone()).collect();
    let diff = kept.iter().map(|&j| project(x.diff(j))).collect();
    let action = kept.iter().map(|&j| (0..alg.dim()).map(|a| project(x.act(j, a))).collect()).collect();
    let q = Arc::new(DgModule::from_parts(alg.clone(), basis, diff, action));
    let images: Vec<Lin> = (0..x.dim()).map(|j| project(&Lin::basis(j, fld))).collect();
    let proj = ModuleMap::from_images(x.clone(), q.clone(), 0, &images);
    Ok((q, proj))
}
