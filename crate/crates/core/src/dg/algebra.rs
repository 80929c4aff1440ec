use std::collections::HashMap;

use super::lin::{Lin, LinAcc};
use crate::error::{Error, Result};
use crate::scalars::{FieldSpec, Scalar};

/// A basis element `b` with `e_target * b * e_source = b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraBasisElem {
    pub name: String,
    pub degree: i64,
    pub source: usize,
    pub target: usize,
}

/// Outcome of checking every algebra axiom on all basis pairs (triples for associativity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub class_p: bool,
    /// Why class P was refused, empty when it was granted.
    pub class_p_failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite-dimensional dg algebra presented on an idempotent-adapted basis.
///
/// Products compose right to left: `a * b` can only be nonzero when
/// `a.source == b.target`, and then lies in `e_{a.target} A e_{b.source}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    field: FieldSpec,
    basis: Vec<AlgebraBasisElem>,
    idempotents: Vec<usize>,
    mult: Vec<Lin>,
    diff: Vec<Lin>,
    report: ValidationReport,
}

impl DgAlgebra {
    /// Assembles an algebra from structure constants.
    ///
    /// Products involving an idempotent that are not listed explicitly are
    /// filled in from the unit axioms. Index errors are rejected outright;
    /// violated axioms are collected in [`DgAlgebra::report`].
    pub fn new(
        field: FieldSpec,
        basis: Vec<AlgebraBasisElem>,
        idempotents: Vec<usize>,
        mult: Vec<(usize, usize, Lin)>,
        diff: Vec<(usize, Lin)>,
    ) -> Result<Self> {
        let n = basis.len();
        let r = idempotents.len();
        if r == 0 {
            return Err(Error::InvalidAlgebra("the zero algebra (no idempotents) is not accepted".into()));
        }
        for b in &basis {
            if b.source >= r || b.target >= r {
                return Err(Error::InvalidAlgebra(format!("basis element {} refers to a missing idempotent", b.name)));
            }
        }
        for &e in &idempotents {
            if e >= n {
                return Err(Error::InvalidAlgebra(format!("idempotent index {e} out of range")));
            }
        }
        let check_lin = |v: &Lin| -> Result<()> {
            for (i, c) in v.terms() {
                if *i >= n {
                    return Err(Error::InvalidAlgebra(format!("basis index {i} out of range")));
                }
                if c.field() != field {
                    return Err(Error::FieldMismatch);
                }
            }
            Ok(())
        };
        let idem_pos: HashMap<usize, usize> = idempotents.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let mut table: Vec<Option<Lin>> = vec![None; n * n];
        for (a, b, v) in mult {
            if a >= n || b >= n {
                return Err(Error::InvalidAlgebra(format!("product ({a},{b}) out of range")));
            }
            check_lin(&v)?;
            table[a * n + b] = Some(v);
        }
        let mut mult_table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let v = table[a * n + b].take().unwrap_or_else(|| {
                    if let Some(&i) = idem_pos.get(&a) {
                        if basis[b].target == i { Lin::basis(b, field) } else { Lin::zero() }
                    } else if let Some(&j) = idem_pos.get(&b) {
                        if basis[a].source == j { Lin::basis(a, field) } else { Lin::zero() }
                    } else {
                        Lin::zero()
                    }
                });
                mult_table.push(v);
            }
        }
        let mut diff_table = vec![Lin::zero(); n];
        for (a, v) in diff {
            if a >= n {
                return Err(Error::InvalidAlgebra(format!("differential of index {a} out of range")));
            }
            check_lin(&v)?;
            diff_table[a] = v;
        }
        let mut alg = DgAlgebra {
            field,
            basis,
            idempotents,
            mult: mult_table,
            diff: diff_table,
            report: ValidationReport { violations: vec![], class_p: false, class_p_failures: vec![] },
        };
        alg.report = alg.compute_report();
        Ok(alg)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[AlgebraBasisElem] {
        &self.basis
    }

    pub fn elem(&self, a: usize) -> &AlgebraBasisElem {
        &self.basis[a]
    }

    pub fn degree(&self, a: usize) -> i64 {
        self.basis[a].degree
    }

    /// Number of idempotents `r`.
    pub fn idempotent_count(&self) -> usize {
        self.idempotents.len()
    }

    /// Basis indices of `e_1, ..., e_r`.
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn idempotent(&self, i: usize) -> usize {
        self.idempotents[i]
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.idempotents.contains(&a)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn mul(&self, a: usize, b: usize) -> &Lin {
        &self.mult[a * self.dim() + b]
    }

    pub fn diff(&self, a: usize) -> &Lin {
        &self.diff[a]
    }

    pub fn mul_lin(&self, x: &Lin, y: &Lin) -> Lin {
        let mut acc = LinAcc::new();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let p = self.mul(*a, *b);
                if !p.is_zero() {
                    acc.add_scaled(p, &(ca * cb));
                }
            }
        }
        acc.finish()
    }

    pub fn diff_lin(&self, x: &Lin) -> Lin {
        let mut acc = LinAcc::new();
        for (a, c) in x.terms() {
            acc.add_scaled(self.diff(*a), c);
        }
        acc.finish()
    }

    pub fn one(&self) -> Lin {
        Lin::from_terms(self.idempotents.iter().map(|&e| (e, self.field.one())))
    }

    pub fn min_degree(&self) -> i64 {
        self.basis.iter().map(|b| b.degree).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i64 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    /// Basis of `e_target A e_source` in the given degree.
    pub fn elements_between(&self, target: usize, source: usize, degree: i64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&b| {
                let e = &self.basis[b];
                e.target == target && e.source == source && e.degree == degree
            })
            .collect()
    }

    /// The degree of a homogeneous combination, `None` for zero or mixed degrees.
    pub fn degree_of(&self, x: &Lin) -> Option<i64> {
        let mut it = x.indices().map(|a| self.degree(a));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// The coefficient `c` when `x = c e_i`, otherwise `None`.
    pub fn as_scalar_of_idempotent(&self, x: &Lin, i: usize) -> Option<Scalar> {
        match x.terms() {
            [(a, c)] if *a == self.idempotents[i] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn is_class_p(&self) -> bool {
        self.report.class_p
    }

    pub fn require_valid(&self) -> Result<()> {
        if self.report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidAlgebra(self.report.violations.join("; ")))
        }
    }

    pub fn require_class_p(&self) -> Result<()> {
        self.require_valid()?;
        if self.report.class_p {
            Ok(())
        } else {
            Err(Error::NotClassP(self.report.class_p_failures.join("; ")))
        }
    }

    fn compute_report(&self) -> ValidationReport {
        let n = self.dim();
        let f = self.field;
        let mut v = Vec::new();
        let name = |a: usize| self.basis[a].name.as_str();

        for (k, &e) in self.idempotents.iter().enumerate() {
            let b = &self.basis[e];
            if b.degree != 0 || b.source != k || b.target != k {
                v.push(format!("idempotent {} must have degree 0 and source = target = {k}", b.name));
            }
            if !self.diff(e).is_zero() {
                v.push(format!("d({}) must vanish", b.name));
            }
        }
        for i in 0..self.idempotents.len() {
            for j in 0..self.idempotents.len() {
                let p = self.mul(self.idempotents[i], self.idempotents[j]);
                let want = if i == j { Lin::basis(self.idempotents[i], f) } else { Lin::zero() };
                if *p != want {
                    v.push(format!("e_{i} e_{j} must be {}", if i == j { "e_i" } else { "0" }));
                }
            }
        }
        for b in 0..n {
            let eb = &self.basis[b];
            for (i, &e) in self.idempotents.iter().enumerate() {
                let left = self.mul(e, b);
                let right = self.mul(b, e);
                let want_l = if eb.target == i { Lin::basis(b, f) } else { Lin::zero() };
                let want_r = if eb.source == i { Lin::basis(b, f) } else { Lin::zero() };
                if *left != want_l || *right != want_r {
                    v.push(format!("basis element {} is not adapted to the idempotents", name(b)));
                }
            }
            // grading and blocks of d
            for (c, _) in self.diff(b).terms() {
                let ec = &self.basis[*c];
                if ec.degree != eb.degree + 1 {
                    v.push(format!("d({}) has a term {} of the wrong degree", name(b), name(*c)));
                }
                if ec.source != eb.source || ec.target != eb.target {
                    v.push(format!("d({}) leaves its idempotent block", name(b)));
                }
            }
            let dd = self.diff_lin(self.diff(b));
            if !dd.is_zero() {
                v.push(format!("d(d({})) != 0", name(b)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let (ea, eb) = (&self.basis[a], &self.basis[b]);
                let p = self.mul(a, b);
                if ea.source != eb.target && !p.is_zero() {
                    v.push(format!("{} * {} must vanish (idempotents do not match)", name(a), name(b)));
                }
                for (c, _) in p.terms() {
                    let ec = &self.basis[*c];
                    if ec.degree != ea.degree + eb.degree {
                        v.push(format!("{} * {} has a term {} of the wrong degree", name(a), name(b), name(*c)));
                    }
                    if ec.target != ea.target || ec.source != eb.source {
                        v.push(format!("{} * {} leaves its idempotent block", name(a), name(b)));
                    }
                }
                // Leibniz: d(ab) = d(a) b + (-1)^|a| a d(b)
                let lhs = self.diff_lin(p);
                let rhs = self
                    .mul_lin(self.diff(a), &Lin::basis(b, f))
                    .add(&self.mul_lin(&Lin::basis(a, f), self.diff(b)).signed(ea.degree));
                if lhs != rhs {
                    v.push(format!("Leibniz rule fails on ({}, {})", name(a), name(b)));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    let bc = self.mul(b, c);
                    if ab.is_zero() && bc.is_zero() {
                        continue;
                    }
                    let l = self.mul_lin(ab, &Lin::basis(c, f));
                    let r = self.mul_lin(&Lin::basis(a, f), bc);
                    if l != r {
                        v.push(format!("associativity fails on ({}, {}, {})", name(a), name(b), name(c)));
                    }
                }
            }
        }
        v.dedup();

        let mut cp = Vec::new();
        if self.basis.iter().any(|b| b.degree < 0) {
            cp.push("the algebra has elements of negative degree".to_string());
        }
        let deg0: Vec<usize> = (0..n).filter(|&b| self.basis[b].degree == 0).collect();
        if deg0.iter().any(|b| !self.idempotents.contains(b)) {
            cp.push("the degree-0 part is larger than the span of the idempotents".to_string());
        }
        if deg0.iter().any(|&b| !self.diff(b).is_zero()) {
            cp.push("the differential does not vanish in degree 0".to_string());
        }
        if !v.is_empty() {
            cp.push("the algebra is not a valid dg algebra".to_string());
        }
        ValidationReport { class_p: cp.is_empty(), violations: v, class_p_failures: cp }
    }
}

/// Checks every axiom; `class_p` is granted only to normalized positive algebras.
pub fn validate_algebra(a: &DgAlgebra) -> ValidationReport {
    a.report().clone()
}

/// Name-based builder used by the example corpus and tests.
pub struct AlgebraBuilder {
    field: FieldSpec,
    basis: Vec<AlgebraBasisElem>,
    idempotents: Vec<usize>,
    mult: Vec<(usize, usize, Lin)>,
    diff: Vec<(usize, Lin)>,
}

impl AlgebraBuilder {
    pub fn new(field: FieldSpec) -> Self {
        AlgebraBuilder { field, basis: vec![], idempotents: vec![], mult: vec![], diff: vec![] }
    }

    /// Adds an idempotent basis element; idempotents are numbered in insertion order.
    pub fn idempotent(mut self, name: &str) -> Self {
        let k = self.idempotents.len();
        self.idempotents.push(self.basis.len());
        self.basis.push(AlgebraBasisElem { name: name.into(), degree: 0, source: k, target: k });
        self
    }

    pub fn element(mut self, name: &str, degree: i64, source: usize, target: usize) -> Self {
        self.basis.push(AlgebraBasisElem { name: name.into(), degree, source, target });
        self
    }

    fn idx(&self, name: &str) -> usize {
        self.basis.iter().position(|b| b.name == name).unwrap_or_else(|| panic!("unknown basis element {name}"))
    }

    fn lin(&self, terms: &[(&str, i64)]) -> Lin {
        Lin::from_terms(terms.iter().map(|(n, c)| (self.idx(n), self.field.from_i64(*c))))
    }

    pub fn product(mut self, a: &str, b: &str, terms: &[(&str, i64)]) -> Self {
        let v = self.lin(terms);
        let (ia, ib) = (self.idx(a), self.idx(b));
        self.mult.push((ia, ib, v));
        self
    }

    pub fn differential(mut self, a: &str, terms: &[(&str, i64)]) -> Self {
        let v = self.lin(terms);
        let ia = self.idx(a);
        self.diff.push((ia, v));
        self
    }

    pub fn build(self) -> Result<DgAlgebra> {
        DgAlgebra::new(self.field, self.basis, self.idempotents, self.mult, self.diff)
    }
}
