use std::collections::BTreeMap;

use crate::scalars::{FieldSpec, Scalar};

/// A sparse linear combination of basis elements, sorted by index, without zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Lin {
    terms: Vec<(usize, Scalar)>,
}

impl Lin {
    pub fn zero() -> Self {
        Lin { terms: Vec::new() }
    }

    pub fn basis(index: usize, field: FieldSpec) -> Self {
        Lin { terms: vec![(index, field.one())] }
    }

    pub fn term(index: usize, coef: Scalar) -> Self {
        Self::from_terms([(index, coef)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, c) in terms {
            match acc.get_mut(&i) {
                Some(x) => x.add_assign_ref(&c),
                None => {
                    acc.insert(i, c);
                }
            }
        }
        Lin { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        Lin {
            terms: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        }
    }

    pub fn to_dense(&self, len: usize, field: FieldSpec) -> Vec<Scalar> {
        let mut v = vec![field.zero(); len];
        for (i, c) in &self.terms {
            v[*i] = c.clone();
        }
        v
    }

    pub fn terms(&self) -> &[(usize, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Option<&Scalar> {
        self.terms.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.terms[k].1)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|(i, _)| *i)
    }

    pub fn add(&self, other: &Lin) -> Lin {
        Lin::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn sub(&self, other: &Lin) -> Lin {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Lin {
        if c.is_zero() {
            return Lin::zero();
        }
        Lin { terms: self.terms.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn neg(&self) -> Lin {
        Lin { terms: self.terms.iter().map(|(i, x)| (*i, -x)).collect() }
    }

    pub fn signed(&self, k: i64) -> Lin {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Re-indexes every term through `f`; terms mapped to `None` are dropped.
    pub fn map_indices(&self, f: impl Fn(usize) -> Option<usize>) -> Lin {
        Lin::from_terms(self.terms.iter().filter_map(|(i, c)| f(*i).map(|j| (j, c.clone()))))
    }

    /// Substitutes each basis index by a linear combination.
    pub fn substitute(&self, f: impl Fn(usize) -> Lin) -> Lin {
        let mut out = Vec::new();
        for (i, c) in &self.terms {
            out.extend(f(*i).terms.into_iter().map(|(j, x)| (j, &x * c)));
        }
        Lin::from_terms(out)
    }
}

/// Accumulates many terms before normalizing once.
#[derive(Default)]
pub struct LinAcc {
    terms: Vec<(usize, Scalar)>,
}

impl LinAcc {
    pub fn new() -> Self {
        LinAcc { terms: Vec::new() }
    }

    pub fn push(&mut self, i: usize, c: Scalar) {
        if !c.is_zero() {
            self.terms.push((i, c));
        }
    }

    pub fn add_scaled(&mut self, v: &Lin, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v.terms() {
            self.terms.push((*i, x * c));
        }
    }

    pub fn add(&mut self, v: &Lin) {
        self.terms.extend(v.terms().iter().cloned());
    }

    pub fn finish(self) -> Lin {
        Lin::from_terms(self.terms)
    }
}
