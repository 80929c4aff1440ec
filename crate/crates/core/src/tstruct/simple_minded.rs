use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::twisted::{minimalize, tw_cone, tw_hom, TwistedComplex};

/// Outcome of the budgeted search for the generators `e_i A` inside the extension closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generation {
    /// Every `e_i A` occurs, up to shift, as the minimal form of an iterated cone;
    /// `witnesses[i]` is the index of that object in the search log.
    Certified { witnesses: Vec<usize> },
    /// The budget ran out; `missing` lists the idempotents without a witness.
    Inconclusive { missing: Vec<usize> },
}

impl Generation {
    pub fn is_certified(&self) -> bool {
        matches!(self, Generation::Certified { .. })
    }
}

/// One object reached by the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStep {
    pub object: TwistedComplex,
    /// `None` for a shifted family member, else `(a, b, k)`: a cone of a map `a -> Σ^k b`.
    pub from: Option<(usize, usize, i64)>,
}

#[derive(Clone, Debug)]
pub struct SimpleMindedReport {
    /// `hom0[i][j] = dim H⁰ Hom(S_i, S_j)`.
    pub hom0: Vec<Vec<usize>>,
    pub a_holds: bool,
    /// `(i, j, t, dim)` with `t < 0` and `dim Hom(S_i, Σ^t S_j) ≠ 0`.
    pub b_violations: Vec<(usize, usize, i64, usize)>,
    pub b_holds: bool,
    pub generation: Generation,
    pub search: Vec<SearchStep>,
    pub cones_tried: usize,
}

/// Checks a family for scalar endomorphisms and orthogonality (a), vanishing negative
/// self-extensions (b), and searches for a generation certificate (c) using shifts in `window`
/// and at most `budget` cones.
pub fn check_simple_minded(family: &[TwistedComplex], window: (i64, i64), budget: usize) -> Result<SimpleMindedReport> {
    let Some(first) = family.first() else { return Err(Error::EmptyFamily) };
    let alg = first.algebra().clone();
    alg.require_class_p()?;
    if window.0 > window.1 {
        return Err(Error::EmptyRange);
    }
    let n = family.len();
    let mut hom0 = vec![vec![0; n]; n];
    let mut b_violations = Vec::new();
    for (i, si) in family.iter().enumerate() {
        for (j, sj) in family.iter().enumerate() {
            let h = tw_hom(si, sj)?;
            hom0[i][j] = h.homology_dim(0);
            if let Some((lo, _)) = h.complex.chain_support() {
                for t in lo..0 {
                    let d = h.homology_dim(t);
                    if d > 0 {
                        b_violations.push((i, j, t, d));
                    }
                }
            }
        }
    }
    let a_holds = (0..n).all(|i| (0..n).all(|j| hom0[i][j] == usize::from(i == j)));
    let b_holds = b_violations.is_empty();
    let (generation, search, cones_tried) = generation_search(family, window, budget)?;
    Ok(SimpleMindedReport { hom0, a_holds, b_violations, b_holds, generation, search, cones_tried })
}

struct Search {
    cap: usize,
    witnesses: Vec<Option<usize>>,
    steps: Vec<SearchStep>,
    queue: VecDeque<(usize, usize)>,
}

impl Search {
    fn push(&mut self, object: TwistedComplex, from: Option<(usize, usize, i64)>) {
        if object.is_empty() || object.len() > self.cap || self.steps.iter().any(|s| s.object == object) {
            return;
        }
        let m = self.steps.len();
        if let [c] = object.cells() {
            self.witnesses[c.idem].get_or_insert(m);
        }
        self.steps.push(SearchStep { object, from });
        for j in 0..=m {
            self.queue.push_back((m, j));
            if j != m {
                self.queue.push_back((j, m));
            }
        }
    }

    fn done(&self) -> bool {
        self.witnesses.iter().all(Option::is_some)
    }
}

fn generation_search(
    family: &[TwistedComplex],
    window: (i64, i64),
    budget: usize,
) -> Result<(Generation, Vec<SearchStep>, usize)> {
    let r = family[0].algebra().idempotent_count();
    let cap = family.iter().map(TwistedComplex::len).max().unwrap_or(1).max(2) * 2;
    let mut st = Search { cap, witnesses: vec![None; r], steps: Vec::new(), queue: VecDeque::new() };
    for member in family {
        st.push(minimalize(member).minimal, None);
    }
    let mut tried = 0;
    'outer: while let Some((a, b)) = st.queue.pop_front() {
        if st.done() {
            break;
        }
        for k in window.0..=window.1 {
            let source = st.steps[a].object.clone();
            let target = st.steps[b].object.shift(k);
            let h = tw_hom(&source, &target)?;
            for f in h.homology_basis(0) {
                if tried >= budget {
                    break 'outer;
                }
                tried += 1;
                let c = tw_cone(&source, &target, &f)?;
                st.push(minimalize(&c).minimal, Some((a, b, k)));
            }
        }
    }
    let generation = if st.done() {
        Generation::Certified { witnesses: st.witnesses.into_iter().flatten().collect() }
    } else {
        Generation::Inconclusive { missing: (0..r).filter(|&i| st.witnesses[i].is_none()).collect() }
    };
    Ok((generation, st.steps, tried))
}
