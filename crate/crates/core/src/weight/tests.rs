use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::corpus;
use crate::dg::{cone, direct_sum, shift, DgModule, ModuleMap};
use crate::oracle;
use crate::sample::Sampler;
use crate::scalars::FieldSpec;
use crate::twisted::{hom_module, TwistedComplex};

const Q: FieldSpec = FieldSpec::Rationals;

fn names(m: &DgModule) -> Vec<&str> {
    m.basis().iter().map(|b| b.name.as_str()).collect()
}

fn totals(m: &DgModule) -> BTreeMap<i64, usize> {
    oracle::homology_totals(m)
}

fn lambda_s() -> (Arc<crate::dg::DgAlgebra>, Arc<DgModule>) {
    let l = corpus::lambda(Q);
    let (s, _) = s_a(&l).unwrap();
    (l, s)
}

#[test]
fn s_a_examples() {
    let (_, s) = lambda_s();
    assert_eq!(names(&s), vec!["e"]);
    assert_eq!(totals(&s), BTreeMap::from([(0, 1)]));

    let k2 = corpus::semisimple(Q, 2);
    let (s, _) = s_a(&k2).unwrap();
    assert_eq!(s.dim(), 2);

    let a = corpus::a2(Q);
    let (s, _) = s_a(&a).unwrap();
    assert_eq!(names(&s), vec!["e"]);
    let t = weight_truncate(&Arc::new(DgModule::regular(&a)), 0).unwrap();
    assert_eq!(names(&t.sigma_gt), vec!["u", "v", "w"]);
    assert_eq!(totals(&t.sigma_gt), BTreeMap::from([(1, 1)]));

    assert!(matches!(s_a(&corpus::dual_numbers(Q)), Err(crate::Error::NotClassP(_))));
    assert_eq!(simple_module(&a, 0).unwrap().dim(), 1);
}

#[test]
fn membership_examples() {
    let (l, s) = lambda_s();
    let reg = Arc::new(DgModule::regular(&l));
    assert_eq!(w_membership(&reg, 0).unwrap(), WMembership::Neither);
    let t = weight_truncate(&reg, 0).unwrap();
    assert_eq!(w_membership(&t.sigma_gt, 0).unwrap(), WMembership::GtP);
    assert_eq!(w_membership(&s, 0).unwrap(), WMembership::LeP);
    assert_eq!(w_membership(&DgModule::zero(l), 0).unwrap(), WMembership::Both);
}

#[test]
fn truncate_lambda_at_zero() {
    let (l, s) = lambda_s();
    let reg = Arc::new(DgModule::regular(&l));
    let t = weight_truncate(&reg, 0).unwrap();
    assert_eq!(names(&t.sigma_gt), vec!["x"]);
    assert_eq!(names(&t.sigma_le), vec!["e"]);
    assert_eq!(*t.sigma_le, *s);
    assert_eq!(t.sigma_gt.degree(0), 1);
    assert_eq!(crate::dg::homology(&t.sigma_gt), crate::dg::homology(&shift(&s, -1)));
    assert!(t.certificates.all_hold());
}

#[test]
fn truncate_a2_at_one() {
    let a = corpus::a2(Q);
    let reg = Arc::new(DgModule::regular(&a));
    let t = weight_truncate(&reg, 1).unwrap();
    assert_eq!(names(&t.sigma_gt), vec!["u", "w"]);
    assert!(totals(&t.sigma_gt).is_empty());
    assert_eq!(names(&t.sigma_le), vec!["e", "v"]);
    assert_eq!(totals(&t.sigma_le), BTreeMap::from([(0, 1), (1, 1)]));
}

#[test]
fn truncation_above_the_top_is_a_quasi_iso() {
    let a = corpus::quiver(Q);
    let mut s = Sampler::new(&a, 3);
    for _ in 0..10 {
        let x = Arc::new(s.module(20));
        let top = crate::dg::homology(&x).support().map_or(0, |s| s.1);
        for p in [top, top + 1, top + 3] {
            let t = weight_truncate(&x, p).unwrap();
            assert!(crate::dg::is_quasi_iso(&t.projection));
        }
    }
}

#[test]
fn filtration_examples() {
    let a = corpus::a2(Q);
    let reg = Arc::new(DgModule::regular(&a));
    let f = weight_filtration(&reg).unwrap();
    assert!(f.is_nested());
    let layers: Vec<(i64, Vec<usize>)> = f.nontrivial_layers().map(|l| (l.degree, l.multiplicities.clone())).collect();
    assert_eq!(layers, vec![(0, vec![1]), (1, vec![1])]);
    assert!(f.layers.iter().all(|l| l.concentrated));

    let (l, s) = lambda_s();
    let f = weight_filtration(&s).unwrap();
    assert_eq!(f.nontrivial_layers().map(|l| l.degree).collect::<Vec<_>>(), vec![0]);

    let sum = Arc::new(direct_sum(&[&shift(&s, -3), &s]).unwrap());
    let f = weight_filtration(&sum).unwrap();
    assert_eq!(f.nontrivial_layers().map(|l| l.degree).collect::<Vec<_>>(), vec![0, 3]);
    assert_eq!(f.total_homology(1), crate::dg::homology(&sum));
    assert!(weight_filtration(&Arc::new(DgModule::zero(l))).unwrap().layers.is_empty());
}

#[test]
fn simple_witness_examples() {
    let (l, s) = lambda_s();
    let w = simple_witness(&s).unwrap();
    assert_eq!(w.multiplicities, vec![1]);
    assert!(w.truncation_is_quasi_iso && w.comparison_is_quasi_iso);

    let reg = Arc::new(DgModule::regular(&l));
    let contractible = cone(&ModuleMap::identity(&reg)).unwrap().module;
    let x = Arc::new(direct_sum(&[&s, &contractible]).unwrap());
    let w = simple_witness(&x).unwrap();
    assert_eq!(w.multiplicities, vec![1]);

    let mx = Arc::new(corpus::m_x(&l).unwrap().realize().module.as_ref().clone());
    assert!(matches!(simple_witness(&mx), Err(crate::Error::NotConcentrated)));
}

#[test]
fn derived_hom_out_of_a_projective_is_homology() {
    let a = corpus::quiver(Q);
    let mut s = Sampler::new(&a, 11);
    for i in 0..2 {
        let p = Arc::new(DgModule::projective(&a, i));
        let y = Arc::new(s.module(15));
        let hy = crate::dg::homology(&y);
        let t = derived_hom_windowed(&p, &y, (-3, 4), 3).unwrap();
        assert_eq!(t.resolution.cells, 1);
        for r in &t.rows {
            assert!(r.verification.is_verified());
            assert_eq!(r.dim, hy.at(r.degree, i), "degree {}", r.degree);
        }
    }
}

#[test]
fn derived_endomorphisms_of_the_simple_over_lambda() {
    let (_, s) = lambda_s();
    for b in [2, 3, 5] {
        let t = derived_hom_windowed(&s, &s, (-3, 2), b).unwrap();
        for n in -3..0 {
            let r = t.row(n).unwrap();
            assert_eq!((r.dim, r.verification), (0, Verification::Exact), "n = {n}");
        }
        let r0 = t.row(0).unwrap();
        assert_eq!(r0.verification, Verification::Unverified);
        assert_eq!(r0.dim, b);
        for n in 1..=2 {
            assert_eq!(t.row(n).unwrap().verification, Verification::APrioriZero);
        }
        assert_eq!(t.verified_ranges(), vec![(-3, -1), (1, 2)]);
    }
    assert!(matches!(derived_hom_windowed(&s, &s, (1, 0), 2), Err(crate::Error::EmptyRange)));
}

#[test]
fn negative_degree_homs_need_not_vanish_with_a_degree_two_generator() {
    // k[y]/(y²) with deg y = 2: Hom(S, Σ^{-1} S) ≠ 0, so no floor below zero is valid
    let a = Arc::new(
        crate::dg::AlgebraBuilder::new(Q).idempotent("e").element("y", 2, 0, 0).build().unwrap(),
    );
    let (s, _) = s_a(&a).unwrap();
    let t = derived_hom_windowed(&s, &s, (-2, 0), 4).unwrap();
    for n in -2..=0 {
        let r = t.row(n).unwrap();
        assert_eq!((r.dim, r.verification), (1, Verification::Exact), "n = {n}");
    }
}

fn class_p(which: usize) -> Arc<crate::dg::DgAlgebra> {
    corpus::by_name(corpus::CLASS_P[which], Q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn truncation_certificates_and_multiplicities(seed in any::<u64>(), which in 0usize..5) {
        let a = class_p(which);
        let mut s = Sampler::new(&a, seed);
        let x = Arc::new(s.module(24));
        let h = oracle::homology(&x);
        let (lo, hi) = (x.min_degree().unwrap_or(0), x.max_degree().unwrap_or(0));
        for p in lo - 1..=hi + 1 {
            let t = weight_truncate(&x, p).unwrap();
            prop_assert!(t.certificates.all_hold());
            for &(q, _) in h.keys() {
                let side = if q > p { &t.sigma_gt } else { &t.sigma_le };
                let (hs, hx) = (oracle::homology_totals(side), oracle::homology_totals(&x));
                prop_assert_eq!(hs.get(&q), hx.get(&q));
            }
        }
        let f = weight_filtration(&x).unwrap();
        prop_assert!(f.is_nested());
        for layer in &f.layers {
            prop_assert!(layer.concentrated);
            for (i, &m) in layer.multiplicities.iter().enumerate() {
                prop_assert_eq!(m, h.get(&(layer.degree, i)).copied().unwrap_or(0));
            }
        }
    }

    #[test]
    fn truncation_commutes_with_sums_and_shifts(seed in any::<u64>(), which in 0usize..5, p in -2i64..3, q in -2i64..3) {
        let a = class_p(which);
        let mut s = Sampler::new(&a, seed);
        let x = Arc::new(s.module(12));
        let y = Arc::new(s.module(12));
        let sum = Arc::new(direct_sum(&[&x, &y]).unwrap());
        let lhs = weight_truncate(&sum, p).unwrap().sigma_le;
        let tx = weight_truncate(&x, p).unwrap().sigma_le;
        let ty = weight_truncate(&y, p).unwrap().sigma_le;
        prop_assert_eq!(&*lhs, &direct_sum(&[&tx, &ty]).unwrap());

        let shifted = Arc::new(shift(&x, q));
        let lhs = weight_truncate(&shifted, p).unwrap().sigma_le;
        let rhs = shift(&weight_truncate(&x, p + q).unwrap().sigma_le, q);
        prop_assert_eq!(&*lhs, &rhs);
    }

    #[test]
    fn weight_orthogonality(seed in any::<u64>(), which in 0usize..5, p in -1i64..2) {
        let a = class_p(which);
        let mut s = Sampler::new(&a, seed);
        // cells Σ^n e_i A with n < -p have homology in degrees > p
        let x = s.twisted(4, -p - 3, -p - 1);
        prop_assert!(crate::dg::homology(&x.realize().module).rows().keys().all(|&q| q > p));
        let y = Arc::new(s.module(16));
        let y_le = weight_truncate(&y, p).unwrap().sigma_le;
        prop_assert_eq!(hom_module(&x, &y_le).unwrap().homology_dim(0), 0);
    }

    #[test]
    fn simple_witness_on_degree_zero_objects(seed in any::<u64>(), which in 0usize..5) {
        let a = class_p(which);
        let mut s = Sampler::new(&a, seed);
        let x = Arc::new(s.module(20));
        let t = weight_truncate(&x, 0).unwrap().sigma_le;
        let t = weight_truncate(&t, -1).unwrap().sigma_gt;
        let w = simple_witness(&t).unwrap();
        let h = crate::dg::homology(&t);
        for (i, &m) in w.multiplicities.iter().enumerate() {
            prop_assert_eq!(m, h.at(0, i));
        }
    }
}

#[test]
fn twisted_heart_objects_have_witnesses() {
    let l = corpus::lambda(Q);
    let x = TwistedComplex::cell(&l, 0, 0);
    let m = x.realize().module;
    let t = weight_truncate(&m, 0).unwrap();
    assert_eq!(simple_witness(&t.sigma_le).unwrap().multiplicities, vec![1]);
}
