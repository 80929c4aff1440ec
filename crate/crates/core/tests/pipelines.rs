//! End-to-end checks across modules, each against the reference computations in `common`.

mod common;

use std::sync::Arc;

use common::{hom_to_module_dim, homology};
use dgforge_core::corpus;
use dgforge_core::dg::{is_quasi_iso, DgAlgebra, DgModule};
use dgforge_core::sample::Sampler;
use dgforge_core::scalars::FieldSpec;
use dgforge_core::tstruct::{koszul_fiber_functor, les_check, t_truncate};
use dgforge_core::twisted::{minimalize, resolve, tw_hom, TwMap};
use dgforge_core::weight::{derived_hom_windowed, simple_module, weight_truncate, Verification};

fn class_p(field: FieldSpec) -> Vec<Arc<DgAlgebra>> {
    corpus::CLASS_P.iter().map(|n| corpus::by_name(n, field).unwrap()).collect()
}

fn fields() -> [FieldSpec; 2] {
    [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()]
}

#[test]
fn exact_derived_hom_rows_match_a_finished_resolution() {
    let mut checked = 0;
    for alg in class_p(FieldSpec::Rationals) {
        let mut s = Sampler::new(&alg, 17);
        for _ in 0..15 {
            let m = Arc::new(s.module(10));
            let y = Arc::new(s.module(10));
            let res = resolve(&m, 40).unwrap();
            if !res.report.acyclic {
                continue;
            }
            assert_eq!(homology(&res.complex.realize().module), homology(&m));
            let table = derived_hom_windowed(&m, &y, (-4, 4), 40).unwrap();
            for row in &table.rows {
                let oracle = hom_to_module_dim(&res.complex, &y, row.degree);
                if row.verification.is_verified() {
                    assert_eq!(row.dim, oracle, "degree {}", row.degree);
                }
                if row.verification == Verification::APrioriZero {
                    assert_eq!(oracle, 0);
                }
            }
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} resolutions finished");
}

#[test]
fn simple_self_extensions_of_the_exterior_algebra() {
    let lambda = corpus::lambda(FieldSpec::Rationals);
    let s = Arc::new(simple_module(&lambda, 0).unwrap());
    for budget in [3, 6] {
        let table = derived_hom_windowed(&s, &s, (-3, 2), budget).unwrap();
        let res = resolve(&s, budget).unwrap();
        for n in -3..0 {
            let row = table.row(n).unwrap();
            assert_eq!((row.dim, row.verification), (0, Verification::Exact));
        }
        let zero = table.row(0).unwrap();
        assert_eq!(zero.dim, hom_to_module_dim(&res.complex, &s, 0));
        assert_eq!(zero.dim, budget);
        assert_eq!(zero.verification, Verification::Unverified);
        for n in 1..=2 {
            assert_eq!(table.row(n).unwrap().verification, Verification::APrioriZero);
        }
    }
}

#[test]
fn koszul_fiber_matches_direct_hom_into_simples() {
    for field in fields() {
        for alg in class_p(field) {
            let r = alg.idempotent_count();
            let simples: Vec<DgModule> = (0..r).map(|i| simple_module(&alg, i).unwrap()).collect();
            let mut s = Sampler::new(&alg, 23);
            for _ in 0..20 {
                let base = s.twisted(4, -2, 2);
                let x = s.with_contractible_pairs(&base, 2, -1, 1);
                let f = koszul_fiber_functor(&x).unwrap();
                assert!(f.matches_minimal_cells && f.aisle_consistent);
                if field != FieldSpec::Rationals {
                    continue;
                }
                for p in -4..=4 {
                    for (i, si) in simples.iter().enumerate() {
                        assert_eq!(f.table.at(p, i), hom_to_module_dim(&x, si, p));
                    }
                }
            }
        }
    }
}

#[test]
fn cone_triangles_give_exact_t_homology_sequences() {
    for alg in class_p(FieldSpec::Rationals) {
        let r = alg.idempotent_count();
        let simples: Vec<DgModule> = (0..r).map(|i| simple_module(&alg, i).unwrap()).collect();
        let mut s = Sampler::new(&alg, 29);
        for _ in 0..15 {
            let x = s.twisted(3, -1, 1);
            let y = s.twisted(3, -1, 1);
            let h = tw_hom(&x, &y).unwrap();
            let basis = h.homology_basis(0);
            let f = basis.iter().fold(TwMap::zero(&x, &y, 0), |acc, g| acc.add(&g.scale(&s.coef())));
            let report = les_check(&x, &y, &f).unwrap();
            assert!(report.exact && report.lengths_match_cells);
            let minimal = minimalize(&report.cone).minimal;
            for row in &report.rows {
                let oracle: usize = simples.iter().map(|si| hom_to_module_dim(&report.cone, si, -row.degree)).sum();
                let cells = minimal.cells().iter().filter(|c| c.shift == -row.degree).count();
                assert_eq!(row.cone, oracle);
                assert_eq!(row.cone, cells);
            }
        }
    }
}

#[test]
fn realized_perfect_modules_and_their_t_truncations() {
    for alg in class_p(FieldSpec::Rationals) {
        let mut s = Sampler::new(&alg, 31);
        for _ in 0..20 {
            let x = s.twisted(4, -2, 2);
            let real = x.realize().module;
            if let Some(top) = real.max_degree() {
                let t = weight_truncate(&real, top).unwrap();
                assert!(is_quasi_iso(&t.projection));
            }
            for n in -2..=2 {
                let t = t_truncate(&x, n).unwrap();
                assert!(t.x_le.cells().iter().all(|c| c.shift >= -n));
                assert!(t.x_gt.cells().iter().all(|c| c.shift < -n));
                assert_eq!(t.x_le.len() + t.x_gt.len(), minimalize(&x).minimal.len());
            }
        }
    }
}
