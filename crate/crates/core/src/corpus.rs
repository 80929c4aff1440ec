//! The shipped example algebras.

use std::sync::Arc;

use crate::dg::{AlgebraBuilder, DgAlgebra, Lin};
use crate::error::Result;
use crate::scalars::FieldSpec;
use crate::twisted::{Cell, TwistedComplex};

/// `Λ = k[x]/(x²)` with `deg x = 1` and `d = 0`.
pub fn lambda(field: FieldSpec) -> Arc<DgAlgebra> {
    Arc::new(
        AlgebraBuilder::new(field)
            .idempotent("e")
            .element("x", 1, 0, 0)
            .build()
            .expect("corpus algebra"),
    )
}

/// `A₂` on `e; u, v; w` with `deg u = deg v = 1`, `deg w = 2`, `d u = w` and all products of
/// positive-degree elements zero.
pub fn a2(field: FieldSpec) -> Arc<DgAlgebra> {
    Arc::new(
        AlgebraBuilder::new(field)
            .idempotent("e")
            .element("u", 1, 0, 0)
            .element("v", 1, 0, 0)
            .element("w", 2, 0, 0)
            .differential("u", &[("w", 1)])
            .build()
            .expect("corpus algebra"),
    )
}

/// `k^r`: `r` orthogonal idempotents and nothing else.
pub fn semisimple(field: FieldSpec, r: usize) -> Arc<DgAlgebra> {
    let mut b = AlgebraBuilder::new(field);
    for i in 1..=r {
        b = b.idempotent(&format!("e{i}"));
    }
    Arc::new(b.build().expect("corpus algebra"))
}

/// The dual numbers `K = k[ε]`, `deg ε = 0`, `ε² = 0`. A valid dg algebra that is not class P.
pub fn dual_numbers(field: FieldSpec) -> Arc<DgAlgebra> {
    Arc::new(
        AlgebraBuilder::new(field)
            .idempotent("e")
            .element("eps", 0, 0, 0)
            .build()
            .expect("corpus algebra"),
    )
}

/// Graded path algebra of the quiver `1 ⇄ 2` with arrows `a: 1 -> 2`, `b: 2 -> 1` of degree 1,
/// modulo `ab = 0`; the only nonzero length-two path is `ba` at vertex 1.
pub fn quiver(field: FieldSpec) -> Arc<DgAlgebra> {
    Arc::new(
        AlgebraBuilder::new(field)
            .idempotent("e1")
            .idempotent("e2")
            .element("a", 1, 0, 1)
            .element("b", 1, 1, 0)
            .element("ba", 2, 0, 0)
            .product("b", "a", &[("ba", 1)])
            .build()
            .expect("corpus algebra"),
    )
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 6] = ["lambda", "a2", "k1", "k2", "dual", "quiver"];

/// The class P members of the corpus, by name.
pub const CLASS_P: [&str; 5] = ["lambda", "a2", "k1", "k2", "quiver"];

pub fn by_name(name: &str, field: FieldSpec) -> Option<Arc<DgAlgebra>> {
    Some(match name {
        "lambda" => lambda(field),
        "a2" => a2(field),
        "k1" => semisimple(field, 1),
        "k2" => semisimple(field, 2),
        "dual" => dual_numbers(field),
        "quiver" => quiver(field),
        _ => return None,
    })
}

/// Over `Λ`: two cells at shift 0 joined by `x`, the non-split extension of the simple by itself.
pub fn m_x(lambda: &Arc<DgAlgebra>) -> Result<TwistedComplex> {
    let f = lambda.field();
    let x = lambda.index_of("x").expect("lambda has x");
    TwistedComplex::new(lambda.clone(), vec![Cell::new(0, 0), Cell::new(0, 0)], vec![(0, 1, Lin::basis(x, f))])
}

/// Over `K`: `Σ e K -> e K` by `ε`, the cone of multiplication by `ε`.
///
/// Its homology is `k` in degrees `-1` and `0`. Every twisted complex over `K` has even Euler
/// characteristic, one cell contributing `± dim eK = ± 2`, while the natural truncation
/// `τ_{≥0} cone(ε) = k` has Euler characteristic `1`; so `τ_{≥0}` does not preserve perfect
/// objects over `K`.
///
/// ```
/// use dgforge_core::corpus::{cone_eps, dual_numbers};
/// use dgforge_core::dg::{homology, ModuleBuilder};
/// use dgforge_core::sample::Sampler;
/// use dgforge_core::scalars::FieldSpec;
///
/// let chi = |h: &dgforge_core::dg::HomologyTable| -> i64 {
///     h.rows().iter().map(|(p, d)| (-1i64).pow(p.rem_euclid(2) as u32) * d.iter().sum::<usize>() as i64).sum()
/// };
/// let k = dual_numbers(FieldSpec::Rationals);
/// let c = homology(&cone_eps(&k)?.realize().module);
/// assert_eq!((c.total(-1), c.total(0), c.total_dim()), (1, 1, 2));
///
/// let mut s = Sampler::new(&k, 7);
/// for _ in 0..20 {
///     assert_eq!(chi(&homology(&s.twisted(4, -2, 2).realize().module)) % 2, 0);
/// }
/// let top = ModuleBuilder::new(&k).element("h", 0, 0).build()?;
/// assert_eq!(chi(&homology(&top)), 1);
/// # Ok::<(), dgforge_core::Error>(())
/// ```
pub fn cone_eps(dual: &Arc<DgAlgebra>) -> Result<TwistedComplex> {
    let f = dual.field();
    let eps = dual.index_of("eps").expect("dual numbers have eps");
    TwistedComplex::new(dual.clone(), vec![Cell::new(0, 1), Cell::new(0, 0)], vec![(0, 1, Lin::basis(eps, f))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_validates_and_classifies() {
        let q = FieldSpec::Rationals;
        for name in NAMES {
            let a = by_name(name, q).unwrap();
            assert!(a.report().is_valid(), "{name}: {:?}", a.report().violations);
            assert_eq!(a.is_class_p(), CLASS_P.contains(&name), "{name}");
        }
        let f3 = FieldSpec::prime(3).unwrap();
        for name in NAMES {
            assert!(by_name(name, f3).unwrap().report().is_valid());
        }
        assert!(by_name("nope", q).is_none());
    }

    #[test]
    fn dual_numbers_fail_class_p_for_the_degree_zero_part() {
        let k = dual_numbers(FieldSpec::Rationals);
        assert!(!k.is_class_p());
        assert!(k.report().class_p_failures.iter().any(|s| s.contains("degree-0")));
    }
}
