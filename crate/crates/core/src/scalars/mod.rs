//! Exact scalars over Q and F_p, and the dense linear algebra built on them.

mod field;
mod matrix;

pub use field::{FieldSpec, Scalar};
pub use matrix::{complement, complement_coordinates, LinearSystem, Matrix, Rref};

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                let f = FieldSpec::Rationals;
                let rows = (0..r).map(|i| v[i * c..(i + 1) * c].iter().map(|&x| f.from_i64(x)).collect()).collect();
                Matrix::from_rows(f, rows).unwrap_or_else(|_| Matrix::zeros(f, r, c))
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let once = m.rref().reduced;
            prop_assert_eq!(once.rref().reduced, once);
        }

        #[test]
        fn rank_nullity(m in small_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().cols(), m.cols());
            prop_assert!(m.mul(&m.kernel_basis()).unwrap().is_zero());
        }

        #[test]
        fn solve_is_exact(m in small_matrix(), seed in proptest::collection::vec(-3i64..4, 5)) {
            let f = FieldSpec::Rationals;
            let x0 = Matrix::from_columns(f, m.cols(), &[seed[..m.cols()].iter().map(|&v| f.from_i64(v)).collect()]);
            let b = m.mul(&x0).unwrap();
            let x = m.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul(&x).unwrap(), b);
        }
    }
}
