//! Finite-dimensional dg algebras, right dg modules and chain maps.

mod algebra;
mod lin;
mod map;
mod module;
mod ops;

pub use algebra::{validate_algebra, AlgebraBasisElem, AlgebraBuilder, DgAlgebra, ValidationReport};
pub use lin::{Lin, LinAcc};
pub use map::{diff_matrix_full, ModuleMap};
pub use module::{homology, homology_representatives, DgModule, HomologyTable, ModuleBasisElem, ModuleBuilder};
pub use ops::{
    cone, cone_sequence_is_exact, direct_sum, homology_of_sum, indecomposable_summands, induced_rank, is_quasi_iso,
    chain_map_coordinates, chain_maps, coordinate_quotient, coordinate_submodule, null_homotopy, quotient, shift,
    submodule, Cone, Summand,
};

#[cfg(test)]
mod tests;
