//! Twisted complexes over the summands `e_i A`: the model of perfect objects.

mod complex;
mod hom;
mod minimal;
mod resolve;

pub use complex::{tw_cone, Cell, Realization, TwMap, TwistedComplex};
pub use hom::{hom_homology, hom_module, pullback_matrix, tw_hom, CochainComplex, ModuleHom, TwHom};
pub use minimal::{minimal_form, minimalize, minimalize_with, Minimalization, PivotOrder};
pub use resolve::{resolve, FiberReport, Resolution};
