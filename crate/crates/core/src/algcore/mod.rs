//! Quivers, presented algebras, preprojective algebras of type A and
//! modules given by action matrices.

mod algebra;
mod module;
mod preproj;
mod quiver;

pub use algebra::{
    algebra_check, catalog, dual_numbers, field_algebra, morita_ring, path_algebra_a2, same_structure_under,
    tensor_algebra, tensor_one_left, tensor_one_right, PresentedAlgebra, Sparse, CATALOG,
};
pub use module::{projective_module, AModule, ModMap};
pub use preproj::{
    preprojective_algebra, preprojective_of_quiver, preprojective_relations, quotient_path_algebra, Path,
    QuotientPathAlgebra, Relation,
};
pub use quiver::{double_quiver, Arrow, Quiver};
