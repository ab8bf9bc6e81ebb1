//! Exact linear algebra over the integers and prime fields.

mod echelon;
mod lattice;
mod matrix;
mod ring;
mod submodule;

pub use echelon::{echelon, left_kernel, rank, snf, Echelon};
pub(crate) use echelon::snf_dense;
pub use lattice::{FieldLattice, LATTICE_CAP};
pub use matrix::Matrix;
pub use ring::Ring;
pub use submodule::{inverse_unimodular, Submodule};

/// Canonical form of the submodule generated by the rows of `generators`.
pub fn canonicalize(generators: &Matrix) -> Submodule {
    Submodule::canonicalize(generators)
}
