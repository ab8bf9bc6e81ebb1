//! Simplicial complexes: Tits buildings, split buildings, common basis
//! complexes, higher buildings, and the Morse decomposition checker.

mod buildings;
mod complex;
mod enumerate;
mod morse;

pub use buildings::{
    collection_ids, common_basis_complex, common_basis_complex_in, higher_tits, higher_tits_in, is_simplex_over_z,
    simplex_to_splitting, split_tits, split_tits_in, splitting_pairs, splitting_to_simplex, tits, tits_in,
};
pub use complex::{Caps, SimplicialComplex, VertexLabel, DEFAULT_MAX_SIMPLICES, DEFAULT_MAX_VERTICES};
pub use morse::{morse_check, morse_check_with, random_morse_input, MorseInstance};
