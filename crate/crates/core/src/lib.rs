//! Common basis complexes, Tits buildings and the Steinberg monoid, computed
//! exactly over the integers and prime fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactlin`]: canonical forms, Smith normal form, submodules.
//! * [`cbp`]: the common basis property, decided two independent ways.
//! * [`complexes`]: Tits buildings, split buildings, common basis complexes.
//! * [`homology`]: reduced integral homology via sparse elimination.
//! * [`simpmodel`]: the semi-simplicial models `D^{a,b}_n` and their product.
//! * [`steinberg`]: Steinberg modules, the bar complex and Tor.

pub mod error;
pub mod cbp;
pub mod complexes;
pub mod exactlin;
pub mod homology;
pub mod simpmodel;
pub mod steinberg;

pub use error::{Error, Result};
