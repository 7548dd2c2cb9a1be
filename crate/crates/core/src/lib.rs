//! Jordan types of modules over elementary abelian p-groups, computed in exact
//! arithmetic over finite fields.
//!
//! A module is a tuple of pairwise commuting matrices `A_1..A_r` with
//! `A_i^p = 0`, standing for the generators `t_i = g_i - 1` of the group
//! algebra `k[t_1..t_r]/(t_i^p)`. The crate computes Jordan types at π-points
//! (linear combinations of the generators, optionally with higher terms),
//! decides constant Jordan type, and builds Heller shifts, cocycle kernels and
//! extensions.

pub mod carlson;
pub mod cjt;
pub mod error;
pub mod exactalg;
pub mod jordan;
pub mod modrep;
pub mod par;
pub mod polymat;
pub mod syzygy;
pub mod zoo;

pub use error::{Error, Result};
pub use jordan::{Dominance, JordanType};
pub use modrep::{Convention, ModuleHom, ModuleRep};
pub use polymat::{HomPoly, PolyMatrix, ZeroSearch};
