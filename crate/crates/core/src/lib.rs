//! Exact computations around real topological Hochschild homology: the
//! zeroth homotopy Mackey functor of rings with trivial involution, dihedral
//! nerve combinatorics, and chain-level cube assemblies for projective spaces.

pub mod acceptance;
pub mod cubes;
pub mod dihedral;
pub mod error;
pub mod fgab;
pub mod homology;
pub mod involutive_algebra;
pub mod mackey;
pub mod thr_pi0;

pub use error::{Error, Result};
pub use fgab::{FgAbGroup, GroupHom, IntMatrix, Invariants};
pub use involutive_algebra::{AffineMonoid, InvolutiveRing, MonoidElement, RingHom, WeightMap};
pub use mackey::{MackeyHom, MackeyModule, MackeyZ2};
