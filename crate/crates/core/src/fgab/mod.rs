//! Finitely generated abelian groups and their homomorphisms, in exact
//! arbitrary-precision arithmetic.

mod group;
mod hom;
mod lattice;
mod matrix;
mod snf;

pub use group::{FgAbGroup, Invariants};
pub use hom::{columns_vanish, is_exact, is_short_exact, ExactnessReport, GroupHom, Joint};
pub use lattice::Lattice;
pub use matrix::{bigvec, BigSeq, IntMatrix};
pub use snf::{kernel_basis, minor_gcd, snf, solve, solve_with, Snf};
