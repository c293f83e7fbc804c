pub mod affine_roots;
pub mod affine_weyl;
pub mod characters;
pub mod cli;
pub mod error;
pub mod finite_cartan;
pub mod highest_weight_modules;
pub mod lattice;
pub mod linalg;
pub mod loop_algebra;
pub mod nilpotent_cohomology;
pub mod rational;
pub mod weight_module;
