//! Morphisms determined by objects for finite-dimensional quiver algebras
//! over prime fields.

pub mod algebra;
pub mod almost_split;
pub mod decompose;
pub mod determined;
pub mod error;
pub mod field;
pub mod gamma;
pub mod grass;
pub mod hom;
pub mod lattice;
pub mod limits;
pub mod matrix;
pub mod minimal;
pub mod module;
pub mod poly;
pub mod subspace;
pub mod universe;
pub mod workspace;

pub use algebra::{Arrow, Element, Path, PathAlgebra, Quiver, Relation};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use matrix::{Matrix, Rref};
pub use poly::Polynomial;
pub use subspace::Subspace;
pub use almost_split::{almost_split_sequence, end_mod_rad_compare, right_almost_split};
pub use decompose::{decompose, is_isomorphic, Decomposition};
pub use determined::{construct_determined, is_right_determined, CheckReport, DeterminedResult};
pub use gamma::{FhMethod, GammaModule};
pub use grass::{beilinson_injective, grassmannian_points, variety_points, VarietySpec};
pub use hom::{end_ring, factors_through, hom_basis, EndRing, FiniteRing, HomSpace};
pub use lattice::{LatticeMode, SubmoduleLattice};
pub use minimal::{minimal_presentation, right_minimal_reduce, MinimalPresentation, RightMinimal};
pub use module::{direct_sum, Module, Morphism};
pub use universe::{build_universe, Universe};
pub use workspace::{Workspace, WorkspaceFile};
