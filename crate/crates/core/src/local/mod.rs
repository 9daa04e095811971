//! The local r-orbi-conifold chart: twisted sectors, Chen-Ruan classes and products,
//! moduli dimensions, and orbifold Gromov-Witten three-point functions.

pub mod class;
pub mod gw;
pub mod model;
pub mod product;
pub mod three_point;

pub use class::{cr_basis, degree_shifting, twisting_factor, BasisLabel, CRClass, Point, TwistedSector};
pub use gw::{gw_invariant, gw_three_point, gw_twisted, moduli_nonempty, virtual_dimension};
pub use model::{valid_weights, validate_model, LocalModel, Side};
pub use product::{basis_product, cr_product, product_table};
pub use three_point::{cr_three_point_twisted, quantum_three_point, ClassicalPart, ThreePoint};
