//! Exact scalar, polynomial, rational-function, and matrix arithmetic.

pub mod matrix;
pub mod poly;
pub mod quantum;
pub mod rational;

pub use matrix::RationalMatrix;
pub use poly::Poly;
pub use quantum::{QuantumRational, RayId};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
