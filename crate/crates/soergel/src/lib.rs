//! Exact computations around Hecke algebras, Kazhdan–Lusztig bases, Soergel
//! modules and their Hodge theory, for small Coxeter systems.

pub mod coxeter;
pub mod field;
pub mod graded;
pub mod hecke;
pub mod hodge;
pub mod linalg;
pub mod polyalg;
pub mod rouquier;
pub mod soergel;

pub use field::{QuadExt, Rational, Scalar, Q2, Q3, Q5};

pub type RationalSystem = coxeter::CoxeterSystem<Rational>;
pub type Q5System = coxeter::CoxeterSystem<Q5>;
pub type RationalContext = soergel::SoergelContext<Rational>;
pub type Q5Context = soergel::SoergelContext<Q5>;
