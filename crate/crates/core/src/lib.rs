//! Exact h*-polynomials of lattice simplices via fundamental-parallelepiped
//! enumeration, and certified or empirical prefixes of Ehrhart limits.

pub mod algebra;
pub mod closedform;
pub mod combinators;
pub mod error;
pub mod fpp;
pub mod limits;
pub mod linalg;
pub mod oracle;
pub mod simplex;
pub mod verify;
