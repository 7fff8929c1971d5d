//! Exact stability landscape of Dynkin and Euclidean quivers.

pub mod candecomp;
pub mod cli;
pub mod cone;
pub mod error;
pub mod homext;
pub mod intersections;
pub mod linalg;
pub mod oracle;
pub mod quiver;
pub mod regular;
pub mod stability;
pub mod svg;
pub mod tube;

pub use error::{Error, Result};
pub use quiver::{Class, DimVec, EulerContext, Quiver};
