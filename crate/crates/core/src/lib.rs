pub mod bounds;
pub mod census;
pub mod cli;
pub mod error;
pub mod gf;
pub mod maxarc;
pub mod num;
pub mod plane;
pub mod pointset;
pub mod randlab;
pub mod sets;

/// Crate version, echoed in every report header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use plane::{Collineation, Line, PlaneKind, PlaneModel, Point};
pub use pointset::PointSet;
