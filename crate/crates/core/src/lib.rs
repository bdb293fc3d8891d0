//! Z2 homology of finite Grassmannian posets, trigonometric root structure,
//! symmetric products of the circle and a discrete pinch-off descent model.

pub mod cli;
pub mod complex;
pub mod descent;
pub mod error;
pub mod family;
pub mod gf2;
pub mod grassmann;
pub mod homology;
pub mod linkhom;
pub mod oracle;
pub mod poset;
pub mod symprod;
pub mod trigpoly;
pub mod verify;

pub use error::{Error, Result};
