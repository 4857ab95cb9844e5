//! Finite combinatorial homotopy theory: truncated cubical and simplicial
//! sets, skeleta and coskeleta, lifting problems, and discrete homotopy
//! theory of reflexive graphs.

pub mod error;
pub mod graph;
pub mod lifting;
pub mod nerve;
pub mod pi1;
pub mod presheaf;
pub mod site;
pub mod skeleta;

pub use error::{Error, Result};
