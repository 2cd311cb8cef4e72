pub mod algebra;
pub mod branch;
pub mod coherent;
pub mod decomposition;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod representations;
pub mod sample;
pub mod verify;

pub use error::{FermiError, Result};
