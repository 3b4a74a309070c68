pub mod cayley;
pub mod check;
pub mod cli;
pub mod conjectures;
pub mod corpus;
pub mod error;
pub mod harnack;
pub mod index_set;
pub mod linalg;
pub mod report;

pub use check::Settings;
pub use error::{Error, Result};
pub use index_set::IndexSet;
pub use linalg::{Complex, ComplexMatrix};
