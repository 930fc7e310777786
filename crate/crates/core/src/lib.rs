pub mod automorphism;
pub mod certificate;
pub mod divided_power;
pub mod error;
pub mod field;
pub mod grading;
pub mod group;
pub mod intmat;
pub mod json;
pub mod linalg;
pub mod melikyan;
pub mod structure;
pub mod report;
pub mod suite;
pub mod twist;
pub mod witt;

pub use error::{Error, Result};
pub use field::{Fq, GaloisField};
