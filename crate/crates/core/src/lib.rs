//! Exact discrete and classical mixed volumes, regular mixed subdivisions,
//! and tropical root counts.

pub mod cli;
pub mod decomposition;
pub mod direction;
pub mod error;
pub mod family;
pub mod gen;
pub mod hull;
pub mod instance;
pub mod linalg;
pub mod mixedvolume;
pub mod oracle;
pub mod point;
pub mod polytope;
pub mod quotient;
pub mod rational;
pub mod report;
pub mod subdivision;
pub mod tropical;

pub use error::{Error, Result};
pub use point::{minkowski_sum, ExactPoint, Support};
pub use polytope::Polytope;
pub use rational::Rational;
