//! Pre- and post-selected measurement contexts for finite-dimensional
//! quantum systems: ABL probabilities, sampled measurement chains,
//! premeasurement pointer analysis and detector fact sequences.

pub mod context;
pub mod error;
pub mod kinematics;
pub mod linalg;
pub mod pointer;
pub mod random;
pub mod scenario;
pub mod tolerance;

pub use error::{Error, Result};
pub use kinematics::{OutcomeDistribution, ProjectiveDecomposition, StateVector};
pub use linalg::{ComplexMatrix, HermitianOperator, Projector, UnitaryMap};
