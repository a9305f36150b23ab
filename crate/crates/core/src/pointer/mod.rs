//! Premeasurement states, apparatus-basis rebasing, packet spreading and
//! detector fact sequences.

mod detector;
mod joint;
mod spreading;

pub(crate) use detector::check_parameters as check_detector_parameters;
pub use detector::{detector_click_simulation, detector_ensemble, ks_statistic, DetectorEnsemble, Fact, FactSequence};
pub use joint::{pointer_basis_select, premeasurement_joint, rebase_joint, JointState, RebasedDecomposition};
pub use spreading::{fuzziness_resolvable, spreading_sigma, SpreadingModel};
