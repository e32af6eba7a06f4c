//! Photon-added coherent states superposed with thermal noise: closed-form
//! Fock matrix elements, photon statistics, channel capacity and Wigner
//! function, each paired with a brute-force oracle in [`oracle`].

pub mod error;
pub mod information;
pub mod oracle;
pub mod phase_space;
pub mod quadrature;
pub mod special_fn;
pub mod state;
pub mod statistics;

pub use error::{Result, SecstError, Warning};
pub use information::CapacityResult;
pub use phase_space::{MarginalMethod, MarginalValue, PhaseGrid, PhasePoint, PhaseSpaceConfig, WignerSurface};
pub use special_fn::ComplexValue;
pub use state::{DensityMatrix, SecstParams, StateConfig};
pub use statistics::{Distribution, QPoint, Threshold};
