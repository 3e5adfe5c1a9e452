//! Density-matrix evolution of one vibrational mode coupled to a Stokes and
//! an anti-Stokes photon mode, with phonon relaxation.

mod density;
mod fock;
mod integrator;
mod model;
mod observables;
mod scan;

pub use density::{
    single_mode_coherent, single_mode_fock, single_mode_thermal, DensityOperator, HERMITICITY_TOL,
    POSITIVITY_TOL, TRACE_TOL,
};
pub use fock::{Mode, SparseOp, TripartiteBasis, C64};
pub use integrator::{automatic_step, evolve, EvolveOptions, Liouvillian, Trajectory};
pub use model::{build_hamiltonian, jump_operators, ModelConfig};
pub use observables::{g2_auto, g2_cross, PhotonMoments};
pub use scan::{is_near_resonance, scan_resonance, simulate_point, ScanCurve, ScanFlags, ScanOptions, ScanPoint, ScanResult};
