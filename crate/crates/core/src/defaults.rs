//! Physics and run defaults, in one place.
//!
//! | quantity                    | value        | unit    |
//! |-----------------------------|--------------|---------|
//! | discretization threshold    | 0.02         | rel.    |
//! | default linewidth           | 2 x spacing  | cm^-1   |
//! | temperature                 | 295          | K       |
//! | second radiation constant   | 1.4388       | cm K    |
//! | Fock truncation per mode    | 3            |         |
//! | laser intensity / scale     | 1            |         |
//! | SaS self-contribution       | 1e-4         |         |
//! | band width                  | 100          | cm^-1   |
//! | low-signal background floor | 1e-8         | cm^-1   |
//! | band quadrature nodes       | 65           |         |
//! | Lindblad step bound         | 0.08         |         |

pub const THRESHOLD: f64 = 0.02;
pub const DEFAULT_GAMMA_SPACINGS: f64 = 2.0;
pub const TEMPERATURE_K: f64 = 295.0;
pub const C2_CM_K: f64 = 1.4388;
pub const N_MAX: usize = 3;
pub const LASER_INTENSITY: f64 = 1.0;
pub const SAS_FEEDBACK: f64 = 1e-4;
pub const BAND_WIDTH: f64 = 100.0;
pub const LOW_SIGNAL_FLOOR: f64 = 1e-8;
pub const QUADRATURE_NODES: usize = 65;
/// Target value of `dt * (|H| + gamma1)` when the step is chosen automatically.
pub const STEP_BOUND: f64 = 0.08;
/// Hard limit of `dt * (|H| + gamma1)`.
pub const STEP_LIMIT: f64 = 0.1;
/// Coupling used by the simulation engine when none is given, cm^-1.
pub const COUPLING: f64 = 0.1;
/// Phonon lifetime used when none is given, 1/cm^-1.
pub const T1: f64 = 0.5;
/// Evolution time used when none is given, 1/cm^-1.
pub const PULSE_DURATION: f64 = 10.0;
/// Near-resonance half-window in units of max(g_s, g_as, gamma1).
pub const NEAR_RESONANCE_FACTOR: f64 = 5.0;
/// Tolerance of the cross-engine comparison far from resonance.
pub const COMPARE_TOLERANCE: f64 = 0.05;
