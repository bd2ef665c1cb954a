//! Physical constants (CODATA 2018 exact SI values).

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Elementary charge, C.
pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;

/// Planck constant, J*s.
pub const PLANCK: f64 = 6.626_070_15e-34;
