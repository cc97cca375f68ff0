//! CODATA 2018 conversion factors.

/// Wavenumbers (cm^-1) per hartree.
pub const HARTREE_TO_CM: f64 = 219_474.631_363_2;

/// Electron masses per unified atomic mass unit.
pub const AMU_TO_ME: f64 = 1_822.888_486_209;

/// Angstrom per bohr.
pub const BOHR_TO_ANGSTROM: f64 = 0.529_177_210_903;
