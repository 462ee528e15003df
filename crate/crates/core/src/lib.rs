//! Thermal Casimir interaction between an Au sphere and graphene-coated plates.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//! dielectric models at imaginary frequencies, the Dirac-model polarization
//! tensor of gapped and doped graphene, reflection coefficients, Lifshitz
//! sums for sphere–plate gradients and plate–plate pressures, the
//! electrostatic calibration model with its fitting pipeline, and the
//! experiment-versus-theory comparison.
//!
//! Internal units are eV, nm and K. Frequencies are carried as photon
//! energies `ħξ`. Conversion to μN/m and Pa happens only at the output
//! boundary (see [`units`]).
#![no_std]
#![cfg_attr(docsrs, feature(doc_cfg))]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod calibration;
pub mod corrections;
pub mod error;
pub mod graphene;
pub mod lifshitz;
pub mod materials;
pub mod quadrature;
pub mod reflection;
pub mod units;

pub use error::{Error, Result};
pub use graphene::{GrapheneSheet, PolarizationPair, SpectralContext};
pub use lifshitz::{GradientResult, SummationPolicy, SystemGeometry, TensorModel};
pub use materials::PermittivityModel;
pub use reflection::Boundary;
