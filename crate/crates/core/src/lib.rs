//! Littlewood-Paley analysis of periodic vector fields.
//!
//! Dyadic blocks and Besov norms, the energy, helicity and enstrophy fluxes
//! through dyadic spheres together with their locality bounds, the explicit
//! fields that saturate those bounds, and a brute-force triad oracle used to
//! cross-check the FFT pathway.

pub mod besov;
pub mod bilinear;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod flux;
pub mod io;
pub mod littlewood_paley;
pub mod spectral;
pub mod triad;

pub use error::{Error, Result};
pub use littlewood_paley::{make_chi_profile, make_filter_bank, ChiProfile, FilterBank};
pub use spectral::{Field, Grid, Representation, WaveVector};
