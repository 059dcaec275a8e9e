//! Periodic grids, transforms, differential operators and quadratic invariants.

mod fft;
mod field;
mod grid;
mod operators;
pub(crate) mod products;
mod sum;

pub(crate) use fft::inverse as fft_inverse;
pub use field::{Field, FieldData, Representation};
pub(crate) use grid::norm3;
pub use grid::{Grid, WaveVector};
pub use operators::{
    curl, divergence, divergence_residual, gradient, inner_product, integrate, is_divergence_free, leray_project,
    perp_gradient, project_mode, total_energy, total_helicity, DIVERGENCE_TOLERANCE,
};
pub(crate) use operators::{require_divergence_free, spectral_pairing};
pub use sum::{pairwise_sum, pairwise_sum_by};
