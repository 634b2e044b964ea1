//! Entanglement between inertial and uniformly accelerated observers,
//! computed beyond the single-mode approximation.
//!
//! - [`qops`]: tensor spaces, partial trace/transpose, negativity.
//! - [`bosonic`]: truncated two-mode-squeezed Rindler states of a scalar
//!   field and the Alice-Rob / Alice-AntiRob negativities.
//! - [`fermionic`]: the exact 16-dimensional Grassmann-scalar states and
//!   their 3x3 partial-transpose blocks.
//! - [`wavepacket`]: the Minkowski/Unruh smearing-function transform,
//!   packet families and single-mode-approximation diagnostics.

pub mod bosonic;
pub mod error;
pub mod fermionic;
pub mod qops;
pub mod special;
pub mod wavepacket;
pub mod weights;

pub use error::{Error, Result};
pub use qops::{
    negativity, partial_trace, partial_transpose, tensor_product, DensityOperator, FockKet, NegativityValue,
    PartialTransposeMatrix, TensorProduct, TensorSpace, C64,
};
pub use weights::UnruhWeights;
