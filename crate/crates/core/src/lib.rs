//! QAOA and digitized quantum annealing on the antiferromagnetic Ising ring.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every numerical piece:
//!
//! - [`landscape`]: the pseudo-spin residual-energy landscape, evaluated mode by
//!   mode as a chain of 3×3 rotations, with reverse-mode gradients and the
//!   landscape symmetries in [`symmetry`].
//! - [`oracle`]: a brute-force 2^N state-vector simulator used to validate the
//!   pseudo-spin formulas.
//! - [`optim`]: BFGS with a strong-Wolfe line search, random multistart, the
//!   iterative "regular" construction and minima enumeration.
//! - [`schedules`]: continuous annealing schedules, digitization and the
//!   scaling-collapse analysis.
//! - [`dynamics`]: per-mode SU(2) dynamics for large chains, the Shannon
//!   adiabaticity diagnostic and the effective-field analysis.
//!
//! Units are ħ = J = 1 throughout.
#![no_std]
// `num_traits::Float` supplies the float methods without std. Once std is
// linked anywhere in the build (tests, or a dependent enabling std features),
// its inherent methods take precedence and the imports go unused.
#![allow(unused_imports)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod dynamics;
mod error;
pub mod geometry;
pub mod landscape;
pub mod optim;
pub mod oracle;
pub mod rng;
pub mod schedule;
pub mod schedules;
pub mod symmetry;
pub mod wavevector;

pub use error::{Error, Result};
pub use geometry::{rotation_about_axis, BlochVector, Mat3};
pub use landscape::{epsilon_k, residual_energy, residual_gradient, Regime, ResidualBreakdown};
pub use schedule::AngleSchedule;
pub use symmetry::{symmetry_transform, EnergyRelation, Symmetry};
pub use wavevector::{Boundary, WaveVectorSet};

/// Lower bound on the residual energy at depth `p` on a ring of `n` sites:
/// `1/(2p+2)` while `2p < n`, zero once the ring is controllable.
pub fn residual_bound(n: usize, p: usize) -> f64 {
    if 2 * p < n {
        1.0 / (2 * p + 2) as f64
    } else {
        0.0
    }
}
