use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{domain, Result};

/// Boundary condition of the (reduced) spin chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Periodic: boundary coupling `J_b = +1`.
    Periodic,
    /// Anti-periodic: boundary coupling `J_b = -1`.
    AntiPeriodic,
}

impl Boundary {
    pub fn coupling(self) -> f64 {
        match self {
            Boundary::Periodic => 1.0,
            Boundary::AntiPeriodic => -1.0,
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "PBC",
            Boundary::AntiPeriodic => "ABC",
        })
    }
}

/// The pseudo-spin wave-vectors of a ring of `chain_length` sites.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveVectorSet {
    flavor: Boundary,
    chain_length: usize,
    values: Vec<f64>,
}

impl WaveVectorSet {
    /// PBC: `{π, 3π, …, (N−1)π}/N`; ABC: `{2π, 4π, …, (N−2)π}/N`.
    pub fn new(flavor: Boundary, chain_length: usize) -> Result<Self> {
        if chain_length < 4 || !chain_length.is_multiple_of(2) {
            return Err(domain("chain length must be even and at least 4"));
        }
        let n = chain_length as f64;
        let values = match flavor {
            Boundary::Periodic => (0..chain_length / 2).map(|j| (2 * j + 1) as f64 * PI / n).collect(),
            Boundary::AntiPeriodic => (1..chain_length / 2).map(|j| (2 * j) as f64 * PI / n).collect(),
        };
        Ok(WaveVectorSet { flavor, chain_length, values })
    }

    pub fn flavor(&self) -> Boundary {
        self.flavor
    }

    pub fn chain_length(&self) -> usize {
        self.chain_length
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Shorthand for [`WaveVectorSet::new`].
pub fn wavevectors(flavor: Boundary, chain_length: usize) -> Result<WaveVectorSet> {
    WaveVectorSet::new(flavor, chain_length)
}
