//! Symmetries of the residual-energy landscape.
//!
//! Primes denote layer reversal: `β′_m = β_{P+1−m}`. Two generators come from
//! the physics (Kramers-Wannier duality and the spin flip on even sites); the
//! rest are their compositions, plus the time-reversal `(γ, β) → (−γ, −β)`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::schedule::AngleSchedule;

/// How the residual energy at the transformed point relates to the original.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyRelation {
    /// `ε′ = ε`
    Equal,
    /// `ε′ = 1 − ε`
    Complement,
}

impl EnergyRelation {
    pub fn predict(self, eps: f64) -> f64 {
        match self {
            EnergyRelation::Equal => eps,
            EnergyRelation::Complement => 1.0 - eps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// `(π/2 − β′, π/2 − γ′)`, ε preserved.
    Duality,
    /// `(π/2 − γ, β)`, ε → 1 − ε.
    FerroFlip,
    /// `(π/2 − γ, π/2 − β)`, ε preserved.
    Inversion,
    /// `(β′, γ′)`, ε preserved.
    Reversal,
    /// `(γ, π/2 − β)`, ε → 1 − ε.
    MixerFlip,
    /// `(β′, π/2 − γ′)`, ε → 1 − ε.
    ReversalFlip,
    /// `(π/2 − β′, γ′)`, ε → 1 − ε.
    DualityFlip,
    /// `(−γ, −β)`, ε preserved.
    TimeReversal,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Duality,
        Symmetry::FerroFlip,
        Symmetry::Inversion,
        Symmetry::Reversal,
        Symmetry::MixerFlip,
        Symmetry::ReversalFlip,
        Symmetry::DualityFlip,
        Symmetry::TimeReversal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Duality => "duality",
            Symmetry::FerroFlip => "ferro_flip",
            Symmetry::Inversion => "inversion",
            Symmetry::Reversal => "reversal",
            Symmetry::MixerFlip => "mixer_flip",
            Symmetry::ReversalFlip => "reversal_flip",
            Symmetry::DualityFlip => "duality_flip",
            Symmetry::TimeReversal => "time_reversal",
        }
    }

    pub fn relation(self) -> EnergyRelation {
        match self {
            Symmetry::Duality | Symmetry::Inversion | Symmetry::Reversal | Symmetry::TimeReversal => {
                EnergyRelation::Equal
            }
            _ => EnergyRelation::Complement,
        }
    }

    /// Maps `(γ, β)` to the transformed angle vectors.
    pub fn apply(self, sched: &AngleSchedule) -> AngleSchedule {
        let g = sched.gamma();
        let b = sched.beta();
        let rev = |v: &[f64]| -> Vec<f64> { v.iter().rev().copied().collect() };
        let comp = |v: &[f64]| -> Vec<f64> { v.iter().map(|a| FRAC_PI_2 - a).collect() };
        let neg = |v: &[f64]| -> Vec<f64> { v.iter().map(|a| -a).collect() };
        let (ng, nb) = match self {
            Symmetry::Duality => (comp(&rev(b)), comp(&rev(g))),
            Symmetry::FerroFlip => (comp(g), b.to_vec()),
            Symmetry::Inversion => (comp(g), comp(b)),
            Symmetry::Reversal => (rev(b), rev(g)),
            Symmetry::MixerFlip => (g.to_vec(), comp(b)),
            Symmetry::ReversalFlip => (rev(b), comp(&rev(g))),
            Symmetry::DualityFlip => (comp(&rev(b)), rev(g)),
            Symmetry::TimeReversal => (neg(g), neg(b)),
        };
        AngleSchedule::new(ng, nb).expect("transform preserves depth")
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Symmetry::ALL
            .iter()
            .copied()
            .find(|sym| sym.name() == s)
            .ok_or_else(|| Error::UnknownSymmetry(s.into()))
    }
}

/// Applies `which` and returns the new schedule with the predicted relation.
pub fn symmetry_transform(sched: &AngleSchedule, which: Symmetry) -> (AngleSchedule, EnergyRelation) {
    (which.apply(sched), which.relation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::residual_energy;

    #[test]
    fn names_round_trip_and_unknown_rejected() {
        for s in Symmetry::ALL {
            assert_eq!(s.name().parse::<Symmetry>().unwrap(), s);
        }
        assert!(matches!("mirror".parse::<Symmetry>(), Err(Error::UnknownSymmetry(_))));
    }

    #[test]
    fn origin_is_one_half() {
        // FerroFlip at γ = 0 plus π/2 periodicity pins ε(0, β) = 1/2.
        for &b in &[0.0, 0.3, 1.2] {
            let s = AngleSchedule::new(alloc::vec![0.0], alloc::vec![b]).unwrap();
            let e = residual_energy(10, &s).unwrap().total;
            assert!((e - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn duality_example() {
        let s = AngleSchedule::new(alloc::vec![0.1, 0.5, 1.3], alloc::vec![0.9, 0.2, 0.7]).unwrap();
        for n in [4, 6, 8, 40] {
            let e = residual_energy(n, &s).unwrap().total;
            for sym in Symmetry::ALL {
                let (t, rel) = symmetry_transform(&s, sym);
                let et = residual_energy(n, &t).unwrap().total;
                assert!((rel.predict(e) - et).abs() < 1e-12, "{sym} at N={n}");
            }
        }
    }
}
