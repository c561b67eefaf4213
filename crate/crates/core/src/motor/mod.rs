//! Three-phase induction motor: Park transforms, two equivalent dynamic
//! models, start-up simulation and the current-error identification
//! fitness.

pub mod identify;
pub mod model;
pub mod rk45;

pub use identify::{identification_fitness, write_reference_csv, IdentificationProblem};
pub use model::{flux_derivatives, statespace_derivatives, FluxModel, StateSpaceModel};
pub use rk45::Tolerances;

use crate::error::{Error, Result};
use crate::space::SearchSpace;

/// Stationary-frame d/q components of three phase quantities.
pub fn park_forward(v1: f64, v2: f64, v3: f64) -> (f64, f64) {
    ((2.0 * v1 - v2 - v3) / 3.0, (v2 - v3) / 3f64.sqrt())
}

/// Phase currents from stationary-frame d/q currents (no zero sequence).
pub fn park_inverse(i_sd: f64, i_sq: f64) -> (f64, f64, f64) {
    let h = 3f64.sqrt() / 2.0;
    (i_sd, -0.5 * i_sd + h * i_sq, -0.5 * i_sd - h * i_sq)
}

/// Electrical parameters. The two leakage inductances enter only as their
/// sum `lll`, split evenly between stator and rotor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorParams {
    pub rs: f64,
    pub rr: f64,
    pub lll: f64,
    pub lm: f64,
    pub j: f64,
}

impl MotorParams {
    pub const NAMES: [&'static str; 5] = ["Rs", "Rr", "Lll", "Lm", "J"];

    pub const TRUE: MotorParams = MotorParams {
        rs: 9.203,
        rr: 6.61,
        lll: 0.09718,
        lm: 1.6816,
        j: 0.00077,
    };

    /// Initialization ranges per parameter, in [`MotorParams::NAMES`] order.
    pub const INIT_LO: [f64; 5] = [1.0, 1.0, 0.002, 0.05, 0.00005];
    pub const INIT_HI: [f64; 5] = [20.0, 20.0, 1.0, 5.0, 0.001];

    pub fn from_slice(x: &[f64]) -> Result<Self> {
        if x.len() != 5 {
            return Err(Error::DimensionMismatch { expected: 5, got: x.len() });
        }
        Ok(Self { rs: x[0], rr: x[1], lll: x[2], lm: x[3], j: x[4] })
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.rs, self.rr, self.lll, self.lm, self.j]
    }

    pub fn lsl(&self) -> f64 {
        0.5 * self.lll
    }

    pub fn lrl(&self) -> f64 {
        0.5 * self.lll
    }

    /// `Lsl*Lrl + Lm*(Lsl + Lrl)`.
    pub fn ld(&self) -> f64 {
        self.lsl() * self.lrl() + self.lm * (self.lsl() + self.lrl())
    }

    pub fn validate(&self) -> Result<()> {
        let all_positive = self.to_array().iter().all(|v| *v > 0.0 && v.is_finite());
        if !all_positive || !(self.ld() > 0.0) {
            return Err(Error::InvalidParameter(format!("motor parameters must be positive: {self:?}")));
        }
        Ok(())
    }

    /// Search space over the initialization ranges, never below their lower
    /// limits and unbounded above.
    pub fn search_space() -> SearchSpace {
        SearchSpace::new(Self::INIT_LO.to_vec(), Self::INIT_HI.to_vec())
            .expect("valid ranges")
            .clamped_at_init_lo()
    }

    /// Relative deviation `|est - true| / true` of each parameter, in percent.
    pub fn deviation_pct(&self, truth: &MotorParams) -> [f64; 5] {
        let e = self.to_array();
        let t = truth.to_array();
        std::array::from_fn(|i| 100.0 * (e[i] - t[i]).abs() / t[i])
    }
}

/// Balanced sinusoidal three-phase supply `v_k = A sin(2 pi f t + phase_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supply {
    pub amplitude: f64,
    pub frequency: f64,
    pub phases: [f64; 3],
}

impl Default for Supply {
    fn default() -> Self {
        let third = 2.0 * std::f64::consts::PI / 3.0;
        Self {
            amplitude: 311.0,
            frequency: 50.0,
            phases: [0.0, -third, third],
        }
    }
}

impl Supply {
    pub fn phase_voltages(&self, t: f64) -> [f64; 3] {
        let wt = 2.0 * std::f64::consts::PI * self.frequency * t;
        self.phases.map(|p| self.amplitude * (wt + p).sin())
    }

    /// Stationary-frame `(v_sd, v_sq)` at time `t`.
    pub fn dq(&self, t: f64) -> (f64, f64) {
        let [a, b, c] = self.phase_voltages(t);
        park_forward(a, b, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn park_examples() {
        assert_eq!(park_forward(1.0, -0.5, -0.5), (1.0, 0.0));
        let (d, q) = park_forward(0.0, 1.0, -1.0);
        assert_eq!(d, 0.0);
        assert!((q - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(park_forward(7.0, 7.0, 7.0), (0.0, 0.0));
        assert_eq!(park_inverse(1.0, 0.0), (1.0, -0.5, -0.5));
    }

    #[test]
    fn balanced_supply_has_constant_magnitude() {
        let s = Supply::default();
        for k in 0..50 {
            let (d, q) = s.dq(k as f64 * 1e-3);
            assert!(((d * d + q * q).sqrt() - 311.0).abs() < 1e-9);
        }
    }

    #[test]
    fn true_parameters_are_valid() {
        MotorParams::TRUE.validate().unwrap();
        assert!(MotorParams::from_slice(&[1.0, 1.0, -1.0, 1.0, 1.0]).unwrap().validate().is_err());
        assert_eq!(MotorParams::TRUE.deviation_pct(&MotorParams::TRUE), [0.0; 5]);
    }

    proptest! {
        #[test]
        fn park_roundtrip(d in -1e3f64..1e3, q in -1e3f64..1e3) {
            let (i1, i2, i3) = park_inverse(d, q);
            prop_assert!((i1 + i2 + i3).abs() <= 1e-12 * (1.0 + d.abs() + q.abs()));
            let (d2, q2) = park_forward(i1, i2, i3);
            prop_assert!((d2 - d).abs() <= 1e-9 && (q2 - q).abs() <= 1e-9);
        }
    }
}
