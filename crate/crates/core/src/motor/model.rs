//! Two formulations of the induction-motor dynamics in the stationary frame
//! with one pole pair and no load torque.
//!
//! The flux model integrates `(psi_sd, psi_sq, psi_rd, psi_rq, omega)`; the
//! state-space model integrates `(i_sd, i_sq, lambda_rd, lambda_rq,
//! omega)`. Started from rest they describe the same trajectory.

use super::{park_inverse, MotorParams, Supply};
use crate::error::{Error, Result};

/// Precomputed coefficients of the flux-linkage model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxModel {
    pub rs: f64,
    pub rr: f64,
    /// `(Lrl + Lm) / Ld`
    pub x1: f64,
    /// `(Lsl + Lm) / Ld`
    pub x2: f64,
    /// `Lm / Ld`
    pub beta: f64,
    /// `3 / (2 J)`
    pub torque: f64,
}

impl FluxModel {
    pub fn new(p: &MotorParams) -> Result<Self> {
        p.validate()?;
        let ld = p.ld();
        Ok(Self {
            rs: p.rs,
            rr: p.rr,
            x1: (p.lrl() + p.lm) / ld,
            x2: (p.lsl() + p.lm) / ld,
            beta: p.lm / ld,
            torque: 3.0 / (2.0 * p.j),
        })
    }

    /// Stator `(i_sd, i_sq)` from the flux state.
    pub fn stator_currents(&self, s: &[f64; 5]) -> (f64, f64) {
        (self.x1 * s[0] - self.beta * s[2], self.x1 * s[1] - self.beta * s[3])
    }

    pub fn derivatives(&self, s: &[f64; 5], v_sd: f64, v_sq: f64) -> [f64; 5] {
        let [psd, psq, prd, prq, w] = *s;
        let (isd, isq) = self.stator_currents(s);
        [
            -self.rs * self.x1 * psd + self.rs * self.beta * prd + v_sd,
            -self.rs * self.x1 * psq + self.rs * self.beta * prq + v_sq,
            -self.rr * self.x2 * prd + self.rr * self.beta * psd - w * prq,
            -self.rr * self.x2 * prq + self.rr * self.beta * psq + w * prd,
            self.torque * (isq * psd - isd * psq),
        ]
    }
}

/// Derivative of the flux state `(psi_sd, psi_sq, psi_rd, psi_rq, omega)`.
pub fn flux_derivatives(state: &[f64; 5], params: &MotorParams, v_sd: f64, v_sq: f64) -> Result<[f64; 5]> {
    Ok(FluxModel::new(params)?.derivatives(state, v_sd, v_sq))
}

/// Precomputed coefficients of the current/rotor-flux state-space model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpaceModel {
    pub ls: f64,
    pub lr: f64,
    pub lm: f64,
    pub eta: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub mu: f64,
    /// `3 / (2 J) * Lm / Lr`
    pub torque: f64,
}

impl StateSpaceModel {
    pub fn new(p: &MotorParams) -> Result<Self> {
        p.validate()?;
        let ls = p.lsl() + p.lm;
        let lr = p.lrl() + p.lm;
        let d = ls * lr - p.lm * p.lm;
        let sigma = d / (ls * lr);
        if !(sigma > 0.0) {
            return Err(Error::InvalidParameter(format!("leakage factor {sigma} must be positive")));
        }
        Ok(Self {
            ls,
            lr,
            lm: p.lm,
            eta: p.rr / lr,
            sigma,
            gamma: (p.rs * lr * lr + p.rr * p.lm * p.lm) / (lr * d),
            mu: p.lm / d,
            torque: 3.0 / (2.0 * p.j) * p.lm / lr,
        })
    }

    pub fn derivatives(&self, s: &[f64; 5], v_sd: f64, v_sq: f64) -> [f64; 5] {
        let [isd, isq, lrd, lrq, w] = *s;
        let inv = 1.0 / (self.sigma * self.ls);
        [
            -self.gamma * isd + self.mu * self.eta * lrd + self.mu * w * lrq + inv * v_sd,
            -self.gamma * isq - self.mu * w * lrd + self.mu * self.eta * lrq + inv * v_sq,
            self.eta * self.lm * isd - self.eta * lrd - w * lrq,
            self.eta * self.lm * isq + w * lrd - self.eta * lrq,
            self.torque * (lrd * isq - lrq * isd),
        ]
    }
}

/// Derivative of `(i_sd, i_sq, lambda_rd, lambda_rq, omega)`.
#[allow(clippy::too_many_arguments)]
pub fn statespace_derivatives(
    i_sd: f64,
    i_sq: f64,
    lam_rd: f64,
    lam_rq: f64,
    omega: f64,
    params: &MotorParams,
    v_sd: f64,
    v_sq: f64,
) -> Result<[f64; 5]> {
    Ok(StateSpaceModel::new(params)?.derivatives(&[i_sd, i_sq, lam_rd, lam_rq, omega], v_sd, v_sq))
}

/// Phase currents `(i1, i2, i3)` at each sample time.
pub type PhaseCurrents = Vec<[f64; 3]>;

/// `samples` equally spaced times `T k / samples`, `k = 1..=samples`.
pub fn sample_times(t_end: f64, samples: usize) -> Vec<f64> {
    (1..=samples).map(|k| t_end * k as f64 / samples as f64).collect()
}

/// Start-up from standstill with no flux: phase currents from the flux model.
pub fn simulate_startup(
    params: &MotorParams,
    supply: &Supply,
    t_end: f64,
    samples: usize,
    tol: &super::Tolerances,
) -> Result<PhaseCurrents> {
    let model = FluxModel::new(params)?;
    let times = sample_times(t_end, samples);
    let states = super::rk45::integrate_sampled(
        |t, s: &[f64; 5]| {
            let (vd, vq) = supply.dq(t);
            model.derivatives(s, vd, vq)
        },
        0.0,
        [0.0; 5],
        &times,
        tol,
    )?;
    Ok(states
        .iter()
        .map(|s| {
            let (d, q) = model.stator_currents(s);
            let (a, b, c) = park_inverse(d, q);
            [a, b, c]
        })
        .collect())
}

/// Same start-up simulated with the state-space model.
pub fn simulate_startup_statespace(
    params: &MotorParams,
    supply: &Supply,
    t_end: f64,
    samples: usize,
    tol: &super::Tolerances,
) -> Result<PhaseCurrents> {
    let model = StateSpaceModel::new(params)?;
    let times = sample_times(t_end, samples);
    let states = super::rk45::integrate_sampled(
        |t, s: &[f64; 5]| {
            let (vd, vq) = supply.dq(t);
            model.derivatives(s, vd, vq)
        },
        0.0,
        [0.0; 5],
        &times,
        tol,
    )?;
    Ok(states
        .iter()
        .map(|s| {
            let (a, b, c) = park_inverse(s[0], s[1]);
            [a, b, c]
        })
        .collect())
}

/// Rotor speed trace from the flux model at the sample times.
pub fn simulate_speed(params: &MotorParams, supply: &Supply, t_end: f64, samples: usize, tol: &super::Tolerances) -> Result<Vec<f64>> {
    let model = FluxModel::new(params)?;
    let times = sample_times(t_end, samples);
    let states = super::rk45::integrate_sampled(
        |t, s: &[f64; 5]| {
            let (vd, vq) = supply.dq(t);
            model.derivatives(s, vd, vq)
        },
        0.0,
        [0.0; 5],
        &times,
        tol,
    )?;
    Ok(states.iter().map(|s| s[4]).collect())
}
