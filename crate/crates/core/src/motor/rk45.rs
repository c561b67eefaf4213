//! Adaptive Dormand-Prince 5(4) integrator with a fourth-order continuous
//! extension.

use crate::error::{Error, Result};

const C: [f64; 6] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0];
const A: [[f64; 5]; 6] = [
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] = [
    -71.0 / 57600.0,
    0.0,
    71.0 / 16695.0,
    -71.0 / 1920.0,
    17253.0 / 339200.0,
    -22.0 / 525.0,
    1.0 / 40.0,
];
/// Continuous-extension coefficients: `y(t + theta h) = y + h * sum_i K_i *
/// sum_j P[i][j] theta^(j+1)`.
const P: [[f64; 4]; 7] = [
    [1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0],
    [0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0],
    [0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0],
    [0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0],
    [0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0],
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    pub max_steps: usize,
}

impl Tolerances {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs, max_steps: 1_000_000 }
    }
}

/// One accepted step, able to interpolate anywhere in `[t0, t1]`.
#[derive(Debug, Clone)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    k: [[f64; N]; 7],
}

impl<const N: usize> Step<N> {
    pub fn interpolate(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let theta = (t - self.t0) / h;
        let powers = [theta, theta * theta, theta * theta * theta, theta * theta * theta * theta];
        let mut out = self.y0;
        for (i, row) in P.iter().enumerate() {
            let w: f64 = row.iter().zip(&powers).map(|(p, q)| p * q).sum();
            if w != 0.0 {
                for (o, k) in out.iter_mut().zip(&self.k[i]) {
                    *o += h * w * k;
                }
            }
        }
        out
    }
}

fn rms_norm<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    (v.iter().zip(scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / N as f64).sqrt()
}

/// `y + h * sum_j coeffs[j] * k[j]`.
fn combine<const N: usize>(y: &[f64; N], h: f64, k: &[[f64; N]; 7], coeffs: &[f64]) -> [f64; N] {
    let mut out = *y;
    for (kj, c) in k.iter().zip(coeffs) {
        if *c != 0.0 {
            let hc = h * c;
            for (o, v) in out.iter_mut().zip(kj) {
                *o += hc * v;
            }
        }
    }
    out
}

fn initial_step<const N: usize>(
    f: &mut impl FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    tol: &Tolerances,
) -> f64 {
    let scale = y0.map(|v| tol.abs + v.abs() * tol.rel);
    let d0 = rms_norm(y0, &scale);
    let d1 = rms_norm(f0, &scale);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let mut y1 = *y0;
    for (a, b) in y1.iter_mut().zip(f0) {
        *a += h0 * b;
    }
    let f1 = f(t0 + h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = rms_norm(&diff, &scale) / h0;
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    (100.0 * h0).min(h1)
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end`, handing every accepted
/// step to `on_step`.
pub fn integrate<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: &Tolerances,
    mut on_step: impl FnMut(&Step<N>),
) -> Result<[f64; N]> {
    if !(tol.rel > 0.0 && tol.abs > 0.0) {
        return Err(Error::InvalidParameter("tolerances must be positive".into()));
    }
    if !(t_end > t0) {
        return Err(Error::InvalidParameter("integration interval must be increasing".into()));
    }
    let fail = |t: f64, reason: &str| Error::Integration { t, reason: reason.to_string() };
    let mut t = t0;
    let mut y = y0;
    let mut fy = f(t, &y);
    if fy.iter().any(|v| !v.is_finite()) {
        return Err(fail(t, "non-finite derivative"));
    }
    let mut h = initial_step(&mut f, t, &y, &fy, tol).min(t_end - t0);
    let mut steps = 0usize;

    while t < t_end {
        let min_step = 10.0 * ((t.abs() * (1.0 + f64::EPSILON)) - t.abs()).max(f64::MIN_POSITIVE);
        let mut rejected = false;
        loop {
            if h < min_step {
                return Err(fail(t, "step size underflow"));
            }
            steps += 1;
            if steps > tol.max_steps {
                return Err(fail(t, "too many steps"));
            }
            let mut t_new = t + h;
            if t_new > t_end {
                t_new = t_end;
            }
            let h_eff = t_new - t;

            let mut k = [[0.0; N]; 7];
            k[0] = fy;
            for s in 1..6 {
                let ys = combine(&y, h_eff, &k, &A[s][..s]);
                k[s] = f(t + C[s] * h_eff, &ys);
            }
            let y_new = combine(&y, h_eff, &k, &B);
            let f_new = f(t_new, &y_new);
            k[6] = f_new;

            let mut err = [0.0; N];
            let mut scale = [0.0; N];
            for i in 0..N {
                err[i] = h_eff * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
                scale[i] = tol.abs + y[i].abs().max(y_new[i].abs()) * tol.rel;
            }
            let norm = rms_norm(&err, &scale);
            if !norm.is_finite() || y_new.iter().chain(&f_new).any(|v| !v.is_finite()) {
                h *= MIN_FACTOR;
                rejected = true;
                continue;
            }
            if norm < 1.0 {
                let mut factor = if norm == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * norm.powf(ERROR_EXPONENT)).min(MAX_FACTOR)
                };
                if rejected {
                    factor = factor.min(1.0);
                }
                on_step(&Step { t0: t, t1: t_new, y0: y, y1: y_new, k });
                t = t_new;
                y = y_new;
                fy = f_new;
                h = h_eff * factor;
                break;
            }
            h = h_eff * (SAFETY * norm.powf(ERROR_EXPONENT)).max(MIN_FACTOR);
            rejected = true;
        }
    }
    Ok(y)
}

/// Solution values at the requested increasing times, each within
/// `(t0, t_end]`, read from the continuous extension.
pub fn integrate_sampled<const N: usize>(
    f: impl FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    times: &[f64],
    tol: &Tolerances,
) -> Result<Vec<[f64; N]>> {
    let Some(&t_end) = times.last() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(times.len());
    integrate(f, t0, y0, t_end, tol, |step| {
        while out.len() < times.len() && times[out.len()] <= step.t1 {
            let t = times[out.len()];
            out.push(if t == step.t1 { step.y1 } else { step.interpolate(t) });
        }
    })?;
    Ok(out)
}

/// Every accepted step, for evaluation anywhere in the interval.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    pub steps: Vec<Step<N>>,
}

impl<const N: usize> DenseSolution<N> {
    pub fn solve(
        f: impl FnMut(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        tol: &Tolerances,
    ) -> Result<Self> {
        let mut steps = Vec::new();
        integrate(f, t0, y0, t_end, tol, |s| steps.push(s.clone()))?;
        Ok(Self { steps })
    }

    /// Value at `t`, clamped to the integration interval.
    pub fn at(&self, t: f64) -> [f64; N] {
        let idx = self.steps.partition_point(|s| s.t1 < t).min(self.steps.len() - 1);
        let s = &self.steps[idx];
        if t <= s.t0 {
            s.y0
        } else if t >= s.t1 {
            s.y1
        } else {
            s.interpolate(t)
        }
    }
}
