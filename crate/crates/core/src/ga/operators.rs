//! Simulated binary crossover and polynomial mutation for real vectors.

use crate::rng::Rng;

/// SBX spread factor for a uniform draw `u` in `(0, 1)`.
pub fn sbx_beta(u: f64, eta: f64) -> f64 {
    let e = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(e)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(e)
    }
}

/// SBX with caller-supplied uniform draws, one per component.
pub fn sbx_with_draws(p1: &[f64], p2: &[f64], eta: f64, draws: &[f64]) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(p1.len(), p2.len());
    debug_assert_eq!(p1.len(), draws.len());
    let mut o1 = Vec::with_capacity(p1.len());
    let mut o2 = Vec::with_capacity(p1.len());
    for ((&a, &b), &u) in p1.iter().zip(p2).zip(draws) {
        let beta = sbx_beta(u, eta);
        o1.push(0.5 * ((1.0 + beta) * a + (1.0 - beta) * b));
        o2.push(0.5 * ((1.0 - beta) * a + (1.0 + beta) * b));
    }
    (o1, o2)
}

/// Simulated binary crossover with one fresh spread factor per component.
pub fn sbx_crossover(p1: &[f64], p2: &[f64], eta: f64, rng: &mut Rng) -> (Vec<f64>, Vec<f64>) {
    let draws: Vec<f64> = (0..p1.len()).map(|_| rng.open01()).collect();
    sbx_with_draws(p1, p2, eta, &draws)
}

/// Polynomial-mutation perturbation for a uniform draw `r` in `(0, 1)`;
/// lies in `(-1, 1)` and is zero at `r = 0.5`.
pub fn poly_delta(r: f64, eta: f64) -> f64 {
    let e = 1.0 / (eta + 1.0);
    if r < 0.5 {
        (2.0 * r).powf(e) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - r)).powf(e)
    }
}

/// Mutates each component independently with probability `p_m`, moving it by
/// `(hi - lo) * delta`. Returns the mutated vector and whether anything
/// changed.
pub fn polynomial_mutation(
    x: &[f64],
    lo: &[f64],
    hi: &[f64],
    p_m: f64,
    eta_m: f64,
    rng: &mut Rng,
) -> (Vec<f64>, bool) {
    let mut out = x.to_vec();
    let mut changed = false;
    for (i, xi) in out.iter_mut().enumerate() {
        if rng.bernoulli(p_m) {
            let delta = poly_delta(rng.open01(), eta_m);
            let moved = *xi + (hi[i] - lo[i]) * delta;
            changed |= moved != *xi;
            *xi = moved;
        }
    }
    (out, changed)
}
