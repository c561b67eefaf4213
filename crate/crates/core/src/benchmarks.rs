//! Single-objective test functions and the DTLZ1-4 multi-objective suite.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::space::SearchSpace;

/// The five single-objective benchmark functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Sphere,
    Rosenbrock,
    Rastrigin,
    SchafferF6,
    Ackley,
}

/// Standard experiment settings for a benchmark function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkSettings {
    pub dims: usize,
    pub init_lo: f64,
    pub init_hi: f64,
    pub vmax: f64,
    /// Upper end of the random inertia range for clubs-based PSO.
    pub cpso_inertia: f64,
    /// Distance to the optimum counted as convergence.
    pub closeness: f64,
}

impl Function {
    pub const ALL: [Function; 5] = [
        Function::Sphere,
        Function::Rosenbrock,
        Function::Rastrigin,
        Function::SchafferF6,
        Function::Ackley,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Sphere => "sphere",
            Function::Rosenbrock => "rosenbrock",
            Function::Rastrigin => "rastrigin",
            Function::SchafferF6 => "schaffer_f6",
            Function::Ackley => "ackley",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name.to_ascii_lowercase())
    }

    pub fn settings(self) -> BenchmarkSettings {
        let (dims, half, vmax, w, closeness) = match self {
            Function::Sphere => (30, 100.0, 100.0, 1.2, 1e-4),
            Function::Rosenbrock => (30, 30.0, 30.0, 1.2, 100.0),
            Function::Rastrigin => (30, 5.12, 5.12, 1.4, 50.0),
            Function::SchafferF6 => (2, 100.0, 100.0, 1.65, 1e-3),
            Function::Ackley => (30, 32.0, 32.0, 1.36, 0.01),
        };
        BenchmarkSettings {
            dims,
            init_lo: -half,
            init_hi: half,
            vmax,
            cpso_inertia: w,
            closeness,
        }
    }

    /// Search space with the standard initialization range and speed cap.
    pub fn space(self, dims: usize) -> Result<SearchSpace> {
        let s = self.settings();
        SearchSpace::cube(dims, s.init_lo, s.init_hi)?.with_vmax(vec![s.vmax; dims])
    }

    /// Location of the global minimum (value 0) in `dims` dimensions.
    pub fn optimum(self, dims: usize) -> Vec<f64> {
        match self {
            Function::Rosenbrock => vec![1.0; dims],
            _ => vec![0.0; dims],
        }
    }

    pub fn check_dims(self, dims: usize) -> Result<()> {
        let ok = match self {
            Function::SchafferF6 => dims == 2,
            Function::Rosenbrock => dims >= 2,
            _ => dims >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: if self == Function::SchafferF6 { 2 } else { 1 },
                got: dims,
            })
        }
    }

    /// Evaluates the function, checking the dimension first.
    pub fn eval(self, x: &[f64]) -> Result<f64> {
        self.check_dims(x.len())?;
        Ok(self.value(x))
    }

    /// Evaluates without validation; callers guarantee the dimension.
    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            Function::Sphere => x.iter().map(|v| v * v).sum(),
            Function::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            Function::Rastrigin => x
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            Function::SchafferF6 => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                let s = r2.sqrt().sin();
                0.5 + (s * s - 0.5) / (1.0 + 0.001 * r2).powi(2)
            }
            Function::Ackley => {
                let n = x.len() as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
        }
    }
}

/// Which DTLZ problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtlzKind {
    Dtlz1,
    Dtlz2,
    Dtlz3,
    /// DTLZ2 with position variables mapped through `x -> x^alpha`.
    Dtlz4 { alpha: f64 },
}

/// Shape of the Pareto-optimal front.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontShape {
    /// Hyperplane `sum f = 0.5` in the positive orthant.
    Linear,
    /// Unit hypersphere in the positive orthant.
    Spherical,
}

/// A DTLZ instance with `n_vars = k + n_obj - 1` decision variables in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dtlz {
    kind: DtlzKind,
    n_vars: usize,
    n_obj: usize,
}

impl DtlzKind {
    pub fn name(self) -> &'static str {
        match self {
            DtlzKind::Dtlz1 => "dtlz1",
            DtlzKind::Dtlz2 => "dtlz2",
            DtlzKind::Dtlz3 => "dtlz3",
            DtlzKind::Dtlz4 { .. } => "dtlz4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "dtlz1" => Some(DtlzKind::Dtlz1),
            "dtlz2" => Some(DtlzKind::Dtlz2),
            "dtlz3" => Some(DtlzKind::Dtlz3),
            "dtlz4" => Some(DtlzKind::Dtlz4 { alpha: 100.0 }),
            _ => None,
        }
    }

    /// Number of decision variables used in the reference experiments.
    pub fn default_vars(self) -> usize {
        match self {
            DtlzKind::Dtlz1 => 40,
            _ => 30,
        }
    }

    pub fn front(self) -> FrontShape {
        match self {
            DtlzKind::Dtlz1 => FrontShape::Linear,
            _ => FrontShape::Spherical,
        }
    }
}

impl Dtlz {
    pub fn new(kind: DtlzKind, n_vars: usize, n_obj: usize) -> Result<Self> {
        if n_obj < 2 {
            return Err(Error::InvalidParameter(format!(
                "DTLZ needs at least 2 objectives, got {n_obj}"
            )));
        }
        if n_vars < n_obj {
            return Err(Error::InvalidParameter(format!(
                "DTLZ needs n_vars >= n_obj (k >= 1), got n_vars = {n_vars}, M = {n_obj}"
            )));
        }
        if let DtlzKind::Dtlz4 { alpha } = kind {
            if !(alpha > 0.0) {
                return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
            }
        }
        Ok(Self { kind, n_vars, n_obj })
    }

    pub fn kind(&self) -> DtlzKind {
        self.kind
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_obj(&self) -> usize {
        self.n_obj
    }

    pub fn front(&self) -> FrontShape {
        self.kind.front()
    }

    /// Unit hypercube.
    pub fn space(&self) -> SearchSpace {
        SearchSpace::cube(self.n_vars, 0.0, 1.0).expect("valid cube")
    }

    /// Distance function `g` over the last `k` variables.
    pub fn g(&self, x: &[f64]) -> f64 {
        let tail = &x[self.n_obj - 1..];
        match self.kind {
            DtlzKind::Dtlz1 | DtlzKind::Dtlz3 => {
                let s: f64 = tail
                    .iter()
                    .map(|v| (v - 0.5).powi(2) - (20.0 * PI * (v - 0.5)).cos())
                    .sum();
                100.0 * (tail.len() as f64 + s)
            }
            DtlzKind::Dtlz2 | DtlzKind::Dtlz4 { .. } => tail.iter().map(|v| (v - 0.5).powi(2)).sum(),
        }
    }

    /// Objective vector; rejects inputs outside the unit box.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_vars {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars,
                got: x.len(),
            });
        }
        if let Some((index, &value)) = x
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::OutOfBox { index, value });
        }
        Ok(self.value(x))
    }

    /// Objective vector without validation.
    pub fn value(&self, x: &[f64]) -> Vec<f64> {
        let m = self.n_obj;
        let g = self.g(x);
        let mut f = vec![0.0; m];
        match self.kind {
            DtlzKind::Dtlz1 => {
                for (j, fj) in f.iter_mut().enumerate() {
                    // objective j (0-based) multiplies the first m-1-j position variables
                    let keep = m - 1 - j;
                    let mut v = 0.5 * (1.0 + g);
                    v *= x[..keep].iter().product::<f64>();
                    if j > 0 {
                        v *= 1.0 - x[keep];
                    }
                    *fj = v;
                }
            }
            _ => {
                let alpha = match self.kind {
                    DtlzKind::Dtlz4 { alpha } => alpha,
                    _ => 1.0,
                };
                let theta: Vec<f64> = x[..m - 1]
                    .iter()
                    .map(|v| v.powf(alpha) * PI / 2.0)
                    .collect();
                for (j, fj) in f.iter_mut().enumerate() {
                    let keep = m - 1 - j;
                    let mut v = 1.0 + g;
                    v *= theta[..keep].iter().map(|t| t.cos()).product::<f64>();
                    if j > 0 {
                        v *= theta[keep].sin();
                    }
                    *fj = v;
                }
            }
        }
        f
    }

    /// Normalized distance of an objective vector to the Pareto front.
    pub fn distance_to_front(&self, f: &[f64]) -> f64 {
        distance_to_front(self.front(), f)
    }
}

/// Orthogonal distance to the front: `|sum f - 0.5| / sqrt(M)` for the
/// linear front, `| |f|_2 - 1 |` for the spherical one.
pub fn distance_to_front(shape: FrontShape, f: &[f64]) -> f64 {
    match shape {
        FrontShape::Linear => (f.iter().sum::<f64>() - 0.5).abs() / (f.len() as f64).sqrt(),
        FrontShape::Spherical => (f.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs(),
    }
}

/// Unnormalized offset from the front: `|sum f - 0.5|` for the linear
/// front; identical to [`distance_to_front`] for the spherical one.
pub fn raw_distance_to_front(shape: FrontShape, f: &[f64]) -> f64 {
    match shape {
        FrontShape::Linear => (f.iter().sum::<f64>() - 0.5).abs(),
        FrontShape::Spherical => distance_to_front(shape, f),
    }
}
