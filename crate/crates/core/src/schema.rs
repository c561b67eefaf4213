//! Expected schema growth under fitness-proportionate reproduction with
//! one-point crossover and bitwise mutation.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Fraction of the population above which a schema is reported as having
/// taken over.
pub const DEFAULT_TAKEOVER: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemaSpec {
    pub xi0: f64,
    /// `f(S) / mean fitness`
    pub fitness_ratio: f64,
    pub p_c: f64,
    pub p_m: f64,
    /// Defining length.
    pub delta: usize,
    pub order: usize,
    /// Chromosome length.
    pub m: usize,
    /// Population size.
    pub n: usize,
}

impl SchemaSpec {
    /// `N = 500`, `m = 20`, `p_c = 0.7`, `p_m = 0.01`, five initial
    /// instances.
    pub fn example(fitness_ratio: f64, delta: usize, order: usize) -> Self {
        Self {
            xi0: 5.0,
            fitness_ratio,
            p_c: 0.7,
            p_m: 0.01,
            delta,
            order,
            m: 20,
            n: 500,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 || self.delta > self.m - 1 || self.order > self.m {
            return Err(Error::InvalidParameter(format!(
                "schema needs 0 <= delta <= m - 1 and 0 <= order <= m, got {self:?}"
            )));
        }
        if !(self.xi0 >= 0.0) || !(self.fitness_ratio >= 0.0) || self.n == 0 {
            return Err(Error::InvalidParameter("counts and ratios must be non-negative".into()));
        }
        Ok(())
    }

    /// `1 - p_c delta / (m - 1) - o p_m`.
    pub fn survival(&self) -> f64 {
        1.0 - self.p_c * self.delta as f64 / (self.m - 1) as f64 - self.order as f64 * self.p_m
    }

    /// Per-generation multiplier of the expected count, never negative.
    pub fn growth_factor(&self) -> f64 {
        (self.fitness_ratio * self.survival()).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaCell {
    Count(u64),
    /// The schema dominates the population; the fixed-mean-fitness
    /// assumption no longer holds.
    Takeover,
}

impl std::fmt::Display for SchemaCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SchemaCell::Count(c) => write!(f, "{c}"),
            SchemaCell::Takeover => f.write_str("--"),
        }
    }
}

/// Expected counts for generations `1..=generations`; generation 1 is the
/// initial count. The recurrence runs on reals and is floored for
/// reporting; once the count exceeds `takeover * N` every later generation
/// is [`SchemaCell::Takeover`].
pub fn schema_growth(spec: &SchemaSpec, generations: usize, takeover: f64) -> Result<Vec<SchemaCell>> {
    spec.validate()?;
    if generations == 0 {
        return Err(Error::InvalidParameter("need at least one generation".into()));
    }
    let factor = spec.growth_factor();
    let limit = takeover * spec.n as f64;
    let mut xi = spec.xi0;
    let mut out = Vec::with_capacity(generations);
    let mut taken = false;
    for g in 1..=generations {
        if g > 1 {
            xi *= factor;
        }
        taken |= xi > limit;
        out.push(if taken {
            SchemaCell::Takeover
        } else {
            SchemaCell::Count(xi.min(spec.n as f64).floor() as u64)
        });
    }
    Ok(out)
}

/// A grid of growth series, one row per schema, sampled at `columns`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaTable {
    pub title: String,
    pub row_header: String,
    pub columns: Vec<usize>,
    pub rows: Vec<(String, Vec<SchemaCell>)>,
}

/// Generations shown in the tables: 1, 10, 20, ..., 100.
pub fn default_columns() -> Vec<usize> {
    std::iter::once(1).chain((1..=10).map(|k| 10 * k)).collect()
}

impl SchemaTable {
    pub fn build(
        title: &str,
        row_header: &str,
        rows: &[(String, SchemaSpec)],
        columns: &[usize],
        takeover: f64,
    ) -> Result<Self> {
        let last = *columns.iter().max().ok_or(Error::Empty("columns"))?;
        if columns.contains(&0) {
            return Err(Error::InvalidParameter("generation columns start at 1".into()));
        }
        let rows = rows
            .iter()
            .map(|(label, spec)| {
                let series = schema_growth(spec, last, takeover)?;
                Ok((label.clone(), columns.iter().map(|&c| series[c - 1]).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            title: title.to_string(),
            row_header: row_header.to_string(),
            columns: columns.to_vec(),
            rows,
        })
    }

    /// Varying fitness ratio with `delta = 11`, `o = 6`.
    pub fn fitness_ratio_table(takeover: f64) -> Result<Self> {
        let rows: Vec<(String, SchemaSpec)> = [1.8, 1.9, 2.0, 2.1, 2.2]
            .iter()
            .map(|&r| (format!("{r:.1}"), SchemaSpec::example(r, 11, 6)))
            .collect();
        Self::build("Effect of fitness ratio", "f(S)/F", &rows, &default_columns(), takeover)
    }

    /// Varying defining length and order with fitness ratio 1.9.
    pub fn defining_length_table(takeover: f64) -> Result<Self> {
        let rows: Vec<(String, SchemaSpec)> = [(10, 6), (10, 7), (10, 8), (11, 8), (12, 8)]
            .iter()
            .map(|&(d, o)| (format!("({d}, {o})"), SchemaSpec::example(1.9, d, o)))
            .collect();
        Self::build("Effect of defining length and order", "(delta, o)", &rows, &default_columns(), takeover)
    }

    pub fn to_text(&self) -> String {
        let label_w = self
            .rows
            .iter()
            .map(|(l, _)| l.len())
            .chain(std::iter::once(self.row_header.len()))
            .max()
            .unwrap_or(0);
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.title);
        let _ = write!(s, "{:<label_w$}", self.row_header);
        for c in &self.columns {
            let _ = write!(s, " {c:>6}");
        }
        s.push('\n');
        for (label, cells) in &self.rows {
            let _ = write!(s, "{label:<label_w$}");
            for c in cells {
                let _ = write!(s, " {:>6}", c.to_string());
            }
            s.push('\n');
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("row");
        for c in &self.columns {
            let _ = write!(s, ",g{c}");
        }
        s.push('\n');
        for (label, cells) in &self.rows {
            let _ = write!(s, "\"{label}\"");
            for c in cells {
                let _ = write!(s, ",{c}");
            }
            s.push('\n');
        }
        s
    }
}
