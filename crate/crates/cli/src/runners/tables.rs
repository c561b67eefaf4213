//! Deterministic table experiments: schema growth and flow of influence.

use swarmlab::pso::{influence_experiment, Inertia, InfluenceConfig};
use swarmlab::schema::SchemaTable;
use swarmlab::Rng;

use super::par_runs;
use crate::config::{ExperimentConfig, InfluenceSetup, SchemaConfig, SchemaTableKind};
use crate::error::CliError;
use crate::output::{num, table, OutputFile};

pub fn run_schema(cfg: &ExperimentConfig, s: &SchemaConfig) -> Result<(SchemaTable, Vec<OutputFile>), CliError> {
    let t = match s.table {
        SchemaTableKind::FitnessRatio => SchemaTable::fitness_ratio_table(s.takeover)?,
        SchemaTableKind::DefiningLength => SchemaTable::defining_length_table(s.takeover)?,
    };
    let files = vec![
        OutputFile::new(format!("{}.txt", cfg.name), t.to_text()),
        OutputFile::new(format!("{}.csv", cfg.name), t.to_csv()),
    ];
    Ok((t, files))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceReport {
    pub levels: Vec<usize>,
    /// Per level, the average particle value at iterations `0..=iterations`,
    /// averaged over repeats.
    pub curves: Vec<Vec<f64>>,
}

impl InfluenceReport {
    pub fn at(&self, level: usize, iteration: usize) -> Option<f64> {
        let k = self.levels.iter().position(|&l| l == level)?;
        self.curves[k].get(iteration).copied()
    }
}

fn influence_config(s: &InfluenceSetup, level: usize) -> InfluenceConfig {
    InfluenceConfig {
        swarm_size: s.swarm_size,
        n_clubs: s.n_clubs,
        inertia: Inertia::Random(s.w),
        phi: s.phi,
        init_lo: s.init_lo,
        init_hi: s.init_hi,
        ..InfluenceConfig::new(level, s.dims, s.iterations)
    }
}

/// Every level sees the same run seeds.
pub fn run_influence(
    cfg: &ExperimentConfig,
    s: &InfluenceSetup,
    jobs: usize,
) -> Result<(InfluenceReport, Vec<OutputFile>), CliError> {
    let mut curves = Vec::with_capacity(s.levels.len());
    for &level in &s.levels {
        let ic = influence_config(s, level);
        let runs = par_runs(cfg.repeats, jobs, |r| Ok(influence_experiment(&ic, &mut Rng::for_run(cfg.seed, r))?))?;
        let mean = (0..=s.iterations)
            .map(|t| runs.iter().map(|c| c[t]).sum::<f64>() / runs.len() as f64)
            .collect();
        curves.push(mean);
    }
    let report = InfluenceReport { levels: s.levels.clone(), curves };

    let cols: Vec<String> = report.levels.iter().map(|m| format!("m{m}")).collect();
    let mut csv = format!("iteration,{}\n", cols.join(","));
    let mut rows = Vec::new();
    for t in 0..=s.iterations {
        let vals: Vec<f64> = report.curves.iter().map(|c| c[t]).collect();
        let cells: Vec<String> = vals.iter().map(|v| num(*v)).collect();
        csv.push_str(&format!("{t},{}\n", cells.join(",")));
        if t % 10 == 0 || t == s.iterations {
            let mut row = vec![t.to_string()];
            row.extend(vals.iter().map(|v| format!("{v:.2}")));
            rows.push(row);
        }
    }
    let mut headers = vec!["Iteration"];
    headers.extend(cols.iter().map(String::as_str));
    let text = format!(
        "Average particle value, {} particles, {} clubs, {} dimensions, {} runs\n\n{}",
        s.swarm_size,
        s.n_clubs,
        s.dims,
        cfg.repeats,
        table(&headers, &rows)
    );
    let files = vec![
        OutputFile::new(format!("{}.csv", cfg.name), csv),
        OutputFile::new(format!("{}.txt", cfg.name), text),
    ];
    Ok((report, files))
}
