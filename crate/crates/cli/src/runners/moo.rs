//! Multi-objective runs on the DTLZ suite with convergence and diversity
//! tracking.

use swarmlab::benchmarks::{distance_to_front, raw_distance_to_front, Dtlz};
use swarmlab::moea::{
    diversity_metric2, extract_population, nondominated_set, nsga2_run, polyploid_run, CellPartition, ExtractionStats,
};
use swarmlab::stats::mean_std;
use swarmlab::Rng;

use super::par_runs;
use crate::config::{ExperimentConfig, MooAlgorithm, MooConfig};
use crate::error::CliError;
use crate::output::{num, short, table, OutputFile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MooPoint {
    pub evaluations: u64,
    /// Mean normalized distance of the population to the true front.
    pub avg_distance: f64,
    pub avg_raw_distance: f64,
    /// Diversity of the nondominated part of the population.
    pub diversity: f64,
}

#[derive(Debug, Clone)]
pub struct MooRun {
    pub series: Vec<MooPoint>,
    pub last: MooPoint,
    pub extraction: Option<ExtractionStats>,
}

#[derive(Debug, Clone)]
pub struct MooReport {
    pub label: String,
    pub runs: Vec<MooRun>,
}

pub fn label(m: &MooConfig) -> String {
    match &m.algorithm {
        MooAlgorithm::Polyploid(c) => format!("{}-ploid", c.ploidy),
        MooAlgorithm::Nsga2(_) => "NSGA-II".into(),
    }
}

fn measure(problem: &Dtlz, partition: &CellPartition, evaluations: u64, objs: &[Vec<f64>]) -> swarmlab::Result<MooPoint> {
    let shape = problem.front();
    let n = objs.len() as f64;
    let avg_distance = objs.iter().map(|f| distance_to_front(shape, f)).sum::<f64>() / n;
    let avg_raw_distance = objs.iter().map(|f| raw_distance_to_front(shape, f)).sum::<f64>() / n;
    let front: Vec<Vec<f64>> = nondominated_set(objs).into_iter().map(|i| objs[i].clone()).collect();
    let diversity = diversity_metric2(partition, &front)?;
    Ok(MooPoint { evaluations, avg_distance, avg_raw_distance, diversity })
}

fn one_run(m: &MooConfig, partition: &CellPartition, checkpoint: u64, rng: &mut Rng) -> swarmlab::Result<MooRun> {
    let problem = m.problem;
    let mut series: Vec<MooPoint> = Vec::new();
    let mut last: Option<MooPoint> = None;
    let mut failure: Option<swarmlab::Error> = None;
    let mut next_mark = 0u64;
    let mut observe = |evals: u64, objs: &[Vec<f64>]| {
        if failure.is_some() {
            return;
        }
        match measure(&problem, partition, evals, objs) {
            Ok(p) => {
                if evals >= next_mark {
                    series.push(p);
                    next_mark = (evals / checkpoint + 1) * checkpoint;
                }
                last = Some(p);
            }
            Err(e) => failure = Some(e),
        }
    };
    let extraction = match &m.algorithm {
        MooAlgorithm::Polyploid(c) => {
            let pop = polyploid_run(&problem, problem.n_vars(), c, m.budget, rng, &mut observe)?;
            Some(extract_population(&pop, &problem, problem.front())?)
        }
        MooAlgorithm::Nsga2(c) => {
            nsga2_run(&problem, problem.n_vars(), c, m.budget, rng, &mut observe)?;
            None
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let last = last.ok_or(swarmlab::Error::Empty("no generation was observed"))?;
    if series.last() != Some(&last) {
        series.push(last);
    }
    Ok(MooRun { series, last, extraction })
}

pub fn run_moo(cfg: &ExperimentConfig, m: &MooConfig, jobs: usize) -> Result<(MooReport, Vec<OutputFile>), CliError> {
    let partition = CellPartition::for_front(m.problem.front(), m.problem.n_obj(), m.cells)?;
    let runs = par_runs(cfg.repeats, jobs, |r| {
        let mut rng = Rng::for_run(cfg.seed, r);
        Ok(one_run(m, &partition, cfg.checkpoint, &mut rng)?)
    })?;
    let report = MooReport { label: label(m), runs };
    let files = vec![
        OutputFile::new(format!("{}_series.csv", cfg.name), series_csv(&report)),
        OutputFile::new(format!("{}_runs.csv", cfg.name), runs_csv(cfg, &report)),
        OutputFile::new(format!("{}_summary.txt", cfg.name), summary_text(cfg, m, &report)),
    ];
    Ok((report, files))
}

fn series_csv(rep: &MooReport) -> String {
    let mut s = String::from("run,evaluations,avg_distance,avg_raw_distance,diversity\n");
    for (i, r) in rep.runs.iter().enumerate() {
        for p in &r.series {
            s.push_str(&format!(
                "{i},{},{},{},{}\n",
                p.evaluations,
                num(p.avg_distance),
                num(p.avg_raw_distance),
                num(p.diversity)
            ));
        }
    }
    s
}

fn runs_csv(cfg: &ExperimentConfig, rep: &MooReport) -> String {
    let mut s = String::from(
        "run,seed,evaluations,avg_distance,avg_raw_distance,diversity,avg_distance_extracted,pct_dominated_extracted\n",
    );
    for (i, r) in rep.runs.iter().enumerate() {
        let p = r.last;
        let (ex_d, ex_p) = r
            .extraction
            .map_or((String::new(), String::new()), |e| (num(e.avg_distance_extracted), num(e.pct_dominated)));
        s.push_str(&format!(
            "{i},{},{},{},{},{},{ex_d},{ex_p}\n",
            cfg.seed + i as u64,
            p.evaluations,
            num(p.avg_distance),
            num(p.avg_raw_distance),
            num(p.diversity)
        ));
    }
    s
}

fn summary_text(cfg: &ExperimentConfig, m: &MooConfig, rep: &MooReport) -> String {
    let mut s = format!(
        "{} M={} n={}, {}, {} runs, {} evaluations each\n\n",
        m.problem.kind().name(),
        m.problem.n_obj(),
        m.problem.n_vars(),
        rep.label,
        cfg.repeats,
        m.budget
    );
    let mut metrics: Vec<(&str, fn(&MooRun) -> f64)> = vec![
        ("avg distance", |r| r.last.avg_distance),
        ("avg raw distance", |r| r.last.avg_raw_distance),
        ("diversity", |r| r.last.diversity),
    ];
    if rep.runs.iter().all(|r| r.extraction.is_some()) {
        metrics.push(("extracted avg distance", |r| r.extraction.map_or(0.0, |e| e.avg_distance_extracted)));
        metrics.push(("extracted % dominated", |r| r.extraction.map_or(0.0, |e| e.pct_dominated)));
    }
    let rows: Vec<Vec<String>> = metrics
        .into_iter()
        .map(|(name, f)| {
            let v: Vec<f64> = rep.runs.iter().map(f).collect();
            let (mean, std) = mean_std(&v);
            vec![name.to_string(), short(mean), short(std)]
        })
        .collect();
    s.push_str(&table(&["Measure", "Mean", "Std"], &rows));
    s
}
