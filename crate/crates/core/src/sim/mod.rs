//! Random manual configuration runs.
//!
//! A run starts a session and, until it is complete, picks an unassigned
//! variable uniformly at random and then a value uniformly among the
//! consistent ones. After the initial inference and after every decision
//! the minimal models of the current constraint are counted.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`): run `i` of a simulation
//! seeded with `s` uses the generator seeded from `s` via
//! `seed_from_u64` with stream `i`. Runs are therefore independent of each
//! other and of the order in which they execute.

mod generate;

pub use generate::{generate_model, SynthParams};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::statistics::Statistics;
use thiserror::Error;

use crate::logic::{ClauseSet, Var};
use crate::reasoning::ReasoningError;
use crate::session::{Session, SessionError};

/// A step with more minimal models than this aborts its run.
pub const MAX_MINIMAL_MODELS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("the model admits no products")]
    UnsatInput,
}

/// The generator for run `run` of a simulation seeded with `seed`.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    /// User decisions in order.
    pub decisions: Vec<(Var, bool)>,
    /// Minimal-model count before the first decision and after each one.
    pub counts: Vec<usize>,
    /// Set when a step exceeded [`MAX_MINIMAL_MODELS`]; the run stopped
    /// there.
    pub aborted: bool,
}

impl RunTrace {
    pub fn length(&self) -> usize {
        self.decisions.len()
    }

    /// Steps, including the initial one, with exactly one minimal model.
    pub fn done_steps(&self) -> usize {
        self.counts.iter().filter(|&&c| c == 1).count()
    }
}

/// One random manual configuration process.
pub fn simulate_run(cs: &ClauseSet, rng: &mut impl Rng) -> Result<RunTrace, SimError> {
    let mut session = Session::new(cs.clone()).map_err(|_| SimError::UnsatInput)?;
    let mut trace = RunTrace {
        decisions: Vec::new(),
        counts: Vec::new(),
        aborted: false,
    };
    loop {
        match session.minimal_model_count(MAX_MINIMAL_MODELS) {
            Ok(c) => trace.counts.push(c),
            Err(ReasoningError::LimitExceeded { .. }) => {
                trace.aborted = true;
                return Ok(trace);
            }
            Err(e) => unreachable!("session constraint became unusable: {e}"),
        }
        let open = session.unassigned();
        if open.is_empty() {
            return Ok(trace);
        }
        let v = open[rng.random_range(0..open.len())];
        let value = rng.random_bool(0.5);
        let value = match session.decide(v, value) {
            Ok(()) => value,
            Err(SessionError::InconsistentDecision(..)) => {
                // Inference keeps both values of an unassigned variable
                // consistent, so this branch is never taken.
                session
                    .decide(v, !value)
                    .expect("an unassigned variable has a consistent value");
                !value
            }
            Err(e) => unreachable!("unexpected rejection: {e}"),
        };
        trace.decisions.push((v, value));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationStats {
    pub runs: usize,
    pub seed: u64,
    /// Runs stopped by the minimal-model guard; excluded from the means.
    pub aborted_runs: usize,
    /// User decisions per run.
    pub length_mean: f64,
    pub length_sd: f64,
    /// Steps per run with exactly one minimal model.
    pub done_count_mean: f64,
    /// Over all visited steps of all completed runs.
    pub minmodels_mean: f64,
    pub minmodels_sd: f64,
    pub minmodels_max: usize,
    pub steps: usize,
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    match xs.len() {
        0 => (0.0, 0.0),
        1 => (xs[0], 0.0),
        _ => (xs.mean(), xs.std_dev()),
    }
}

/// Aggregates traces; the standard deviations are sample deviations.
pub fn aggregate(traces: &[RunTrace], seed: u64) -> SimulationStats {
    let done: Vec<&RunTrace> = traces.iter().filter(|t| !t.aborted).collect();
    let lengths: Vec<f64> = done.iter().map(|t| t.length() as f64).collect();
    let dones: Vec<f64> = done.iter().map(|t| t.done_steps() as f64).collect();
    let counts: Vec<f64> = done
        .iter()
        .flat_map(|t| t.counts.iter().map(|&c| c as f64))
        .collect();
    let (length_mean, length_sd) = mean_sd(&lengths);
    let (minmodels_mean, minmodels_sd) = mean_sd(&counts);
    SimulationStats {
        runs: traces.len(),
        seed,
        aborted_runs: traces.len() - done.len(),
        length_mean,
        length_sd,
        done_count_mean: mean_sd(&dones).0,
        minmodels_mean,
        minmodels_sd,
        minmodels_max: traces
            .iter()
            .flat_map(|t| t.counts.iter().copied())
            .max()
            .unwrap_or(0),
        steps: counts.len(),
    }
}

/// `runs` random manual configuration processes on `cs`.
pub fn simulate_manual(cs: &ClauseSet, runs: usize, seed: u64) -> Result<SimulationStats, SimError> {
    let traces = (0..runs)
        .map(|i| simulate_run(cs, &mut run_rng(seed, i as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    if runs == 0 {
        // Still reject unsatisfiable input.
        Session::new(cs.clone()).map_err(|_| SimError::UnsatInput)?;
    }
    Ok(aggregate(&traces, seed))
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub name: String,
    pub features: usize,
    pub clauses: usize,
    pub stats: SimulationStats,
}

impl TableRow {
    pub const CSV_HEADER: &'static str = "name,features,clauses,length,done,minmodels_mean,minmodels_sd";

    pub fn header() -> String {
        format!(
            "{:<16} {:>8} {:>8} {:>8} {:>8} {:>18}",
            "Name", "Features", "Clauses", "Length", "Done", "MinModels"
        )
    }

    pub fn render(&self) -> String {
        let s = &self.stats;
        let mm = format!("{:.2} ± {:.2}", s.minmodels_mean, s.minmodels_sd);
        format!(
            "{:<16} {:>8} {:>8} {:>8.2} {:>8.2} {:>18}",
            self.name, self.features, self.clauses, s.length_mean, s.done_count_mean, mm
        )
    }

    pub fn csv_record(&self) -> [String; 7] {
        let s = &self.stats;
        [
            self.name.clone(),
            self.features.to_string(),
            self.clauses.to_string(),
            format!("{:.4}", s.length_mean),
            format!("{:.4}", s.done_count_mean),
            format!("{:.4}", s.minmodels_mean),
            format!("{:.4}", s.minmodels_sd),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_model::parse_model;
    use crate::logic::{parse_expr, to_cnf, VarTable};

    fn formula(names: &[&str], src: &str) -> ClauseSet {
        let t = VarTable::from_names(names.iter().copied()).unwrap();
        to_cnf(&parse_expr(src, |n| t.lookup(n)).unwrap(), &t)
    }

    #[test]
    fn forced_model_needs_no_decisions() {
        let s = simulate_manual(&formula(&["x", "y"], "x & y"), 10, 1).unwrap();
        assert_eq!(s.length_mean, 0.0);
        assert_eq!(s.done_count_mean, 1.0);
        assert_eq!(s.minmodels_mean, 1.0);
        assert_eq!(s.steps, 10);
    }

    #[test]
    fn unsat_rejected() {
        let cs = formula(&["x"], "x & !x");
        assert_eq!(simulate_manual(&cs, 3, 1), Err(SimError::UnsatInput));
        assert_eq!(simulate_manual(&cs, 0, 1), Err(SimError::UnsatInput));
    }

    #[test]
    fn deterministic_per_seed_and_run() {
        let cs = parse_model(
            "feature x\n  feature y mandatory\n    xor\n      feature a\n      feature b\n  feature c\n  feature d\n",
        )
        .unwrap()
        .to_clauses();
        let a = simulate_manual(&cs, 50, 9).unwrap();
        let b = simulate_manual(&cs, 50, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.length_mean >= 1.0 && a.length_mean <= 3.0);
        assert!(a.done_count_mean <= a.length_mean + 1.0);
        assert!(a.minmodels_mean >= 1.0);
        let t1 = simulate_run(&cs, &mut run_rng(9, 3)).unwrap();
        let t2 = simulate_run(&cs, &mut run_rng(9, 3)).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1.counts.len(), t1.decisions.len() + 1);
    }

    #[test]
    fn table_row_shapes() {
        let row = TableRow {
            name: "sample".into(),
            features: 6,
            clauses: 9,
            stats: SimulationStats {
                runs: 2,
                seed: 0,
                aborted_runs: 0,
                length_mean: 2.5,
                length_sd: 0.5,
                done_count_mean: 1.0,
                minmodels_mean: 1.25,
                minmodels_sd: 0.5,
                minmodels_max: 2,
                steps: 8,
            },
        };
        assert_eq!(
            row.csv_record().join(","),
            "sample,6,9,2.5000,1.0000,1.2500,0.5000"
        );
        assert!(row.render().starts_with("sample"));
        assert!(row.render().ends_with("1.25 ± 0.50"));
        assert_eq!(TableRow::CSV_HEADER.split(',').count(), 7);
    }
}
