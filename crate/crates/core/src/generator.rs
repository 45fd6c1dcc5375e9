//! Covering-array construction: a candidate-pool greedy builder plus a
//! simulated-annealing refiner that squeezes the row count toward the
//! analytic lower bound.
//!
//! Both stages are deterministic for a fixed seed. The greedy stage adds
//! one row at a time: each candidate row fixes one still-uncovered tuple
//! drawn from the factor subset with the most uncovered tuples and fills
//! the remaining cells at random; the highest-scoring candidate wins, ties
//! going to the earliest. The refiner walks single-cell mutations under a
//! Metropolis acceptance rule with geometric cooling, deletes rows
//! whenever coverage permits, and restarts from the best complete array
//! found when the walk stagnates. The objective is lexicographic:
//! (uncovered tuples, N).

use crate::coverage::{CoverageError, CoverageLedger, CoveringArray, Row, Verification};
use crate::model::{lower_bound, FactorModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GenerateError {
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    #[error("invalid generation config: {0}")]
    InvalidConfig(String),
    #[error("refine_anneal needs a verified-complete input array")]
    IncompleteInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Anneal,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Greedy => write!(f, "greedy"),
            Algorithm::Anneal => write!(f, "anneal"),
        }
    }
}

/// Knobs for both construction stages.
#[derive(Debug, Clone)]
pub struct GenerationConfig {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Candidate rows scored per appended greedy row.
    pub candidate_pool: usize,
    /// Annealing move budget.
    pub max_iterations: u64,
    /// Wall-clock safety cap for the refiner. Checked at fixed iteration
    /// checkpoints; on models where the run terminates by hitting the
    /// lower bound or the iteration budget, output does not depend on it.
    pub time_budget: Duration,
    /// Stop refining once this size is reached.
    pub target_size: Option<usize>,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            algorithm: Algorithm::Anneal,
            seed: 0,
            candidate_pool: 50,
            max_iterations: 100_000,
            time_budget: Duration::from_secs(60),
            target_size: None,
        }
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<(), GenerateError> {
        if self.candidate_pool < 1 {
            return Err(GenerateError::InvalidConfig(
                "candidate_pool must be >= 1".into(),
            ));
        }
        if self.max_iterations < 1 {
            return Err(GenerateError::InvalidConfig(
                "max_iterations must be >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }
}

/// How an array was produced. `wall` is process-local diagnostics and is
/// deliberately excluded from serialization and equality so that repeated
/// runs emit byte-identical plan files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationMeta {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub iterations: u64,
    pub size: usize,
    pub verified: bool,
    #[serde(skip)]
    pub wall: Duration,
}

impl PartialEq for GenerationMeta {
    fn eq(&self, other: &Self) -> bool {
        self.algorithm == other.algorithm
            && self.seed == other.seed
            && self.iterations == other.iterations
            && self.size == other.size
            && self.verified == other.verified
    }
}

/// Builds a verified covering array one row at a time.
///
/// Always terminates: every candidate row fixes an uncovered tuple, so
/// each appended row strictly reduces the outstanding coverage deficit.
pub fn generate_greedy(
    model: &FactorModel,
    config: &GenerationConfig,
) -> Result<CoveringArray, GenerateError> {
    config.validate()?;
    let start = Instant::now();
    let cards = model.cardinalities();
    let k = model.factor_count();
    let mut ledger = CoverageLedger::new(model, model.strength())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows: Vec<Row> = Vec::new();

    while !ledger.is_complete() {
        let block = ledger.densest_block();
        let uncovered_here = ledger.uncovered_in_block(block);
        let mut best: Option<(usize, Row)> = None;
        for _ in 0..config.candidate_pool {
            let pick = rng.gen_range(0..uncovered_here);
            let rank = ledger.nth_uncovered_in_block(block, pick);
            let tuple = ledger.space().tuple_at(rank);
            let mut levels: Vec<usize> = (0..k).map(|f| rng.gen_range(0..cards[f])).collect();
            for (&p, &l) in tuple.positions().iter().zip(tuple.levels()) {
                levels[p] = l;
            }
            let candidate = Row::new(levels);
            let score = ledger.progress_score(&candidate);
            if best.as_ref().map_or(true, |(s, _)| score > *s) {
                best = Some((score, candidate));
            }
        }
        let (_, row) = best.expect("candidate_pool >= 1");
        ledger.add_row(&row);
        rows.push(row);
    }

    let iterations = rows.len() as u64;
    finish(model, rows, Algorithm::Greedy, config.seed, iterations, start)
}

// Annealing schedule. Delta is measured in uncovered tuples, so the
// starting temperature sits near the typical move cost.
const INITIAL_TEMP: f64 = 0.6;
const COOLING: f64 = 0.9995;
const MIN_TEMP: f64 = 1e-3;
const STAGNATION_RESET: u64 = 6_000;
const REPAIR_BIAS: f64 = 0.4;

/// Shrinks a verified-complete array without ever losing coverage in the
/// returned result. Returns the best (smallest) complete array found.
pub fn refine_anneal(
    array: &CoveringArray,
    config: &GenerationConfig,
) -> Result<CoveringArray, GenerateError> {
    config.validate()?;
    let start = Instant::now();
    let model = array.model().clone();
    let cards = model.cardinalities();

    let mut ledger = CoverageLedger::new(&model, model.strength())?;
    let mut rows = array.rows().to_vec();
    for row in &rows {
        ledger.add_row(row);
    }
    if !ledger.is_complete() {
        return Err(GenerateError::IncompleteInput);
    }

    let bound = lower_bound(&model, model.strength())
        .map_err(CoverageError::from)?
        .min(usize::MAX as u128) as usize;
    let target = config.target_size.map_or(bound, |t| t.max(bound));
    let mutable: Vec<usize> = (0..model.factor_count())
        .filter(|&f| cards[f] >= 2)
        .collect();

    let mut best = rows.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut temp = INITIAL_TEMP;
    let mut since_best: u64 = 0;
    let mut iterations: u64 = 0;

    while iterations < config.max_iterations && best.len() > target {
        if iterations % 4096 == 0 && start.elapsed() >= config.time_budget {
            break;
        }
        iterations += 1;

        // Row deletion whenever coverage permits: removal must not push
        // any tuple below lambda.
        if ledger.is_complete() {
            let n = rows.len();
            let offset = (iterations as usize) % n;
            let redundant = (0..n)
                .map(|i| (i + offset) % n)
                .find(|&i| ledger.break_count(&rows[i]) == 0);
            if let Some(i) = redundant {
                ledger.remove_row(&rows[i]);
                rows.remove(i);
                if rows.len() < best.len() {
                    best = rows.clone();
                    since_best = 0;
                }
                continue;
            }
        }

        if mutable.is_empty() {
            break;
        }

        // Single-cell mutation; when coverage is broken, bias some moves
        // toward planting an uncovered tuple's level into a random row.
        let (ri, factor, new_level) = if ledger.uncovered() > 0
            && rng.gen::<f64>() < REPAIR_BIAS
        {
            let pick = rng.gen_range(0..ledger.uncovered());
            let tuple = ledger.space().tuple_at(ledger.nth_uncovered(pick));
            let j = rng.gen_range(0..tuple.positions().len());
            let ri = rng.gen_range(0..rows.len());
            (ri, tuple.positions()[j], tuple.levels()[j])
        } else {
            let ri = rng.gen_range(0..rows.len());
            let factor = mutable[rng.gen_range(0..mutable.len())];
            let current = rows[ri].level(factor);
            let mut level = rng.gen_range(0..cards[factor] - 1);
            if level >= current {
                level += 1;
            }
            (ri, factor, level)
        };

        if new_level != rows[ri].level(factor) {
            let delta = ledger.mutation_delta(&rows[ri], factor, new_level);
            let accept = delta <= 0 || rng.gen::<f64>() < (-(delta as f64) / temp).exp();
            if accept {
                ledger.apply_mutation(&mut rows[ri], factor, new_level);
                if ledger.is_complete() && rows.len() < best.len() {
                    best = rows.clone();
                    since_best = 0;
                }
            }
        }

        temp = (temp * COOLING).max(MIN_TEMP);
        since_best += 1;
        if since_best >= STAGNATION_RESET {
            // Restart the walk from the smallest complete array so far.
            rows = best.clone();
            ledger = CoverageLedger::new(&model, model.strength())?;
            for row in &rows {
                ledger.add_row(row);
            }
            temp = INITIAL_TEMP;
            since_best = 0;
        }
    }

    finish(&model, best, Algorithm::Anneal, config.seed, iterations, start)
}

/// Facade: greedy construction, then annealing refinement when requested.
pub fn generate(
    model: &FactorModel,
    config: &GenerationConfig,
) -> Result<CoveringArray, GenerateError> {
    let start = Instant::now();
    let greedy = generate_greedy(model, config)?;
    match config.algorithm {
        Algorithm::Greedy => Ok(greedy),
        Algorithm::Anneal => {
            let greedy_iterations = greedy.meta().map_or(0, |m| m.iterations);
            let mut refined = refine_anneal(&greedy, config)?;
            if let Some(meta) = refined.meta() {
                let meta = GenerationMeta {
                    iterations: greedy_iterations + meta.iterations,
                    wall: start.elapsed(),
                    ..meta.clone()
                };
                refined.set_meta(meta);
            }
            Ok(refined)
        }
    }
}

fn finish(
    model: &FactorModel,
    rows: Vec<Row>,
    algorithm: Algorithm,
    seed: u64,
    iterations: u64,
    start: Instant,
) -> Result<CoveringArray, GenerateError> {
    let mut array = CoveringArray::new_unverified(model.clone(), rows);
    // Self-verification is mandatory before an array leaves this module.
    let verification = array.verify()?;
    debug_assert_eq!(verification, Verification::VerifiedComplete);
    let size = array.size();
    array.set_meta(GenerationMeta {
        algorithm,
        seed,
        iterations,
        size,
        verified: verification == Verification::VerifiedComplete,
        wall: start.elapsed(),
    });
    Ok(array)
}
