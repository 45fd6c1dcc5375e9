//! Interaction-tuple enumeration and coverage measurement.
//!
//! A strength-`t` interaction tuple picks `t` distinct factors and one
//! level for each; a row set covers the model when every tuple occurs in
//! at least `lambda` rows. Tuples are kept in a canonical order
//! (lexicographic by factor positions, then by levels) and each tuple has
//! a dense integer rank, so occurrence counts live in a flat array and
//! diagnostics iterate deterministically.

use crate::generator::GenerationMeta;
use crate::model::{FactorModel, ModelError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoverageError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("row index {row}: factor `{factor}` has level index {level}, cardinality is {cardinality}")]
    LevelOutOfRange {
        row: usize,
        factor: String,
        level: usize,
        cardinality: usize,
    },
    #[error("row index {row}: expected {expected} assignments, found {found}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
}

/// One experiment as level indices, aligned with the model's factor order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    levels: Vec<usize>,
}

impl Row {
    pub fn new(levels: Vec<usize>) -> Self {
        Row { levels }
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level(&self, factor: usize) -> usize {
        self.levels[factor]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub(crate) fn set(&mut self, factor: usize, level: usize) {
        self.levels[factor] = level;
    }
}

impl From<Vec<usize>> for Row {
    fn from(levels: Vec<usize>) -> Self {
        Row::new(levels)
    }
}

/// A choice of `t` distinct factors (strictly increasing positions) with
/// one level index per chosen factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InteractionTuple {
    positions: Vec<usize>,
    levels: Vec<usize>,
}

impl InteractionTuple {
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Whether `row` displays this tuple.
    pub fn matches(&self, row: &Row) -> bool {
        self.positions
            .iter()
            .zip(&self.levels)
            .all(|(&p, &l)| row.level(p) == l)
    }

    /// Human rendering: `Factor=label, Factor=label`.
    pub fn describe(&self, model: &FactorModel) -> String {
        self.positions
            .iter()
            .zip(&self.levels)
            .map(|(&p, &l)| format!("{}={}", model.factor(p).name(), model.factor(p).level_label(l)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// One `t`-subset of factor positions plus the layout of its tuple block
/// in rank space: `rank = offset + sum(weight[j] * level[j])`.
#[derive(Debug, Clone)]
struct Block {
    positions: Vec<usize>,
    offset: usize,
    size: usize,
    weights: Vec<usize>,
}

/// Dense rank space of all strength-`t` tuples of a model.
#[derive(Debug, Clone)]
pub struct TupleSpace {
    cards: Vec<usize>,
    strength: usize,
    blocks: Vec<Block>,
    by_factor: Vec<Vec<usize>>,
    total: usize,
}

impl TupleSpace {
    pub fn new(model: &FactorModel, strength: usize) -> Result<Self, CoverageError> {
        let k = model.factor_count();
        if strength < 1 {
            return Err(ModelError::StrengthTooSmall.into());
        }
        if strength > k {
            return Err(ModelError::StrengthTooLarge {
                strength,
                factors: k,
            }
            .into());
        }
        let cards = model.cardinalities();
        let mut blocks = Vec::new();
        let mut by_factor = vec![Vec::new(); k];
        let mut offset = 0usize;

        // Lexicographic enumeration of t-subsets of 0..k.
        let mut positions: Vec<usize> = (0..strength).collect();
        loop {
            let mut weights = vec![1usize; strength];
            for j in (0..strength.saturating_sub(1)).rev() {
                weights[j] = weights[j + 1] * cards[positions[j + 1]];
            }
            let size: usize = positions.iter().map(|&p| cards[p]).product();
            for &p in &positions {
                by_factor[p].push(blocks.len());
            }
            blocks.push(Block {
                positions: positions.clone(),
                offset,
                size,
                weights,
            });
            offset += size;

            // Advance to the next combination.
            let mut i = strength;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if positions[i] != i + k - strength {
                    positions[i] += 1;
                    for j in i + 1..strength {
                        positions[j] = positions[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    positions.clear();
                    break;
                }
            }
            if positions.is_empty() {
                break;
            }
        }

        Ok(TupleSpace {
            cards,
            strength,
            blocks,
            by_factor,
            total: offset,
        })
    }

    /// Total number of tuples.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    fn block_count(&self) -> usize {
        self.blocks.len()
    }

    fn rank_in_block(&self, block: usize, row: &Row) -> usize {
        let b = &self.blocks[block];
        let mut rank = b.offset;
        for (j, &p) in b.positions.iter().enumerate() {
            rank += b.weights[j] * row.level(p);
        }
        rank
    }

    /// The tuple at a given rank.
    pub fn tuple_at(&self, rank: usize) -> InteractionTuple {
        let block = self
            .blocks
            .partition_point(|b| b.offset + b.size <= rank)
            .min(self.blocks.len() - 1);
        let b = &self.blocks[block];
        let mut rem = rank - b.offset;
        let mut levels = vec![0usize; self.strength];
        for j in 0..self.strength {
            levels[j] = rem / b.weights[j];
            rem %= b.weights[j];
        }
        InteractionTuple {
            positions: b.positions.clone(),
            levels,
        }
    }

    /// All tuples in canonical (rank) order.
    pub fn iter(&self) -> impl Iterator<Item = InteractionTuple> + '_ {
        (0..self.total).map(|r| self.tuple_at(r))
    }
}

fn validate_rows(rows: &[Row], model: &FactorModel) -> Result<(), CoverageError> {
    let k = model.factor_count();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != k {
            return Err(CoverageError::RowLength {
                row: i,
                expected: k,
                found: row.len(),
            });
        }
        for (f, &level) in row.levels().iter().enumerate() {
            let card = model.factor(f).cardinality();
            if level >= card {
                return Err(CoverageError::LevelOutOfRange {
                    row: i,
                    factor: model.factor(f).name().to_string(),
                    level,
                    cardinality: card,
                });
            }
        }
    }
    Ok(())
}

/// Per-tuple occurrence counts for a row set.
///
/// Supports incremental row addition/removal and single-cell mutation
/// deltas, which is what the generator needs; results are identical to
/// recounting from scratch.
#[derive(Debug, Clone)]
pub struct CoverageLedger {
    space: TupleSpace,
    multiplicity: u32,
    counts: Vec<u32>,
    covered: usize,
    rows_counted: usize,
    uncovered_by_block: Vec<usize>,
}

impl CoverageLedger {
    pub fn new(model: &FactorModel, strength: usize) -> Result<Self, CoverageError> {
        let space = TupleSpace::new(model, strength)?;
        let uncovered_by_block = space.blocks.iter().map(|b| b.size).collect();
        let total = space.total();
        Ok(CoverageLedger {
            space,
            multiplicity: model.multiplicity(),
            counts: vec![0; total],
            covered: 0,
            rows_counted: 0,
            uncovered_by_block,
        })
    }

    pub fn space(&self) -> &TupleSpace {
        &self.space
    }

    pub fn total(&self) -> usize {
        self.space.total()
    }

    /// Tuples occurring at least `lambda` times.
    pub fn covered(&self) -> usize {
        self.covered
    }

    pub fn covered_fraction(&self) -> f64 {
        if self.total() == 0 {
            1.0
        } else {
            self.covered as f64 / self.total() as f64
        }
    }

    pub fn is_complete(&self) -> bool {
        self.covered == self.total()
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn rows_counted(&self) -> usize {
        self.rows_counted
    }

    pub fn occurrences(&self, tuple: &InteractionTuple) -> u32 {
        let row = {
            // Project the tuple onto a scratch row; only its positions matter.
            let mut levels = vec![0usize; self.space.cards.len()];
            for (&p, &l) in tuple.positions.iter().zip(&tuple.levels) {
                levels[p] = l;
            }
            Row::new(levels)
        };
        let block = self
            .space
            .blocks
            .iter()
            .position(|b| b.positions == tuple.positions)
            .expect("tuple positions belong to this space");
        self.counts[self.space.rank_in_block(block, &row)]
    }

    /// Tuples still below `lambda`, in canonical order.
    pub fn missing(&self) -> Vec<InteractionTuple> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c < self.multiplicity)
            .map(|(rank, _)| self.space.tuple_at(rank))
            .collect()
    }

    pub fn add_row(&mut self, row: &Row) {
        for block in 0..self.space.block_count() {
            let rank = self.space.rank_in_block(block, row);
            self.counts[rank] += 1;
            if self.counts[rank] == self.multiplicity {
                self.covered += 1;
                self.uncovered_by_block[block] -= 1;
            }
        }
        self.rows_counted += 1;
    }

    pub fn remove_row(&mut self, row: &Row) {
        for block in 0..self.space.block_count() {
            let rank = self.space.rank_in_block(block, row);
            if self.counts[rank] == self.multiplicity {
                self.covered -= 1;
                self.uncovered_by_block[block] += 1;
            }
            self.counts[rank] -= 1;
        }
        self.rows_counted -= 1;
    }

    /// How many of the row's tuples are still uncovered — the greedy
    /// score (for lambda = 1 this is exactly the newly-covered count).
    pub(crate) fn progress_score(&self, row: &Row) -> usize {
        (0..self.space.block_count())
            .filter(|&b| self.counts[self.space.rank_in_block(b, row)] < self.multiplicity)
            .count()
    }

    /// How many tuples would drop below `lambda` if `row` were removed.
    pub(crate) fn break_count(&self, row: &Row) -> usize {
        (0..self.space.block_count())
            .filter(|&b| self.counts[self.space.rank_in_block(b, row)] == self.multiplicity)
            .count()
    }

    /// Signed change in the uncovered-tuple count if `row[factor]` were
    /// set to `new_level`. Does not mutate.
    pub(crate) fn mutation_delta(&self, row: &Row, factor: usize, new_level: usize) -> i64 {
        let old_level = row.level(factor);
        if new_level == old_level {
            return 0;
        }
        let mut delta = 0i64;
        for &block in &self.space.by_factor[factor] {
            let b = &self.space.blocks[block];
            let w = b.weights[b.positions.iter().position(|&p| p == factor).unwrap()];
            let old_rank = self.space.rank_in_block(block, row);
            let new_rank = (old_rank as i64 + w as i64 * (new_level as i64 - old_level as i64))
                as usize;
            if self.counts[old_rank] == self.multiplicity {
                delta += 1; // loses coverage
            }
            if self.counts[new_rank] + 1 == self.multiplicity {
                delta -= 1; // gains coverage
            }
        }
        delta
    }

    /// Applies a single-cell mutation, updating the row and all counts.
    pub(crate) fn apply_mutation(&mut self, row: &mut Row, factor: usize, new_level: usize) {
        if new_level == row.level(factor) {
            return;
        }
        for &block in &self.space.by_factor[factor] {
            let old_rank = self.space.rank_in_block(block, row);
            if self.counts[old_rank] == self.multiplicity {
                self.covered -= 1;
                self.uncovered_by_block[block] += 1;
            }
            self.counts[old_rank] -= 1;
        }
        row.set(factor, new_level);
        for &block in &self.space.by_factor[factor] {
            let new_rank = self.space.rank_in_block(block, row);
            self.counts[new_rank] += 1;
            if self.counts[new_rank] == self.multiplicity {
                self.covered += 1;
                self.uncovered_by_block[block] -= 1;
            }
        }
    }

    /// Block (position subset) with the most uncovered tuples; first wins ties.
    pub(crate) fn densest_block(&self) -> usize {
        let mut best = 0;
        for (b, &u) in self.uncovered_by_block.iter().enumerate() {
            if u > self.uncovered_by_block[best] {
                best = b;
            }
        }
        best
    }

    pub(crate) fn uncovered_in_block(&self, block: usize) -> usize {
        self.uncovered_by_block[block]
    }

    /// Rank of the `n`-th uncovered tuple within a block (canonical order).
    pub(crate) fn nth_uncovered_in_block(&self, block: usize, n: usize) -> usize {
        let b = &self.space.blocks[block];
        let mut seen = 0;
        for rank in b.offset..b.offset + b.size {
            if self.counts[rank] < self.multiplicity {
                if seen == n {
                    return rank;
                }
                seen += 1;
            }
        }
        panic!("block {block} has fewer than {n} uncovered tuples");
    }

    /// Rank of the `n`-th uncovered tuple over the whole space.
    pub(crate) fn nth_uncovered(&self, n: usize) -> usize {
        let mut remaining = n;
        for (block, &u) in self.uncovered_by_block.iter().enumerate() {
            if remaining < u {
                return self.nth_uncovered_in_block(block, remaining);
            }
            remaining -= u;
        }
        panic!("fewer than {n} uncovered tuples");
    }

    pub(crate) fn uncovered(&self) -> usize {
        self.total() - self.covered
    }
}

/// Verification status of a row set against its model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verification {
    Unverified,
    VerifiedComplete,
    VerifiedIncomplete,
}

/// An `N x k` array of rows bound to a model, with its verification state
/// and optional generation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringArray {
    model: FactorModel,
    rows: Vec<Row>,
    verification: Verification,
    meta: Option<GenerationMeta>,
}

impl CoveringArray {
    pub fn new_unverified(model: FactorModel, rows: Vec<Row>) -> Self {
        CoveringArray {
            model,
            rows,
            verification: Verification::Unverified,
            meta: None,
        }
    }

    pub fn model(&self) -> &FactorModel {
        &self.model
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Number of rows (the symbol `N`).
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn verification(&self) -> Verification {
        self.verification
    }

    pub fn meta(&self) -> Option<&GenerationMeta> {
        self.meta.as_ref()
    }

    pub fn set_meta(&mut self, meta: GenerationMeta) {
        self.meta = Some(meta);
    }

    /// Re-checks coverage and updates the verification state.
    pub fn verify(&mut self) -> Result<Verification, CoverageError> {
        self.verification = if is_covering_array(&self.rows, &self.model)? {
            Verification::VerifiedComplete
        } else {
            Verification::VerifiedIncomplete
        };
        Ok(self.verification)
    }
}

/// All strength-`t` tuples of a model, in canonical order.
pub fn enumerate_tuples(
    model: &FactorModel,
    strength: usize,
) -> Result<Vec<InteractionTuple>, CoverageError> {
    let space = TupleSpace::new(model, strength)?;
    Ok(space.iter().collect())
}

/// Closed-form tuple count: the sum over all `t`-subsets of factors of
/// the product of their cardinalities.
pub fn tuple_count(model: &FactorModel, strength: usize) -> Result<u64, CoverageError> {
    let space = TupleSpace::new(model, strength)?;
    Ok(space.blocks.iter().map(|b| b.size as u64).sum())
}

/// Counts, for every tuple of the model, how many rows display it.
pub fn coverage_of(rows: &[Row], model: &FactorModel) -> Result<CoverageLedger, CoverageError> {
    validate_rows(rows, model)?;
    let mut ledger = CoverageLedger::new(model, model.strength())?;
    for row in rows {
        ledger.add_row(row);
    }
    Ok(ledger)
}

/// Exactly the tuples occurring fewer than `lambda` times, canonical order.
pub fn missing_tuples(
    rows: &[Row],
    model: &FactorModel,
) -> Result<Vec<InteractionTuple>, CoverageError> {
    Ok(coverage_of(rows, model)?.missing())
}

/// True iff every tuple occurs at least `lambda` times.
pub fn is_covering_array(rows: &[Row], model: &FactorModel) -> Result<bool, CoverageError> {
    Ok(coverage_of(rows, model)?.is_complete())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_model, Factor};

    fn model_of(cards: &[usize], t: usize) -> FactorModel {
        let factors = cards
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                Factor::new(format!("F{i}"), (0..c).map(|l| format!("L{l}"))).unwrap()
            })
            .collect();
        FactorModel::new(factors, t, 1).unwrap()
    }

    fn table1() -> FactorModel {
        parse_model(
            &std::fs::read_to_string(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/../../fixtures/table1.model.json"
            ))
            .unwrap(),
        )
        .unwrap()
    }

    /// Table 2 of the reference experiment set, as level indices.
    pub(crate) fn table2_rows() -> Vec<Row> {
        [
            [1, 1, 0, 0, 1],
            [0, 2, 0, 1, 2],
            [1, 0, 0, 2, 3],
            [0, 1, 0, 3, 0],
            [0, 0, 1, 0, 2],
            [1, 1, 1, 1, 3],
            [1, 2, 1, 2, 0],
            [1, 0, 1, 3, 1],
            [0, 2, 2, 0, 3],
            [1, 0, 2, 1, 0],
            [0, 1, 2, 2, 1],
            [1, 1, 2, 3, 2],
            [0, 0, 3, 0, 0],
            [1, 2, 3, 1, 1],
            [1, 1, 3, 2, 2],
            [1, 2, 3, 3, 3],
        ]
        .iter()
        .map(|levels| Row::new(levels.to_vec()))
        .collect()
    }

    fn full_factorial(cards: &[usize]) -> Vec<Row> {
        let mut rows = vec![vec![]];
        for &c in cards {
            rows = rows
                .into_iter()
                .flat_map(|prefix| {
                    (0..c).map(move |l| {
                        let mut r = prefix.clone();
                        r.push(l);
                        r
                    })
                })
                .collect();
        }
        rows.into_iter().map(Row::new).collect()
    }

    #[test]
    fn tuple_counts_match_examples() {
        assert_eq!(tuple_count(&table1(), 2).unwrap(), 114);
        assert_eq!(tuple_count(&table1(), 1).unwrap(), 17);
        assert_eq!(tuple_count(&model_of(&[2, 2], 2), 2).unwrap(), 4);
        assert_eq!(enumerate_tuples(&table1(), 2).unwrap().len(), 114);
    }

    #[test]
    fn enumeration_is_canonical() {
        let tuples = enumerate_tuples(&model_of(&[2, 2, 2], 2), 2).unwrap();
        let rendered: Vec<(Vec<usize>, Vec<usize>)> = tuples
            .iter()
            .map(|t| (t.positions().to_vec(), t.levels().to_vec()))
            .collect();
        assert_eq!(
            rendered,
            vec![
                (vec![0, 1], vec![0, 0]),
                (vec![0, 1], vec![0, 1]),
                (vec![0, 1], vec![1, 0]),
                (vec![0, 1], vec![1, 1]),
                (vec![0, 2], vec![0, 0]),
                (vec![0, 2], vec![0, 1]),
                (vec![0, 2], vec![1, 0]),
                (vec![0, 2], vec![1, 1]),
                (vec![1, 2], vec![0, 0]),
                (vec![1, 2], vec![0, 1]),
                (vec![1, 2], vec![1, 0]),
                (vec![1, 2], vec![1, 1]),
            ]
        );
    }

    #[test]
    fn tuple_at_round_trips_rank() {
        let space = TupleSpace::new(&table1(), 2).unwrap();
        for (rank, tuple) in space.iter().enumerate() {
            let mut probe = vec![0usize; 5];
            for (&p, &l) in tuple.positions().iter().zip(tuple.levels()) {
                probe[p] = l;
            }
            let block = space
                .blocks
                .iter()
                .position(|b| b.positions == tuple.positions)
                .unwrap();
            assert_eq!(space.rank_in_block(block, &Row::new(probe)), rank);
        }
    }

    #[test]
    fn table2_covers_everything() {
        let ledger = coverage_of(&table2_rows(), &table1()).unwrap();
        assert_eq!(ledger.covered(), 114);
        assert_eq!(ledger.total(), 114);
        assert!(ledger.is_complete());
        assert!(missing_tuples(&table2_rows(), &table1()).unwrap().is_empty());
        assert!(is_covering_array(&table2_rows(), &table1()).unwrap());
    }

    #[test]
    fn empty_row_set_covers_nothing() {
        let ledger = coverage_of(&[], &table1()).unwrap();
        assert_eq!(ledger.covered(), 0);
        assert_eq!(ledger.total(), 114);
        let model = model_of(&[2, 2], 2);
        assert_eq!(missing_tuples(&[], &model).unwrap().len(), 4);
    }

    // Dropping row 1 loses every pair that only row 1 displayed. The three
    // 4-level x 4-level blocks of this array are perfect grids (16 distinct
    // pairs in 16 rows), so each row uniquely carries one pair per grid and
    // a deletion always costs at least three tuples; row 1 also uniquely
    // carries two more. Frozen from the brute-force oracle scan.
    #[test]
    fn dropping_first_row_loses_five_tuples() {
        let rows: Vec<Row> = table2_rows()[1..].to_vec();
        let model = table1();
        let ledger = coverage_of(&rows, &model).unwrap();
        assert_eq!(ledger.covered(), 109);
        let missing = ledger.missing();
        let described: Vec<String> = missing.iter().map(|t| t.describe(&model)).collect();
        assert_eq!(
            described,
            vec![
                "Load_Balancing=Based on Destination, IP_forwarding_Class=best-effort",
                "TCP_parameter=New Reno, IP_forwarding_Class=best-effort",
                "Hello_Interval_Time=5, IP_forwarding_Class=best-effort",
                "Hello_Interval_Time=5, Receive_Buffer=32768",
                "IP_forwarding_Class=best-effort, Receive_Buffer=32768",
            ]
        );
        assert!(described
            .iter()
            .any(|d| d == "Hello_Interval_Time=5, IP_forwarding_Class=best-effort"));
    }

    #[test]
    fn any_fifteen_row_subset_is_incomplete() {
        let rows = table2_rows();
        let model = table1();
        for drop in 0..rows.len() {
            let subset: Vec<Row> = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, r)| r.clone())
                .collect();
            assert!(
                !is_covering_array(&subset, &model).unwrap(),
                "dropping row {drop} should break coverage"
            );
        }
    }

    #[test]
    fn full_factorial_is_complete_at_every_strength() {
        let cards = [2usize, 3, 2];
        let rows = full_factorial(&cards);
        for t in 1..=cards.len() {
            let model = model_of(&cards, t);
            assert!(is_covering_array(&rows, &model).unwrap(), "strength {t}");
        }
    }

    #[test]
    fn invalid_rows_name_row_and_factor() {
        let model = model_of(&[2, 3], 2);
        let err = coverage_of(&[Row::new(vec![0, 3])], &model).unwrap_err();
        assert_eq!(
            err,
            CoverageError::LevelOutOfRange {
                row: 0,
                factor: "F1".into(),
                level: 3,
                cardinality: 3
            }
        );
        let err = coverage_of(&[Row::new(vec![0])], &model).unwrap_err();
        assert_eq!(
            err,
            CoverageError::RowLength {
                row: 0,
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn occurrence_sum_equals_rows_times_subsets() {
        let model = table1();
        let rows = table2_rows();
        let ledger = coverage_of(&rows, &model).unwrap();
        let sum: u64 = ledger.counts.iter().map(|&c| c as u64).sum();
        assert_eq!(sum, rows.len() as u64 * 10); // C(5,2) = 10
        assert_eq!(ledger.rows_counted(), rows.len());
    }

    #[test]
    fn multiplicity_two_needs_repeats() {
        let model = table1().with_multiplicity(2).unwrap();
        let rows = table2_rows();
        let ledger = coverage_of(&rows, &model).unwrap();
        assert!(!ledger.is_complete());
        assert!(ledger.covered() < 114);

        let doubled: Vec<Row> = rows.iter().chain(rows.iter()).cloned().collect();
        assert!(is_covering_array(&doubled, &model).unwrap());
    }

    #[test]
    fn incremental_updates_match_recount() {
        let model = table1();
        let rows = table2_rows();
        let mut ledger = CoverageLedger::new(&model, 2).unwrap();
        for row in &rows {
            ledger.add_row(row);
        }
        ledger.remove_row(&rows[3]);
        let mut expect = coverage_of(
            &rows
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != 3)
                .map(|(_, r)| r.clone())
                .collect::<Vec<_>>(),
            &model,
        )
        .unwrap();
        assert_eq!(ledger.covered(), expect.covered());
        assert_eq!(ledger.counts, expect.counts);

        // Mutate one cell and compare against a fresh count.
        let mut row = rows[0].clone();
        let delta = ledger.mutation_delta(&row, 2, 3);
        let before = ledger.uncovered();
        ledger.apply_mutation(&mut row, 2, 3);
        assert_eq!(ledger.uncovered() as i64, before as i64 + delta);
        expect.remove_row(&rows[0]);
        expect.add_row(&row);
        assert_eq!(ledger.counts, expect.counts);
    }

    #[test]
    fn describe_renders_labels() {
        let model = table1();
        let space = TupleSpace::new(&model, 2).unwrap();
        let tuple = space.tuple_at(0);
        assert_eq!(
            tuple.describe(&model),
            "Load_Balancing=Based on Packets, TCP_parameter=Reno"
        );
    }
}
