//! Result analysis: band experiments into performance groups, find the
//! factor levels every group member shares, screen per-level main
//! effects, and rank the best configurations.

use crate::plan::{ExperimentPlan, ResultSet};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AnalysisError {
    #[error("no results to analyze")]
    EmptyResults,
    #[error("thresholds must be strictly increasing")]
    NonMonotoneThresholds,
    #[error("unknown experiment id {id}: plan has experiments 1..={max}")]
    UnknownExperiment { id: u32, max: u32 },
    #[error("member list is empty")]
    EmptyMembers,
    #[error("requested count must be >= 1")]
    ZeroCount,
}

/// Which end of the metric scale is good.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Fewer dropped packets is better — the default.
    LowerIsBetter,
    HigherIsBetter,
}

impl Default for Direction {
    fn default() -> Self {
        Direction::LowerIsBetter
    }
}

/// How to split results into performance bands.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupingMethod {
    /// Split the sorted metrics at the largest gaps. With `groups: None`
    /// the group count is chosen automatically (see [`group_experiments`]).
    Gap { groups: Option<usize> },
    /// Explicit band edges, strictly increasing. A value equal to an edge
    /// belongs to the lower band.
    Thresholds(Vec<f64>),
}

/// One factor level shared by every member of a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonLevel {
    pub factor: String,
    pub level: String,
}

/// One performance band: observed metric range, member experiment ids
/// (ascending), and the levels common to every member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Group {
    pub low: f64,
    pub high: f64,
    pub members: Vec<u32>,
    pub common_levels: Vec<CommonLevel>,
}

/// Grouping outcome. Groups are ordered best first under the declared
/// direction and partition the result set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupingReport {
    pub direction: Direction,
    pub method: String,
    pub groups: Vec<Group>,
    pub warnings: Vec<String>,
}

impl GroupingReport {
    pub fn best_group(&self) -> &Group {
        &self.groups[0]
    }

    pub fn worst_group(&self) -> &Group {
        self.groups.last().unwrap()
    }

    /// Fills in `common_levels` for every group from the plan.
    pub fn annotate_common_levels(&mut self, plan: &ExperimentPlan) -> Result<(), AnalysisError> {
        for group in &mut self.groups {
            group.common_levels = common_levels(plan, &group.members)?;
        }
        Ok(())
    }
}

/// Splits results into performance bands.
///
/// Gap method: metrics are sorted and cut at the `g - 1` largest strictly
/// positive gaps (ties by position). When no group count is requested the
/// count is picked by the sharpest knee: over g in 2..=6 (capped by the
/// number of positive gaps plus one), choose the g maximizing the ratio
/// of the smallest used gap to the largest unused gap; with no positive
/// gaps everything is one group.
pub fn group_experiments(
    results: &ResultSet,
    method: &GroupingMethod,
    direction: Direction,
) -> Result<GroupingReport, AnalysisError> {
    if results.is_empty() {
        return Err(AnalysisError::EmptyResults);
    }
    let mut entries: Vec<(u32, f64)> = results.iter().collect();
    entries.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let mut warnings = Vec::new();
    let (mut ascending_groups, method_name) = match method {
        GroupingMethod::Thresholds(edges) => {
            if edges.is_empty() || edges.windows(2).any(|w| w[0] >= w[1]) {
                return Err(AnalysisError::NonMonotoneThresholds);
            }
            let mut buckets: Vec<Vec<(u32, f64)>> = vec![Vec::new(); edges.len() + 1];
            for &(id, v) in &entries {
                // Boundary ties go to the lower band.
                let band = edges.partition_point(|&e| e < v);
                buckets[band].push((id, v));
            }
            let name = format!(
                "thresholds({})",
                edges
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            );
            (
                buckets.into_iter().filter(|b| !b.is_empty()).collect::<Vec<_>>(),
                name,
            )
        }
        GroupingMethod::Gap { groups } => {
            let gaps: Vec<(usize, f64)> = entries
                .windows(2)
                .enumerate()
                .map(|(i, w)| (i, w[1].1 - w[0].1))
                .filter(|&(_, g)| g > 0.0)
                .collect();
            let max_groups = gaps.len() + 1;
            let requested = match groups {
                Some(g) => {
                    if *g > max_groups {
                        warnings.push(format!(
                            "requested {g} groups but only {max_groups} distinct bands exist"
                        ));
                    }
                    (*g).clamp(1, max_groups)
                }
                None => auto_group_count(&gaps),
            };
            let mut by_size: Vec<(usize, f64)> = gaps.clone();
            by_size.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let mut cuts: Vec<usize> = by_size[..requested - 1].iter().map(|&(i, _)| i).collect();
            cuts.sort_unstable();

            let mut buckets = Vec::new();
            let mut start = 0;
            for &cut in &cuts {
                buckets.push(entries[start..=cut].to_vec());
                start = cut + 1;
            }
            buckets.push(entries[start..].to_vec());
            let name = match groups {
                Some(g) => format!("gap(g={g})"),
                None => format!("gap(auto, g={requested})"),
            };
            (buckets, name)
        }
    };

    for bucket in &mut ascending_groups {
        bucket.sort_by_key(|&(id, _)| id);
    }
    let mut groups: Vec<Group> = ascending_groups
        .into_iter()
        .map(|bucket| {
            let low = bucket
                .iter()
                .map(|&(_, v)| v)
                .fold(f64::INFINITY, f64::min);
            let high = bucket
                .iter()
                .map(|&(_, v)| v)
                .fold(f64::NEG_INFINITY, f64::max);
            Group {
                low,
                high,
                members: bucket.into_iter().map(|(id, _)| id).collect(),
                common_levels: Vec::new(),
            }
        })
        .collect();
    if direction == Direction::HigherIsBetter {
        groups.reverse();
    }
    Ok(GroupingReport {
        direction,
        method: method_name,
        groups,
        warnings,
    })
}

fn auto_group_count(gaps: &[(usize, f64)]) -> usize {
    if gaps.is_empty() {
        return 1;
    }
    let mut sizes: Vec<f64> = gaps.iter().map(|&(_, g)| g).collect();
    sizes.sort_by(|a, b| b.total_cmp(a));
    let max_g = (sizes.len() + 1).min(6);
    let mut best = (2usize, f64::NEG_INFINITY);
    for g in 2..=max_g {
        let used = sizes[g - 2];
        let score = match sizes.get(g - 1) {
            Some(&next) if next > 0.0 => used / next,
            _ => f64::INFINITY,
        };
        if score > best.1 {
            best = (g, score);
        }
    }
    best.0
}

/// Exactly the (factor, level) pairs shared by every member, in model
/// factor order; empty when the members agree on nothing.
pub fn common_levels(
    plan: &ExperimentPlan,
    members: &[u32],
) -> Result<Vec<CommonLevel>, AnalysisError> {
    if members.is_empty() {
        return Err(AnalysisError::EmptyMembers);
    }
    let max = plan.len() as u32;
    for &id in members {
        if id == 0 || id > max {
            return Err(AnalysisError::UnknownExperiment { id, max });
        }
    }
    let model = plan.model();
    let mut shared = Vec::new();
    for (f, factor) in model.factors().iter().enumerate() {
        let first = plan.rows()[members[0] as usize - 1].level(f);
        if members
            .iter()
            .all(|&id| plan.rows()[id as usize - 1].level(f) == first)
        {
            shared.push(CommonLevel {
                factor: factor.name().to_string(),
                level: factor.level_label(first).to_string(),
            });
        }
    }
    Ok(shared)
}

/// Mean metric and support for one level of one factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelEffect {
    pub label: String,
    /// Arithmetic mean over supporting experiments; `None` when no
    /// experiment with a result carries this level.
    pub mean: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorEffect {
    pub name: String,
    pub levels: Vec<LevelEffect>,
    /// Max level mean minus min level mean, over supported levels.
    pub range: f64,
}

/// Main-effects screen: per-level means, per-factor ranges, and factors
/// ranked by range (ties broken by model order).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectReport {
    pub direction: Direction,
    pub factors: Vec<FactorEffect>,
    /// Factor indices, largest range first.
    pub ranking: Vec<usize>,
    pub warnings: Vec<String>,
}

impl EffectReport {
    pub fn ranked_names(&self) -> Vec<&str> {
        self.ranking
            .iter()
            .map(|&i| self.factors[i].name.as_str())
            .collect()
    }
}

pub fn main_effects(
    plan: &ExperimentPlan,
    results: &ResultSet,
    direction: Direction,
) -> Result<EffectReport, AnalysisError> {
    if results.is_empty() {
        return Err(AnalysisError::EmptyResults);
    }
    let max = plan.len() as u32;
    for (id, _) in results.iter() {
        if id == 0 || id > max {
            return Err(AnalysisError::UnknownExperiment { id, max });
        }
    }

    let model = plan.model();
    let mut warnings = Vec::new();
    let mut factors = Vec::with_capacity(model.factor_count());
    for (f, factor) in model.factors().iter().enumerate() {
        let mut sums = vec![0.0f64; factor.cardinality()];
        let mut counts = vec![0usize; factor.cardinality()];
        for (id, value) in results.iter() {
            let level = plan.rows()[id as usize - 1].level(f);
            sums[level] += value;
            counts[level] += 1;
        }
        let levels: Vec<LevelEffect> = factor
            .levels()
            .iter()
            .enumerate()
            .map(|(l, label)| LevelEffect {
                label: label.clone(),
                mean: (counts[l] > 0).then(|| sums[l] / counts[l] as f64),
                count: counts[l],
            })
            .collect();
        for level in &levels {
            if level.count == 0 {
                warnings.push(format!(
                    "factor `{}` level `{}` has no supporting results; \
                     its range uses supported levels only",
                    factor.name(),
                    level.label
                ));
            }
        }
        let supported: Vec<f64> = levels.iter().filter_map(|l| l.mean).collect();
        let range = match supported.len() {
            0 | 1 => 0.0,
            _ => {
                supported.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
                    - supported.iter().fold(f64::INFINITY, |a, &b| a.min(b))
            }
        };
        factors.push(FactorEffect {
            name: factor.name().to_string(),
            levels,
            range,
        });
    }

    let mut ranking: Vec<usize> = (0..factors.len()).collect();
    ranking.sort_by(|&a, &b| factors[b].range.total_cmp(&factors[a].range).then(a.cmp(&b)));
    Ok(EffectReport {
        direction,
        factors,
        ranking,
        warnings,
    })
}

/// One ranked configuration with its metric and full labeled assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestEntry {
    pub id: u32,
    pub metric: f64,
    pub assignment: Vec<CommonLevel>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestConfigurations {
    pub entries: Vec<BestEntry>,
    pub warnings: Vec<String>,
}

/// The `n` best experiments by metric under the given direction, ties
/// broken by ascending experiment id. Asking for more than exist returns
/// everything plus a warning.
pub fn best_configurations(
    plan: &ExperimentPlan,
    results: &ResultSet,
    n: usize,
    direction: Direction,
) -> Result<BestConfigurations, AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::ZeroCount);
    }
    if results.is_empty() {
        return Err(AnalysisError::EmptyResults);
    }
    let max = plan.len() as u32;
    let mut entries: Vec<(u32, f64)> = results.iter().collect();
    for &(id, _) in &entries {
        if id == 0 || id > max {
            return Err(AnalysisError::UnknownExperiment { id, max });
        }
    }
    entries.sort_by(|a, b| {
        let ord = a.1.total_cmp(&b.1);
        match direction {
            Direction::LowerIsBetter => ord.then(a.0.cmp(&b.0)),
            Direction::HigherIsBetter => ord.reverse().then(a.0.cmp(&b.0)),
        }
    });

    let mut warnings = Vec::new();
    if n > entries.len() {
        warnings.push(format!(
            "requested top {n} but only {} results exist; returning all",
            entries.len()
        ));
    }
    let picked = entries.into_iter().take(n.min(plan.len()));
    let entries = picked
        .map(|(id, metric)| BestEntry {
            id,
            metric,
            assignment: plan
                .assignment(id)
                .unwrap()
                .into_iter()
                .map(|(factor, level)| CommonLevel {
                    factor: factor.to_string(),
                    level: level.to_string(),
                })
                .collect(),
        })
        .collect();
    Ok(BestConfigurations { entries, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_model, Factor, FactorModel};
    use crate::plan::{import_plan, import_results, PlanFormat};
    use std::collections::BTreeMap;

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

    fn table2_plan() -> ExperimentPlan {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/table2.plan.csv"
        ))
        .unwrap();
        import_plan(&text, PlanFormat::Csv, Some(&table1())).unwrap()
    }

    fn figure2_results(plan: &ExperimentPlan) -> ResultSet {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/figure2.results.csv"
        ))
        .unwrap();
        import_results(&text, plan).unwrap()
    }

    fn results_from(values: &[(u32, f64)]) -> ResultSet {
        ResultSet::new(values.iter().copied().collect::<BTreeMap<_, _>>(), "metric")
    }

    #[test]
    fn threshold_grouping_reproduces_reference_bands() {
        let plan = table2_plan();
        let results = figure2_results(&plan);
        let mut report = group_experiments(
            &results,
            &GroupingMethod::Thresholds(vec![0.15, 0.3, 0.5]),
            Direction::LowerIsBetter,
        )
        .unwrap();
        report.annotate_common_levels(&plan).unwrap();

        assert_eq!(report.groups.len(), 4);
        assert_eq!(report.best_group().members, vec![9, 10, 11]);
        assert_eq!(report.worst_group().members, vec![12, 13, 14, 15]);
        assert_eq!(
            report.best_group().common_levels,
            vec![CommonLevel {
                factor: "Hello_Interval_Time".into(),
                level: "15".into()
            }]
        );
        assert!(report.worst_group().common_levels.is_empty());
    }

    #[test]
    fn gap_auto_matches_reference_bands_on_fixture() {
        let plan = table2_plan();
        let results = figure2_results(&plan);
        let report =
            group_experiments(&results, &GroupingMethod::Gap { groups: None }, Direction::LowerIsBetter)
                .unwrap();
        assert_eq!(report.groups.len(), 4);
        assert_eq!(report.best_group().members, vec![9, 10, 11]);
        assert_eq!(report.worst_group().members, vec![12, 13, 14, 15]);
    }

    #[test]
    fn gap_with_one_group_keeps_everything_together() {
        let results = results_from(&[(1, 0.5), (2, 0.5), (3, 0.5)]);
        let report = group_experiments(
            &results,
            &GroupingMethod::Gap { groups: Some(1) },
            Direction::LowerIsBetter,
        )
        .unwrap();
        assert_eq!(report.groups.len(), 1);
        assert_eq!(report.groups[0].members, vec![1, 2, 3]);
    }

    #[test]
    fn gap_two_values_two_singletons() {
        let results = results_from(&[(1, 0.1), (2, 0.9)]);
        let report = group_experiments(
            &results,
            &GroupingMethod::Gap { groups: Some(2) },
            Direction::LowerIsBetter,
        )
        .unwrap();
        assert_eq!(report.groups.len(), 2);
        assert_eq!(report.best_group().members, vec![1]);
        assert_eq!(report.worst_group().members, vec![2]);
    }

    #[test]
    fn grouping_is_a_partition() {
        let plan = table2_plan();
        let results = figure2_results(&plan);
        for method in [
            GroupingMethod::Gap { groups: None },
            GroupingMethod::Gap { groups: Some(3) },
            GroupingMethod::Thresholds(vec![0.15, 0.3, 0.5]),
        ] {
            let report =
                group_experiments(&results, &method, Direction::LowerIsBetter).unwrap();
            let mut all: Vec<u32> = report.groups.iter().flat_map(|g| g.members.clone()).collect();
            all.sort_unstable();
            assert_eq!(all, (1..=16).collect::<Vec<u32>>(), "{method:?}");
        }
    }

    #[test]
    fn direction_flips_group_order() {
        let results = results_from(&[(1, 0.1), (2, 0.9)]);
        let report = group_experiments(
            &results,
            &GroupingMethod::Gap { groups: Some(2) },
            Direction::HigherIsBetter,
        )
        .unwrap();
        assert_eq!(report.best_group().members, vec![2]);
    }

    #[test]
    fn grouping_rejects_bad_inputs() {
        let results = results_from(&[(1, 0.1)]);
        assert_eq!(
            group_experiments(
                &results,
                &GroupingMethod::Thresholds(vec![0.3, 0.3]),
                Direction::LowerIsBetter
            )
            .unwrap_err(),
            AnalysisError::NonMonotoneThresholds
        );
        let empty = results_from(&[]);
        assert_eq!(
            group_experiments(&empty, &GroupingMethod::Gap { groups: None }, Direction::LowerIsBetter)
                .unwrap_err(),
            AnalysisError::EmptyResults
        );
    }

    #[test]
    fn boundary_ties_assign_to_lower_band() {
        let results = results_from(&[(1, 0.15), (2, 0.16)]);
        let report = group_experiments(
            &results,
            &GroupingMethod::Thresholds(vec![0.15]),
            Direction::LowerIsBetter,
        )
        .unwrap();
        assert_eq!(report.best_group().members, vec![1]);
        assert_eq!(report.worst_group().members, vec![2]);
    }

    #[test]
    fn common_levels_of_best_trio_is_hello_15() {
        let plan = table2_plan();
        let shared = common_levels(&plan, &[9, 10, 11]).unwrap();
        assert_eq!(
            shared,
            vec![CommonLevel {
                factor: "Hello_Interval_Time".into(),
                level: "15".into()
            }]
        );
    }

    #[test]
    fn common_levels_of_worst_quad_is_empty() {
        let plan = table2_plan();
        assert!(common_levels(&plan, &[12, 13, 14, 15]).unwrap().is_empty());
    }

    #[test]
    fn common_levels_single_member_returns_full_assignment() {
        let plan = table2_plan();
        let shared = common_levels(&plan, &[4]).unwrap();
        assert_eq!(shared.len(), 5);
        assert_eq!(shared[1].level, "New Reno");
    }

    #[test]
    fn common_levels_validates_members() {
        let plan = table2_plan();
        assert_eq!(
            common_levels(&plan, &[]).unwrap_err(),
            AnalysisError::EmptyMembers
        );
        assert_eq!(
            common_levels(&plan, &[17]).unwrap_err(),
            AnalysisError::UnknownExperiment { id: 17, max: 16 }
        );
    }

    #[test]
    fn constant_metric_gives_zero_ranges_in_model_order() {
        let plan = table2_plan();
        let results = results_from(&(1..=16).map(|id| (id, 0.7)).collect::<Vec<_>>());
        let report = main_effects(&plan, &results, Direction::LowerIsBetter).unwrap();
        assert!(report.factors.iter().all(|f| f.range == 0.0));
        assert_eq!(report.ranking, vec![0, 1, 2, 3, 4]);
        for factor in &report.factors {
            for level in &factor.levels {
                assert_eq!(level.mean, Some(0.7));
            }
        }
    }

    #[test]
    fn planted_hello_metric_ranks_hello_first() {
        let plan = table2_plan();
        // 1.0 whenever Hello_Interval_Time is 3 (experiments 13..16), else 0.1.
        let values: Vec<(u32, f64)> = (1..=16)
            .map(|id| (id, if id >= 13 { 1.0 } else { 0.1 }))
            .collect();
        let report =
            main_effects(&plan, &results_from(&values), Direction::LowerIsBetter).unwrap();
        assert_eq!(report.ranked_names()[0], "Hello_Interval_Time");
        let hello = &report.factors[2];
        assert!((hello.range - 0.9).abs() < 1e-12);
    }

    #[test]
    fn fixture_effects_rank_hello_first_with_known_means() {
        let plan = table2_plan();
        let results = figure2_results(&plan);
        let report = main_effects(&plan, &results, Direction::LowerIsBetter).unwrap();
        assert_eq!(report.ranked_names()[0], "Hello_Interval_Time");
        let hello = &report.factors[2];
        let means: Vec<f64> = hello.levels.iter().map(|l| l.mean.unwrap()).collect();
        // Hand-computed over the fixture columns.
        assert!((means[0] - 0.4).abs() < 1e-12);
        assert!((means[1] - 0.205).abs() < 1e-12);
        assert!((means[2] - 0.2475).abs() < 1e-12);
        assert!((means[3] - 0.625).abs() < 1e-12);
        assert!((hello.range - 0.42).abs() < 1e-12);
        assert!(hello.levels.iter().all(|l| l.count == 4));
    }

    #[test]
    fn level_means_ignore_result_order() {
        let plan = table2_plan();
        let forward = figure2_results(&plan);
        let mut shuffled: Vec<(u32, f64)> = forward.iter().collect();
        shuffled.reverse();
        let backward = results_from(&shuffled);
        assert_eq!(
            main_effects(&plan, &forward, Direction::LowerIsBetter).unwrap(),
            main_effects(&plan, &backward, Direction::LowerIsBetter).unwrap()
        );
    }

    #[test]
    fn unsupported_level_is_flagged() {
        let plan = table2_plan();
        // Drop all four results for Hello=3 (experiments 13..16).
        let values: Vec<(u32, f64)> = (1..=12).map(|id| (id, 0.5)).collect();
        let report =
            main_effects(&plan, &results_from(&values), Direction::LowerIsBetter).unwrap();
        let hello = &report.factors[2];
        assert_eq!(hello.levels[3].count, 0);
        assert_eq!(hello.levels[3].mean, None);
        assert!(report.warnings.iter().any(|w| w.contains("`3`")));
    }

    #[test]
    fn best_configurations_match_reference_trio() {
        let plan = table2_plan();
        let results = figure2_results(&plan);
        let best = best_configurations(&plan, &results, 3, Direction::LowerIsBetter).unwrap();
        let ids: Vec<u32> = best.entries.iter().map(|e| e.id).collect();
        assert_eq!(ids, vec![9, 10, 11]);
        let first: Vec<&str> = best.entries[0]
            .assignment
            .iter()
            .map(|a| a.level.as_str())
            .collect();
        assert_eq!(
            first,
            vec!["Based on Packets", "Disable", "15", "best-effort", "default"]
        );
    }

    #[test]
    fn best_tie_goes_to_lower_id() {
        let plan = table2_plan();
        let values: Vec<(u32, f64)> = (1..=16)
            .map(|id| (id, if id == 5 || id == 3 { 0.1 } else { 0.9 }))
            .collect();
        let best =
            best_configurations(&plan, &results_from(&values), 1, Direction::LowerIsBetter)
                .unwrap();
        assert_eq!(best.entries[0].id, 3);
    }

    #[test]
    fn best_full_ranking_is_monotone() {
        let plan = table2_plan();
        let results = figure2_results(&plan);
        let best = best_configurations(&plan, &results, 16, Direction::LowerIsBetter).unwrap();
        assert_eq!(best.entries.len(), 16);
        for pair in best.entries.windows(2) {
            assert!(pair[0].metric <= pair[1].metric);
        }
        let over = best_configurations(&plan, &results, 99, Direction::LowerIsBetter).unwrap();
        assert_eq!(over.entries.len(), 16);
        assert_eq!(over.warnings.len(), 1);
    }

    #[test]
    fn common_levels_are_antitone_under_member_addition() {
        let plan = table2_plan();
        let base = common_levels(&plan, &[9, 10]).unwrap();
        let bigger = common_levels(&plan, &[9, 10, 11]).unwrap();
        for shared in &bigger {
            assert!(base.contains(shared));
        }
    }

    #[test]
    fn single_level_factor_is_always_common() {
        let model = FactorModel::new(
            vec![
                Factor::new("fixed", ["only"]).unwrap(),
                Factor::new("var", ["a", "b"]).unwrap(),
            ],
            1,
            1,
        )
        .unwrap();
        let plan = ExperimentPlan::from_parts(
            model,
            vec![
                crate::coverage::Row::new(vec![0, 0]),
                crate::coverage::Row::new(vec![0, 1]),
            ],
            None,
        )
        .unwrap();
        let shared = common_levels(&plan, &[1, 2]).unwrap();
        assert_eq!(shared.len(), 1);
        assert_eq!(shared[0].factor, "fixed");
    }
}
