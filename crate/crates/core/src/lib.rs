//! Combinatorial experiment design for configuration screening: build a
//! strength-`t` mixed-level covering array from a factor/level model,
//! verify its coverage, publish the rows as a labeled experiment plan,
//! run the plan against a synthetic response model, and analyze the
//! results to find performance groups and the factor levels driving them.

pub mod analysis;
pub mod coverage;
pub mod generator;
pub mod model;
pub mod plan;
pub mod sim;

pub use analysis::{
    best_configurations, common_levels, group_experiments, main_effects, AnalysisError,
    BestConfigurations, Direction, EffectReport, Group, GroupingMethod, GroupingReport,
};
pub use coverage::{
    coverage_of, enumerate_tuples, is_covering_array, missing_tuples, tuple_count, CoverageError,
    CoverageLedger, CoveringArray, InteractionTuple, Row, TupleSpace, Verification,
};
pub use generator::{
    generate, generate_greedy, refine_anneal, Algorithm, GenerateError, GenerationConfig,
    GenerationMeta,
};
pub use model::{
    exhaustive_size, lower_bound, parse_model, serialize_model, Factor, FactorModel, ModelError,
};
pub use plan::{
    aggregate_series, export_plan, import_plan, import_results, label_plan, ExperimentPlan,
    PlanError, PlanFormat, ResultSet, SeriesAggregate, TimeSeries,
};
pub use sim::{emit_series, parse_response_model, run_plan, ResponseModel, SimError};
