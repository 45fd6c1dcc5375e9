//! Experiment plans and their file formats.
//!
//! A plan is a verified covering array rendered as numbered, labeled
//! experiments (ids run 1..N in row order). Plans serialize to CSV
//! (`experiment_id` column plus one column per factor, model order) and
//! to JSON (model + generation metadata + labeled assignments); both
//! round-trip byte-exactly. Results bind back to a plan by experiment id
//! via a two-column `experiment_id,metric` CSV. Raw per-experiment time
//! series aggregate to a scalar rate over the final window of the series.

use crate::coverage::{CoveringArray, Row, Verification};
use crate::generator::GenerationMeta;
use crate::model::FactorModel;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PlanError {
    #[error("plan requires a verified-complete array; this one is {0:?}")]
    NotVerified(Verification),
    #[error("csv parse error: {0}")]
    Csv(String),
    #[error("json parse error: {0}")]
    Json(String),
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("experiment ids must run 1..N in order: expected {expected}, found {found}")]
    NonConsecutiveId { expected: u32, found: u32 },
    #[error("experiment {experiment}: factor `{factor}` has unknown level label `{label}`")]
    UnknownLabel {
        experiment: u32,
        factor: String,
        label: String,
    },
    #[error("experiment {experiment}: missing assignment for factor `{factor}`")]
    MissingAssignment { experiment: u32, factor: String },
    #[error("experiment {experiment}: assignment for unknown factor `{factor}`")]
    UnknownFactor { experiment: u32, factor: String },
    #[error("unknown experiment id {id}: plan has experiments 1..={max}")]
    UnknownExperiment { id: u32, max: u32 },
    #[error("duplicate result for experiment id {id}")]
    DuplicateExperiment { id: u32 },
    #[error("experiment {id}: metric `{text}` is not a finite number")]
    BadMetric { id: u32, text: String },
    #[error("time series is empty")]
    EmptySeries,
    #[error("aggregation window must be > 0, got {0}")]
    BadWindow(f64),
    #[error("time series point {index}: timestamps must be strictly increasing")]
    SeriesOrder { index: usize },
    #[error("time series point {index}: values must be finite and >= 0")]
    SeriesValue { index: usize },
}

/// A numbered, labeled rendering of a covering array.
///
/// Levels are stored as indices against the embedded model; labels are
/// produced at the serialization boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    model: FactorModel,
    rows: Vec<Row>,
    meta: Option<GenerationMeta>,
}

impl ExperimentPlan {
    pub fn from_parts(
        model: FactorModel,
        rows: Vec<Row>,
        meta: Option<GenerationMeta>,
    ) -> Result<Self, PlanError> {
        // Reuse coverage validation for level ranges/row lengths.
        crate::coverage::coverage_of(&rows, &model).map_err(|e| PlanError::Csv(e.to_string()))?;
        Ok(ExperimentPlan { model, rows, meta })
    }

    pub fn model(&self) -> &FactorModel {
        &self.model
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn meta(&self) -> Option<&GenerationMeta> {
        self.meta.as_ref()
    }

    /// Number of experiments (ids are 1..=len).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> {
        1..=self.rows.len() as u32
    }

    fn row_of(&self, id: u32) -> Option<&Row> {
        if id == 0 {
            return None;
        }
        self.rows.get(id as usize - 1)
    }

    /// Level label of one factor in one experiment.
    pub fn label(&self, id: u32, factor: usize) -> Option<&str> {
        self.row_of(id)
            .map(|row| self.model.factor(factor).level_label(row.level(factor)))
    }

    /// Full labeled assignment of one experiment, model factor order.
    pub fn assignment(&self, id: u32) -> Option<Vec<(&str, &str)>> {
        self.row_of(id).map(|row| {
            self.model
                .factors()
                .iter()
                .enumerate()
                .map(|(f, factor)| (factor.name(), factor.level_label(row.level(f))))
                .collect()
        })
    }
}

/// Turns a verified-complete array into a labeled plan.
///
/// Refuses unverified or incomplete arrays: a published plan must not
/// silently carry unchecked coverage.
pub fn label_plan(array: &CoveringArray) -> Result<ExperimentPlan, PlanError> {
    if array.verification() != Verification::VerifiedComplete {
        return Err(PlanError::NotVerified(array.verification()));
    }
    Ok(ExperimentPlan {
        model: array.model().clone(),
        rows: array.rows().to_vec(),
        meta: array.meta().cloned(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanFormat {
    Csv,
    Json,
}

/// Serializes a plan. Export then import is the identity, byte-for-byte
/// modulo line endings.
pub fn export_plan(plan: &ExperimentPlan, format: PlanFormat) -> String {
    match format {
        PlanFormat::Csv => export_plan_csv(plan),
        PlanFormat::Json => export_plan_json(plan),
    }
}

fn export_plan_csv(plan: &ExperimentPlan) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["experiment_id".to_string()];
    header.extend(plan.model.factors().iter().map(|f| f.name().to_string()));
    writer.write_record(&header).expect("csv header");
    for id in plan.ids() {
        let mut record = vec![id.to_string()];
        for f in 0..plan.model.factor_count() {
            record.push(plan.label(id, f).unwrap().to_string());
        }
        writer.write_record(&record).expect("csv record");
    }
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
}

fn export_plan_json(plan: &ExperimentPlan) -> String {
    let mut root = Map::new();
    root.insert(
        "model".into(),
        serde_json::to_value(&plan.model).expect("model to json"),
    );
    if let Some(meta) = &plan.meta {
        root.insert(
            "generation".into(),
            serde_json::to_value(meta).expect("meta to json"),
        );
    }
    let experiments: Vec<Value> = plan
        .ids()
        .map(|id| {
            let mut assignments = Map::new();
            for (name, label) in plan.assignment(id).unwrap() {
                assignments.insert(name.to_string(), Value::String(label.to_string()));
            }
            json!({ "id": id, "assignments": Value::Object(assignments) })
        })
        .collect();
    root.insert("experiments".into(), Value::Array(experiments));
    let mut out = serde_json::to_string_pretty(&Value::Object(root)).expect("plan to json");
    out.push('\n');
    out
}

/// Parses a plan document. CSV needs the model supplied; JSON carries it.
pub fn import_plan(
    text: &str,
    format: PlanFormat,
    model: Option<&FactorModel>,
) -> Result<ExperimentPlan, PlanError> {
    match format {
        PlanFormat::Csv => {
            let model = model.ok_or_else(|| {
                PlanError::Csv("a CSV plan needs its model document".to_string())
            })?;
            import_plan_csv(text, model)
        }
        PlanFormat::Json => import_plan_json(text),
    }
}

fn import_plan_csv(text: &str, model: &FactorModel) -> Result<ExperimentPlan, PlanError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());

    let mut expected = vec!["experiment_id".to_string()];
    expected.extend(model.factors().iter().map(|f| f.name().to_string()));
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| PlanError::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != expected {
        return Err(PlanError::Header {
            expected: expected.join(","),
            found: header.join(","),
        });
    }

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| PlanError::Csv(e.to_string()))?;
        let expected_id = i as u32 + 1;
        let found: u32 = record[0]
            .parse()
            .map_err(|_| PlanError::Csv(format!("bad experiment id `{}`", &record[0])))?;
        if found != expected_id {
            return Err(PlanError::NonConsecutiveId {
                expected: expected_id,
                found,
            });
        }
        let mut levels = Vec::with_capacity(model.factor_count());
        for (f, factor) in model.factors().iter().enumerate() {
            let label = &record[f + 1];
            let level = factor.level_index(label).ok_or_else(|| PlanError::UnknownLabel {
                experiment: expected_id,
                factor: factor.name().to_string(),
                label: label.to_string(),
            })?;
            levels.push(level);
        }
        rows.push(Row::new(levels));
    }
    Ok(ExperimentPlan {
        model: model.clone(),
        rows,
        meta: None,
    })
}

fn import_plan_json(text: &str) -> Result<ExperimentPlan, PlanError> {
    let root: Value = serde_json::from_str(text).map_err(|e| PlanError::Json(e.to_string()))?;
    let model: FactorModel = serde_json::from_value(
        root.get("model")
            .cloned()
            .ok_or_else(|| PlanError::Json("missing `model`".into()))?,
    )
    .map_err(|e| PlanError::Json(e.to_string()))?;
    let meta: Option<GenerationMeta> = match root.get("generation") {
        None | Some(Value::Null) => None,
        Some(v) => {
            Some(serde_json::from_value(v.clone()).map_err(|e| PlanError::Json(e.to_string()))?)
        }
    };
    let experiments = root
        .get("experiments")
        .and_then(Value::as_array)
        .ok_or_else(|| PlanError::Json("missing `experiments` array".into()))?;

    let mut rows = Vec::with_capacity(experiments.len());
    for (i, entry) in experiments.iter().enumerate() {
        let expected_id = i as u32 + 1;
        let found = entry
            .get("id")
            .and_then(Value::as_u64)
            .ok_or_else(|| PlanError::Json(format!("experiment {expected_id}: missing id")))?
            as u32;
        if found != expected_id {
            return Err(PlanError::NonConsecutiveId {
                expected: expected_id,
                found,
            });
        }
        let assignments = entry
            .get("assignments")
            .and_then(Value::as_object)
            .ok_or_else(|| PlanError::Json(format!("experiment {expected_id}: missing assignments")))?;
        for name in assignments.keys() {
            if model.factor_index(name).is_none() {
                return Err(PlanError::UnknownFactor {
                    experiment: expected_id,
                    factor: name.clone(),
                });
            }
        }
        let mut levels = Vec::with_capacity(model.factor_count());
        for factor in model.factors() {
            let label = assignments
                .get(factor.name())
                .and_then(Value::as_str)
                .ok_or_else(|| PlanError::MissingAssignment {
                    experiment: expected_id,
                    factor: factor.name().to_string(),
                })?;
            let level = factor.level_index(label).ok_or_else(|| PlanError::UnknownLabel {
                experiment: expected_id,
                factor: factor.name().to_string(),
                label: label.to_string(),
            })?;
            levels.push(level);
        }
        rows.push(Row::new(levels));
    }
    Ok(ExperimentPlan { model, rows, meta })
}

/// Per-experiment scalar metrics bound to a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    values: BTreeMap<u32, f64>,
    metric: String,
    window_secs: Option<f64>,
    warnings: Vec<String>,
}

impl ResultSet {
    pub fn new(values: BTreeMap<u32, f64>, metric: impl Into<String>) -> Self {
        ResultSet {
            values,
            metric: metric.into(),
            window_secs: None,
            warnings: Vec::new(),
        }
    }

    pub fn get(&self, id: u32) -> Option<f64> {
        self.values.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// (id, value) pairs in id order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.values.iter().map(|(&id, &v)| (id, v))
    }

    pub fn metric(&self) -> &str {
        &self.metric
    }

    pub fn window_secs(&self) -> Option<f64> {
        self.window_secs
    }

    pub fn set_window_secs(&mut self, window: f64) {
        self.window_secs = Some(window);
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn push_warning(&mut self, warning: impl Into<String>) {
        self.warnings.push(warning.into());
    }
}

/// Parses an `experiment_id,metric` CSV and binds it to a plan.
///
/// Ids outside 1..=N, duplicates, and non-finite metrics are errors; plan
/// experiments with no result only produce a warning so analysis can
/// proceed on the subset.
pub fn import_results(text: &str, plan: &ExperimentPlan) -> Result<ResultSet, PlanError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| PlanError::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != ["experiment_id", "metric"] {
        return Err(PlanError::Header {
            expected: "experiment_id,metric".into(),
            found: header.join(","),
        });
    }

    let max = plan.len() as u32;
    let mut values = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| PlanError::Csv(e.to_string()))?;
        let id: u32 = record[0]
            .parse()
            .map_err(|_| PlanError::Csv(format!("bad experiment id `{}`", &record[0])))?;
        if id == 0 || id > max {
            return Err(PlanError::UnknownExperiment { id, max });
        }
        let value: f64 = record[1].parse().map_err(|_| PlanError::BadMetric {
            id,
            text: record[1].to_string(),
        })?;
        if !value.is_finite() {
            return Err(PlanError::BadMetric {
                id,
                text: record[1].to_string(),
            });
        }
        if values.insert(id, value).is_some() {
            return Err(PlanError::DuplicateExperiment { id });
        }
    }

    let mut results = ResultSet::new(values, "metric");
    for id in plan.ids() {
        if results.get(id).is_none() {
            results.push_warning(format!("experiment {id} has no result; analyzing without it"));
        }
    }
    Ok(results)
}

/// Renders a result set as `experiment_id,metric` CSV.
pub fn export_results(results: &ResultSet) -> String {
    let mut out = String::from("experiment_id,metric\n");
    for (id, value) in results.iter() {
        out.push_str(&format!("{id},{value}\n"));
    }
    out
}

/// One experiment's raw metric samples over time. Timestamps strictly
/// increase; values are finite, non-negative counts per sample interval.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    points: Vec<(f64, f64)>,
}

impl TimeSeries {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, PlanError> {
        for (i, &(t, v)) in points.iter().enumerate() {
            if !t.is_finite() || (i > 0 && t <= points[i - 1].0) {
                return Err(PlanError::SeriesOrder { index: i });
            }
            if !v.is_finite() || v < 0.0 {
                return Err(PlanError::SeriesValue { index: i });
            }
        }
        Ok(TimeSeries { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `t_seconds,value` CSV for one experiment's series.
pub fn export_series(series: &TimeSeries) -> String {
    let mut out = String::from("t_seconds,value\n");
    for &(t, v) in series.points() {
        out.push_str(&format!("{t},{v}\n"));
    }
    out
}

pub fn import_series(text: &str) -> Result<TimeSeries, PlanError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| PlanError::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != ["t_seconds", "value"] {
        return Err(PlanError::Header {
            expected: "t_seconds,value".into(),
            found: header.join(","),
        });
    }
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| PlanError::Csv(e.to_string()))?;
        let t: f64 = record[0]
            .parse()
            .map_err(|_| PlanError::Csv(format!("bad timestamp `{}`", &record[0])))?;
        let v: f64 = record[1]
            .parse()
            .map_err(|_| PlanError::Csv(format!("bad value `{}`", &record[1])))?;
        points.push((t, v));
    }
    TimeSeries::new(points)
}

/// Result of aggregating a series over its final window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesAggregate {
    /// Mean rate in value-per-second.
    pub rate: f64,
    /// Window length actually used, seconds.
    pub window_secs: f64,
    /// True when the requested window exceeded the series span and the
    /// aggregate fell back to the span.
    pub truncated: bool,
}

/// Mean rate over the final `window` seconds of the series: the sum of
/// values with timestamps in `(t_end - window, t_end]`, divided by the
/// window length.
///
/// A window longer than the series span falls back to the span (for a
/// single-point series the requested window is kept as divisor); the
/// `truncated` flag reports that fallback.
pub fn aggregate_series(series: &TimeSeries, window: f64) -> Result<SeriesAggregate, PlanError> {
    if series.is_empty() {
        return Err(PlanError::EmptySeries);
    }
    if !window.is_finite() || window <= 0.0 {
        return Err(PlanError::BadWindow(window));
    }
    let t_end = series.points().last().unwrap().0;
    let span = t_end - series.points()[0].0;
    let (effective, truncated) = if window > span {
        (if span > 0.0 { span } else { window }, true)
    } else {
        (window, false)
    };
    let lo = t_end - effective;
    let sum: f64 = series
        .points()
        .iter()
        .filter(|&&(t, _)| t > lo && t <= t_end)
        .map(|&(_, v)| v)
        .sum();
    Ok(SeriesAggregate {
        rate: sum / effective,
        window_secs: effective,
        truncated,
    })
}
