//! Python bindings for guidiff.

use std::path::PathBuf;
use std::sync::Arc;

use guidiff_core::detect::{analyze_pair, ChangeType, DetectConfig, GuiChange};
use guidiff_core::imaging::{
    color_histogram, crop, histogram_similarity as hist_sim, perceptual_diff as pdiff,
    PerceptualConfig,
};
use guidiff_core::ingest;
use guidiff_core::metrics;
use guidiff_core::model::{self, GuiComponent, ScreenCapture, ScreenPair};
use guidiff_core::pipeline::{self, RunConfig};
use guidiff_core::screen_match::{self, MatchConfig};
use guidiff_core::summary::{characterize, describe_change, generate_summary};
use guidiff_core::synth;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(guidiff, GuidiffError, PyException);

fn err(e: guidiff_core::Error) -> PyErr {
    GuidiffError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| GuidiffError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(frozen, eq, hash, skip_from_py_object, module = "guidiff")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct BoundingBox(model::BoundingBox);

#[pymethods]
impl BoundingBox {
    #[new]
    fn new(x: i32, y: i32, width: u32, height: u32) -> Self {
        BoundingBox(model::BoundingBox::new(x, y, width, height))
    }

    #[getter]
    fn x(&self) -> i32 {
        self.0.x
    }

    #[getter]
    fn y(&self) -> i32 {
        self.0.y
    }

    #[getter]
    fn width(&self) -> u32 {
        self.0.width
    }

    #[getter]
    fn height(&self) -> u32 {
        self.0.height
    }

    fn area(&self) -> u64 {
        self.0.area()
    }

    fn center(&self) -> (f64, f64) {
        self.0.center()
    }

    fn iou(&self, other: &BoundingBox) -> f64 {
        self.0.overlap(&other.0).iou
    }

    fn to_tuple(&self) -> (i32, i32, u32, u32) {
        (self.0.x, self.0.y, self.0.width, self.0.height)
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundingBox(x={}, y={}, width={}, height={})",
            self.0.x, self.0.y, self.0.width, self.0.height
        )
    }
}

#[pyclass(frozen, skip_from_py_object, module = "guidiff")]
#[derive(Clone)]
struct Component(GuiComponent);

#[pymethods]
impl Component {
    #[getter]
    fn component_type(&self) -> &str {
        &self.0.component_type
    }

    #[getter]
    fn bounds(&self) -> BoundingBox {
        BoundingBox(self.0.bounds)
    }

    #[getter]
    fn text(&self) -> Option<&str> {
        self.0.text.as_deref()
    }

    #[getter]
    fn resource_id(&self) -> Option<&str> {
        self.0.resource_id.as_deref()
    }

    #[getter]
    fn node_index(&self) -> usize {
        self.0.node_index
    }

    fn __repr__(&self) -> String {
        format!(
            "Component({}, #{}, {:?})",
            self.0.short_type(),
            self.0.node_index,
            self.0.bounds
        )
    }
}

#[pyclass(frozen, module = "guidiff")]
struct Change(GuiChange);

#[pymethods]
impl Change {
    #[getter]
    fn category(&self) -> &'static str {
        self.0.category.name()
    }

    #[getter]
    fn change_type(&self) -> &'static str {
        self.0.specific.name()
    }

    #[getter]
    fn old_component(&self) -> Option<Component> {
        self.0.old_component.clone().map(Component)
    }

    #[getter]
    fn new_component(&self) -> Option<Component> {
        self.0.new_component.clone().map(Component)
    }

    #[getter]
    fn magnitude(&self) -> Option<f64> {
        self.0.magnitude
    }

    #[getter]
    fn description(&self) -> String {
        describe_change(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Change({}: {})", self.0.specific, describe_change(&self.0))
    }
}

#[pyclass(frozen, skip_from_py_object, module = "guidiff")]
#[derive(Clone)]
struct Capture(Arc<ScreenCapture>);

#[pymethods]
impl Capture {
    #[getter]
    fn source_id(&self) -> &str {
        &self.0.source_id
    }

    #[getter]
    fn activity(&self) -> &str {
        &self.0.activity
    }

    #[getter]
    fn window_name(&self) -> &str {
        &self.0.window_name
    }

    #[getter]
    fn window_type(&self) -> &str {
        &self.0.window_type
    }

    #[getter]
    fn size(&self) -> (u32, u32) {
        self.0.dims()
    }

    fn leaves(&self) -> Vec<Component> {
        ingest::leaf_components(&self.0.hierarchy)
            .into_iter()
            .map(Component)
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Capture({}, {})", self.0.source_id, self.0.activity)
    }
}

#[pyclass(frozen, module = "guidiff")]
struct CaptureSet(ingest::CaptureSet);

#[pymethods]
impl CaptureSet {
    #[getter]
    fn captures(&self) -> Vec<Capture> {
        self.0.captures.iter().cloned().map(Capture).collect()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.0.warnings.clone()
    }

    /// Drops captures whose screen identity already appeared earlier.
    fn filtered(&self) -> CaptureSet {
        CaptureSet(screen_match::filter_screens(&self.0))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyclass(frozen, module = "guidiff")]
struct PairResult {
    #[pyo3(get)]
    pair_id: String,
    #[pyo3(get)]
    summary: String,
    #[pyo3(get)]
    diff_percent: f64,
    changes: Vec<GuiChange>,
}

#[pymethods]
impl PairResult {
    #[getter]
    fn changes(&self) -> Vec<Change> {
        self.changes.iter().cloned().map(Change).collect()
    }

    fn __len__(&self) -> usize {
        self.changes.len()
    }
}

#[pyfunction]
fn parse_bounds(text: &str) -> PyResult<BoundingBox> {
    ingest::parse_bounds(text).map(BoundingBox).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (directory, label = "captures"))]
fn load_capture_set(directory: PathBuf, label: &str) -> PyResult<CaptureSet> {
    ingest::load_capture_set(directory, label).map(CaptureSet).map_err(err)
}

/// Returns `(old index, new index, cost)` for every matched pair.
#[pyfunction]
#[pyo3(signature = (old, new, cost_cutoff = 1.0))]
fn match_screens(old: &CaptureSet, new: &CaptureSet, cost_cutoff: f64) -> PyResult<Vec<(usize, usize, f64)>> {
    let config = MatchConfig {
        cost_cutoff,
        ..Default::default()
    };
    let result = screen_match::match_screens(&old.0, &new.0, &config).map_err(err)?;
    let position = |set: &ingest::CaptureSet, c: &Arc<ScreenCapture>| {
        set.captures.iter().position(|x| Arc::ptr_eq(x, c)).unwrap_or(usize::MAX)
    };
    Ok(result
        .pairs
        .iter()
        .map(|p| (position(&old.0, &p.old), position(&new.0, &p.new), p.assignment_cost))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (old, new, lc = 5.0, fc = 0.85, ic = 20.0, swapped_image_rule = false))]
fn compare(
    old: &Capture,
    new: &Capture,
    lc: f64,
    fc: f64,
    ic: f64,
    swapped_image_rule: bool,
) -> PyResult<PairResult> {
    let config = DetectConfig {
        lc,
        fc,
        ic,
        swapped_image_rule,
        ..Default::default()
    };
    let pair = ScreenPair {
        old: old.0.clone(),
        new: new.0.clone(),
        assignment_cost: 0.0,
    };
    let analysis = analyze_pair(&pair, &config).map_err(err)?;
    let sc = characterize(&analysis.changes, &analysis.full_diff);
    Ok(PairResult {
        pair_id: pair.pair_id(),
        summary: generate_summary(&sc),
        diff_percent: analysis.full_diff.diff_percent,
        changes: analysis.changes,
    })
}

/// Returns `(diff percent, changed regions)` for two same-sized screenshots.
#[pyfunction]
#[pyo3(signature = (old, new, sensitivity = 0.05, blur_radius = 1))]
fn perceptual_diff(
    old: &Capture,
    new: &Capture,
    sensitivity: f64,
    blur_radius: u32,
) -> PyResult<(f64, Vec<BoundingBox>)> {
    let config = PerceptualConfig {
        sensitivity,
        blur_radius,
    };
    let d = pdiff(&old.0.image, &new.0.image, &config).map_err(err)?;
    Ok((d.diff_percent, d.diff_regions.into_iter().map(BoundingBox).collect()))
}

/// Color-histogram similarity of two screenshot regions.
#[pyfunction]
fn histogram_similarity(old: &Capture, old_bounds: &BoundingBox, new: &Capture, new_bounds: &BoundingBox) -> PyResult<f64> {
    let a = crop(&old.0.image, &old_bounds.0).map_err(err)?;
    let b = crop(&new.0.image, &new_bounds.0).map_err(err)?;
    hist_sim(&color_histogram(&a), &color_histogram(&b)).map_err(err)
}

/// Runs the full pipeline and returns the run summary as a dict.
#[pyfunction]
#[pyo3(signature = (old_dir, new_dir, output_dir, config_toml = None, timestamp = None))]
fn run_pipeline<'py>(
    py: Python<'py>,
    old_dir: PathBuf,
    new_dir: PathBuf,
    output_dir: PathBuf,
    config_toml: Option<&str>,
    timestamp: Option<String>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut config = match config_toml {
        Some(t) => RunConfig::from_toml(t).map_err(err)?,
        None => RunConfig::default(),
    };
    config.output_dir = output_dir;
    if let Some(ts) = timestamp {
        config.timestamp = ts;
    }
    let summary = py
        .detach(|| pipeline::run(&old_dir, &new_dir, &config))
        .map_err(err)?;
    json_to_py(py, &summary)
}

/// Writes a synthetic corpus and returns the number of pairs.
#[pyfunction]
#[pyo3(signature = (out_dir, seed = 0, per_type = 9, types = None))]
fn generate_corpus(py: Python<'_>, out_dir: PathBuf, seed: u64, per_type: usize, types: Option<Vec<String>>) -> PyResult<usize> {
    let types = match types {
        None => ChangeType::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|n| {
                ChangeType::from_name(n)
                    .ok_or_else(|| GuidiffError::new_err(format!("unknown change type {n:?}")))
            })
            .collect::<PyResult<_>>()?,
    };
    let manifest = py
        .detach(|| synth::generate_corpus(&out_dir, seed, &types, per_type))
        .map_err(err)?;
    Ok(manifest.entries.len())
}

#[pyfunction]
#[pyo3(signature = (reported, truth, iou_min = metrics::DEFAULT_IOU_MIN))]
fn score_directory<'py>(py: Python<'py>, reported: PathBuf, truth: PathBuf, iou_min: f64) -> PyResult<Bound<'py, PyAny>> {
    let report = metrics::score_directory(reported, truth, iou_min).map_err(err)?;
    json_to_py(py, &report)
}

#[pyfunction]
fn fs_metric(total: usize, kept: usize) -> PyResult<f64> {
    metrics::fs_metric(total, kept).map_err(err)
}

#[pyfunction]
fn precision_recall(tp: usize, fp: usize, fn_: usize) -> (f64, f64) {
    metrics::precision_recall(tp, fp, fn_)
}

#[pyfunction]
fn change_types<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for t in ChangeType::ALL {
        d.set_item(t.name(), t.category().name())?;
    }
    Ok(d)
}

#[pymodule]
fn guidiff(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GuidiffError", m.py().get_type::<GuidiffError>())?;
    m.add("NO_CHANGE_SUMMARY", guidiff_core::summary::NO_CHANGE_SUMMARY)?;
    m.add_class::<BoundingBox>()?;
    m.add_class::<Component>()?;
    m.add_class::<Change>()?;
    m.add_class::<Capture>()?;
    m.add_class::<CaptureSet>()?;
    m.add_class::<PairResult>()?;
    m.add_function(wrap_pyfunction!(parse_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(load_capture_set, m)?)?;
    m.add_function(wrap_pyfunction!(match_screens, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(perceptual_diff, m)?)?;
    m.add_function(wrap_pyfunction!(histogram_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(generate_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(score_directory, m)?)?;
    m.add_function(wrap_pyfunction!(fs_metric, m)?)?;
    m.add_function(wrap_pyfunction!(precision_recall, m)?)?;
    m.add_function(wrap_pyfunction!(change_types, m)?)?;
    Ok(())
}
