//! Problem file schema (JSON, `schema_version` 1).
//!
//! Unknown keys are rejected at every level. Angles are radians; arcs and
//! jumps given in arc length are checked once the domain map is built.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use rhsolve::boundary::{ArcPiece, DataSpec, Expr};
use rhsolve::jordan::{BoundaryArc, DataCoordinate};
use rhsolve::rh::SolverConfig;
use rhsolve::spectral::CircleGrid;

use crate::builtins;
use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub name: String,
    pub n: usize,
    #[serde(default = "one")]
    pub lambda: DataSource,
    #[serde(default = "zero")]
    pub phi: DataSource,
    #[serde(default)]
    pub declared_jumps: Vec<f64>,
    #[serde(default)]
    pub domain: DomainSpec,
    #[serde(default)]
    pub data_coordinate: DataCoordinate,
    #[serde(default = "default_route")]
    pub route: String,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub verify: VerifySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nullspace: Option<NullspaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hmeasure: Option<HmeasureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_check: Option<MapCheckSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Boundary data: an expression, piecewise arcs, or the same field of a
/// builtin example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    Expr(Expr),
    Piecewise(Vec<ArcPiece>),
    Builtin(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: String,
    #[serde(default)]
    pub params: Value,
}

impl Default for DomainSpec {
    fn default() -> Self {
        Self {
            kind: "disk".into(),
            params: Value::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub max_exponent: f64,
    pub growth_probe_gap: f64,
    pub a_degree_multiple: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let c = SolverConfig::default();
        Self {
            max_exponent: c.max_exponent,
            growth_probe_gap: c.growth_probe_gap,
            a_degree_multiple: c.a_degree_multiple,
        }
    }
}

impl From<SolverSpec> for SolverConfig {
    fn from(s: SolverSpec) -> Self {
        SolverConfig {
            max_exponent: s.max_exponent,
            growth_probe_gap: s.growth_probe_gap,
            a_degree_multiple: s.a_degree_multiple,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    L1,
    Linf,
}

/// Residual sequence must not grow by more than `slack` (relative) from
/// one radius to the next; `strict` demands a decrease at every step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonotoneCheck {
    pub metric: Metric,
    #[serde(default)]
    pub slack: f64,
    #[serde(default)]
    pub strict: bool,
}

/// Pass/fail thresholds; absent entries are not checked.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Largest Linf over every radius.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_linf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_linf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_l1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone: Option<MonotoneCheck>,
    /// Largest `|direct - gehring|` over the verification radii.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route_difference: Option<f64>,
    /// Every nontangential probe must declare a principal value.
    pub nt_converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySpec {
    pub radii: Vec<f64>,
    pub exclusion_radius: f64,
    /// Boundary angles at which nontangential limits are probed.
    pub vertices: Vec<f64>,
    pub apertures: Vec<f64>,
    pub offsets: Vec<f64>,
    pub gaps: Vec<f64>,
    pub nt_tolerance: f64,
    /// Random interior points of the domain at which the solution is
    /// reported (drawn with the run seed).
    pub sample_points: usize,
    pub thresholds: Thresholds,
}

impl Default for VerifySpec {
    fn default() -> Self {
        Self {
            radii: vec![0.9, 0.99, 0.999],
            exclusion_radius: 0.1,
            vertices: Vec::new(),
            apertures: vec![PI / 8.0, PI / 4.0],
            offsets: vec![-0.5, 0.0, 0.5],
            gaps: (1..=5).map(|k| 2f64.powi(-4 * k)).collect(),
            nt_tolerance: 1e-4,
            sample_points: 0,
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NullspaceSpec {
    pub anchors: Vec<f64>,
    /// First set is the reference; the others are compared against it.
    pub coefficient_sets: Vec<Vec<f64>>,
    #[serde(default = "half")]
    pub gram_radius: f64,
    #[serde(default = "gram_samples")]
    pub gram_samples: usize,
    #[serde(default = "rank_tolerance")]
    pub rank_tolerance: f64,
    /// Exclusion radius around each anchor in residual checks.
    #[serde(default = "anchor_exclusion")]
    pub anchor_exclusion: f64,
    /// Vertices at which the projected solution difference is probed.
    #[serde(default)]
    pub probe_vertices: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difference_nt_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HmeasureSpec {
    pub arcs: Vec<BoundaryArc>,
    pub z0: [f64; 2],
    #[serde(default = "oracle_panels")]
    pub oracle_panels: usize,
    #[serde(default = "oracle_tolerance")]
    pub oracle_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapCheckSpec {
    pub samples: usize,
    pub max_radius: f64,
    pub round_trip_tolerance: f64,
}

impl Default for MapCheckSpec {
    fn default() -> Self {
        Self {
            samples: 100,
            max_radius: 0.95,
            round_trip_tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// File name stem; defaults to the problem name.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
    /// Output directory; `--out` takes precedence.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

fn one() -> DataSource {
    DataSource::Expr(Expr::constant(1.0, 0.0))
}

fn zero() -> DataSource {
    DataSource::Expr(Expr::constant(0.0, 0.0))
}

fn default_route() -> String {
    "direct".into()
}

fn half() -> f64 {
    0.5
}

fn gram_samples() -> usize {
    512
}

fn rank_tolerance() -> f64 {
    1e-6
}

fn anchor_exclusion() -> f64 {
    0.1
}

fn oracle_panels() -> usize {
    4000
}

fn oracle_tolerance() -> f64 {
    1e-6
}

impl ProblemFile {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let p: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::schema(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn stem(&self) -> &str {
        self.output.stem.as_deref().unwrap_or(&self.name)
    }

    /// Checks that do not need the domain map.
    pub fn validate(&self) -> CliResult<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::schema(format!(
                "schema_version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.name.is_empty()
            || !self
                .stem()
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
        {
            return Err(CliError::schema("name/stem must be non-empty and use [A-Za-z0-9-_.]"));
        }
        CircleGrid::new(self.n).map_err(|e| CliError::schema(format!("n: {e}")))?;
        let angle = |what: &str, xs: &[f64]| -> CliResult<()> {
            match xs.iter().find(|&&x| !(0.0..TAU).contains(&x)) {
                Some(x) => Err(CliError::schema(format!("{what}: {x} outside [0, 2 pi)"))),
                None => Ok(()),
            }
        };
        if self.data_coordinate == DataCoordinate::DiskAngle {
            angle("declared_jumps", &self.declared_jumps)?;
        } else if self.declared_jumps.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(CliError::schema("declared_jumps: arc lengths must be finite and >= 0"));
        }
        let v = &self.verify;
        angle("verify.vertices", &v.vertices)?;
        if v.radii.is_empty() || v.radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(CliError::schema("verify.radii: need at least one radius in (0, 1)"));
        }
        if !(v.exclusion_radius >= 0.0) {
            return Err(CliError::schema("verify.exclusion_radius must be >= 0"));
        }
        if let Some(ns) = &self.nullspace {
            angle("nullspace.anchors", &ns.anchors)?;
            angle("nullspace.probe_vertices", &ns.probe_vertices)?;
            if ns.coefficient_sets.is_empty() || ns.coefficient_sets.iter().any(|s| s.len() != ns.anchors.len()) {
                return Err(CliError::schema(
                    "nullspace.coefficient_sets: need at least one set, each with one coefficient per anchor",
                ));
            }
        }
        if let Some(hm) = &self.hmeasure {
            if hm.oracle_panels == 0 || hm.oracle_panels % 2 == 1 {
                return Err(CliError::schema("hmeasure.oracle_panels must be positive and even"));
            }
        }
        Ok(())
    }

    /// Resolves builtin references in `lambda` and `phi`.
    pub fn data_specs(&self) -> CliResult<(DataSpec, DataSpec)> {
        Ok((
            resolve(&self.lambda, |p| &p.lambda, 0)?,
            resolve(&self.phi, |p| &p.phi, 0)?,
        ))
    }
}

fn resolve(src: &DataSource, field: fn(&ProblemFile) -> &DataSource, depth: usize) -> CliResult<DataSpec> {
    match src {
        DataSource::Expr(e) => Ok(DataSpec::Expr(e.clone())),
        DataSource::Piecewise(p) => Ok(DataSpec::Piecewise(p.clone())),
        DataSource::Builtin(name) => {
            if depth > 4 {
                return Err(CliError::schema(format!(
                    "builtin reference chain through '{name}' is too deep"
                )));
            }
            let other = builtins::load(name)?;
            resolve(field(&other), field, depth + 1)
        }
    }
}
